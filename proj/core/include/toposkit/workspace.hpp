#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "toposkit/error.hpp"
#include "toposkit/etcs.hpp"
#include "toposkit/fincat.hpp"
#include "toposkit/geom.hpp"
#include "toposkit/internal.hpp"
#include "toposkit/psh.hpp"
#include "toposkit/sites.hpp"
#include "toposkit/spaces.hpp"

namespace toposkit {

// MalformedInput with a source position; what() reads "file:line: message".
class ParseError : public MalformedInput {
 public:
  ParseError(std::string file, int line, const std::string& message);
  const std::string& file() const { return file_; }
  int line() const { return line_; }
  const std::string& message() const { return message_; }

 private:
  std::string file_;
  int line_;
  std::string message_;
};

struct SpaceMap {
  std::string source;  // space names
  std::string target;
  std::vector<int> points;
};

enum class ArtifactKind {
  Category, Presheaf, PresheafMap, Topology, Space, SpaceMap, Bundle, Functor, Model, Group, Ring, Corpus
};
std::string to_string(ArtifactKind k);

struct Artifact {
  ArtifactKind kind;
  std::string name;
  std::string file;
  int line = 0;
};

struct SourceFile {
  std::string path;
  std::uint64_t hash = 0;  // FNV-1a of the content
};

// Named artifacts from line-oriented files. Every block starts with a header
// keyword and runs to the next header; references must name earlier
// artifacts. See the README for the grammar.
class Workspace {
 public:
  // Loads a file and everything it includes; include paths are relative to
  // the including file. A file is loaded once.
  void load_file(const std::filesystem::path& path);
  void load_text(const std::string& text, const std::string& origin = "<text>",
                 const std::filesystem::path& directory = {});

  const std::vector<Artifact>& artifacts() const { return artifacts_; }
  const std::vector<SourceFile>& files() const { return files_; }
  bool has(ArtifactKind kind, const std::string& name) const;
  // First artifact of a kind, in load order.
  const Artifact* first(ArtifactKind kind) const;

  // Lookups throw MalformedInput naming the missing artifact. Besides
  // declared names, categories accept Open(<space>) and topologies accept
  // canonical(<space>), trivial(<category>) and largest(<category>).
  CategoryPtr category(const std::string& name) const;
  PresheafPtr presheaf(const std::string& name) const;
  const PresheafMap& presheaf_map(const std::string& name) const;
  const GrothendieckTopology& topology(const std::string& name) const;
  const FinSpace& space(const std::string& name) const;
  const SpaceMap& space_map(const std::string& name) const;
  const Bundle& bundle(const std::string& name) const;
  const FinFunctor& functor(const std::string& name) const;
  const PresheafValuedFunctor& model(const std::string& name) const;
  const InternalGroup& group(const std::string& name) const;
  const InternalRing& ring(const std::string& name) const;
  const ToposCorpus& corpus(const std::string& name) const;

  // Cached per category.
  OmegaPtr omega(const CategoryPtr& c) const;

 private:
  struct Line {
    int number = 0;
    std::vector<std::string> tokens;
  };
  struct Block {
    std::string file;
    std::filesystem::path directory;
    Line header;
    std::vector<Line> body;
  };

  void build(const Block& b);
  void add(ArtifactKind kind, const std::string& name, const Block& b);
  std::vector<std::filesystem::path> loaded_;

  std::vector<Artifact> artifacts_;
  std::vector<SourceFile> files_;
  mutable std::map<std::string, CategoryPtr> categories_;
  std::map<std::string, PresheafPtr> presheaves_;
  std::map<std::string, PresheafMap> maps_;
  mutable std::map<std::string, GrothendieckTopology> topologies_;
  std::map<std::string, FinSpace> spaces_;
  std::map<std::string, SpaceMap> space_maps_;
  std::map<std::string, Bundle> bundles_;
  std::map<std::string, FinFunctor> functors_;
  std::map<std::string, PresheafValuedFunctor> models_;
  std::map<std::string, InternalGroup> groups_;
  std::map<std::string, InternalRing> rings_;
  std::map<std::string, ToposCorpus> corpora_;
  mutable std::vector<std::pair<CategoryPtr, OmegaPtr>> omegas_;

  friend class BlockBuilder;
};

Workspace parse_workspace(const std::vector<std::filesystem::path>& paths);

std::uint64_t fnv1a(std::string_view bytes);

}  // namespace toposkit
