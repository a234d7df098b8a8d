#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "toposkit/psh.hpp"
#include "toposkit/sites.hpp"

namespace toposkit {

// (X, x : 1 -> X, r : X -> X), the data a natural numbers object is initial among.
struct RecursionTriple {
  std::string name;
  PresheafPtr object;
  PresheafMap point;
  PresheafMap step;
};

struct NnoCandidate {
  std::string name;
  PresheafPtr object;
  PresheafMap zero;
  PresheafMap succ;
};

// A finite window onto a presheaf or sheaf topos. With a topology, every
// object must be a sheaf and the initial object is the sheafified empty presheaf.
struct ToposCorpus {
  std::string name;
  CategoryPtr base;
  std::optional<GrothendieckTopology> topology;
  std::vector<PresheafPtr> objects;
  std::vector<RecursionTriple> triples;
  std::vector<NnoCandidate> candidates;

  PresheafPtr terminal() const;
  PresheafPtr initial() const;
};

// Throws MalformedInput when an object lives on another base, is not a sheaf
// for the topology, or a triple or candidate is ill-typed.
void validate(const ToposCorpus& t);

// Presheaf corpus: every presheaf with sets of size <= max_size on a
// one-object or small base, up to iso, with 0 and 1 first.
ToposCorpus full_corpus(const CategoryPtr& base, int max_size, std::string name = {});
ToposCorpus presheaf_corpus(const CategoryPtr& base, std::vector<PresheafPtr> objects, std::string name = {});
// Sheafifies the given presheaves (dropping duplicates) and adds 0 and 1 of the sheaf topos.
ToposCorpus sheaf_corpus(const GrothendieckTopology& t, const std::vector<PresheafPtr>& presheaves,
                         std::string name = {});

// Test triples on constant presheaves: a chain 0 -> 1 -> ... -> n-1 that stops
// at its end (n > every |N(a)| refutes any finite candidate), the 2- and 3-cycles,
// (2, 0, swap) and (2, 0, constant 1).
std::vector<RecursionTriple> recursion_triples(const CategoryPtr& base, int chain_length);

enum class Verdict { Pass, Fail, Refuted, ConsistentUpToCorpus };
std::string to_string(Verdict v);

struct AuditCertificate {
  std::string audit;  // well-pointed, choice, nno, global
  Verdict verdict = Verdict::Pass;
  std::uint64_t corpus_hash = 0;
  std::string subject;            // candidate name for nno
  std::string summary;            // witness in words
  std::vector<std::size_t> objects;  // corpus indices of the witness objects
  std::vector<Components> maps;      // witness maps
  bool degenerate = false;           // initial = terminal
  std::optional<std::size_t> triple; // refuting triple
  std::size_t solutions = 0;         // maps found for the refuting triple
  std::size_t checked = 0;           // instances examined
  std::vector<std::size_t> counts;   // global elements per corpus object

  std::string to_text() const;
};

// 64-bit FNV-1a over sizes, actions, covers and triples.
std::uint64_t corpus_hash(const ToposCorpus& t);

std::vector<PresheafMap> global_elements(const Presheaf& x);

AuditCertificate check_well_pointed(const ToposCorpus& t);
AuditCertificate check_choice(const ToposCorpus& t);
AuditCertificate check_nno_candidate(const ToposCorpus& t, const NnoCandidate& n);
AuditCertificate count_global_elements(const ToposCorpus& t);

// Epi in the topos of the corpus: pointwise surjective, or locally surjective
// for a topology.
bool is_epi_in(const ToposCorpus& t, const PresheafMap& h);

// Recomputes the certificate's claim from the corpus alone.
bool recheck(const AuditCertificate& c, const ToposCorpus& t);
// For nno certificates of a candidate not listed in the corpus.
bool recheck(const AuditCertificate& c, const ToposCorpus& t, const NnoCandidate& n);

}  // namespace toposkit
