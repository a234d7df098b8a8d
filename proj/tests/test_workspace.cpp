#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "support.hpp"
#include "toposkit/error.hpp"

using namespace toposkit;

namespace {

std::string error_of(const std::string& text) {
  Workspace w;
  try {
    w.load_text(text, "inline.fw", TOPOSKIT_FIXTURES);
  } catch (const ParseError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Workspace, SingleCategory) {
  auto w = load("terminal.fc");
  ASSERT_EQ(w.artifacts().size(), 1u);
  EXPECT_EQ(w.artifacts()[0].kind, ArtifactKind::Category);
  EXPECT_EQ(w.category("terminal")->object_count(), 1);
}

TEST(Workspace, UnknownCategoryIsNamed) {
  const auto e = error_of("presheaf p over nowhere\nset x = {a}\n");
  EXPECT_NE(e.find("inline.fw:1:"), std::string::npos) << e;
  EXPECT_NE(e.find("nowhere"), std::string::npos) << e;
}

TEST(Workspace, DemoLoads) {
  auto w = load("demo.fw");
  // the workspace file itself plus three included files
  EXPECT_EQ(w.files().size(), 4u);
  EXPECT_EQ(w.artifacts().size(), w.files().size() - 1);
  EXPECT_TRUE(w.has(ArtifactKind::Category, "arrow"));
  EXPECT_TRUE(w.has(ArtifactKind::Space, "sierpinski"));
  EXPECT_TRUE(w.has(ArtifactKind::Category, "z2"));
}

TEST(Workspace, AllFixturesLoad) {
  for (const auto& entry : std::filesystem::directory_iterator(TOPOSKIT_FIXTURES)) {
    Workspace w;
    EXPECT_NO_THROW(w.load_file(entry.path())) << entry.path();
    EXPECT_FALSE(w.artifacts().empty()) << entry.path();
  }
}

TEST(Workspace, IncludesLoadOnce) {
  Workspace w;
  w.load_file(fixture("demo.fw"));
  w.load_file(fixture("arrow.fc"));
  EXPECT_EQ(w.files().size(), 4u);
}

TEST(Workspace, Errors) {
  EXPECT_NE(error_of("category c\nobject a\nmorphism f : a -> b\n").find("inline.fw:3:"), std::string::npos);
  EXPECT_NE(error_of("category c\nobject a\nmorphism f : a -> a\n").find("missing composite"), std::string::npos);
  EXPECT_NE(error_of("widget w\n").find("inline.fw:1:"), std::string::npos);
  EXPECT_NE(error_of("set x = {a}\n").find("inline.fw:1:"), std::string::npos);
  EXPECT_FALSE(error_of("include sierpinski.fs\nspace-map f : sierpinski -> sierpinski\nsend 0 -> 1\nsend 1 -> 0\n").empty());
  EXPECT_FALSE(error_of("include arrow.fc\npresheaf p over arrow\nset a = {x}\n").empty());
  EXPECT_FALSE(error_of("include terminal.fc\ncategory terminal = terminal\n").empty());
}

TEST(Workspace, ParseErrorCarriesPosition) {
  Workspace w;
  try {
    w.load_text("category c\nobject a\ncompose x . y = z\n", "pos.fc");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.file(), "pos.fc");
    EXPECT_EQ(e.line(), 3);
    EXPECT_TRUE(dynamic_cast<const MalformedInput*>(&e) != nullptr);
  }
}

TEST(Workspace, LazyNames) {
  auto w = load("bad.fp");
  EXPECT_EQ(w.category("Open(sierpinski)")->object_count(), 3);
  EXPECT_EQ(w.topology("canonical(sierpinski)").base()->object_count(), 3);
  auto v = load("arrow.fc");
  EXPECT_EQ(v.topology("trivial(arrow)").covers(1).size(), 1u);
  EXPECT_EQ(v.topology("largest(arrow)").covers(1).size(), 3u);
}

TEST(Workspace, Fnv1a) {
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cull);
}

TEST(Workspace, ParseWorkspaceCollectsFiles) {
  auto w = parse_workspace({fixture("arrow.fc"), fixture("z2.fc")});
  EXPECT_EQ(w.artifacts().size(), 2u);
}
