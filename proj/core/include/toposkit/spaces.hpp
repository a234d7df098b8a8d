#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "toposkit/fincat.hpp"
#include "toposkit/psh.hpp"
#include "toposkit/sites.hpp"

namespace toposkit {

using PointSet = std::uint64_t;

// A finite space on at most 64 points; opens are bitmasks, sorted by
// (cardinality, value), so the empty set comes first and the whole space last.
class FinSpace {
 public:
  // Adds the empty and full sets; throws MalformedInput unless the family is
  // closed under union and intersection.
  FinSpace(std::vector<std::string> points, std::vector<PointSet> opens, std::string name = {});

  const std::string& name() const { return name_; }
  int point_count() const { return static_cast<int>(points_.size()); }
  const std::string& point_name(int p) const { return points_[p]; }
  std::optional<int> find_point(std::string_view name) const;
  PointSet full() const { return point_count() == 64 ? ~PointSet{0} : (PointSet{1} << point_count()) - 1; }

  const std::vector<PointSet>& opens() const { return opens_; }
  int open_count() const { return static_cast<int>(opens_.size()); }
  bool is_open(PointSet s) const;
  int open_index(PointSet s) const;  // -1 if not open
  // Smallest open containing p.
  PointSet neighbourhood(int p) const { return minimal_[p]; }
  PointSet closure(PointSet s) const;
  std::string format(PointSet s) const;

  friend bool operator==(const FinSpace& x, const FinSpace& y) {
    return x.points_.size() == y.points_.size() && x.opens_ == y.opens_;
  }

 private:
  std::string name_;
  std::vector<std::string> points_;
  std::vector<PointSet> opens_;
  std::vector<PointSet> minimal_;
};

FinSpace point_space();
// points 0, 1; opens {}, {1}, {0,1}
FinSpace sierpinski_space();
FinSpace discrete_space(int n);
FinSpace indiscrete_space(int n);
// The Alexandrov space of a preorder: opens are the up-sets. leq[i][j] means i <= j.
FinSpace alexandrov_space(const std::vector<std::vector<bool>>& leq, std::string name = {});
// Every topology on n labelled points, via the specialization preorders.
std::vector<FinSpace> enumerate_spaces(int n);

// Preimage of s under a point map.
PointSet preimage(const std::vector<int>& f, PointSet s);
PointSet image(const std::vector<int>& f, PointSet s);
// First open of Y whose preimage is not open in X, if any.
std::optional<PointSet> discontinuity(const FinSpace& x, const FinSpace& y, const std::vector<int>& f);
inline bool is_continuous(const FinSpace& x, const FinSpace& y, const std::vector<int>& f) {
  return !discontinuity(x, y, f).has_value();
}

// Frames are finite distributive lattices here; arbitrary joins are finite.
class Frame {
 public:
  // Throws MalformedInput unless leq is a partial order with all joins and
  // meets, and meets distribute over joins.
  Frame(std::vector<std::string> names, std::vector<std::vector<bool>> leq);

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int i) const { return names_[i]; }
  bool leq(int i, int j) const { return leq_[i][j]; }
  int join(int i, int j) const { return join_[i][j]; }
  int meet(int i, int j) const { return meet_[i][j]; }
  int bottom() const { return bottom_; }
  int top() const { return top_; }
  const std::vector<std::vector<bool>>& order() const { return leq_; }

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<bool>> leq_;
  std::vector<std::vector<int>> join_;
  std::vector<std::vector<int>> meet_;
  int bottom_ = -1;
  int top_ = -1;
};

Frame two_frame();
Frame chain_frame(int n);

class FrameMap {
 public:
  // Throws MalformedInput unless order, finite joins and finite meets are preserved.
  FrameMap(const Frame& source, const Frame& target, std::vector<int> map);
  int operator()(int i) const { return map_[i]; }
  const std::vector<int>& table() const { return map_; }
  bool injective() const;
  bool surjective(int target_size) const;

 private:
  std::vector<int> map_;
};

std::optional<std::string> frame_map_failure(const Frame& source, const Frame& target,
                                              const std::vector<int>& map);

// A locale map X -> Y is a frame map O(Y) -> O(X); only the direction differs.
struct LocaleMap {
  FrameMap inverse_image;
};

struct OpenFrame {
  Frame frame;
  CategoryPtr category;  // poset Open(X), objects in the order of opens()
};

OpenFrame open_frame(const FinSpace& x);
// Sieves on U cover iff the domains of their members union to U.
GrothendieckTopology canonical_topology(const FinSpace& x, const CategoryPtr& open_category);

// V |-> f^{-1} V as a frame map O(Y) -> O(X). Throws PreconditionFailed with
// the first open whose preimage is not open.
FrameMap open_functor(const FinSpace& x, const FinSpace& y, const std::vector<int>& f);
// The same assignment as a functor Open(Y) -> Open(X).
FinFunctor preimage_functor(const FinSpace& x, const CategoryPtr& open_x, const FinSpace& y,
                            const CategoryPtr& open_y, const std::vector<int>& f);
// For an open embedding f, U |-> f(U) as a functor Open(X) -> Open(Y).
FinFunctor image_functor(const FinSpace& x, const CategoryPtr& open_x, const FinSpace& y,
                         const CategoryPtr& open_y, const std::vector<int>& f);

struct Bundle {
  FinSpace total;
  FinSpace base;
  std::vector<int> projection;

  // Throws MalformedInput if the projection is not continuous.
  Bundle(FinSpace total, FinSpace base, std::vector<int> projection);
};

Bundle identity_bundle(const FinSpace& x);

// F(U) = continuous sections of p over U, as a presheaf on Open(X). Sections
// are listed lexicographically by their values on the points of U.
Presheaf sections_sheaf(const Bundle& b, const CategoryPtr& open_base);

// Germs of F: the total space has a point (x, s) for each x and each element s
// of F(U_x), U_x the smallest neighbourhood of x; basic opens are the sets of
// germs of one section over one open.
struct EtaleSpace {
  Bundle bundle;
  std::vector<std::pair<int, int>> germ;  // total point -> (x, element of F(U_x))
};

EtaleSpace etale_space(const FinSpace& x, const Presheaf& f);

bool is_etale(const Bundle& b);
// First total point without a neighbourhood mapped homeomorphically onto an open.
std::optional<int> etale_failure(const Bundle& b);

// A homeomorphism between total spaces commuting with the projections.
std::optional<std::vector<int>> find_bundle_iso(const Bundle& x, const Bundle& y);

struct RecoveredLocale {
  Frame frame;                       // subterminal sheaves ordered by inclusion
  std::vector<Subobject> subterminals;
  std::vector<int> iso;              // open index -> subterminal index
};

// Sub(1) in Sh(X) as a frame, with the iso from Open(X).
RecoveredLocale recover_locale(const FinSpace& x);

struct SobrietyReport {
  bool sober = true;
  // irreducible closed sets and their generic points
  std::vector<std::pair<PointSet, PointSet>> irreducible;
  std::optional<PointSet> witness;  // an irreducible closed set with 0 or >= 2 generic points
};

SobrietyReport check_sober(const FinSpace& x);
inline bool is_sober(const FinSpace& x) { return check_sober(x).sober; }
bool is_t0(const FinSpace& x);

// Frame maps L -> 2, each given by the element a with p^{-1}(top) = up(a).
struct FramePoint {
  int generator;
  std::vector<int> map;
};

std::vector<FramePoint> frame_points(const Frame& l);
struct SpatialReport {
  bool spatial = true;
  std::optional<std::pair<int, int>> unseparated;
};
SpatialReport check_spatial(const Frame& l);
inline bool is_spatial(const Frame& l) { return check_spatial(l).spatial; }

// An order isomorphism between frames, if any.
std::optional<std::vector<int>> find_frame_iso(const Frame& x, const Frame& y);

}  // namespace toposkit
