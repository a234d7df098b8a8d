#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "toposkit/psh.hpp"

namespace toposkit {

// Every presheaf on `base` is a quotient of a coproduct of representables.
// Picks `pieces` random representables, glues `merges` random element pairs and
// closes the relation under the action. Returns nullopt if a set would exceed
// `max_size`.
std::optional<Presheaf> random_presheaf(const CategoryPtr& base, std::mt19937_64& rng,
                                        int max_size, int pieces = 2, int merges = 1);

// All presheaves with every set of size <= max_size, in lexicographic order of
// (sizes, action tables). Results are labelled, not up to isomorphism.
void for_each_presheaf(const CategoryPtr& base, int max_size,
                       const std::function<bool(const Presheaf&)>& visit);
std::vector<Presheaf> enumerate_presheaves(const CategoryPtr& base, int max_size);
// Keeps the first representative of each isomorphism class.
std::vector<Presheaf> up_to_iso(std::vector<Presheaf> list);

// Deterministic test corpus: initial, terminal, constants 2..max, the
// representables, coproducts of representable pairs, subobjects of the
// representables and `random_count` seeded random quotients, all restricted to
// sets of size <= max_size and without exact duplicates.
std::vector<PresheafPtr> standard_corpus(const CategoryPtr& base, int max_size = 4,
                                         int random_count = 6, std::uint64_t seed = 1);

}  // namespace toposkit
