#pragma once

#include <string>
#include <vector>

#include "toposkit/fincat.hpp"

// Standard small categories used as bases, probe shapes and fixtures.
namespace toposkit::catalog {

CategoryPtr terminal_category();
CategoryPtr empty_category();
// a --u--> b
CategoryPtr walking_arrow();
// 0 < 1 < ... < n-1, morphisms named i_j for i < j.
CategoryPtr chain(int n);
CategoryPtr discrete(int n, const std::string& name = {});
// Poset on the named elements; leq[i][j] means i <= j.
CategoryPtr poset(const std::string& name, const std::vector<std::string>& elements,
                  const std::vector<std::vector<bool>>& leq);
// The 2x2 lattice 00 <= 01, 10 <= 11: a commutative square with all finite limits.
CategoryPtr commutative_square();
// One-object category on a finite group given by its multiplication table,
// element 0 being the unit. Morphism g . h is table[g][h].
CategoryPtr group(const std::string& name, const std::vector<std::vector<int>>& table);
CategoryPtr cyclic_group(int n);
// Shapes for limits: 0 ==s,t==> 1 and 0 --l--> 2 <--r-- 1.
CategoryPtr parallel_pair();
CategoryPtr cospan();

// Multiplication table of S3 (permutations of {0,1,2} in lexicographic order),
// used as an ordinary finite group.
std::vector<std::vector<int>> s3_table();

}  // namespace toposkit::catalog
