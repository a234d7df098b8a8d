#include "toposkit/catalog.hpp"

#include <algorithm>
#include <array>

#include "toposkit/error.hpp"

namespace toposkit::catalog {

namespace {

// Builds a poset category where every pair i <= j has exactly one morphism.
CategoryData poset_data(const std::string& name, const std::vector<std::string>& elements,
                        const std::vector<std::vector<bool>>& leq) {
  const int n = static_cast<int>(elements.size());
  CategoryData d;
  d.name = name;
  d.objects = elements;
  d.identities.assign(n, -1);
  std::vector<int> arrow(static_cast<std::size_t>(n) * n, -1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!leq[i][j]) continue;
      arrow[i * n + j] = static_cast<int>(d.morphisms.size());
      if (i == j) {
        d.identities[i] = arrow[i * n + j];
        d.morphisms.push_back({"id_" + elements[i], i, i});
      } else {
        d.morphisms.push_back({elements[i] + "_" + elements[j], i, j});
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        if (arrow[i * n + j] >= 0 && arrow[j * n + k] >= 0) {
          const int h = arrow[i * n + k];
          if (h < 0) throw MalformedInput("poset '" + name + "': order is not transitive");
          d.composites.push_back({arrow[j * n + k], arrow[i * n + j], h});
        }
      }
    }
  }
  return d;
}

}  // namespace

CategoryPtr terminal_category() {
  return poset("1", {"*"}, {{true}});
}

CategoryPtr empty_category() {
  CategoryData d;
  d.name = "0";
  return make_category(d);
}

CategoryPtr walking_arrow() {
  CategoryData d;
  d.name = "arrow";
  d.objects = {"a", "b"};
  d.morphisms = {{"id_a", 0, 0}, {"id_b", 1, 1}, {"u", 0, 1}};
  d.identities = {0, 1};
  d.complete_identities();
  return make_category(d);
}

CategoryPtr chain(int n) {
  std::vector<std::string> names;
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n));
  for (int i = 0; i < n; ++i) {
    names.push_back(std::to_string(i));
    for (int j = i; j < n; ++j) leq[i][j] = true;
  }
  return poset("chain" + std::to_string(n), names, leq);
}

CategoryPtr discrete(int n, const std::string& name) {
  std::vector<std::string> names;
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n));
  for (int i = 0; i < n; ++i) {
    names.push_back("d" + std::to_string(i));
    leq[i][i] = true;
  }
  return poset(name.empty() ? "discrete" + std::to_string(n) : name, names, leq);
}

CategoryPtr poset(const std::string& name, const std::vector<std::string>& elements,
                  const std::vector<std::vector<bool>>& leq) {
  return make_category(poset_data(name, elements, leq));
}

CategoryPtr commutative_square() {
  // 00 <= 01 <= 11 and 00 <= 10 <= 11
  const std::vector<std::string> names = {"00", "01", "10", "11"};
  std::vector<std::vector<bool>> leq(4, std::vector<bool>(4));
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) leq[i][j] = (i & j) == i;
  }
  return poset("square", names, leq);
}

CategoryPtr group(const std::string& name, const std::vector<std::vector<int>>& table) {
  const int n = static_cast<int>(table.size());
  CategoryData d;
  d.name = name;
  d.objects = {"*"};
  d.identities = {0};
  for (int g = 0; g < n; ++g) d.morphisms.push_back({g == 0 ? "e" : "g" + std::to_string(g), 0, 0});
  for (int g = 0; g < n; ++g) {
    for (int h = 0; h < n; ++h) d.composites.push_back({g, h, table[g][h]});
  }
  return make_category(d);
}

CategoryPtr cyclic_group(int n) {
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int g = 0; g < n; ++g) {
    for (int h = 0; h < n; ++h) table[g][h] = (g + h) % n;
  }
  return group("Z" + std::to_string(n), table);
}

CategoryPtr parallel_pair() {
  CategoryData d;
  d.name = "parallel";
  d.objects = {"0", "1"};
  d.morphisms = {{"id_0", 0, 0}, {"id_1", 1, 1}, {"s", 0, 1}, {"t", 0, 1}};
  d.identities = {0, 1};
  d.complete_identities();
  return make_category(d);
}

CategoryPtr cospan() {
  CategoryData d;
  d.name = "cospan";
  d.objects = {"0", "1", "2"};
  d.morphisms = {{"id_0", 0, 0}, {"id_1", 1, 1}, {"id_2", 2, 2}, {"l", 0, 2}, {"r", 1, 2}};
  d.identities = {0, 1, 2};
  d.complete_identities();
  return make_category(d);
}

std::vector<std::vector<int>> s3_table() {
  std::vector<std::array<int, 3>> perms;
  std::array<int, 3> p = {0, 1, 2};
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  auto index = [&](const std::array<int, 3>& q) {
    return static_cast<int>(std::find(perms.begin(), perms.end(), q) - perms.begin());
  };
  std::vector<std::vector<int>> table(6, std::vector<int>(6));
  for (int g = 0; g < 6; ++g) {
    for (int h = 0; h < 6; ++h) {
      std::array<int, 3> gh{};
      for (int i = 0; i < 3; ++i) gh[i] = perms[g][perms[h][i]];
      table[g][h] = index(gh);
    }
  }
  return table;
}

}  // namespace toposkit::catalog
