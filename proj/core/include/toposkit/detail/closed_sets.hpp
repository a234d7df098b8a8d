#pragma once

#include <functional>
#include <vector>

#include "toposkit/error.hpp"

namespace toposkit::detail {

// Enumerates the subsets of {0..n-1} closed under `implies` (v in S forces every
// w in implies[v] into S). Each search node costs one budget tick; the search
// never backtracks out of a dead end, so the work is linear in the output.
inline void for_each_closed_set(int n, const std::vector<std::vector<int>>& implies,
                                Budget& budget,
                                const std::function<void(const std::vector<signed char>&)>& visit) {
  std::vector<std::vector<int>> implied_by(n);
  for (int v = 0; v < n; ++v) {
    for (int w : implies[v]) implied_by[w].push_back(v);
  }
  std::vector<signed char> state(n, -1);
  std::vector<int> trail;
  auto spread = [&](int v, signed char value) {
    const auto& edges = value ? implies : implied_by;
    std::vector<int> stack{v};
    state[v] = value;
    trail.push_back(v);
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int w : edges[u]) {
        if (state[w] < 0) {
          state[w] = value;
          trail.push_back(w);
          stack.push_back(w);
        }
      }
    }
  };
  std::function<void(int)> search = [&](int pos) {
    while (pos < n && state[pos] >= 0) ++pos;
    budget.tick();
    if (pos == n) {
      visit(state);
      return;
    }
    for (const signed char value : {0, 1}) {
      const std::size_t mark = trail.size();
      spread(pos, value);
      search(pos + 1);
      while (trail.size() > mark) {
        state[trail.back()] = -1;
        trail.pop_back();
      }
    }
  };
  search(0);
}

}  // namespace toposkit::detail
