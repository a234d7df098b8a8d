#pragma once

#include <string>

#include "toposkit/workspace.hpp"

inline std::string fixture(const std::string& name) { return std::string(TOPOSKIT_FIXTURES) + "/" + name; }

inline toposkit::Workspace load(const std::string& name) {
  toposkit::Workspace w;
  w.load_file(fixture(name));
  return w;
}
