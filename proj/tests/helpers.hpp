#pragma once

#include <fstream>
#include <functional>
#include <optional>
#include <string>

#include "bloch/error.hpp"
#include "bloch/triang.hpp"

namespace testing_helpers {

// The error code thrown by f, or nullopt if it returns normally.
inline std::optional<bloch::Errc> code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const bloch::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline std::string fixture_path(const std::string& name) { return std::string(BLOCH_FIXTURES) + "/" + name; }

inline bloch::Triangulation load_fixture(const std::string& name, long bits) {
  std::ifstream in(fixture_path(name));
  if (!in) throw std::runtime_error("missing fixture " + name);
  return bloch::parse_triangulation(in, bits);
}

}  // namespace testing_helpers
