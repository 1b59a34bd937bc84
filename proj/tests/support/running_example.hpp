#pragma once

// The running example loaded through the interpreter, shared by several tests.

#include <stdexcept>

#include "icps/interpreter.hpp"
#include "support/fixtures.hpp"

namespace icps::testing {

inline Interpreter& running_example() {
  static Interpreter in = [] {
    Interpreter i;
    auto r = i.run(script("running_example.icps"));
    if (!r.ok()) throw std::runtime_error("running example failed: " + r.diagnostics.front().message);
    return i;
  }();
  return in;
}

inline const Value& binding(const std::string& name) { return running_example().lookup(name); }

}  // namespace icps::testing
