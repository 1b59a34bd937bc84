#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#ifndef ICPS_FIXTURE_DIR
#error "ICPS_FIXTURE_DIR must be defined"
#endif
#ifndef ICPS_SCRIPT_DIR
#error "ICPS_SCRIPT_DIR must be defined"
#endif

namespace icps::testing {

inline std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string fixture_path(const std::string& name) { return std::string(ICPS_FIXTURE_DIR) + "/" + name; }
inline std::string script_path(const std::string& name) { return std::string(ICPS_SCRIPT_DIR) + "/" + name; }

inline std::string fixture(const std::string& name) { return read_text(fixture_path(name)); }
inline std::string script(const std::string& name) { return read_text(script_path(name)); }

}  // namespace icps::testing
