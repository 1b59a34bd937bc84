#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace icps {

/// Line/column of a syntax element, 1-based. Zero means "not from source".
///
/// Positions are metadata: two values that differ only in where they were
/// parsed compare equal, so structural equality of parsed values ignores them.
struct SourcePos {
  int line = 0;
  int col = 0;

  bool known() const { return line > 0; }
  friend bool operator==(const SourcePos&, const SourcePos&) { return true; }
};

enum class Severity { Error, Warning, Note };

struct Diagnostic {
  SourcePos pos;
  Severity severity = Severity::Error;
  std::string code;  // short machine-readable tag, e.g. "unknown-class"
  std::string message;
};

std::string_view severity_name(Severity s);

/// `file:line:col: severity: message`
std::string format_diagnostic(const Diagnostic& d, std::string_view file);

Diagnostic make_error(std::string code, std::string message, SourcePos pos = {});

/// Raised by operations that fail with one or more diagnostics.
class Error : public std::runtime_error {
 public:
  explicit Error(Diagnostic d);
  explicit Error(std::vector<Diagnostic> ds);

  const std::vector<Diagnostic>& diagnostics() const { return diags_; }
  const std::string& code() const { return diags_.front().code; }

 private:
  std::vector<Diagnostic> diags_;
};

[[noreturn]] void fail(std::string code, std::string message, SourcePos pos = {});

/// Value-or-error for operations whose failure is an ordinary answer
/// (composition, projection), as opposed to misuse.
template <class T, class E>
class Result {
 public:
  Result(T value) : v_(std::in_place_index<0>, std::move(value)) {}
  Result(E error) : v_(std::in_place_index<1>, std::move(error)) {}

  bool ok() const { return v_.index() == 0; }
  explicit operator bool() const { return ok(); }

  const T& value() const& { return std::get<0>(v_); }
  T&& value() && { return std::get<0>(std::move(v_)); }
  const E& error() const { return std::get<1>(v_); }

 private:
  std::variant<T, E> v_;
};

/// Letters/digits/underscore segments joined by '.', each segment starting
/// with a letter or underscore.
bool is_identifier(std::string_view s);
bool is_simple_identifier(std::string_view s);

inline void hash_combine(std::size_t& seed, std::size_t v) {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

}  // namespace icps
