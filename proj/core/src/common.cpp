#include "icps/common.hpp"

#include <cctype>
#include <sstream>

namespace icps {

std::string_view severity_name(Severity s) {
  switch (s) {
    case Severity::Error:
      return "error";
    case Severity::Warning:
      return "warning";
    case Severity::Note:
      return "note";
  }
  return "error";
}

std::string format_diagnostic(const Diagnostic& d, std::string_view file) {
  std::ostringstream os;
  os << file << ':' << d.pos.line << ':' << d.pos.col << ": " << severity_name(d.severity) << ": "
     << d.message;
  return os.str();
}

Diagnostic make_error(std::string code, std::string message, SourcePos pos) {
  return Diagnostic{pos, Severity::Error, std::move(code), std::move(message)};
}

namespace {

std::string join_messages(const std::vector<Diagnostic>& ds) {
  std::string out;
  for (const auto& d : ds) {
    if (!out.empty()) out += "; ";
    out += d.message;
  }
  return out;
}

}  // namespace

Error::Error(Diagnostic d) : Error(std::vector<Diagnostic>{std::move(d)}) {}

Error::Error(std::vector<Diagnostic> ds)
    : std::runtime_error(join_messages(ds)), diags_(std::move(ds)) {
  if (diags_.empty()) diags_.push_back(make_error("internal", "unspecified error"));
}

void fail(std::string code, std::string message, SourcePos pos) {
  throw Error(make_error(std::move(code), std::move(message), pos));
}

bool is_simple_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto c0 = static_cast<unsigned char>(s.front());
  if (!(std::isalpha(c0) || c0 == '_')) return false;
  for (char ch : s) {
    auto c = static_cast<unsigned char>(ch);
    if (!(std::isalnum(c) || c == '_')) return false;
  }
  return true;
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  std::size_t start = 0;
  while (true) {
    auto dot = s.find('.', start);
    auto seg = s.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
    if (!is_simple_identifier(seg)) return false;
    if (dot == std::string_view::npos) return true;
    start = dot + 1;
  }
}

}  // namespace icps
