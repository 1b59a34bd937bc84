#pragma once

// Surface language: tokens, commands, and the parser.

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "icps/common.hpp"
#include "icps/domain.hpp"
#include "icps/process.hpp"
#include "icps/protocol.hpp"
#include "icps/session.hpp"

namespace icps {

enum class TokenKind { Ident, Number, String, Symbol, Eof };

struct Token {
  TokenKind kind = TokenKind::Eof;
  std::string text;
  SourcePos pos;
  bool line_start = false;  // first token on its line
};

/// '#' comments and whitespace are skipped. Identifiers may be dot-qualified
/// (`t.tank_mass`) as long as no whitespace separates the segments.
/// Throws icps::Error on a character that starts no token.
std::vector<Token> tokenize(std::string_view text);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind {
    Name,          // name
    Index,         // name[k], 1-based
    Domain,        // domain { ... }
    Repository,    // repository <domain> { ... }
    Process,       // process <domain> { ... }
    Local,         // local { ... }
    Global,        // global <protocol>
    Translate,     // translate e
    Traverse,      // traverse <state> e
    Configure,     // configure tree repo controller actuator
    Compose,       // compose e
    Project,       // project e
    RemoveDevice,  // remove_device e device
  };

  Kind kind = Kind::Name;
  SourcePos pos;
  std::string name;   // Name/Index/Traverse root/RemoveDevice device/Configure controller
  std::string extra;  // Configure actuator
  std::size_t index = 0;
  std::vector<ExprPtr> args;

  std::shared_ptr<const IndustrialDomain> domain;
  std::shared_ptr<const Repository> repository;
  std::shared_ptr<const ProcessDecl> process;
  std::shared_ptr<const LocalConfiguration> local;
  std::optional<GlobalProtocol> global;
};

struct Command {
  enum class Kind { Bind, Eval, Show, Mermaid };
  Kind kind = Kind::Eval;
  std::string name;  // Bind target
  ExprPtr expr;
  std::string path;  // Mermaid output file
  SourcePos pos;
};

struct ParseResult {
  std::vector<Command> commands;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return diagnostics.empty(); }
};

/// Parses a whole script. Syntax errors are collected; the parser resumes at
/// the next line that can start a command.
ParseResult parse(std::string_view text);

// Single-construct entry points; each throws icps::Error on any diagnostic
// or on trailing input.
LocalProtocol parse_local(std::string_view text);
GlobalProtocol parse_global(std::string_view text);
LocalConfiguration parse_local_configuration(std::string_view text);
IndustrialDomain parse_domain(std::string_view text);
Repository parse_repository(std::string_view text);
ProcessDecl parse_process(std::string_view text);

// Printers producing text the parser reads back.
std::string print_domain(const IndustrialDomain& d);
std::string print_repository(const Repository& r);
std::string print_process(const ProcessDecl& p);
std::string print_global(const GlobalProtocol& g);  // `global ...`

}  // namespace icps
