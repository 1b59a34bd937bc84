#include "icps/syntax.hpp"

#include <cctype>
#include <sstream>

namespace icps {

// ---------------------------------------------------------------------------
// Lexer

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

}  // namespace

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1;
  int col = 1;
  int last_line = 0;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < s.size(); ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto emit = [&](TokenKind kind, std::string text, SourcePos pos) {
    Token t{kind, std::move(text), pos, pos.line != last_line};
    last_line = pos.line;
    out.push_back(std::move(t));
  };

  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    SourcePos pos{line, col};
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < s.size() && ident_char(s[j])) ++j;
      while (j + 1 < s.size() && s[j] == '.' && ident_start(s[j + 1])) {
        ++j;
        while (j < s.size() && ident_char(s[j])) ++j;
      }
      std::string text(s.substr(i, j - i));
      advance(j - i);
      emit(TokenKind::Ident, std::move(text), pos);
      continue;
    }
    if (digit(c)) {
      std::size_t j = i;
      while (j < s.size() && digit(s[j])) ++j;
      if (j + 1 < s.size() && s[j] == '.' && digit(s[j + 1])) {
        ++j;
        while (j < s.size() && digit(s[j])) ++j;
      }
      std::string text(s.substr(i, j - i));
      advance(j - i);
      emit(TokenKind::Number, std::move(text), pos);
      continue;
    }
    if (c == '"') {
      std::string text;
      advance(1);
      while (i < s.size() && s[i] != '"' && s[i] != '\n') {
        if (s[i] == '\\' && i + 1 < s.size()) advance(1);
        text += s[i];
        advance(1);
      }
      if (i >= s.size() || s[i] != '"')
        throw Error(make_error("syntax", "unterminated string literal", pos));
      advance(1);
      emit(TokenKind::String, std::move(text), pos);
      continue;
    }
    if (s.substr(i, 2) == ":=" || s.substr(i, 2) == "->") {
      std::string text(s.substr(i, 2));
      advance(2);
      emit(TokenKind::Symbol, std::move(text), pos);
      continue;
    }
    static const std::string_view singles = "!?.,:{}()[]=@";
    if (singles.find(c) != std::string_view::npos) {
      advance(1);
      emit(TokenKind::Symbol, std::string(1, c), pos);
      continue;
    }
    throw Error(make_error("syntax", std::string("unexpected character '") + c + "'", pos));
  }
  Token eof{TokenKind::Eof, "", SourcePos{line, col}, true};
  out.push_back(eof);
  return out;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct ParseFailure {
  Diagnostic diag;
};

const char* const kExprKeywords[] = {"domain",  "repository", "process",   "local",
                                     "global",  "translate",  "traverse",  "configure",
                                     "compose", "project",    "remove_device"};

bool is_expr_keyword(const std::string& s) {
  for (const char* k : kExprKeywords)
    if (s == k) return true;
  return false;
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case TokenKind::Eof:
      return "end of input";
    case TokenKind::String:
      return "string \"" + t.text + "\"";
    default:
      return "'" + t.text + "'";
  }
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  std::vector<Diagnostic> diags;

  bool at_end() const { return peek().kind == TokenKind::Eof; }
  const Token& peek(std::size_t k = 0) const {
    return t_[std::min(i_ + k, t_.size() - 1)];
  }
  bool sym(std::string_view s, std::size_t k = 0) const {
    return peek(k).kind == TokenKind::Symbol && peek(k).text == s;
  }
  bool kw(std::string_view s, std::size_t k = 0) const {
    return peek(k).kind == TokenKind::Ident && peek(k).text == s;
  }
  const Token& take() {
    const Token& t = t_[i_];
    if (i_ + 1 < t_.size()) ++i_;
    return t;
  }

  [[noreturn]] void error(const std::string& msg, SourcePos pos) {
    throw ParseFailure{make_error("syntax", msg, pos)};
  }
  [[noreturn]] void expected(const std::string& what) {
    error("expected " + what + ", found " + describe(peek()), peek().pos);
  }

  // A command's arguments never run into a following `name :=` line.
  bool at_binding() const {
    return i_ > 0 && peek().line_start && peek().kind == TokenKind::Ident && sym(":=", 1);
  }
  void no_binding(const std::string& what) {
    if (at_binding()) error("expected " + what + ", found end of line", t_[i_ - 1].pos);
  }

  void expect_sym(std::string_view s) {
    if (!sym(s)) expected("'" + std::string(s) + "'");
    take();
  }
  void expect_kw(std::string_view s) {
    if (!kw(s)) expected("'" + std::string(s) + "'");
    take();
  }
  Token expect_ident(const std::string& what) {
    if (peek().kind != TokenKind::Ident) expected(what);
    return take();
  }
  // A single-segment identifier. A dotted token here is split so that
  // `s1?flow.loop` reads as `s1?flow. loop`.
  Token expect_simple(const std::string& what) {
    if (peek().kind != TokenKind::Ident) expected(what);
    Token& t = t_[i_];
    auto dot = t.text.find('.');
    if (dot != std::string::npos) {
      Token head{TokenKind::Ident, t.text.substr(0, dot), t.pos, t.line_start};
      SourcePos dpos{t.pos.line, t.pos.col + static_cast<int>(dot)};
      Token dtok{TokenKind::Symbol, ".", dpos, false};
      Token rest{TokenKind::Ident, t.text.substr(dot + 1), SourcePos{dpos.line, dpos.col + 1}, false};
      t_[i_] = head;
      t_.insert(t_.begin() + static_cast<std::ptrdiff_t>(i_) + 1, {dtok, rest});
    }
    return take();
  }

  // Converts construction errors (bad identifiers, malformed choices) into
  // positioned syntax diagnostics.
  template <class F>
  auto guarded(SourcePos pos, F&& f) -> decltype(f()) {
    try {
      return f();
    } catch (const Error& e) {
      auto d = e.diagnostics().front();
      d.pos = pos;
      throw ParseFailure{d};
    }
  }

  // -- protocols ------------------------------------------------------------

  LocalProtocol local() {
    const Token head = expect_ident("a local protocol");
    if (head.text == "end") return LocalProtocol::end();
    if (sym("!") || sym("?")) {
      Direction dir = take().text == "!" ? Direction::Send : Direction::Receive;
      Token payload = expect_simple("a message type");
      if (sym(".")) {
        take();
        Action a = guarded(head.pos, [&] {
          return Action{dir, Participant(head.text), MessageType(payload.text)};
        });
        return LocalProtocol::prefix(std::move(a), local());
      }
      if (sym("{")) {
        std::vector<LocalProtocol::Branch> bs;
        do {
          if (!bs.empty()) take();  // 'or'
          expect_sym("{");
          Token label = expect_simple("a choice label");
          expect_sym(":");
          auto cont = local();
          expect_sym("}");
          bs.push_back(guarded(label.pos, [&] {
            return LocalProtocol::Branch{
                Action{dir, Participant(head.text), MessageType(label.text)}, cont};
          }));
        } while (kw("or"));
        return guarded(head.pos, [&] {
          return LocalProtocol::choice(MessageType(payload.text), std::move(bs));
        });
      }
      expected("'.' or '{' after an action");
    }
    if (sym(".")) {
      take();
      auto body = local();
      return guarded(head.pos, [&] { return LocalProtocol::rec(head.text, body); });
    }
    return guarded(head.pos, [&] { return LocalProtocol::var(head.text); });
  }

  GlobalProtocol global() {
    const Token head = expect_ident("a global protocol");
    if (head.text == "end") return GlobalProtocol::end();
    if (sym("->")) {
      take();
      Token to = expect_ident("a receiver");
      expect_sym(":");
      Token payload = expect_simple("a message type");
      if (sym(".")) {
        take();
        auto cont = global();
        return guarded(head.pos, [&] {
          return GlobalProtocol::pass(Participant(head.text), Participant(to.text),
                                      MessageType(payload.text), cont);
        });
      }
      if (sym("{")) {
        std::vector<GlobalProtocol::Branch> bs;
        do {
          if (!bs.empty()) take();
          expect_sym("{");
          Token label = expect_simple("a choice label");
          expect_sym(":");
          auto cont = global();
          expect_sym("}");
          bs.push_back(guarded(label.pos, [&] {
            return GlobalProtocol::Branch{MessageType(label.text), cont};
          }));
        } while (kw("or"));
        return guarded(head.pos, [&] {
          return GlobalProtocol::choice(Participant(head.text), Participant(to.text),
                                        MessageType(payload.text), std::move(bs));
        });
      }
      expected("'.' or '{' after a message pass");
    }
    if (sym(".")) {
      take();
      auto body = global();
      return guarded(head.pos, [&] { return GlobalProtocol::rec(head.text, body); });
    }
    return guarded(head.pos, [&] { return GlobalProtocol::var(head.text); });
  }

  LocalConfiguration local_configuration() {
    expect_kw("local");
    expect_sym("{");
    LocalConfiguration c;
    while (!sym("}")) {
      Token who = expect_ident("a participant");
      expect_sym("=");
      auto t = local();
      auto fl = free_labels(t);
      if (!fl.empty())
        error("label '" + *fl.begin() + "' is not bound by an enclosing loop", who.pos);
      guarded(who.pos, [&] {
        c.bind(Participant(who.text), t);
        return 0;
      });
    }
    take();
    return c;
  }

  GlobalProtocol global_configuration() {
    Token kwd = peek();
    expect_kw("global");
    auto g = global();
    auto fl = free_labels(g);
    if (!fl.empty()) error("label '" + *fl.begin() + "' is not bound by an enclosing loop", kwd.pos);
    return g;
  }

  // -- domain ---------------------------------------------------------------

  IndustrialDomain domain() {
    IndustrialDomain d;
    d.pos = peek().pos;
    expect_kw("domain");
    expect_sym("{");
    while (!sym("}")) {
      if (kw("property")) {
        take();
        do {
          if (sym(",")) take();
          Token n = expect_simple("a property name");
          PropertyDef p{n.text, {}, n.pos};
          if (sym("{")) {
            take();
            do {
              if (sym(",")) take();
              p.labels.push_back(expect_simple("an enumeration label").text);
            } while (sym(","));
            expect_sym("}");
          }
          d.properties.push_back(std::move(p));
        } while (sym(","));
      } else if (kw("model")) {
        take();
        do {
          if (sym(",")) take();
          Token n = expect_simple("an estimator name");
          d.model.push_back(EstimatorDef{n.text, n.pos});
        } while (sym(","));
      } else if (kw("physical") || kw("actuator")) {
        ComponentClass c;
        c.kind = take().text == "actuator" ? ClassKind::Actuator : ClassKind::Physical;
        Token n = expect_simple("a class name");
        c.name = n.text;
        c.pos = n.pos;
        expect_sym("(");
        if (!sym(")")) {
          do {
            if (sym(",")) take();
            c.attributes.push_back(expect_simple("an attribute").text);
          } while (sym(","));
        }
        expect_sym(")");
        if (sym(":")) {
          take();
          do {
            if (sym(",")) take();
            Token a = expect_simple("an attribute");
            expect_sym("->");
            Token b = expect_simple("an attribute");
            c.edges.push_back(AttributeEdge{a.text, b.text, a.pos});
          } while (sym(","));
        }
        d.classes.push_back(std::move(c));
      } else if (kw("translation")) {
        TranslationRule r;
        r.pos = take().pos;
        r.source = expect_simple("a class name").text;
        expect_sym("->");
        r.target = expect_simple("a class name").text;
        expect_sym(":");
        do {
          if (sym(",")) take();
          Token a = expect_ident("a qualified attribute");
          expect_sym("->");
          Token b = expect_ident("a qualified attribute");
          r.edges.push_back(RuleEdge{qualified(a), qualified(b), a.pos});
        } while (sym(","));
        d.rules.push_back(std::move(r));
      } else {
        expected("'property', 'model', 'physical', 'actuator', 'translation' or '}'");
      }
    }
    take();
    return d;
  }

  QualifiedAttribute qualified(const Token& t) {
    auto dot = t.text.find('.');
    if (dot == std::string::npos || t.text.find('.', dot + 1) != std::string::npos)
      error("expected 'class.attribute', found '" + t.text + "'", t.pos);
    return QualifiedAttribute{t.text.substr(0, dot), t.text.substr(dot + 1)};
  }

  // -- repository -----------------------------------------------------------

  Repository repository() {
    Repository r;
    r.pos = peek().pos;
    expect_kw("repository");
    r.name = expect_simple("a domain name").text;
    expect_sym("{");
    do {
      AgentTemplate t;
      t.pos = peek().pos;
      if (kw("estimate")) t.kind = TemplateKind::Estimate;
      else if (kw("sense")) t.kind = TemplateKind::Sense;
      else if (kw("control")) t.kind = TemplateKind::Control;
      else if (kw("actuate")) t.kind = TemplateKind::Actuate;
      else expected("'estimate', 'sense', 'control' or 'actuate'");
      take();
      t.subject = expect_simple("a subject").text;
      expect_kw("using");
      t.name = expect_simple("a template name").text;
      expect_sym("=");
      t.protocol = local();
      r.templates.push_back(std::move(t));
    } while (!sym("}"));
    take();
    return r;
  }

  // -- process --------------------------------------------------------------

  struct Item {
    Token name;
    std::optional<std::string> device;
  };

  std::vector<Item> items() {
    std::vector<Item> out;
    do {
      if (sym(",")) take();
      Item it{expect_simple("a name"), std::nullopt};
      if (sym("@")) {
        take();
        it.device = expect_simple("a device").text;
      }
      out.push_back(std::move(it));
    } while (sym(","));
    return out;
  }

  ProcessDecl process() {
    ProcessDecl p;
    p.pos = peek().pos;
    expect_kw("process");
    p.domain = expect_simple("a domain name").text;
    expect_sym("{");
    while (!sym("}")) {
      if (kw("device")) {
        take();
        do {
          if (sym(",")) take();
          Token n = expect_simple("a device name");
          p.devices.push_back(Device{n.text, true, n.pos});
        } while (sym(","));
      } else if (kw("physical") || kw("actuator")) {
        auto kind = take().text == "actuator" ? ClassKind::Actuator : ClassKind::Physical;
        auto its = items();
        auto cls = expect_simple("a class name").text;
        for (auto& it : its)
          p.components.push_back(ComponentInstance{it.name.text, cls, kind, it.device, it.name.pos});
      } else if (kw("sensor")) {
        take();
        auto its = items();
        auto prop = expect_simple("a property").text;
        for (auto& it : its)
          p.sensors.push_back(SensingPoint{it.name.text, prop, it.device, it.name.pos});
      } else if (kw("conn")) {
        take();
        do {
          if (sym(",")) take();
          Token a = expect_simple("a node");
          expect_sym("->");
          Token b = expect_simple("a node");
          p.connections.push_back(Connection{a.text, b.text, a.pos});
        } while (sym(","));
      } else {
        expected("'device', 'physical', 'actuator', 'sensor', 'conn' or '}'");
      }
    }
    take();
    return p;
  }

  // -- commands -------------------------------------------------------------

  ExprPtr operand() {
    no_binding("an operand");
    if (sym("(")) {
      take();
      auto e = expr();
      expect_sym(")");
      return e;
    }
    if (peek().kind == TokenKind::Ident && is_expr_keyword(peek().text)) return expr();
    Token n = expect_ident("a name");
    auto e = std::make_shared<Expr>();
    e->pos = n.pos;
    e->name = n.text;
    if (sym("[")) {
      take();
      if (peek().kind != TokenKind::Number || peek().text.find('.') != std::string::npos)
        expected("an index");
      Token k = take();
      e->kind = Expr::Kind::Index;
      e->index = static_cast<std::size_t>(std::stoul(k.text));
      if (e->index == 0) error("indices start at 1", k.pos);
      expect_sym("]");
    }
    return e;
  }

  ExprPtr expr() {
    auto e = std::make_shared<Expr>();
    e->pos = peek().pos;
    if (kw("domain")) {
      e->kind = Expr::Kind::Domain;
      e->domain = std::make_shared<IndustrialDomain>(domain());
    } else if (kw("repository")) {
      e->kind = Expr::Kind::Repository;
      e->repository = std::make_shared<Repository>(repository());
    } else if (kw("process")) {
      e->kind = Expr::Kind::Process;
      e->process = std::make_shared<ProcessDecl>(process());
    } else if (kw("local")) {
      e->kind = Expr::Kind::Local;
      e->local = std::make_shared<LocalConfiguration>(local_configuration());
    } else if (kw("global")) {
      e->kind = Expr::Kind::Global;
      e->global = global_configuration();
    } else if (kw("translate")) {
      take();
      e->kind = Expr::Kind::Translate;
      e->args.push_back(operand());
    } else if (kw("traverse")) {
      take();
      e->kind = Expr::Kind::Traverse;
      no_binding("a state such as t.head");
      e->name = expect_ident("a state such as t.head").text;
      e->args.push_back(operand());
    } else if (kw("configure")) {
      take();
      e->kind = Expr::Kind::Configure;
      e->args.push_back(operand());
      e->args.push_back(operand());
      no_binding("a controller template");
      e->name = expect_simple("a controller template").text;
      no_binding("an actuator");
      e->extra = expect_simple("an actuator").text;
    } else if (kw("compose")) {
      take();
      e->kind = Expr::Kind::Compose;
      e->args.push_back(operand());
    } else if (kw("project")) {
      take();
      e->kind = Expr::Kind::Project;
      e->args.push_back(operand());
    } else if (kw("remove_device")) {
      take();
      e->kind = Expr::Kind::RemoveDevice;
      e->args.push_back(operand());
      no_binding("a device");
      e->name = expect_simple("a device").text;
    } else {
      return operand();
    }
    return e;
  }

  Command command() {
    Command c;
    c.pos = peek().pos;
    if (peek().kind == TokenKind::Ident && sym(":=", 1)) {
      c.kind = Command::Kind::Bind;
      c.name = take().text;
      if (c.name.find('.') != std::string::npos) error("cannot bind a dotted name", c.pos);
      take();
      c.expr = expr();
    } else if (kw("show")) {
      take();
      c.kind = Command::Kind::Show;
      c.expr = expr();
    } else if (kw("mermaid")) {
      take();
      c.kind = Command::Kind::Mermaid;
      c.expr = operand();
      if (peek().kind != TokenKind::String) expected("an output path in double quotes");
      c.path = take().text;
    } else {
      c.kind = Command::Kind::Eval;
      c.expr = expr();
    }
    return c;
  }

  // Skips to the next line that starts a new command.
  void recover(std::size_t start) {
    if (position() == start || !peek().line_start) take();
    while (!at_end() && !peek().line_start) take();
  }

  std::size_t position() const { return i_; }

 private:
  std::vector<Token> t_;
  std::size_t i_ = 0;
};

template <class T, class F>
T parse_one(std::string_view text, F&& f) {
  Parser p(tokenize(text));
  try {
    T v = f(p);
    if (!p.at_end()) p.expected("end of input");
    return v;
  } catch (ParseFailure& e) {
    throw Error(e.diag);
  }
}

}  // namespace

ParseResult parse(std::string_view text) {
  ParseResult r;
  std::vector<Token> toks;
  try {
    toks = tokenize(text);
  } catch (const Error& e) {
    r.diagnostics = e.diagnostics();
    return r;
  }
  Parser p(std::move(toks));
  while (!p.at_end()) {
    const auto start = p.position();
    try {
      r.commands.push_back(p.command());
    } catch (ParseFailure& e) {
      r.diagnostics.push_back(e.diag);
      p.recover(start);
    }
  }
  return r;
}

LocalProtocol parse_local(std::string_view text) {
  return parse_one<LocalProtocol>(text, [](Parser& p) { return p.local(); });
}

GlobalProtocol parse_global(std::string_view text) {
  return parse_one<GlobalProtocol>(text, [](Parser& p) {
    if (p.kw("global")) return p.global_configuration();
    return p.global();
  });
}

LocalConfiguration parse_local_configuration(std::string_view text) {
  return parse_one<LocalConfiguration>(text, [](Parser& p) { return p.local_configuration(); });
}

IndustrialDomain parse_domain(std::string_view text) {
  return parse_one<IndustrialDomain>(text, [](Parser& p) { return p.domain(); });
}

Repository parse_repository(std::string_view text) {
  return parse_one<Repository>(text, [](Parser& p) { return p.repository(); });
}

ProcessDecl parse_process(std::string_view text) {
  return parse_one<ProcessDecl>(text, [](Parser& p) { return p.process(); });
}

// ---------------------------------------------------------------------------
// Printers

namespace {

template <class Range, class F>
void join(std::ostream& os, const Range& r, const char* sep, F&& f) {
  bool first = true;
  for (const auto& x : r) {
    if (!first) os << sep;
    f(x);
    first = false;
  }
}

}  // namespace

std::string print_domain(const IndustrialDomain& d) {
  std::ostringstream os;
  os << "domain {\n";
  if (!d.properties.empty()) {
    os << "  property ";
    join(os, d.properties, ", ", [&](const PropertyDef& p) {
      os << p.name;
      if (p.is_enum()) {
        os << " {";
        join(os, p.labels, ", ", [&](const std::string& l) { os << l; });
        os << "}";
      }
    });
    os << "\n";
  }
  if (!d.model.empty()) {
    os << "  model ";
    join(os, d.model, ", ", [&](const EstimatorDef& e) { os << e.name; });
    os << "\n";
  }
  for (const auto& c : d.classes) {
    os << "  " << (c.kind == ClassKind::Actuator ? "actuator " : "physical ") << c.name << "(";
    join(os, c.attributes, ", ", [&](const std::string& a) { os << a; });
    os << ")";
    if (!c.edges.empty()) {
      os << ":\n";
      join(os, c.edges, ",\n", [&](const AttributeEdge& e) {
        os << "    " << e.from << " -> " << e.to;
      });
    }
    os << "\n";
  }
  for (const auto& r : d.rules) {
    os << "  translation " << r.source << " -> " << r.target << ":\n";
    join(os, r.edges, ",\n", [&](const RuleEdge& e) {
      os << "    " << e.from.str() << " -> " << e.to.str();
    });
    os << "\n";
  }
  os << "}";
  return os.str();
}

std::string print_repository(const Repository& r) {
  std::ostringstream os;
  os << "repository " << r.name << " {\n";
  for (const auto& t : r.templates)
    os << "  " << template_kind_name(t.kind) << " " << t.subject << " using " << t.name << " = "
       << t.protocol << "\n";
  os << "}";
  return os.str();
}

std::string print_process(const ProcessDecl& p) {
  std::ostringstream os;
  os << "process " << p.domain << " {\n";
  if (!p.devices.empty()) {
    os << "  device ";
    join(os, p.devices, ", ", [&](const Device& d) { os << d.name; });
    os << "\n";
  }
  for (const auto& c : p.components) {
    os << "  " << (c.kind == ClassKind::Actuator ? "actuator " : "physical ") << c.name;
    if (c.device) os << "@" << *c.device;
    os << " " << c.class_name << "\n";
  }
  for (const auto& s : p.sensors) {
    os << "  sensor " << s.name;
    if (s.device) os << "@" << *s.device;
    os << " " << s.property << "\n";
  }
  if (!p.connections.empty()) {
    os << "  conn ";
    join(os, p.connections, ", ", [&](const Connection& c) { os << c.from << "->" << c.to; });
    os << "\n";
  }
  os << "}";
  return os.str();
}

std::string print_global(const GlobalProtocol& g) { return "global " + to_string(g); }

}  // namespace icps
