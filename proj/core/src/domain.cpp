#include "icps/domain.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace icps {

bool ComponentClass::has_attribute(const std::string& a) const {
  return std::find(attributes.begin(), attributes.end(), a) != attributes.end();
}

const PropertyDef* IndustrialDomain::find_property(const std::string& n) const {
  for (const auto& p : properties)
    if (p.name == n) return &p;
  return nullptr;
}

const EstimatorDef* IndustrialDomain::find_estimator(const std::string& n) const {
  for (const auto& e : model)
    if (e.name == n) return &e;
  return nullptr;
}

const ComponentClass* IndustrialDomain::find_class(const std::string& n) const {
  for (const auto& c : classes)
    if (c.name == n) return &c;
  return nullptr;
}

const TranslationRule* IndustrialDomain::find_rule(const std::string& a, const std::string& b,
                                                   bool* reversed) const {
  for (const auto& r : rules)
    if (r.source == a && r.target == b) {
      if (reversed) *reversed = false;
      return &r;
    }
  for (const auto& r : rules)
    if (r.source == b && r.target == a) {
      if (reversed) *reversed = true;
      return &r;
    }
  return nullptr;
}

bool IndustrialDomain::is_static_property(const std::string& n) const {
  if (!is_property(n)) return false;
  for (const auto& c : classes)
    for (const auto& e : c.edges)
      if (e.to == n) return false;
  for (const auto& r : rules)
    for (const auto& e : r.edges)
      if (e.to.attribute == n) return false;
  return true;
}

namespace {

void push(std::vector<Diagnostic>& out, std::string code, std::string msg, SourcePos pos) {
  out.push_back(make_error(std::move(code), std::move(msg), pos));
}

// Edges must alternate between states (properties) and estimators.
bool edge_kind_ok(const IndustrialDomain& d, const std::string& from, const std::string& to) {
  return (d.is_property(from) && d.is_estimator(to)) ||
         (d.is_estimator(from) && d.is_property(to));
}

}  // namespace

std::vector<Diagnostic> validate_domain(const IndustrialDomain& d) {
  std::vector<Diagnostic> out;
  std::set<std::string> names;

  for (const auto& p : d.properties) {
    if (!names.insert(p.name).second)
      push(out, "duplicate-name", "'" + p.name + "' is declared more than once", p.pos);
    std::set<std::string> labels;
    for (const auto& l : p.labels)
      if (!labels.insert(l).second)
        push(out, "duplicate-label", "label '" + l + "' repeated in '" + p.name + "'", p.pos);
  }
  for (const auto& e : d.model)
    if (!names.insert(e.name).second)
      push(out, "duplicate-name", "'" + e.name + "' is declared more than once", e.pos);

  std::set<std::string> class_names;
  for (const auto& c : d.classes) {
    if (!class_names.insert(c.name).second)
      push(out, "duplicate-class", "class '" + c.name + "' is declared more than once", c.pos);
    std::set<std::string> attrs;
    for (const auto& a : c.attributes) {
      if (!d.is_property(a) && !d.is_estimator(a))
        push(out, "unknown-attribute",
             "attribute '" + a + "' of class '" + c.name + "' is neither a property nor an estimator",
             c.pos);
      else if (d.find_property(a) && d.find_property(a)->is_enum())
        push(out, "enum-attribute", "enumeration '" + a + "' cannot be a class attribute", c.pos);
      if (!attrs.insert(a).second)
        push(out, "duplicate-attribute", "attribute '" + a + "' repeated in '" + c.name + "'", c.pos);
    }
    for (const auto& e : c.edges) {
      if (!c.has_attribute(e.from) || !c.has_attribute(e.to)) {
        push(out, "unknown-attribute",
             "edge " + e.from + " -> " + e.to + " uses an attribute not in class '" + c.name + "'",
             e.pos);
        continue;
      }
      if (!edge_kind_ok(d, e.from, e.to))
        push(out, "edge-kind",
             "edge " + e.from + " -> " + e.to + " in class '" + c.name +
                 "' must connect a property and an estimator",
             e.pos);
    }
  }

  std::set<std::pair<std::string, std::string>> rule_pairs;
  for (const auto& r : d.rules) {
    const auto* src = d.find_class(r.source);
    const auto* dst = d.find_class(r.target);
    if (!src) push(out, "unknown-class", "translation rule uses undeclared class '" + r.source + "'", r.pos);
    if (!dst) push(out, "unknown-class", "translation rule uses undeclared class '" + r.target + "'", r.pos);
    if (!rule_pairs.insert({r.source, r.target}).second)
      push(out, "duplicate-rule", "translation " + r.source + " -> " + r.target + " declared twice",
           r.pos);
    if (!src || !dst) continue;
    auto resolve = [&](const QualifiedAttribute& q) -> const ComponentClass* {
      if (q.role == r.source) return src;
      if (q.role == r.target) return dst;
      return nullptr;
    };
    for (const auto& e : r.edges) {
      bool ok = true;
      for (const auto* q : {&e.from, &e.to}) {
        const auto* cls = resolve(*q);
        if (!cls) {
          push(out, "unknown-class",
               "'" + q->str() + "' names neither '" + r.source + "' nor '" + r.target + "'", e.pos);
          ok = false;
        } else if (!cls->has_attribute(q->attribute)) {
          push(out, "unknown-attribute",
               "class '" + cls->name + "' has no attribute '" + q->attribute + "'", e.pos);
          ok = false;
        }
      }
      if (ok && !edge_kind_ok(d, e.from.attribute, e.to.attribute))
        push(out, "edge-kind",
             "rule edge " + e.from.str() + " -> " + e.to.str() +
                 " must connect a property and an estimator",
             e.pos);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Repository

std::string_view template_kind_name(TemplateKind k) {
  switch (k) {
    case TemplateKind::Estimate:
      return "estimate";
    case TemplateKind::Sense:
      return "sense";
    case TemplateKind::Control:
      return "control";
    case TemplateKind::Actuate:
      return "actuate";
  }
  return "?";
}

std::optional<std::pair<std::string, int>> parse_placeholder(const std::string& name) {
  for (const char* stem : {"producer", "consumer"}) {
    std::string s = stem;
    if (name.size() <= s.size() || name.compare(0, s.size(), s) != 0) continue;
    auto digits = name.substr(s.size());
    if (digits.front() == '0' || digits.size() > 6) return std::nullopt;
    if (!std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
      return std::nullopt;
    return std::make_pair(s, std::stoi(digits));
  }
  return std::nullopt;
}

namespace {

std::size_t count_placeholders(const LocalProtocol& p, const std::string& stem) {
  std::size_t n = 0;
  for (const auto& q : participants(p)) {
    auto ph = parse_placeholder(q.name());
    if (ph && ph->first == stem) ++n;
  }
  return n;
}

// Walks every action with its enclosing choice enumeration, if any.
template <class F>
void for_each_action(const LocalProtocol& p, F&& f) {
  switch (p.kind()) {
    case LocalProtocol::Kind::End:
    case LocalProtocol::Kind::Var:
      return;
    case LocalProtocol::Kind::Prefix:
      f(p.action(), static_cast<const MessageType*>(nullptr));
      for_each_action(p.cont(), f);
      return;
    case LocalProtocol::Kind::Choice:
      for (const auto& b : p.branches()) {
        f(b.action, &p.enum_type());
        for_each_action(b.cont, f);
      }
      return;
    case LocalProtocol::Kind::Rec:
      for_each_action(p.body(), f);
      return;
  }
}

}  // namespace

std::size_t AgentTemplate::producers() const { return count_placeholders(protocol, "producer"); }
std::size_t AgentTemplate::consumers() const { return count_placeholders(protocol, "consumer"); }

const AgentTemplate* Repository::find_by_name(const std::string& n) const {
  for (const auto& t : templates)
    if (t.name == n) return &t;
  return nullptr;
}

std::vector<Diagnostic> validate_repository(const Repository& r, const IndustrialDomain* d) {
  std::vector<Diagnostic> out;
  std::set<std::string> names;
  for (const auto& t : r.templates) {
    if (!names.insert(t.name).second)
      push(out, "duplicate-template", "template '" + t.name + "' is declared more than once", t.pos);

    auto fl = free_labels(t.protocol);
    if (!fl.empty())
      push(out, "unbound-label",
           "template '" + t.name + "' jumps to unbound label '" + *fl.begin() + "'", t.pos);

    std::map<std::string, std::set<int>> seen;
    for (const auto& q : participants(t.protocol)) {
      auto ph = parse_placeholder(q.name());
      if (!ph) {
        push(out, "bad-placeholder",
             "template '" + t.name + "' talks to '" + q.name() +
                 "'; only producerN and consumerN placeholders are allowed",
             t.pos);
        continue;
      }
      seen[ph->first].insert(ph->second);
    }
    for (const auto& [stem, idx] : seen)
      if (!idx.empty() && *idx.rbegin() != static_cast<int>(idx.size()))
        push(out, "bad-placeholder",
             "template '" + t.name + "' numbers its " + stem + "s with gaps", t.pos);

    if (!d) continue;

    const std::string kind(template_kind_name(t.kind));
    switch (t.kind) {
      case TemplateKind::Estimate:
        if (!d->is_estimator(t.subject))
          push(out, "unknown-subject", kind + " template '" + t.name + "' names unknown estimator '" +
                                           t.subject + "'",
               t.pos);
        break;
      case TemplateKind::Sense: {
        const auto* p = d->find_property(t.subject);
        if (!p || p->is_enum())
          push(out, "unknown-subject", kind + " template '" + t.name + "' names unknown property '" +
                                           t.subject + "'",
               t.pos);
        break;
      }
      case TemplateKind::Control:
      case TemplateKind::Actuate: {
        const auto* c = d->find_class(t.subject);
        if (!c || c->kind != ClassKind::Actuator)
          push(out, "unknown-subject", kind + " template '" + t.name +
                                           "' names unknown actuator class '" + t.subject + "'",
               t.pos);
        break;
      }
    }

    for_each_action(t.protocol, [&](const Action& a, const MessageType* enum_type) {
      if (enum_type) {
        const auto* p = d->find_property(enum_type->name());
        if (!p || !p->is_enum()) {
          push(out, "unknown-enum",
               "template '" + t.name + "' chooses over '" + enum_type->name() +
                   "', which is not an enumeration",
               t.pos);
          return;
        }
        if (std::find(p->labels.begin(), p->labels.end(), a.payload.name()) == p->labels.end())
          push(out, "unknown-label",
               "label '" + a.payload.name() + "' is not a label of '" + p->name + "'", t.pos);
        return;
      }
      const auto* p = d->find_property(a.payload.name());
      if (!p)
        push(out, "unknown-payload",
             "template '" + t.name + "' exchanges undeclared property '" + a.payload.name() + "'",
             t.pos);
    });
  }
  return out;
}

const AgentTemplate& lookup_template(const Repository& r, TemplateKind kind,
                                     const std::string& subject) {
  const AgentTemplate* found = nullptr;
  for (const auto& t : r.templates) {
    if (t.kind != kind || t.subject != subject) continue;
    if (found)
      fail("template-ambiguous", "repository '" + r.name + "' has several " +
                                     std::string(template_kind_name(kind)) + " templates for '" +
                                     subject + "' ('" + found->name + "', '" + t.name + "')");
    found = &t;
  }
  if (!found)
    fail("template-not-found", "repository '" + r.name + "' has no " +
                                   std::string(template_kind_name(kind)) + " template for '" +
                                   subject + "'");
  return *found;
}

}  // namespace icps
