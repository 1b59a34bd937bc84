#pragma once

// Industrial domain ontology: properties, estimator model, component classes,
// translation rules, and agent repositories.

#include <optional>
#include <string>
#include <vector>

#include "icps/common.hpp"
#include "icps/protocol.hpp"

namespace icps {

struct PropertyDef {
  std::string name;
  std::vector<std::string> labels;  // empty for scalar properties
  SourcePos pos;

  bool is_enum() const { return !labels.empty(); }
  bool operator==(const PropertyDef&) const = default;
};

struct EstimatorDef {
  std::string name;
  SourcePos pos;

  bool operator==(const EstimatorDef&) const = default;
};

enum class ClassKind { Physical, Actuator };

struct AttributeEdge {
  std::string from;
  std::string to;
  SourcePos pos;

  bool operator==(const AttributeEdge&) const = default;
};

struct ComponentClass {
  std::string name;
  ClassKind kind = ClassKind::Physical;
  std::vector<std::string> attributes;
  std::vector<AttributeEdge> edges;
  SourcePos pos;

  bool has_attribute(const std::string& a) const;
  bool operator==(const ComponentClass&) const = default;
};

/// `pipe.flow`: an attribute of one side of a translation rule, named by class.
struct QualifiedAttribute {
  std::string role;
  std::string attribute;

  std::string str() const { return role + "." + attribute; }
  bool operator==(const QualifiedAttribute&) const = default;
};

struct RuleEdge {
  QualifiedAttribute from;
  QualifiedAttribute to;
  SourcePos pos;

  bool operator==(const RuleEdge&) const = default;
};

struct TranslationRule {
  std::string source;
  std::string target;
  std::vector<RuleEdge> edges;
  SourcePos pos;

  bool operator==(const TranslationRule&) const = default;
};

class IndustrialDomain {
 public:
  std::string name;
  std::vector<PropertyDef> properties;
  std::vector<EstimatorDef> model;
  std::vector<ComponentClass> classes;
  std::vector<TranslationRule> rules;
  SourcePos pos;

  const PropertyDef* find_property(const std::string& n) const;
  const EstimatorDef* find_estimator(const std::string& n) const;
  const ComponentClass* find_class(const std::string& n) const;
  /// Tries (a, b), then (b, a). The flag tells which orientation matched.
  const TranslationRule* find_rule(const std::string& a, const std::string& b,
                                   bool* reversed = nullptr) const;

  bool is_property(const std::string& n) const { return find_property(n) != nullptr; }
  bool is_estimator(const std::string& n) const { return find_estimator(n) != nullptr; }

  /// A property that no class or rule edge ever produces, such as a shape.
  /// Its states are preconfigured rather than measured or estimated.
  bool is_static_property(const std::string& n) const;

  bool operator==(const IndustrialDomain& o) const {
    return properties == o.properties && model == o.model && classes == o.classes &&
           rules == o.rules;
  }
};

/// Empty iff the domain is well formed.
std::vector<Diagnostic> validate_domain(const IndustrialDomain& d);

// ---------------------------------------------------------------------------
// Agent repository

enum class TemplateKind { Estimate, Sense, Control, Actuate };
std::string_view template_kind_name(TemplateKind k);

struct AgentTemplate {
  TemplateKind kind = TemplateKind::Estimate;
  std::string subject;
  std::string name;
  LocalProtocol protocol;
  SourcePos pos;

  /// Number of distinct producerN / consumerN placeholders.
  std::size_t producers() const;
  std::size_t consumers() const;

  bool operator==(const AgentTemplate& o) const {
    return kind == o.kind && subject == o.subject && name == o.name && protocol == o.protocol;
  }
};

/// Splits `producer3` into ("producer", 3). Returns nullopt for other names.
std::optional<std::pair<std::string, int>> parse_placeholder(const std::string& name);

struct Repository {
  std::string name;
  std::vector<AgentTemplate> templates;
  SourcePos pos;

  const AgentTemplate* find_by_name(const std::string& n) const;
  bool operator==(const Repository&) const = default;
};

/// Checks template well-formedness on its own and, when a domain is given,
/// that subjects, payloads and enumeration labels resolve against it.
std::vector<Diagnostic> validate_repository(const Repository& r,
                                            const IndustrialDomain* d = nullptr);

/// Throws icps::Error with code "template-not-found" or "template-ambiguous".
const AgentTemplate& lookup_template(const Repository& r, TemplateKind kind,
                                     const std::string& subject);

}  // namespace icps
