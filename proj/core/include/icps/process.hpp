#pragma once

// Industrial process knowledge graph: devices, component instances, sensing
// points bound to devices, and the connections between them.

#include <optional>
#include <string>
#include <vector>

#include "icps/common.hpp"
#include "icps/domain.hpp"

namespace icps {

struct Device {
  std::string name;
  bool alive = true;
  SourcePos pos;

  bool operator==(const Device&) const = default;
};

struct ComponentInstance {
  std::string name;
  std::string class_name;
  ClassKind kind = ClassKind::Physical;
  std::optional<std::string> device;  // required for actuators
  SourcePos pos;

  bool operator==(const ComponentInstance&) const = default;
};

struct SensingPoint {
  std::string name;
  std::string property;
  std::optional<std::string> device;
  SourcePos pos;

  bool operator==(const SensingPoint&) const = default;
};

struct Connection {
  std::string from;
  std::string to;
  SourcePos pos;

  bool operator==(const Connection&) const = default;
};

/// A process as written: the body of `process <domain> { ... }`.
/// Grouping on the page (`physical p1, p2 pipe`) is flattened.
struct ProcessDecl {
  std::string domain;
  std::vector<Device> devices;
  std::vector<ComponentInstance> components;
  std::vector<SensingPoint> sensors;
  std::vector<Connection> connections;
  SourcePos pos;

  bool operator==(const ProcessDecl&) const = default;
};

/// A validated process. Devices are never forgotten once declared; a failed
/// device is kept with `alive == false`.
class ProcessGraph {
 public:
  std::string domain_name;
  std::vector<Device> devices;
  std::vector<ComponentInstance> components;
  std::vector<SensingPoint> sensors;
  std::vector<Connection> connections;

  const Device* find_device(const std::string& n) const;
  const ComponentInstance* find_component(const std::string& n) const;
  const SensingPoint* find_sensor(const std::string& n) const;

  /// The component a sensing point is attached to.
  const ComponentInstance* attached_component(const std::string& sensor) const;

  bool device_alive(const std::string& n) const;

  /// The declaration that rebuilds this graph.
  ProcessDecl to_decl() const;

  bool operator==(const ProcessGraph&) const = default;
};

/// Throws icps::Error carrying every violation found.
ProcessGraph build_process(const ProcessDecl& decl, const IndustrialDomain& domain);

/// Marks `device` failed and drops the sensing points it hosts together with
/// their connections. If `controlled_actuator` names an actuator hosted on
/// the device, the removal is rejected with code "actuator-device".
ProcessGraph remove_device(const ProcessGraph& p, const std::string& device,
                           const std::optional<std::string>& controlled_actuator = std::nullopt);

}  // namespace icps
