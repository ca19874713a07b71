#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fdp/errors.hpp"
#include "fdp/metric.hpp"
#include "fdp/rational.hpp"

namespace fdp {

struct Request {
  Time arrival = 0;
  Vertex vertex = 0;

  friend bool operator==(const Request&, const Request&) = default;
};

/// Vehicle capacity; std::nullopt means unbounded.
using Capacity = std::optional<int>;

struct Instance {
  std::shared_ptr<const MetricGraph> graph;
  /// Present iff the graph is a tree; rooted at the depot.
  std::shared_ptr<const RootedTree> tree;
  int k = 1;
  Capacity capacity;
  std::vector<Request> requests;

  /// Checks k, capacity and every request; builds the rooted tree when possible.
  static Instance make(std::shared_ptr<const MetricGraph> graph, int k, Capacity capacity,
                       std::vector<Request> requests);

  [[nodiscard]] const MetricGraph& g() const { return *graph; }
  [[nodiscard]] Vertex depot() const { return graph->depot(); }
  [[nodiscard]] bool is_tree() const { return tree != nullptr; }
  [[nodiscard]] bool unbounded() const { return !capacity.has_value(); }
};

struct Trip {
  Rational start;
  /// o, u_1, ..., o.
  std::vector<Vertex> walk;
  /// Indices into Instance::requests.
  std::vector<int> served;

  friend bool operator==(const Trip&, const Trip&) = default;
};

struct Schedule {
  std::vector<std::vector<Trip>> vehicles;

  [[nodiscard]] std::size_t trip_count() const;
  friend bool operator==(const Schedule&, const Schedule&) = default;
};

Length walk_length(const MetricGraph& g, const std::vector<Vertex>& walk);

/// Start + length/speed.
Rational trip_end(const MetricGraph& g, const Trip& trip, const Rational& speed = 1);

struct FlowReport {
  Rational max_flow;
  std::vector<Rational> serve_time;
  std::vector<Rational> flow;
  /// Request attaining max_flow (lowest index on ties), -1 without requests.
  int argmax = -1;
};

class ValidationError : public InputError {
 public:
  enum class Kind {
    kVehicleCount,
    kMalformedWalk,
    kCapacity,
    kOverlap,
    kUnknownRequest,
    kDuplicateService,
    kNotOnWalk,
    kServeBeforeArrival,
    kUnserved,
  };

  ValidationError(Kind kind, const std::string& detail);
  [[nodiscard]] Kind kind() const { return kind_; }
  static const char* tag(Kind kind);

 private:
  Kind kind_;
};

/// Checks every trip and schedule invariant with travel time ℓ/speed and
/// returns per-request serve and flow times. Throws ValidationError.
FlowReport validate(const Instance& inst, const Schedule& sch, const Rational& speed = 1);

// -------------------------------------------------------------- generation

struct GenerateParams {
  int vertices = 12;          // including the depot
  int k = 1;
  Capacity capacity;          // unbounded by default
  int requests = 20;
  Length f_target = 10;
  Length max_edge_length = 4;
  int extra_edges = 0;        // chords added on top of the random tree
  int max_trip_requests = 4;  // per witness trip when capacity is unbounded
};

struct Generated {
  Instance instance;
  Schedule witness;
};

/// Random instance together with a schedule whose max flow is at most
/// params.f_target. Throws InputError on unsatisfiable parameters.
Generated generate_feasible(std::uint64_t seed, const GenerateParams& params);

}  // namespace fdp
