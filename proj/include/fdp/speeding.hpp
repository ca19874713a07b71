#pragma once

#include <string>
#include <vector>

#include "fdp/instance.hpp"
#include "fdp/tours.hpp"

namespace fdp {

enum class TourMode { kExact, kTsp2, kCvrp };

TourMode parse_tour_mode(const std::string& name);
const char* tour_mode_name(TourMode mode);

/// Window length gamma*F with gamma = (2 alpha + 2) / eps and vehicles
/// running at speed alpha + eps, where alpha is the approximation ratio of
/// the tour builder: 1 (exact), 2 (MST doubling), 3 (tour partitioning).
struct SpeedConfig {
  Rational eps{1, 2};
  TourMode mode = TourMode::kExact;

  [[nodiscard]] Rational alpha() const;
  [[nodiscard]] Rational gamma() const;
  [[nodiscard]] Rational speed() const;
  [[nodiscard]] Rational window(const Rational& f) const { return gamma() * f; }
  [[nodiscard]] Rational split_cap(const Rational& f) const;
  [[nodiscard]] Rational flow_bound(const Rational& f) const { return Rational(2) * gamma() * f; }
  /// Throws InputError unless 0 < eps < 1.
  void check() const;
};

struct SpeedWindow {
  std::int64_t index = 0;
  Rational start;  // i * gamma * F, when the batch is dispatched
  std::vector<int> requests;
  Length tour_length = 0;
  int subtours = 0;
};

struct SpeedRun {
  Schedule schedule;
  std::vector<SpeedWindow> windows;
};

/// Builds the tour for one batch with the configured method.
CvrpTour build_tour(const MetricGraph& g, const std::vector<Vertex>& demand, Capacity capacity, TourMode mode);

/// Batches each window, builds a tour, cuts it into pieces no longer than
/// alpha(gamma+2)F and sends one free vehicle per piece at the window's end.
/// Throws InvariantViolation when more than k pieces are needed or a vehicle
/// is still out, UnsupportedError for exact batches above 12 requests, and
/// InputError when a request lies farther than F from the depot.
SpeedRun run_speeding(const Instance& inst, const Rational& f, const SpeedConfig& cfg);

/// k (b - a + 2F): the CVRP length available to serve the arrivals of [a, b]
/// when the optimum has max flow at most F.
Rational cvrp_window_bound(int k, const Rational& a, const Rational& b, const Rational& f);

}  // namespace fdp
