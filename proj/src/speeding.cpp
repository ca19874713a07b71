#include "fdp/speeding.hpp"

#include <map>

#include "fdp/errors.hpp"

namespace fdp {

TourMode parse_tour_mode(const std::string& name) {
  if (name == "exact") return TourMode::kExact;
  if (name == "tsp2") return TourMode::kTsp2;
  if (name == "cvrp") return TourMode::kCvrp;
  throw InputError("unknown tour mode '" + name + "' (expected exact, tsp2 or cvrp)");
}

const char* tour_mode_name(TourMode mode) {
  switch (mode) {
    case TourMode::kExact: return "exact";
    case TourMode::kTsp2: return "tsp2";
    case TourMode::kCvrp: return "cvrp";
  }
  return "?";
}

Rational SpeedConfig::alpha() const {
  switch (mode) {
    case TourMode::kExact: return 1;
    case TourMode::kTsp2: return 2;
    case TourMode::kCvrp: return 3;
  }
  return 1;
}

Rational SpeedConfig::gamma() const { return (Rational(2) * alpha() + Rational(2)) / eps; }

Rational SpeedConfig::speed() const { return alpha() + eps; }

Rational SpeedConfig::split_cap(const Rational& f) const { return alpha() * (gamma() + Rational(2)) * f; }

void SpeedConfig::check() const {
  if (eps <= Rational(0) || eps >= Rational(1)) throw InputError("eps must lie in (0, 1), got " + eps.str());
}

CvrpTour build_tour(const MetricGraph& g, const std::vector<Vertex>& demand, Capacity capacity, TourMode mode) {
  switch (mode) {
    case TourMode::kExact: return exact_cvrp(g, demand, capacity, 12);
    case TourMode::kTsp2:
      if (capacity) throw UnsupportedError("tsp2 mode needs unbounded capacity; use cvrp");
      return tsp_approx(g, demand);
    case TourMode::kCvrp: return cvrp_approx(g, demand, capacity);
  }
  throw InputError("unknown tour mode");
}

SpeedRun run_speeding(const Instance& inst, const Rational& f, const SpeedConfig& cfg) {
  cfg.check();
  if (f <= Rational(0)) throw InputError("F must be positive, got " + f.str());
  const MetricGraph& g = inst.g();
  for (std::size_t i = 0; i < inst.requests.size(); ++i) {
    if (Rational(g.distance(g.depot(), inst.requests[i].vertex)) > f) {
      throw InputError("request " + std::to_string(i) + " lies farther than F from the depot");
    }
  }

  SpeedRun run;
  run.schedule.vehicles.assign(static_cast<std::size_t>(inst.k), {});
  const Rational window = cfg.window(f);
  std::map<std::int64_t, std::vector<int>> batches;
  for (std::size_t i = 0; i < inst.requests.size(); ++i) {
    batches[floor_div(Rational(inst.requests[i].arrival), window) + 1].push_back(static_cast<int>(i));
  }

  std::vector<Rational> free_at(static_cast<std::size_t>(inst.k), Rational(0));
  for (const auto& [index, ids] : batches) {
    SpeedWindow w;
    w.index = index;
    w.start = Rational(index) * window;
    w.requests = ids;
    std::vector<Vertex> demand;
    for (int id : ids) demand.push_back(inst.requests[static_cast<std::size_t>(id)].vertex);
    const CvrpTour tour = build_tour(g, demand, inst.capacity, cfg.mode);
    if (auto problem = check_tour(g, demand, inst.capacity, tour); !problem.empty()) {
      throw InvariantViolation("tour builder returned an invalid tour: " + problem);
    }
    w.tour_length = tour.length;

    std::size_t vehicle = 0;
    for (const auto& sub : split_tour(g, tour, cfg.split_cap(f))) {
      auto trips = realize_tour(g, sub, ids, w.start, cfg.speed());
      if (trips.empty()) continue;
      while (vehicle < free_at.size() && free_at[vehicle] > w.start) ++vehicle;
      if (vehicle == free_at.size()) {
        throw InvariantViolation("window " + std::to_string(index) + " needs more than " +
                                 std::to_string(inst.k) + " free vehicles");
      }
      free_at[vehicle] = trip_end(g, trips.back(), cfg.speed());
      if (free_at[vehicle] > w.start + window) {
        throw InvariantViolation("a vehicle of window " + std::to_string(index) + " returns at " +
                                 free_at[vehicle].str() + ", after the next window closes");
      }
      auto& itinerary = run.schedule.vehicles[vehicle];
      for (auto& t : trips) itinerary.push_back(std::move(t));
      ++vehicle;
      ++w.subtours;
    }
    run.windows.push_back(std::move(w));
  }
  return run;
}

Rational cvrp_window_bound(int k, const Rational& a, const Rational& b, const Rational& f) {
  if (b < a) throw InputError("window end precedes its start");
  return Rational(k) * (b - a + Rational(2) * f);
}

}  // namespace fdp
