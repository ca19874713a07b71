#include "fdp/sim.hpp"

#include <algorithm>
#include <sstream>

#include "fdp/dispatch.hpp"
#include "fdp/errors.hpp"
#include "fdp/tours.hpp"

namespace fdp {

std::optional<Time> InstanceSource::next_arrival() const {
  if (next_ == inst_.requests.size()) return std::nullopt;
  return inst_.requests[next_].arrival;
}

std::vector<Request> InstanceSource::release_until(Time t) {
  std::vector<Request> out;
  while (next_ < inst_.requests.size() && inst_.requests[next_].arrival <= t) out.push_back(inst_.requests[next_++]);
  return out;
}

std::uint64_t fnv1a(std::string_view text, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {

std::string join(const std::vector<int>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + std::to_string(xs[i]);
  return out;
}

/// Distance along the walk to the first visit of each vertex of `targets`.
std::vector<Length> first_visits(const MetricGraph& g, const std::vector<Vertex>& walk,
                                 const std::vector<Vertex>& targets) {
  std::vector<Length> out(targets.size(), -1);
  Length prefix = 0;
  for (std::size_t i = 1; i < walk.size(); ++i) {
    const auto len = g.edge_length(walk[i - 1], walk[i]);
    if (!len) throw InvariantViolation("planned walk uses a non-edge");
    prefix += *len;
    for (std::size_t j = 0; j < targets.size(); ++j) {
      if (out[j] < 0 && targets[j] == walk[i]) out[j] = prefix;
    }
  }
  return out;
}

}  // namespace

SimResult run_online(std::shared_ptr<const MetricGraph> graph, int k, Capacity capacity, RequestSource& source,
                     OnlinePolicy& policy, const Rational& speed) {
  if (k < 1) throw InputError("need at least one vehicle");
  if (speed <= Rational(0)) throw InputError("speed must be positive");
  std::vector<Request> requests;
  std::vector<char> committed;
  std::vector<Rational> free_at(static_cast<std::size_t>(k), Rational(0));
  Schedule sch;
  sch.vehicles.resize(static_cast<std::size_t>(k));
  SimResult res;
  const MetricGraph& g = *graph;

  SimView view;
  view.graph = graph;
  view.k = k;
  view.capacity = capacity;
  view.speed = speed;
  view.requests = &requests;
  view.committed = &committed;
  view.free_at = &free_at;

  bool started = false;
  for (;;) {
    std::optional<Rational> next;
    auto consider = [&](const Rational& t) {
      if (started && t <= view.now) return;
      if (!next || t < *next) next = t;
    };
    if (auto a = source.next_arrival()) consider(Rational(*a));
    if (started) {
      for (const auto& f : free_at) consider(f);
      if (auto w = policy.wakeup(view)) consider(*w);
    }
    if (!next) break;
    view.now = *next;
    started = true;
    std::ostringstream line;

    for (const auto& r : source.release_until(floor_div(view.now, Rational(1)))) {
      requests.push_back(r);
      committed.push_back(0);
      res.trace.push_back("t=" + view.now.str() + " arrive id=" + std::to_string(requests.size() - 1) +
                          " v=" + std::to_string(g.label(r.vertex)));
    }
    for (std::size_t v = 0; v < free_at.size(); ++v) {
      if (free_at[v] == view.now && view.now > Rational(0)) {
        res.trace.push_back("t=" + view.now.str() + " free veh=" + std::to_string(v));
      }
    }

    for (auto& c : policy.decide(view)) {
      const auto veh = static_cast<std::size_t>(c.vehicle);
      if (c.vehicle < 0 || c.vehicle >= k) throw InvariantViolation(policy.name() + " used vehicle " + std::to_string(c.vehicle));
      if (c.trip.start < view.now) {
        throw InvariantViolation(policy.name() + " committed a trip starting in the past (" + c.trip.start.str() +
                                 " < " + view.now.str() + ")");
      }
      if (c.trip.start < free_at[veh]) {
        throw InvariantViolation(policy.name() + " sent vehicle " + std::to_string(c.vehicle) + " at " +
                                 c.trip.start.str() + " before it returns at " + free_at[veh].str());
      }
      if (capacity && static_cast<int>(c.trip.served.size()) > *capacity) {
        throw InvariantViolation(policy.name() + " overloaded a trip");
      }
      for (int id : c.trip.served) {
        if (id < 0 || static_cast<std::size_t>(id) >= requests.size()) {
          throw InvariantViolation(policy.name() + " served request " + std::to_string(id) + " before it arrived");
        }
        auto& flag = committed[static_cast<std::size_t>(id)];
        if (flag) throw InvariantViolation(policy.name() + " committed request " + std::to_string(id) + " twice");
        flag = 1;
      }
      free_at[veh] = trip_end(g, c.trip, speed);
      source.observe_trip(c.trip.start, c.trip.served);
      std::vector<int> labels;
      for (Vertex x : c.trip.walk) labels.push_back(static_cast<int>(g.label(x)));
      res.trace.push_back("t=" + view.now.str() + " start veh=" + std::to_string(c.vehicle) + " at=" +
                          c.trip.start.str() + " walk=" + join(labels) + " served=" + join(c.trip.served));
      sch.vehicles[veh].push_back(std::move(c.trip));
    }
  }

  for (std::size_t i = 0; i < committed.size(); ++i) {
    if (!committed[i]) throw InvariantViolation(policy.name() + " never served request " + std::to_string(i));
  }
  for (auto& itinerary : sch.vehicles) {
    std::stable_sort(itinerary.begin(), itinerary.end(), [](const Trip& a, const Trip& b) { return a.start < b.start; });
  }
  res.instance = Instance::make(std::move(graph), k, capacity, requests);
  res.report = validate(res.instance, sch, speed);
  res.schedule = std::move(sch);
  std::uint64_t h = fnv1a("");
  for (const auto& l : res.trace) h = fnv1a(l + "\n", h);
  res.trace_hash = h;
  return res;
}

SimResult run_online(const Instance& inst, OnlinePolicy& policy, const Rational& speed) {
  InstanceSource source(inst);
  return run_online(inst.graph, inst.k, inst.capacity, source, policy, speed);
}

// ------------------------------------------------------------ plan replay

std::vector<Commit> PlanPolicy::decide(const SimView& view) {
  const Instance prefix = Instance::make(view.graph, view.k, view.capacity, *view.requests);
  const Schedule plan = planner_(prefix);
  std::vector<Commit> out;
  next_.reset();
  for (std::size_t v = 0; v < plan.vehicles.size(); ++v) {
    for (const auto& trip : plan.vehicles[v]) {
      if (trip.start == view.now) {
        out.push_back({static_cast<int>(v), trip});
      } else if (trip.start > view.now) {
        if (!next_ || trip.start < *next_) next_ = trip.start;
      } else {
        for (int id : trip.served) {
          if (!(*view.committed)[static_cast<std::size_t>(id)]) {
            throw InvariantViolation(name_ + " planned request " + std::to_string(id) + " into a trip at " +
                                     trip.start.str() + ", already past at " + view.now.str());
          }
        }
      }
    }
  }
  return out;
}

std::optional<Rational> PlanPolicy::wakeup(const SimView& view) {
  if (next_ && *next_ > view.now) return next_;
  return std::nullopt;
}

std::unique_ptr<OnlinePolicy> tree_policy(const Rational& f, const Rational& eps) {
  return std::make_unique<PlanPolicy>(
      "tree", [f, eps](const Instance& prefix) { return run_tree_algorithm(prefix, f, eps).schedule; });
}

std::unique_ptr<OnlinePolicy> speeding_policy(const Rational& f, const SpeedConfig& cfg) {
  return std::make_unique<PlanPolicy>(std::string("speeding-") + tour_mode_name(cfg.mode),
                                      [f, cfg](const Instance& prefix) { return run_speeding(prefix, f, cfg).schedule; });
}

// ------------------------------------------------------------ baselines

std::vector<Commit> FifoPolicy::decide(const SimView& view) {
  const auto& rs = *view.requests;
  std::vector<int> waiting;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (!(*view.committed)[i]) waiting.push_back(static_cast<int>(i));
  }
  std::stable_sort(waiting.begin(), waiting.end(), [&](int a, int b) {
    return rs[static_cast<std::size_t>(a)].arrival < rs[static_cast<std::size_t>(b)].arrival;
  });
  std::vector<Commit> out;
  std::size_t taken = 0;
  for (int v = 0; v < view.k && taken < waiting.size(); ++v) {
    if ((*view.free_at)[static_cast<std::size_t>(v)] > view.now) continue;
    std::size_t want = 1;
    if (batch_) want = view.capacity ? static_cast<std::size_t>(*view.capacity) : waiting.size();
    want = std::min(want, waiting.size() - taken);
    std::vector<int> ids(waiting.begin() + static_cast<std::ptrdiff_t>(taken),
                         waiting.begin() + static_cast<std::ptrdiff_t>(taken + want));
    taken += want;
    std::vector<Vertex> demand;
    for (int id : ids) demand.push_back(rs[static_cast<std::size_t>(id)].vertex);
    const auto tour = tsp_approx(*view.graph, demand);
    for (auto& trip : realize_tour(*view.graph, tour, ids, view.now, view.speed)) out.push_back({v, std::move(trip)});
  }
  return out;
}

// ------------------------------------------------------------ doubling

Rational tree_beta(int k) { return k == 1 ? Rational(8) : Rational(24); }

std::unique_ptr<DoublingPolicy> doubling_tree_policy(int k, const Rational& eps) {
  return std::make_unique<DoublingPolicy>(
      "tree", [eps](const Instance& prefix, const Rational& f) { return run_tree_algorithm(prefix, f, eps).schedule; },
      tree_beta(k));
}

void DoublingPolicy::begin_stage(const SimView& view, const Rational& f, const Rational& delay) {
  if (delay.den() != 1) throw InvariantViolation("doubling delay " + delay.str() + " is not integral");
  stages_.push_back({view.now, f, delay});
  members_.clear();
  const auto& rs = *view.requests;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if ((*view.committed)[i]) continue;
    if (Rational(rs[i].arrival) + delay < view.now) {
      throw InvariantViolation("request " + std::to_string(i) + " would be delayed to before the stage start");
    }
    members_.push_back(static_cast<int>(i));
  }
  seen_ = rs.size();
  next_.reset();
}

DoublingPolicy::Visible DoublingPolicy::visible(const SimView& view) const {
  const Rational delay = stages_.back().delay;
  std::vector<Request> sub;
  Visible out;
  for (int id : members_) {
    const Request& r = (*view.requests)[static_cast<std::size_t>(id)];
    if (Rational(r.arrival) + delay > view.now) continue;
    sub.push_back({r.arrival + delay.num(), r.vertex});
    out.global.push_back(id);
  }
  out.sub = Instance::make(view.graph, view.k, view.capacity, std::move(sub));
  return out;
}

std::vector<Commit> DoublingPolicy::decide(const SimView& view) {
  const auto& rs = *view.requests;
  const MetricGraph& g = *view.graph;
  if (stages_.empty()) {
    if (rs.empty()) return {};
    Length first = -1;
    for (const auto& r : rs) {
      const Length d = g.distance(g.depot(), r.vertex);
      if (first < 0 || d < first) first = d;
    }
    begin_stage(view, Rational(std::max<Length>(first, 1)), Rational(0));
  }
  while (seen_ < rs.size()) members_.push_back(static_cast<int>(seen_++));

  for (;;) {
    if (change_at_) {
      if (view.now < *change_at_) return {};
      const DoublingStage last = stages_.back();
      change_at_.reset();
      begin_stage(view, Rational(2) * last.f, last.delay + Rational(3) * beta_ * last.f);
    }
    const DoublingStage& stage = stages_.back();
    const Rational limit = beta_ * stage.f;
    const Visible vis = visible(view);
    next_.reset();
    std::vector<Commit> out;
    bool trigger = false;
    if (!vis.sub.requests.empty()) {
      const Schedule plan = planner_(vis.sub, stage.f);
      for (std::size_t v = 0; v < plan.vehicles.size(); ++v) {
        for (const auto& trip : plan.vehicles[v]) {
          if (trip.start > view.now) {
            if (!next_ || trip.start < *next_) next_ = trip.start;
            continue;
          }
          if (trip.start < view.now) continue;
          if (Rational(walk_length(g, trip.walk)) > Rational(2) * limit) trigger = true;
          std::vector<Vertex> targets;
          for (int local : trip.served) targets.push_back(vis.sub.requests[static_cast<std::size_t>(local)].vertex);
          const auto offsets = first_visits(g, trip.walk, targets);
          Trip global = trip;
          global.served.clear();
          for (std::size_t j = 0; j < trip.served.size(); ++j) {
            const auto local = static_cast<std::size_t>(trip.served[j]);
            const Rational serve = trip.start + Rational(offsets[j]) / view.speed;
            if (serve - Rational(vis.sub.requests[local].arrival) > limit) trigger = true;
            global.served.push_back(vis.global[local]);
          }
          out.push_back({static_cast<int>(v), std::move(global)});
        }
      }
      // a request left waiting now can no longer make its deadline
      std::vector<char> planned(rs.size(), 0);
      for (const auto& c : out) {
        for (int id : c.trip.served) planned[static_cast<std::size_t>(id)] = 1;
      }
      for (std::size_t j = 0; j < vis.global.size() && !trigger; ++j) {
        const auto id = static_cast<std::size_t>(vis.global[j]);
        if ((*view.committed)[id] || planned[id]) continue;
        const Rational reach = view.now + Rational(g.distance(g.depot(), rs[id].vertex)) / view.speed;
        if (reach >= Rational(vis.sub.requests[j].arrival) + limit) trigger = true;
      }
    }
    if (!trigger) return out;
    Rational done = view.now;
    for (const auto& f : *view.free_at) done = std::max(done, f);
    change_at_ = done;
    if (done > view.now) return {};
  }
}

std::optional<Rational> DoublingPolicy::wakeup(const SimView& view) {
  std::optional<Rational> best;
  auto consider = [&](const Rational& t) {
    if (t > view.now && (!best || t < *best)) best = t;
  };
  if (change_at_) consider(*change_at_);
  if (next_) consider(*next_);
  if (!stages_.empty()) {
    const auto& stage = stages_.back();
    const MetricGraph& g = *view.graph;
    for (int id : members_) {
      const auto i = static_cast<std::size_t>(id);
      if ((*view.committed)[i]) continue;
      const Rational delayed = Rational((*view.requests)[i].arrival) + stage.delay;
      consider(delayed);
      consider(delayed + beta_ * stage.f - Rational(g.distance(g.depot(), (*view.requests)[i].vertex)) / view.speed);
    }
  }
  return best;
}

}  // namespace fdp
