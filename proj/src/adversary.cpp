#include "fdp/adversary.hpp"

#include <algorithm>
#include <map>

#include "fdp/errors.hpp"
#include "fdp/oracle.hpp"

namespace fdp {

Lean parse_lean(char c) {
  if (c == 'L' || c == 'l') return Lean::kLeft;
  if (c == 'R' || c == 'r') return Lean::kRight;
  throw InputError(std::string("lean must be L or R, got '") + c + "'");
}

char lean_char(Lean s) { return s == Lean::kLeft ? 'L' : 'R'; }

Lean opposite(Lean s) { return s == Lean::kLeft ? Lean::kRight : Lean::kLeft; }

namespace {

constexpr Length kDepotEdge = 1;  // 1/2 in half units
constexpr Length kPathEdge = 2;

std::size_t slot(int i, Lean s, int j) {
  return (static_cast<std::size_t>(i) * 2 + (s == Lean::kLeft ? 0 : 1)) * 7 + static_cast<std::size_t>(j - 1);
}

/// o, stops..., o as a walk; consecutive stops must be adjacent.
std::vector<Vertex> closed(const std::vector<Vertex>& stops) {
  std::vector<Vertex> walk{0};
  walk.insert(walk.end(), stops.begin(), stops.end());
  walk.push_back(0);
  return walk;
}

Instance sorted_instance(std::shared_ptr<const MetricGraph> g, int k, Capacity c, std::vector<Request> rs) {
  std::stable_sort(rs.begin(), rs.end(), [](const Request& a, const Request& b) { return a.arrival < b.arrival; });
  return Instance::make(std::move(g), k, c, std::move(rs));
}

/// Edges of `copies` gadgets glued at o; copy c maps vertex v > 0 to
/// v + c (nbar - 1).
std::vector<Edge> glued_edges(const BaseGadget& gadget, int copies) {
  const int shift = gadget.graph()->size() - 1;
  std::vector<Edge> edges;
  for (int c = 0; c < copies; ++c) {
    for (const auto& e : gadget.graph()->edges()) {
      auto map = [&](Vertex v) { return v == 0 ? v : static_cast<Vertex>(v + c * shift); };
      edges.push_back({map(e.u), map(e.v), e.length});
    }
  }
  return edges;
}

}  // namespace

BaseGadget::BaseGadget(int p) : p_(p) {
  if (p < 2) throw InputError("gadget parameter p must be at least 2, got " + std::to_string(p));
  ids_.assign(static_cast<std::size_t>(p + 1) * 14, -1);
  Vertex next = 1;
  for (int i = 0; i <= p; ++i) {
    for (Lean s : {Lean::kLeft, Lean::kRight}) {
      for (int j = 1; j <= 7; ++j) {
        if (i == 0 && s == Lean::kRight && j != 4) {
          ids_[slot(i, s, j)] = ids_[slot(i, Lean::kLeft, j)];
        } else {
          ids_[slot(i, s, j)] = next++;
        }
      }
    }
  }
  std::vector<Edge> edges;
  for (int i = 0; i <= p; ++i) {
    for (Lean s : {Lean::kLeft, Lean::kRight}) {
      if (i > 0 || s == Lean::kLeft) {
        edges.push_back({0, vertex(i, s, 1), kDepotEdge});
        edges.push_back({0, vertex(i, s, 7), kDepotEdge});
      }
      for (int j = 1; j <= 6; ++j) {
        if (i == 0 && s == Lean::kRight && j != 3 && j != 4) continue;  // shared with the left side
        edges.push_back({vertex(i, s, j), vertex(i, s, j + 1), kPathEdge});
      }
      if (i > 0) {
        edges.push_back({vertex(i, s, 3), vertex(i - 1, s, 4), kPathEdge});
        edges.push_back({vertex(i - 1, s, 4), vertex(i, s, 5), kPathEdge});
      }
    }
  }
  graph_ = std::make_shared<const MetricGraph>(MetricGraph::dense(next, edges, 0));
}

Vertex BaseGadget::vertex(int i, Lean s, int j) const {
  if (i < 0 || i > p_ || j < 1 || j > 7) throw InputError("gadget vertex out of range");
  return ids_[slot(i, s, j)];
}

std::vector<Vertex> BaseGadget::path_p(int i, Lean s) const {
  std::vector<Vertex> out;
  for (int j = 1; j <= 7; ++j) out.push_back(vertex(i, s, j));
  return out;
}

std::vector<Vertex> BaseGadget::path_q(int i, Lean s) const {
  if (i < 1) throw InputError("Q paths start at i = 1");
  auto out = path_p(i, s);
  out[3] = vertex(i - 1, s, 4);
  return out;
}

Time BaseGadget::horizon() const { return 7 * (2 * static_cast<Time>(p_) + 1) * kGadgetScale; }

Time BaseGadget::segment_start(int i) const {
  return i == 0 ? 0 : 7 * (2 * static_cast<Time>(i) - 1) * kGadgetScale;
}

std::vector<Request> BaseGadget::requests(Lean lean) const {
  std::vector<Request> rs;
  for (int i = 0; i <= p_; ++i) {
    std::vector<Vertex> seen;
    for (Lean s : {Lean::kLeft, Lean::kRight}) {
      for (int j = 1; j <= 7; ++j) {
        if (i == p_ && j == 4 && s != lean) continue;
        const Vertex v = vertex(i, s, j);
        if (std::find(seen.begin(), seen.end(), v) != seen.end()) continue;
        seen.push_back(v);
        rs.push_back({segment_start(i), v});
      }
    }
  }
  return rs;
}

Schedule BaseGadget::solution(Lean lean) const {
  const auto rs = requests(lean);
  std::map<std::pair<Time, Vertex>, int> id;
  for (std::size_t r = 0; r < rs.size(); ++r) id[{rs[r].arrival, rs[r].vertex}] = static_cast<int>(r);
  auto trip = [&](Time start, const std::vector<Vertex>& stops, std::vector<std::pair<Time, Vertex>> wanted) {
    Trip t{Rational(start), closed(stops), {}};
    for (const auto& key : wanted) {
      if (auto it = id.find(key); it != id.end()) t.served.push_back(it->second);
    }
    std::sort(t.served.begin(), t.served.end());
    return t;
  };
  const Lean other = opposite(lean);
  const Time leg = 7 * kGadgetScale;
  Schedule sch;
  sch.vehicles.resize(1);
  auto& v = sch.vehicles[0];
  {
    std::vector<std::pair<Time, Vertex>> wanted;
    for (Vertex x : path_p(0, lean)) wanted.emplace_back(0, x);
    v.push_back(trip(0, path_p(0, lean), wanted));
  }
  for (int i = 1; i <= p_; ++i) {
    const Time b = segment_start(i);
    std::vector<std::pair<Time, Vertex>> q{{segment_start(i - 1), vertex(i - 1, other, 4)}};
    for (int j : {1, 2, 3, 5, 6, 7}) q.emplace_back(b, vertex(i, other, j));
    v.push_back(trip(b, path_q(i, other), q));
    std::vector<std::pair<Time, Vertex>> pl;
    for (Vertex x : path_p(i, lean)) pl.emplace_back(b, x);
    v.push_back(trip(b + leg, path_p(i, lean), pl));
  }
  return sch;
}

Instance base_instance(int p, Lean lean) {
  BaseGadget g(p);
  return Instance::make(g.graph(), 1, std::nullopt, g.requests(lean));
}

TourCertificate certify_base_tour(int p, Lean lean) {
  BaseGadget gadget(p);
  const MetricGraph& g = *gadget.graph();
  TourCertificate cert;
  cert.walk = {0};
  auto cycle = [&](const std::vector<Vertex>& stops) {
    cert.walk.insert(cert.walk.end(), stops.begin(), stops.end());
    cert.walk.push_back(0);
  };
  for (int i = 0; i <= p; ++i) cycle(gadget.path_p(i, lean));
  for (int i = 1; i <= p; ++i) cycle(gadget.path_q(i, opposite(lean)));
  cert.length = walk_length(g, cert.walk);

  const Vertex skipped = gadget.vertex(p, opposite(lean), 4);
  std::vector<Vertex> targets;
  for (Vertex v = 1; v < g.size(); ++v) {
    if (v != skipped) targets.push_back(v);
  }
  for (Vertex v : targets) {
    if (std::find(cert.walk.begin(), cert.walk.end(), v) == cert.walk.end()) {
      throw InvariantViolation("certificate tour misses vertex " + std::to_string(v));
    }
  }
  cert.lower_bound = counting_tsp_lower_bound(g, targets);
  const Length expected = 7 * (2 * static_cast<Length>(p) + 1) * kGadgetScale;
  if (cert.length != expected || cert.lower_bound != expected) {
    throw InvariantViolation("base tour length " + std::to_string(cert.length) + " and lower bound " +
                             std::to_string(cert.lower_bound) + " differ from " + std::to_string(expected) +
                             " half units");
  }
  return cert;
}

Instance legs_instance(int p, const std::vector<Lean>& leans) {
  if (static_cast<int>(leans.size()) != p) {
    throw InputError("legs instance needs one lean per phase: " + std::to_string(p) + " expected, got " +
                     std::to_string(leans.size()));
  }
  BaseGadget gadget(p);
  const int nbar = gadget.graph()->size();
  auto edges = gadget.graph()->edges();
  for (int j = 0; j < p; ++j) edges.push_back({0, static_cast<Vertex>(nbar + j), kDepotEdge});
  auto g = std::make_shared<const MetricGraph>(MetricGraph::dense(nbar + p, edges, 0));

  const Time phase = gadget.horizon() + static_cast<Time>(p) * kGadgetScale;
  std::vector<Request> rs;
  for (int h = 1; h <= p; ++h) {
    const Time start = (h - 1) * phase;
    for (const auto& r : gadget.requests(leans[static_cast<std::size_t>(h - 1)])) {
      rs.push_back({start + r.arrival, r.vertex});
    }
    for (int j = 1; j <= p; ++j) {
      rs.push_back({start + gadget.horizon() + (j - 1) * kGadgetScale, static_cast<Vertex>(nbar + j - 1)});
    }
  }
  return sorted_instance(g, 1, std::nullopt, std::move(rs));
}

int speeding_p(const Rational& eps) {
  if (eps <= Rational(0) || eps >= Rational(1)) throw InputError("eps must lie in (0, 1), got " + eps.str());
  const Rational p = (Rational(1) + eps) / (Rational(20) * eps);
  if (p.den() != 1 || p < Rational(2)) {
    throw InputError("eps = " + eps.str() + " gives p = " + p.str() + "; need an integer p >= 2");
  }
  return static_cast<int>(p.num());
}

Instance speeding_instance(const Rational& eps, std::vector<Lean> leans) {
  const int p = speeding_p(eps);
  if (leans.empty()) leans.assign(static_cast<std::size_t>(p), Lean::kLeft);
  if (static_cast<int>(leans.size()) != p) {
    throw InputError("speeding instance needs " + std::to_string(p) + " leans, got " + std::to_string(leans.size()));
  }
  BaseGadget gadget(p);
  const int shift = gadget.graph()->size() - 1;
  auto g = std::make_shared<const MetricGraph>(MetricGraph::dense(p * shift + 1, glued_edges(gadget, p), 0));
  std::vector<Request> rs;
  for (int h = 1; h <= p; ++h) {
    for (const auto& r : gadget.requests(leans[static_cast<std::size_t>(h - 1)])) {
      rs.push_back({(h - 1) * gadget.horizon() + r.arrival, static_cast<Vertex>(r.vertex + (h - 1) * shift)});
    }
  }
  return sorted_instance(g, 1, std::nullopt, std::move(rs));
}

Instance hamiltonian_instance(const MetricGraph& gbar) {
  const int nbar = gbar.size();
  if (nbar < 2) throw InputError("hamiltonian instance needs at least two vertices");
  const Vertex o = gbar.depot();
  std::vector<Edge> edges;
  for (const auto& e : gbar.edges()) edges.push_back({e.u, e.v, 1});
  for (int i = 0; i < nbar; ++i) edges.push_back({o, static_cast<Vertex>(nbar + i), nbar});
  auto g = std::make_shared<const MetricGraph>(MetricGraph::dense(2 * nbar, edges, o));

  const Time n = nbar;
  const Time phase = (2 * n + 1) * n;
  std::vector<Request> rs;
  for (Time h = 1; h <= n * n; ++h) {
    const Time b = (h - 1) * phase;
    for (Vertex v = 0; v < nbar; ++v) {
      if (v != o) rs.push_back({b, v});
    }
    for (Time i = 1; i <= n; ++i) rs.push_back({b + (2 * i - 1) * n, static_cast<Vertex>(nbar + i - 1)});
  }
  return sorted_instance(g, 1, std::nullopt, std::move(rs));
}

Instance copies_instance(const MetricGraph& gbar, Length tour_bound, Capacity capacity) {
  const int nbar = gbar.size();
  if (nbar < 2) throw InputError("copies instance needs at least two vertices");
  if (tour_bound <= 0) throw InputError("tour bound must be positive");
  const Vertex o = gbar.depot();
  auto map = [&](int copy, Vertex v) -> Vertex {
    if (v == o) return 0;
    const int rank = v < o ? v : v - 1;
    return static_cast<Vertex>(1 + copy * (nbar - 1) + rank);
  };
  std::vector<Edge> edges;
  for (int c = 0; c < nbar; ++c) {
    for (const auto& e : gbar.edges()) edges.push_back({map(c, e.u), map(c, e.v), e.length});
  }
  auto g = std::make_shared<const MetricGraph>(MetricGraph::dense(nbar * (nbar - 1) + 1, edges, 0));
  std::vector<Request> rs;
  for (int h = 1; h <= nbar; ++h) {
    for (Vertex v = 0; v < nbar; ++v) {
      if (v != o) rs.push_back({(h - 1) * tour_bound, map(h - 1, v)});
    }
  }
  return sorted_instance(g, 1, capacity, std::move(rs));
}

// ------------------------------------------------------------ capacity

namespace {

std::shared_ptr<const MetricGraph> capacity_tree() {
  return std::make_shared<const MetricGraph>(MetricGraph::dense(5, {{0, 1, 1}, {1, 2, 1}, {1, 3, 1}, {0, 4, 1}}, 0));
}

/// Requests of one phase in arrival order; the v* slot holds `vstar`.
std::vector<Request> phase_plan(int p, Time b, Vertex vstar) {
  using A = CapacityAdversary;
  std::vector<Request> out{{b, A::kV1}, {b, A::kV2}, {b, A::kV3}};
  for (Time j = 1; j <= p - 1; ++j) {
    for (Vertex v : {A::kV2, A::kV2, A::kV3, A::kV3}) out.push_back({b + 8 * j - 4, v});
  }
  out.push_back({b + 8 * static_cast<Time>(p) - 4, vstar});
  for (Time j = 1; j <= p; ++j) {
    out.push_back({b + 8 * static_cast<Time>(p) + 2 * (j - 1), A::kV4});
    out.push_back({b + 8 * static_cast<Time>(p) + 2 * (j - 1), A::kV4});
  }
  return out;
}

}  // namespace

CapacityAdversary::CapacityAdversary(int p) : p_(p), graph_(capacity_tree()) {
  if (p < 2) throw InputError("capacity adversary needs p >= 2, got " + std::to_string(p));
  for (int h = 1; h <= p; ++h) {
    for (const auto& r : phase_plan(p, phase_start(h), -1)) plan_.push_back({r.arrival, r.vertex});
  }
  v1_request_.assign(static_cast<std::size_t>(p), -1);
  v1_paired_with_v2_.assign(static_cast<std::size_t>(p), std::nullopt);
}

std::optional<Time> CapacityAdversary::next_arrival() const {
  if (next_ == plan_.size()) return std::nullopt;
  return plan_[next_].arrival;
}

std::vector<Request> CapacityAdversary::release_until(Time t) {
  std::vector<Request> out;
  while (next_ < plan_.size() && plan_[next_].arrival <= t) {
    const auto h = static_cast<std::size_t>(next_ / static_cast<std::size_t>(requests_per_phase()));
    Request r{plan_[next_].arrival, plan_[next_].vertex};
    if (r.vertex < 0) {
      const auto& seen = v1_paired_with_v2_[h];
      r.vertex = (!seen || *seen) ? kV2 : kV3;
      choices_.push_back(r.vertex);
    }
    if (r.vertex == kV1 && v1_request_[h] < 0) v1_request_[h] = static_cast<int>(released_.size());
    released_.push_back(r);
    out.push_back(r);
    ++next_;
  }
  return out;
}

void CapacityAdversary::observe_trip(const Rational& at, const std::vector<int>& served) {
  for (std::size_t h = 0; h < v1_request_.size(); ++h) {
    const int id = v1_request_[h];
    if (id < 0 || v1_paired_with_v2_[h]) continue;
    if (std::find(served.begin(), served.end(), id) == served.end()) continue;
    const Time decide = phase_start(static_cast<int>(h) + 1) + 8 * static_cast<Time>(p_) - 4;
    if (at >= Rational(decide)) continue;
    v1_paired_with_v2_[h] = std::any_of(served.begin(), served.end(), [&](int other) {
      return released_[static_cast<std::size_t>(other)].vertex == kV2;
    });
  }
}

Instance CapacityAdversary::realized() const {
  if (next_ != plan_.size()) throw InputError("capacity adversary has unreleased requests");
  return Instance::make(graph_, 1, 2, released_);
}

std::vector<Request> capacity_requests(int p, const std::vector<Vertex>& choices) {
  if (p < 2) throw InputError("capacity instance needs p >= 2");
  if (static_cast<int>(choices.size()) != p) throw InputError("need one v* per phase");
  std::vector<Request> rs;
  for (int h = 1; h <= p; ++h) {
    const Vertex c = choices[static_cast<std::size_t>(h - 1)];
    if (c != CapacityAdversary::kV2 && c != CapacityAdversary::kV3) throw InputError("v* must be v2 or v3");
    auto part = phase_plan(p, static_cast<Time>(10) * (h - 1) * p, c);
    rs.insert(rs.end(), part.begin(), part.end());
  }
  return rs;
}

Schedule capacity_reference_schedule(int p, const std::vector<Vertex>& choices) {
  using A = CapacityAdversary;
  const auto rs = capacity_requests(p, choices);
  std::multimap<std::pair<Time, Vertex>, int> ids;
  for (std::size_t i = 0; i < rs.size(); ++i) ids.emplace(std::make_pair(rs[i].arrival, rs[i].vertex), static_cast<int>(i));
  auto take = [&](Time t, Vertex v) {
    auto it = ids.find({t, v});
    if (it == ids.end()) throw InvariantViolation("reference schedule lost a request");
    const int id = it->second;
    ids.erase(it);
    return id;
  };
  Schedule sch;
  sch.vehicles.resize(1);
  auto& out = sch.vehicles[0];
  auto branch = [](Vertex v) { return std::vector<Vertex>{0, A::kV1, v, A::kV1, 0}; };
  for (int h = 1; h <= p; ++h) {
    const Time b = static_cast<Time>(10) * (h - 1) * p;
    const Vertex x = choices[static_cast<std::size_t>(h - 1)];
    const Vertex y = x == A::kV2 ? A::kV3 : A::kV2;
    out.push_back({Rational(b), {0, A::kV1, y, A::kV1, 0}, {take(b, A::kV1), take(b, y)}});
    int pending = take(b, x);
    for (Time j = 1; j <= p - 1; ++j) {
      const Time t = b + 8 * j - 4;
      out.push_back({Rational(t), branch(x), {pending, take(t, x)}});
      out.push_back({Rational(t + 4), branch(y), {take(t, y), take(t, y)}});
      pending = take(t, x);
    }
    const Time last = b + 8 * static_cast<Time>(p) - 4;
    out.push_back({Rational(last), branch(x), {pending, take(last, x)}});
    for (Time j = 1; j <= p; ++j) {
      const Time t = b + 8 * static_cast<Time>(p) + 2 * (j - 1);
      out.push_back({Rational(t), {0, A::kV4, 0}, {take(t, A::kV4), take(t, A::kV4)}});
    }
  }
  for (auto& trip : out) std::sort(trip.served.begin(), trip.served.end());
  return sch;
}

}  // namespace fdp
