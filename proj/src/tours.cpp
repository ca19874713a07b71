#include "fdp/tours.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <map>

#include "fdp/errors.hpp"

namespace fdp {

namespace {

constexpr Length kInf = std::numeric_limits<Length>::max() / 4;

std::vector<Vertex> distinct(std::vector<Vertex> vs) {
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

}  // namespace

Length stops_length(const MetricGraph& g, const std::vector<Vertex>& stops) {
  Length total = 0;
  for (std::size_t i = 1; i < stops.size(); ++i) total += g.distance(stops[i - 1], stops[i]);
  return total;
}

std::string check_tour(const MetricGraph& g, const std::vector<Vertex>& demand, Capacity capacity,
                       const CvrpTour& tour) {
  const Vertex o = g.depot();
  if (tour.stops.empty() || tour.stops.front() != o || tour.stops.back() != o) return "tour must start and end at the depot";
  if (tour.served.size() != tour.stops.size()) return "served lists do not match the stops";
  if (stops_length(g, tour.stops) != tour.length) return "recorded length is wrong";
  std::vector<int> count(demand.size(), 0);
  int load = 0;
  for (std::size_t i = 0; i < tour.stops.size(); ++i) {
    if (tour.stops[i] == o) load = 0;
    for (int j : tour.served[i]) {
      if (j < 0 || static_cast<std::size_t>(j) >= demand.size()) return "unknown demand";
      if (demand[static_cast<std::size_t>(j)] != tour.stops[i]) return "demand served away from its vertex";
      ++count[static_cast<std::size_t>(j)];
      ++load;
    }
    if (capacity && load > *capacity) return "segment exceeds capacity";
  }
  for (int c : count) {
    if (c != 1) return "demand not served exactly once";
  }
  return {};
}

CvrpTour tsp_approx(const MetricGraph& g, const std::vector<Vertex>& demand) {
  const Vertex o = g.depot();
  CvrpTour tour;
  if (demand.empty()) {
    tour.stops = {o};
    tour.served = {{}};
    return tour;
  }
  std::vector<Vertex> nodes = distinct(demand);
  nodes.erase(std::remove(nodes.begin(), nodes.end(), o), nodes.end());
  nodes.insert(nodes.begin(), o);

  // Prim from the depot; ties broken by position (ascending vertex id)
  const std::size_t m = nodes.size();
  std::vector<Length> best(m, kInf);
  std::vector<std::size_t> link(m, 0);
  std::vector<char> in(m, 0);
  std::vector<std::vector<std::size_t>> kids(m);
  best[0] = 0;
  for (std::size_t step = 0; step < m; ++step) {
    std::size_t u = m;
    for (std::size_t i = 0; i < m; ++i) {
      if (!in[i] && (u == m || best[i] < best[u])) u = i;
    }
    in[u] = 1;
    if (u != 0) kids[link[u]].push_back(u);
    for (std::size_t i = 0; i < m; ++i) {
      if (in[i]) continue;
      const Length d = g.distance(nodes[u], nodes[i]);
      if (d < best[i]) {
        best[i] = d;
        link[i] = u;
      }
    }
  }
  for (auto& k : kids) std::sort(k.begin(), k.end());

  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    tour.stops.push_back(nodes[u]);
    for (auto it = kids[u].rbegin(); it != kids[u].rend(); ++it) stack.push_back(*it);
  }
  tour.stops.push_back(o);
  tour.served.assign(tour.stops.size(), {});
  std::map<Vertex, std::size_t> stop_of;
  for (std::size_t i = 1; i + 1 < tour.stops.size(); ++i) stop_of[tour.stops[i]] = i;
  for (std::size_t j = 0; j < demand.size(); ++j) {
    if (demand[j] == o) throw InputError("demand at the depot");
    tour.served[stop_of.at(demand[j])].push_back(static_cast<int>(j));
  }
  tour.length = stops_length(g, tour.stops);
  return tour;
}

TspResult held_karp(const MetricGraph& g, const std::vector<Vertex>& vertices, int limit) {
  const Vertex o = g.depot();
  std::vector<Vertex> nodes = distinct(vertices);
  nodes.erase(std::remove(nodes.begin(), nodes.end(), o), nodes.end());
  const int m = static_cast<int>(nodes.size());
  if (m > limit) throw UnsupportedError("Held-Karp limited to " + std::to_string(limit) + " vertices, got " + std::to_string(m));
  TspResult res;
  if (m == 0) {
    res.order = {o};
    return res;
  }
  const std::size_t full = (std::size_t{1} << m) - 1;
  std::vector<Length> dp((full + 1) * static_cast<std::size_t>(m), kInf);
  std::vector<int> from((full + 1) * static_cast<std::size_t>(m), -1);
  auto at = [m](std::size_t s, int j) { return s * static_cast<std::size_t>(m) + static_cast<std::size_t>(j); };
  for (int j = 0; j < m; ++j) dp[at(std::size_t{1} << j, j)] = g.distance(o, nodes[j]);
  for (std::size_t s = 1; s <= full; ++s) {
    for (int j = 0; j < m; ++j) {
      if (!((s >> j) & 1U) || dp[at(s, j)] >= kInf) continue;
      for (int nx = 0; nx < m; ++nx) {
        if ((s >> nx) & 1U) continue;
        const std::size_t t = s | (std::size_t{1} << nx);
        const Length cand = dp[at(s, j)] + g.distance(nodes[j], nodes[nx]);
        if (cand < dp[at(t, nx)]) {
          dp[at(t, nx)] = cand;
          from[at(t, nx)] = j;
        }
      }
    }
  }
  int last = 0;
  Length best = kInf;
  for (int j = 0; j < m; ++j) {
    const Length cand = dp[at(full, j)] + g.distance(nodes[j], o);
    if (cand < best) {
      best = cand;
      last = j;
    }
  }
  std::vector<Vertex> rev;
  std::size_t s = full;
  for (int j = last; j != -1;) {
    rev.push_back(nodes[j]);
    const int prev = from[at(s, j)];
    s &= ~(std::size_t{1} << j);
    j = prev;
  }
  res.order.push_back(o);
  res.order.insert(res.order.end(), rev.rbegin(), rev.rend());
  res.order.push_back(o);
  res.length = best;
  return res;
}

CvrpTour exact_cvrp(const MetricGraph& g, const std::vector<Vertex>& demand, Capacity capacity, int limit) {
  const Vertex o = g.depot();
  const int m = static_cast<int>(demand.size());
  if (m > limit) {
    throw UnsupportedError("exact CVRP limited to " + std::to_string(limit) + " demands, got " + std::to_string(m));
  }
  for (Vertex v : demand) {
    if (v == o) throw InputError("demand at the depot");
  }
  CvrpTour tour;
  if (m == 0) {
    tour.stops = {o};
    tour.served = {{}};
    return tour;
  }
  const int cap = capacity ? std::min(*capacity, m) : m;
  const std::size_t full = (std::size_t{1} << m) - 1;
  auto at = [m](std::size_t s, int j) { return s * static_cast<std::size_t>(m) + static_cast<std::size_t>(j); };

  // open paths from the depot over demand subsets
  std::vector<Length> dp((full + 1) * static_cast<std::size_t>(m), kInf);
  std::vector<int> from((full + 1) * static_cast<std::size_t>(m), -1);
  for (int j = 0; j < m; ++j) dp[at(std::size_t{1} << j, j)] = g.distance(o, demand[static_cast<std::size_t>(j)]);
  for (std::size_t s = 1; s <= full; ++s) {
    if (std::popcount(s) >= cap) continue;
    for (int j = 0; j < m; ++j) {
      if (!((s >> j) & 1U) || dp[at(s, j)] >= kInf) continue;
      for (int nx = 0; nx < m; ++nx) {
        if ((s >> nx) & 1U) continue;
        const std::size_t t = s | (std::size_t{1} << nx);
        const Length cand = dp[at(s, j)] + g.distance(demand[static_cast<std::size_t>(j)], demand[static_cast<std::size_t>(nx)]);
        if (cand < dp[at(t, nx)]) {
          dp[at(t, nx)] = cand;
          from[at(t, nx)] = j;
        }
      }
    }
  }
  std::vector<Length> route(full + 1, kInf);
  std::vector<int> route_last(full + 1, -1);
  for (std::size_t s = 1; s <= full; ++s) {
    if (std::popcount(s) > cap) continue;
    for (int j = 0; j < m; ++j) {
      if (!((s >> j) & 1U) || dp[at(s, j)] >= kInf) continue;
      const Length cand = dp[at(s, j)] + g.distance(demand[static_cast<std::size_t>(j)], o);
      if (cand < route[s]) {
        route[s] = cand;
        route_last[s] = j;
      }
    }
  }

  // partition into routes; the route containing the lowest demand is peeled first
  std::vector<Length> part(full + 1, kInf);
  std::vector<std::size_t> pick(full + 1, 0);
  part[0] = 0;
  for (std::size_t s = 1; s <= full; ++s) {
    const std::size_t low = s & (~s + 1);
    const std::size_t rest = s ^ low;
    // enumerate subsets of rest, add low
    for (std::size_t sub = rest;; sub = (sub - 1) & rest) {
      const std::size_t t = sub | low;
      if (route[t] < kInf && part[s ^ t] < kInf) {
        const Length cand = route[t] + part[s ^ t];
        if (cand < part[s]) {
          part[s] = cand;
          pick[s] = t;
        }
      }
      if (sub == 0) break;
    }
  }

  tour.stops.push_back(o);
  tour.served.emplace_back();
  for (std::size_t s = full; s != 0; s ^= pick[s]) {
    std::size_t t = pick[s];
    std::vector<int> seq;
    for (int j = route_last[t]; j != -1;) {
      seq.push_back(j);
      const int prev = from[at(t, j)];
      t &= ~(std::size_t{1} << j);
      j = prev;
    }
    std::reverse(seq.begin(), seq.end());
    for (int j : seq) {
      const Vertex v = demand[static_cast<std::size_t>(j)];
      if (tour.stops.back() == v) {
        tour.served.back().push_back(j);
      } else {
        tour.stops.push_back(v);
        tour.served.push_back({j});
      }
    }
    tour.stops.push_back(o);
    tour.served.emplace_back();
  }
  for (auto& s : tour.served) std::sort(s.begin(), s.end());
  tour.length = stops_length(g, tour.stops);
  if (tour.length != part[full]) throw InvariantViolation("exact CVRP reconstruction mismatch");
  return tour;
}

CvrpTour cvrp_approx(const MetricGraph& g, const std::vector<Vertex>& demand, Capacity capacity) {
  CvrpTour base = tsp_approx(g, demand);
  const int m = static_cast<int>(demand.size());
  if (!capacity || *capacity >= m) return base;
  if (*capacity < 1) throw InputError("capacity must be positive");
  const int c = *capacity;
  const Vertex o = g.depot();

  std::vector<int> order;  // demands in tour order
  for (const auto& s : base.served) order.insert(order.end(), s.begin(), s.end());

  CvrpTour best;
  bool have = false;
  for (int offset = 0; offset < c; ++offset) {
    CvrpTour cand;
    cand.stops.push_back(o);
    cand.served.emplace_back();
    int in_chunk = 0;
    int chunk_size = offset == 0 ? c : offset;
    for (int j : order) {
      if (in_chunk == chunk_size) {
        cand.stops.push_back(o);
        cand.served.emplace_back();
        in_chunk = 0;
        chunk_size = c;
      }
      const Vertex v = demand[static_cast<std::size_t>(j)];
      if (cand.stops.back() == v) {
        cand.served.back().push_back(j);
      } else {
        cand.stops.push_back(v);
        cand.served.push_back({j});
      }
      ++in_chunk;
    }
    cand.stops.push_back(o);
    cand.served.emplace_back();
    cand.length = stops_length(g, cand.stops);
    if (!have || cand.length < best.length) {
      best = std::move(cand);
      have = true;
    }
  }
  return best;
}

std::vector<CvrpTour> split_tour(const MetricGraph& g, const CvrpTour& tour, const Rational& cap) {
  if (cap <= Rational(0)) throw InputError("split cap must be positive");
  const Vertex o = g.depot();
  std::vector<CvrpTour> out;
  if (tour.stops.size() <= 2) return out;
  const std::size_t z = tour.stops.size() - 2;  // inner stops are 1..z
  std::size_t begin = 1;
  while (begin <= z) {
    std::size_t end = begin;
    Length inner = 0;
    while (end < z) {
      const Length step = g.distance(tour.stops[end], tour.stops[end + 1]);
      if (Rational(inner + step) > cap) break;
      inner += step;
      ++end;
    }
    CvrpTour sub;
    sub.stops.push_back(o);
    sub.served.emplace_back();
    for (std::size_t i = begin; i <= end; ++i) {
      sub.stops.push_back(tour.stops[i]);
      sub.served.push_back(tour.served[i]);
    }
    sub.stops.push_back(o);
    sub.served.emplace_back();
    sub.length = stops_length(g, sub.stops);
    out.push_back(std::move(sub));
    begin = end + 1;
  }
  return out;
}

std::vector<Trip> realize_tour(const MetricGraph& g, const CvrpTour& tour, const std::vector<int>& requests,
                               const Rational& start, const Rational& speed) {
  const Vertex o = g.depot();
  std::vector<Vertex> walk{o};
  std::vector<Length> dist{0};
  std::vector<std::size_t> stop_pos(tour.stops.size(), 0);
  for (std::size_t i = 1; i < tour.stops.size(); ++i) {
    const Vertex from = walk.back();
    const Vertex to = tour.stops[i];
    if (from != to) {
      const auto path = g.shortest_path(from, to);
      for (std::size_t p = 1; p < path.size(); ++p) {
        dist.push_back(dist.back() + *g.edge_length(path[p - 1], path[p]));
        walk.push_back(path[p]);
      }
    }
    stop_pos[i] = walk.size() - 1;
  }

  std::vector<Trip> trips;
  std::vector<std::pair<std::size_t, std::size_t>> bounds;  // walk index range of each trip
  std::size_t begin = 0;
  for (std::size_t p = 1; p < walk.size(); ++p) {
    if (walk[p] != o) continue;
    if (p - begin >= 2) {
      Trip t;
      t.start = start + Rational(dist[begin]) / speed;
      t.walk.assign(walk.begin() + static_cast<std::ptrdiff_t>(begin), walk.begin() + static_cast<std::ptrdiff_t>(p) + 1);
      trips.push_back(std::move(t));
      bounds.emplace_back(begin, p);
    }
    begin = p;
  }
  for (std::size_t i = 0; i < tour.stops.size(); ++i) {
    if (tour.served[i].empty()) continue;
    const std::size_t pos = stop_pos[i];
    std::size_t which = 0;
    while (which < bounds.size() && !(bounds[which].first < pos && pos < bounds[which].second)) ++which;
    if (which == bounds.size()) throw InvariantViolation("tour stop outside every trip");
    for (int j : tour.served[i]) trips[which].served.push_back(requests[static_cast<std::size_t>(j)]);
  }
  std::vector<Trip> out;
  for (auto& t : trips) {
    if (t.served.empty()) continue;
    std::sort(t.served.begin(), t.served.end());
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace fdp
