#include "fdp/dispatch.hpp"

#include <algorithm>
#include <numeric>

#include "fdp/errors.hpp"

namespace fdp {

namespace {

std::vector<std::size_t> fifo_order(const std::vector<Job>& jobs) {
  std::vector<std::size_t> idx(jobs.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const Job& x = jobs[a];
    const Job& y = jobs[b];
    if (x.release != y.release) return x.release < y.release;
    if (x.bundle != y.bundle) return x.bundle < y.bundle;
    return x.order < y.order;
  });
  return idx;
}

}  // namespace

std::vector<Assignment> fifo_schedule(const std::vector<Job>& jobs, int k) {
  if (k < 1) throw InputError("need at least one machine");
  std::vector<Rational> free_at(static_cast<std::size_t>(k), Rational(0));
  std::vector<Assignment> out(jobs.size());
  for (std::size_t j : fifo_order(jobs)) {
    if (jobs[j].size < 0) throw InputError("negative job size");
    std::size_t m = 0;
    for (std::size_t i = 1; i < free_at.size(); ++i) {
      if (free_at[i] < free_at[m]) m = i;
    }
    const Rational start = max(jobs[j].release, free_at[m]);
    out[j] = {static_cast<int>(m), start, start + Rational(jobs[j].size)};
    free_at[m] = out[j].end;
  }
  return out;
}

Rational max_job_flow(const std::vector<Job>& jobs, const std::vector<Assignment>& as) {
  Rational best(0);
  for (std::size_t j = 0; j < jobs.size(); ++j) best = max(best, as[j].end - jobs[j].release);
  return best;
}

Rational release_slack(const std::vector<Job>& jobs, int k) {
  std::vector<Rational> times;
  for (const auto& j : jobs) times.push_back(j.release);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  Rational best(0);
  for (std::size_t a = 0; a < times.size(); ++a) {
    for (std::size_t b = a; b < times.size(); ++b) {
      Length total = 0;
      for (const auto& j : jobs) {
        if (j.release >= times[a] && j.release <= times[b]) total += j.size;
      }
      best = max(best, Rational(total) - Rational(k) * (times[b] - times[a]));
    }
  }
  return best;
}

std::vector<Trip> trips_for_group(const RootedTree& t, const std::vector<Request>& requests,
                                  const std::vector<int>& group, const Rational& start) {
  if (group.empty()) throw InputError("cannot build a trip for an empty group");
  const auto prof = subtree_profile(t, vertices_of(requests, group));

  // full closed walk first
  std::vector<Vertex> walk{t.root()};
  std::vector<Length> at{0};  // distance travelled when reaching walk[i]
  std::vector<std::pair<Vertex, std::size_t>> stack{{t.root(), 0}};
  while (!stack.empty()) {
    auto& [u, next] = stack.back();
    const auto& kids = t.children(u);
    while (next < kids.size() && !prof.touches(kids[next])) ++next;
    if (next == kids.size()) {
      const Vertex done = u;
      stack.pop_back();
      if (!stack.empty()) {
        walk.push_back(stack.back().first);
        at.push_back(at.back() + t.parent_length(done));
      }
      continue;
    }
    const Vertex c = kids[next++];
    walk.push_back(c);
    at.push_back(at.back() + t.parent_length(c));
    stack.emplace_back(c, 0);
  }

  std::vector<Trip> trips;
  std::size_t begin = 0;
  for (std::size_t i = 1; i < walk.size(); ++i) {
    if (walk[i] != t.root()) continue;
    Trip trip;
    trip.start = start + Rational(at[begin]);
    trip.walk.assign(walk.begin() + static_cast<std::ptrdiff_t>(begin), walk.begin() + static_cast<std::ptrdiff_t>(i) + 1);
    trips.push_back(std::move(trip));
    begin = i;
  }
  for (int id : group) {
    const Vertex v = requests[static_cast<std::size_t>(id)].vertex;
    for (auto& trip : trips) {
      if (std::find(trip.walk.begin(), trip.walk.end(), v) != trip.walk.end()) {
        trip.served.push_back(id);
        break;
      }
    }
  }
  for (auto& trip : trips) std::sort(trip.served.begin(), trip.served.end());
  return trips;
}

TreeRun run_tree_algorithm(const Instance& inst, const Rational& f, const Rational& eps) {
  if (!inst.is_tree()) throw UnsupportedError("the tree algorithm needs a tree metric");
  if (inst.capacity) {
    throw UnsupportedError("the tree algorithm needs unbounded capacity (got " +
                           std::to_string(*inst.capacity) + ")");
  }
  if (f <= Rational(0)) throw InputError("F must be positive, got " + f.str());
  const RootedTree& t = *inst.tree;
  TreeRun run;
  run.schedule.vehicles.assign(static_cast<std::size_t>(inst.k), {});
  if (inst.requests.empty()) return run;

  const auto buckets = bucketize(inst.requests, f);
  if (inst.k == 1) {
    run.bundles = stream_bundles(buckets, SplitMode::kSingle, t, inst.requests, eps);
    for (const auto& b : run.bundles) {
      const auto members = b.members();
      Group g{members, mst(t, vertices_of(inst.requests, members)), t.root()};
      run.jobs.push_back({b.release, 2 * g.mst, b.index, 0, members});
      run.groups.push_back({std::move(g)});
    }
  } else {
    const BinarizedTree bt = binarize(t);
    run.bundles = stream_bundles(buckets, SplitMode::kMulti, bt.tree, inst.requests, eps);
    for (const auto& b : run.bundles) {
      auto groups = make_groups(bt, inst.requests, b.members(), f);
      for (std::size_t q = 0; q < groups.size(); ++q) {
        run.jobs.push_back({b.release, 2 * groups[q].mst, b.index, static_cast<int>(q), groups[q].requests});
      }
      run.groups.push_back(std::move(groups));
    }
  }

  run.assignments = fifo_schedule(run.jobs, inst.k);
  std::vector<std::size_t> order(run.jobs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return run.assignments[a].start < run.assignments[b].start;
  });
  for (std::size_t j : order) {
    auto trips = trips_for_group(t, inst.requests, run.jobs[j].requests, run.assignments[j].start);
    auto& itinerary = run.schedule.vehicles[static_cast<std::size_t>(run.assignments[j].machine)];
    for (auto& trip : trips) itinerary.push_back(std::move(trip));
  }
  return run;
}

}  // namespace fdp
