#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "fdp/instance.hpp"
#include "fdp/metric.hpp"

namespace fdp {

struct OptResult {
  Rational max_flow;
  Schedule witness;
  std::int64_t nodes = 0;  // search nodes expanded
};

/// Exact minimum max flow at unit speed by branch and bound over trips listed
/// in start order. Each trip serves a request set in some order of its
/// distinct vertices along shortest paths and starts as soon as its vehicle
/// is back and all its requests have arrived. Throws UnsupportedError above
/// `limit` requests.
OptResult optimal_max_flow(const Instance& inst, int limit = 6);

/// S_i: the requests of every witness trip whose earliest request lies in
/// R_i, keyed by i. Throws InputError when the witness is invalid, exceeds F,
/// or has a trip whose arrivals lie more than F apart.
std::map<std::int64_t, std::vector<int>> opt_partition(const Instance& inst, const Schedule& witness,
                                                       const Rational& f);

/// c(R', e) = ceil(mst_e(R') / F) per edge, indexed by child vertex.
std::vector<std::int64_t> trip_count_lower_bound(const RootedTree& t, const VertexSet& rp, const Rational& f);

/// Per tree edge (by child vertex), the number of trips that serve at least
/// one request of `subset` and traverse the edge.
std::vector<std::int64_t> edge_trip_counts(const RootedTree& t, const Schedule& sch, const std::vector<int>& subset);

/// delta * |V' \ {o}| with delta the smallest of the pairwise non-depot
/// distances in V' and twice the depot distances. Throws InputError naming
/// the offending pair when delta is 0.
Length counting_tsp_lower_bound(const MetricGraph& g, const std::vector<Vertex>& vp);

}  // namespace fdp
