#pragma once

#include <vector>

#include "fdp/instance.hpp"
#include "fdp/metric.hpp"

namespace fdp {

/// Closed tour over unit demands. `demand[j]` is the vertex of demand j;
/// stops are joined by shortest paths. A depot stop in the middle closes a
/// capacity segment.
struct CvrpTour {
  std::vector<Vertex> stops;              // o, u_1, ..., u_z, o
  std::vector<std::vector<int>> served;   // demand indices per stop, ascending
  Length length = 0;
};

Length stops_length(const MetricGraph& g, const std::vector<Vertex>& stops);

/// Empty string when `tour` starts and ends at the depot, serves every demand
/// exactly once at its own vertex and keeps each depot-to-depot segment within
/// `capacity`; otherwise a description of the first problem.
std::string check_tour(const MetricGraph& g, const std::vector<Vertex>& demand, Capacity capacity,
                       const CvrpTour& tour);

/// MST doubling: preorder walk of a minimum spanning tree of the demand
/// vertices and the depot (children ascending). Length <= 2 MST.
CvrpTour tsp_approx(const MetricGraph& g, const std::vector<Vertex>& demand);

struct TspResult {
  std::vector<Vertex> order;  // o, v_1, ..., v_m, o over the distinct vertices
  Length length = 0;
};

/// Exact TSP over the distinct vertices plus the depot by Held–Karp.
/// Throws UnsupportedError above `limit` vertices.
TspResult held_karp(const MetricGraph& g, const std::vector<Vertex>& vertices, int limit = 16);

/// Optimal CVRP tour by Held–Karp over demand subsets and an exact set
/// partition into routes of at most `capacity` demands.
/// Throws UnsupportedError above `limit` demands.
CvrpTour exact_cvrp(const MetricGraph& g, const std::vector<Vertex>& demand, Capacity capacity,
                    int limit = 12);

/// Iterated tour partitioning: cut the MST-doubling order into chunks of
/// `capacity` demands for every initial offset and keep the shortest.
/// Identical to tsp_approx when capacity is unbounded or not binding.
CvrpTour cvrp_approx(const MetricGraph& g, const std::vector<Vertex>& demand, Capacity capacity);

/// Greedy maximal segments: each subtour is o, u_j', ..., u_j, o with the
/// inner part no longer than `cap`. Stops are never reordered.
std::vector<CvrpTour> split_tour(const MetricGraph& g, const CvrpTour& tour, const Rational& cap);

/// Expands a tour over shortest paths into depot-to-depot trips run back to
/// back from `start` at `speed`. `requests[j]` is the request index of demand
/// j. Each demand is served in the trip containing its stop.
std::vector<Trip> realize_tour(const MetricGraph& g, const CvrpTour& tour, const std::vector<int>& requests,
                               const Rational& start, const Rational& speed);

}  // namespace fdp
