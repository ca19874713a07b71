#pragma once

#include <cstdint>
#include <vector>

#include "fdp/bundling.hpp"
#include "fdp/grouping.hpp"
#include "fdp/instance.hpp"

namespace fdp {

struct Job {
  Rational release;
  Length size = 0;
  std::int64_t bundle = 0;  // tie-break after release
  int order = 0;            // position within the bundle
  std::vector<int> requests;
};

struct Assignment {
  int machine = 0;
  Rational start;
  Rational end;
};

/// Non-preemptive FIFO on k identical machines: jobs are taken in order of
/// (release, bundle, order) and each goes to the machine that frees up first
/// (lowest index on ties). Result is parallel to `jobs`.
std::vector<Assignment> fifo_schedule(const std::vector<Job>& jobs, int k);

/// Largest end - release over the assignment (0 without jobs).
Rational max_job_flow(const std::vector<Job>& jobs, const std::vector<Assignment>& as);

/// Smallest D such that every window [a, b] releases at most k(b - a) + D of
/// total size.
Rational release_slack(const std::vector<Job>& jobs, int k);

/// Depth-first tour of the minimal subtree spanning the requests' vertices,
/// children in ascending order, cut into depot-to-depot trips at every return
/// to the depot. Trips run back to back from `start` at unit speed; their
/// total length is 2 mst. Throws InputError for an empty group.
std::vector<Trip> trips_for_group(const RootedTree& t, const std::vector<Request>& requests,
                                  const std::vector<int>& group, const Rational& start);

struct TreeRun {
  Schedule schedule;
  std::vector<Bundle> bundles;
  /// groups[b] cut from bundles[b]; one whole-bundle group when k = 1.
  std::vector<std::vector<Group>> groups;
  std::vector<Job> jobs;
  std::vector<Assignment> assignments;
};

/// Full pipeline on a tree instance with unbounded capacity. Throws
/// UnsupportedError for finite capacity or a non-tree metric.
TreeRun run_tree_algorithm(const Instance& inst, const Rational& f, const Rational& eps = 1);

}  // namespace fdp
