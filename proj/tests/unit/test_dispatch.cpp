#include <doctest.h>

#include "fdp/dispatch.hpp"
#include "fdp/errors.hpp"
#include "fdp/rng.hpp"

using namespace fdp;

namespace {

Job job(std::int64_t release, Length size, int order = 0) { return Job{release, size, 0, order, {}}; }

}  // namespace

TEST_CASE("FIFO examples") {
  std::vector<Job> three{job(0, 4, 0), job(0, 4, 1), job(0, 2, 2)};
  auto a = fifo_schedule(three, 2);
  CHECK(a[2].start == Rational(4));
  CHECK(a[2].end == Rational(6));
  CHECK(a[2].machine == 0);
  CHECK(max_job_flow(three, a) == Rational(6));

  CHECK(fifo_schedule({}, 3).empty());

  std::vector<Job> two{job(0, 5), job(1, 2)};
  auto b = fifo_schedule(two, 1);
  CHECK(b[0].end == Rational(5));
  CHECK(b[1].end == Rational(7));
  CHECK(b[1].end - two[1].release == Rational(6));
  CHECK_THROWS_AS(fifo_schedule(two, 0), InputError);
}

TEST_CASE("release slack") {
  std::vector<Job> jobs{job(0, 5), job(1, 2)};
  // [0,0] releases 5; [0,1] releases 7 - 1
  CHECK(release_slack(jobs, 1) == Rational(6));
  CHECK(release_slack(jobs, 4) == Rational(5));
}

TEST_CASE("FIFO respects the release-rate bound on random streams") {
  Rng rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    const int k = static_cast<int>(rng.uniform(1, 4));
    std::vector<Job> jobs;
    Time t = 0;
    const int m = static_cast<int>(rng.uniform(0, 15));
    for (int i = 0; i < m; ++i) {
      t += rng.uniform(0, 6);
      jobs.push_back(job(t, rng.uniform(0, 9), i));
    }
    auto as = fifo_schedule(jobs, k);
    Length p = 0;
    for (const auto& j : jobs) p = std::max(p, j.size);
    const Rational d = release_slack(jobs, k);
    REQUIRE(Rational(k) * max_job_flow(jobs, as) <= d + Rational(2 * (k - 1) * p));
    for (std::size_t j = 0; j < jobs.size(); ++j) REQUIRE(as[j].start >= jobs[j].release);
  }
}

TEST_CASE("trips for a group") {
  // o=0, a=1, b=2, c=3: path o–a(3); a–b(1), a–c(1)
  RootedTree t({-1, 0, 1, 1}, {0, 3, 1, 1}, 0);
  std::vector<Request> rs{{0, 1}, {0, 2}, {0, 3}};
  auto single = trips_for_group(t, rs, {0}, 5);
  REQUIRE(single.size() == 1);
  CHECK(single[0].walk == std::vector<Vertex>{0, 1, 0});
  CHECK(single[0].start == Rational(5));

  auto pair = trips_for_group(t, rs, {1, 2}, 0);
  REQUIRE(pair.size() == 1);
  CHECK(pair[0].walk == std::vector<Vertex>{0, 1, 2, 1, 3, 1, 0});
  CHECK(pair[0].served == std::vector<int>{1, 2});

  CHECK_THROWS_AS(trips_for_group(t, rs, {}, 0), InputError);

  // two branches at the depot become two back-to-back trips
  RootedTree star({-1, 0, 0}, {0, 2, 3}, 0);
  std::vector<Request> sr{{0, 1}, {0, 2}};
  auto split = trips_for_group(star, sr, {0, 1}, 1);
  REQUIRE(split.size() == 2);
  CHECK(split[0].walk == std::vector<Vertex>{0, 1, 0});
  CHECK(split[1].start == Rational(5));
  CHECK(split[1].served == std::vector<int>{1});
}

TEST_CASE("tree algorithm end to end") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    GenerateParams p;
    p.vertices = 4 + static_cast<int>(seed % 20);
    p.requests = 10 + static_cast<int>(seed % 30);
    p.f_target = 4 + static_cast<Length>(seed % 10);
    p.k = 1 + static_cast<int>(seed % 4);
    auto gen = generate_feasible(seed, p);
    auto run = run_tree_algorithm(gen.instance, p.f_target);
    auto rep = validate(gen.instance, run.schedule);
    const std::int64_t factor = p.k == 1 ? 8 : 24;
    REQUIRE(rep.max_flow <= Rational(factor * p.f_target));
    for (std::size_t j = 0; j < run.jobs.size(); ++j) {
      if (p.k > 1) REQUIRE(run.jobs[j].size <= 16 * p.f_target);
      for (int id : run.jobs[j].requests) {
        REQUIRE(Rational(gen.instance.requests[static_cast<std::size_t>(id)].arrival) <= run.assignments[j].start);
      }
    }
  }
}

TEST_CASE("tree algorithm preconditions") {
  GenerateParams p;
  auto gen = generate_feasible(1, p);
  auto empty = gen.instance;
  empty.requests.clear();
  CHECK(run_tree_algorithm(empty, 10).schedule.trip_count() == 0);
  auto capped = gen.instance;
  capped.capacity = 2;
  CHECK_THROWS_AS(run_tree_algorithm(capped, 10), UnsupportedError);
  p.extra_edges = 3;
  auto cyclic = generate_feasible(2, p);
  if (!cyclic.instance.is_tree()) CHECK_THROWS_AS(run_tree_algorithm(cyclic.instance, 10), UnsupportedError);
}
