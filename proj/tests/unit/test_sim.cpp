#include <doctest.h>

#include "fdp/dispatch.hpp"
#include "fdp/errors.hpp"
#include "fdp/oracle.hpp"
#include "fdp/sim.hpp"

using namespace fdp;

namespace {

Generated feasible(std::uint64_t seed, int k, int requests, Length f) {
  GenerateParams p;
  p.vertices = 4 + static_cast<int>(seed % 12);
  p.k = k;
  p.requests = requests;
  p.f_target = f;
  return generate_feasible(seed, p);
}

bool same_trip(const Trip& a, const Trip& b) {
  return a.start == b.start && a.walk == b.walk && a.served == b.served;
}

}  // namespace

TEST_CASE("empty run") {
  auto gen = feasible(1, 1, 5, 8);
  auto inst = gen.instance;
  inst.requests.clear();
  auto policy = tree_policy(Rational(8));
  auto res = run_online(inst, *policy);
  CHECK(res.schedule.trip_count() == 0);
  CHECK(res.trace.empty());
}

TEST_CASE("online tree policy replays the batch algorithm") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const int k = 1 + static_cast<int>(seed % 3);
    auto gen = feasible(seed, k, 12 + static_cast<int>(seed % 15), 6 + static_cast<Length>(seed % 5));
    const Rational f(6 + static_cast<Length>(seed % 5));
    auto policy = tree_policy(f);
    auto online = run_online(gen.instance, *policy);
    auto batch = run_tree_algorithm(gen.instance, f).schedule;
    REQUIRE(online.schedule.vehicles.size() == batch.vehicles.size());
    for (std::size_t v = 0; v < batch.vehicles.size(); ++v) {
      REQUIRE(online.schedule.vehicles[v].size() == batch.vehicles[v].size());
      for (std::size_t t = 0; t < batch.vehicles[v].size(); ++t) {
        REQUIRE(same_trip(online.schedule.vehicles[v][t], batch.vehicles[v][t]));
      }
    }
    REQUIRE(online.report.max_flow <= Rational(k == 1 ? 8 : 24) * f);
    auto again = run_online(gen.instance, *tree_policy(f));
    REQUIRE(again.trace_hash == online.trace_hash);
  }
}

TEST_CASE("future requests do not change committed trips") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto gen = feasible(seed, 1 + static_cast<int>(seed % 2), 20, 8);
    const auto& inst = gen.instance;
    const Time cut = inst.requests[inst.requests.size() / 2].arrival;
    auto other = inst;
    for (auto& r : other.requests) {
      if (r.arrival > cut) r.vertex = static_cast<Vertex>(1 + (r.vertex % (inst.g().size() - 1)));
    }
    auto a = run_online(inst, *tree_policy(Rational(8)));
    auto b = run_online(other, *tree_policy(Rational(8)));
    for (std::size_t v = 0; v < a.schedule.vehicles.size(); ++v) {
      std::vector<Trip> early_a;
      std::vector<Trip> early_b;
      for (const auto& t : a.schedule.vehicles[v]) {
        if (t.start <= Rational(cut)) early_a.push_back(t);
      }
      for (const auto& t : b.schedule.vehicles[v]) {
        if (t.start <= Rational(cut)) early_b.push_back(t);
      }
      REQUIRE(early_a.size() == early_b.size());
      for (std::size_t i = 0; i < early_a.size(); ++i) REQUIRE(same_trip(early_a[i], early_b[i]));
    }
  }
}

TEST_CASE("online speeding policy") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    GenerateParams p;
    p.vertices = 4 + static_cast<int>(seed % 6);
    p.k = 3;
    p.capacity = 2;
    p.requests = 4 + static_cast<int>(seed % 8);
    p.f_target = 8;
    auto gen = generate_feasible(seed, p);
    SpeedConfig cfg;
    auto online = run_online(gen.instance, *speeding_policy(Rational(8), cfg), cfg.speed());
    auto batch = run_speeding(gen.instance, Rational(8), cfg).schedule;
    REQUIRE(online.schedule.trip_count() == batch.trip_count());
    REQUIRE(online.report.max_flow <= cfg.flow_bound(Rational(8)));
  }
}

TEST_CASE("fifo baselines") {
  auto gen = feasible(3, 2, 15, 8);
  for (bool batch : {false, true}) {
    FifoPolicy policy(batch);
    auto res = run_online(gen.instance, policy);
    CHECK(res.schedule.trip_count() > 0);
  }
}

TEST_CASE("baselines against the capacity adversary") {
  for (int p = 4; p <= 8; ++p) {
    for (bool batch : {false, true}) {
      CapacityAdversary adv(p);
      AdversarySource source(adv);
      FifoPolicy policy(batch);
      auto res = run_online(adv.graph(), 1, 2, source, policy);
      REQUIRE(res.instance.requests.size() == static_cast<std::size_t>(6 * p * p));
      REQUIRE(res.report.max_flow >= Rational(p));
      REQUIRE(adv.choices().size() == static_cast<std::size_t>(p));
      auto reference = capacity_reference_schedule(p, adv.choices());
      REQUIRE(validate(res.instance, reference).max_flow <= Rational(16));
    }
  }
}

TEST_CASE("doubling wrapper") {
  // one request at distance 3: the first guess is already valid
  auto g = std::make_shared<const MetricGraph>(MetricGraph::dense(2, {{0, 1, 3}}));
  auto single = Instance::make(g, 1, std::nullopt, {{2, 1}});
  auto wrapped = doubling_tree_policy(1);
  auto a = run_online(single, *wrapped);
  auto b = run_online(single, *tree_policy(Rational(3)));
  CHECK(wrapped->stages().size() == 1u);
  CHECK(a.schedule.vehicles[0].size() == b.schedule.vehicles[0].size());
  CHECK(a.report.max_flow == b.report.max_flow);

  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    GenerateParams p;
    p.vertices = 3 + static_cast<int>(seed % 6);
    p.requests = 2 + static_cast<int>(seed % 5);
    p.f_target = 4 + static_cast<Length>(seed % 6);
    auto gen = generate_feasible(seed, p);
    const Rational opt = optimal_max_flow(gen.instance).max_flow;
    if (opt == Rational(0)) continue;
    auto policy = doubling_tree_policy(1);
    auto res = run_online(gen.instance, *policy);
    const Rational beta = tree_beta(1);
    REQUIRE(res.report.max_flow <= Rational(8) * beta * opt);
    REQUIRE(policy->final_f() <= Rational(2) * opt);
    REQUIRE(policy->final_delay() <= Rational(6) * beta * opt);
  }
}
