#include <doctest.h>

#include <algorithm>

#include "fdp/adversary.hpp"
#include "fdp/errors.hpp"
#include "fdp/oracle.hpp"

using namespace fdp;

namespace {

MetricGraph cycle(int n) {
  std::vector<Edge> es;
  for (int i = 0; i < n; ++i) es.push_back({static_cast<Vertex>(i), static_cast<Vertex>((i + 1) % n), 1});
  return MetricGraph::dense(n, es, 0);
}

}  // namespace

TEST_CASE("base gadget shape") {
  for (int p = 2; p <= 6; ++p) {
    BaseGadget gadget(p);
    const auto& g = *gadget.graph();
    REQUIRE(g.size() == 14 * p + 9);
    REQUIRE(static_cast<int>(g.neighbors(0).size()) == 4 * p + 2);
    for (Vertex u = 1; u < g.size(); ++u) {
      REQUIRE(g.distance(0, u) >= 1);
      for (Vertex v = u + 1; v < g.size(); ++v) REQUIRE(g.distance(u, v) >= kGadgetScale);
    }
    CHECK(gadget.vertex(0, Lean::kLeft, 3) == gadget.vertex(0, Lean::kRight, 3));
    CHECK(gadget.vertex(0, Lean::kLeft, 4) != gadget.vertex(0, Lean::kRight, 4));
  }
  CHECK_THROWS_AS(BaseGadget(1), InputError);
}

TEST_CASE("base instance requests") {
  auto inst = base_instance(2, Lean::kLeft);
  CHECK(inst.g().size() == 37);
  CHECK(inst.requests.size() == 35);
  BaseGadget gadget(2);
  std::map<Time, int> per_segment;
  for (const auto& r : inst.requests) ++per_segment[r.arrival];
  CHECK(per_segment.at(gadget.segment_start(0)) == 8);
  CHECK(per_segment.at(gadget.segment_start(1)) == 14);
  CHECK(per_segment.at(gadget.segment_start(2)) == 13);
  CHECK(gadget.segment_start(2) == 7 * 3 * kGadgetScale);
  auto has = [&](const Instance& in, Vertex v) {
    return std::any_of(in.requests.begin(), in.requests.end(), [&](const Request& r) { return r.vertex == v; });
  };
  CHECK(has(inst, gadget.vertex(2, Lean::kLeft, 4)));
  CHECK_FALSE(has(inst, gadget.vertex(2, Lean::kRight, 4)));
  auto right = base_instance(2, Lean::kRight);
  CHECK(has(right, gadget.vertex(2, Lean::kRight, 4)));
  CHECK_FALSE(has(right, gadget.vertex(2, Lean::kLeft, 4)));
  for (int p = 2; p <= 6; ++p) CHECK(base_instance(p, Lean::kLeft).requests.size() == 8u + 14u * (p - 1) + 13u);
}

TEST_CASE("canonical base solution") {
  for (int p = 2; p <= 6; ++p) {
    for (Lean s : {Lean::kLeft, Lean::kRight}) {
      BaseGadget gadget(p);
      auto inst = base_instance(p, s);
      auto sch = gadget.solution(s);
      auto rep = validate(inst, sch);
      // two segments of length 14
      REQUIRE(rep.max_flow <= Rational(28 * kGadgetScale));
      // the v_4 carried over one segment waits 14 + 3.5
      REQUIRE(rep.max_flow == Rational(35, 2) * Rational(kGadgetScale));
      for (const auto& t : sch.vehicles[0]) REQUIRE(trip_end(inst.g(), t, 1) <= Rational(gadget.horizon()));
    }
  }
}

TEST_CASE("base tour certificate") {
  for (int p = 2; p <= 6; ++p) {
    for (Lean s : {Lean::kLeft, Lean::kRight}) {
      auto cert = certify_base_tour(p, s);
      CHECK(cert.length == 7 * (2 * p + 1) * kGadgetScale);
      CHECK(cert.lower_bound == cert.length);
    }
  }
  CHECK(certify_base_tour(2, Lean::kLeft).length == 35 * kGadgetScale);
  CHECK(certify_base_tour(3, Lean::kLeft).length == 49 * kGadgetScale);
}

TEST_CASE("lower bound families") {
  auto legs = legs_instance(3, {Lean::kLeft, Lean::kRight, Lean::kLeft});
  CHECK(legs.g().size() == 54);
  CHECK(legs.requests.size() == 3u * (8 + 14 * 2 + 13 + 3));
  CHECK_THROWS_AS(legs_instance(3, {Lean::kLeft}), InputError);
  // the leg requests of phase 1 start right after the copied base horizon
  CHECK(legs.requests[8 + 28 + 13].arrival == 7 * 7 * kGadgetScale);

  CHECK(speeding_p(Rational(1, 39)) == 2);
  CHECK(speeding_p(Rational(1, 59)) == 3);
  CHECK_THROWS_AS(speeding_p(Rational(1, 2)), InputError);
  auto sp = speeding_instance(Rational(1, 39));
  CHECK(sp.g().size() == 2 * (14 * 2 + 8) + 1);
  CHECK(sp.requests.size() == 2u * 35u);

  auto ham = hamiltonian_instance(cycle(4));
  CHECK(ham.g().size() == 8);
  CHECK(ham.requests.size() == 16u * 7u);
  CHECK(ham.requests[7].arrival == 36);
  // Hamiltonian cycle then the legs one by one: max flow nbar
  Schedule yes;
  yes.vehicles.resize(1);
  for (int h = 0; h < 16; ++h) {
    const Time b = h * 36;
    const int base = h * 7;
    yes.vehicles[0].push_back({Rational(b), {0, 1, 2, 3, 0}, {base, base + 1, base + 2}});
    for (int i = 1; i <= 4; ++i) {
      yes.vehicles[0].push_back({Rational(b + (2 * i - 1) * 4), {0, static_cast<Vertex>(3 + i), 0}, {base + 2 + i}});
    }
  }
  CHECK(validate(ham, yes).max_flow == Rational(4));

  auto copies = copies_instance(cycle(4), 4);
  CHECK(copies.g().size() == 4 * 3 + 1);
  CHECK(copies.requests.size() == 12u);
  CHECK(copies.requests.back().arrival == 12);
}

TEST_CASE("capacity adversary requests") {
  CapacityAdversary adv(3);
  CHECK(adv.requests_per_phase() == 18);
  Time last = 0;
  while (auto t = adv.next_arrival()) {
    REQUIRE(*t >= last);
    last = *t;
    adv.release_until(*t);
  }
  CHECK(adv.released().size() == 54u);
  // nothing observed: v* defaults to v2
  CHECK(adv.choices() == std::vector<Vertex>{2, 2, 2});
  CHECK(adv.realized().capacity == Capacity(2));
}

TEST_CASE("capacity adversary reacts to the v1 pairing") {
  CapacityAdversary adv(2);
  auto first = adv.release_until(0);
  REQUIRE(first.size() == 3u);
  adv.observe_trip(Rational(0), {0, 2});  // v1 with v3
  adv.release_until(12);
  REQUIRE(adv.choices().size() == 1u);
  CHECK(adv.choices()[0] == CapacityAdversary::kV3);

  CapacityAdversary late(2);
  late.release_until(0);
  late.observe_trip(Rational(12), {0, 1});  // too late to count
  late.release_until(12);
  CHECK(late.choices()[0] == CapacityAdversary::kV2);
}

TEST_CASE("capacity reference schedule") {
  for (int p = 2; p <= 8; ++p) {
    for (int mask = 0; mask < 4; ++mask) {
      std::vector<Vertex> choices;
      for (int h = 0; h < p; ++h) choices.push_back((mask >> (h % 2)) & 1 ? 3 : 2);
      auto inst = Instance::make(CapacityAdversary(p).graph(), 1, 2, capacity_requests(p, choices));
      auto rep = validate(inst, capacity_reference_schedule(p, choices));
      REQUIRE(rep.max_flow <= Rational(16));
    }
  }
}
