#include <doctest.h>

#include "fdp/document.hpp"
#include "fdp/instance.hpp"

using namespace fdp;

namespace {

Instance one_request(Capacity cap = std::nullopt) {
  auto g = std::make_shared<const MetricGraph>(MetricGraph::dense(2, {{0, 1, 3}}));
  return Instance::make(g, 1, cap, {{0, 1}});
}

ValidationError::Kind kind_of(const Instance& inst, const Schedule& s) {
  try {
    (void)validate(inst, s);
  } catch (const ValidationError& e) {
    return e.kind();
  }
  FAIL("schedule unexpectedly valid");
  return ValidationError::Kind::kUnserved;
}

}  // namespace

TEST_CASE("validate a single out-and-back trip") {
  auto inst = one_request();
  Schedule s{{{Trip{0, {0, 1, 0}, {0}}}}};
  CHECK(validate(inst, s).max_flow == Rational(3));
  CHECK(validate(inst, s, Rational(3, 2)).max_flow == Rational(2));
}

TEST_CASE("validation diagnostics are distinct") {
  using K = ValidationError::Kind;
  auto g = std::make_shared<const MetricGraph>(MetricGraph::dense(3, {{0, 1, 1}, {0, 2, 1}}));
  auto inst = Instance::make(g, 1, 1, {{0, 1}, {0, 2}, {5, 1}});

  Schedule before{{{Trip{0, {0, 1, 0}, {2}}}}};
  CHECK(kind_of(inst, before) == K::kServeBeforeArrival);
  try {
    (void)validate(inst, before);
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("serve-before-arrival") != std::string::npos);
  }

  Schedule over_cap{{{Trip{5, {0, 1, 0, 2, 0}, {0, 1, 2}}}}};
  CHECK(kind_of(inst, over_cap) == K::kMalformedWalk);  // passes the depot
  Schedule capacity{{{Trip{5, {0, 1, 0}, {0, 2}}}}};
  CHECK(kind_of(inst, capacity) == K::kCapacity);
  Schedule overlap{{{Trip{0, {0, 1, 0}, {0}}, Trip{1, {0, 2, 0}, {1}}}}};
  CHECK(kind_of(inst, overlap) == K::kOverlap);
  Schedule missing{{{Trip{0, {0, 1, 0}, {0}}, Trip{2, {0, 2, 0}, {1}}}}};
  CHECK(kind_of(inst, missing) == K::kUnserved);
  Schedule twice{{{Trip{0, {0, 1, 0}, {0}}, Trip{2, {0, 1, 0}, {0}}}}};
  CHECK(kind_of(inst, twice) == K::kDuplicateService);
  Schedule elsewhere{{{Trip{0, {0, 2, 0}, {0}}}}};
  CHECK(kind_of(inst, elsewhere) == K::kNotOnWalk);
  Schedule jump{{{Trip{0, {0, 1, 2, 0}, {0}}}}};
  CHECK(kind_of(inst, jump) == K::kMalformedWalk);
  Schedule too_many{{{}, {}}};
  CHECK(kind_of(inst, too_many) == K::kVehicleCount);
  Schedule bad_index{{{Trip{0, {0, 1, 0}, {9}}}}};
  CHECK(kind_of(inst, bad_index) == K::kUnknownRequest);
}

TEST_CASE("flow report ignores vehicle identity") {
  GenerateParams p;
  p.k = 3;
  p.requests = 25;
  auto gen = generate_feasible(4, p);
  auto a = validate(gen.instance, gen.witness);
  Schedule swapped = gen.witness;
  std::reverse(swapped.vehicles.begin(), swapped.vehicles.end());
  auto b = validate(gen.instance, swapped);
  CHECK(a.max_flow == b.max_flow);
  CHECK(a.flow == b.flow);
}

TEST_CASE("instance documents round-trip") {
  auto gen = generate_feasible(9, GenerateParams{});
  const std::string doc = serialize_instance(gen.instance);
  auto back = parse_instance(doc);
  CHECK(serialize_instance(back) == doc);
  CHECK(back.requests == gen.instance.requests);
  const std::string sdoc = serialize_schedule(gen.witness, gen.instance);
  CHECK(serialize_schedule(parse_schedule(sdoc, back), back) == sdoc);
  CHECK(parse_schedule(sdoc, back) == gen.witness);
}

TEST_CASE("document errors") {
  CHECK_THROWS_AS(parse_instance(R"({"vertices":[0,1],"edges":[{"u":0,"v":1,"len":1}],"k":1,"capacity":"inf","requests":[]})"),
                  ParseError);
  try {
    (void)parse_instance(R"({"vertices":[0,1],"edges":[{"u":0,"v":1,"len":1}],"k":1,"capacity":"inf","requests":[]})");
  } catch (const ParseError& e) {
    CHECK(e.where() == "depot");
  }
  CHECK_THROWS_AS(parse_instance(R"({"vertices":[0,1],"edges":[{"u":0,"v":1,"len":-2}],"depot":0,"k":1,"capacity":"inf","requests":[]})"),
                  InputError);
  try {
    (void)parse_instance("{\n\"vertices\": [0,\n 1,,]}");
  } catch (const ParseError& e) {
    CHECK(e.where().rfind("line 3", 0) == 0);
  }
  CHECK_THROWS_AS(parse_instance(R"({"vertices":[0,1],"edges":[{"u":0,"v":1,"len":1}],"depot":0,"k":1,"capacity":"lots","requests":[]})"),
                  ParseError);
  auto inst = parse_instance(R"({"vertices":[5,9],"edges":[{"u":5,"v":9,"len":2}],"depot":5,"k":2,"capacity":3,"requests":[{"t":4,"v":9}]})");
  CHECK(inst.capacity == 3);
  CHECK(inst.requests[0].vertex == 1);
  auto sch = parse_schedule(R"({"vehicles":[[{"start":"9/2","walk":[5,9,5],"served":[0]}]]})", inst);
  CHECK(sch.vehicles[0][0].start == Rational(9, 2));
  CHECK(validate(inst, sch).max_flow == Rational(5, 2));
}

TEST_CASE("generated instances are feasible for their target") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    GenerateParams p;
    p.vertices = 2 + static_cast<int>(seed % 20);
    p.k = 1 + static_cast<int>(seed % 3);
    p.requests = static_cast<int>(seed % 30);
    p.f_target = 2 + static_cast<Length>(seed % 15);
    p.extra_edges = static_cast<int>(seed % 4);
    if (seed % 2 == 0) p.capacity = 1 + static_cast<int>(seed % 3);
    auto gen = generate_feasible(seed, p);
    REQUIRE(static_cast<int>(gen.instance.requests.size()) == p.requests);
    REQUIRE(validate(gen.instance, gen.witness).max_flow <= Rational(p.f_target));
    REQUIRE(gen.instance.g().max_depot_distance() * 2 <= p.f_target);
  }
}

TEST_CASE("unit capacity witness serves one request per trip") {
  GenerateParams p;
  p.capacity = 1;
  p.requests = 30;
  auto gen = generate_feasible(1, p);
  for (const auto& it : gen.witness.vehicles)
    for (const auto& trip : it) CHECK(trip.served.size() <= 1);
  CHECK(validate(gen.instance, gen.witness).max_flow <= Rational(10));
}

TEST_CASE("generation is deterministic per seed") {
  GenerateParams p;
  p.extra_edges = 3;
  CHECK(serialize_instance(generate_feasible(42, p).instance) == serialize_instance(generate_feasible(42, p).instance));
  CHECK(serialize_instance(generate_feasible(42, p).instance) != serialize_instance(generate_feasible(43, p).instance));
  p.f_target = 1;
  CHECK_THROWS_AS(generate_feasible(1, p), InputError);
}

TEST_CASE("instance checks") {
  auto g = std::make_shared<const MetricGraph>(MetricGraph::dense(2, {{0, 1, 3}}));
  CHECK_THROWS_AS(Instance::make(g, 0, std::nullopt, {}), InputError);
  CHECK_THROWS_AS(Instance::make(g, 1, 0, {}), InputError);
  CHECK_THROWS_AS(Instance::make(g, 1, std::nullopt, {{0, 0}}), InputError);
  CHECK_THROWS_AS(Instance::make(g, 1, std::nullopt, {{-1, 1}}), InputError);
}
