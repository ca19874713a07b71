#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cli.hpp"
#include "fdp/adversary.hpp"
#include "fdp/dispatch.hpp"
#include "fdp/document.hpp"
#include "fdp/oracle.hpp"
#include "fdp/sim.hpp"
#include "fdp/speeding.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

// Documents cross the boundary as JSON text; the Python side parses them.

std::pair<std::string, std::string> generate(std::uint64_t seed, int vertices, int k, std::optional<int> capacity,
                                             int requests, fdp::Length f_target, int chords) {
  fdp::GenerateParams p;
  p.vertices = vertices;
  p.k = k;
  p.capacity = capacity;
  p.requests = requests;
  p.f_target = f_target;
  p.extra_edges = chords;
  auto g = fdp::generate_feasible(seed, p);
  return {fdp::serialize_instance(g.instance), fdp::serialize_schedule(g.witness, g.instance)};
}

std::string validate(const std::string& instance, const std::string& schedule, const std::string& speed) {
  const auto inst = fdp::parse_instance(instance);
  const auto sch = fdp::parse_schedule(schedule, inst);
  return fdp::report_to_json(fdp::validate(inst, sch, fdp::Rational::parse(speed))).dump();
}

std::string run_tree(const std::string& instance, const std::string& f, bool online) {
  const auto inst = fdp::parse_instance(instance);
  const auto big_f = fdp::Rational::parse(f);
  fdp::Schedule sch;
  if (online) {
    auto policy = fdp::tree_policy(big_f);
    sch = fdp::run_online(inst, *policy).schedule;
  } else {
    sch = fdp::run_tree_algorithm(inst, big_f).schedule;
  }
  return fdp::serialize_schedule(sch, inst);
}

std::string run_speeding(const std::string& instance, const std::string& f, const std::string& eps,
                         const std::string& mode) {
  const auto inst = fdp::parse_instance(instance);
  const fdp::SpeedConfig cfg{fdp::Rational::parse(eps), fdp::parse_tour_mode(mode)};
  return fdp::serialize_schedule(fdp::run_speeding(inst, fdp::Rational::parse(f), cfg).schedule, inst);
}

std::string run_doubling(const std::string& instance) {
  const auto inst = fdp::parse_instance(instance);
  auto policy = fdp::doubling_tree_policy(inst.k);
  auto res = fdp::run_online(inst, *policy);
  json doc{{"schedule", fdp::schedule_to_json(res.schedule, inst)},
           {"final_F", fdp::rational_to_json(policy->final_f())},
           {"final_delay", fdp::rational_to_json(policy->final_delay())}};
  return doc.dump();
}

std::string optimal(const std::string& instance, int limit) {
  const auto inst = fdp::parse_instance(instance);
  auto r = fdp::optimal_max_flow(inst, limit);
  json doc{{"max_flow", fdp::rational_to_json(r.max_flow)},
           {"nodes", r.nodes},
           {"witness", fdp::schedule_to_json(r.witness, inst)}};
  return doc.dump();
}

std::string base_instance(int p, const std::string& lean) {
  if (lean.size() != 1) throw fdp::InputError("lean must be L or R");
  return fdp::serialize_instance(fdp::base_instance(p, fdp::parse_lean(lean[0])));
}

py::dict certify(int p, const std::string& lean) {
  if (lean.size() != 1) throw fdp::InputError("lean must be L or R");
  auto c = fdp::certify_base_tour(p, fdp::parse_lean(lean[0]));
  py::dict d;
  d["walk"] = c.walk;
  d["length"] = c.length;
  d["lower_bound"] = c.lower_bound;
  d["scale"] = fdp::kGadgetScale;
  return d;
}

std::tuple<int, std::string, std::string> cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = fdp::cli::main(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

PYBIND11_MODULE(_fdp, m) {
  m.doc() = "Online food delivery dispatch: max flow time algorithms, oracle and adversaries";

  py::register_exception<fdp::InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<fdp::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<fdp::UnsupportedError>(m, "UnsupportedError", PyExc_NotImplementedError);
  py::register_exception<fdp::InvariantViolation>(m, "InvariantViolation", PyExc_RuntimeError);

  m.def("generate", &generate, py::arg("seed"), py::arg("vertices") = 12, py::arg("k") = 1,
        py::arg("capacity") = py::none(), py::arg("requests") = 20, py::arg("f_target") = 10, py::arg("chords") = 0,
        "Feasible instance and a witness of max flow at most f_target, as JSON text.");
  m.def("validate", &validate, py::arg("instance"), py::arg("schedule"), py::arg("speed") = "1");
  m.def("run_tree", &run_tree, py::arg("instance"), py::arg("F"), py::arg("online") = false);
  m.def("run_speeding", &run_speeding, py::arg("instance"), py::arg("F"), py::arg("eps") = "1/2",
        py::arg("mode") = "exact");
  m.def("run_doubling", &run_doubling, py::arg("instance"));
  m.def("optimal_max_flow", &optimal, py::arg("instance"), py::arg("limit") = 6);
  m.def("base_instance", &base_instance, py::arg("p"), py::arg("lean") = "L");
  m.def("certify_base_tour", &certify, py::arg("p"), py::arg("lean") = "L");
  m.def("cli", &cli, py::arg("args"), "Runs the command line front end in-process: (exit code, stdout, stderr).");
}
