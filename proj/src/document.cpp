#include "fdp/document.hpp"

#include <algorithm>

namespace fdp {

using nlohmann::json;

namespace {

const json& field(const json& obj, const char* name, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where, "expected an object");
  auto it = obj.find(name);
  if (it == obj.end()) throw ParseError(where.empty() ? name : where + "." + name, "missing field");
  return *it;
}

std::int64_t integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ParseError(where, "expected an integer, got " + j.dump());
  return j.get<std::int64_t>();
}

const json& array(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where, "expected an array");
  return j;
}

}  // namespace

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col), e.what());
  }
}

json rational_to_json(const Rational& r) {
  if (r.is_integer()) return r.num();
  return r.str();
}

Rational rational_from_json(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return Rational::parse(j.get<std::string>());
    } catch (const std::exception& e) {
      throw ParseError(where, e.what());
    }
  }
  throw ParseError(where, "expected an integer or a rational string, got " + j.dump());
}

// -------------------------------------------------------------------- instance

Instance instance_from_json(const json& doc) {
  std::vector<Label> labels;
  const auto& vs = array(field(doc, "vertices", ""), "vertices");
  for (std::size_t i = 0; i < vs.size(); ++i) labels.push_back(integer(vs[i], "vertices[" + std::to_string(i) + "]"));

  std::vector<LabeledEdge> edges;
  const auto& es = array(field(doc, "edges", ""), "edges");
  for (std::size_t i = 0; i < es.size(); ++i) {
    const std::string w = "edges[" + std::to_string(i) + "]";
    edges.push_back({integer(field(es[i], "u", w), w + ".u"), integer(field(es[i], "v", w), w + ".v"),
                     integer(field(es[i], "len", w), w + ".len")});
  }
  const Label depot = integer(field(doc, "depot", ""), "depot");
  const auto k = integer(field(doc, "k", ""), "k");

  Capacity cap;
  const auto& cj = field(doc, "capacity", "");
  if (cj.is_string()) {
    if (cj.get<std::string>() != "inf") throw ParseError("capacity", "expected an integer or \"inf\"");
  } else {
    cap = static_cast<int>(integer(cj, "capacity"));
  }

  auto graph = std::make_shared<const MetricGraph>(std::move(labels), edges, depot);
  std::vector<Request> requests;
  const auto& rs = array(field(doc, "requests", ""), "requests");
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const std::string w = "requests[" + std::to_string(i) + "]";
    const Time t = integer(field(rs[i], "t", w), w + ".t");
    const Label v = integer(field(rs[i], "v", w), w + ".v");
    if (!graph->has_label(v)) throw InputError(w + ": unknown vertex " + std::to_string(v));
    requests.push_back({t, graph->index_of(v)});
  }
  return Instance::make(std::move(graph), static_cast<int>(k), cap, std::move(requests));
}

Instance parse_instance(std::string_view text) { return instance_from_json(parse_json(text)); }

json instance_to_json(const Instance& inst) {
  const MetricGraph& g = inst.g();
  json doc = json::object();
  doc["vertices"] = g.labels();
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back({{"u", g.label(e.u)}, {"v", g.label(e.v)}, {"len", e.length}});
  doc["edges"] = std::move(edges);
  doc["depot"] = g.label(g.depot());
  doc["k"] = inst.k;
  if (inst.capacity) {
    doc["capacity"] = *inst.capacity;
  } else {
    doc["capacity"] = "inf";
  }
  json reqs = json::array();
  for (const auto& r : inst.requests) reqs.push_back({{"t", r.arrival}, {"v", g.label(r.vertex)}});
  doc["requests"] = std::move(reqs);
  return doc;
}

std::string serialize_instance(const Instance& inst) { return instance_to_json(inst).dump(1) + "\n"; }

// -------------------------------------------------------------------- schedule

Schedule schedule_from_json(const json& doc, const Instance& inst) {
  Schedule sch;
  const auto& vehicles = array(field(doc, "vehicles", ""), "vehicles");
  for (std::size_t vi = 0; vi < vehicles.size(); ++vi) {
    const std::string wv = "vehicles[" + std::to_string(vi) + "]";
    auto& itinerary = sch.vehicles.emplace_back();
    const auto& trips = array(vehicles[vi], wv);
    for (std::size_t ti = 0; ti < trips.size(); ++ti) {
      const std::string w = wv + "[" + std::to_string(ti) + "]";
      Trip trip;
      trip.start = rational_from_json(field(trips[ti], "start", w), w + ".start");
      const auto& walk = array(field(trips[ti], "walk", w), w + ".walk");
      for (std::size_t j = 0; j < walk.size(); ++j) {
        const Label l = integer(walk[j], w + ".walk[" + std::to_string(j) + "]");
        if (!inst.g().has_label(l)) throw InputError(w + ".walk: unknown vertex " + std::to_string(l));
        trip.walk.push_back(inst.g().index_of(l));
      }
      const auto& served = array(field(trips[ti], "served", w), w + ".served");
      for (std::size_t j = 0; j < served.size(); ++j) {
        trip.served.push_back(static_cast<int>(integer(served[j], w + ".served[" + std::to_string(j) + "]")));
      }
      itinerary.push_back(std::move(trip));
    }
  }
  return sch;
}

Schedule parse_schedule(std::string_view text, const Instance& inst) {
  return schedule_from_json(parse_json(text), inst);
}

json schedule_to_json(const Schedule& sch, const Instance& inst) {
  json vehicles = json::array();
  for (const auto& itinerary : sch.vehicles) {
    json trips = json::array();
    for (const auto& trip : itinerary) {
      json walk = json::array();
      for (Vertex v : trip.walk) walk.push_back(inst.g().label(v));
      trips.push_back({{"start", rational_to_json(trip.start)}, {"walk", std::move(walk)}, {"served", trip.served}});
    }
    vehicles.push_back(std::move(trips));
  }
  return json{{"vehicles", std::move(vehicles)}};
}

std::string serialize_schedule(const Schedule& sch, const Instance& inst) {
  return schedule_to_json(sch, inst).dump(1) + "\n";
}

json report_to_json(const FlowReport& rep) {
  json flows = json::array();
  for (const auto& f : rep.flow) flows.push_back(rational_to_json(f));
  json serve = json::array();
  for (const auto& s : rep.serve_time) serve.push_back(rational_to_json(s));
  return json{{"max_flow", rational_to_json(rep.max_flow)},
              {"argmax", rep.argmax},
              {"flow", std::move(flows)},
              {"serve_time", std::move(serve)}};
}

}  // namespace fdp
