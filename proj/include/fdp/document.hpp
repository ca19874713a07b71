#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "fdp/instance.hpp"

namespace fdp {

// Instance document:
//   {"vertices":[id...], "edges":[{"u":id,"v":id,"len":int}...], "depot":id,
//    "k":int, "capacity":int|"inf", "requests":[{"t":int,"v":id}...]}
// Schedule document:
//   {"vehicles":[[{"start":int|"p/q", "walk":[id...], "served":[index...]}...]...]}
// Vertex ids are the labels of the document; indices refer to the request list.

/// Throws ParseError naming the offending line or field; semantic problems
/// (negative lengths, unknown vertices) surface as InputError.
Instance parse_instance(std::string_view text);
Instance instance_from_json(const nlohmann::json& doc);
nlohmann::json instance_to_json(const Instance& inst);
std::string serialize_instance(const Instance& inst);

Schedule parse_schedule(std::string_view text, const Instance& inst);
Schedule schedule_from_json(const nlohmann::json& doc, const Instance& inst);
nlohmann::json schedule_to_json(const Schedule& sch, const Instance& inst);
std::string serialize_schedule(const Schedule& sch, const Instance& inst);

nlohmann::json report_to_json(const FlowReport& rep);
nlohmann::json rational_to_json(const Rational& r);
Rational rational_from_json(const nlohmann::json& j, const std::string& where);

/// Parses JSON text; syntax errors become ParseError("line L, column C", ...).
nlohmann::json parse_json(std::string_view text);

}  // namespace fdp
