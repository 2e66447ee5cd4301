#pragma once

#include "nkappa/catalog.hpp"
#include "nkappa/harness.hpp"
#include "nkappa/witness.hpp"

#include <json.hpp>

#include <string>

namespace nk {

using ojson = nlohmann::ordered_json;

// parse with line/column diagnostics on malformed input
ojson parse_json_text(const std::string& text);

StieltjesMeasure measure_from_json(const ojson& j);
FunctionHandle function_from_json(const ojson& j);
FunctionHandle load_function_spec_text(const std::string& text);

ojson measure_to_json(const StieltjesMeasure& m);
ojson function_to_json(const FunctionHandle& h);
ojson points_to_json(const PointSet& pts);
ojson inertia_to_json(const Inertia& in);
ojson classification_to_json(const Classification& c);
ojson witness_to_json(const WitnessResult& w);
ojson pick_to_json(const PickMatrix& p, const Inertia& in);
ojson report_to_json(const Report& r);

// stable serialization: insertion key order, floats at 17 significant digits
std::string dump_json(const ojson& j, int indent = 2);

const char* case_name(KappaCase c);
const char* form_name(TheoremForm f);

} // namespace nk
