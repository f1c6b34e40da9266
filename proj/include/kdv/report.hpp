#pragma once

#include <string>
#include <string_view>

#include "kdv/evaluation.hpp"

namespace kdv {

std::string report_to_json(const EvaluationReport& report);
EvaluationReport report_from_json(std::string_view text);

// Long form, one row per (scenario, scorer, k): "scenario,scorer,k,accuracy".
std::string report_to_csv(const EvaluationReport& report);

// Fixed-width text table with one line per (scenario, scorer) and a column per k.
std::string render_table(const EvaluationReport& report);

}  // namespace kdv
