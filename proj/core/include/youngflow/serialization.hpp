#pragma once

#include <string>

#include "youngflow/certificate.hpp"
#include "youngflow/drivers.hpp"
#include "youngflow/flow.hpp"
#include "youngflow/greedy.hpp"
#include "youngflow/solver.hpp"
#include "youngflow/young_integral.hpp"

namespace youngflow {

// Pretty-printed JSON (two-space indent, keys in declaration order). Non-finite
// numbers are written as the strings "inf", "-inf" and "nan".
std::string to_json(const GreedySequence& seq);
std::string to_json(const Certificate& cert);
std::string to_json(const YoungLoeveCertificate& cert);
std::string to_json(const CountBound& bound);
std::string to_json(const SolveReport& report);
std::string to_json(const FlowCheckReport& report);
std::string to_json(const FbmSpec& spec);

// Shortest round-trip decimal form, used for every number in CSV and JSON output.
std::string format_number(double v);

}  // namespace youngflow
