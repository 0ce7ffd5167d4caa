#pragma once

// nlohmann conversions shared by serialization.cpp and experiment.cpp; not installed.

#include <cmath>
#include <string>

#include <json.hpp>

#include "youngflow/serialization.hpp"

namespace youngflow::detail {

using json = nlohmann::ordered_json;

inline json number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

inline json numbers(const std::vector<double>& vs) {
    json out = json::array();
    for (double v : vs) out.push_back(number(v));
    return out;
}

inline json window_json(Interval w) { return json::array({number(w.lo), number(w.hi)}); }

json to_object(const GreedySequence& seq);
json to_object(const Certificate& cert);
json to_object(const YoungLoeveCertificate& cert);
json to_object(const CountBound& bound);
json to_object(const SolveReport& report);
json to_object(const FlowCheckReport& report);
json to_object(const FbmSpec& spec);

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace youngflow::detail
