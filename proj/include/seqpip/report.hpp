#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "seqpip/evaluation.hpp"
#include "seqpip/splitgen.hpp"

namespace seqpip {

using Json = nlohmann::ordered_json;

// Undefined metrics serialise as null.
Json to_json(const ConfusionMatrix& cm);
Json to_json(const MetricsReport& r);
Json to_json(const MetricSummary& s);
Json to_json(const CvResult& cv);
Json to_json(const SplitTargets& t);
Json to_json(const VerificationReport& v);

// Plain-text table with one row per named set:
//   Test Class  Precision  Recall  Accuracy  F1-score
// Undefined metrics print as "undef".
std::string metrics_table(const std::vector<std::pair<std::string, MetricsReport>>& rows);

std::string cv_table(const CvResult& cv);

}  // namespace seqpip
