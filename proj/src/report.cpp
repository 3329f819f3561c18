#include "seqpip/report.hpp"

#include <cstdio>
#include <sstream>

namespace seqpip {
namespace {

Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string cell(const std::optional<double>& v) {
  if (!v) return "undef";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", *v);
  return buf;
}

Json counts(const LabelCounts& c) {
  return Json{{"positives", c.positives}, {"negatives", c.negatives}, {"total", c.total()}};
}

void row(std::ostringstream& os, const std::string& name, const std::string& p, const std::string& r,
         const std::string& a, const std::string& f) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-12s%10s%10s%10s%10s\n", name.c_str(), p.c_str(), r.c_str(),
                a.c_str(), f.c_str());
  os << buf;
}

}  // namespace

Json to_json(const ConfusionMatrix& cm) {
  return Json{{"tp", cm.tp}, {"fp", cm.fp}, {"fn", cm.fn}, {"tn", cm.tn}, {"total", cm.total()}};
}

Json to_json(const MetricsReport& r) {
  return Json{{"precision", opt(r.precision)},
              {"recall", opt(r.recall)},
              {"accuracy", opt(r.accuracy)},
              {"f1", opt(r.f1)}};
}

Json to_json(const MetricSummary& s) {
  return Json{{"mean", opt(s.mean)}, {"std", opt(s.std)}, {"defined", s.defined},
              {"undefined", s.undefined}};
}

Json to_json(const CvResult& cv) {
  Json folds = Json::array();
  for (std::size_t f = 0; f < cv.folds.size(); ++f) {
    const auto& fold = cv.folds[f];
    folds.push_back(Json{{"fold", f},
                         {"size", fold.test_indices.size()},
                         {"confusion", to_json(fold.cm)},
                         {"metrics", to_json(fold.report)}});
  }
  return Json{{"k", cv.k},
              {"seed", cv.seed},
              {"folds", std::move(folds)},
              {"summary",
               Json{{"precision", to_json(cv.precision)},
                    {"recall", to_json(cv.recall)},
                    {"accuracy", to_json(cv.accuracy)},
                    {"f1", to_json(cv.f1)}}}};
}

Json to_json(const SplitTargets& t) {
  return Json{{"train", counts(t.train)}, {"c1", counts(t.c1)}, {"c2", counts(t.c2)},
              {"c3", counts(t.c3)}};
}

Json to_json(const VerificationReport& v) {
  static const char* const kSets[] = {"train", "c1", "c2", "c3"};
  Json sets = Json::object();
  for (std::size_t s = 0; s < 4; ++s) {
    auto j = counts(v.stats[s].labels);
    j["unique_nodes"] = v.stats[s].unique_nodes;
    sets[kSets[s]] = std::move(j);
  }
  Json overlapping = Json::array();
  for (const auto& p : v.overlapping) overlapping.push_back(p.first + "\t" + p.second);
  Json violations = Json::object();
  for (std::size_t c = 0; c < 3; ++c) {
    Json list = Json::array();
    for (const auto& r : v.class_violations[c]) list.push_back(r.a + "\t" + r.b);
    violations[kSets[c + 1]] = std::move(list);
  }
  return Json{{"ok", v.ok()},
              {"disjoint", v.disjoint},
              {"train_nodes_exact", v.train_nodes_exact},
              {"c1_condition", v.class_ok[0]},
              {"c2_condition", v.class_ok[1]},
              {"c3_condition", v.class_ok[2]},
              {"targets_met", v.targets_met ? Json(*v.targets_met) : Json(nullptr)},
              {"sets", std::move(sets)},
              {"overlapping", std::move(overlapping)},
              {"class_violations", std::move(violations)},
              {"warnings", v.warnings}};
}

std::string metrics_table(const std::vector<std::pair<std::string, MetricsReport>>& rows) {
  std::ostringstream os;
  row(os, "Test Class", "Precision", "Recall", "Accuracy", "F1-score");
  for (const auto& [name, r] : rows) {
    row(os, name, cell(r.precision), cell(r.recall), cell(r.accuracy), cell(r.f1));
  }
  return os.str();
}

std::string cv_table(const CvResult& cv) {
  std::ostringstream os;
  row(os, "Fold", "Precision", "Recall", "Accuracy", "F1-score");
  for (std::size_t f = 0; f < cv.folds.size(); ++f) {
    const auto& r = cv.folds[f].report;
    row(os, std::to_string(f), cell(r.precision), cell(r.recall), cell(r.accuracy), cell(r.f1));
  }
  row(os, "mean", cell(cv.precision.mean), cell(cv.recall.mean), cell(cv.accuracy.mean),
      cell(cv.f1.mean));
  row(os, "std", cell(cv.precision.std), cell(cv.recall.std), cell(cv.accuracy.std),
      cell(cv.f1.std));
  return os.str();
}

}  // namespace seqpip
