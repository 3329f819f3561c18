// Serial reference vs OpenMP kernels: dataset featurization and batched
// SVM decisions.

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "seqpip/classifier.hpp"
#include "seqpip/features.hpp"
#include "seqpip/random.hpp"

namespace {

struct Workload {
  seqpip::SequenceCollection seqs;
  std::vector<seqpip::InteractionRecord> pairs;
};

Workload make_workload(std::size_t proteins, std::size_t pairs, std::size_t length) {
  seqpip::Rng rng(7);
  Workload w;
  for (std::size_t p = 0; p < proteins; ++p) {
    std::string residues(length, 'A');
    for (auto& c : residues) c = seqpip::kResidues[rng.below(seqpip::kResidues.size())];
    w.seqs.add({"P" + std::to_string(p), std::move(residues)});
  }
  for (std::size_t i = 0; i < pairs; ++i) {
    w.pairs.push_back({"P" + std::to_string(rng.below(proteins)),
                       "P" + std::to_string(rng.below(proteins)), static_cast<int>(i % 2)});
  }
  return w;
}

const Workload& workload() {
  static const Workload w = make_workload(5435, 9000, 500);
  return w;
}

void BM_FeaturizeSerial(benchmark::State& state) {
  const auto& w = workload();
  const seqpip::ScaleTable table;
  for (auto _ : state) {
    benchmark::DoNotOptimize(seqpip::featurize_dataset_serial(w.pairs, w.seqs, table));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.pairs.size()));
}
BENCHMARK(BM_FeaturizeSerial)->Unit(benchmark::kMillisecond);

void BM_FeaturizeParallel(benchmark::State& state) {
  const auto& w = workload();
  const seqpip::ScaleTable table;
  for (auto _ : state) {
    benchmark::DoNotOptimize(seqpip::featurize_dataset(w.pairs, w.seqs, table));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.pairs.size()));
}
BENCHMARK(BM_FeaturizeParallel)->Unit(benchmark::kMillisecond);

std::vector<seqpip::FeatureVector> decision_inputs() {
  seqpip::Rng rng(11);
  std::vector<seqpip::FeatureVector> xs(200000);
  for (auto& x : xs) {
    for (auto& v : x) v = rng.uniform() * 10.0 - 5.0;
  }
  return xs;
}

seqpip::LinearModel decision_model() {
  seqpip::LinearModel m;
  for (std::size_t k = 0; k < seqpip::kNumScales; ++k) {
    m.weights[k] = 0.1 * static_cast<double>(k) - 0.5;
    m.standardizer.means[k] = 0.01 * static_cast<double>(k);
    m.standardizer.stds[k] = 1.0 + 0.1 * static_cast<double>(k);
  }
  m.bias = 0.25;
  return m;
}

void BM_DecisionSerial(benchmark::State& state) {
  static const auto xs = decision_inputs();
  const auto model = decision_model();
  for (auto _ : state) benchmark::DoNotOptimize(seqpip::decision_batch_serial(model, xs));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(xs.size()));
}
BENCHMARK(BM_DecisionSerial)->Unit(benchmark::kMillisecond);

void BM_DecisionParallel(benchmark::State& state) {
  static const auto xs = decision_inputs();
  const auto model = decision_model();
  for (auto _ : state) benchmark::DoNotOptimize(seqpip::decision_batch(model, xs));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(xs.size()));
}
BENCHMARK(BM_DecisionParallel)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
