#include "seqpip/splitgen.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>
#include <sstream>
#include <unordered_map>

#include "seqpip/error.hpp"
#include "seqpip/numfmt.hpp"
#include "seqpip/random.hpp"

namespace seqpip {
namespace {

constexpr std::array<const char*, 4> kSetNames = {"train", "c1", "c2", "c3"};

struct IndexedPair {
  std::size_t u = 0;
  std::size_t v = 0;
  int label = 0;
  std::size_t input_index = 0;
};

std::size_t& label_slot(LabelCounts& c, int label) { return label == 1 ? c.positives : c.negatives; }
std::size_t label_value(const LabelCounts& c, int label) { return label == 1 ? c.positives : c.negatives; }

std::string describe_counts(const std::array<LabelCounts, 4>& achieved, const SplitTargets& t) {
  const std::array<LabelCounts, 4> want = {t.train, t.c1, t.c2, t.c3};
  std::ostringstream os;
  for (std::size_t s = 0; s < 4; ++s) {
    if (s) os << "; ";
    os << kSetNames[s] << " pos " << achieved[s].positives << "/" << want[s].positives << " neg "
       << achieved[s].negatives << "/" << want[s].negatives;
  }
  return os.str();
}

}  // namespace

std::string_view placement_name(Placement p) noexcept {
  switch (p) {
    case Placement::C1: return "C1";
    case Placement::C2: return "C2";
    case Placement::C3: return "C3";
    case Placement::Rejected: return "Rejected";
  }
  return "?";
}

UnorderedPair canonical_pair(const ProteinId& a, const ProteinId& b) {
  return a <= b ? UnorderedPair{a, b} : UnorderedPair{b, a};
}

PairSet make_pair_set(std::span<const InteractionRecord> records) {
  PairSet out;
  out.reserve(records.size());
  for (const auto& r : records) out.insert(canonical_pair(r));
  return out;
}

NodeSet endpoint_set(std::span<const InteractionRecord> records) {
  NodeSet out;
  for (const auto& r : records) {
    out.insert(r.a);
    out.insert(r.b);
  }
  return out;
}

Placement classify_pair(const InteractionRecord& pair, const NodeSet& train_nodes,
                        const PairSet& train_pairs) {
  if (train_pairs.contains(canonical_pair(pair))) return Placement::Rejected;
  const int shared = static_cast<int>(train_nodes.contains(pair.a)) +
                     static_cast<int>(train_nodes.contains(pair.b));
  // A self pair on a train node counts both endpoints.
  switch (shared) {
    case 2: return Placement::C1;
    case 1: return Placement::C2;
    default: return Placement::C3;
  }
}

namespace {

std::vector<ProteinId> distinct_in_order(std::span<const ProteinId> nodes) {
  std::vector<ProteinId> out;
  std::unordered_set<std::string_view> seen;
  for (const auto& n : nodes) {
    if (seen.insert(n).second) out.push_back(n);
  }
  return out;
}

}  // namespace

std::size_t max_negatives(std::span<const ProteinId> nodes, const PairSet& known) {
  const auto distinct = distinct_in_order(nodes);
  const NodeSet members(distinct.begin(), distinct.end());
  const std::size_t m = distinct.size();
  std::size_t all = m < 2 ? 0 : m * (m - 1) / 2;
  for (const auto& p : known) {
    if (p.first != p.second && members.contains(p.first) && members.contains(p.second)) --all;
  }
  return all;
}

std::vector<InteractionRecord> sample_negatives(std::span<const ProteinId> nodes,
                                                const PairSet& known, std::size_t n,
                                                std::uint64_t seed) {
  const auto distinct = distinct_in_order(nodes);
  const std::size_t available = max_negatives(distinct, known);
  if (n > available) {
    throw Error("cannot sample " + std::to_string(n) + " negative pairs: at most " +
                std::to_string(available) + " are available");
  }

  Rng rng(seed);
  const std::size_t m = distinct.size();
  std::vector<InteractionRecord> out;
  out.reserve(n);
  auto emit = [&](std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    out.push_back(InteractionRecord{distinct[i], distinct[j], 0});
  };

  if (n <= available / 2) {
    // Sparse request: rejection sampling terminates quickly.
    PairSet taken;
    taken.reserve(n);
    while (out.size() < n) {
      const std::size_t i = rng.below(m);
      const std::size_t j = rng.below(m);
      if (i == j) continue;
      auto key = canonical_pair(distinct[i], distinct[j]);
      if (known.contains(key) || taken.contains(key)) continue;
      taken.insert(std::move(key));
      emit(i, j);
    }
    return out;
  }

  // Dense request: enumerate candidates, partial Fisher-Yates.
  std::vector<std::pair<std::size_t, std::size_t>> candidates;
  candidates.reserve(available);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (!known.contains(canonical_pair(distinct[i], distinct[j]))) candidates.emplace_back(i, j);
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t pick = k + rng.below(candidates.size() - k);
    std::swap(candidates[k], candidates[pick]);
    emit(candidates[k].first, candidates[k].second);
  }
  return out;
}

SplitTargets competition_targets() {
  return SplitTargets{{2000, 2000}, {1000, 1000}, {750, 750}, {750, 750}};
}

SplitResult generate_split(const std::vector<InteractionRecord>& all_pairs,
                           const SplitTargets& targets, std::uint64_t seed) {
  SplitResult result;
  result.seed = seed;

  // Intern node ids and drop repeated unordered pairs (first occurrence wins).
  std::unordered_map<std::string_view, std::size_t> node_of;
  std::vector<std::string_view> node_name;
  auto intern = [&](const std::string& id) {
    const auto [it, inserted] = node_of.emplace(id, node_name.size());
    if (inserted) node_name.push_back(id);
    return it->second;
  };
  std::vector<IndexedPair> pairs;
  pairs.reserve(all_pairs.size());
  {
    std::unordered_map<UnorderedPair, int, UnorderedPairHash> label_of;
    for (std::size_t i = 0; i < all_pairs.size(); ++i) {
      const auto& r = all_pairs[i];
      const auto [it, inserted] = label_of.emplace(canonical_pair(r), r.label);
      if (!inserted) {
        if (it->second != r.label) {
          throw Error("pair " + r.a + "-" + r.b + " appears with both labels");
        }
        ++result.duplicates_dropped;
        continue;
      }
      pairs.push_back(IndexedPair{intern(r.a), intern(r.b), r.label, i});
    }
  }

  if (targets.total() > pairs.size()) {
    throw Error("targets request " + std::to_string(targets.total()) + " pairs but only " +
                std::to_string(pairs.size()) + " distinct pairs are available");
  }

  Rng rng(seed);
  std::vector<std::size_t> order(pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(std::span(order));

  // Node rank: position of first appearance in shuffled pair order. Adjacency
  // lists are built in shuffled order as well.
  const std::size_t n_nodes = node_name.size();
  std::vector<std::size_t> rank(n_nodes, n_nodes);
  std::vector<std::vector<std::size_t>> adjacency(n_nodes);
  {
    std::size_t next_rank = 0;
    for (std::size_t idx : order) {
      const auto& p = pairs[idx];
      for (std::size_t node : {p.u, p.v}) {
        if (rank[node] == n_nodes) rank[node] = next_rank++;
      }
      adjacency[p.u].push_back(idx);
      if (p.v != p.u) adjacency[p.v].push_back(idx);
    }
  }

  // Grow the training region. Priority: most pairs into the region, then
  // highest degree, then lowest rank. Unlinked nodes wait at zero links and
  // seed a new component once the current one is exhausted.
  const LabelCounts region_goal{targets.train.positives + targets.c1.positives,
                                targets.train.negatives + targets.c1.negatives};
  std::vector<char> in_region(n_nodes, 0);
  std::vector<std::size_t> links(n_nodes, 0);
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> frontier;
  const std::size_t max_degree = pairs.size() + 1;
  auto key = [&](std::size_t node) {
    return std::make_tuple(n_nodes - links[node], max_degree - adjacency[node].size(), rank[node]);
  };
  std::vector<std::size_t> node_by_rank(n_nodes);
  for (std::size_t node = 0; node < n_nodes; ++node) {
    node_by_rank[rank[node]] = node;
    frontier.insert(key(node));
  }
  LabelCounts internal;
  while ((internal.positives < region_goal.positives || internal.negatives < region_goal.negatives) &&
         !frontier.empty()) {
    const std::size_t node = node_by_rank[std::get<2>(*frontier.begin())];
    frontier.erase(frontier.begin());
    in_region[node] = 1;
    for (std::size_t idx : adjacency[node]) {
      const auto& p = pairs[idx];
      const std::size_t other = p.u == node ? p.v : p.u;
      if (in_region[other]) {
        ++label_slot(internal, p.label);
      }
      if (!in_region[other]) {
        frontier.erase(key(other));
        ++links[other];
        frontier.insert(key(other));
      }
    }
  }

  // Train assignment over region-internal pairs, shuffled order. The first
  // pass only takes pairs that cover a new node.
  enum : char { kUnused = -1, kTrain = 0, kC1 = 1, kC2 = 2, kC3 = 3 };
  std::vector<char> assigned(pairs.size(), kUnused);
  std::vector<char> covered(n_nodes, 0);
  std::array<LabelCounts, 4> achieved{};
  const std::array<LabelCounts, 4> want = {targets.train, targets.c1, targets.c2, targets.c3};

  auto take_train = [&](std::size_t idx) {
    const auto& p = pairs[idx];
    assigned[idx] = kTrain;
    ++label_slot(achieved[kTrain], p.label);
    covered[p.u] = covered[p.v] = 1;
  };
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t idx : order) {
      const auto& p = pairs[idx];
      if (assigned[idx] != kUnused || !in_region[p.u] || !in_region[p.v]) continue;
      if (label_value(achieved[kTrain], p.label) >= label_value(targets.train, p.label)) continue;
      if (pass == 0 && covered[p.u] && covered[p.v]) continue;
      take_train(idx);
    }
  }

  // Classify the rest against the final train nodes and fill test quotas.
  for (std::size_t idx : order) {
    if (assigned[idx] != kUnused) continue;
    const auto& p = pairs[idx];
    const int shared = static_cast<int>(covered[p.u]) + static_cast<int>(covered[p.v]);
    const char cls = shared == 2 ? kC1 : shared == 1 ? kC2 : kC3;
    if (label_value(achieved[cls], p.label) < label_value(want[cls], p.label)) {
      assigned[idx] = cls;
      ++label_slot(achieved[cls], p.label);
    }
  }

  for (std::size_t s = 0; s < 4; ++s) {
    if (!(achieved[s] == want[s])) {
      throw Error("split targets not reachable with seed " + std::to_string(seed) + ": " +
                  describe_counts(achieved, targets));
    }
  }

  // pairs is in input order.
  std::array<std::vector<InteractionRecord>*, 4> sinks = {&result.train, &result.c1, &result.c2,
                                                         &result.c3};
  for (std::size_t idx = 0; idx < pairs.size(); ++idx) {
    if (assigned[idx] == kUnused) continue;
    sinks[static_cast<std::size_t>(assigned[idx])]->push_back(all_pairs[pairs[idx].input_index]);
  }
  for (std::size_t node = 0; node < n_nodes; ++node) {
    if (covered[node]) result.train_nodes.emplace_back(node_name[node]);
  }
  std::sort(result.train_nodes.begin(), result.train_nodes.end());

  const auto report = verify_split(result, targets);
  if (!report.ok()) throw std::logic_error("generate_split produced a split that fails verification");
  return result;
}

VerificationReport verify_split(const SplitResult& split, const std::optional<SplitTargets>& targets,
                                std::span<const SequenceIdentity> identities) {
  VerificationReport report;
  const std::array<const std::vector<InteractionRecord>*, 4> sets = {&split.train, &split.c1,
                                                                    &split.c2, &split.c3};

  // Disjointness, including repeats inside one set.
  {
    std::unordered_map<UnorderedPair, int, UnorderedPairHash> owner;
    std::set<UnorderedPair> overlapping;
    for (int s = 0; s < 4; ++s) {
      for (const auto& r : *sets[static_cast<std::size_t>(s)]) {
        auto key = canonical_pair(r);
        if (!owner.emplace(key, s).second) overlapping.insert(std::move(key));
      }
    }
    report.overlapping.assign(overlapping.begin(), overlapping.end());
    report.disjoint = report.overlapping.empty();
  }

  const NodeSet train_nodes(split.train_nodes.begin(), split.train_nodes.end());
  const NodeSet train_endpoints = endpoint_set(split.train);
  report.train_nodes_exact =
      train_nodes == train_endpoints && train_nodes.size() == split.train_nodes.size();

  // Class conditions are checked against the endpoints of train, which is
  // the definition; train_nodes_exact covers the recorded list separately.
  const PairSet train_pairs = make_pair_set(split.train);
  const std::array<Placement, 3> expected = {Placement::C1, Placement::C2, Placement::C3};
  for (std::size_t c = 0; c < 3; ++c) {
    const auto& test = *sets[c + 1];
    std::vector<char> bad(test.size(), 0);
    const auto n = static_cast<std::ptrdiff_t>(test.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      bad[k] = classify_pair(test[k], train_endpoints, train_pairs) != expected[c];
    }
    for (std::size_t i = 0; i < test.size(); ++i) {
      if (bad[i]) report.class_violations[c].push_back(test[i]);
    }
    report.class_ok[c] = report.class_violations[c].empty();
  }

  for (std::size_t s = 0; s < 4; ++s) {
    auto& st = report.stats[s];
    for (const auto& r : *sets[s]) ++label_slot(st.labels, r.label);
    st.unique_nodes = endpoint_set(*sets[s]).size();
  }

  if (targets) {
    const std::array<LabelCounts, 4> want = {targets->train, targets->c1, targets->c2, targets->c3};
    bool met = true;
    for (std::size_t s = 0; s < 4; ++s) met = met && report.stats[s].labels == want[s];
    report.targets_met = met;
  }

  if (!identities.empty()) {
    NodeSet test_nodes;
    for (std::size_t s = 1; s < 4; ++s) {
      for (const auto& r : *sets[s]) {
        for (const auto* id : {&r.a, &r.b}) {
          if (!train_endpoints.contains(*id)) test_nodes.insert(*id);
        }
      }
    }
    for (const auto& e : identities) {
      if (e.identity <= kMaxCrossIdentity) continue;
      const bool cross = (train_endpoints.contains(e.a) && test_nodes.contains(e.b)) ||
                         (train_endpoints.contains(e.b) && test_nodes.contains(e.a));
      if (cross) {
        report.warnings.push_back(e.a + " and " + e.b + " share " + format_shortest(e.identity) +
                                  " identity across train/test");
      }
    }
  }
  return report;
}

std::vector<SequenceIdentity> parse_identities(std::istream& in) {
  std::vector<SequenceIdentity> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, '\t')) fields.push_back(field);
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty()) {
      throw ParseError(lineno, "expected idA<TAB>idB<TAB>identity");
    }
    const auto v = parse_double(fields[2]);
    if (!v || !std::isfinite(*v) || *v < 0.0 || *v > 1.0) {
      throw ParseError(lineno, "identity must be a number in [0, 1]");
    }
    out.push_back(SequenceIdentity{fields[0], fields[1], *v});
  }
  return out;
}

}  // namespace seqpip
