#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "seqpip/sequences.hpp"

namespace seqpip {

// Test classes by how many endpoints of a held-out pair are training nodes:
// C1 both, C2 exactly one, C3 none.
enum class TestClass { C1, C2, C3 };

// classify_pair outcome. Rejected: the exact pair is already in training.
enum class Placement { C1, C2, C3, Rejected };

std::string_view placement_name(Placement p) noexcept;

// Pair with endpoints sorted lexicographically, so (a, b) and (b, a) compare
// equal.
struct UnorderedPair {
  ProteinId first;
  ProteinId second;

  friend bool operator==(const UnorderedPair&, const UnorderedPair&) = default;
  friend auto operator<=>(const UnorderedPair&, const UnorderedPair&) = default;
};

UnorderedPair canonical_pair(const ProteinId& a, const ProteinId& b);
inline UnorderedPair canonical_pair(const InteractionRecord& r) { return canonical_pair(r.a, r.b); }

struct UnorderedPairHash {
  std::size_t operator()(const UnorderedPair& p) const noexcept {
    const std::size_t h1 = std::hash<std::string>{}(p.first);
    const std::size_t h2 = std::hash<std::string>{}(p.second);
    return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
  }
};

using PairSet = std::unordered_set<UnorderedPair, UnorderedPairHash>;
using NodeSet = std::unordered_set<ProteinId>;

PairSet make_pair_set(std::span<const InteractionRecord> records);
NodeSet endpoint_set(std::span<const InteractionRecord> records);

Placement classify_pair(const InteractionRecord& pair, const NodeSet& train_nodes,
                        const PairSet& train_pairs);

// Number of distinct unordered non-self pairs over `nodes` that are not in
// `known`.
std::size_t max_negatives(std::span<const ProteinId> nodes, const PairSet& known);

// n distinct non-self unordered pairs over `nodes`, none in `known`, drawn
// uniformly with a seeded generator; label 0. Duplicate node ids are
// ignored. Throws seqpip::Error stating the achievable maximum when n is
// infeasible.
std::vector<InteractionRecord> sample_negatives(std::span<const ProteinId> nodes,
                                                const PairSet& known, std::size_t n,
                                                std::uint64_t seed);

struct LabelCounts {
  std::size_t positives = 0;
  std::size_t negatives = 0;

  std::size_t total() const noexcept { return positives + negatives; }
  friend bool operator==(const LabelCounts&, const LabelCounts&) = default;
};

struct SplitTargets {
  LabelCounts train;
  LabelCounts c1;
  LabelCounts c2;
  LabelCounts c3;

  std::size_t total() const noexcept {
    return train.total() + c1.total() + c2.total() + c3.total();
  }
  friend bool operator==(const SplitTargets&, const SplitTargets&) = default;
};

// Train 2000/2000, C1 1000/1000, C2 750/750, C3 750/750 (positives/negatives).
SplitTargets competition_targets();

struct SplitResult {
  std::vector<InteractionRecord> train;
  std::vector<InteractionRecord> c1;
  std::vector<InteractionRecord> c2;
  std::vector<InteractionRecord> c3;
  std::vector<ProteinId> train_nodes;  // sorted, endpoints of train
  std::uint64_t seed = 0;
  std::size_t duplicates_dropped = 0;
};

// Seeded split of all_pairs into train plus C1/C2/C3 test sets meeting the
// per-label targets:
//   1. drop repeated unordered pairs, shuffle;
//   2. grow a training region node by node, always taking the node with
//      the most pairs into the region (ties: higher degree first), until
//      its internal pairs can cover the train and C1 targets;
//   3. assign internal pairs to train greedily, first those that cover a
//      new node, then in shuffled order, until the train targets are met;
//   4. classify every other pair against the resulting train nodes and
//      fill C1/C2/C3 in shuffled order.
// Output sets keep input order. Throws seqpip::Error with the achieved
// counts when a target cannot be met; a different seed may succeed.
SplitResult generate_split(const std::vector<InteractionRecord>& all_pairs,
                           const SplitTargets& targets, std::uint64_t seed);

// Pairwise sequence identity in [0, 1] between two proteins.
struct SequenceIdentity {
  ProteinId a;
  ProteinId b;
  double identity = 0.0;
};

struct SetStats {
  LabelCounts labels;
  std::size_t unique_nodes = 0;
};

struct VerificationReport {
  bool disjoint = true;               // no unordered pair in two sets (or twice in one)
  bool train_nodes_exact = true;      // train_nodes == endpoints of train
  std::array<bool, 3> class_ok{true, true, true};      // C1/C2/C3 endpoint conditions
  std::optional<bool> targets_met;    // only when targets were supplied

  std::vector<UnorderedPair> overlapping;
  std::array<std::vector<InteractionRecord>, 3> class_violations;
  std::array<SetStats, 4> stats;      // train, c1, c2, c3
  std::vector<std::string> warnings;  // homology warnings; never affect ok()

  bool ok() const noexcept {
    return disjoint && train_nodes_exact && class_ok[0] && class_ok[1] && class_ok[2] &&
           targets_met.value_or(true);
  }
};

inline constexpr double kMaxCrossIdentity = 0.4;

VerificationReport verify_split(const SplitResult& split,
                                const std::optional<SplitTargets>& targets = std::nullopt,
                                std::span<const SequenceIdentity> identities = {});

// "idA<TAB>idB<TAB>identity" lines, '#' comments.
std::vector<SequenceIdentity> parse_identities(std::istream& in);

}  // namespace seqpip
