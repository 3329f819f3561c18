#pragma once

#include <array>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "seqpip/scales.hpp"
#include "seqpip/sequences.hpp"

namespace seqpip {

// One value per scale, in canonical Scale order.
using FeatureVector = std::array<double, kNumScales>;

struct FeatureRow {
  InteractionRecord record;
  FeatureVector x{};
};

// One row per input record, input order preserved.
using FeatureMatrix = std::vector<FeatureRow>;

// Mean of the per-residue scale rows, accumulated left to right.
// Throws seqpip::Error on an empty sequence or a non-canonical residue.
FeatureVector protein_vector(std::string_view residues, const ScaleTable& table);
inline FeatureVector protein_vector(const ProteinSequence& seq, const ScaleTable& table) {
  return protein_vector(seq.residues, table);
}

// Component-wise (a + b) / 2. Exactly commutative.
FeatureVector pair_vector(const FeatureVector& a, const FeatureVector& b) noexcept;

// Per-protein vectors are computed once per distinct id, then rows are
// assembled in parallel. Throws seqpip::Error naming the id and record
// index when an id does not resolve.
FeatureMatrix featurize_dataset(const std::vector<InteractionRecord>& records,
                                const SequenceCollection& seqs, const ScaleTable& table);

// Serial, unmemoized reference. Bit-identical to featurize_dataset.
FeatureMatrix featurize_dataset_serial(const std::vector<InteractionRecord>& records,
                                       const SequenceCollection& seqs, const ScaleTable& table);

// "id_a,id_b,label,H11,...,A2" with 17-significant-digit values. Comment
// lines are written first, each prefixed by "# ".
inline constexpr std::string_view kFeatureCsvHeader =
    "id_a,id_b,label,H11,H12,H2,NCI,P11,P12,P2,SASA,V,F,A1,E,T,A2";

void write_feature_csv(std::ostream& out, const FeatureMatrix& matrix,
                       const std::vector<std::string>& comments = {});
FeatureMatrix read_feature_csv(std::istream& in);

}  // namespace seqpip
