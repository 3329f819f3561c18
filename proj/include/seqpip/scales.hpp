#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace seqpip {

inline constexpr std::size_t kNumScales = 14;
inline constexpr std::size_t kNumResidues = 20;

// Canonical residue alphabet, alphabetical. Row order of every ScaleTable.
inline constexpr std::string_view kResidues = "ACDEFGHIKLMNPQRSTVWY";

// Physicochemical scales in canonical order. The enumerator value is the
// component index of every feature vector.
enum class Scale : std::size_t {
  H11,   // hydrophobicity, first method
  H12,   // hydrophobicity, second method
  H2,    // hydrophilicity
  NCI,   // net charge index of side chains
  P11,   // polarity, first method
  P12,   // polarity, second method
  P2,    // polarizability
  SASA,  // solvent-accessible surface area
  V,     // side-chain volume
  F,     // flexibility
  A1,    // accessibility
  E,     // exposed surface
  T,     // turns
  A2,    // antigenic propensity
};

inline constexpr std::array<std::string_view, kNumScales> kScaleNames = {
    "H11", "H12", "H2", "NCI", "P11", "P12", "P2",
    "SASA", "V", "F", "A1", "E", "T", "A2"};

constexpr std::size_t index(Scale s) noexcept { return static_cast<std::size_t>(s); }

std::string_view scale_name(Scale s) noexcept;
std::optional<Scale> parse_scale(std::string_view name) noexcept;

// Row index of a canonical residue code, or nullopt for anything else
// (lowercase included; callers normalise case first).
constexpr std::optional<std::size_t> residue_index(char residue) noexcept {
  const auto pos = kResidues.find(residue);
  if (pos == std::string_view::npos) return std::nullopt;
  return pos;
}

constexpr bool is_canonical_residue(char residue) noexcept {
  return residue_index(residue).has_value();
}

// PaperVerbatim reproduces the published table as printed, including the
// Y row whose NCI and V entries look transposed. CorrectedY swaps them back.
enum class ScaleVariant { PaperVerbatim, CorrectedY };

std::string_view variant_name(ScaleVariant v) noexcept;  // "paper" / "corrected"
std::optional<ScaleVariant> parse_variant(std::string_view name) noexcept;

using ScaleRow = std::array<double, kNumScales>;

class ScaleTable {
public:
  explicit ScaleTable(ScaleVariant variant = ScaleVariant::PaperVerbatim);

  ScaleVariant variant() const noexcept { return variant_; }

  // Throws seqpip::Error for a residue outside the 20-letter alphabet.
  double lookup(char residue, Scale scale) const;
  const ScaleRow& row(char residue) const;

  // Unchecked row access by alphabet index, for hot loops that already
  // validated their input.
  const ScaleRow& row_at(std::size_t residue_idx) const noexcept { return rows_[residue_idx]; }

  // CSV: header "AA,H11,...,A2" then 20 rows in alphabetical residue order.
  std::string to_csv() const;

private:
  ScaleVariant variant_;
  std::array<ScaleRow, kNumResidues> rows_;
};

// Convenience mirroring the table constructor.
inline ScaleTable scale_table(ScaleVariant variant) { return ScaleTable(variant); }

}  // namespace seqpip
