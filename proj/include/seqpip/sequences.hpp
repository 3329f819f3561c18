#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace seqpip {

using ProteinId = std::string;

// What to do with residue codes outside the 20-letter alphabet
// (B, J, O, U, X, Z, '*', ...).
enum class UnknownResiduePolicy { Error, Skip };

std::optional<UnknownResiduePolicy> parse_policy(std::string_view name) noexcept;
std::string_view policy_name(UnknownResiduePolicy p) noexcept;

struct ProteinSequence {
  ProteinId id;
  std::string residues;  // uppercase, canonical codes only

  friend bool operator==(const ProteinSequence&, const ProteinSequence&) = default;
};

// Labeled pair. Identity is unordered: (a, b, l) and (b, a, l) denote the
// same interaction. Self pairs are allowed.
struct InteractionRecord {
  ProteinId a;
  ProteinId b;
  int label = 0;  // 1 = interacting, 0 = non-interacting

  friend bool operator==(const InteractionRecord&, const InteractionRecord&) = default;
};

// Ordered list of sequences with id lookup. Ids are unique.
class SequenceCollection {
public:
  SequenceCollection() = default;
  explicit SequenceCollection(std::vector<ProteinSequence> seqs);

  // Throws seqpip::Error if the id is already present.
  void add(ProteinSequence seq);

  const ProteinSequence* find(std::string_view id) const;
  std::size_t size() const noexcept { return seqs_.size(); }
  bool empty() const noexcept { return seqs_.empty(); }

  const std::vector<ProteinSequence>& items() const noexcept { return seqs_; }
  auto begin() const noexcept { return seqs_.begin(); }
  auto end() const noexcept { return seqs_.end(); }

private:
  std::vector<ProteinSequence> seqs_;
  std::unordered_map<std::string, std::size_t> index_;
};

// FASTA: '>' header whose first whitespace-delimited token is the id, then
// one or more sequence lines. Blank lines are ignored, CRLF accepted,
// lowercase uppercased. Throws ParseError / Error on malformed input,
// duplicate ids, non-canonical residues under policy Error, or a record
// left empty.
std::vector<ProteinSequence> parse_fasta(std::istream& in,
                                         UnknownResiduePolicy policy = UnknownResiduePolicy::Error);
std::vector<ProteinSequence> parse_fasta(std::string_view text,
                                         UnknownResiduePolicy policy = UnknownResiduePolicy::Error);

void write_fasta(std::ostream& out, const std::vector<ProteinSequence>& seqs,
                 std::size_t line_width = 60);

// Pairs TSV: "idA<TAB>idB<TAB>label" with label 0 or 1. '#' lines and blank
// lines are skipped. Order and multiplicity are preserved.
std::vector<InteractionRecord> parse_pairs(std::istream& in);
std::vector<InteractionRecord> parse_pairs(std::string_view text);

// Writes records as pairs TSV. Each comment line is emitted as "# <line>".
void write_pairs(std::ostream& out, const std::vector<InteractionRecord>& records,
                 const std::vector<std::string>& comments = {});

}  // namespace seqpip
