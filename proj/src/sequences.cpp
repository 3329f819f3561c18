#include "seqpip/sequences.hpp"

#include <cctype>
#include <sstream>

#include "seqpip/error.hpp"
#include "seqpip/scales.hpp"

namespace seqpip {
namespace {

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool is_blank(std::string_view line) {
  for (char c : line) {
    if (c != ' ' && c != '\t') return false;
  }
  return true;
}

bool has_whitespace(std::string_view s) {
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) return true;
  }
  return false;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

}  // namespace

std::optional<UnknownResiduePolicy> parse_policy(std::string_view name) noexcept {
  if (name == "error") return UnknownResiduePolicy::Error;
  if (name == "skip") return UnknownResiduePolicy::Skip;
  return std::nullopt;
}

std::string_view policy_name(UnknownResiduePolicy p) noexcept {
  return p == UnknownResiduePolicy::Error ? "error" : "skip";
}

SequenceCollection::SequenceCollection(std::vector<ProteinSequence> seqs) {
  seqs_.reserve(seqs.size());
  for (auto& s : seqs) add(std::move(s));
}

void SequenceCollection::add(ProteinSequence seq) {
  const auto [it, inserted] = index_.emplace(seq.id, seqs_.size());
  if (!inserted) throw Error("duplicate protein id '" + seq.id + "'");
  seqs_.push_back(std::move(seq));
}

const ProteinSequence* SequenceCollection::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &seqs_[it->second];
}

std::vector<ProteinSequence> parse_fasta(std::istream& in, UnknownResiduePolicy policy) {
  std::vector<ProteinSequence> out;
  std::unordered_map<std::string, std::size_t> seen;
  std::size_t header_line = 0;
  bool open = false;

  auto close_record = [&] {
    if (!open) return;
    if (out.back().residues.empty()) {
      throw ParseError(header_line, "record '" + out.back().id + "' has no residues");
    }
    open = false;
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (is_blank(line)) continue;

    if (line.front() == '>') {
      close_record();
      std::string_view rest(line);
      rest.remove_prefix(1);
      const auto end = rest.find_first_of(" \t");
      const auto id = rest.substr(0, end);
      if (id.empty()) throw ParseError(lineno, "header without an id");
      if (!seen.emplace(std::string(id), out.size()).second) {
        throw ParseError(lineno, "duplicate protein id '" + std::string(id) + "'");
      }
      out.push_back(ProteinSequence{std::string(id), {}});
      header_line = lineno;
      open = true;
      continue;
    }

    if (!open) throw ParseError(lineno, "sequence data before any '>' header");
    auto& residues = out.back().residues;
    for (char raw : line) {
      if (raw == ' ' || raw == '\t') continue;
      const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(raw)));
      if (is_canonical_residue(c)) {
        residues.push_back(c);
      } else if (policy == UnknownResiduePolicy::Error) {
        throw ParseError(lineno, "non-canonical residue '" + std::string(1, raw) + "' in record '" +
                                     out.back().id + "'");
      }
    }
  }
  close_record();
  return out;
}

std::vector<ProteinSequence> parse_fasta(std::string_view text, UnknownResiduePolicy policy) {
  std::istringstream in{std::string(text)};
  return parse_fasta(in, policy);
}

void write_fasta(std::ostream& out, const std::vector<ProteinSequence>& seqs,
                 std::size_t line_width) {
  if (line_width == 0) line_width = 60;
  for (const auto& s : seqs) {
    out << '>' << s.id << '\n';
    for (std::size_t i = 0; i < s.residues.size(); i += line_width) {
      out << std::string_view(s.residues).substr(i, line_width) << '\n';
    }
  }
}

std::vector<InteractionRecord> parse_pairs(std::istream& in) {
  std::vector<InteractionRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty() || line.front() == '#' || is_blank(line)) continue;

    const auto fields = split_tabs(line);
    if (fields.size() != 3) {
      throw ParseError(lineno, "expected 3 tab-separated fields, found " +
                                   std::to_string(fields.size()));
    }
    for (int f = 0; f < 2; ++f) {
      if (fields[f].empty()) throw ParseError(lineno, "empty protein id");
      if (has_whitespace(fields[f])) {
        throw ParseError(lineno, "protein id contains whitespace: '" + std::string(fields[f]) + "'");
      }
    }
    int label = 0;
    if (fields[2] == "1") {
      label = 1;
    } else if (fields[2] != "0") {
      throw ParseError(lineno, "label must be 0 or 1, got '" + std::string(fields[2]) + "'");
    }
    out.push_back(InteractionRecord{std::string(fields[0]), std::string(fields[1]), label});
  }
  return out;
}

std::vector<InteractionRecord> parse_pairs(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_pairs(in);
}

void write_pairs(std::ostream& out, const std::vector<InteractionRecord>& records,
                 const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  for (const auto& r : records) out << r.a << '\t' << r.b << '\t' << r.label << '\n';
}

}  // namespace seqpip
