#include "seqpip/features.hpp"

#include <cmath>
#include <unordered_map>

#include "seqpip/error.hpp"
#include "seqpip/numfmt.hpp"

namespace seqpip {
namespace {

const ProteinSequence& resolve(const SequenceCollection& seqs, const std::string& id,
                               std::size_t record_index) {
  const auto* seq = seqs.find(id);
  if (!seq) {
    throw Error("unknown protein id '" + id + "' in record " + std::to_string(record_index));
  }
  return *seq;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

FeatureVector protein_vector(std::string_view residues, const ScaleTable& table) {
  if (residues.empty()) throw Error("cannot featurize an empty sequence");
  FeatureVector sum{};
  for (char c : residues) {
    const auto& row = table.row(c);
    for (std::size_t k = 0; k < kNumScales; ++k) sum[k] += row[k];
  }
  const double n = static_cast<double>(residues.size());
  for (auto& v : sum) v /= n;
  return sum;
}

FeatureVector pair_vector(const FeatureVector& a, const FeatureVector& b) noexcept {
  FeatureVector out;
  for (std::size_t k = 0; k < kNumScales; ++k) out[k] = (a[k] + b[k]) / 2.0;
  return out;
}

FeatureMatrix featurize_dataset(const std::vector<InteractionRecord>& records,
                                const SequenceCollection& seqs, const ScaleTable& table) {
  // Sequential pre-pass: resolve every endpoint to a slot in the memo table.
  std::unordered_map<std::string_view, std::size_t> slot_of;
  std::vector<const ProteinSequence*> unique;
  std::vector<std::array<std::size_t, 2>> slots(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::string* ids[2] = {&records[i].a, &records[i].b};
    for (int e = 0; e < 2; ++e) {
      auto it = slot_of.find(*ids[e]);
      if (it == slot_of.end()) {
        const auto& seq = resolve(seqs, *ids[e], i);
        it = slot_of.emplace(seq.id, unique.size()).first;
        unique.push_back(&seq);
      }
      slots[i][e] = it->second;
    }
  }

  std::vector<FeatureVector> memo(unique.size());
  const auto n_unique = static_cast<std::ptrdiff_t>(unique.size());
  // protein_vector only throws on invalid sequences; check them up front so
  // no exception has to escape the parallel region.
  for (const auto* seq : unique) {
    if (seq->residues.empty()) throw Error("protein '" + seq->id + "' has an empty sequence");
    for (char c : seq->residues) {
      if (!is_canonical_residue(c)) {
        throw Error("protein '" + seq->id + "' contains non-canonical residue '" +
                    std::string(1, c) + "'");
      }
    }
  }
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t u = 0; u < n_unique; ++u) {
    memo[static_cast<std::size_t>(u)] = protein_vector(unique[static_cast<std::size_t>(u)]->residues, table);
  }

  FeatureMatrix out(records.size());
  const auto n_rows = static_cast<std::ptrdiff_t>(records.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n_rows; ++i) {
    const auto r = static_cast<std::size_t>(i);
    out[r].record = records[r];
    out[r].x = pair_vector(memo[slots[r][0]], memo[slots[r][1]]);
  }
  return out;
}

FeatureMatrix featurize_dataset_serial(const std::vector<InteractionRecord>& records,
                                       const SequenceCollection& seqs, const ScaleTable& table) {
  FeatureMatrix out;
  out.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& a = resolve(seqs, records[i].a, i);
    const auto& b = resolve(seqs, records[i].b, i);
    out.push_back(FeatureRow{records[i], pair_vector(protein_vector(a, table), protein_vector(b, table))});
  }
  return out;
}

void write_feature_csv(std::ostream& out, const FeatureMatrix& matrix,
                       const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << kFeatureCsvHeader << '\n';
  for (const auto& row : matrix) {
    out << row.record.a << ',' << row.record.b << ',' << row.record.label;
    for (double v : row.x) out << ',' << format_full(v);
    out << '\n';
  }
}

FeatureMatrix read_feature_csv(std::istream& in) {
  FeatureMatrix out;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != kFeatureCsvHeader) throw ParseError(lineno, "unexpected feature CSV header");
      header_seen = true;
      continue;
    }
    const auto fields = split_commas(line);
    if (fields.size() != 3 + kNumScales) {
      throw ParseError(lineno, "expected " + std::to_string(3 + kNumScales) + " fields, found " +
                                   std::to_string(fields.size()));
    }
    if (fields[0].empty() || fields[1].empty()) throw ParseError(lineno, "empty protein id");
    FeatureRow row;
    row.record.a = std::string(fields[0]);
    row.record.b = std::string(fields[1]);
    if (fields[2] == "1") {
      row.record.label = 1;
    } else if (fields[2] == "0") {
      row.record.label = 0;
    } else {
      throw ParseError(lineno, "label must be 0 or 1");
    }
    for (std::size_t k = 0; k < kNumScales; ++k) {
      const auto v = parse_double(fields[3 + k]);
      if (!v || !std::isfinite(*v)) {
        throw ParseError(lineno, "bad value for " + std::string(kScaleNames[k]));
      }
      row.x[k] = *v;
    }
    out.push_back(std::move(row));
  }
  if (!header_seen) throw ParseError(lineno, "missing feature CSV header");
  return out;
}

}  // namespace seqpip
