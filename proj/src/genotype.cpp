#include "wscan/genotype.hpp"

#include "wscan/errors.hpp"

#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_set>

namespace wscan {

GenotypeDataset::GenotypeDataset(std::vector<std::string> marker_names, GenotypeMatrix genotypes,
                                 PhenotypeVector phenotype)
    : names_(std::move(marker_names)),
      genotypes_(std::move(genotypes)),
      phenotype_(std::move(phenotype)) {
  if (names_.size() != static_cast<std::size_t>(genotypes_.cols())) {
    throw ValidationError("marker name count " + std::to_string(names_.size()) +
                          " does not match genotype columns " +
                          std::to_string(genotypes_.cols()));
  }
  std::unordered_set<std::string> seen;
  for (const auto& name : names_) {
    if (!seen.insert(name).second) throw ValidationError("duplicate marker name '" + name + "'");
  }
  if (phenotype_.size() != genotypes_.rows()) {
    throw ValidationError("phenotype length " + std::to_string(phenotype_.size()) +
                          " does not match subject count " + std::to_string(genotypes_.rows()));
  }
  for (Eigen::Index i = 0; i < phenotype_.size(); ++i) {
    if (phenotype_(i) > 1) throw ValidationError("phenotype is not binary");
    n_cases_ += phenotype_(i);
  }
  if (n_cases_ == 0 || n_cases_ == n_subjects()) {
    throw ValidationError("phenotype must contain both cases and controls");
  }
  if ((genotypes_.array() > kMissing).any()) {
    throw ValidationError("genotype code outside {0,1,2,missing}");
  }
}

GenotypeDataset GenotypeDataset::with_phenotype(PhenotypeVector phenotype) const {
  return GenotypeDataset(names_, genotypes_, std::move(phenotype));
}

bool operator==(const GenotypeDataset& a, const GenotypeDataset& b) {
  return a.names_ == b.names_ && a.genotypes_.rows() == b.genotypes_.rows() &&
         a.genotypes_.cols() == b.genotypes_.cols() && a.genotypes_ == b.genotypes_ &&
         a.phenotype_ == b.phenotype_;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r' || s.front() == '\n')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r' || s.back() == '\n')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
}

bool blank(std::string_view line) { return trim(line).empty(); }

std::optional<std::uint8_t> parse_binary(std::string_view token) {
  if (token == "0") return 0;
  if (token == "1") return 1;
  return std::nullopt;
}

std::vector<std::uint8_t> read_phenotype_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open phenotype file " + path.string());
  std::vector<std::uint8_t> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const auto v = parse_binary(trim(line));
    if (!v) throw ValidationError("phenotype file line " + std::to_string(line_no) + ": value '" +
                                  std::string(trim(line)) + "' is not 0 or 1");
    values.push_back(*v);
  }
  return values;
}

}  // namespace

GenotypeDataset load_text(const std::filesystem::path& path, const PhenotypeSource& phenotype,
                          const std::string& missing_token) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open genotype file " + path.string());

  std::string header;
  std::size_t line_no = 0;
  while (std::getline(in, header)) {
    ++line_no;
    if (!blank(header)) break;
  }
  if (blank(header)) throw ParseError(line_no, "missing header row");
  const char delim = header.find('\t') != std::string::npos ? '\t' : ',';
  const auto columns = split(header, delim);

  std::optional<std::size_t> pheno_col;
  if (const auto* col = std::get_if<PhenotypeColumn>(&phenotype)) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (columns[c] == col->name) pheno_col = c;
    }
    if (!pheno_col) throw ParseError(line_no, "phenotype column '" + col->name + "' not in header");
  }

  std::vector<std::string> names;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (pheno_col && c == *pheno_col) continue;
    if (columns[c].empty()) throw ParseError(line_no, "empty column name");
    names.emplace_back(columns[c]);
  }

  std::vector<GenotypeCode> codes;  // row-major while reading
  std::vector<std::uint8_t> pheno;
  std::string line;
  std::size_t n_rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const auto fields = split(line, delim);
    if (fields.size() != columns.size()) {
      throw ParseError(line_no, "expected " + std::to_string(columns.size()) + " fields, found " +
                                    std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const auto tok = fields[c];
      if (pheno_col && c == *pheno_col) {
        const auto v = parse_binary(tok);
        if (!v) {
          throw ValidationError("line " + std::to_string(line_no) + ": phenotype value '" +
                                std::string(tok) + "' is not 0 or 1");
        }
        pheno.push_back(*v);
        continue;
      }
      if (tok == "0") codes.push_back(0);
      else if (tok == "1") codes.push_back(1);
      else if (tok == "2") codes.push_back(2);
      else if (tok == missing_token) codes.push_back(kMissing);
      else throw ParseError(line_no, "unknown genotype token '" + std::string(tok) + "'");
    }
    ++n_rows;
  }

  if (const auto* file = std::get_if<PhenotypeFile>(&phenotype)) {
    pheno = read_phenotype_file(file->path);
    if (pheno.size() != n_rows) {
      throw ValidationError("phenotype file has " + std::to_string(pheno.size()) +
                            " values for " + std::to_string(n_rows) + " subjects");
    }
  }

  const auto n_markers = static_cast<Eigen::Index>(names.size());
  GenotypeMatrix g(static_cast<Eigen::Index>(n_rows), n_markers);
  for (std::size_t r = 0; r < n_rows; ++r) {
    for (Eigen::Index m = 0; m < n_markers; ++m) {
      g(static_cast<Eigen::Index>(r), m) = codes[r * names.size() + static_cast<std::size_t>(m)];
    }
  }
  PhenotypeVector y = Eigen::Map<PhenotypeVector>(pheno.data(), static_cast<Eigen::Index>(pheno.size()));
  return GenotypeDataset(std::move(names), std::move(g), std::move(y));
}

void write_text(const GenotypeDataset& dataset, const std::filesystem::path& path, char delimiter,
                const std::string& phenotype_column, const std::string& missing_token) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& name : dataset.marker_names()) out << name << delimiter;
  out << phenotype_column << '\n';
  std::string row;
  for (std::size_t s = 0; s < dataset.n_subjects(); ++s) {
    row.clear();
    for (std::size_t m = 0; m < dataset.n_markers(); ++m) {
      const auto code = dataset.at(s, m);
      if (code == kMissing) row += missing_token;
      else row += static_cast<char>('0' + code);
      row += delimiter;
    }
    row += static_cast<char>('0' + dataset.phenotype()(static_cast<Eigen::Index>(s)));
    row += '\n';
    out << row;
  }
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace wscan
