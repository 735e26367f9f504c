#ifndef WSCAN_GENOTYPE_HPP
#define WSCAN_GENOTYPE_HPP

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace wscan {

/// Genotype codes are additive minor-allele counts; 3 marks a missing call.
using GenotypeCode = std::uint8_t;
inline constexpr GenotypeCode kMissing = 3;

/// Subjects x markers, column-major so each marker column is contiguous.
using GenotypeMatrix = Eigen::Matrix<GenotypeCode, Eigen::Dynamic, Eigen::Dynamic>;
/// 0 = control, 1 = case.
using PhenotypeVector = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, 1>;

/// Validated genotype/phenotype data. Immutable once constructed.
class GenotypeDataset {
 public:
  /// Throws ValidationError when any invariant is violated: names unique and
  /// matching the column count, codes in {0,1,2,kMissing}, phenotype binary
  /// with at least one case and one control.
  GenotypeDataset(std::vector<std::string> marker_names, GenotypeMatrix genotypes,
                  PhenotypeVector phenotype);

  std::size_t n_subjects() const noexcept { return static_cast<std::size_t>(genotypes_.rows()); }
  std::size_t n_markers() const noexcept { return static_cast<std::size_t>(genotypes_.cols()); }
  std::size_t n_cases() const noexcept { return n_cases_; }
  std::size_t n_controls() const noexcept { return n_subjects() - n_cases_; }

  const std::vector<std::string>& marker_names() const noexcept { return names_; }
  const GenotypeMatrix& genotypes() const noexcept { return genotypes_; }
  const PhenotypeVector& phenotype() const noexcept { return phenotype_; }

  GenotypeCode at(std::size_t subject, std::size_t marker) const {
    return genotypes_(static_cast<Eigen::Index>(subject), static_cast<Eigen::Index>(marker));
  }

  /// Same genotypes with a different phenotype vector (re-validated).
  GenotypeDataset with_phenotype(PhenotypeVector phenotype) const;

  friend bool operator==(const GenotypeDataset& a, const GenotypeDataset& b);

 private:
  std::vector<std::string> names_;
  GenotypeMatrix genotypes_;
  PhenotypeVector phenotype_;
  std::size_t n_cases_ = 0;
};

struct PhenotypeColumn {
  std::string name;
};
struct PhenotypeFile {
  std::filesystem::path path;
};
using PhenotypeSource = std::variant<PhenotypeColumn, PhenotypeFile>;

/// Reads a comma- or tab-separated genotype table (delimiter taken from the
/// header line). One header row of column names, one row per subject.
GenotypeDataset load_text(const std::filesystem::path& path, const PhenotypeSource& phenotype,
                          const std::string& missing_token = "NA");

/// Writes the dataset in the layout load_text reads, phenotype as the last column.
void write_text(const GenotypeDataset& dataset, const std::filesystem::path& path,
                char delimiter = ',', const std::string& phenotype_column = "phenotype",
                const std::string& missing_token = "NA");

}  // namespace wscan

#endif  // WSCAN_GENOTYPE_HPP
