#ifndef WSCAN_PACKED_HPP
#define WSCAN_PACKED_HPP

#include "wscan/genotype.hpp"

#include <bit>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace wscan {

using Word = std::uint64_t;

constexpr std::size_t words_for(std::size_t bits) noexcept { return (bits + 63) / 64; }

inline std::size_t popcount(std::span<const Word> a) noexcept {
  std::size_t n = 0;
  for (const Word w : a) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

inline std::size_t popcount_and(std::span<const Word> a, std::span<const Word> b) noexcept {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += static_cast<std::size_t>(std::popcount(a[i] & b[i]));
  return n;
}

inline std::size_t popcount_and(std::span<const Word> a, std::span<const Word> b,
                                std::span<const Word> c) noexcept {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    n += static_cast<std::size_t>(std::popcount(a[i] & b[i] & c[i]));
  }
  return n;
}

enum class Group : std::uint8_t { Case = 0, Control = 1 };

/// Per-marker bitplanes for codes 0, 1, 2 and missing, each split into a case
/// bitset (bit j = j-th case subject in file order) and a control bitset.
/// Exactly one of the four planes holds each subject's bit.
class PackedGenotypes {
 public:
  PackedGenotypes() = default;

  std::size_t n_subjects() const noexcept { return phenotype_.size(); }
  std::size_t n_markers() const noexcept { return names_.size(); }
  std::size_t n_cases() const noexcept { return n_cases_; }
  std::size_t n_controls() const noexcept { return n_subjects() - n_cases_; }
  const std::vector<std::string>& marker_names() const noexcept { return names_; }
  const std::vector<std::uint8_t>& phenotype() const noexcept { return phenotype_; }

  /// code in 0..3, where 3 is the missingness mask.
  std::span<const Word> plane(std::size_t marker, GenotypeCode code, Group group) const noexcept {
    const std::size_t base = marker * marker_stride() + code * (case_words_ + control_words_);
    return group == Group::Case ? std::span<const Word>(bits_.data() + base, case_words_)
                                : std::span<const Word>(bits_.data() + base + case_words_,
                                                        control_words_);
  }

  std::size_t case_words() const noexcept { return case_words_; }
  std::size_t control_words() const noexcept { return control_words_; }
  const std::vector<Word>& raw_bits() const noexcept { return bits_; }

  friend bool operator==(const PackedGenotypes&, const PackedGenotypes&) = default;

 private:
  friend PackedGenotypes pack(const GenotypeDataset&);
  friend PackedGenotypes read_packed(const std::filesystem::path&);

  std::size_t marker_stride() const noexcept { return 4 * (case_words_ + control_words_); }
  void allocate();

  std::vector<std::string> names_;
  std::vector<std::uint8_t> phenotype_;
  std::size_t n_cases_ = 0;
  std::size_t case_words_ = 0;
  std::size_t control_words_ = 0;
  std::vector<Word> bits_;
};

PackedGenotypes pack(const GenotypeDataset& dataset);
GenotypeDataset unpack(const PackedGenotypes& packed);

/// WPK1 layout, all integers little-endian:
///   "WPK1", u64 n_subjects, u64 n_markers,
///   n_markers x (u32 byte length, name bytes),
///   phenotype bitset (words_for(n_subjects) u64, bit i set = subject i is a case),
///   then per marker, for code 0, 1, 2, missing: case words, control words.
void write_packed(const PackedGenotypes& packed, const std::filesystem::path& path);
PackedGenotypes read_packed(const std::filesystem::path& path);

/// True when the file starts with the WPK1 magic.
bool is_packed_file(const std::filesystem::path& path);

/// Unsplit bitplanes over all subjects in file order. Used when the phenotype
/// is replaced by permutations: case counts come from AND with a case mask.
class SubjectPlanes {
 public:
  explicit SubjectPlanes(const GenotypeDataset& dataset);

  std::size_t n_subjects() const noexcept { return n_subjects_; }
  std::size_t n_markers() const noexcept { return n_markers_; }
  std::size_t words() const noexcept { return words_; }

  /// code in 0..2.
  std::span<const Word> plane(std::size_t marker, GenotypeCode code) const noexcept {
    return {bits_.data() + (marker * 3 + code) * words_, words_};
  }
  std::size_t code_count(std::size_t marker, GenotypeCode code) const noexcept {
    return counts_[marker * 3 + code];
  }

 private:
  std::size_t n_subjects_;
  std::size_t n_markers_;
  std::size_t words_;
  std::vector<Word> bits_;
  std::vector<std::size_t> counts_;
};

/// Bitset over subjects marking cases.
std::vector<Word> case_mask(std::span<const std::uint8_t> phenotype);

}  // namespace wscan

#endif  // WSCAN_PACKED_HPP
