#include "wscan/packed.hpp"

#include "wscan/errors.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <iterator>

namespace wscan {

namespace {

constexpr std::array<char, 4> kMagic{'W', 'P', 'K', '1'};

void set_bit(Word* words, std::size_t i) noexcept { words[i / 64] |= Word{1} << (i % 64); }
bool get_bit(std::span<const Word> words, std::size_t i) noexcept {
  return (words[i / 64] >> (i % 64)) & 1U;
}

class ByteWriter {
 public:
  void put_u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void put_u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void put(std::string_view s) { bytes_.insert(bytes_.end(), s.begin(), s.end()); }
  const std::vector<char>& bytes() const noexcept { return bytes_; }

 private:
  std::vector<char> bytes_;
};

class ByteReader {
 public:
  explicit ByteReader(std::vector<char> bytes) : bytes_(std::move(bytes)) {}

  std::uint64_t get_u64() { return get_le(8); }
  std::uint32_t get_u32() { return static_cast<std::uint32_t>(get_le(4)); }
  std::string get_string(std::size_t n) {
    need(n);
    std::string s(bytes_.data() + pos_, n);
    pos_ += n;
    return s;
  }
  bool at_end() const noexcept { return pos_ == bytes_.size(); }
  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw FormatError("truncated WPK1 file");
  }
  std::uint64_t get_le(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += static_cast<std::size_t>(n);
    return v;
  }

  std::vector<char> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

void PackedGenotypes::allocate() {
  case_words_ = words_for(n_cases_);
  control_words_ = words_for(n_subjects() - n_cases_);
  bits_.assign(n_markers() * marker_stride(), 0);
}

PackedGenotypes pack(const GenotypeDataset& dataset) {
  PackedGenotypes p;
  p.names_ = dataset.marker_names();
  p.phenotype_.assign(dataset.phenotype().data(),
                      dataset.phenotype().data() + dataset.phenotype().size());
  p.n_cases_ = dataset.n_cases();
  p.allocate();

  // Position of each subject within its group's bitset.
  const std::size_t n = dataset.n_subjects();
  std::vector<std::uint32_t> slot(n);
  std::vector<std::uint32_t> offset(n);
  std::size_t next_case = 0;
  std::size_t next_control = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (p.phenotype_[s] == 1) {
      slot[s] = static_cast<std::uint32_t>(next_case++);
      offset[s] = 0;
    } else {
      slot[s] = static_cast<std::uint32_t>(next_control++);
      offset[s] = static_cast<std::uint32_t>(p.case_words_);
    }
  }

  const std::size_t plane_stride = p.case_words_ + p.control_words_;
  const auto& g = dataset.genotypes();
  for (std::size_t m = 0; m < dataset.n_markers(); ++m) {
    Word* base = p.bits_.data() + m * p.marker_stride();
    const GenotypeCode* column = g.data() + m * n;
    for (std::size_t s = 0; s < n; ++s) {
      set_bit(base + column[s] * plane_stride + offset[s], slot[s]);
    }
  }
  return p;
}

GenotypeDataset unpack(const PackedGenotypes& packed) {
  const std::size_t n = packed.n_subjects();
  GenotypeMatrix g(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(packed.n_markers()));
  PhenotypeVector y(static_cast<Eigen::Index>(n));
  for (std::size_t s = 0; s < n; ++s) y(static_cast<Eigen::Index>(s)) = packed.phenotype()[s];

  for (std::size_t m = 0; m < packed.n_markers(); ++m) {
    std::size_t next_case = 0;
    std::size_t next_control = 0;
    for (std::size_t s = 0; s < n; ++s) {
      const bool is_case = packed.phenotype()[s] == 1;
      const Group group = is_case ? Group::Case : Group::Control;
      const std::size_t slot = is_case ? next_case++ : next_control++;
      GenotypeCode code = kMissing;
      for (GenotypeCode c = 0; c < 3; ++c) {
        if (get_bit(packed.plane(m, c, group), slot)) code = c;
      }
      g(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(m)) = code;
    }
  }
  return GenotypeDataset(packed.marker_names(), std::move(g), std::move(y));
}

void write_packed(const PackedGenotypes& packed, const std::filesystem::path& path) {
  ByteWriter w;
  w.put(std::string_view(kMagic.data(), kMagic.size()));
  w.put_u64(packed.n_subjects());
  w.put_u64(packed.n_markers());
  for (const auto& name : packed.marker_names()) {
    w.put_u32(static_cast<std::uint32_t>(name.size()));
    w.put(name);
  }
  std::vector<Word> pheno(words_for(packed.n_subjects()), 0);
  for (std::size_t s = 0; s < packed.n_subjects(); ++s) {
    if (packed.phenotype()[s] == 1) set_bit(pheno.data(), s);
  }
  for (const Word word : pheno) w.put_u64(word);
  for (const Word word : packed.raw_bits()) w.put_u64(word);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
  if (!out) throw IoError("write failed for " + path.string());
}

PackedGenotypes read_packed(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  ByteReader r(std::vector<char>(std::istreambuf_iterator<char>(in), {}));

  if (r.get_string(4) != std::string_view(kMagic.data(), kMagic.size())) {
    throw FormatError("bad magic: not a WPK1 file");
  }
  const std::uint64_t n_subjects = r.get_u64();
  const std::uint64_t n_markers = r.get_u64();
  // Each marker needs at least a 4-byte name length; reject absurd headers early.
  if (n_markers > r.remaining() / 4 || n_subjects > r.remaining() * 8) {
    throw FormatError("truncated WPK1 file");
  }

  PackedGenotypes p;
  p.names_.reserve(n_markers);
  for (std::uint64_t m = 0; m < n_markers; ++m) p.names_.push_back(r.get_string(r.get_u32()));

  std::vector<Word> pheno(words_for(n_subjects));
  for (auto& word : pheno) word = r.get_u64();
  p.phenotype_.resize(n_subjects);
  for (std::size_t s = 0; s < n_subjects; ++s) {
    p.phenotype_[s] = get_bit(pheno, s) ? 1 : 0;
    p.n_cases_ += p.phenotype_[s];
  }
  if (p.n_cases_ == 0 || p.n_cases_ == n_subjects) {
    throw FormatError("phenotype must contain both cases and controls");
  }
  if (n_subjects % 64 != 0 && !pheno.empty() && (pheno.back() >> (n_subjects % 64)) != 0) {
    throw FormatError("nonzero padding in phenotype bitset");
  }

  p.allocate();
  if (r.remaining() != p.bits_.size() * sizeof(Word)) {
    throw FormatError(r.remaining() < p.bits_.size() * sizeof(Word) ? "truncated WPK1 file"
                                                                     : "trailing bytes in WPK1 file");
  }
  for (auto& word : p.bits_) word = r.get_u64();

  // Partition check: the four planes of each group are disjoint and cover every slot.
  for (std::size_t m = 0; m < p.n_markers(); ++m) {
    for (const auto& [group, count] : {std::pair{Group::Case, p.n_cases()},
                                      std::pair{Group::Control, p.n_controls()}}) {
      const std::size_t nw = words_for(count);
      for (std::size_t i = 0; i < nw; ++i) {
        Word seen = 0;
        Word overlap = 0;
        for (GenotypeCode c = 0; c < 4; ++c) {
          const Word word = p.plane(m, c, group)[i];
          overlap |= seen & word;
          seen |= word;
        }
        const std::size_t valid = (i + 1 == nw && count % 64 != 0) ? count % 64 : 64;
        const Word expected = valid == 64 ? ~Word{0} : ((Word{1} << valid) - 1);
        if (overlap != 0 || seen != expected) {
          throw FormatError("marker '" + p.names_[m] + "': bitplanes do not partition subjects");
        }
      }
    }
  }
  return p;
}

bool is_packed_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::array<char, 4> head{};
  in.read(head.data(), head.size());
  return in.gcount() == 4 && head == kMagic;
}

SubjectPlanes::SubjectPlanes(const GenotypeDataset& dataset)
    : n_subjects_(dataset.n_subjects()),
      n_markers_(dataset.n_markers()),
      words_(words_for(dataset.n_subjects())),
      bits_(n_markers_ * 3 * words_, 0),
      counts_(n_markers_ * 3, 0) {
  const auto& g = dataset.genotypes();
  for (std::size_t m = 0; m < n_markers_; ++m) {
    const GenotypeCode* column = g.data() + m * n_subjects_;
    for (std::size_t s = 0; s < n_subjects_; ++s) {
      const GenotypeCode c = column[s];
      if (c == kMissing) continue;
      set_bit(bits_.data() + (m * 3 + c) * words_, s);
      ++counts_[m * 3 + c];
    }
  }
}

std::vector<Word> case_mask(std::span<const std::uint8_t> phenotype) {
  std::vector<Word> mask(words_for(phenotype.size()), 0);
  for (std::size_t s = 0; s < phenotype.size(); ++s) {
    if (phenotype[s] == 1) set_bit(mask.data(), s);
  }
  return mask;
}

}  // namespace wscan
