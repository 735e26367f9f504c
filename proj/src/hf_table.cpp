#include "wscan/hf_table.hpp"

#include "wscan/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

namespace wscan {

int HfTable::max_k(int order) {
  if (order == 1) return 3;
  if (order == 2) return 9;
  throw ArgumentError("order must be 1 or 2, got " + std::to_string(order));
}

HfTable::HfTable(int order, std::map<int, HfEntry> entries, HfProvenance provenance)
    : order_(order), entries_(std::move(entries)), provenance_(provenance) {
  const int kmax = max_k(order);
  for (const auto& [k, e] : entries_) {
    if (k < 2 || k > kmax) {
      throw ConfigError("k=" + std::to_string(k) + " outside [2," + std::to_string(kmax) +
                        "] for order " + std::to_string(order));
    }
    if (!(e.h > 0.0) || !(e.f > 0.0) || !std::isfinite(e.h) || !std::isfinite(e.f)) {
      throw ConfigError("h and f must be positive and finite (k=" + std::to_string(k) + ")");
    }
  }
  for (int k = 2; k <= kmax; ++k) {
    if (!contains(k)) entries_[k] = HfEntry{(k - 1.0) / k, k - 1.0, false, 0};
  }
}

const HfEntry& HfTable::at(int k) const {
  const auto it = entries_.find(k);
  if (it == entries_.end()) {
    throw ConfigError("no h/f entry for k=" + std::to_string(k) + " (order " +
                      std::to_string(order_) + ")");
  }
  return it->second;
}

HfTable HfTable::perturbed(double h_scale, double f_shift) const {
  auto entries = entries_;
  for (auto& [k, e] : entries) {
    e.h *= h_scale;
    e.f += f_shift;
  }
  return HfTable(order_, std::move(entries), provenance_);
}

HfTable default_hf(int order) {
  const int kmax = HfTable::max_k(order);
  std::map<int, HfEntry> entries;
  for (int k = 2; k <= kmax; ++k) entries[k] = HfEntry{(k - 1.0) / k, k - 1.0, false, 0};
  return HfTable(order, std::move(entries), HfProvenance{});
}

namespace {

constexpr const char* kHeader = "order\tk\th\tf\tprovenance";

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string provenance_field(const HfProvenance& p, const HfEntry& e) {
  if (!p.estimated) return "default";
  std::ostringstream os;
  os << (e.estimated ? "estimated" : "default_fallback") << "(B=" << p.B
     << ";n_sample=" << p.n_sample << ";seed=" << p.seed << ";pool=" << e.pool_size << ')';
  return os.str();
}

struct ParsedProvenance {
  bool table_estimated = false;
  bool entry_estimated = false;
  HfProvenance params;
  std::size_t pool = 0;
};

ParsedProvenance parse_provenance(const std::string& field, std::size_t line) {
  ParsedProvenance out;
  if (field == "default") return out;
  const auto open = field.find('(');
  if (open == std::string::npos || field.back() != ')') {
    throw FormatError("hf TSV line " + std::to_string(line) + ": bad provenance '" + field + "'");
  }
  const std::string kind = field.substr(0, open);
  if (kind != "estimated" && kind != "default_fallback") {
    throw FormatError("hf TSV line " + std::to_string(line) + ": bad provenance '" + field + "'");
  }
  out.table_estimated = true;
  out.entry_estimated = kind == "estimated";
  out.params.estimated = true;
  std::istringstream body(field.substr(open + 1, field.size() - open - 2));
  std::string item;
  while (std::getline(body, item, ';')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw FormatError("hf TSV line " + std::to_string(line) + ": bad provenance item");
    const std::string key = item.substr(0, eq);
    const std::uint64_t value = std::stoull(item.substr(eq + 1));
    if (key == "B") out.params.B = value;
    else if (key == "n_sample") out.params.n_sample = value;
    else if (key == "seed") out.params.seed = value;
    else if (key == "pool") out.pool = value;
    else throw FormatError("hf TSV line " + std::to_string(line) + ": unknown key '" + key + "'");
  }
  return out;
}

}  // namespace

void write_hf_tsv(std::span<const HfTable> tables, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << kHeader << '\n';
  for (const auto& t : tables) {
    for (const auto& [k, e] : t.entries()) {
      out << t.order() << '\t' << k << '\t' << format_real(e.h) << '\t' << format_real(e.f)
          << '\t' << provenance_field(t.provenance(), e) << '\n';
    }
  }
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<HfTable> read_hf_tsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty hf TSV " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) throw FormatError("hf TSV header must be '" + std::string(kHeader) + "'");

  struct Pending {
    int order;
    std::map<int, HfEntry> entries;
    HfProvenance provenance;
  };
  std::vector<Pending> pending;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string order_s, k_s, h_s, f_s, prov_s, extra;
    if (!std::getline(row, order_s, '\t') || !std::getline(row, k_s, '\t') ||
        !std::getline(row, h_s, '\t') || !std::getline(row, f_s, '\t') ||
        !std::getline(row, prov_s, '\t') || std::getline(row, extra, '\t')) {
      throw FormatError("hf TSV line " + std::to_string(line_no) + ": expected 5 columns");
    }
    int order = 0;
    int k = 0;
    HfEntry e;
    try {
      order = std::stoi(order_s);
      k = std::stoi(k_s);
      e.h = std::stod(h_s);
      e.f = std::stod(f_s);
    } catch (const std::exception&) {
      throw FormatError("hf TSV line " + std::to_string(line_no) + ": non-numeric field");
    }
    const auto prov = parse_provenance(prov_s, line_no);
    e.estimated = prov.entry_estimated;
    e.pool_size = prov.pool;

    auto it = std::find_if(pending.begin(), pending.end(),
                           [&](const Pending& p) { return p.order == order; });
    if (it == pending.end()) {
      pending.push_back({order, {}, prov.params});
      it = pending.end() - 1;
    }
    if (!it->entries.emplace(k, e).second) {
      throw FormatError("hf TSV line " + std::to_string(line_no) + ": duplicate k=" +
                        std::to_string(k));
    }
  }

  std::vector<HfTable> tables;
  for (auto& p : pending) {
    try {
      tables.emplace_back(p.order, std::move(p.entries), p.provenance);
    } catch (const ArgumentError& e) {
      throw FormatError(std::string("hf TSV: ") + e.what());
    } catch (const ConfigError& e) {
      throw FormatError(std::string("hf TSV: ") + e.what());
    }
  }
  return tables;
}

}  // namespace wscan
