#include "cacheback/frozen_table.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>

namespace cacheback {

void NGramCounts::merge(const NGramCounts& other) {
  for (const auto& [leader, n] : other.leaders) leaders[leader] += n;
  for (const auto& [leader, followers] : other.pairs) {
    auto& mine = pairs[leader];
    for (const auto& [follower, n] : followers) mine[follower] += n;
  }
}

NGramCounts count_ngrams(std::span<const TokenSeq> documents, const CacheTableConfig& config) {
  config.validate();
  const std::size_t window = config.ll + config.fl;
  NGramCounts counts;
  for (const TokenSeq& doc : documents) {
    if (doc.size() < window) continue;
    for (std::size_t i = 0; i + window <= doc.size(); ++i) {
      std::span<const TokenId> w(doc.data() + i, window);
      NGram leader(w.first(config.ll));
      NGram follower(w.subspan(config.ll));
      ++counts.leaders[leader];
      ++counts.pairs[leader][follower];
    }
  }
  return counts;
}

FrozenTable::FrozenTable(const CacheTableConfig& config, std::vector<Entry> entries)
    : config_(config), entries_(std::move(entries)) {
  config_.validate();
  if (entries_.size() > config_.lc) throw UsageError("frozen table: more leaders than LC");
  index_.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const Entry& e = entries_[i];
    if (e.leader.size() != config_.ll) throw UsageError("frozen table: bad leader length");
    if (e.followers.size() > config_.fc) throw UsageError("frozen table: more followers than FC");
    for (const NGram& f : e.followers) {
      if (f.size() != config_.fl) throw UsageError("frozen table: bad follower length");
    }
    if (!index_.emplace(e.leader, i).second) throw UsageError("frozen table: duplicate leader");
  }
}

std::span<const NGram> FrozenTable::query(const NGram& leader) const {
  auto it = index_.find(leader);
  if (it == index_.end()) return {};
  return entries_[it->second].followers;
}

bool operator==(const FrozenTable& a, const FrozenTable& b) {
  if (a.config_.ll != b.config_.ll || a.config_.fl != b.config_.fl ||
      a.config_.fc != b.config_.fc || a.entries_.size() != b.entries_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.entries_.size(); ++i) {
    if (!(a.entries_[i].leader == b.entries_[i].leader) ||
        a.entries_[i].followers != b.entries_[i].followers) {
      return false;
    }
  }
  return true;
}

namespace {

template <typename Map>
std::vector<std::pair<NGram, std::uint64_t>> top_k(const Map& counts, std::size_t k) {
  std::vector<std::pair<NGram, std::uint64_t>> ranked(counts.begin(), counts.end());
  auto by_rank = [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  };
  if (ranked.size() > k) {
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(k), ranked.end(),
                      by_rank);
    ranked.resize(k);
  } else {
    std::sort(ranked.begin(), ranked.end(), by_rank);
  }
  return ranked;
}

}  // namespace

FrozenTable build_frozen(const NGramCounts& counts, const CacheTableConfig& config) {
  config.validate();
  std::vector<FrozenTable::Entry> entries;
  for (const auto& [leader, n] : top_k(counts.leaders, config.lc)) {
    FrozenTable::Entry entry{leader, {}};
    if (auto it = counts.pairs.find(leader); it != counts.pairs.end()) {
      for (const auto& [follower, m] : top_k(it->second, config.fc)) {
        entry.followers.push_back(follower);
      }
    }
    entries.push_back(std::move(entry));
  }
  return FrozenTable(config, std::move(entries));
}

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_gram(std::vector<std::uint8_t>& out, const NGram& g) {
  for (TokenId t : g) put_u32(out, t);
}

std::uint32_t narrow_u32(std::size_t v, const char* what) {
  if (v > 0xffffffffULL) throw UsageError(std::string("CBFT: ") + what + " exceeds u32");
  return static_cast<std::uint32_t>(v);
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint64_t offset() const { return pos_; }

  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{bytes_[pos_ + i]} << (8 * i);
    pos_ += 4;
    return v;
  }

  std::uint64_t u64(const char* what) {
    need(8, what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{bytes_[pos_ + i]} << (8 * i);
    pos_ += 8;
    return v;
  }

  NGram gram(std::size_t len, const char* what) {
    std::array<TokenId, kMaxGramLength> buf{};
    for (std::size_t i = 0; i < len; ++i) buf[i] = u32(what);
    return NGram(std::span<const TokenId>(buf.data(), len));
  }

  void need(std::size_t n, const char* what) {
    if (bytes_.size() - pos_ < n) {
      throw FormatError(std::string("CBFT: truncated ") + what, pos_);
    }
  }

  bool at_end() const { return pos_ == bytes_.size(); }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> serialize_frozen(const FrozenTable& table) {
  const CacheTableConfig& cfg = table.config();
  std::vector<std::uint8_t> out;
  out.insert(out.end(), {'C', 'B', 'F', 'T'});
  put_u32(out, kFrozenFormatVersion);
  put_u32(out, narrow_u32(cfg.ll, "LL"));
  put_u32(out, narrow_u32(cfg.fl, "FL"));
  put_u64(out, table.leader_count());
  put_u32(out, narrow_u32(cfg.fc, "FC"));
  for (const auto& e : table.entries()) {
    put_gram(out, e.leader);
    put_u32(out, narrow_u32(e.followers.size(), "follower count"));
    for (const NGram& f : e.followers) put_gram(out, f);
  }
  return out;
}

void save_frozen(const FrozenTable& table, std::ostream& out) {
  const auto bytes = serialize_frozen(table);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("CBFT: write failed");
}

FrozenTable deserialize_frozen(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  r.need(4, "magic");
  if (!std::equal(bytes.begin(), bytes.begin() + 4, "CBFT")) throw FormatError("CBFT: bad magic", 0);
  r.u32("magic");
  const std::uint64_t version_at = r.offset();
  if (r.u32("version") != kFrozenFormatVersion) {
    throw FormatError("CBFT: unsupported version", version_at);
  }
  CacheTableConfig cfg;
  const std::uint64_t shape_at = r.offset();
  cfg.ll = r.u32("LL");
  cfg.fl = r.u32("FL");
  const std::uint64_t leaders = r.u64("leader count");
  cfg.fc = r.u32("FC");
  cfg.lc = leaders == 0 ? 1 : static_cast<std::size_t>(leaders);
  try {
    cfg.validate();
  } catch (const UsageError& e) {
    throw FormatError(std::string("CBFT: ") + e.what(), shape_at);
  }

  // Each leader needs at least LL tokens plus its follower count.
  const std::uint64_t min_leader_bytes = 4 * (cfg.ll + 1);
  if (leaders > (bytes.size() - r.offset()) / min_leader_bytes) {
    throw FormatError("CBFT: truncated leader records", r.offset());
  }

  std::vector<FrozenTable::Entry> entries;
  entries.reserve(static_cast<std::size_t>(leaders));
  for (std::uint64_t i = 0; i < leaders; ++i) {
    FrozenTable::Entry e;
    e.leader = r.gram(cfg.ll, "leader");
    const std::uint64_t count_at = r.offset();
    const std::uint32_t n = r.u32("follower count");
    if (n > cfg.fc) throw FormatError("CBFT: follower count exceeds FC", count_at);
    r.need(std::size_t{n} * cfg.fl * 4, "followers");
    e.followers.reserve(n);
    for (std::uint32_t j = 0; j < n; ++j) e.followers.push_back(r.gram(cfg.fl, "follower"));
    entries.push_back(std::move(e));
  }
  if (!r.at_end()) throw FormatError("CBFT: trailing bytes", r.offset());
  try {
    return FrozenTable(cfg, std::move(entries));
  } catch (const UsageError& e) {
    throw FormatError(std::string("CBFT: ") + e.what(), r.offset());
  }
}

FrozenTable load_frozen(std::istream& in) {
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_frozen(bytes);
}

void save_frozen_file(const FrozenTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  save_frozen(table, out);
}

FrozenTable load_frozen_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load_frozen(in);
}

}  // namespace cacheback
