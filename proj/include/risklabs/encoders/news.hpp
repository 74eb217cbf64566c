#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "risklabs/core/errors.hpp"
#include "risklabs/core/types.hpp"
#include "risklabs/core/validate.hpp"

namespace risklabs {

/// exp(-gamma * age in days).
inline double news_freshness(Date t_news, Date t_now, double gamma) {
  if (t_news > t_now) {
    throw LookAheadError("news dated " + t_news.iso() + " is newer than query time " + t_now.iso());
  }
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InputError("freshness decay must be finite and >= 0");
  return std::exp(-gamma * days_between(t_news, t_now));
}

/// Cosine similarity.
inline double news_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InputError("news_similarity: dims " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw InputError("news_similarity: zero-norm embedding");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

struct MemoryEntry {
  std::vector<double> embedding;
  Date timestamp;
  NewsOutcome outcome;

  friend bool operator==(const MemoryEntry&, const MemoryEntry&) = default;
};

/// Past headlines with known market responses.
class NewsMemory {
 public:
  NewsMemory() = default;

  /// Keeps the items of `items` that carry an outcome.
  explicit NewsMemory(std::span<const NewsItem> items) {
    for (const auto& n : items) {
      if (n.outcome) add(n);
    }
  }

  void add(const NewsItem& item) {
    if (!item.outcome) throw InputError("news memory entries need an outcome");
    entries_.push_back({item.embedding, item.timestamp, *item.outcome});
  }

  const std::vector<MemoryEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<MemoryEntry> entries_;
};

struct ReactionConfig {
  std::size_t k = 5;
  double gamma_fresh = std::numbers::ln2 / 7.0;  // one-week half-life
  double min_similarity = 0.2;
};

inline Violations validate(const ReactionConfig& c) {
  Violations out;
  if (c.k < 1) out.push_back({"k", "k >= 1"});
  if (!(c.gamma_fresh >= 0.0) || !std::isfinite(c.gamma_fresh)) out.push_back({"gamma_fresh", ">= 0"});
  if (!(c.min_similarity >= -1.0 && c.min_similarity <= 1.0)) out.push_back({"min_similarity", "in [-1, 1]"});
  return out;
}

struct NewsReaction {
  double expected_next_return = 0.0;
  double expected_vol_change = 0.0;
  std::size_t support_count = 0;

  friend bool operator==(const NewsReaction&, const NewsReaction&) = default;
};

/// Similarity- and freshness-weighted average outcome of the k most similar
/// memory entries strictly older than the query. Entries dated on or after
/// the query are never read. Candidates are ranked by a total order that does
/// not depend on memory order, and accumulated in rank order.
inline NewsReaction news_reaction(const NewsItem& query, const NewsMemory& memory, const ReactionConfig& cfg) {
  require_valid(cfg, "reaction config");
  struct Candidate {
    double sim;
    const MemoryEntry* entry;
  };
  std::vector<Candidate> cands;
  for (const auto& e : memory.entries()) {
    if (e.timestamp >= query.timestamp) continue;
    const double sim = news_similarity(query.embedding, e.embedding);
    if (sim >= cfg.min_similarity) cands.push_back({sim, &e});
  }
  auto before = [](const Candidate& a, const Candidate& b) {
    if (a.sim != b.sim) return a.sim > b.sim;
    if (a.entry->timestamp != b.entry->timestamp) return a.entry->timestamp > b.entry->timestamp;
    if (a.entry->embedding != b.entry->embedding) return a.entry->embedding < b.entry->embedding;
    const auto& oa = a.entry->outcome;
    const auto& ob = b.entry->outcome;
    if (oa.next_day_return != ob.next_day_return) return oa.next_day_return < ob.next_day_return;
    return oa.vol_change < ob.vol_change;
  };
  const std::size_t take = std::min(cfg.k, cands.size());
  std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(take), cands.end(), before);

  NewsReaction out;
  double wsum = 0.0, ret = 0.0, vol = 0.0;
  for (std::size_t i = 0; i < take; ++i) {
    const auto& e = *cands[i].entry;
    const double w = cands[i].sim * news_freshness(e.timestamp, query.timestamp, cfg.gamma_fresh);
    wsum += w;
    ret += w * e.outcome.next_day_return;
    vol += w * e.outcome.vol_change;
  }
  out.support_count = take;
  if (take == 0 || wsum == 0.0) return out;
  out.expected_next_return = ret / wsum;
  out.expected_vol_change = vol / wsum;
  return out;
}

}  // namespace risklabs
