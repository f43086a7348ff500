#include "sherd/match.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <span>

#include "sherd/errors.hpp"

namespace sherd {

void validate(const MatchConfig& cfg) {
  if (cfg.min_overlap < 1) throw ValidationError("min_overlap must be at least 1");
  if (!(cfg.accept_threshold > 0.0)) throw ValidationError("accept_threshold must be positive");
  if (cfg.top_k < 1) throw ValidationError("top_k must be at least 1");
}

long overlap_length(long len_a, long len_b, long offset) {
  const long lo = std::max(0L, offset);
  const long hi = std::min(len_a, offset + len_b);
  return std::max(0L, hi - lo);
}

namespace {

void check_steps(const ThicknessProfile& a, const ThicknessProfile& b) {
  if (std::abs(a.step - b.step) > 1e-9)
    throw StepMismatch("profiles '" + a.sherd_id + "' and '" + b.sherd_id +
                       "' use different sampling steps");
}

MatchResult evaluate(std::span<const double> a, std::span<const double> b, long offset, bool rev) {
  const long lo = std::max(0L, offset);
  const long hi = std::min(static_cast<long>(a.size()), offset + static_cast<long>(b.size()));
  double sad = 0.0;
  for (long i = lo; i < hi; ++i) sad += std::abs(a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i - offset)]);
  const long overlap = hi - lo;
  return {offset, overlap, sad, sad / static_cast<double>(overlap), rev};
}

} // namespace

MatchResult sad_at_offset(const ThicknessProfile& a, const ThicknessProfile& b, long offset) {
  check_steps(a, b);
  const auto la = static_cast<long>(a.size()), lb = static_cast<long>(b.size());
  if (overlap_length(la, lb, offset) < 1)
    throw NoOverlap("offset " + std::to_string(offset) + " leaves no overlap between '" +
                    a.sherd_id + "' and '" + b.sherd_id + "'");
  return evaluate(a.samples, b.samples, offset, false);
}

bool ranks_before(const MatchResult& x, const MatchResult& y) {
  if (x.score != y.score) return x.score < y.score;
  if (x.overlap != y.overlap) return x.overlap > y.overlap;
  if (std::labs(x.offset) != std::labs(y.offset)) return std::labs(x.offset) < std::labs(y.offset);
  if (x.reversed != y.reversed) return !x.reversed;
  return x.offset < y.offset;
}

std::vector<MatchResult> best_matches(const ThicknessProfile& a, const ThicknessProfile& b,
                                      const MatchConfig& cfg) {
  validate(cfg);
  check_steps(a, b);
  const auto la = static_cast<long>(a.size()), lb = static_cast<long>(b.size());
  if (la < cfg.min_overlap || lb < cfg.min_overlap)
    throw NoFeasibleOffset("profiles '" + a.sherd_id + "' (" + std::to_string(la) + ") and '" +
                           b.sherd_id + "' (" + std::to_string(lb) +
                           ") are shorter than min_overlap " + std::to_string(cfg.min_overlap));

  // Offsets with overlap >= m run from m - lb to la - m.
  const long first = cfg.min_overlap - lb, last = la - cfg.min_overlap;
  std::vector<MatchResult> all;
  all.reserve(static_cast<std::size_t>((last - first + 1) * (cfg.allow_reversal ? 2 : 1)));
  for (long k = first; k <= last; ++k) all.push_back(evaluate(a.samples, b.samples, k, false));
  if (cfg.allow_reversal) {
    std::vector<double> rb(b.samples.rbegin(), b.samples.rend());
    for (long k = first; k <= last; ++k) all.push_back(evaluate(a.samples, rb, k, true));
  }
  const auto keep = std::min<std::size_t>(all.size(), static_cast<std::size_t>(cfg.top_k));
  std::partial_sort(all.begin(), all.begin() + static_cast<long>(keep), all.end(), ranks_before);
  all.resize(keep);
  return all;
}

bool is_acceptable(const MatchResult& m, const MatchConfig& cfg) {
  return m.score <= cfg.accept_threshold && m.overlap >= cfg.min_overlap;
}

} // namespace sherd
