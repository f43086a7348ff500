#pragma once

#include <vector>

#include "sherd/profile.hpp"

namespace sherd {

// One alignment of profile B against profile A. `offset` is the index in A
// where B's sample 0 lands (B reversed first when `reversed`).
struct MatchResult {
  long offset = 0;
  long overlap = 0;
  double sad = 0.0;   // mm
  double score = 0.0; // mm, sad / overlap
  bool reversed = false;

  bool operator==(const MatchResult&) const = default;
};

struct MatchConfig {
  long min_overlap = 8;
  double accept_threshold = 0.15; // mm, inclusive
  bool allow_reversal = false;
  long top_k = 5;

  bool operator==(const MatchConfig&) const = default;
};

// Throws ValidationError when a field is out of range.
void validate(const MatchConfig& cfg);

// Overlap length of [0, len_a) and [offset, offset + len_b).
long overlap_length(long len_a, long len_b, long offset);

// Sum of |a[i] - b[i - offset]| over the overlap, accumulated in ascending i.
// Throws StepMismatch or NoOverlap.
MatchResult sad_at_offset(const ThicknessProfile& a, const ThicknessProfile& b, long offset);

// Total order used for ranking: lower score, then larger overlap, then
// smaller |offset|, then non-reversed, then smaller offset.
bool ranks_before(const MatchResult& x, const MatchResult& y);

// Every offset with overlap >= min_overlap (and reversed B when allowed),
// ranked by `ranks_before`, truncated to top_k. Throws StepMismatch or
// NoFeasibleOffset.
std::vector<MatchResult> best_matches(const ThicknessProfile& a, const ThicknessProfile& b,
                                      const MatchConfig& cfg = {});

bool is_acceptable(const MatchResult& m, const MatchConfig& cfg = {});

} // namespace sherd
