#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sherd/match.hpp"
#include "sherd/profile.hpp"

namespace sherd {

enum class Side { Left, Right, Undecided };
enum class DecidedBy { Human, AutoSingleton };

std::string to_string(Side side);
std::string to_string(DecidedBy by);
Side side_from_string(const std::string& s); // "LEFT" / "RIGHT"; ValidationError otherwise

struct Placement {
  std::string sherd_id;
  long offset = 0; // samples from meta sample 0
  Side side = Side::Undecided;
  double score = 0.0;
  DecidedBy decided_by = DecidedBy::Human;
  bool override_used = false;

  bool operator==(const Placement&) const = default;
};

// The growing union of placed sherds. `totals` / `contributors` hold the
// per-sample sum and count so merged values are exact arithmetic means.
struct MetaSherd {
  ThicknessProfile profile;
  std::vector<Placement> members;
  std::vector<int> contributors;
  std::vector<double> totals;

  bool operator==(const MetaSherd&) const = default;
};

struct Candidate {
  std::string sherd_id;
  std::optional<MatchResult> match; // nullopt: too short for min_overlap
  bool acceptable = false;          // false: REJECTED

  bool operator==(const Candidate&) const = default;
};

// One human decision; the state is a pure function of the initial profiles,
// the config and the sequence of decisions.
struct Decision {
  std::string sherd_id;
  Side side = Side::Right;
  bool override_flag = false;

  bool operator==(const Decision&) const = default;
};

struct AssemblyState {
  std::vector<ThicknessProfile> inputs; // as passed to init_assembly
  MatchConfig config;
  MetaSherd meta;
  std::vector<ThicknessProfile> pool;    // not yet placed, sorted by id
  std::vector<Candidate> candidates;     // propose_next(*this)
  std::vector<Decision> log;
  std::vector<std::string> order;        // circumferential left-to-right order

  bool complete() const { return pool.empty(); }
  bool operator==(const AssemblyState&) const = default;
};

// Master = most samples (ties: smallest id). Throws EmptyInput, StepMismatch,
// ValidationError (duplicate ids, invalid profiles or config).
AssemblyState init_assembly(std::vector<ThicknessProfile> profiles, const MatchConfig& cfg = {});

// Rank-1 match of every pooled sherd against the meta profile, ordered by
// ascending score, then larger overlap, then sherd id; sherds too short to
// match come last. Candidates failing is_acceptable are kept but flagged.
std::vector<Candidate> propose_next(const AssemblyState& state);

// Merges `sherd_id` at its rank-1 offset. Without `override_flag` the sherd
// must be the first candidate and acceptable. Throws UnknownSherd,
// NotACandidate, ValidationError (side UNDECIDED).
AssemblyState commit(const AssemblyState& state, const std::string& sherd_id, Side side,
                     bool override_flag = false);

// Throws NothingToUndo on an empty log.
AssemblyState undo(const AssemblyState& state);

AssemblyState replay(std::vector<ThicknessProfile> profiles, const MatchConfig& cfg,
                     const std::vector<Decision>& log);

// Layout document: per sherd {sherd_id, offset_mm, order, score, side,
// decided_by, override}, plus the merged meta profile for plotting.
nlohmann::json layout_json(const AssemblyState& state);
void export_layout(const AssemblyState& state, const std::filesystem::path& path);

// Append-only session log, one JSON event per line:
//   {"event":"commit","override":false,"seq":1,"sherd_id":"A5","side":"LEFT"}
//   {"event":"undo","seq":2}
class SessionLog {
public:
  // Continues the sequence numbering of an existing file.
  explicit SessionLog(std::filesystem::path path);

  void record_commit(const Decision& d);
  void record_undo();
  const std::filesystem::path& path() const { return path_; }

  // Effective decision list after applying every commit and undo in order.
  static std::vector<Decision> read_decisions(const std::filesystem::path& path);

private:
  void append(nlohmann::json event);
  std::filesystem::path path_;
  long seq_ = 0;
};

} // namespace sherd
