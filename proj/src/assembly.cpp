#include "sherd/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "sherd/errors.hpp"
#include "sherd/json_format.hpp"

namespace sherd {

std::string to_string(Side side) {
  switch (side) {
  case Side::Left: return "LEFT";
  case Side::Right: return "RIGHT";
  case Side::Undecided: return "UNDECIDED";
  }
  return "UNDECIDED";
}

std::string to_string(DecidedBy by) {
  return by == DecidedBy::Human ? "HUMAN" : "AUTO_SINGLETON";
}

Side side_from_string(const std::string& s) {
  if (s == "LEFT") return Side::Left;
  if (s == "RIGHT") return Side::Right;
  throw ValidationError("side must be \"LEFT\" or \"RIGHT\", got \"" + s + "\"");
}

namespace {

void refresh_profile(MetaSherd& meta) {
  meta.profile.samples.resize(meta.totals.size());
  for (std::size_t i = 0; i < meta.totals.size(); ++i)
    meta.profile.samples[i] = meta.totals[i] / meta.contributors[i];
}

const ThicknessProfile* find_in(const std::vector<ThicknessProfile>& v, const std::string& id) {
  auto it = std::find_if(v.begin(), v.end(), [&](const auto& p) { return p.sherd_id == id; });
  return it == v.end() ? nullptr : &*it;
}

} // namespace

AssemblyState init_assembly(std::vector<ThicknessProfile> profiles, const MatchConfig& cfg) {
  validate(cfg);
  if (profiles.empty()) throw EmptyInput("no profiles to assemble");
  std::set<std::string> ids;
  for (const auto& p : profiles) {
    validate(p);
    if (!ids.insert(p.sherd_id).second) throw ValidationError("duplicate sherd id '" + p.sherd_id + "'");
    if (std::abs(p.step - profiles.front().step) > 1e-9)
      throw StepMismatch("profile '" + p.sherd_id + "' uses a different sampling step");
  }

  AssemblyState state;
  state.inputs = profiles;
  state.config = cfg;

  std::sort(profiles.begin(), profiles.end(),
            [](const auto& a, const auto& b) { return a.sherd_id < b.sherd_id; });
  auto master = std::max_element(profiles.begin(), profiles.end(), [](const auto& a, const auto& b) {
    return a.size() < b.size(); // first maximum = smallest id
  });
  MetaSherd& meta = state.meta;
  meta.profile = *master;
  meta.profile.sherd_id = "meta";
  meta.totals = master->samples;
  meta.contributors.assign(master->size(), 1);
  meta.members.push_back({master->sherd_id, 0, Side::Undecided, 0.0, DecidedBy::AutoSingleton, false});
  state.order.push_back(master->sherd_id);
  profiles.erase(master);
  state.pool = std::move(profiles);
  state.candidates = propose_next(state);
  return state;
}

std::vector<Candidate> propose_next(const AssemblyState& state) {
  std::vector<Candidate> out;
  out.reserve(state.pool.size());
  for (const auto& p : state.pool) {
    Candidate c{p.sherd_id, std::nullopt, false};
    if (static_cast<long>(p.size()) >= state.config.min_overlap &&
        static_cast<long>(state.meta.profile.size()) >= state.config.min_overlap) {
      auto ranked = best_matches(state.meta.profile, p, state.config);
      c.match = ranked.front();
      c.acceptable = is_acceptable(*c.match, state.config);
    }
    out.push_back(std::move(c));
  }
  std::stable_sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    if (a.match.has_value() != b.match.has_value()) return a.match.has_value();
    if (!a.match) return a.sherd_id < b.sherd_id;
    if (a.match->score != b.match->score) return a.match->score < b.match->score;
    if (a.match->overlap != b.match->overlap) return a.match->overlap > b.match->overlap;
    return a.sherd_id < b.sherd_id;
  });
  return out;
}

AssemblyState commit(const AssemblyState& state, const std::string& sherd_id, Side side,
                     bool override_flag) {
  if (side == Side::Undecided) throw ValidationError("a placement needs a LEFT or RIGHT side");
  if (!find_in(state.inputs, sherd_id)) throw UnknownSherd("no sherd with id '" + sherd_id + "'");
  auto cand = std::find_if(state.candidates.begin(), state.candidates.end(),
                           [&](const Candidate& c) { return c.sherd_id == sherd_id; });
  if (cand == state.candidates.end())
    throw NotACandidate("sherd '" + sherd_id + "' is already placed");
  if (!cand->match)
    throw NotACandidate("sherd '" + sherd_id + "' is shorter than the minimum overlap");
  if (!override_flag && (cand != state.candidates.begin() || !cand->acceptable))
    throw NotACandidate("sherd '" + sherd_id + "' is not the top acceptable candidate");

  AssemblyState next = state;
  const ThicknessProfile& piece = *find_in(state.pool, sherd_id);
  const MatchResult m = *cand->match;
  const ThicknessProfile oriented = m.reversed ? reversed(piece) : piece;

  MetaSherd& meta = next.meta;
  const long lm = static_cast<long>(meta.totals.size());
  const long lb = static_cast<long>(oriented.size());
  const long lo = std::min(0L, m.offset);
  const long hi = std::max(lm, m.offset + lb);
  const long shift = -lo;

  std::vector<double> totals(static_cast<std::size_t>(hi - lo), 0.0);
  std::vector<int> counts(totals.size(), 0);
  for (long i = 0; i < lm; ++i) {
    totals[static_cast<std::size_t>(i + shift)] = meta.totals[static_cast<std::size_t>(i)];
    counts[static_cast<std::size_t>(i + shift)] = meta.contributors[static_cast<std::size_t>(i)];
  }
  for (long j = 0; j < lb; ++j) {
    const auto idx = static_cast<std::size_t>(m.offset + shift + j);
    totals[idx] += oriented.samples[static_cast<std::size_t>(j)];
    counts[idx] += 1;
  }
  meta.totals = std::move(totals);
  meta.contributors = std::move(counts);
  for (auto& member : meta.members) member.offset += shift;
  if (meta.profile.origin_height) *meta.profile.origin_height -= static_cast<double>(shift) * meta.profile.step;
  meta.members.push_back({sherd_id, m.offset + shift, side, m.score, DecidedBy::Human, override_flag});
  refresh_profile(meta);

  if (side == Side::Left) next.order.insert(next.order.begin(), sherd_id);
  else next.order.push_back(sherd_id);

  std::erase_if(next.pool, [&](const auto& p) { return p.sherd_id == sherd_id; });
  next.log.push_back({sherd_id, side, override_flag});
  next.candidates = propose_next(next);
  return next;
}

AssemblyState replay(std::vector<ThicknessProfile> profiles, const MatchConfig& cfg,
                     const std::vector<Decision>& log) {
  AssemblyState state = init_assembly(std::move(profiles), cfg);
  for (const auto& d : log) state = commit(state, d.sherd_id, d.side, d.override_flag);
  return state;
}

AssemblyState undo(const AssemblyState& state) {
  if (state.log.empty()) throw NothingToUndo("no decision to undo");
  std::vector<Decision> log(state.log.begin(), state.log.end() - 1);
  return replay(state.inputs, state.config, log);
}

nlohmann::json layout_json(const AssemblyState& state) {
  nlohmann::json sherds = nlohmann::json::array();
  const double step = state.meta.profile.step;
  for (const auto& m : state.meta.members) {
    const auto pos = std::find(state.order.begin(), state.order.end(), m.sherd_id) - state.order.begin();
    sherds.push_back({{"sherd_id", m.sherd_id},
                      {"offset_mm", static_cast<double>(m.offset) * step},
                      {"offset_samples", m.offset},
                      {"order", pos},
                      {"score", m.score},
                      {"side", to_string(m.side)},
                      {"decided_by", to_string(m.decided_by)},
                      {"override", m.override_used}});
  }
  nlohmann::json pending = nlohmann::json::array();
  for (const auto& p : state.pool) pending.push_back(p.sherd_id);
  return {{"sherds", sherds},
          {"meta_profile",
           {{"step_mm", step},
            {"samples_mm", state.meta.profile.samples},
            {"contributors", state.meta.contributors}}},
          {"pending", pending},
          {"complete", state.complete()},
          {"config",
           {{"min_overlap", state.config.min_overlap},
            {"accept_threshold_mm", state.config.accept_threshold},
            {"allow_reversal", state.config.allow_reversal},
            {"top_k", state.config.top_k}}}};
}

void export_layout(const AssemblyState& state, const std::filesystem::path& path) {
  write_text_file(path, dump_fixed(layout_json(state)));
}

SessionLog::SessionLog(std::filesystem::path path) : path_(std::move(path)) {
  std::ifstream in(path_);
  std::string line;
  while (std::getline(in, line))
    if (line.find_first_not_of(" \t\r") != std::string::npos) ++seq_;
}

void SessionLog::append(nlohmann::json event) {
  event["seq"] = ++seq_;
  std::ofstream out(path_, std::ios::app);
  if (!out) throw IoError("cannot append to session log '" + path_.string() + "'");
  out << event.dump() << '\n';
  if (!out) throw IoError("write to session log '" + path_.string() + "' failed");
}

void SessionLog::record_commit(const Decision& d) {
  append({{"event", "commit"}, {"sherd_id", d.sherd_id}, {"side", to_string(d.side)},
          {"override", d.override_flag}});
}

void SessionLog::record_undo() { append({{"event", "undo"}}); }

std::vector<Decision> SessionLog::read_decisions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open session log '" + path.string() + "'");
  std::vector<Decision> log;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json ev;
    try {
      ev = nlohmann::json::parse(line);
      const auto kind = ev.at("event").get<std::string>();
      if (kind == "commit") {
        log.push_back({ev.at("sherd_id").get<std::string>(),
                       side_from_string(ev.at("side").get<std::string>()),
                       ev.value("override", false)});
      } else if (kind == "undo") {
        if (log.empty()) throw ParseError("undo with nothing to undo", line_no);
        log.pop_back();
      } else {
        throw ParseError("unknown event '" + kind + "'", line_no);
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("malformed session event: ") + e.what(), line_no);
    }
  }
  return log;
}

} // namespace sherd
