// sherd: command-line front end for the thickness-profile reassembly toolkit.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sherd/assembly.hpp"
#include "sherd/axis.hpp"
#include "sherd/errors.hpp"
#include "sherd/extract.hpp"
#include "sherd/fixtures.hpp"
#include "sherd/fragment.hpp"
#include "sherd/json_format.hpp"
#include "sherd/match.hpp"
#include "sherd/mesh_io.hpp"
#include "sherd/service.hpp"
#include "sherd/vessel.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sherd;

namespace {

struct Globals {
  double step = 1.0;
  long min_overlap = 8;
  double threshold = 0.15;
  std::uint64_t seed = 0;
  bool json = false;
};

MatchConfig match_config(const Globals& g) {
  MatchConfig cfg;
  cfg.min_overlap = g.min_overlap;
  cfg.accept_threshold = g.threshold;
  return cfg;
}

void emit(const Globals& g, const json& j, const std::string& human) {
  if (g.json) std::cout << dump_fixed(j);
  else std::cout << human;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// A curve is a number (constant) or a list of [h, value] pairs.
PiecewiseLinear parse_curve(const json& j, double height, const std::string& name) {
  if (j.is_number()) return PiecewiseLinear::constant(j.get<double>(), 0.0, height);
  if (!j.is_array()) throw SpecError(name + " must be a number or a list of [h, value] pairs");
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2) throw SpecError(name + " points must be [h, value] pairs");
    pts.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  return PiecewiseLinear(std::move(pts));
}

VesselSpec parse_vessel_spec(const json& j) {
  try {
    VesselSpec s;
    s.height = j.value("height_mm", s.height);
    s.outer_radius = parse_curve(j.at("outer_radius_mm"), s.height, "outer_radius_mm");
    s.thickness = parse_curve(j.at("thickness_mm"), s.height, "thickness_mm");
    s.angular_resolution = j.value("angular_resolution", s.angular_resolution);
    s.vertical_resolution = j.value("vertical_resolution", s.vertical_resolution);
    return s;
  } catch (const json::exception& e) {
    throw SpecError(std::string("bad vessel spec: ") + e.what());
  }
}

FragmentSpec parse_cuts(const json& j, double height, std::uint64_t seed) {
  try {
    FragmentSpec spec;
    if (j.contains("random")) {
      spec = random_tiling(height, j.at("random").get<int>(), seed);
    } else if (j.value("zones", false)) {
      spec = zone_tiling(height);
    } else {
      for (const auto& p : j.at("pieces"))
        spec.pieces.push_back({p.at("theta0").get<double>(), p.at("theta1").get<double>(),
                               p.at("h0").get<double>(), p.at("h1").get<double>()});
    }
    spec.repose = j.value("repose", true);
    return spec;
  } catch (const json::exception& e) {
    throw SpecError(std::string("bad cuts file: ") + e.what());
  }
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json truth_json(const GroundTruth& t) {
  json rot = json::array();
  for (int r = 0; r < 3; ++r) rot.push_back(json::array({t.pose.rotation(r, 0), t.pose.rotation(r, 1), t.pose.rotation(r, 2)}));
  return {{"label", t.label},
          {"h0_mm", t.h0},
          {"h1_mm", t.h1},
          {"theta0_deg", t.theta0},
          {"theta1_deg", t.theta1},
          {"rotation", rot},
          {"translation_mm", vec_json(t.pose.translation)},
          {"axis_point_mm", vec_json(t.axis_point())},
          {"axis_direction", vec_json(t.axis_direction())}};
}

json match_json(const MatchResult& m, const MatchConfig& cfg) {
  return {{"offset", m.offset}, {"overlap", m.overlap}, {"sad", m.sad}, {"score", m.score},
          {"reversed", m.reversed}, {"acceptable", is_acceptable(m, cfg)}};
}

std::vector<ThicknessProfile> load_profiles(const fs::path& dir, double step) {
  auto profiles = load_profile_dir(dir, step);
  if (profiles.empty()) throw EmptyInput("no *.tp.json or *.csv profiles in '" + dir.string() + "'");
  return profiles;
}

void print_candidates(const AssemblyState& st) {
  std::cout << "meta: " << st.meta.profile.size() << " samples, placed:";
  for (const auto& id : st.order) std::cout << ' ' << id;
  std::cout << '\n';
  int rank = 1;
  for (const auto& c : st.candidates) {
    std::cout << "  " << rank++ << ". " << c.sherd_id;
    if (!c.match) {
      std::cout << "  (too short to match)\n";
      continue;
    }
    std::cout << "  offset " << c.match->offset << "  overlap " << c.match->overlap << "  score "
              << fmt("%.4f", c.match->score) << (c.match->reversed ? "  reversed" : "")
              << (c.acceptable ? "" : "  REJECTED") << '\n';
  }
}

// Terminal loop: l / r commit the top candidate, "o ID l|r" overrides,
// u undoes, q stops.
AssemblyState interactive(AssemblyState st, std::optional<SessionLog>& log) {
  std::string line;
  while (!st.complete()) {
    print_candidates(st);
    std::cout << "[l]eft, [r]ight, o <id> <l|r>, [u]ndo, [q]uit > " << std::flush;
    if (!std::getline(std::cin, line)) break;
    std::istringstream in(line);
    std::string cmd;
    in >> cmd;
    try {
      if (cmd == "q") break;
      if (cmd == "u") {
        st = undo(st);
        if (log) log->record_undo();
      } else if (cmd == "l" || cmd == "r") {
        if (st.candidates.empty()) continue;
        st = commit(st, st.candidates.front().sherd_id, cmd == "l" ? Side::Left : Side::Right);
        if (log) log->record_commit(st.log.back());
      } else if (cmd == "o") {
        std::string id, side;
        in >> id >> side;
        if (side != "l" && side != "r") {
          std::cout << "usage: o <sherd_id> <l|r>\n";
          continue;
        }
        st = commit(st, id, side == "l" ? Side::Left : Side::Right, true);
        if (log) log->record_commit(st.log.back());
      } else if (!cmd.empty()) {
        std::cout << "unknown command '" << cmd << "'\n";
      }
    } catch (const Error& e) {
      std::cout << e.kind() << ": " << e.what() << '\n';
    }
  }
  return st;
}

AssemblyState batch(AssemblyState st, Side side, std::optional<SessionLog>& log) {
  while (!st.candidates.empty() && st.candidates.front().acceptable) {
    st = commit(st, st.candidates.front().sherd_id, side);
    if (log) log->record_commit(st.log.back());
  }
  return st;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thickness-profile reassembly of wheel-thrown pottery sherds", "sherd"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--step", g.step, "Profile sampling step in mm")->capture_default_str();
  app.add_option("--min-overlap", g.min_overlap, "Minimum overlap in samples")->capture_default_str();
  app.add_option("--threshold", g.threshold, "Acceptance threshold on score, mm")->capture_default_str();
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_flag("--json", g.json, "Machine-readable output");

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic wheel-thrown vessel mesh");
  std::string synth_spec, synth_out;
  bool synth_ascii = false;
  synth->add_option("--spec", synth_spec, "Vessel spec JSON")->required();
  synth->add_option("--out", synth_out, "Output mesh (.ply or .obj)")->required();
  synth->add_flag("--ascii", synth_ascii, "Write ASCII PLY");

  // fragment
  auto* frag = app.add_subcommand("fragment", "Break a synthetic vessel into re-posed sherds");
  std::string frag_mesh, frag_cuts, frag_out;
  frag->add_option("--mesh", frag_mesh, "Vessel mesh from synth")->required();
  frag->add_option("--cuts", frag_cuts, "Cut layout JSON")->required();
  frag->add_option("--out-dir", frag_out, "Output directory")->required();

  // extract
  auto* extract = app.add_subcommand("extract", "Extract a thickness profile from a sherd mesh");
  std::string ex_mesh, ex_out, ex_id, ex_gt;
  std::vector<double> ex_up;
  int ex_planes = 360;
  extract->add_option("--mesh", ex_mesh, "Sherd mesh")->required();
  extract->add_option("--out", ex_out, "Output profile (.tp.json or .csv)")->required();
  extract->add_option("--id", ex_id, "Sherd id (default: mesh file stem)");
  extract->add_option("--up", ex_up, "Base-to-rim direction hint x y z")->expected(3);
  extract->add_option("--gt", ex_gt, "Ground-truth JSON from fragment; supplies the up hint");
  extract->add_option("--planes", ex_planes, "Candidate meridian planes")->capture_default_str();

  // match
  auto* match = app.add_subcommand("match", "Rank alignments of profile B against profile A");
  std::string m_a, m_b;
  long m_top_k = 5;
  bool m_rev = false;
  match->add_option("--a", m_a, "Profile A")->required();
  match->add_option("--b", m_b, "Profile B")->required();
  match->add_option("--top-k", m_top_k, "Results to keep")->capture_default_str();
  match->add_flag("--allow-reversal", m_rev, "Also try B reversed");

  // assemble
  auto* assemble = app.add_subcommand("assemble", "Greedy assembly of a directory of profiles");
  std::string as_dir, as_out, as_log, as_replay, as_side = "RIGHT";
  bool as_interactive = false;
  assemble->add_option("--profiles", as_dir, "Profile directory")->required();
  assemble->add_flag("--interactive", as_interactive, "Prompt for every decision");
  assemble->add_option("--out", as_out, "Layout JSON to write");
  assemble->add_option("--log", as_log, "Append decisions to this session log");
  assemble->add_option("--replay", as_replay, "Replay decisions from a session log");
  assemble->add_option("--auto-side", as_side, "Side for unattended commits")
      ->check(CLI::IsMember({"LEFT", "RIGHT"}))
      ->capture_default_str();

  // serve
  auto* serve = app.add_subcommand("serve", "Serve an interactive assembly session over HTTP");
  std::string sv_dir, sv_host = "127.0.0.1", sv_ui, sv_log;
  int sv_port = 7131;
  bool sv_resume = false;
  serve->add_option("--profiles", sv_dir, "Profile directory")->required();
  serve->add_option("--port", sv_port, "TCP port")->capture_default_str();
  serve->add_option("--host", sv_host, "Bind address")->capture_default_str();
  serve->add_option("--ui-dir", sv_ui, "Static UI files served at /");
  serve->add_option("--log", sv_log, "Session log file (JSON lines)");
  serve->add_flag("--resume", sv_resume, "Replay --log before serving");

  // fixtures
  auto* fixtures = app.add_subcommand("fixtures", "Write the bundled reference profiles");
  std::string fx_out;
  fixtures->add_option("--out", fx_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*synth) {
      const VesselSpec spec = parse_vessel_spec(read_json_file(synth_spec));
      const TriMesh mesh = synth_vessel(spec);
      const auto format = mesh_format_from_path(synth_out);
      if (!format) throw ValidationError("output must end in .ply or .obj");
      save_mesh(mesh, synth_out, *format, SaveOptions{!synth_ascii});
      emit(g, {{"out", synth_out}, {"vertices", mesh.vertices.size()}, {"triangles", mesh.triangles.size()}},
           "wrote " + synth_out + " (" + std::to_string(mesh.vertices.size()) + " vertices, " +
               std::to_string(mesh.triangles.size()) + " triangles)\n");
    } else if (*frag) {
      const TriMesh mesh = load_mesh(frag_mesh);
      double height = 0.0;
      for (const auto& v : mesh.vertices) height = std::max(height, v.z());
      const FragmentSpec spec = parse_cuts(read_json_file(frag_cuts), height, g.seed);
      const auto sherds = fragment_vessel(mesh, spec, g.seed);
      fs::create_directories(frag_out);
      json list = json::array();
      std::string human;
      for (const auto& s : sherds) {
        const fs::path mesh_path = fs::path(frag_out) / (s.truth.label + ".ply");
        save_mesh(s.mesh, mesh_path);
        write_text_file(fs::path(frag_out) / (s.truth.label + ".gt.json"), dump_fixed(truth_json(s.truth)));
        list.push_back({{"label", s.truth.label}, {"mesh", mesh_path.string()}, {"triangles", s.mesh.triangles.size()}});
        human += s.truth.label + "  h " + fmt("%.1f", s.truth.h0) + ".." + fmt("%.1f", s.truth.h1) + " mm  theta " +
                 fmt("%.1f", s.truth.theta0) + ".." + fmt("%.1f", s.truth.theta1) + " deg\n";
      }
      emit(g, {{"sherds", list}}, human);
    } else if (*extract) {
      const TriMesh mesh = load_mesh(ex_mesh);
      AxisOptions opt;
      if (!ex_up.empty()) opt.up_hint = Vec3(ex_up[0], ex_up[1], ex_up[2]);
      if (!ex_gt.empty()) {
        const auto d = read_json_file(ex_gt).at("axis_direction").get<std::vector<double>>();
        if (d.size() != 3) throw ValidationError("axis_direction must have three components");
        opt.up_hint = Vec3(d[0], d[1], d[2]);
      }
      const VesselAxis axis = estimate_axis(mesh, opt);
      const ProfilePlane plane = select_profile_plane(mesh, axis, ex_planes, 2.0 * g.step);
      std::string id = ex_id;
      if (id.empty()) {
        id = fs::path(ex_mesh).stem().string();
      }
      const auto ex = extract_profile_detailed(mesh, plane, g.step, id);
      save_profile(ex.profile, ex_out);
      emit(g,
           {{"out", ex_out},
            {"sherd_id", ex.profile.sherd_id},
            {"samples", ex.profile.size()},
            {"axis_point_mm", vec_json(axis.point)},
            {"axis_direction", vec_json(axis.direction)},
            {"fit_rms_mm", axis.fit_rms},
            {"azimuth_deg", plane.azimuth},
            {"arc_span_mm", plane.arc_span},
            {"trimmed_front", ex.trimmed_front},
            {"trimmed_back", ex.trimmed_back}},
           "wrote " + ex_out + ": " + std::to_string(ex.profile.size()) + " samples, axis rms " +
               fmt("%.4f", axis.fit_rms) + " mm, plane " + fmt("%.1f", plane.azimuth) + " deg\n");
    } else if (*match) {
      const auto a = load_profile(m_a, g.step), b = load_profile(m_b, g.step);
      MatchConfig cfg = match_config(g);
      cfg.top_k = m_top_k;
      cfg.allow_reversal = m_rev;
      const auto ranked = best_matches(a, b, cfg);
      json arr = json::array();
      std::string human = "rank  offset  overlap  sad       score\n";
      int rank = 1;
      for (const auto& m : ranked) {
        arr.push_back(match_json(m, cfg));
        char line[160];
        std::snprintf(line, sizeof line, "%4d  %6ld  %7ld  %8.4f  %.4f%s%s\n", rank++, m.offset, m.overlap, m.sad,
                      m.score, m.reversed ? "  reversed" : "", is_acceptable(m, cfg) ? "" : "  REJECTED");
        human += line;
      }
      emit(g, arr, human);
    } else if (*assemble) {
      auto profiles = load_profiles(as_dir, g.step);
      std::optional<SessionLog> log;
      if (!as_log.empty()) log.emplace(as_log);
      AssemblyState st = as_replay.empty()
                             ? init_assembly(std::move(profiles), match_config(g))
                             : replay(std::move(profiles), match_config(g), SessionLog::read_decisions(as_replay));
      st = as_interactive ? interactive(std::move(st), log) : batch(std::move(st), side_from_string(as_side), log);
      if (!as_out.empty()) export_layout(st, as_out);
      std::string human;
      for (const auto& m : st.meta.members)
        human += m.sherd_id + "  offset " + std::to_string(m.offset) + "  " + to_string(m.side) + "\n";
      for (const auto& p : st.pool) human += p.sherd_id + "  unplaced\n";
      emit(g, layout_json(st), human);
    } else if (*serve) {
      auto profiles = load_profiles(sv_dir, g.step);
      std::vector<Decision> decisions;
      if (sv_resume) {
        if (sv_log.empty()) throw ValidationError("--resume needs --log");
        if (fs::exists(sv_log)) decisions = SessionLog::read_decisions(sv_log);
      }
      std::optional<fs::path> log_path;
      if (!sv_log.empty()) log_path = sv_log;
      SessionService service(replay(std::move(profiles), match_config(g), decisions), log_path);
      ServerOptions opt;
      opt.host = sv_host;
      opt.port = sv_port;
      if (!sv_ui.empty()) opt.ui_dir = sv_ui;
      HttpServer server(service, opt);
      const int port = server.bind();
      if (g.json) std::cout << json{{"host", sv_host}, {"port", port}}.dump() << std::endl;
      else std::cout << "serving on http://" << sv_host << ':' << port << '/' << std::endl;
      server.listen();
    } else if (*fixtures) {
      const auto paths = write_reference_profiles(fx_out);
      json arr = json::array();
      std::string human;
      for (std::size_t i = 0; i < paths.size(); ++i) {
        const auto& p = reference_profiles()[i];
        arr.push_back({{"sherd_id", p.sherd_id}, {"samples", p.size()}, {"path", paths[i].string()}});
        human += paths[i].string() + "  " + std::to_string(p.size()) + " samples\n";
      }
      emit(g, arr, human);
    }
  } catch (const Error& e) {
    if (g.json) {
      json err{{"error", e.kind()}, {"message", e.what()}};
      if (const auto* pe = dynamic_cast<const ParseError*>(&e)) err["location"] = pe->location();
      if (const auto* ge = dynamic_cast<const GapError*>(&e)) err["station"] = ge->station();
      std::cerr << err.dump() << '\n';
    } else {
      std::cerr << "error: " << e.kind() << ": " << e.what() << '\n';
    }
    return 1;
  } catch (const std::exception& e) {
    if (g.json) std::cerr << json{{"error", "InternalError"}, {"message", e.what()}}.dump() << '\n';
    else std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
