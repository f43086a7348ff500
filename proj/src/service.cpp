#include "sherd/service.hpp"

#include <algorithm>
#include <cctype>
#include <thread>

#include <httplib.h>

#include "sherd/errors.hpp"

namespace sherd {

SessionView make_view(const AssemblyState& state, long revision) {
  SessionView v;
  v.revision = revision;
  v.step_mm = state.meta.profile.step;
  v.meta_mm = state.meta.profile.samples;
  v.contributors = state.meta.contributors;
  for (const auto& m : state.meta.members) {
    const auto pos = std::find(state.order.begin(), state.order.end(), m.sherd_id) - state.order.begin();
    v.placements.push_back({m.sherd_id, m.offset, static_cast<double>(m.offset) * v.step_mm,
                            static_cast<long>(pos), to_string(m.side), to_string(m.decided_by), m.score,
                            m.override_used});
  }
  const long meta_len = static_cast<long>(v.meta_mm.size());
  for (const auto& c : state.candidates) {
    CandidateView cv;
    cv.sherd_id = c.sherd_id;
    cv.acceptable = c.acceptable;
    const auto it = std::find_if(state.pool.begin(), state.pool.end(),
                                 [&](const auto& p) { return p.sherd_id == c.sherd_id; });
    if (c.match) {
      const MatchResult& m = *c.match;
      cv.matchable = true;
      cv.offset = m.offset;
      cv.overlap = m.overlap;
      cv.sad = m.sad;
      cv.score = m.score;
      cv.reversed = m.reversed;
      cv.overlay_start = m.offset;
      cv.overlay_mm = m.reversed ? reversed(*it).samples : it->samples;
      cv.overlap_begin = std::max(0L, m.offset);
      cv.overlap_end = std::min(meta_len, m.offset + static_cast<long>(it->size()));
    } else {
      cv.overlay_mm = it->samples;
    }
    v.candidates.push_back(std::move(cv));
  }
  for (const auto& p : state.pool) v.pending.push_back(p.sherd_id);
  v.log_length = static_cast<long>(state.log.size());
  v.complete = state.complete();
  v.config = state.config;
  return v;
}

nlohmann::json to_json(const SessionView& v) {
  nlohmann::json placements = nlohmann::json::array();
  for (const auto& p : v.placements)
    placements.push_back({{"sherd_id", p.sherd_id}, {"offset", p.offset}, {"offset_mm", p.offset_mm},
                          {"order", p.order}, {"side", p.side}, {"decided_by", p.decided_by},
                          {"score", p.score}, {"override", p.override_used}});
  nlohmann::json candidates = nlohmann::json::array();
  for (const auto& c : v.candidates)
    candidates.push_back({{"sherd_id", c.sherd_id}, {"matchable", c.matchable},
                          {"acceptable", c.acceptable}, {"status", c.acceptable ? "ACCEPTABLE" : "REJECTED"},
                          {"offset", c.offset}, {"overlap", c.overlap}, {"sad", c.sad},
                          {"score", c.score}, {"reversed", c.reversed},
                          {"overlay_start", c.overlay_start}, {"overlay_mm", c.overlay_mm},
                          {"overlap_begin", c.overlap_begin}, {"overlap_end", c.overlap_end}});
  return {{"revision", v.revision},
          {"meta", {{"step_mm", v.step_mm}, {"samples_mm", v.meta_mm}, {"contributors", v.contributors}}},
          {"placements", placements},
          {"candidates", candidates},
          {"pending", v.pending},
          {"log_length", v.log_length},
          {"complete", v.complete},
          {"config",
           {{"min_overlap", v.config.min_overlap},
            {"accept_threshold_mm", v.config.accept_threshold},
            {"allow_reversal", v.config.allow_reversal},
            {"top_k", v.config.top_k}}}};
}

SessionView session_view_from_json(const nlohmann::json& j) {
  try {
    SessionView v;
    v.revision = j.at("revision").get<long>();
    const auto& meta = j.at("meta");
    v.step_mm = meta.at("step_mm").get<double>();
    v.meta_mm = meta.at("samples_mm").get<std::vector<double>>();
    v.contributors = meta.at("contributors").get<std::vector<int>>();
    for (const auto& p : j.at("placements"))
      v.placements.push_back({p.at("sherd_id"), p.at("offset"), p.at("offset_mm"), p.at("order"),
                              p.at("side"), p.at("decided_by"), p.at("score"), p.at("override")});
    for (const auto& c : j.at("candidates")) {
      CandidateView cv;
      cv.sherd_id = c.at("sherd_id");
      cv.matchable = c.at("matchable");
      cv.acceptable = c.at("acceptable");
      cv.offset = c.at("offset");
      cv.overlap = c.at("overlap");
      cv.sad = c.at("sad");
      cv.score = c.at("score");
      cv.reversed = c.at("reversed");
      cv.overlay_start = c.at("overlay_start");
      cv.overlay_mm = c.at("overlay_mm").get<std::vector<double>>();
      cv.overlap_begin = c.at("overlap_begin");
      cv.overlap_end = c.at("overlap_end");
      v.candidates.push_back(std::move(cv));
    }
    v.pending = j.at("pending").get<std::vector<std::string>>();
    v.log_length = j.at("log_length");
    v.complete = j.at("complete");
    const auto& cfg = j.at("config");
    v.config.min_overlap = cfg.at("min_overlap");
    v.config.accept_threshold = cfg.at("accept_threshold_mm");
    v.config.allow_reversal = cfg.at("allow_reversal");
    v.config.top_k = cfg.at("top_k");
    return v;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed session view: ") + e.what());
  }
}

namespace {

HttpReply error_reply(int status, const std::string& kind, const std::string& message) {
  return {status, {{"error", kind}, {"message", message}}, {}};
}

int status_for(const Error& e) {
  const auto& k = e.kind();
  if (k == "UnknownSherd") return 404;
  if (k == "NotACandidate") return 422;
  if (k == "NothingToUndo") return 409;
  if (k == "IoError") return 500;
  return 400;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::optional<std::string> header(const std::map<std::string, std::string>& headers,
                                  const std::string& name) {
  for (const auto& [k, v] : headers)
    if (lower(k) == name) return v;
  return std::nullopt;
}

} // namespace

SessionService::SessionService(AssemblyState state, std::optional<std::filesystem::path> log_path)
    : state_(std::move(state)) {
  if (log_path) log_.emplace(*log_path);
}

bool SessionService::loaded() const {
  std::lock_guard lock(mutex_);
  return state_.has_value();
}

long SessionService::revision() const {
  std::lock_guard lock(mutex_);
  return revision_;
}

std::optional<AssemblyState> SessionService::snapshot() const {
  std::lock_guard lock(mutex_);
  return state_;
}

HttpReply SessionService::view_reply() const {
  HttpReply r{200, to_json(make_view(*state_, revision_)), {}};
  r.headers["ETag"] = "\"" + std::to_string(revision_) + "\"";
  return r;
}

std::optional<HttpReply> SessionService::check_revision(
    const std::map<std::string, std::string>& headers) const {
  auto value = header(headers, "if-match");
  if (!value)
    return error_reply(428, "PreconditionRequired", "send If-Match with the current revision");
  std::string v = *value;
  v.erase(std::remove(v.begin(), v.end(), '"'), v.end());
  if (v != std::to_string(revision_))
    return error_reply(409, "StaleRevision",
                       "revision " + v + " is stale; current revision is " + std::to_string(revision_));
  return std::nullopt;
}

HttpReply SessionService::decision(const std::string& body,
                                   const std::map<std::string, std::string>& headers) {
  std::string sherd_id;
  Side side;
  bool override_flag = false;
  try {
    const auto j = nlohmann::json::parse(body);
    if (!j.is_object()) return error_reply(400, "ValidationError", "body must be a JSON object");
    sherd_id = j.at("sherd_id").get<std::string>();
    side = side_from_string(j.at("side").get<std::string>());
    if (j.contains("override")) override_flag = j.at("override").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    return error_reply(400, "ValidationError", std::string("bad decision body: ") + e.what());
  } catch (const Error& e) {
    return error_reply(400, e.kind(), e.what());
  }

  std::lock_guard lock(mutex_);
  if (!state_) return error_reply(503, "NoSession", "no assembly session loaded");
  if (auto bad = check_revision(headers)) return *bad;
  try {
    AssemblyState next = commit(*state_, sherd_id, side, override_flag);
    if (log_) log_->record_commit(next.log.back());
    state_ = std::move(next);
    ++revision_;
  } catch (const Error& e) {
    return error_reply(status_for(e), e.kind(), e.what());
  }
  return view_reply();
}

HttpReply SessionService::undo_request(const std::map<std::string, std::string>& headers) {
  std::lock_guard lock(mutex_);
  if (!state_) return error_reply(503, "NoSession", "no assembly session loaded");
  if (auto bad = check_revision(headers)) return *bad;
  try {
    AssemblyState next = undo(*state_);
    if (log_) log_->record_undo();
    state_ = std::move(next);
    ++revision_;
  } catch (const Error& e) {
    return error_reply(status_for(e), e.kind(), e.what());
  }
  return view_reply();
}

HttpReply SessionService::handle(const std::string& method, const std::string& path,
                                 const std::string& body,
                                 const std::map<std::string, std::string>& headers) {
  if (path == "/api/state") {
    if (method != "GET") return error_reply(405, "MethodNotAllowed", "use GET");
    std::lock_guard lock(mutex_);
    if (!state_) return error_reply(503, "NoSession", "no assembly session loaded");
    return view_reply();
  }
  if (path == "/api/decision") {
    if (method != "POST") return error_reply(405, "MethodNotAllowed", "use POST");
    return decision(body, headers);
  }
  if (path == "/api/undo") {
    if (method != "POST") return error_reply(405, "MethodNotAllowed", "use POST");
    return undo_request(headers);
  }
  return error_reply(404, "NotFound", "no route for " + path);
}

namespace {

constexpr const char* kPlaceholderPage = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>sherd assembly</title></head>
<body><h1>sherd assembly service</h1>
<p>No UI bundle is configured. The JSON API is available at
<code>GET /api/state</code>, <code>POST /api/decision</code> and <code>POST /api/undo</code>.</p>
</body></html>
)";

} // namespace

struct HttpServer::Impl {
  httplib::Server server;
  std::thread thread;
};

HttpServer::HttpServer(SessionService& service, ServerOptions options)
    : impl_(std::make_unique<Impl>()), service_(service), options_(std::move(options)) {
  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> headers;
    for (const auto& [k, v] : req.headers) headers.emplace(k, v);
    const HttpReply reply = service_.handle(req.method, req.path, req.body, headers);
    res.status = reply.status;
    for (const auto& [k, v] : reply.headers) res.set_header(k, v);
    res.set_content(reply.body.dump(), "application/json; charset=utf-8");
  };
  auto& s = impl_->server;
  s.Get("/api/.*", forward);
  s.Post("/api/.*", forward);
  s.Put("/api/.*", forward);
  s.Delete("/api/.*", forward);
  if (options_.ui_dir) {
    if (!s.set_mount_point("/", options_.ui_dir->string()))
      throw IoError("UI directory '" + options_.ui_dir->string() + "' does not exist");
  } else {
    s.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(kPlaceholderPage, "text/html; charset=utf-8");
    });
  }
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
  auto& s = impl_->server;
  if (options_.port == 0) {
    port_ = s.bind_to_any_port(options_.host);
  } else {
    port_ = s.bind_to_port(options_.host, options_.port) ? options_.port : -1;
  }
  if (port_ < 0)
    throw IoError("cannot bind " + options_.host + ":" + std::to_string(options_.port));
  return port_;
}

void HttpServer::listen() {
  if (port_ < 0) bind();
  impl_->server.listen_after_bind();
}

void HttpServer::start() {
  if (port_ < 0) bind();
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void HttpServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

} // namespace sherd
