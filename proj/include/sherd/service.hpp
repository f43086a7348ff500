#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sherd/assembly.hpp"

namespace sherd {

struct PlacementView {
  std::string sherd_id;
  long offset = 0;
  double offset_mm = 0.0;
  long order = 0;
  std::string side;
  std::string decided_by;
  double score = 0.0;
  bool override_used = false;

  bool operator==(const PlacementView&) const = default;
};

// A candidate plus the arrays a chart needs to draw it over the meta profile:
// `overlay_mm` is the (oriented) candidate profile placed at `overlay_start`
// in meta sample coordinates; [overlap_begin, overlap_end) is the shared range.
struct CandidateView {
  std::string sherd_id;
  bool matchable = false;
  bool acceptable = false;
  long offset = 0;
  long overlap = 0;
  double sad = 0.0;
  double score = 0.0;
  bool reversed = false;
  long overlay_start = 0;
  std::vector<double> overlay_mm;
  long overlap_begin = 0;
  long overlap_end = 0;

  bool operator==(const CandidateView&) const = default;
};

struct SessionView {
  long revision = 0;
  double step_mm = 1.0;
  std::vector<double> meta_mm;
  std::vector<int> contributors;
  std::vector<PlacementView> placements;
  std::vector<CandidateView> candidates;
  std::vector<std::string> pending;
  long log_length = 0;
  bool complete = false;
  MatchConfig config;

  bool operator==(const SessionView&) const = default;
};

SessionView make_view(const AssemblyState& state, long revision);
nlohmann::json to_json(const SessionView& view);
SessionView session_view_from_json(const nlohmann::json& j);

struct HttpReply {
  int status = 200;
  nlohmann::json body;
  std::map<std::string, std::string> headers;
};

// Owns the single assembly session and serializes every mutation. Requests
// are handled without any socket so the routing is testable directly.
//
// Mutating requests must carry `If-Match: <revision>` (quotes optional);
// responses carry the new revision in `ETag`.
class SessionService {
public:
  SessionService() = default;
  explicit SessionService(AssemblyState state, std::optional<std::filesystem::path> log_path = {});

  HttpReply handle(const std::string& method, const std::string& path, const std::string& body,
                   const std::map<std::string, std::string>& headers);

  bool loaded() const;
  long revision() const;
  std::optional<AssemblyState> snapshot() const;

private:
  HttpReply view_reply() const; // caller holds mutex_
  HttpReply decision(const std::string& body, const std::map<std::string, std::string>& headers);
  HttpReply undo_request(const std::map<std::string, std::string>& headers);
  std::optional<HttpReply> check_revision(const std::map<std::string, std::string>& headers) const;

  mutable std::mutex mutex_;
  std::optional<AssemblyState> state_;
  std::optional<SessionLog> log_;
  long revision_ = 0;
};

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 7131; // 0 picks a free port
  std::optional<std::filesystem::path> ui_dir;
};

// Thin httplib front end over a SessionService.
class HttpServer {
public:
  HttpServer(SessionService& service, ServerOptions options);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds the socket and returns the port; throws IoError when binding fails.
  int bind();
  void listen();    // blocks until stop()
  void start();     // bind() + listen() on a background thread
  void stop();
  int port() const { return port_; }

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  SessionService& service_;
  ServerOptions options_;
  int port_ = -1;
};

} // namespace sherd
