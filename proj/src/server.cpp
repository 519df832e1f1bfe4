#include "bezknot/server.hpp"

#include <charconv>

#include "httplib.h"

#include "bezknot/errors.hpp"
#include "bezknot/fixtures.hpp"
#include "bezknot/io.hpp"

namespace bezknot::workbench {

namespace {

struct HttpError : std::runtime_error {
  HttpError(int status, std::string code, const std::string& message)
      : std::runtime_error(message), status(status), code(std::move(code)) {}
  int status;
  std::string code;
};

void send_json(httplib::Response& res, json body, int status = 200) {
  body["api"] = kApiVersion;
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& code,
                const std::string& message) {
  send_json(res, {{"error", {{"code", code}, {"message", message}}}}, status);
}

json parse_body(const httplib::Request& req, bool allow_empty = false) {
  if (req.body.empty()) {
    if (allow_empty) return json();
    throw HttpError(400, "malformed_request", "request body is empty");
  }
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw HttpError(400, "malformed_json", e.what());
  }
}

template <typename T>
T query_number(const httplib::Request& req, const char* key, T fallback) {
  if (!req.has_param(key)) return fallback;
  const std::string raw = req.get_param_value(key);
  T value{};
  const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
  if (ec != std::errc() || ptr != raw.data() + raw.size()) {
    throw HttpError(400, "bad_parameter", std::string("bad value for '") + key + "': " + raw);
  }
  return value;
}

Point3 point_from(const json& p) {
  if (!p.is_array() || p.size() != 3 || !p[0].is_number() || !p[1].is_number() ||
      !p[2].is_number()) {
    throw HttpError(400, "malformed_request", "\"point\" must be [x, y, z]");
  }
  return {p[0].get<double>(), p[1].get<double>(), p[2].get<double>()};
}

ControlPolygon polygon_from_request(const json& body) {
  if (!body.is_object()) throw HttpError(400, "malformed_request", "body must be a JSON object");
  if (body.contains("fixture")) {
    if (!body["fixture"].is_string()) throw HttpError(400, "malformed_request", "bad fixture");
    try {
      return fixtures::by_name(body["fixture"].get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw HttpError(404, "unknown_fixture", e.what());
    }
  }
  if (body.contains("text")) {
    if (!body["text"].is_string()) throw HttpError(400, "malformed_request", "bad text");
    return io::polygon_from_text(body["text"].get<std::string>());
  }
  if (body.contains("polygon")) return io::polygon_from_json(body["polygon"]);
  return io::polygon_from_json(body);
}

json snapshot_json(const Session& s, const Session::Snapshot& snap) {
  return {{"id", s.id()},
          {"version", snap.version},
          {"simple", snap.simple},
          {"polygon", io::polygon_to_json(snap.polygon)}};
}

using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

// Maps toolkit exceptions onto structured responses.
Handler guarded(Handler inner) {
  return [inner = std::move(inner)](const httplib::Request& req, httplib::Response& res) {
    try {
      inner(req, res);
    } catch (const HttpError& e) {
      send_error(res, e.status, e.code, e.what());
    } catch (const ParseError& e) {
      send_error(res, 400, "parse_error", e.what());
    } catch (const UnsupportedDegree& e) {
      send_error(res, 400, "unsupported_degree", e.what());
    } catch (const DegenerateInput& e) {
      send_error(res, 400, "degenerate_input", e.what());
    } catch (const DomainError& e) {
      send_error(res, 400, "domain_error", e.what());
    } catch (const std::invalid_argument& e) {
      send_error(res, 400, "bad_request", e.what());
    } catch (const json::exception& e) {
      send_error(res, 400, "malformed_request", e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "internal", e.what());
    }
  };
}

}  // namespace

Server::Server(ServerOptions options)
    : options_(std::move(options)), http_(std::make_unique<httplib::Server>()) {
  install_routes();
}

Server::~Server() {
  stop();
  store_.close_all();
}

int Server::bind(int port) {
  if (port == 0) return http_->bind_to_any_port(options_.host);
  return http_->bind_to_port(options_.host, port) ? port : -1;
}

bool Server::listen() { return http_->listen_after_bind(); }

void Server::stop() {
  store_.close_all();
  if (http_) http_->stop();
}

void Server::install_routes() {
  auto& http = *http_;
  auto session_of = [this](const httplib::Request& req) {
    auto s = store_.find(req.matches[1]);
    if (!s) throw HttpError(404, "unknown_session", "no session '" + std::string(req.matches[1]) + "'");
    if (s->closed()) throw HttpError(410, "session_closed", "session is closed");
    return s;
  };

  http.Post("/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
              auto session = store_.create(polygon_from_request(parse_body(req)));
              send_json(res, snapshot_json(*session, session->snapshot()), 201);
            }));

  http.Get(R"(/sessions/([^/]+)/polygon)",
           guarded([session_of](const httplib::Request& req, httplib::Response& res) {
             auto s = session_of(req);
             send_json(res, snapshot_json(*s, s->snapshot()));
           }));

  http.Put(R"(/sessions/([^/]+)/polygon)",
           guarded([session_of](const httplib::Request& req, httplib::Response& res) {
             auto s = session_of(req);
             auto polygon = polygon_from_request(parse_body(req));
             send_json(res, snapshot_json(*s, s->replace(std::move(polygon))));
           }));

  http.Post(R"(/sessions/([^/]+)/vertex/(\d+))",
            guarded([session_of](const httplib::Request& req, httplib::Response& res) {
              auto s = session_of(req);
              std::size_t index = 0;
              const std::string raw = req.matches[2];
              const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), index);
              if (ec != std::errc()) throw HttpError(400, "bad_parameter", "bad vertex index");
              const json body = parse_body(req);
              const std::string op = body.value("op", std::string("move"));
              std::optional<Point3> point;
              if (body.contains("point")) point = point_from(body["point"]);
              VertexOp kind;
              if (op == "move") kind = VertexOp::move;
              else if (op == "insert") kind = VertexOp::insert;
              else if (op == "delete") kind = VertexOp::remove;
              else throw HttpError(400, "bad_request", "unknown op '" + op + "'");
              if (kind != VertexOp::remove && !point) {
                throw HttpError(400, "malformed_request", "op '" + op + "' needs \"point\"");
              }
              send_json(res, snapshot_json(*s, s->edit_vertex(index, kind, point)));
            }));

  http.Get(R"(/sessions/([^/]+)/samples)",
           guarded([this, session_of](const httplib::Request& req, httplib::Response& res) {
             auto s = session_of(req);
             const auto count = query_number<std::size_t>(req, "count", options_.default_samples);
             if (count < 2 || count > options_.max_samples) {
               throw HttpError(400, "bad_parameter",
                               "count must lie in [2, " + std::to_string(options_.max_samples) + "]");
             }
             const auto version = s->snapshot().version;
             json pts = json::array();
             for (const auto& p : s->samples(count)) pts.push_back(io::point_to_json(p));
             send_json(res, {{"version", version}, {"count", count}, {"points", pts}});
           }));

  http.Get(R"(/sessions/([^/]+)/subdivision)",
           guarded([this, session_of](const httplib::Request& req, httplib::Response& res) {
             auto s = session_of(req);
             const double u = query_number<double>(req, "u", 0.5);
             const auto depth = query_number<std::size_t>(req, "depth", 1);
             if (depth > options_.max_subdivision_depth) {
               throw HttpError(400, "bad_parameter", "depth too large");
             }
             const auto snap = s->snapshot();
             json pieces = json::array();
             for (const auto& piece : subdivide(BezierCurve(snap.polygon), u, depth)) {
               json pts = json::array();
               for (const auto& p : piece.curve.control()) pts.push_back(io::point_to_json(p));
               pieces.push_back({{"t_begin", piece.t_begin}, {"t_end", piece.t_end}, {"points", pts}});
             }
             send_json(res, {{"version", snap.version}, {"u", u}, {"depth", depth}, {"pieces", pieces}});
           }));

  http.Post(R"(/sessions/([^/]+)/analysis)",
            guarded([session_of](const httplib::Request& req, httplib::Response& res) {
              auto s = session_of(req);
              const auto request = AnalysisRequest::from_json(parse_body(req, true));
              const auto version = s->snapshot().version;
              const auto job = s->start_analysis(request);
              send_json(res, {{"job", job}, {"version", version}}, 202);
            }));

  http.Get(R"(/sessions/([^/]+)/certificates)",
           guarded([session_of](const httplib::Request& req, httplib::Response& res) {
             send_json(res, session_of(req)->certificates());
           }));

  http.Get(R"(/sessions/([^/]+)/events)",
           guarded([this, session_of](const httplib::Request& req, httplib::Response& res) {
             auto s = session_of(req);
             struct Cursor {
               std::uint64_t since;
               std::chrono::steady_clock::time_point last_activity;
             };
             auto cursor = std::make_shared<Cursor>(
                 Cursor{query_number<std::uint64_t>(req, "since", 0), std::chrono::steady_clock::now()});
             const auto idle = req.has_param("timeout_ms")
                                   ? std::chrono::milliseconds(query_number<long>(req, "timeout_ms", 0))
                                   : options_.stream_idle_timeout;
             res.set_header("Cache-Control", "no-cache");
             res.set_chunked_content_provider(
                 "text/event-stream", [s, cursor, idle](std::size_t, httplib::DataSink& sink) {
                   const auto events = s->events_since(cursor->since, std::chrono::milliseconds(100));
                   for (const auto& e : events) {
                     json data = e.data;
                     data["api"] = kApiVersion;
                     const std::string frame = "id: " + std::to_string(e.seq) + "\nevent: " + e.type +
                                               "\ndata: " + data.dump() + "\n\n";
                     if (!sink.write(frame.data(), frame.size())) return false;
                     cursor->since = e.seq;
                     cursor->last_activity = std::chrono::steady_clock::now();
                   }
                   if (s->closed() || std::chrono::steady_clock::now() - cursor->last_activity > idle) {
                     sink.done();
                   }
                   return true;
                 });
           }));

  http.Delete(R"(/sessions/([^/]+))",
              guarded([this](const httplib::Request& req, httplib::Response& res) {
                const std::string id = req.matches[1];
                if (!store_.remove(id)) throw HttpError(404, "unknown_session", "no session '" + id + "'");
                send_json(res, {{"id", id}, {"closed", true}});
              }));

  http.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) send_error(res, res.status, "not_found", "no such endpoint");
  });
}

}  // namespace bezknot::workbench
