#include "bezknot/session.hpp"

#include <random>
#include <sstream>

#include "bezknot/errors.hpp"
#include "bezknot/io.hpp"

namespace bezknot::workbench {

namespace {

template <typename T>
void read_field(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument(std::string("bad value for \"") + key + "\"");
  }
}

}  // namespace

AnalysisRequest AnalysisRequest::from_json(const json& body) {
  AnalysisRequest r;
  if (body.is_null()) return r;
  if (!body.is_object()) throw std::invalid_argument("analysis request must be a JSON object");
  if (body.contains("checks")) {
    const auto& checks = body["checks"];
    if (!checks.is_array()) throw std::invalid_argument("\"checks\" must be an array");
    r.simplicity = r.selfx = r.diagram = false;
    for (const auto& c : checks) {
      const auto name = c.is_string() ? c.get<std::string>() : std::string();
      if (name == "simplicity") r.simplicity = true;
      else if (name == "selfx") r.selfx = true;
      else if (name == "diagram") r.diagram = true;
      else throw std::invalid_argument("unknown check '" + name + "'");
    }
  }
  if (body.contains("diagram")) {
    const auto& d = body["diagram"];
    read_field(d, "samples", r.diagram_tolerances.samples);
    read_field(d, "parameter_separation", r.diagram_tolerances.parameter_separation);
    read_field(d, "crossing_tolerance", r.diagram_tolerances.crossing_tolerance);
    read_field(d, "z_separation_floor", r.diagram_tolerances.z_separation_floor);
    if (r.diagram_tolerances.samples < 8 || r.diagram_tolerances.samples > 20000) {
      throw std::invalid_argument("diagram samples must lie in [8, 20000]");
    }
  }
  if (body.contains("witness")) {
    const auto& w = body["witness"];
    read_field(w, "samples", r.witness.samples);
    read_field(w, "parameter_separation", r.witness.parameter_separation);
    if (r.witness.samples < 8 || r.witness.samples > 5000) {
      throw std::invalid_argument("witness samples must lie in [8, 5000]");
    }
  }
  return r;
}

Session::Session(std::string id, ControlPolygon polygon)
    : id_(std::move(id)), polygon_(std::move(polygon)) {
  std::lock_guard lock(mutex_);
  refresh_cheap_locked();
  publish_locked("polygon", {{"version", version_}, {"simple", simple_}});
}

Session::~Session() {
  close();
  for (auto& w : workers_) {
    if (w.joinable()) w.join();
  }
}

Session::Snapshot Session::snapshot() const {
  std::lock_guard lock(mutex_);
  return {polygon_, version_, simple_};
}

void Session::publish_locked(std::string type, json data) {
  events_.push_back({next_seq_++, std::move(type), std::move(data)});
  events_cv_.notify_all();
}

void Session::refresh_cheap_locked() {
  samples_cache_.reset();
  try {
    const auto result = knot::polygon_is_simple(polygon_);
    simple_ = result.simple;
    simplicity_certificate_ = io::simplicity_certificate_to_json(result, polygon_);
  } catch (const DegenerateInput& e) {
    simple_ = false;
    simplicity_certificate_ = {{"kind", "simplicity"},
                               {"simple", false},
                               {"exact_arithmetic", true},
                               {"degenerate", e.what()},
                               {"input_digest", io::polygon_digest(polygon_)}};
  }
}

Session::Snapshot Session::replace(ControlPolygon polygon) {
  std::lock_guard lock(mutex_);
  if (closed_) throw std::runtime_error("session closed");
  polygon_ = std::move(polygon);
  ++version_;
  refresh_cheap_locked();
  publish_locked("polygon", {{"version", version_}, {"simple", simple_}});
  return {polygon_, version_, simple_};
}

Session::Snapshot Session::edit_vertex(std::size_t index, VertexOp op,
                                       const std::optional<Point3>& point) {
  std::lock_guard lock(mutex_);
  if (closed_) throw std::runtime_error("session closed");
  if (op != VertexOp::remove && !point) throw std::invalid_argument("edit needs a point");
  switch (op) {
    case VertexOp::move:
      polygon_ = polygon_.with_vertex(index, *point);
      break;
    case VertexOp::insert:
      polygon_ = polygon_.with_inserted(index, *point);
      break;
    case VertexOp::remove:
      polygon_ = polygon_.without_vertex(index);
      break;
  }
  ++version_;
  refresh_cheap_locked();
  publish_locked("polygon", {{"version", version_}, {"simple", simple_}});
  return {polygon_, version_, simple_};
}

std::vector<Point3> Session::samples(std::size_t count) {
  std::lock_guard lock(mutex_);
  if (samples_cache_ && samples_cache_->version == version_ && samples_cache_->count == count) {
    return samples_cache_->points;
  }
  auto pts = sample_curve(BezierCurve(polygon_), count);
  samples_cache_ = SampleCache{version_, count, pts};
  return pts;
}

std::uint64_t Session::start_analysis(const AnalysisRequest& request) {
  std::lock_guard lock(mutex_);
  if (closed_) throw std::runtime_error("session closed");
  const auto job = next_job_++;
  publish_locked("analysis-started", {{"job", job}, {"version", version_}});
  workers_.emplace_back(&Session::run_job, this, job, request, polygon_, version_);
  return job;
}

void Session::run_job(std::uint64_t job, AnalysisRequest request, ControlPolygon polygon,
                      std::uint64_t version) {
  json results = json::object();
  json errors = json::object();
  auto cancelled = [this] { return closed_.load(); };

  if (request.simplicity && !cancelled()) {
    try {
      results["simplicity"] =
          io::simplicity_certificate_to_json(knot::polygon_is_simple(polygon), polygon);
    } catch (const std::exception& e) {
      errors["simplicity"] = e.what();
    }
  }
  if (request.selfx && !cancelled()) {
    try {
      const auto w = selfx::find_self_intersection(polygon, request.witness);
      results["selfx"] = w ? io::witness_to_json(*w) : json(nullptr);
    } catch (const std::exception& e) {
      errors["selfx"] = e.what();
    }
  }
  if (request.diagram && !cancelled()) {
    try {
      const auto verdict = knot::analyze_trefoil(BezierCurve(polygon), request.diagram_tolerances);
      results["diagram"] = io::trefoil_certificate_to_json(verdict, polygon);
    } catch (const AmbiguousCrossing& e) {
      errors["diagram"] = e.what();
    } catch (const std::exception& e) {
      errors["diagram"] = e.what();
    }
  }

  std::lock_guard lock(mutex_);
  if (closed_) return;
  const bool current = version == version_;
  if (current) {
    analysis_certificates_ = results;
    analysis_version_ = version;
  }
  publish_locked("analysis-complete", {{"job", job},
                                       {"version", version},
                                       {"stale", !current},
                                       {"results", results},
                                       {"errors", errors}});
}

json Session::certificates() const {
  std::lock_guard lock(mutex_);
  json out = {{"version", version_}, {"simplicity", simplicity_certificate_}};
  if (analysis_version_ == version_ && analysis_certificates_.is_object()) {
    for (const auto& [k, v] : analysis_certificates_.items()) {
      if (k != "simplicity") out[k] = v;
    }
  }
  return out;
}

std::vector<Event> Session::events_since(std::uint64_t since,
                                         std::chrono::milliseconds wait) const {
  std::unique_lock lock(mutex_);
  events_cv_.wait_for(lock, wait, [&] { return closed_ || next_seq_ - 1 > since; });
  std::vector<Event> out;
  for (const auto& e : events_) {
    if (e.seq > since) out.push_back(e);
  }
  return out;
}

void Session::close() {
  {
    std::lock_guard lock(mutex_);
    if (closed_) return;
    closed_ = true;
  }
  events_cv_.notify_all();
}

std::shared_ptr<Session> SessionStore::create(ControlPolygon polygon) {
  std::lock_guard lock(mutex_);
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  std::ostringstream id;
  id << "s" << ++counter_ << "-" << std::hex << (rng() & 0xffffffffull);
  auto session = std::make_shared<Session>(id.str(), std::move(polygon));
  sessions_[session->id()] = session;
  return session;
}

std::shared_ptr<Session> SessionStore::find(const std::string& id) const {
  std::lock_guard lock(mutex_);
  const auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

bool SessionStore::remove(const std::string& id) {
  std::shared_ptr<Session> victim;
  {
    std::lock_guard lock(mutex_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) return false;
    victim = it->second;
    sessions_.erase(it);
  }
  victim->close();
  return true;
}

std::size_t SessionStore::size() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

void SessionStore::close_all() {
  std::lock_guard lock(mutex_);
  for (auto& [id, s] : sessions_) s->close();
  sessions_.clear();
}

}  // namespace bezknot::workbench
