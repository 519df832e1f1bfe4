#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "bezknot/geometry.hpp"
#include "bezknot/knot.hpp"
#include "bezknot/selfx.hpp"

namespace bezknot::workbench {

using nlohmann::json;

struct AnalysisRequest {
  bool simplicity = true;
  bool selfx = true;
  bool diagram = true;
  knot::DiagramTolerances diagram_tolerances;
  selfx::WitnessSearchConfig witness;

  // Reads {"checks": [...], "diagram": {...}, "witness": {...}}; missing keys
  // keep their defaults. Throws std::invalid_argument on bad values.
  static AnalysisRequest from_json(const json& body);
};

struct Event {
  std::uint64_t seq = 0;
  std::string type;
  json data;
};

enum class VertexOp { move, insert, remove };

// One editable polygon with its analysis cache and event log. Edits are
// serialized by the session mutex; expensive analyses run on worker threads
// and report through the event log.
class Session {
 public:
  Session(std::string id, ControlPolygon polygon);
  ~Session();
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  const std::string& id() const { return id_; }

  struct Snapshot {
    ControlPolygon polygon;
    std::uint64_t version;
    bool simple;
  };
  Snapshot snapshot() const;

  // Each edit bumps the version, drops cached results, reruns the cheap
  // simplicity check and logs a "polygon" event. Returns the new snapshot.
  Snapshot replace(ControlPolygon polygon);
  Snapshot edit_vertex(std::size_t index, VertexOp op, const std::optional<Point3>& point);

  // Cached per (version, count).
  std::vector<Point3> samples(std::size_t count);

  // Starts an analysis job on a worker thread; returns its job id.
  std::uint64_t start_analysis(const AnalysisRequest& request);

  // Certificates from the latest analysis that finished on the current version,
  // plus the always-fresh simplicity certificate.
  json certificates() const;

  // Events with seq > since; waits up to `wait` for one to arrive. Returns
  // as soon as any are available or the session closes.
  std::vector<Event> events_since(std::uint64_t since, std::chrono::milliseconds wait) const;

  // Cancels pending analyses and wakes waiting readers; idempotent.
  void close();
  bool closed() const { return closed_.load(); }

 private:
  void publish_locked(std::string type, json data);
  void refresh_cheap_locked();
  void run_job(std::uint64_t job, AnalysisRequest request, ControlPolygon polygon,
               std::uint64_t version);

  std::string id_;
  mutable std::mutex mutex_;
  mutable std::condition_variable events_cv_;
  ControlPolygon polygon_;
  std::uint64_t version_ = 1;
  bool simple_ = false;
  json simplicity_certificate_;
  struct SampleCache {
    std::uint64_t version;
    std::size_t count;
    std::vector<Point3> points;
  };
  std::optional<SampleCache> samples_cache_;
  json analysis_certificates_;
  std::uint64_t analysis_version_ = 0;
  std::uint64_t next_job_ = 1;
  std::vector<Event> events_;
  std::uint64_t next_seq_ = 1;
  std::vector<std::thread> workers_;
  std::atomic<bool> closed_{false};
};

class SessionStore {
 public:
  std::shared_ptr<Session> create(ControlPolygon polygon);
  std::shared_ptr<Session> find(const std::string& id) const;
  // Removes and closes; false when the id is unknown.
  bool remove(const std::string& id);
  std::size_t size() const;
  void close_all();

 private:
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t counter_ = 0;
};

}  // namespace bezknot::workbench
