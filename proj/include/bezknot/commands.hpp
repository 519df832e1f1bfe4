#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "bezknot/geometry.hpp"
#include "bezknot/selfx.hpp"

namespace bezknot::workbench {

using nlohmann::json;

// Exit codes shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInputError = 2;

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ReproduceResult {
  std::string case_name;
  std::vector<Check> checks;
  json report;  // deterministic; no timings

  bool ok() const;
  const Check* find(const std::string& name) const;
};

ReproduceResult reproduce_trefoil(const ControlPolygon& polygon);
ReproduceResult reproduce_equilateral(const ControlPolygon& polygon);

// Writes <out_dir>/<case>-report.json and a manifest; prints one line per check.
// `fixture` replaces the embedded control points.
int cmd_reproduce(const std::string& case_name, const std::optional<std::filesystem::path>& fixture,
                  const std::filesystem::path& out_dir, std::ostream& log);

// Report JSON for a generator run; found or not.
std::string render_generate(const selfx::GeneratorConfig& config);
// Writes the report to `out` and `out`.manifest.json, even when nothing was found.
int cmd_generate(const selfx::GeneratorConfig& config, const std::filesystem::path& out,
                 std::ostream& log);

enum class VerifyCheck { simple, selfx, knot, pushes };
// Parses "simple,selfx,knot,pushes" (any subset, comma separated).
std::vector<VerifyCheck> parse_checks(const std::string& list);

struct VerifyOptions {
  double selfx_gap_tolerance = 1e-6;
};

json render_verify(const ControlPolygon& polygon, const std::vector<VerifyCheck>& checks,
                   const VerifyOptions& options = {});
// Report goes to `out` when given (plus a manifest), to `log` otherwise.
int cmd_verify(const std::filesystem::path& input, const std::vector<VerifyCheck>& checks,
               const std::optional<std::filesystem::path>& out, std::ostream& log,
               const VerifyOptions& options = {});

json render_subdivide(const ControlPolygon& polygon, double u, std::size_t depth);
int cmd_subdivide(const std::filesystem::path& input, double u, std::size_t depth,
                  const std::optional<std::filesystem::path>& out, std::ostream& log);

// Manifest: command, args, config snapshot, seed, input/output digests and
// toolkit version.
json make_manifest(const std::string& command, const json& args,
                   const std::map<std::string, std::string>& inputs,
                   const std::map<std::string, std::string>& outputs);
std::filesystem::path manifest_path_for(const std::filesystem::path& output);

// Re-runs the manifest's command in memory and compares its output digest
// with the manifest and with the file on disk.
int cmd_replay(const std::filesystem::path& manifest, std::ostream& log);

}  // namespace bezknot::workbench
