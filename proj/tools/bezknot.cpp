#include <csignal>
#include <iostream>

#include "CLI11.hpp"

#include "bezknot/commands.hpp"
#include "bezknot/server.hpp"

namespace {

bezknot::workbench::Server* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace bezknot::workbench;
  CLI::App app{"Bezier curve / control polygon topology toolkit"};
  app.set_version_flag("--version", BEZKNOT_VERSION);
  app.require_subcommand(1);

  auto* reproduce = app.add_subcommand("reproduce", "Re-check a built-in reference example");
  std::string case_name;
  std::string fixture;
  std::string out_dir = "bezknot-output";
  reproduce->add_option("case", case_name, "trefoil | equilateral")
      ->required()
      ->check(CLI::IsMember({"trefoil", "equilateral"}));
  reproduce->add_option("--fixture", fixture, "Polygon file replacing the embedded control points");
  reproduce->add_option("--out", out_dir, "Directory for the report and manifest");

  auto* generate = app.add_subcommand("generate", "Search for a self-intersecting curve over a simple equilateral polygon");
  bezknot::selfx::GeneratorConfig config;
  std::string gen_out = "generator-report.json";
  std::string mode = "reject";
  generate->add_option("--degree", config.degree, "Curve degree")->capture_default_str();
  generate->add_option("--restarts", config.restarts, "Number of random starts")->capture_default_str();
  generate->add_option("--seed", config.seed, "RNG seed")->capture_default_str();
  generate->add_option("--out", gen_out, "Report file")->capture_default_str();
  generate->add_option("--eps-root", config.eps_root, "Accept SF at or below this")->capture_default_str();
  generate->add_option("--eps-edge", config.eps_edge, "Edge length tolerance")->capture_default_str();
  generate->add_option("--min-separation", config.min_parameter_separation,
                       "Minimum parameter distance between the two witness points")
      ->capture_default_str();
  generate->add_option("--constraint", mode, "reject | penalty")
      ->check(CLI::IsMember({"reject", "penalty"}))
      ->capture_default_str();
  generate->add_option("--threads", config.threads, "Worker threads for restarts")->capture_default_str();
  generate->add_option("--max-evals", config.simplex.max_evals, "Evaluation cap per minimization")
      ->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Run verifiers on a polygon file");
  std::string checks = "simple,selfx,knot,pushes";
  std::string verify_input;
  std::string verify_out;
  double gap_tol = VerifyOptions{}.selfx_gap_tolerance;
  verify->add_option("--checks", checks, "Comma-separated: simple,selfx,knot,pushes")->capture_default_str();
  verify->add_option("--out", verify_out, "Report file (stdout when omitted)");
  verify->add_option("--gap-tolerance", gap_tol, "Max witness gap for selfx to pass")->capture_default_str();
  verify->add_option("file", verify_input, "Polygon JSON or coordinate text")->required();

  auto* subdiv = app.add_subcommand("subdivide", "de Casteljau subdivision of a curve");
  double u = 0.5;
  std::size_t depth = 1;
  std::string subdiv_input;
  std::string subdiv_out;
  subdiv->add_option("--u", u, "Split parameter in (0,1)")->capture_default_str();
  subdiv->add_option("--depth", depth, "Number of recursive splits")->capture_default_str();
  subdiv->add_option("--out", subdiv_out, "Output file (stdout when omitted)");
  subdiv->add_option("file", subdiv_input, "Polygon JSON or coordinate text")->required();

  auto* serve = app.add_subcommand("serve", "Run the session API");
  int port = 8080;
  std::string host = "127.0.0.1";
  serve->add_option("--port", port, "TCP port (0 picks a free one)")->capture_default_str();
  serve->add_option("--host", host, "Bind address")->capture_default_str();

  auto* replay = app.add_subcommand("replay", "Re-run a manifest and compare output digests");
  std::string manifest;
  replay->add_option("manifest", manifest, "Manifest file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*reproduce) {
      return cmd_reproduce(case_name, fixture.empty() ? std::nullopt : std::optional<std::filesystem::path>(fixture),
                           out_dir, std::cout);
    }
    if (*generate) {
      config.constraint_mode =
          mode == "penalty" ? bezknot::selfx::ConstraintMode::penalty : bezknot::selfx::ConstraintMode::reject;
      return cmd_generate(config, gen_out, std::cout);
    }
    if (*verify) {
      VerifyOptions options;
      options.selfx_gap_tolerance = gap_tol;
      return cmd_verify(verify_input, parse_checks(checks),
                        verify_out.empty() ? std::nullopt : std::optional<std::filesystem::path>(verify_out),
                        std::cout, options);
    }
    if (*subdiv) {
      return cmd_subdivide(subdiv_input, u, depth,
                           subdiv_out.empty() ? std::nullopt : std::optional<std::filesystem::path>(subdiv_out),
                           std::cout);
    }
    if (*serve) {
      ServerOptions options;
      options.host = host;
      Server server(options);
      const int bound = server.bind(port);
      if (bound < 0) {
        std::cerr << "error: cannot bind " << host << ":" << port << "\n";
        return kExitInputError;
      }
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "listening on http://" << host << ":" << bound << std::endl;
      server.listen();
      g_server = nullptr;
      return kExitOk;
    }
    if (*replay) return cmd_replay(manifest, std::cout);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitOk;
}
