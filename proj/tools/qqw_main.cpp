#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "qqw/config_io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"qqw: exact Hopf actions on quiver path algebras"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  unsigned threads = 1;

  const std::vector<std::string> commands{"verify-action", "check-factorization", "phi",
                                          "psi",           "roundtrip",           "coproduct-check",
                                          "classify-eo",   "fixtures"};
  for (const std::string& name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_path, "write the report (or transform output) here");
    sub->add_option("--threads", threads, "verification worker threads");
  }

  CLI11_PARSE(app, argc, argv);
  std::string command = app.get_subcommands().front()->get_name();

  qqw::json config;
  {
    std::ifstream in(config_path);
    if (!in.good()) {
      std::cerr << "qqw: cannot open config " << config_path << "\n";
      return 2;
    }
    try {
      in >> config;
    } catch (const qqw::json::exception& e) {
      qqw::json err{{"pass", false},
                    {"error", {{"code", "ConfigError"}, {"message", e.what()}}}};
      std::cout << err.dump(2) << std::endl;
      return 2;
    }
  }

  qqw::CommandResult result = qqw::run_command(command, config, threads);
  result.report["command"] = command;

  // machine-readable report on stdout; a one-line summary on stderr
  std::cout << result.report.dump(2) << std::endl;
  if (result.exit_code == 0)
    std::cerr << "qqw " << command << ": ok\n";
  else if (result.exit_code == 1)
    std::cerr << "qqw " << command << ": FAILED\n";
  else
    std::cerr << "qqw " << command << ": error ("
              << result.report["error"]["code"].get<std::string>() << ")\n";

  if (!out_path.empty() && result.exit_code == 0) {
    std::ofstream out(out_path);
    const qqw::json& payload =
        result.report.contains("output") ? result.report["output"] : result.report;
    out << payload.dump(2) << "\n";
  }
  return result.exit_code;
}
