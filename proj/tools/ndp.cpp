#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ndp/cli.hpp"
#include "ndp/server.hpp"

int main(int argc, char** argv) {
  CLI::App app{"ndp: natural deduction planner"};
  app.require_subcommand(1);

  std::string check_path;
  std::optional<std::string> check_system;
  auto* check = app.add_subcommand("check", "replay a saved proof and check it");
  check->add_option("path", check_path, ".ndp or .ndu file")->required();
  check->add_option("--system", check_system, "NJ, NK or PA (default: $NDP_SYSTEM, then the saved system)");

  std::string export_path, format;
  std::optional<std::string> export_out;
  auto* exp = app.add_subcommand("export", "export a saved proof");
  exp->add_option("path", export_path, ".ndp or .ndu file")->required();
  exp->add_option("--format", format, "latex, text or frames")->required();
  exp->add_option("--out", export_out, "output file, or directory for frames");

  std::string script_path;
  std::optional<std::string> save_path;
  auto* prove = app.add_subcommand("prove", "run a proof script headlessly");
  prove->add_option("script", script_path, "script JSON file")->required();
  prove->add_option("--save", save_path, "save the final state (.ndp or .ndu)");

  int port = 8080;
  std::optional<std::string> static_dir;
  std::string host = "127.0.0.1";
  auto* serve = app.add_subcommand("serve", "run the session API");
  serve->add_option("--port", port, "TCP port");
  serve->add_option("--host", host, "bind address");
  serve->add_option("--static", static_dir, "directory served at /");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ndp::kExitUsage;
  }

  try {
    if (*check) return ndp::cmd_check(check_path, check_system, std::cout, std::cerr);
    if (*exp) {
      std::optional<std::filesystem::path> out;
      if (export_out) out = *export_out;
      return ndp::cmd_export(export_path, format, out, std::cout, std::cerr);
    }
    if (*prove) {
      std::optional<std::filesystem::path> save;
      if (save_path) save = *save_path;
      return ndp::cmd_prove(script_path, save, std::cout, std::cerr);
    }
    if (*serve) {
      std::optional<std::filesystem::path> dir;
      if (static_dir) dir = *static_dir;
      return ndp::cmd_serve(port, dir, std::cout, std::cerr, host);
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return ndp::kExitUsage;
  }
  return ndp::kExitUsage;
}
