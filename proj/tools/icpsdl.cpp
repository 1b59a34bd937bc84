// icpsdl: run, check or explore iCPS-DL scripts, and simulate the supervisor.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "icps/interpreter.hpp"
#include "icps/supervisor.hpp"
#include "icps/syntax.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) icps::fail("io", "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void report(const std::vector<icps::Diagnostic>& ds, const std::string& file) {
  for (const auto& d : ds) std::cerr << icps::format_diagnostic(d, file) << "\n";
}

void dump_diagrams(const icps::Interpreter& in, const std::string& dir) {
  if (dir.empty()) return;
  fs::create_directories(dir);
  for (const auto& [name, v] : in.bindings()) {
    auto text = icps::diagram(v);
    if (!text) continue;
    std::ofstream out(fs::path(dir) / (name + ".mmd"));
    out << *text;
  }
}

int run_scripts(const std::vector<std::string>& files, std::size_t budget, const std::string& mdir,
                bool check_only) {
  icps::Interpreter in({budget});
  for (const auto& f : files) {
    auto r = check_only ? in.check(read_file(f)) : in.run(read_file(f));
    std::cout << r.output;
    if (!r.ok()) {
      report(r.diagnostics, f);
      return 1;
    }
  }
  if (!check_only) dump_diagrams(in, mdir);
  return 0;
}

bool incomplete(const std::vector<icps::Diagnostic>& ds) {
  for (const auto& d : ds)
    if (d.message.find("found end of input") != std::string::npos) return true;
  return false;
}

int repl(std::size_t budget, const std::string& mdir) {
  icps::Interpreter in({budget});
  std::string buffer, line;
  int status = 0;
  std::cout << "icps> " << std::flush;
  while (std::getline(std::cin, line)) {
    buffer += line + "\n";
    auto parsed = icps::parse(buffer);
    if (!parsed.ok() && incomplete(parsed.diagnostics) && !line.empty()) {
      std::cout << "....> " << std::flush;
      continue;
    }
    if (!parsed.ok()) {
      report(parsed.diagnostics, "<stdin>");
      status = 1;
    } else {
      for (const auto& c : parsed.commands) {
        try {
          auto out = in.execute(c);
          if (!out.empty()) std::cout << out << "\n";
        } catch (const icps::Error& e) {
          report(e.diagnostics(), "<stdin>");
          status = 1;
          break;
        }
      }
    }
    buffer.clear();
    std::cout << "icps> " << std::flush;
  }
  std::cout << "\n";
  dump_diagrams(in, mdir);
  return status;
}

int simulate(const std::string& file, const std::string& timeline) {
  auto sc = icps::load_scenario(file);
  auto r = icps::run_scenario(sc);
  for (const auto& e : r.log) std::cout << icps::to_string(e) << "\n";
  std::cout << "steps: " << r.steps_run << "/" << sc.steps
            << ", reconfigurations: " << r.count(icps::Event::Kind::Reconfiguration) << "\n";
  if (!timeline.empty()) {
    std::ofstream out(timeline);
    out << icps::mermaid_timeline(r.log);
  }
  return r.status == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"iCPS-DL interpreter and supervisor simulator"};
  app.require_subcommand(1);
  std::size_t budget = 100000;
  std::string mdir;
  app.add_option("--state-budget", budget, "State budget for liveness checks")->check(CLI::PositiveNumber);
  app.add_option("--mermaid-dir", mdir, "Write a Mermaid diagram for every diagrammable binding");

  std::vector<std::string> files;
  auto* run = app.add_subcommand("run", "Evaluate scripts in order");
  run->add_option("scripts", files, "Script files")->required()->check(CLI::ExistingFile);
  auto* check = app.add_subcommand("check", "Parse and validate declarations only");
  check->add_option("scripts", files, "Script files")->required()->check(CLI::ExistingFile);
  app.add_subcommand("repl", "Interactive session");
  std::string scenario, timeline;
  auto* sim = app.add_subcommand("simulate", "Run a supervisor scenario");
  sim->add_option("scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  sim->add_option("--timeline", timeline, "Write the event log as a Mermaid timeline");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // help and version exit 0; usage errors count as diagnostics
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*run) return run_scripts(files, budget, mdir, false);
    if (*check) return run_scripts(files, budget, mdir, true);
    if (*sim) return simulate(scenario, timeline);
    return repl(budget, mdir);
  } catch (const icps::Error& e) {
    report(e.diagnostics(), "icpsdl");
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "icpsdl: internal error: " << e.what() << "\n";
    return 2;
  }
}
