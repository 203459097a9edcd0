#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "deligne_kit/report.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* error_kind(const dk::SessionError& e) {
  if (dynamic_cast<const dk::NameError*>(&e)) return "name error";
  if (dynamic_cast<const dk::DimensionError*>(&e)) return "dimension error";
  return "syntax error";
}

int replay(const dk::Session& session, const std::string& path) {
  dk::Report report;
  try {
    report = dk::Report::from_json(dk::json::parse(slurp(path)));
  } catch (const dk::json::parse_error& e) {
    std::cerr << path << ": not a JSON document: " << e.what() << "\n";
    return 2;
  }
  auto results = dk::replay_report(session, report);
  int code = 0;
  for (const auto& r : results) {
    const auto& rec = report.records[r.index];
    std::cout << "[" << r.index << "] " << rec.kind << ": " << (r.verified ? "" : "FAILED: ") << r.message << "\n";
    if (!r.verified) code = 1;
  }
  return code;
}

int run(const dk::Session& session, unsigned jobs, const std::string& output) {
  auto report = dk::run_session(session, jobs);
  const std::string doc = report.to_json().dump(2) + "\n";
  if (output.empty()) {
    std::cout << doc;
  } else {
    std::ofstream out(output, std::ios::binary);
    if (!(out << doc)) throw std::runtime_error("cannot write " + output);
  }
  for (const auto& rec : report.records) {
    std::cerr << "[" << rec.index << "] " << rec.kind << ": " << dk::to_string(rec.outcome);
    if (!rec.error.empty()) std::cerr << " (" << rec.error << ")";
    std::cerr << "  " << static_cast<long long>(rec.elapsed_ms) << " ms\n";
  }
  return dk::exit_code(session, report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact checks for ideal transforms, Cech cocycles and Koszul pro-systems"};
  app.require_subcommand(1);
  auto* cmd = app.add_subcommand("run", "Run the tasks of a session file and print a JSON report");
  std::string file, replay_path, output;
  unsigned jobs = 1;
  cmd->add_option("file", file, "Session file")->required();
  cmd->add_option("--replay", replay_path, "Re-verify the certificates of an earlier report instead of running");
  cmd->add_option("--jobs,-j", jobs, "Tasks to run concurrently")->check(CLI::Range(1u, 256u));
  cmd->add_option("--output,-o", output, "Write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    auto session = dk::parse_session(slurp(file));
    return replay_path.empty() ? run(session, jobs, output) : replay(session, replay_path);
  } catch (const dk::SessionError& e) {
    std::cerr << file << ":" << e.what() << " [" << error_kind(e) << "]\n";
  } catch (const dk::ReportError& e) {
    std::cerr << replay_path << ": " << e.what() << "\n";
  } catch (const dk::StructuralError& e) {
    std::cerr << "structural error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 2;
}
