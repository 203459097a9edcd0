#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "deligne_kit/session.hpp"

namespace dk {

using json = nlohmann::json;

inline constexpr std::string_view kReportSchema = "deligne-kit-report/1";

// Malformed report, or a report that belongs to another session.
class ReportError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Outcome { Pass, Fail, Exhausted, Obstruction };

std::string to_string(Outcome o);
Outcome outcome_from_string(std::string_view s);

struct TaskRecord {
  std::size_t index = 0;
  std::string task;  // canonical text of the task line
  std::string kind;
  Outcome outcome = Outcome::Fail;
  json bounds = json::object();
  json certificate = json::object();
  std::string error;  // set when the task raised a structural error
  std::string digest;
  double elapsed_ms = 0;

  // Everything except digest and elapsed_ms.
  json content() const;
  json to_json() const;
  static TaskRecord from_json(const json& j);
};

struct Report {
  std::string session_digest;
  std::vector<TaskRecord> records;

  json to_json() const;
  static Report from_json(const json& j);
};

std::string sha256_hex(std::string_view data);
std::string session_digest(const Session& s);

TaskRecord run_task(const Session& s, std::size_t index);
// Records come back in declaration order whatever the number of jobs.
Report run_session(const Session& s, unsigned jobs = 1);

// 0: every task passed, ended in the expected obstruction, or is an allowed
// exhaustion. 2: some task raised a structural error. 1 otherwise.
int exit_code(const Session& s, const Report& r);

struct ReplayResult {
  std::size_t index;
  bool verified;
  std::string message;
};

// Re-checks every certificate against the session by exact arithmetic and
// normal forms in the declared modules; nothing is searched for again.
// Throws ReportError when the report does not belong to the session.
std::vector<ReplayResult> replay_report(const Session& s, const Report& r);

}  // namespace dk
