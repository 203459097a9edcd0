#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "deligne_kit/groebner.hpp"

namespace dk {

/// Errors raised while reading a session; line and column are 1-based.
class SessionError : public std::runtime_error {
 public:
  SessionError(const std::string& what, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

class ParseError : public SessionError {
  using SessionError::SessionError;
};
class NameError : public SessionError {
  using SessionError::SessionError;
};
class DimensionError : public SessionError {
  using SessionError::SessionError;
};

struct RingDecl {
  RingPtr ring;
  std::vector<Poly> defining;
};

struct ModuleDecl {
  std::string name;
  std::size_t rank = 0;
  bool free = false;
  std::vector<std::vector<Poly>> rows;  // coker of this rank x s matrix

  std::vector<Vector> relation_columns() const;
};

struct IdealDecl {
  std::string name;
  bool sequence = false;
  std::vector<Poly> gens;
};

struct ProZeroTask {
  std::string sequence, module = "R";
  int degree = 1;
  std::uint32_t from = 1, cap = 1;
  bool allow_exhausted = false;

  bool operator==(const ProZeroTask&) const = default;
};

struct RoundtripTask {
  std::string ideal, module;
  std::uint32_t samples = 0;
  std::uint64_t seed = 0;
  std::uint32_t stage = 1, probes = 5;

  bool operator==(const RoundtripTask&) const = default;
};

struct SheafTask {
  std::string ideal, module;
  std::uint32_t samples = 0;
  std::uint64_t seed = 0;

  bool operator==(const SheafTask&) const = default;
};

struct DiagramTask {
  std::string ideal, module;
  std::uint32_t samples = 0;
  std::uint64_t seed = 0;

  bool operator==(const DiagramTask&) const = default;
};

struct IdealizationTask {
  std::vector<int> poles;
  std::uint32_t cap = 1;

  bool operator==(const IdealizationTask&) const = default;
};

using Task = std::variant<ProZeroTask, RoundtripTask, SheafTask, DiagramTask, IdealizationTask>;

std::string task_kind(const Task& t);

class Session {
 public:
  const RingDecl& ring() const { return ring_; }
  QuotientRing quotient_ring() const { return QuotientRing(ring_.ring, ring_.defining); }
  const std::vector<ModuleDecl>& modules() const { return modules_; }
  const std::vector<IdealDecl>& ideals() const { return ideals_; }
  const std::vector<Task>& tasks() const { return tasks_; }

  // "R" is the ring itself.
  FpModule module(const std::string& name) const;
  const IdealDecl& ideal(const std::string& name) const;

  std::string print() const;
  std::string print_task(std::size_t index) const;
  bool operator==(const Session& o) const;

 private:
  friend class SessionParser;
  RingDecl ring_;
  std::vector<ModuleDecl> modules_;
  std::vector<IdealDecl> ideals_;
  std::vector<Task> tasks_;
};

Session parse_session(std::string_view text);

}  // namespace dk
