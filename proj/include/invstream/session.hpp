#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "invstream/enumerate.hpp"
#include "invstream/smtlib.hpp"
#include "invstream/term.hpp"

namespace invstream {

struct SolverConfig {
  std::string path;
  std::vector<std::string> args;
  std::string logic = "QF_LIRA";
  int timeout_ms = 120000;  // per query
};

struct SatResult {
  enum class Kind { Sat, Unsat, Unknown };
  Kind kind = Kind::Unknown;
  State model;         // Sat only, aligned with the wanted list
  std::string reason;  // Unknown only

  bool sat() const { return kind == Kind::Sat; }
  bool unsat() const { return kind == Kind::Unsat; }
};

struct SessionStats {
  size_t checks = 0, sat = 0, unsat = 0, unknown = 0;
  long long wall_ms = 0;
};

// One external solver process speaking SMT-LIB 2 over stdin/stdout.
// Single-owner: calls must be externally serialized. Every query issued
// through check_with_model leaves the assertion stack as it found it.
class Session {
 public:
  static Session open(const SolverConfig& cfg);
  Session(Session&&) noexcept;
  Session& operator=(Session&&) noexcept;
  ~Session();

  // sorts used to render formulas and declare symbols on demand
  void set_vocabulary(const std::vector<Variable>& vars);

  void push();
  void pop();
  void declare(const VarOcc& v);
  void assert_term(const Term& t);

  enum class Answer { Sat, Unsat, Unknown };
  Answer check_sat();
  std::string last_unknown_reason() const { return unknown_reason_; }

  State get_values(const std::vector<VarOcc>& wanted);

  // push; declare f's variables; assert f; check; extract wanted values on
  // sat; pop. The wanted list may name variables not occurring in f (they
  // get declared and take arbitrary model values).
  SatResult check_with_model(const Term& f, const std::vector<VarOcc>& wanted);

  const SessionStats& stats() const { return stats_; }
  bool alive() const;

 private:
  Session() = default;
  void command(const std::string& line);        // expects a success ack
  std::string read_reply(int timeout_ms);
  Sort sort_of(const std::string& name) const;

  struct Proc;
  std::unique_ptr<Proc> proc_;
  SolverConfig cfg_;
  std::map<std::string, Sort> vocab_;
  std::vector<std::set<std::string>> declared_{{}};  // one set per stack level
  SessionStats stats_;
  std::string unknown_reason_;
};

// Resolution order: explicit path, INVSTREAM_SOLVER, a minismt binary next
// to the running executable, then z3/cvc5 on PATH. Returns a ready config
// or throws ConfigError.
SolverConfig resolve_solver(const std::string& explicit_path, int timeout_ms);

}  // namespace invstream
