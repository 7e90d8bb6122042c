#include "invstream/session.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <filesystem>
#include <stdexcept>

#include "invstream/errors.hpp"

namespace invstream {

namespace {

bool executable_file(const std::string& p) {
  struct stat st{};
  return ::stat(p.c_str(), &st) == 0 && S_ISREG(st.st_mode) && ::access(p.c_str(), X_OK) == 0;
}

std::string find_on_path(const std::string& name) {
  const char* path = ::getenv("PATH");
  if (!path) return {};
  std::string p(path);
  size_t pos = 0;
  while (pos <= p.size()) {
    size_t colon = p.find(':', pos);
    std::string dir = p.substr(pos, colon == std::string::npos ? std::string::npos : colon - pos);
    if (!dir.empty()) {
      std::string cand = dir + "/" + name;
      if (executable_file(cand)) return cand;
    }
    if (colon == std::string::npos) break;
    pos = colon + 1;
  }
  return {};
}

std::string own_executable_dir() {
  char buf[4096];
  ssize_t n = ::readlink("/proc/self/exe", buf, sizeof(buf) - 1);
  if (n <= 0) return {};
  buf[n] = 0;
  std::filesystem::path p(buf);
  return p.parent_path().string();
}

}  // namespace

struct Session::Proc {
  pid_t pid = -1;
  int to_child = -1;    // we write commands here
  int from_child = -1;  // we read replies here
  std::string buf;
  size_t buf_pos = 0;
  bool dead = false;

  ~Proc() { shutdown(true); }

  void shutdown(bool force) {
    if (to_child >= 0) {
      ::close(to_child);
      to_child = -1;
    }
    if (from_child >= 0) {
      ::close(from_child);
      from_child = -1;
    }
    if (pid > 0) {
      int status = 0;
      for (int i = 0; i < 50; ++i) {
        pid_t r = ::waitpid(pid, &status, WNOHANG);
        if (r == pid) {
          pid = -1;
          return;
        }
        ::usleep(2000);
      }
      if (force) ::kill(pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      pid = -1;
    }
  }

  void write_all(const std::string& s) {
    if (dead || to_child < 0) throw SolverError("solver process is gone");
    size_t off = 0;
    while (off < s.size()) {
      ssize_t n = ::write(to_child, s.data() + off, s.size() - off);
      if (n < 0) {
        if (errno == EINTR) continue;
        dead = true;
        throw SolverError(std::string("write to solver failed: ") + std::strerror(errno));
      }
      off += static_cast<size_t>(n);
    }
  }

  // reads one whitespace-separated token or one balanced s-expression
  std::string read_token(int timeout_ms) {
    auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
    std::string out;
    int depth = 0;
    bool started = false;
    while (true) {
      while (buf_pos < buf.size()) {
        char c = buf[buf_pos];
        if (!started) {
          if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            ++buf_pos;
            continue;
          }
          started = true;
        }
        if (depth == 0 && started && !out.empty() && out[0] != '(' &&
            (c == ' ' || c == '\t' || c == '\r' || c == '\n')) {
          ++buf_pos;
          return out;
        }
        out.push_back(c);
        ++buf_pos;
        if (c == '(') {
          ++depth;
        } else if (c == ')') {
          --depth;
          if (depth == 0 && out[0] == '(') return out;
        }
      }
      // need more data
      auto now = std::chrono::steady_clock::now();
      if (now >= deadline) throw SolverError("timeout");
      int wait_ms = static_cast<int>(
          std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count());
      struct pollfd pf{from_child, POLLIN, 0};
      int pr = ::poll(&pf, 1, wait_ms < 1 ? 1 : wait_ms);
      if (pr < 0) {
        if (errno == EINTR) continue;
        dead = true;
        throw SolverError(std::string("poll on solver failed: ") + std::strerror(errno));
      }
      if (pr == 0) throw SolverError("timeout");
      char chunk[4096];
      ssize_t n = ::read(from_child, chunk, sizeof(chunk));
      if (n <= 0) {
        dead = true;
        throw SolverError("solver closed its output stream");
      }
      if (buf_pos > 0) {
        buf.erase(0, buf_pos);
        buf_pos = 0;
      }
      buf.append(chunk, static_cast<size_t>(n));
    }
  }
};

Session Session::open(const SolverConfig& cfg) {
  if (!executable_file(cfg.path))
    throw SolverError("cannot spawn solver: `" + cfg.path + "` is not an executable file");
  if (cfg.timeout_ms <= 0) throw ConfigError("solver time budget must be positive");
  // writes to a crashed solver must surface as EPIPE, not kill us
  ::signal(SIGPIPE, SIG_IGN);

  int in_pipe[2], out_pipe[2];
  if (::pipe(in_pipe) != 0 || ::pipe(out_pipe) != 0)
    throw SolverError("pipe creation failed");

  pid_t pid = ::fork();
  if (pid < 0) throw SolverError("fork failed");
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    int devnull = ::open("/dev/null", O_WRONLY);
    if (devnull >= 0) ::dup2(devnull, STDERR_FILENO);
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    std::vector<char*> argv;
    argv.push_back(const_cast<char*>(cfg.path.c_str()));
    for (const std::string& a : cfg.args) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    ::execv(cfg.path.c_str(), argv.data());
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);

  Session s;
  s.cfg_ = cfg;
  s.proc_ = std::make_unique<Proc>();
  s.proc_->pid = pid;
  s.proc_->to_child = in_pipe[1];
  s.proc_->from_child = out_pipe[0];

  try {
    s.command("(set-option :print-success true)");
    s.command("(set-option :produce-models true)");
    s.command("(set-logic " + cfg.logic + ")");
  } catch (const SolverError& e) {
    throw SolverError(std::string("protocol handshake with `") + cfg.path + "` failed: " + e.what());
  }
  return s;
}

Session::Session(Session&&) noexcept = default;
Session& Session::operator=(Session&&) noexcept = default;

Session::~Session() {
  if (proc_ && !proc_->dead && proc_->to_child >= 0) {
    try {
      proc_->write_all("(exit)\n");
    } catch (...) {
    }
  }
}

bool Session::alive() const { return proc_ && !proc_->dead; }

void Session::set_vocabulary(const std::vector<Variable>& vars) {
  for (const Variable& v : vars) vocab_[v.name] = v.sort;
}

Sort Session::sort_of(const std::string& name) const {
  auto it = vocab_.find(name);
  if (it == vocab_.end()) throw Error("session: variable `" + name + "` is not in the vocabulary");
  return it->second;
}

std::string Session::read_reply(int timeout_ms) {
  std::string r = proc_->read_token(timeout_ms);
  if (r.rfind("(error", 0) == 0) throw SolverError("solver error reply: " + r);
  return r;
}

void Session::command(const std::string& line) {
  proc_->write_all(line + "\n");
  std::string r = read_reply(cfg_.timeout_ms);
  if (r != "success" && r != "unsupported")
    throw SolverError("unexpected solver reply `" + r + "` to `" + line + "`");
}

void Session::push() {
  command("(push 1)");
  declared_.push_back({});
}

void Session::pop() {
  if (declared_.size() <= 1) throw Error("session: pop below the base level");
  command("(pop 1)");
  declared_.pop_back();
}

void Session::declare(const VarOcc& v) {
  std::string n = smt_name(v);
  for (const auto& level : declared_) {
    if (level.count(n)) return;
  }
  command("(declare-fun " + n + " () " + emit_sort(sort_of(v.name)) + ")");
  declared_.back().insert(n);
}

void Session::assert_term(const Term& t) {
  std::vector<VarOcc> vs;
  collect_vars(t, vs);
  for (const VarOcc& v : vs) declare(v);
  auto lookup = [this](const std::string& n) -> std::optional<Sort> {
    auto it = vocab_.find(n);
    if (it == vocab_.end()) return std::nullopt;
    return it->second;
  };
  command("(assert " + emit_formula(t, lookup) + ")");
}

Session::Answer Session::check_sat() {
  auto t0 = std::chrono::steady_clock::now();
  proc_->write_all("(check-sat)\n");
  std::string r;
  try {
    r = read_reply(cfg_.timeout_ms);
  } catch (const SolverError& e) {
    if (std::string(e.what()) == "timeout") {
      ++stats_.checks;
      ++stats_.unknown;
      unknown_reason_ = "timeout";
      proc_->dead = true;
      proc_->shutdown(true);
      return Answer::Unknown;
    }
    throw;
  }
  auto t1 = std::chrono::steady_clock::now();
  ++stats_.checks;
  stats_.wall_ms += std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
  if (r == "sat") {
    ++stats_.sat;
    return Answer::Sat;
  }
  if (r == "unsat") {
    ++stats_.unsat;
    return Answer::Unsat;
  }
  if (r == "unknown") {
    ++stats_.unknown;
    unknown_reason_ = "solver reported unknown";
    return Answer::Unknown;
  }
  throw SolverError("unexpected check-sat reply `" + r + "`");
}

State Session::get_values(const std::vector<VarOcc>& wanted) {
  if (wanted.empty()) return {};
  std::string q = "(get-value (";
  for (size_t i = 0; i < wanted.size(); ++i) {
    if (i) q += ' ';
    q += smt_name(wanted[i]);
  }
  q += "))";
  proc_->write_all(q + "\n");
  std::string r = read_reply(cfg_.timeout_ms);
  if (r.rfind("(error", 0) == 0) throw SolverError("get-value error: " + r);
  Sexp reply = parse_one_sexpr(r);
  if (reply.is_atom || reply.size() != wanted.size())
    throw SolverError("malformed get-value reply: " + r);
  State out;
  out.reserve(wanted.size());
  for (size_t i = 0; i < wanted.size(); ++i) {
    const Sexp& pair = reply[i];
    if (pair.is_atom || pair.size() != 2) throw SolverError("malformed get-value pair: " + pair.str());
    Value v = parse_value(pair[1]);
    Sort s = sort_of(wanted[i].name);
    if (v.is_bool() != (s == Sort::Bool))
      throw SolverError("model value for `" + wanted[i].name + "` has the wrong sort");
    if (s == Sort::Int && !v.as_rational().is_integer())
      throw SolverError("non-integral model value for Int variable `" + wanted[i].name + "`");
    out.push_back(std::move(v));
  }
  return out;
}

SatResult Session::check_with_model(const Term& f, const std::vector<VarOcc>& wanted) {
  push();
  SatResult res;
  try {
    for (const VarOcc& w : wanted) declare(w);
    assert_term(f);
    Answer a = check_sat();
    if (a == Answer::Sat) {
      res.kind = SatResult::Kind::Sat;
      res.model = get_values(wanted);
    } else if (a == Answer::Unsat) {
      res.kind = SatResult::Kind::Unsat;
    } else {
      res.kind = SatResult::Kind::Unknown;
      res.reason = unknown_reason_;
      if (!alive()) return res;  // no stack left to restore
    }
  } catch (...) {
    if (alive()) pop();
    throw;
  }
  pop();
  return res;
}

SolverConfig resolve_solver(const std::string& explicit_path, int timeout_ms) {
  SolverConfig cfg;
  cfg.timeout_ms = timeout_ms;
  std::string path = explicit_path;
  if (path.empty()) {
    const char* env = ::getenv("INVSTREAM_SOLVER");
    if (env && *env) path = env;
  }
  if (path.empty()) {
    std::string dir = own_executable_dir();
    if (!dir.empty()) {
      for (const char* cand : {"minismt", "../minismt/minismt"}) {
        std::string p = dir + "/" + cand;
        if (executable_file(p)) {
          path = p;
          break;
        }
      }
    }
  }
  if (path.empty()) path = find_on_path("minismt");
  if (path.empty()) {
    std::string z3 = find_on_path("z3");
    if (!z3.empty()) {
      cfg.path = z3;
      cfg.args = {"-in"};
      return cfg;
    }
    std::string cvc5 = find_on_path("cvc5");
    if (!cvc5.empty()) {
      cfg.path = cvc5;
      cfg.args = {"--incremental"};
      return cfg;
    }
    throw ConfigError(
        "no solver found: pass --solver, set INVSTREAM_SOLVER, or install minismt/z3/cvc5");
  }
  cfg.path = path;
  std::string base = std::filesystem::path(path).filename().string();
  if (base.rfind("z3", 0) == 0) cfg.args = {"-in"};
  if (base.rfind("cvc5", 0) == 0 || base.rfind("cvc4", 0) == 0) cfg.args = {"--incremental"};
  return cfg;
}

}  // namespace invstream
