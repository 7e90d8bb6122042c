// invstream: solver-driven abstract interpretation over (I, T) encodings
// of transition systems, streaming k-induction-confirmed invariants while
// the fixpoint computation is still running.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "invstream/domain.hpp"
#include "invstream/engine.hpp"
#include "invstream/errors.hpp"
#include "invstream/lustre.hpp"
#include "invstream/oracle.hpp"
#include "invstream/records.hpp"
#include "invstream/session.hpp"

using namespace invstream;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open input file `" + path + "`");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"invstream: on-the-fly invariant generation via solver-driven abstract interpretation"};

  std::string input_path;
  std::string domain_name = "product";
  std::string partition;
  int widen_delay = 4;
  std::string thresholds_opt = "auto";
  int kind_k = 2;
  std::string solver_path;
  std::string emit = "jsonl";
  long long max_iters = 10000;
  bool deterministic = false;
  std::string oracle_bounds;
  bool oracle_check = false;
  std::string prove_stream;
  std::string oracle_export;
  long long confirm_every = 1;
  bool strengthen_at_current = false;
  bool async_confirm = false;
  long long query_timeout = 120000;

  app.add_option("input", input_path, "input file (.lus or .ts)")->required();
  app.add_option("--domain", domain_name, "abstract domain: interval, template or product")
      ->check(CLI::IsMember({"interval", "template", "product"}));
  app.add_option("--partition", partition, "partition predicates, `;`-separated formulas");
  app.add_option("--widen-delay", widen_delay, "joins before widening starts");
  app.add_option("--thresholds", thresholds_opt, "auto | none | c1,c2,...");
  app.add_option("--kind-k", kind_k, "k for k-induction confirmation");
  app.add_option("--solver", solver_path, "SMT-LIB 2 solver executable");
  std::vector<std::string> solver_args;
  app.add_option("--solver-arg", solver_args, "extra argument passed to the solver (repeatable)");
  app.add_option("--emit", emit, "record format")->check(CLI::IsMember({"jsonl", "text"}));
  app.add_option("--max-iters", max_iters, "iteration budget");
  app.add_flag("--deterministic", deterministic, "lexicographic state choice (needs --oracle-bounds)");
  app.add_option("--oracle-bounds", oracle_bounds, "finite ranges, e.g. \"x=-1..5,y=0..3\"");
  app.add_flag("--oracle-check", oracle_check, "validate results against explicit-state reachability");
  app.add_option("--oracle-export", oracle_export,
                 "write the reachable state list to this file (with --oracle-check)");
  app.add_option("--prove", prove_stream, "treat this Bool stream as the target property");
  app.add_option("--confirm-every", confirm_every, "confirmation cadence in iterations");
  app.add_flag("--strengthen-at-current", strengthen_at_current, "also assert In[x] in step queries");
  app.add_flag("--async-confirm", async_confirm, "run the confirmer in a worker thread");
  app.add_option("--query-timeout", query_timeout, "per-query budget in milliseconds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 3;
  }

  try {
    // ---- frontend ----
    std::string text = read_file(input_path);
    TransitionSystem ts;
    bool is_lustre = input_path.size() > 4 && input_path.substr(input_path.size() - 4) == ".lus";
    if (is_lustre) {
      LustreProgram prog = parse_lustre(text);
      ts = translate(prog);
    } else {
      ts = parse_native(text);
    }

    // ---- domain ----
    std::vector<Term> predicates;
    if (!partition.empty()) {
      for (const std::string& f : split(partition, ';')) {
        if (f.empty()) continue;
        std::string src = f;
        if (src.find('(') == std::string::npos) {
          // allow plain infix-free shorthand like "y < n2"
          std::vector<std::string> parts;
          std::istringstream is(src);
          std::string w;
          while (is >> w) parts.push_back(w);
          if (parts.size() == 3) src = "(" + parts[1] + " " + parts[0] + " " + parts[2] + ")";
        }
        Term p = parse_term(src, ts.vars, false);
        if (typecheck(p, ts.vars) != Sort::Bool)
          throw ConfigError("partition predicate `" + f + "` is not Bool");
        predicates.push_back(p);
      }
    }
    dom::DomainKind kind = dom::DomainKind::Product;
    if (!predicates.empty()) {
      kind = dom::DomainKind::Partitioned;
    } else if (domain_name == "interval") {
      kind = dom::DomainKind::Interval;
    } else if (domain_name == "template") {
      kind = dom::DomainKind::Template;
    }
    dom::DomainSpecPtr spec = dom::DomainSpec::make(kind, ts.vars, predicates);

    // ---- engine config ----
    eng::EngineConfig cfg;
    cfg.widen_delay = widen_delay;
    cfg.max_iters = static_cast<size_t>(max_iters);
    cfg.kind_k = kind_k;
    cfg.confirm_every = confirm_every <= 0 ? 1 : static_cast<size_t>(confirm_every);
    cfg.strengthen_at_current = strengthen_at_current;
    cfg.async_confirm = async_confirm;
    if (thresholds_opt == "auto") {
      cfg.thresholds = collect_constants(ts);
    } else if (thresholds_opt != "none") {
      for (const std::string& c : split(thresholds_opt, ',')) {
        if (!c.empty()) cfg.thresholds.insert(Rational::from_string(c));
      }
    }
    if (deterministic) {
      if (oracle_bounds.empty())
        throw ConfigError("--deterministic requires --oracle-bounds");
      cfg.deterministic = true;
    }
    if (!oracle_bounds.empty()) cfg.det_bounds = parse_bounds(oracle_bounds);
    if (!prove_stream.empty()) {
      const Variable* v = ts.find(prove_stream);
      if (!v || v->sort != Sort::Bool)
        throw ConfigError("--prove: `" + prove_stream + "` is not a Bool stream of the system");
      cfg.standing = mk_eq(mk_var(v->name, Epoch::Current), mk_true());
    }

    // ---- sessions ----
    SolverConfig scfg = resolve_solver(solver_path, static_cast<int>(query_timeout));
    if (!solver_args.empty()) scfg.args = solver_args;
    Session engine_session = Session::open(scfg);
    Session confirm_session = Session::open(scfg);

    bool jsonl = emit == "jsonl";
    eng::EventSink sink = [&](const eng::Event& e) {
      std::cout << (jsonl ? rec::event_record(e, ts) : rec::event_text(e, ts)) << "\n";
      std::cout.flush();
    };

    eng::AnalysisResult result = eng::run(ts, spec, cfg, engine_session, confirm_session, sink);
    if (jsonl) std::cout << rec::stats_record(result) << "\n";

    // ---- post-run oracle validation ----
    size_t violations = 0;
    if (oracle_check) {
      if (oracle_bounds.empty()) throw ConfigError("--oracle-check requires --oracle-bounds");
      BoundsSpec b = parse_bounds(oracle_bounds);
      oracle::ReachResult reach = oracle::enumerate_reachable(ts, b, 2000000);
      size_t checked = 0;
      auto check_one = [&](const Term& p) {
        oracle::InvCheck c = oracle::check_invariant(p, ts, reach);
        ++checked;
        if (!c.holds) {
          ++violations;
          std::cerr << "oracle violation: " << term_str(p);
          if (c.violation) {
            std::cerr << " at state (";
            for (size_t i = 0; i < ts.vars.size(); ++i) {
              if (i) std::cerr << ", ";
              std::cerr << ts.vars[i].name << "=" << (*c.violation)[i].str();
            }
            std::cerr << ")";
          }
          std::cerr << "\n";
        }
      };
      if (result.final_element) check_one(dom::gamma(*result.final_element));
      for (const auto& [p, k] : result.confirmed) {
        (void)k;
        check_one(p);
      }
      if (jsonl)
        std::cout << rec::oracle_record(violations, checked, reach.states.size(), reach.complete)
                  << "\n";
      if (!oracle_export.empty()) {
        std::ofstream out(oracle_export);
        if (!out) throw ConfigError("cannot write `" + oracle_export + "`");
        for (size_t i = 0; i < ts.vars.size(); ++i) out << (i ? " " : "") << ts.vars[i].name;
        out << "\n";
        for (const State& st : reach.states) {
          for (size_t i = 0; i < st.size(); ++i) out << (i ? " " : "") << st[i].str();
          out << "\n";
        }
      }
    }

    if (violations > 0) return 4;
    if (!prove_stream.empty()) return result.property_proved ? 0 : (result.aborted ? 2 : 1);
    if (result.post_fixpoint) return 0;
    return 2;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
