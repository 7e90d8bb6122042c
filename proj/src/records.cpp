#include "invstream/records.hpp"

#include <sstream>

#include "json.hpp"

namespace invstream::rec {

using nlohmann::json;

namespace {

const char* kind_name(eng::Event::Kind k) {
  switch (k) {
    case eng::Event::Kind::InitAbstraction: return "init";
    case eng::Event::Kind::StateInjected: return "state";
    case eng::Event::Kind::Candidates: return "candidates";
    case eng::Event::Kind::InvariantConfirmed: return "invariant";
    case eng::Event::Kind::PostFixpoint: return "postfix";
    case eng::Event::Kind::Aborted: return "abort";
  }
  return "?";
}

}  // namespace

std::string event_record(const eng::Event& e, const TransitionSystem& ts) {
  json j;
  j["event"] = kind_name(e.kind);
  switch (e.kind) {
    case eng::Event::Kind::InitAbstraction:
      j["element"] = dom::render(*e.element);
      break;
    case eng::Event::Kind::StateInjected: {
      j["iter"] = e.iteration;
      json vals = json::object();
      for (size_t i = 0; i < ts.vars.size(); ++i) vals[ts.vars[i].name] = e.state[i].str();
      j["values"] = std::move(vals);
      j["element"] = dom::render(*e.element);
      break;
    }
    case eng::Event::Kind::Candidates: {
      j["iter"] = e.iteration;
      json fs = json::array();
      for (const Term& t : e.formulas) fs.push_back(term_str(t));
      j["formulas"] = std::move(fs);
      break;
    }
    case eng::Event::Kind::InvariantConfirmed:
      j["iter"] = e.iteration;
      j["formula"] = term_str(e.formula);
      j["k"] = e.k;
      break;
    case eng::Event::Kind::PostFixpoint:
      j["iter"] = e.iteration;
      j["element"] = dom::render(*e.element);
      break;
    case eng::Event::Kind::Aborted:
      j["reason"] = e.reason;
      break;
  }
  return j.dump();
}

std::string event_text(const eng::Event& e, const TransitionSystem& ts) {
  std::ostringstream os;
  switch (e.kind) {
    case eng::Event::Kind::InitAbstraction:
      os << "init      " << dom::render(*e.element);
      break;
    case eng::Event::Kind::StateInjected: {
      os << "state     #" << e.iteration << " (";
      for (size_t i = 0; i < ts.vars.size(); ++i) {
        if (i) os << ", ";
        os << ts.vars[i].name << "=" << e.state[i].str();
      }
      os << ")";
      break;
    }
    case eng::Event::Kind::Candidates:
      os << "candidates #" << e.iteration << " [" << e.formulas.size() << " formulas]";
      break;
    case eng::Event::Kind::InvariantConfirmed:
      os << "invariant #" << e.iteration << " " << term_str(e.formula) << "  (k=" << e.k << ")";
      break;
    case eng::Event::Kind::PostFixpoint:
      os << "postfix   #" << e.iteration << " " << dom::render(*e.element);
      break;
    case eng::Event::Kind::Aborted:
      os << "abort     " << e.reason;
      break;
  }
  return os.str();
}

std::string stats_record(const eng::AnalysisResult& r) {
  json j;
  j["event"] = "stats";
  j["iterations"] = r.iterations;
  j["engine_checks"] = r.engine_stats.checks;
  j["confirm_checks"] = r.confirm_stats.checks;
  j["sat"] = r.engine_stats.sat + r.confirm_stats.sat;
  j["unsat"] = r.engine_stats.unsat + r.confirm_stats.unsat;
  j["unknown"] = r.engine_stats.unknown + r.confirm_stats.unknown;
  j["wall_ms"] = r.engine_stats.wall_ms + r.confirm_stats.wall_ms;
  j["confirmed"] = r.confirmed.size();
  j["post_fixpoint"] = r.post_fixpoint;
  return j.dump();
}

std::string oracle_record(size_t violations, size_t checked, size_t reach_states, bool complete) {
  json j;
  j["event"] = "oracle";
  j["violations"] = violations;
  j["checked"] = checked;
  j["reach_states"] = reach_states;
  j["complete"] = complete;
  return j.dump();
}

std::vector<Replayed> replay(const std::string& jsonl) {
  std::vector<Replayed> out;
  std::istringstream is(jsonl);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    Replayed r;
    r.event = j.at("event").get<std::string>();
    if (r.event == "stats" || r.event == "oracle" || r.event == "proved") continue;
    if (j.contains("iter")) r.iter = j["iter"].get<size_t>();
    if (j.contains("element")) r.element = j["element"].get<std::string>();
    if (j.contains("values")) {
      for (auto it = j["values"].begin(); it != j["values"].end(); ++it)
        r.values.emplace_back(it.key(), it.value().get<std::string>());
    }
    if (j.contains("formulas")) {
      for (const auto& f : j["formulas"]) r.formulas.push_back(f.get<std::string>());
    }
    if (j.contains("formula")) r.formula = j["formula"].get<std::string>();
    if (j.contains("k")) r.k = j["k"].get<int>();
    if (j.contains("reason")) r.reason = j["reason"].get<std::string>();
    out.push_back(std::move(r));
  }
  return out;
}

bool replay_matches(const std::string& jsonl, const eng::AnalysisResult& r,
                    const TransitionSystem& ts, const dom::DomainSpecPtr& spec,
                    std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  std::vector<Replayed> replayed = replay(jsonl);
  if (replayed.size() != r.events.size())
    return fail("record count " + std::to_string(replayed.size()) + " vs " +
                std::to_string(r.events.size()) + " events");
  for (size_t i = 0; i < replayed.size(); ++i) {
    const Replayed& a = replayed[i];
    const eng::Event& b = r.events[i];
    if (a.event != kind_name(b.kind)) return fail("event kind mismatch at " + std::to_string(i));
    if (a.iter != b.iteration && b.kind != eng::Event::Kind::InitAbstraction &&
        b.kind != eng::Event::Kind::Aborted)
      return fail("iteration mismatch at " + std::to_string(i));
    if (!a.element.empty()) {
      dom::AbstractElement parsed = dom::parse_element(spec, a.element);
      if (!dom::elem_equal(parsed, *b.element)) return fail("element mismatch at " + std::to_string(i));
    }
    if (b.kind == eng::Event::Kind::StateInjected) {
      if (a.values.size() != ts.vars.size()) return fail("value arity mismatch at " + std::to_string(i));
      for (const auto& [name, text] : a.values) {
        int idx = ts.index_of(name);
        if (idx < 0) return fail("unknown variable in record at " + std::to_string(i));
        if (b.state[static_cast<size_t>(idx)].str() != text)
          return fail("value mismatch for " + name + " at " + std::to_string(i));
      }
    }
    if (b.kind == eng::Event::Kind::Candidates) {
      if (a.formulas.size() != b.formulas.size()) return fail("formula count mismatch at " + std::to_string(i));
      for (size_t f = 0; f < a.formulas.size(); ++f) {
        if (a.formulas[f] != term_str(b.formulas[f]))
          return fail("candidate formula mismatch at " + std::to_string(i));
      }
    }
    if (b.kind == eng::Event::Kind::InvariantConfirmed) {
      if (a.formula != term_str(b.formula) || a.k != b.k)
        return fail("invariant record mismatch at " + std::to_string(i));
    }
  }
  return true;
}

}  // namespace invstream::rec
