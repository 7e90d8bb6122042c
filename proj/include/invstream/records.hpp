#pragma once

#include <string>
#include <vector>

#include "invstream/engine.hpp"

namespace invstream::rec {

// One line per analysis event, schema:
//   {"event":"init","element":"..."}
//   {"event":"state","iter":N,"values":{"x":"2","y":"1/2",...}}
//   {"event":"candidates","iter":N,"formulas":[...]}
//   {"event":"invariant","iter":N,"formula":"...","k":2}
//   {"event":"postfix","iter":N,"element":"..."}
//   {"event":"abort","reason":"..."}
// Values are decimal or p/q strings; formulas and elements use their
// exact textual forms, so a stream replays into the in-process result.
std::string event_record(const eng::Event& e, const TransitionSystem& ts);

std::string event_text(const eng::Event& e, const TransitionSystem& ts);  // --emit text

std::string stats_record(const eng::AnalysisResult& r);
std::string oracle_record(size_t violations, size_t checked, size_t reach_states, bool complete);

struct Replayed {
  std::string event;
  size_t iter = 0;
  std::string element;
  std::vector<std::pair<std::string, std::string>> values;
  std::vector<std::string> formulas;
  std::string formula;
  int k = 0;
  std::string reason;
};

std::vector<Replayed> replay(const std::string& jsonl);

// replays the record stream and checks it against the in-process result,
// element texts parsed back and compared structurally
bool replay_matches(const std::string& jsonl, const eng::AnalysisResult& r,
                    const TransitionSystem& ts, const dom::DomainSpecPtr& spec,
                    std::string* why = nullptr);

}  // namespace invstream::rec
