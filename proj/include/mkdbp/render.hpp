#pragma once

#include "mkdbp/analysis.hpp"
#include "mkdbp/sim.hpp"

#include <string>

namespace mkdbp {

const char* to_string(EventKind kind);

// One line per event: "t=<time> <kind> <task> job=<j> seq=<bits> d=<distance>",
// omitting the fields an event does not carry (idle has no task, arrival
// and start no sequence).
std::string render_trace_text(const Trace& trace, const TaskSet& ts);

// Array of event objects with exactly the keys time, kind, task, job,
// seq, d; inapplicable fields are null. Byte-stable for identical input.
std::string render_trace_json(const Trace& trace, const TaskSet& ts);

// ASCII timeline, one row per task and one column per time unit:
// '#' executing, '.' idle, '!' deadline miss, 'X' constraint violation.
// After a violation the rows end one column past the violation instant.
std::string render_trace_gantt(const Trace& trace, const TaskSet& ts, std::int64_t horizon);

std::string render_verdict_text(const Verdict& v, const TaskSet& ts);
std::string render_verdict_json(const Verdict& v, const TaskSet& ts);

/// "P=", "max=" (state bound) and "interval=[0,max*P)" lines.
std::string render_bound_text(const TaskSet& ts);

std::string render_search_text(const InitSearchReport& report, SearchSpace space,
                               SearchMode mode);

} // namespace mkdbp
