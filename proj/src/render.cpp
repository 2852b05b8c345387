#include "mkdbp/render.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

namespace mkdbp {

namespace {

using json = nlohmann::ordered_json;

const TraceEvent* find_violation(const Trace& trace) {
    for (const TraceEvent& e : trace)
        if (e.kind == EventKind::violation) return &e;
    return nullptr;
}

} // namespace

const char* to_string(EventKind kind) {
    switch (kind) {
    case EventKind::arrival: return "arrival";
    case EventKind::start: return "start";
    case EventKind::completion: return "completion";
    case EventKind::miss: return "miss";
    case EventKind::violation: return "violation";
    case EventKind::idle: return "idle";
    }
    return "idle";
}

std::string render_trace_text(const Trace& trace, const TaskSet& ts) {
    std::ostringstream out;
    for (const TraceEvent& e : trace) {
        out << "t=" << e.time << ' ' << to_string(e.kind);
        if (e.task_index >= 0)
            out << ' ' << ts.tasks[static_cast<std::size_t>(e.task_index)].name << " job="
                << e.job_index;
        if (e.sequence_after)
            out << " seq=" << e.sequence_after->to_string() << " d=" << e.distance_after;
        out << '\n';
    }
    return out.str();
}

std::string render_trace_json(const Trace& trace, const TaskSet& ts) {
    json arr = json::array();
    for (const TraceEvent& e : trace) {
        json obj;
        obj["time"] = e.time;
        obj["kind"] = to_string(e.kind);
        if (e.task_index >= 0) {
            obj["task"] = ts.tasks[static_cast<std::size_t>(e.task_index)].name;
            obj["job"] = e.job_index;
        } else {
            obj["task"] = nullptr;
            obj["job"] = nullptr;
        }
        if (e.sequence_after) {
            obj["seq"] = e.sequence_after->to_string();
            obj["d"] = e.distance_after;
        } else {
            obj["seq"] = nullptr;
            obj["d"] = nullptr;
        }
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

std::string render_trace_gantt(const Trace& trace, const TaskSet& ts, std::int64_t horizon) {
    const TraceEvent* violation = find_violation(trace);
    // Nothing runs once a violation stops the simulation, so rows end one
    // column past it (that column carries the 'X').
    const std::int64_t width = violation ? violation->time + 1 : horizon;
    const std::int64_t exec_end = violation ? violation->time : horizon;

    std::vector<std::string> rows(ts.tasks.size(),
                                  std::string(static_cast<std::size_t>(width), '.'));
    auto row_of = [&](int task) -> std::string& {
        return rows[static_cast<std::size_t>(task)];
    };

    for (const TraceEvent& e : trace) {
        if (e.kind == EventKind::start) {
            const std::int64_t from = e.time;
            const std::int64_t to =
                std::min(e.time + ts.tasks[static_cast<std::size_t>(e.task_index)].wcet, exec_end);
            for (std::int64_t t = from; t < to; ++t)
                row_of(e.task_index)[static_cast<std::size_t>(t)] = '#';
        } else if (e.kind == EventKind::miss && e.time < width) {
            char& cell = row_of(e.task_index)[static_cast<std::size_t>(e.time)];
            if (cell == '.') cell = '!';
        }
    }
    if (violation)
        row_of(violation->task_index)[static_cast<std::size_t>(violation->time)] = 'X';

    std::size_t name_width = 0;
    for (const Task& t : ts.tasks) name_width = std::max(name_width, t.name.size());

    std::ostringstream out;
    for (std::size_t i = 0; i < ts.tasks.size(); ++i) {
        out << ts.tasks[i].name << std::string(name_width - ts.tasks[i].name.size(), ' ')
            << " |" << rows[i] << '\n';
    }
    return out.str();
}

std::string render_verdict_text(const Verdict& v, const TaskSet& ts) {
    std::ostringstream out;
    if (v.outcome == Outcome::feasible) {
        out << "outcome: feasible\n";
        out << "transient_start: " << v.transient_start << '\n';
        out << "period: " << v.period << '\n';
    } else {
        out << "outcome: infeasible\n";
        out << "violation_time: " << v.violation_time << '\n';
        out << "violating_task: " << ts.tasks[static_cast<std::size_t>(v.violating_task)].name
            << '\n';
        out << "violating_sequence: " << v.violating_sequence.to_string() << '\n';
    }
    out << "hyperperiod: " << v.hyperperiod << '\n';
    return out.str();
}

std::string render_verdict_json(const Verdict& v, const TaskSet& ts) {
    json obj;
    if (v.outcome == Outcome::feasible) {
        obj["outcome"] = "feasible";
        obj["transient_start"] = v.transient_start;
        obj["period"] = v.period;
    } else {
        obj["outcome"] = "infeasible";
        obj["violation_time"] = v.violation_time;
        obj["violating_task"] = ts.tasks[static_cast<std::size_t>(v.violating_task)].name;
        obj["violating_sequence"] = v.violating_sequence.to_string();
    }
    obj["hyperperiod"] = v.hyperperiod;
    return obj.dump(2) + "\n";
}

std::string render_bound_text(const TaskSet& ts) {
    const std::int64_t p = hyperperiod(ts);
    const std::int64_t bound = state_bound(ts);
    const std::int64_t interval = checked_mul(bound, p, "feasibility interval");
    std::ostringstream out;
    out << "P=" << p << '\n';
    out << "max=" << bound << '\n';
    out << "interval=[0," << interval << ")\n";
    return out.str();
}

std::string render_search_text(const InitSearchReport& report, SearchSpace space,
                               SearchMode mode) {
    std::ostringstream out;
    out << "space=" << (space == SearchSpace::all ? "all" : "valid") << '\n';
    out << "mode=" << (mode == SearchMode::all ? "all" : "first") << '\n';
    out << "candidates=" << report.total_candidates << '\n';
    out << "default 1^k: " << (report.default_feasible ? "feasible" : "infeasible") << '\n';
    for (const std::vector<KSequence>& assignment : report.feasible_assignments) {
        out << "feasible:";
        for (const KSequence& w : assignment) out << ' ' << w.to_string();
        out << '\n';
    }
    out << "found=" << report.feasible_assignments.size() << '\n';
    return out.str();
}

} // namespace mkdbp
