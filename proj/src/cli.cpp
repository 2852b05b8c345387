#include "mkdbp/cli.hpp"

#include "mkdbp/analysis.hpp"
#include "mkdbp/render.hpp"
#include "mkdbp/taskset_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace mkdbp {

namespace {

constexpr std::int64_t max_search_candidates = 1'000'000;
constexpr std::int64_t max_gantt_horizon = 200;

// Candidate count without materializing the candidates, so oversized
// spaces are rejected cheaply.
std::int64_t candidate_count(const TaskSet& ts, SearchSpace space) {
    std::int64_t total = 1;
    for (const Task& t : ts.tasks) {
        std::int64_t c = 0;
        if (space == SearchSpace::all) {
            if (t.k > 62) throw std::overflow_error("candidate count exceeds 64-bit range");
            c = std::int64_t{1} << t.k;
        } else {
            c = count_valid_sequences(t.m, t.k);
        }
        total = checked_mul(total, c, "candidate count");
    }
    return total;
}

} // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact schedulability analyzer and simulator for (m,k)-firm "
                 "task sets under distance based priority"};
    app.name("mkdbp");
    app.require_subcommand(1);

    std::string file;
    std::string format = "text";
    std::string space = "valid";
    std::string mode = "first";
    std::int64_t horizon = 0;
    int jobs = 1;

    CLI::App* cmd_analyze = app.add_subcommand("analyze", "Exact schedulability test");
    cmd_analyze->add_option("file", file, "task set document")->required();
    cmd_analyze->add_option("--format", format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));

    CLI::App* cmd_simulate =
        app.add_subcommand("simulate", "Build the schedule and print its trace");
    cmd_simulate->add_option("file", file, "task set document")->required();
    cmd_simulate->add_option("--horizon", horizon, "time units to simulate")->required();
    cmd_simulate->add_option("--format", format, "text, json or gantt")
        ->check(CLI::IsMember({"text", "json", "gantt"}));

    CLI::App* cmd_bound =
        app.add_subcommand("bound", "Print hyper-period, state bound and feasibility interval");
    cmd_bound->add_option("file", file, "task set document")->required();

    CLI::App* cmd_search =
        app.add_subcommand("search", "Brute-force search over initial sequences");
    cmd_search->add_option("file", file, "task set document")->required();
    cmd_search->add_option("--space", space, "valid or all")
        ->check(CLI::IsMember({"valid", "all"}));
    cmd_search->add_option("--mode", mode, "first or all")
        ->check(CLI::IsMember({"first", "all"}));
    cmd_search->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

    try {
        std::reverse(args.begin(), args.end()); // CLI11 consumes back to front
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*cmd_analyze) {
            const TaskSet ts = load_taskset_file(file);
            const Verdict v = exact_test(ts);
            out << (format == "json" ? render_verdict_json(v, ts) : render_verdict_text(v, ts));
            return v.outcome == Outcome::feasible ? 0 : 1;
        }
        if (*cmd_simulate) {
            if (horizon <= 0) {
                err << "horizon must be positive\n";
                return 2;
            }
            if (format == "gantt" && horizon > max_gantt_horizon) {
                err << "horizon too large for gantt (max " << max_gantt_horizon
                    << "); use --format text or json\n";
                return 2;
            }
            const TaskSet ts = load_taskset_file(file);
            const Trace trace = simulate(ts, horizon);
            if (format == "json")
                out << render_trace_json(trace, ts);
            else if (format == "gantt")
                out << render_trace_gantt(trace, ts, horizon);
            else
                out << render_trace_text(trace, ts);
            const bool violated = std::any_of(trace.begin(), trace.end(), [](const TraceEvent& e) {
                return e.kind == EventKind::violation;
            });
            return violated ? 1 : 0;
        }
        if (*cmd_bound) {
            const TaskSet ts = load_taskset_file(file);
            out << render_bound_text(ts);
            return 0;
        }
        // search
        const TaskSet ts = load_taskset_file(file);
        const SearchSpace sp = (space == "all") ? SearchSpace::all : SearchSpace::valid_only;
        const SearchMode md = (mode == "all") ? SearchMode::all : SearchMode::first;
        const std::int64_t total = candidate_count(ts, sp);
        if (total > max_search_candidates) {
            err << "search space has " << total << " candidates (limit "
                << max_search_candidates << "); narrow the space\n";
            return 2;
        }
        const InitSearchReport report =
            search_initial_sequences(ts.tasks, ts.tiebreak, sp, md, jobs);
        out << render_search_text(report, sp, md);
        return report.feasible_assignments.empty() ? 1 : 0;
    } catch (const parse_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::overflow_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

} // namespace mkdbp
