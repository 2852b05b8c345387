#pragma once

#include "mkdbp/mk_core.hpp"
#include "mkdbp/sim.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace mkdbp {

enum class Outcome { feasible, infeasible };

/// Result of the exact schedulability test.
struct Verdict {
    Outcome outcome = Outcome::infeasible;

    // Feasible: the schedule repeats with `period` from `transient_start`
    // onwards (both multiples of the hyper-period).
    std::int64_t transient_start = 0;
    std::int64_t period = 0;

    // Infeasible: first constraint violation.
    std::int64_t violation_time = -1;
    int violating_task = -1;
    KSequence violating_sequence;

    std::int64_t hyperperiod = 0; // P, recorded for ratio statistics

    friend bool operator==(const Verdict&, const Verdict&) = default;
};

// Exact schedulability test. Simulates hyper-period by hyper-period,
// snapshotting the per-task sequences at every boundary (the initial
// sequences count as the boundary-0 snapshot); infeasible at the first
// violation, feasible as soon as a snapshot repeats any earlier one.
// Terminates within state_bound + 1 hyper-periods by pigeonhole.
// Throws std::overflow_error when state_bound * P is not computable.
Verdict exact_test(const TaskSet& ts);

// End X of the interval [0, X) whose violation-freedom implies
// schedulability: state_bound(ts) * hyperperiod(ts). Overflow-checked.
std::int64_t feasibility_interval(const TaskSet& ts);

// Reference test: simulates the whole feasibility interval in one sweep
// and reports whether any violation occurred. Exponentially slower than
// exact_test on feasible systems; intended as a cross-check on small
// instances.
Outcome oracle_test(const TaskSet& ts);

enum class SearchSpace {
    valid_only, // per-task sequences with at least m ones
    all         // every length-k bitstring, error states included
};
enum class SearchMode { first, all };

struct InitSearchReport {
    bool default_feasible = false;          // verdict for all-ones initials
    std::vector<std::vector<KSequence>> feasible_assignments;
    std::int64_t total_candidates = 0;
    bool includes_error_states = false;

    friend bool operator==(const InitSearchReport&, const InitSearchReport&) = default;
};

// Brute-force search over initial-sequence assignments, in lexicographic
// order (task 0 most significant, each task's candidates in ascending
// string order). Mode `first` stops at the first feasible assignment.
// `jobs` > 1 evaluates candidates concurrently; the report is identical
// to the sequential one. Throws std::overflow_error when the candidate
// count exceeds 64 bits.
InitSearchReport search_initial_sequences(const std::vector<Task>& tasks, TieBreak tiebreak,
                                          SearchSpace space, SearchMode mode, int jobs = 1);

/// Per-task candidate initial sequences for a search space, in ascending
/// string order. Exposed for candidate counting and tests.
std::vector<KSequence> initial_sequence_candidates(const Task& task, SearchSpace space);

/// Histograms of period / P and transient_start / P over feasible verdicts.
struct PeriodStatistics {
    std::map<std::int64_t, std::int64_t> period_over_p;
    std::map<std::int64_t, std::int64_t> transient_over_p;

    friend bool operator==(const PeriodStatistics&, const PeriodStatistics&) = default;
};

PeriodStatistics period_statistics(const std::vector<Verdict>& verdicts);

} // namespace mkdbp
