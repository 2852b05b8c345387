#pragma once

#include "mkdbp/mk_core.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace mkdbp {

enum class JobState { waiting, running, completed, missed, discarded };

/// One job of a periodic task; job j of task i arrives at j * T_i.
struct Job {
    std::size_t task_index = 0;
    std::int64_t job_index = 0;         // 0-based within its task
    std::int64_t arrival = 0;
    std::int64_t absolute_deadline = 0; // arrival + deadline of the task
    JobState state = JobState::waiting;
};

// Non-preemptive DBP dispatch: among `ready` jobs, picks the one whose
// task currently has the smallest distance to a constraint violation,
// breaking ties by `policy` (earliest absolute deadline / smallest period /
// task order) and finally by task index. Returns an index into `ready`,
// or nothing when the set is empty.
std::optional<std::size_t> choose_next(std::span<const Job> ready,
                                       std::span<const KSequence> sequences,
                                       std::span<const Task> tasks,
                                       TieBreak policy);

enum class EventKind { arrival, start, completion, miss, violation, idle };

/// One entry of a simulation trace. `sequence_after` / `distance_after`
/// describe the task's history right after the outcome was recorded and
/// are only present for completion, miss and violation events.
struct TraceEvent {
    std::int64_t time = 0;
    EventKind kind = EventKind::idle;
    int task_index = -1; // -1 for idle events
    std::int64_t job_index = -1;
    std::optional<KSequence> sequence_after;
    int distance_after = -1;

    friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

using Trace = std::vector<TraceEvent>;

/// Serializable snapshot of a simulation in progress, sufficient to
/// continue it deterministically.
struct SimulatorState {
    std::int64_t time = 0;
    std::vector<KSequence> sequences;           // one per task

    struct PendingJob {
        std::size_t task_index = 0;
        std::int64_t job_index = 0;
        bool discarded = false; // kept only to expire; never dispatched

        friend bool operator==(const PendingJob&, const PendingJob&) = default;
    };
    std::vector<PendingJob> pending;            // released, not finished, not expired

    struct RunningJob {
        std::size_t task_index = 0;
        std::int64_t job_index = 0;
        std::int64_t finish_time = 0;

        friend bool operator==(const RunningJob&, const RunningJob&) = default;
    };
    std::optional<RunningJob> running;

    friend bool operator==(const SimulatorState&, const SimulatorState&) = default;
};

/// Discrete-time simulator for a synchronous periodic task set on one
/// processor under non-preemptive DBP.
///
/// At every decision instant the steps run in a fixed order: record a
/// completion, record deadline misses (in task order), stop on a freshly
/// produced error state, admit arrivals, drop waiting jobs that can no
/// longer meet their deadline, then dispatch. A job, once started, runs
/// for exactly its wcet. Advancing in two chunks equals one long run:
/// run(a) then run(b) produces the trace of run(a + b).
class Simulator {
public:
    explicit Simulator(TaskSet ts);
    // Resumes from a snapshot. Throws std::invalid_argument if the snapshot
    // is inconsistent with the task set.
    Simulator(TaskSet ts, const SimulatorState& state);

    // Advances the clock by `duration`, appending to the internal trace.
    // Outcomes falling exactly on the end instant are recorded; arrivals
    // and dispatch at that instant are left to the next call. Returns the
    // events produced by this call. Stops early on a violation.
    Trace run(std::int64_t duration);

    const Trace& trace() const { return trace_; }
    bool violated() const { return violated_; }
    std::int64_t now() const { return now_; }
    const std::vector<KSequence>& sequences() const { return seq_; }

    SimulatorState state() const;

private:
    struct Slot { // at most one undecided job per task (constrained deadlines)
        std::int64_t job_index = 0;
        std::int64_t arrival = 0;
        std::int64_t absolute_deadline = 0;
        bool discarded = false;
    };
    struct Running {
        std::size_t task_index = 0;
        std::int64_t job_index = 0;
        std::int64_t finish_time = 0;
    };

    void record_outcome(std::size_t ti, std::int64_t job, int met, EventKind kind);
    std::int64_t next_instant(std::int64_t target) const;

    TaskSet ts_;
    std::int64_t now_ = 0;
    std::vector<KSequence> seq_;
    std::vector<std::int64_t> next_job_;        // per task, next release index
    std::vector<std::optional<Slot>> pending_;  // per task
    std::optional<Running> running_;
    bool violated_ = false;
    bool boundary_activity_ = false; // idle events only where something happened
    Trace trace_;
};

/// Runs a fresh simulation of `ts` for `horizon` time units.
Trace simulate(const TaskSet& ts, std::int64_t horizon);

/// Continues a snapshot for another `duration` time units.
Trace resume(const SimulatorState& state, const TaskSet& ts, std::int64_t duration);

} // namespace mkdbp
