#include "mkdbp/sim.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace mkdbp {

namespace {

[[noreturn]] void bad_snapshot(const std::string& why) {
    throw std::invalid_argument("snapshot inconsistent with task set: " + why);
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
    return a == 0 ? 0 : (a - 1) / b + 1; // a >= 0, b >= 1
}

} // namespace

std::optional<std::size_t> choose_next(std::span<const Job> ready,
                                       std::span<const KSequence> sequences,
                                       std::span<const Task> tasks,
                                       TieBreak policy) {
    auto rank = [&](const Job& j) {
        const Task& t = tasks[j.task_index];
        std::int64_t key = 0;
        switch (policy) {
        case TieBreak::edf: key = j.absolute_deadline; break;
        case TieBreak::rm: key = t.period; break;
        case TieBreak::index: break; // task index below decides alone
        }
        return std::tuple(dbp_distance(sequences[j.task_index], t.m), key, j.task_index);
    };
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < ready.size(); ++i)
        if (!best || rank(ready[i]) < rank(ready[*best])) best = i;
    return best;
}

Simulator::Simulator(TaskSet ts) : ts_(std::move(ts)) {
    validate(ts_);
    seq_ = ts_.initial_sequences;
    next_job_.assign(ts_.tasks.size(), 0);
    pending_.resize(ts_.tasks.size());
}

Simulator::Simulator(TaskSet ts, const SimulatorState& state) : ts_(std::move(ts)) {
    validate(ts_);
    const std::size_t n = ts_.tasks.size();
    if (state.time < 0) bad_snapshot("negative time");
    if (state.sequences.size() != n) bad_snapshot("sequence count differs from task count");
    for (std::size_t i = 0; i < n; ++i)
        if (state.sequences[i].length() != ts_.tasks[i].k)
            bad_snapshot("sequence length differs from k of task '" + ts_.tasks[i].name + "'");

    now_ = state.time;
    seq_ = state.sequences;
    next_job_.resize(n);
    pending_.resize(n);
    // Arrivals at the snapshot instant itself have not been admitted yet
    // (a run stops before processing them), so the next release of task i
    // is the first one at or after the snapshot time.
    for (std::size_t i = 0; i < n; ++i)
        next_job_[i] = ceil_div(now_, ts_.tasks[i].period);

    auto live_window = [&](std::size_t ti, std::int64_t job,
                           std::int64_t* deadline_out) {
        // A still-undecided job must have been released strictly before the
        // snapshot and reach its deadline strictly after it.
        if (job < 0) return false;
        const Task& t = ts_.tasks[ti];
        std::int64_t arrival = 0, deadline = 0;
        if (__builtin_mul_overflow(job, t.period, &arrival)) return false;
        if (__builtin_add_overflow(arrival, t.deadline, &deadline)) return false;
        if (deadline_out) *deadline_out = deadline;
        return arrival < now_ && now_ < deadline;
    };

    for (const SimulatorState::PendingJob& p : state.pending) {
        if (p.task_index >= n) bad_snapshot("pending job names an unknown task");
        if (!live_window(p.task_index, p.job_index, nullptr))
            bad_snapshot("pending job of task '" + ts_.tasks[p.task_index].name +
                         "' is outside its live window");
        if (pending_[p.task_index]) bad_snapshot("task '" + ts_.tasks[p.task_index].name +
                                                 "' has several pending jobs");
        const Task& t = ts_.tasks[p.task_index];
        Slot s;
        s.job_index = p.job_index;
        s.arrival = p.job_index * t.period;
        s.absolute_deadline = s.arrival + t.deadline;
        s.discarded = p.discarded;
        pending_[p.task_index] = s;
    }

    if (state.running) {
        const SimulatorState::RunningJob& r = *state.running;
        if (r.task_index >= n) bad_snapshot("running job names an unknown task");
        const Task& t = ts_.tasks[r.task_index];
        std::int64_t deadline = 0;
        if (!live_window(r.task_index, r.job_index, &deadline))
            bad_snapshot("running job of task '" + t.name + "' is outside its live window");
        if (r.finish_time <= now_ || r.finish_time > deadline ||
            r.finish_time - t.wcet < r.job_index * t.period)
            bad_snapshot("running job of task '" + t.name + "' has an impossible finish time");
        if (pending_[r.task_index])
            bad_snapshot("task '" + t.name + "' is both running and pending");
        running_ = Running{r.task_index, r.job_index, r.finish_time};
    }
}

SimulatorState Simulator::state() const {
    SimulatorState st;
    st.time = now_;
    st.sequences = seq_;
    for (std::size_t i = 0; i < pending_.size(); ++i)
        if (pending_[i])
            st.pending.push_back({i, pending_[i]->job_index, pending_[i]->discarded});
    if (running_)
        st.running = SimulatorState::RunningJob{running_->task_index, running_->job_index,
                                                running_->finish_time};
    return st;
}

void Simulator::record_outcome(std::size_t ti, std::int64_t job, int met, EventKind kind) {
    seq_[ti] = seq_[ti].shift(met);
    TraceEvent e;
    e.time = now_;
    e.kind = kind;
    e.task_index = static_cast<int>(ti);
    e.job_index = job;
    e.sequence_after = seq_[ti];
    e.distance_after = dbp_distance(seq_[ti], ts_.tasks[ti].m);
    trace_.push_back(std::move(e));
    boundary_activity_ = true;
}

std::int64_t Simulator::next_instant(std::int64_t target) const {
    std::int64_t t = target;
    if (running_) t = std::min(t, running_->finish_time);
    for (std::size_t i = 0; i < ts_.tasks.size(); ++i) {
        if (pending_[i]) t = std::min(t, pending_[i]->absolute_deadline);
        std::int64_t arrival = 0;
        if (!__builtin_mul_overflow(next_job_[i], ts_.tasks[i].period, &arrival))
            t = std::min(t, arrival);
    }
    return t;
}

Trace Simulator::run(std::int64_t duration) {
    if (duration < 0) throw std::invalid_argument("duration must be non-negative");
    const std::size_t first_new = trace_.size();
    const std::int64_t target = checked_add(now_, duration, "simulation horizon");

    while (!violated_ && now_ < target) {
        // Arrivals due now, in task order.
        for (std::size_t i = 0; i < ts_.tasks.size(); ++i) {
            const Task& t = ts_.tasks[i];
            std::int64_t arrival = 0;
            if (__builtin_mul_overflow(next_job_[i], t.period, &arrival) || arrival != now_)
                continue;
            Slot s;
            s.job_index = next_job_[i];
            s.arrival = arrival;
            s.absolute_deadline = checked_add(arrival, t.deadline, "absolute deadline");
            pending_[i] = s;
            ++next_job_[i];
            TraceEvent e;
            e.time = now_;
            e.kind = EventKind::arrival;
            e.task_index = static_cast<int>(i);
            e.job_index = s.job_index;
            trace_.push_back(std::move(e));
            boundary_activity_ = true;
        }

        if (!running_) {
            // A waiting job that cannot finish by its deadline any more is
            // dropped from consideration; its miss is recorded when the
            // deadline actually passes.
            for (std::size_t i = 0; i < pending_.size(); ++i)
                if (pending_[i] && !pending_[i]->discarded &&
                    pending_[i]->absolute_deadline - now_ < ts_.tasks[i].wcet)
                    pending_[i]->discarded = true;

            std::vector<Job> ready;
            for (std::size_t i = 0; i < pending_.size(); ++i)
                if (pending_[i] && !pending_[i]->discarded)
                    ready.push_back({i, pending_[i]->job_index, pending_[i]->arrival,
                                     pending_[i]->absolute_deadline, JobState::waiting});

            if (auto pick = choose_next(ready, seq_, ts_.tasks, ts_.tiebreak)) {
                const Job& j = ready[*pick];
                running_ = Running{j.task_index, j.job_index,
                                   checked_add(now_, ts_.tasks[j.task_index].wcet, "finish time")};
                pending_[j.task_index].reset();
                TraceEvent e;
                e.time = now_;
                e.kind = EventKind::start;
                e.task_index = static_cast<int>(j.task_index);
                e.job_index = j.job_index;
                trace_.push_back(std::move(e));
                boundary_activity_ = true;
            } else if (boundary_activity_) {
                // The processor stays idle; note it once per instant where
                // anything happened, so traces stay readable without one
                // idle line per empty tick.
                TraceEvent e;
                e.time = now_;
                e.kind = EventKind::idle;
                trace_.push_back(std::move(e));
            }
        }

        now_ = next_instant(target);
        boundary_activity_ = false;

        // Outcomes due at the new instant: the finishing job first, then
        // expired deadlines in task order. All shifts are recorded before
        // the violation check so the trace shows the full instant.
        struct Shifted {
            std::size_t task;
            std::int64_t job;
        };
        std::vector<Shifted> shifted;
        if (running_ && running_->finish_time == now_) {
            record_outcome(running_->task_index, running_->job_index, 1, EventKind::completion);
            shifted.push_back({running_->task_index, running_->job_index});
            running_.reset();
        }
        for (std::size_t i = 0; i < pending_.size(); ++i) {
            if (pending_[i] && pending_[i]->absolute_deadline == now_) {
                record_outcome(i, pending_[i]->job_index, 0, EventKind::miss);
                shifted.push_back({i, pending_[i]->job_index});
                pending_[i].reset();
            }
        }
        for (const Shifted& s : shifted) {
            if (is_error_state(seq_[s.task], ts_.tasks[s.task].m)) {
                TraceEvent e;
                e.time = now_;
                e.kind = EventKind::violation;
                e.task_index = static_cast<int>(s.task);
                e.job_index = s.job;
                e.sequence_after = seq_[s.task];
                e.distance_after = 0;
                trace_.push_back(std::move(e));
                violated_ = true;
                break;
            }
        }
    }
    return Trace(trace_.begin() + static_cast<std::ptrdiff_t>(first_new), trace_.end());
}

Trace simulate(const TaskSet& ts, std::int64_t horizon) {
    Simulator sim(ts);
    return sim.run(horizon);
}

Trace resume(const SimulatorState& state, const TaskSet& ts, std::int64_t duration) {
    Simulator sim(ts, state);
    return sim.run(duration);
}

} // namespace mkdbp
