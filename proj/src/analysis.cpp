#include "mkdbp/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <utility>

namespace mkdbp {

namespace {

struct StateHash {
    std::size_t operator()(const SystemState& s) const {
        std::uint64_t h = 1469598103934665603ull; // FNV-1a
        auto mix = [&](std::uint64_t v) {
            h ^= v;
            h *= 1099511628211ull;
        };
        for (const KSequence& w : s.sequences) {
            mix(static_cast<std::uint64_t>(w.length()));
            mix(w.bits());
        }
        return static_cast<std::size_t>(h);
    }
};

void run_workers(const std::function<void()>& body, int jobs) {
    if (jobs <= 1) {
        body();
        return;
    }
    std::mutex mu;
    std::exception_ptr first_error;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int i = 0; i < jobs; ++i)
        pool.emplace_back([&] {
            try {
                body();
            } catch (...) {
                std::lock_guard lock(mu);
                if (!first_error) first_error = std::current_exception();
            }
        });
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace

Verdict exact_test(const TaskSet& ts) {
    validate(ts);
    Verdict v;
    v.hyperperiod = hyperperiod(ts);
    const std::int64_t p = v.hyperperiod;
    const std::int64_t bound = state_bound(ts);
    checked_mul(bound, p, "feasibility interval"); // test horizon must be representable

    Simulator sim(ts);
    std::unordered_map<SystemState, std::int64_t, StateHash> seen;
    seen.emplace(SystemState{ts.initial_sequences}, 0);

    // With valid initial sequences a snapshot must repeat within state_bound
    // boundaries; an error-state start adds one more (its own snapshot never
    // recurs, every later one is valid).
    for (std::int64_t j = 1; j - 1 <= bound; ++j) {
        sim.run(p);
        if (sim.violated()) {
            const TraceEvent& e = sim.trace().back();
            v.outcome = Outcome::infeasible;
            v.violation_time = e.time;
            v.violating_task = e.task_index;
            v.violating_sequence = *e.sequence_after;
            return v;
        }
        auto [it, inserted] = seen.emplace(SystemState{sim.sequences()}, j);
        if (!inserted) {
            v.outcome = Outcome::feasible;
            v.transient_start = checked_mul(it->second, p, "transient start");
            v.period = checked_mul(j - it->second, p, "period");
            return v;
        }
    }
    throw std::logic_error("no snapshot recurrence within the state bound");
}

std::int64_t feasibility_interval(const TaskSet& ts) {
    validate(ts);
    return checked_mul(state_bound(ts), hyperperiod(ts), "feasibility interval");
}

Outcome oracle_test(const TaskSet& ts) {
    validate(ts);
    Simulator sim(ts);
    sim.run(feasibility_interval(ts));
    return sim.violated() ? Outcome::infeasible : Outcome::feasible;
}

std::vector<KSequence> initial_sequence_candidates(const Task& task, SearchSpace space) {
    if (task.k < 1 || task.k > 64)
        throw std::invalid_argument("k must be in 1..64");
    std::vector<KSequence> out;
    if (space == SearchSpace::all) {
        if (task.k > 62) throw std::overflow_error("candidate count exceeds 64-bit range");
        const std::int64_t n = std::int64_t{1} << task.k;
        out.reserve(static_cast<std::size_t>(n));
        for (std::int64_t v = 0; v < n; ++v)
            out.push_back(KSequence::from_bits(static_cast<std::uint64_t>(v), task.k));
    } else {
        if (task.m < 1 || task.m > task.k)
            throw std::invalid_argument("m must be in 1..k");
        out.reserve(static_cast<std::size_t>(count_valid_sequences(task.m, task.k)));
        // Emit strings most-significant bit first with a zero branch before
        // the one branch: that is exactly ascending string order. Prune any
        // prefix that can no longer reach m ones.
        auto emit = [&](auto&& self, int pos, int ones, std::uint64_t bits) -> void {
            if (pos == task.k) {
                out.push_back(KSequence::from_bits(bits, task.k));
                return;
            }
            const int remaining = task.k - pos - 1;
            for (int b = 0; b <= 1; ++b)
                if (ones + b + remaining >= task.m)
                    self(self, pos + 1, ones + b, (bits << 1) | static_cast<std::uint64_t>(b));
        };
        emit(emit, 0, 0, 0);
    }
    return out;
}

InitSearchReport search_initial_sequences(const std::vector<Task>& tasks, TieBreak tiebreak,
                                          SearchSpace space, SearchMode mode, int jobs) {
    if (tasks.empty()) throw std::invalid_argument("task set is empty");
    if (jobs < 1) throw std::invalid_argument("jobs must be positive");
    const std::size_t n = tasks.size();

    InitSearchReport report;
    report.includes_error_states = (space == SearchSpace::all);

    TaskSet def;
    def.tasks = tasks;
    def.tiebreak = tiebreak;
    for (const Task& t : tasks) def.initial_sequences.push_back(KSequence::ones(t.k));
    report.default_feasible = (exact_test(def).outcome == Outcome::feasible);

    std::vector<std::vector<KSequence>> cand(n);
    std::int64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        cand[i] = initial_sequence_candidates(tasks[i], space);
        total = checked_mul(total, static_cast<std::int64_t>(cand[i].size()), "candidate count");
    }
    report.total_candidates = total;

    // Assignment number idx in mixed radix, task 0 most significant.
    auto assignment_at = [&](std::int64_t idx) {
        std::vector<KSequence> a(n);
        for (std::size_t i = n; i-- > 0;) {
            const auto c = static_cast<std::int64_t>(cand[i].size());
            a[i] = cand[i][static_cast<std::size_t>(idx % c)];
            idx /= c;
        }
        return a;
    };
    auto is_feasible = [&](std::vector<KSequence> init) {
        TaskSet ts;
        ts.tasks = tasks;
        ts.initial_sequences = std::move(init);
        ts.tiebreak = tiebreak;
        return exact_test(ts).outcome == Outcome::feasible;
    };

    std::atomic<std::int64_t> cursor{0};
    if (mode == SearchMode::first) {
        // Lowest feasible index wins; workers ahead of it stop early.
        std::atomic<std::int64_t> best{total};
        run_workers(
            [&] {
                for (;;) {
                    const std::int64_t i = cursor.fetch_add(1);
                    if (i >= total || i >= best.load()) break;
                    if (is_feasible(assignment_at(i))) {
                        std::int64_t b = best.load();
                        while (i < b && !best.compare_exchange_weak(b, i)) {
                        }
                    }
                }
            },
            jobs);
        if (best.load() < total)
            report.feasible_assignments.push_back(assignment_at(best.load()));
    } else {
        std::mutex mu;
        std::vector<std::pair<std::int64_t, std::vector<KSequence>>> found;
        run_workers(
            [&] {
                for (;;) {
                    const std::int64_t i = cursor.fetch_add(1);
                    if (i >= total) break;
                    auto a = assignment_at(i);
                    if (is_feasible(a)) {
                        std::lock_guard lock(mu);
                        found.emplace_back(i, std::move(a));
                    }
                }
            },
            jobs);
        std::sort(found.begin(), found.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        for (auto& [i, a] : found) report.feasible_assignments.push_back(std::move(a));
    }
    return report;
}

PeriodStatistics period_statistics(const std::vector<Verdict>& verdicts) {
    PeriodStatistics st;
    for (const Verdict& v : verdicts) {
        if (v.outcome != Outcome::feasible || v.hyperperiod <= 0) continue;
        ++st.period_over_p[v.period / v.hyperperiod];
        ++st.transient_over_p[v.transient_start / v.hyperperiod];
    }
    return st;
}

} // namespace mkdbp
