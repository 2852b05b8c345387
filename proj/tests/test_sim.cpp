#include "mkdbp/sim.hpp"

#include "mkdbp/render.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <random>
#include <stdexcept>

using namespace mkdbp;

namespace {

TaskSet two_task(const char* init1, const char* init2, TieBreak tb = TieBreak::edf) {
    TaskSet ts;
    ts.tasks.push_back({"tau1", 4, 1, 4, 2, 4});
    ts.tasks.push_back({"tau2", 10, 8, 10, 3, 4});
    ts.initial_sequences = {KSequence::from_string(init1), KSequence::from_string(init2)};
    ts.tiebreak = tb;
    return ts;
}

TaskSet twin_period() {
    TaskSet ts;
    ts.tasks.push_back({"tau1", 3, 2, 3, 1, 3});
    ts.tasks.push_back({"tau2", 3, 2, 3, 1, 3});
    ts.initial_sequences = {KSequence::ones(3), KSequence::ones(3)};
    ts.tiebreak = TieBreak::index;
    return ts;
}

std::vector<std::pair<std::int64_t, int>> starts(const Trace& trace) {
    std::vector<std::pair<std::int64_t, int>> out;
    for (const TraceEvent& e : trace)
        if (e.kind == EventKind::start) out.emplace_back(e.time, e.task_index);
    return out;
}

} // namespace

TEST_CASE("dispatcher picks the smallest distance, then the tie-break") {
    const TaskSet ts = two_task("1111", "1111");
    const std::vector<Job> ready = {{0, 0, 0, 4, JobState::waiting},
                                    {1, 0, 0, 10, JobState::waiting}};

    // distances 3 vs 2: the tighter window wins regardless of policy
    for (TieBreak tb : {TieBreak::edf, TieBreak::rm, TieBreak::index}) {
        const auto pick = choose_next(ready, ts.initial_sequences, ts.tasks, tb);
        REQUIRE(pick.has_value());
        CHECK(ready[*pick].task_index == 1);
    }

    // equal distances: edf and rm both prefer the short-period task here
    const std::vector<KSequence> tied = {KSequence::from_string("0101"),
                                         KSequence::from_string("1111")};
    for (TieBreak tb : {TieBreak::edf, TieBreak::rm, TieBreak::index}) {
        const auto pick = choose_next(ready, tied, ts.tasks, tb);
        REQUIRE(pick.has_value());
        CHECK(ready[*pick].task_index == 0);
    }

    // equal everything: the task index decides
    const TaskSet twins = twin_period();
    const std::vector<Job> both = {{0, 0, 0, 3, JobState::waiting},
                                   {1, 0, 0, 3, JobState::waiting}};
    const auto pick = choose_next(both, twins.initial_sequences, twins.tasks, TieBreak::index);
    REQUIRE(pick.has_value());
    CHECK(both[*pick].task_index == 0);

    CHECK_FALSE(choose_next({}, ts.initial_sequences, ts.tasks, TieBreak::edf).has_value());
}

TEST_CASE("all-ones start runs into a violation at time 16") {
    const TaskSet ts = two_task("1111", "1111");
    const Trace trace = simulate(ts, 20);
    CHECK(render_trace_text(trace, ts) ==
          "t=0 arrival tau1 job=0\n"
          "t=0 arrival tau2 job=0\n"
          "t=0 start tau2 job=0\n"
          "t=4 miss tau1 job=0 seq=1110 d=2\n"
          "t=4 arrival tau1 job=1\n"
          "t=8 completion tau2 job=0 seq=1111 d=2\n"
          "t=8 miss tau1 job=1 seq=1100 d=1\n"
          "t=8 arrival tau1 job=2\n"
          "t=8 start tau1 job=2\n"
          "t=9 completion tau1 job=2 seq=1001 d=1\n"
          "t=9 idle\n"
          "t=10 arrival tau2 job=1\n"
          "t=10 start tau2 job=1\n"
          "t=12 arrival tau1 job=3\n"
          "t=16 miss tau1 job=3 seq=0010 d=0\n"
          "t=16 violation tau1 job=3 seq=0010 d=0\n");

    const TraceEvent& last = trace.back();
    CHECK(last.kind == EventKind::violation);
    CHECK(last.time == 16);
    CHECK(last.task_index == 0);
    CHECK(last.sequence_after->to_string() == "0010");

    // the same schedule arises under rm (periods order like the deadlines here)
    TaskSet rm = two_task("1111", "1111", TieBreak::rm);
    CHECK(simulate(rm, 20) == trace);
}

TEST_CASE("staggered start yields the annotated periodic schedule") {
    const TaskSet ts = two_task("0101", "1111");
    Simulator sim(ts);
    sim.run(20);
    CHECK_FALSE(sim.violated());
    CHECK(starts(sim.trace()) ==
          std::vector<std::pair<std::int64_t, int>>{{0, 0}, {1, 1}, {9, 0}, {10, 1}, {18, 0}});
    CHECK(sim.sequences() == ts.initial_sequences); // state closes after one hyper-period

    int idle_count = 0;
    for (const TraceEvent& e : sim.trace())
        if (e.kind == EventKind::idle) ++idle_count;
    CHECK(idle_count == 1);
    CHECK(test_helpers::check_trace_invariants(sim.trace(), ts, 20).empty());
}

TEST_CASE("an error-state start recovers without a violation") {
    const TaskSet ts = two_task("0010", "1011");
    Simulator sim(ts);
    sim.run(20);
    CHECK_FALSE(sim.violated());
    CHECK(sim.sequences() ==
          std::vector<KSequence>{KSequence::from_string("0101"), KSequence::from_string("1111")});
    // distance 0 gave the error-state task the processor first
    CHECK(starts(sim.trace()).front() == std::pair<std::int64_t, int>{0, 0});
}

TEST_CASE("twin-period schedule alternates via discarded jobs") {
    const TaskSet ts = twin_period();
    const Trace trace = simulate(ts, 6);
    CHECK(render_trace_text(trace, ts) ==
          "t=0 arrival tau1 job=0\n"
          "t=0 arrival tau2 job=0\n"
          "t=0 start tau1 job=0\n"
          "t=2 completion tau1 job=0 seq=111 d=3\n"
          "t=2 idle\n"
          "t=3 miss tau2 job=0 seq=110 d=2\n"
          "t=3 arrival tau1 job=1\n"
          "t=3 arrival tau2 job=1\n"
          "t=3 start tau2 job=1\n"
          "t=5 completion tau2 job=1 seq=101 d=3\n"
          "t=5 idle\n"
          "t=6 miss tau1 job=1 seq=110 d=2\n");

    const Trace longer = simulate(ts, 15);
    CHECK(starts(longer) == std::vector<std::pair<std::int64_t, int>>{
                                {0, 0}, {3, 1}, {6, 0}, {9, 1}, {12, 0}});
    CHECK(test_helpers::check_trace_invariants(longer, ts, 15).empty());
}

TEST_CASE("a job finishing exactly at its deadline counts as met") {
    TaskSet ts;
    ts.tasks.push_back({"edge", 2, 2, 2, 1, 1});
    ts.initial_sequences = {KSequence::ones(1)};
    Simulator sim(ts);
    sim.run(6);
    CHECK_FALSE(sim.violated());
    for (const TraceEvent& e : sim.trace()) CHECK(e.kind != EventKind::miss);
    CHECK(sim.sequences()[0].to_string() == "1");
}

TEST_CASE("horizon edge cases") {
    const TaskSet ts = two_task("1111", "1111");
    CHECK(simulate(ts, 0).empty());
    Simulator sim(ts);
    CHECK_THROWS_AS(sim.run(-1), std::invalid_argument);

    // a violated simulator stays silent
    sim.run(20);
    CHECK(sim.violated());
    CHECK(sim.run(100).empty());
}

TEST_CASE("simulation is deterministic") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 30; ++i) {
        const TaskSet ts = test_helpers::random_taskset(rng);
        CHECK(simulate(ts, 60) == simulate(ts, 60));
    }
}

TEST_CASE("running in chunks equals one long run") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 60; ++i) {
        const TaskSet ts = test_helpers::random_taskset(rng);
        const std::int64_t horizon = 50;
        const std::int64_t split =
            std::uniform_int_distribution<std::int64_t>(0, horizon)(rng);

        Simulator whole(ts);
        whole.run(horizon);
        Simulator parts(ts);
        parts.run(split);
        parts.run(horizon - split);
        CHECK(parts.trace() == whole.trace());
        CHECK(parts.sequences() == whole.sequences());

        const auto problems = test_helpers::check_trace_invariants(whole.trace(), ts, horizon);
        for (const std::string& p : problems) FAIL_CHECK(p);
    }
}

TEST_CASE("a snapshot resumes into the identical suffix") {
    std::mt19937_64 rng(17);
    int resumed = 0;
    for (int i = 0; i < 60 || resumed < 20; ++i) {
        const TaskSet ts = test_helpers::random_taskset(rng);
        const std::int64_t boundary = hyperperiod(ts);
        Simulator sim(ts);
        sim.run(boundary);
        if (sim.violated()) continue;
        const SimulatorState st = sim.state();
        const Trace tail = sim.run(2 * boundary);

        CHECK(resume(st, ts, 2 * boundary) == tail);
        ++resumed;
        if (i > 400) break; // safety valve; never expected
    }
    CHECK(resumed >= 20);
}

TEST_CASE("snapshots preserve discarded jobs mid-window") {
    // One long job leaves the other hopeless before its deadline passes.
    TaskSet ts;
    ts.tasks.push_back({"long", 8, 3, 8, 1, 2});
    ts.tasks.push_back({"short", 8, 4, 5, 1, 2});
    ts.initial_sequences = {KSequence::ones(2), KSequence::ones(2)};
    ts.tiebreak = TieBreak::index;

    Simulator sim(ts);
    sim.run(4); // crosses the discard instant t=3, stops before the miss at 5
    const SimulatorState st = sim.state();
    REQUIRE(st.pending.size() == 1);
    CHECK(st.pending[0].task_index == 1);
    CHECK(st.pending[0].discarded);

    const Trace tail = sim.run(4);
    CHECK(resume(st, ts, 4) == tail);
    bool missed = false;
    for (const TraceEvent& e : tail)
        if (e.kind == EventKind::miss && e.task_index == 1) missed = true;
    CHECK(missed);
}

TEST_CASE("inconsistent snapshots are rejected") {
    const TaskSet ts = two_task("1111", "1111");

    SimulatorState st;
    st.time = -1;
    st.sequences = ts.initial_sequences;
    CHECK_THROWS_AS(Simulator(ts, st), std::invalid_argument);

    st.time = 0;
    st.sequences = {KSequence::ones(4)};
    CHECK_THROWS_AS(Simulator(ts, st), std::invalid_argument);

    st.sequences = {KSequence::ones(4), KSequence::ones(3)};
    CHECK_THROWS_AS(Simulator(ts, st), std::invalid_argument);

    st.sequences = ts.initial_sequences;
    st.time = 2;
    st.pending.push_back({0, 5, false}); // job 5 arrives at t=20, not live at t=2
    CHECK_THROWS_AS(Simulator(ts, st), std::invalid_argument);

    st.pending = {{0, 0, false}, {0, 0, false}};
    CHECK_THROWS_AS(Simulator(ts, st), std::invalid_argument);

    st.pending = {{0, 0, false}};
    CHECK_NOTHROW(Simulator(ts, st));

    st.running = SimulatorState::RunningJob{1, 0, 12}; // deadline is 10
    CHECK_THROWS_AS(Simulator(ts, st), std::invalid_argument);

    st.running = SimulatorState::RunningJob{1, 0, 8};
    CHECK_NOTHROW(Simulator(ts, st));

    st.pending = {{1, 0, false}}; // same job pending and running
    CHECK_THROWS_AS(Simulator(ts, st), std::invalid_argument);
}
