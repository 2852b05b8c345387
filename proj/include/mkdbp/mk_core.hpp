#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mkdbp {

// Overflow-checked 64-bit arithmetic. Analysis quantities (state counts,
// hyper-periods, interval bounds) are products of binomial sums and must
// fail loudly instead of wrapping. `what` names the quantity in the
// std::overflow_error message.
std::int64_t checked_add(std::int64_t a, std::int64_t b, const char* what = "value");
std::int64_t checked_mul(std::int64_t a, std::int64_t b, const char* what = "value");

/// Fixed-length binary history of one task's recent job outcomes.
/// Leftmost bit is the oldest job, rightmost the most recent;
/// '1' = deadline met, '0' = deadline missed. Immutable value type.
/// Lengths from 1 to 64 are supported (bits are packed in a word).
class KSequence {
public:
    KSequence() = default;

    static KSequence ones(int length);                     // "1...1"
    static KSequence from_string(const std::string& s);    // e.g. "0101"
    static KSequence from_bits(std::uint64_t bits, int length);

    int length() const { return length_; }
    std::uint64_t bits() const { return bits_; }
    int ones_count() const;

    // Slides the window one job forward: drops the oldest (leftmost) bit
    // and appends the new outcome on the right. Length is preserved.
    KSequence shift(int outcome) const;

    std::string to_string() const;

    friend bool operator==(const KSequence&, const KSequence&) = default;

private:
    std::uint64_t bits_ = 0;
    int length_ = 0;
};

/// Secondary ordering applied among tasks whose DBP distances tie.
/// Every policy falls through to the (unique) task index.
enum class TieBreak { edf, rm, index };

/// Static parameters of one periodic task (or message stream): it releases
/// a job every `period` units needing `wcet` units before its relative
/// `deadline`, and at least m out of any k consecutive jobs must meet it.
struct Task {
    std::string name;
    std::int64_t period = 0;    // T
    std::int64_t wcet = 0;      // C
    std::int64_t deadline = 0;  // D, constrained: D <= T
    int m = 0;
    int k = 0;

    friend bool operator==(const Task&, const Task&) = default;
};

struct TaskSet {
    std::vector<Task> tasks;                  // order is significant (index tie-break)
    std::vector<KSequence> initial_sequences; // one per task, length k_i
    TieBreak tiebreak = TieBreak::edf;

    friend bool operator==(const TaskSet&, const TaskSet&) = default;
};

/// Per-task k-sequences captured at a hyper-period boundary. At such an
/// instant every earlier job has been resolved and a fresh request of each
/// task is due, so the sequences alone identify the full scheduler state.
struct SystemState {
    std::vector<KSequence> sequences;

    friend bool operator==(const SystemState&, const SystemState&) = default;
};

// Checks all structural invariants (nonempty set, unique names,
// 1 <= wcet <= deadline <= period, 1 <= m <= k <= 64, matching initial
// sequence lengths). Throws std::invalid_argument naming the offender.
void validate(const TaskSet& ts);

// DBP distance of sequence `w` under an (m,k)-firm constraint: the least
// number of consecutive future misses that drives the window below m ones.
// An error state (fewer than m ones already) has distance 0 and therefore
// the highest priority.
int dbp_distance(const KSequence& w, int m);

/// True iff `w` violates the constraint, i.e. has fewer than m ones.
bool is_error_state(const KSequence& w, int m);

// Number of length-k windows satisfying the constraint: sum of C(k,j) for
// j = m..k. Throws std::overflow_error when the sum exceeds 64 bits.
std::int64_t count_valid_sequences(int m, int k);

// Product of count_valid_sequences over all tasks: the number of distinct
// boundary states a violation-free schedule can visit ("max" in the exact
// test). Overflow-checked.
std::int64_t state_bound(const TaskSet& ts);

/// lcm of all task periods (P). Overflow-checked.
std::int64_t hyperperiod(const TaskSet& ts);

} // namespace mkdbp
