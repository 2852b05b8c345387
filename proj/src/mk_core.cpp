#include "mkdbp/mk_core.hpp"

#include <bit>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace mkdbp {

namespace {

[[noreturn]] void overflow(const char* what) {
    throw std::overflow_error(std::string(what) + " exceeds 64-bit range");
}

std::uint64_t window_mask(int length) {
    // length == 64 would shift by the full word width (undefined), so the
    // all-ones mask is special-cased.
    return length == 64 ? ~0ull : ((1ull << length) - 1);
}

} // namespace

std::int64_t checked_add(std::int64_t a, std::int64_t b, const char* what) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) overflow(what);
    return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b, const char* what) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) overflow(what);
    return r;
}

KSequence KSequence::ones(int length) {
    if (length < 1 || length > 64)
        throw std::invalid_argument("sequence length must be in 1..64");
    return from_bits(window_mask(length), length);
}

KSequence KSequence::from_string(const std::string& s) {
    if (s.empty() || s.size() > 64)
        throw std::invalid_argument("sequence length must be in 1..64");
    std::uint64_t bits = 0;
    for (char c : s) {
        if (c != '0' && c != '1')
            throw std::invalid_argument(std::string("invalid bit '") + c + "' in sequence");
        bits = (bits << 1) | static_cast<std::uint64_t>(c - '0');
    }
    return from_bits(bits, static_cast<int>(s.size()));
}

KSequence KSequence::from_bits(std::uint64_t bits, int length) {
    if (length < 1 || length > 64)
        throw std::invalid_argument("sequence length must be in 1..64");
    if ((bits & ~window_mask(length)) != 0)
        throw std::invalid_argument("sequence bits exceed declared length");
    KSequence w;
    w.bits_ = bits;
    w.length_ = length;
    return w;
}

int KSequence::ones_count() const {
    return std::popcount(bits_);
}

KSequence KSequence::shift(int outcome) const {
    KSequence w;
    w.bits_ = ((bits_ << 1) | static_cast<std::uint64_t>(outcome ? 1 : 0)) & window_mask(length_);
    w.length_ = length_;
    return w;
}

std::string KSequence::to_string() const {
    std::string s(static_cast<std::size_t>(length_), '0');
    for (int i = 0; i < length_; ++i)
        if (bits_ >> (length_ - 1 - i) & 1) s[static_cast<std::size_t>(i)] = '1';
    return s;
}

void validate(const TaskSet& ts) {
    if (ts.tasks.empty())
        throw std::invalid_argument("task set is empty");
    if (ts.initial_sequences.size() != ts.tasks.size())
        throw std::invalid_argument("initial sequence count does not match task count");
    std::set<std::string> names;
    for (std::size_t i = 0; i < ts.tasks.size(); ++i) {
        const Task& t = ts.tasks[i];
        const std::string who = "task '" + t.name + "'";
        if (t.name.empty())
            throw std::invalid_argument("task name must not be empty");
        if (!names.insert(t.name).second)
            throw std::invalid_argument("duplicate " + who);
        if (t.wcet < 1)
            throw std::invalid_argument(who + ": wcet must be positive");
        if (t.deadline < t.wcet)
            throw std::invalid_argument(who + ": deadline is shorter than wcet");
        if (t.period < t.deadline)
            throw std::invalid_argument(who + ": deadline exceeds period");
        if (t.m < 1)
            throw std::invalid_argument(who + ": m must be positive");
        if (t.k < t.m)
            throw std::invalid_argument(who + ": m exceeds k");
        if (t.k > 64)
            throw std::invalid_argument(who + ": k too large (max 64)");
        if (ts.initial_sequences[i].length() != t.k)
            throw std::invalid_argument(who + ": initial sequence length differs from k");
    }
}

int dbp_distance(const KSequence& w, int m) {
    if (m < 1 || m > w.length())
        throw std::invalid_argument("m must be in 1..k");
    if (w.ones_count() < m) return 0;
    // Position of the m-th '1' counted from the most recent (rightmost) bit:
    // once that bit slides out of the window, fewer than m ones remain. With
    // the bit at zero-based index i from the right, that takes k - i future
    // misses.
    std::uint64_t bits = w.bits();
    int seen = 0;
    for (int i = 0; i < w.length(); ++i) {
        if (bits >> i & 1) {
            if (++seen == m) return w.length() - i;
        }
    }
    return 0; // unreachable: popcount >= m
}

bool is_error_state(const KSequence& w, int m) {
    if (m < 1 || m > w.length())
        throw std::invalid_argument("m must be in 1..k");
    return w.ones_count() < m;
}

std::int64_t count_valid_sequences(int m, int k) {
    if (m < 1 || k < m || k > 64)
        throw std::invalid_argument("need 1 <= m <= k <= 64");
    // Sum of C(k,j) for j = m..k, equivalently C(k,j) for j = 0..k-m by
    // symmetry. Walking j upward from 0 keeps every intermediate binomial
    // below the final sum, so a per-term 64-bit check suffices; the
    // update C(k,j+1) = C(k,j)*(k-j)/(j+1) is done in 128 bits.
    const int r = k - m;
    std::int64_t term = 1; // C(k,0)
    std::int64_t sum = 1;
    for (int j = 0; j < r; ++j) {
        __int128 next = static_cast<__int128>(term) * (k - j) / (j + 1);
        if (next > INT64_MAX) overflow("valid sequence count");
        term = static_cast<std::int64_t>(next);
        sum = checked_add(sum, term, "valid sequence count");
    }
    return sum;
}

std::int64_t state_bound(const TaskSet& ts) {
    std::int64_t bound = 1;
    for (const Task& t : ts.tasks)
        bound = checked_mul(bound, count_valid_sequences(t.m, t.k), "state bound");
    return bound;
}

std::int64_t hyperperiod(const TaskSet& ts) {
    std::int64_t p = 1;
    for (const Task& t : ts.tasks) {
        std::int64_t g = std::gcd(p, t.period);
        p = checked_mul(p / g, t.period, "hyperperiod");
    }
    return p;
}

} // namespace mkdbp
