#pragma once

#include "mkdbp/mk_core.hpp"

#include <stdexcept>
#include <string>

namespace mkdbp {

/// Raised for malformed task-set documents; the message names the
/// offending task and field where possible.
class parse_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parses a task-set document: a JSON object with a "tasks" array and an
// optional "tiebreak" ("edf" | "rm" | "index", default "edf"). Each task
// carries name, period, wcet, m, k, an optional deadline (default:
// period) and an optional init bit string (default: all ones, length k).
// The result satisfies every TaskSet invariant or parse_error is thrown.
TaskSet parse_taskset(const std::string& text);

// Canonical document for a TaskSet: every field explicit, fields in a
// fixed order, 2-space indentation, trailing newline. parse_taskset of
// the result reproduces the TaskSet exactly.
std::string render_taskset(const TaskSet& ts);

/// Reads and parses a task-set file. File errors become parse_error.
TaskSet load_taskset_file(const std::string& path);

const char* to_string(TieBreak policy);

} // namespace mkdbp
