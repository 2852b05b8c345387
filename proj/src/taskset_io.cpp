#include "mkdbp/taskset_io.hpp"

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <sstream>

namespace mkdbp {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& msg) {
    throw parse_error(msg);
}

std::int64_t get_int(const json& obj, const std::string& who, const char* field) {
    const json& v = obj.at(field);
    if (!v.is_number_integer())
        fail(who + ": " + field + " must be an integer");
    if (v.is_number_unsigned() && v.get<std::uint64_t>() > INT64_MAX)
        fail(who + ": " + field + " exceeds 64-bit range");
    return v.get<std::int64_t>();
}

} // namespace

const char* to_string(TieBreak policy) {
    switch (policy) {
    case TieBreak::edf: return "edf";
    case TieBreak::rm: return "rm";
    case TieBreak::index: return "index";
    }
    return "edf";
}

TaskSet parse_taskset(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(std::string("document is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) fail("document root must be an object");
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        if (key != "tasks" && key != "tiebreak") fail("unknown top-level field '" + key + "'");
    }
    if (!doc.contains("tasks")) fail("missing 'tasks' array");
    if (!doc["tasks"].is_array()) fail("'tasks' must be an array");

    TaskSet ts;
    if (doc.contains("tiebreak")) {
        if (!doc["tiebreak"].is_string()) fail("tiebreak must be a string");
        const std::string tb = doc["tiebreak"].get<std::string>();
        if (tb == "edf")
            ts.tiebreak = TieBreak::edf;
        else if (tb == "rm")
            ts.tiebreak = TieBreak::rm;
        else if (tb == "index")
            ts.tiebreak = TieBreak::index;
        else
            fail("unknown tiebreak '" + tb + "' (expected edf, rm or index)");
    }

    std::size_t idx = 0;
    for (const json& jt : doc["tasks"]) {
        std::string who = "task #" + std::to_string(idx + 1);
        if (!jt.is_object()) fail(who + " must be an object");
        if (jt.contains("name") && jt["name"].is_string())
            who = "task '" + jt["name"].get<std::string>() + "'";
        for (const auto& [key, value] : jt.items()) {
            (void)value;
            if (key != "name" && key != "period" && key != "wcet" && key != "deadline" &&
                key != "m" && key != "k" && key != "init")
                fail(who + ": unknown field '" + key + "'");
        }
        for (const char* req : {"name", "period", "wcet", "m", "k"})
            if (!jt.contains(req)) fail(who + ": missing field '" + req + "'");
        if (!jt["name"].is_string()) fail(who + ": name must be a string");

        Task t;
        t.name = jt["name"].get<std::string>();
        t.period = get_int(jt, who, "period");
        t.wcet = get_int(jt, who, "wcet");
        t.deadline = jt.contains("deadline") ? get_int(jt, who, "deadline") : t.period;
        const std::int64_t k = get_int(jt, who, "k");
        const std::int64_t m = get_int(jt, who, "m");
        if (k < 1) fail(who + ": k must be positive");
        if (k > 64) fail(who + ": k too large (max 64)");
        if (m < 1) fail(who + ": m must be positive");
        if (m > k) fail(who + ": m exceeds k");
        t.k = static_cast<int>(k);
        t.m = static_cast<int>(m);

        KSequence init;
        if (jt.contains("init")) {
            if (!jt["init"].is_string()) fail(who + ": init must be a string");
            try {
                init = KSequence::from_string(jt["init"].get<std::string>());
            } catch (const std::invalid_argument& e) {
                fail(who + ": " + e.what());
            }
            if (init.length() != t.k) fail(who + ": init length differs from k");
        } else {
            init = KSequence::ones(t.k);
        }

        ts.tasks.push_back(std::move(t));
        ts.initial_sequences.push_back(init);
        ++idx;
    }

    try {
        validate(ts);
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }
    return ts;
}

std::string render_taskset(const TaskSet& ts) {
    json doc;
    json arr = json::array();
    for (std::size_t i = 0; i < ts.tasks.size(); ++i) {
        const Task& t = ts.tasks[i];
        json jt;
        jt["name"] = t.name;
        jt["period"] = t.period;
        jt["wcet"] = t.wcet;
        jt["deadline"] = t.deadline;
        jt["m"] = t.m;
        jt["k"] = t.k;
        jt["init"] = ts.initial_sequences[i].to_string();
        arr.push_back(std::move(jt));
    }
    doc["tasks"] = std::move(arr);
    doc["tiebreak"] = to_string(ts.tiebreak);
    return doc.dump(2) + "\n";
}

TaskSet load_taskset_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_taskset(buf.str());
}

} // namespace mkdbp
