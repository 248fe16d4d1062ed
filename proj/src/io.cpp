#include "rdbsc/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rdbsc {

namespace {

void set_precision(std::ostream& os) { os.precision(17); }

std::vector<double> parse_row(const std::string& line, std::size_t fields, std::size_t lineno) {
    std::vector<double> out;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) out.push_back(std::stod(cell));
    if (out.size() != fields)
        throw std::runtime_error("csv: expected " + std::to_string(fields) + " fields at line " +
                                 std::to_string(lineno));
    return out;
}

bool is_header(const std::string& line) {
    return line.find_first_of("0123456789") == std::string::npos ||
           line.find_first_not_of("-+.,eE0123456789 \r") != std::string::npos;
}

template <typename RowFn>
void for_each_row(std::istream& is, std::size_t fields, RowFn&& fn) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        if (lineno == 1 && is_header(line)) continue;
        fn(parse_row(line, fields, lineno));
    }
}

}  // namespace

void write_tasks_csv(std::ostream& os, std::span<const Task> tasks) {
    set_precision(os);
    os << "id,x,y,s,e,beta\n";
    for (const auto& t : tasks)
        os << t.id << ',' << t.loc.x << ',' << t.loc.y << ',' << t.start << ',' << t.end << ','
           << t.beta << "\n";
}

std::vector<Task> read_tasks_csv(std::istream& is) {
    std::vector<Task> out;
    for_each_row(is, 6, [&](const std::vector<double>& f) {
        Task t{static_cast<TaskId>(f[0]), {f[1], f[2]}, f[3], f[4], f[5]};
        validate(t);
        out.push_back(t);
    });
    return out;
}

void write_workers_csv(std::ostream& os, std::span<const Worker> workers) {
    set_precision(os);
    os << "id,x,y,v,alo,ahi,p\n";
    for (const auto& w : workers)
        os << w.id << ',' << w.loc.x << ',' << w.loc.y << ',' << w.velocity << ',' << w.angle_lo
           << ',' << w.angle_hi << ',' << w.confidence << "\n";
}

std::vector<Worker> read_workers_csv(std::istream& is) {
    std::vector<Worker> out;
    for_each_row(is, 7, [&](const std::vector<double>& f) {
        Worker w{static_cast<WorkerId>(f[0]), {f[1], f[2]}, f[3], f[4], f[5], f[6], 0.0};
        validate(w);
        out.push_back(w);
    });
    return out;
}

void write_assignment_csv(std::ostream& os, const Assignment& a) {
    set_precision(os);
    os << "task_id,worker_id,arrival,approach_angle\n";
    for (const auto& p : a.pairs())
        os << p.task_id << ',' << p.worker_id << ',' << p.arrival << ',' << p.approach_angle
           << "\n";
}

Assignment read_assignment_csv(std::istream& is) {
    Assignment a;
    for_each_row(is, 4, [&](const std::vector<double>& f) {
        a.add({static_cast<TaskId>(f[0]), static_cast<WorkerId>(f[1]), f[2], f[3]});
    });
    return a;
}

std::string report_to_csv(const SimulationReport& rep) {
    std::ostringstream os;
    set_precision(os);
    os << "task_id,answers,successes,failures,error_score,rel,expected_std\n";
    for (const auto& t : rep.per_task)
        os << t.id << ',' << t.answers << ',' << t.successes << ',' << t.failures << ','
           << t.error_score << ',' << t.rel << ',' << t.expected_std << "\n";
    return os.str();
}

std::string report_to_json(const SimulationReport& rep) {
    nlohmann::json j;
    j["min_rel"] = rep.min_rel;
    j["total_std"] = rep.total_std;
    j["rounds"] = rep.rounds;
    j["assigned"] = rep.assigned;
    j["successes"] = rep.successes;
    j["failures"] = rep.failures;
    j["pending"] = rep.pending;
    j["solve_ms"] = rep.solve_ms;
    j["retrieval_ms"] = rep.retrieval_ms;
    j["per_task"] = nlohmann::json::array();
    for (const auto& t : rep.per_task)
        j["per_task"].push_back({{"id", t.id},
                                 {"answers", t.answers},
                                 {"successes", t.successes},
                                 {"failures", t.failures},
                                 {"error_score", t.error_score},
                                 {"rel", t.rel},
                                 {"expected_std", t.expected_std}});
    j["records"] = nlohmann::json::array();
    for (const auto& r : rep.records)
        j["records"].push_back({{"task_id", r.task_id},
                                {"worker_id", r.worker_id},
                                {"angle", r.angle},
                                {"time", r.time},
                                {"success", r.success}});
    return j.dump(2);
}

SimulationReport report_from_json(const std::string& json) {
    nlohmann::json j = nlohmann::json::parse(json);
    SimulationReport rep;
    rep.min_rel = j.at("min_rel");
    rep.total_std = j.at("total_std");
    rep.rounds = j.at("rounds");
    rep.assigned = j.at("assigned");
    rep.successes = j.at("successes");
    rep.failures = j.at("failures");
    rep.pending = j.at("pending");
    rep.solve_ms = j.at("solve_ms");
    rep.retrieval_ms = j.at("retrieval_ms");
    for (const auto& t : j.at("per_task"))
        rep.per_task.push_back({t.at("id"), t.at("answers"), t.at("successes"), t.at("failures"),
                                t.at("error_score"), t.at("rel"), t.at("expected_std")});
    for (const auto& r : j.at("records"))
        rep.records.push_back(
            {r.at("task_id"), r.at("worker_id"), r.at("angle"), r.at("time"), r.at("success")});
    return rep;
}

std::vector<Task> load_tasks(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    return read_tasks_csv(f);
}

std::vector<Worker> load_workers(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    return read_workers_csv(f);
}

void save_text(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << content;
    if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace rdbsc
