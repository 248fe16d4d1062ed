#pragma once

#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "rdbsc/model.hpp"
#include "rdbsc/simulate.hpp"

namespace rdbsc {

// CSV schemas (stable, with header rows):
//   tasks:        id,x,y,s,e,beta
//   workers:      id,x,y,v,alo,ahi,p
//   assignment:   task_id,worker_id,arrival,approach_angle
//   trajectories: wid,t,x,y

void write_tasks_csv(std::ostream& os, std::span<const Task> tasks);
std::vector<Task> read_tasks_csv(std::istream& is);

void write_workers_csv(std::ostream& os, std::span<const Worker> workers);
std::vector<Worker> read_workers_csv(std::istream& is);

void write_assignment_csv(std::ostream& os, const Assignment& a);
Assignment read_assignment_csv(std::istream& is);

std::string report_to_csv(const SimulationReport& rep);
std::string report_to_json(const SimulationReport& rep);
SimulationReport report_from_json(const std::string& json);

std::vector<Task> load_tasks(const std::string& path);
std::vector<Worker> load_workers(const std::string& path);
void save_text(const std::string& path, const std::string& content);

}  // namespace rdbsc
