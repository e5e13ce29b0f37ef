#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace arrival::cli {

// A data payload: numeric columns plus named checks.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    nlohmann::json checks = nlohmann::json::array();
};

// Shortest decimal that round-trips to the same double.
std::string shortest(double v);

std::string to_csv(const Table& t);
// Checks only, as name,value,tolerance,passed rows.
std::string checks_to_csv(const nlohmann::json& checks);
std::string to_json_text(const nlohmann::json& config, const Table& t);

// "-" writes to stdout; otherwise write a sibling temp file and rename it.
void write_output(const std::string& path, const std::string& content);

}  // namespace arrival::cli
