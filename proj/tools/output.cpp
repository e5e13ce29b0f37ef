#include "output.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace arrival::cli {

std::string shortest(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string to_csv(const Table& t) {
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i) out += ',';
        out += t.columns[i];
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += shortest(row[i]);
        }
        out += '\n';
    }
    return out;
}

std::string checks_to_csv(const nlohmann::json& checks) {
    std::string out = "name,value,tolerance,passed\n";
    for (const auto& c : checks) {
        const auto num = [](const nlohmann::json& v) { return v.is_number() ? shortest(v.get<double>()) : "nan"; };
        out += c.at("name").get<std::string>() + ',' + num(c.at("value")) + ',' + num(c.at("tolerance")) + ',' +
               (c.at("passed").get<bool>() ? "true" : "false") + '\n';
    }
    return out;
}

std::string to_json_text(const nlohmann::json& config, const Table& t) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json r = nlohmann::json::array();
        for (double v : row) r.push_back(std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr));
        rows.push_back(std::move(r));
    }
    const nlohmann::json doc = {{"config", config}, {"columns", t.columns}, {"rows", rows}, {"checks", t.checks}};
    return doc.dump(2) + "\n";
}

void write_output(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content << std::flush;
        return;
    }
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("cannot rename output to '" + target.string() + "': " + ec.message());
    }
}

}  // namespace arrival::cli
