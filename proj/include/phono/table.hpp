#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "phono/errors.hpp"
#include "phono/features.hpp"
#include "phono/recording.hpp"

namespace phono {

// Cycle-level feature matrix: one row per cardiac cycle.
struct FeatureTable {
    FeatureLayout layout = FeatureLayout::FULL100;
    struct Row {
        std::string id;
        std::size_t cycle_index = 0;
        ClassLabel label = ClassLabel::Unlabeled;
        std::vector<double> values;
    };
    std::vector<Row> rows;
};

namespace detail {

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace detail

inline void save_feature_table(const FeatureTable& table, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    const std::size_t d = layout_length(table.layout);
    out << "id,cycle_index,label";
    for (std::size_t j = 0; j < d; ++j) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), ",f%03zu", j);
        out << buf;
    }
    out << "\n";
    for (const auto& row : table.rows) {
        if (row.values.size() != d)
            throw LayoutMismatch("row with " + std::to_string(row.values.size()) +
                                 " values in a " + std::string(to_string(table.layout)) +
                                 " table");
        out << row.id << ',' << row.cycle_index << ',' << to_string(row.label);
        for (double v : row.values) out << ',' << detail::format_double(v);
        out << "\n";
    }
    if (!out) throw Error("short write to " + path.string());
}

inline FeatureTable load_feature_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw Error("empty feature file " + path.string());
    const auto header = detail::split_csv_line(line);
    if (header.size() < 4 || header[0] != "id" || header[1] != "cycle_index" ||
        header[2] != "label")
        throw Error("bad feature file header in " + path.string());
    const std::size_t d = header.size() - 3;

    FeatureTable table;
    switch (d) {
        case 40: table.layout = FeatureLayout::TD40; break;
        case 60: table.layout = FeatureLayout::CEP60; break;
        case 100: table.layout = FeatureLayout::FULL100; break;
        default:
            throw Error("feature file " + path.string() + " has unsupported width " +
                        std::to_string(d));
    }

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto cells = detail::split_csv_line(line);
        if (cells.size() != d + 3)
            throw Error(path.string() + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(d + 3) + " cells, found " + std::to_string(cells.size()));
        FeatureTable::Row row;
        row.id = cells[0];
        row.cycle_index = static_cast<std::size_t>(std::stoull(cells[1]));
        row.label = class_label_from_string(cells[2]);
        row.values.reserve(d);
        for (std::size_t j = 0; j < d; ++j) row.values.push_back(std::stod(cells[3 + j]));
        table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace phono
