#pragma once

// Plain-text artifacts: one '#' metadata header line followed by
// comma-separated rows. Numbers use the shortest round-trip representation so
// identical inputs give byte-identical files.

#include <filesystem>
#include <string>
#include <vector>

#include "bohm/dynamics.hpp"
#include "bohm/grid.hpp"

namespace bohm {

std::string format_number(double value);

/// "name:min:max:count"
std::string describe_axis(const AxisSpec& axis);

/// Header plus one row per sample: axis coordinates then the value, first axis fastest.
std::string format_grid(const FieldGrid& grid);
void export_grid(const FieldGrid& grid, const std::filesystem::path& path);

/// Columns t, x[, y], v_x[, v_y], marker, status.
std::string format_trajectories(const std::vector<Trajectory>& trajectories);
void export_trajectories(const std::vector<Trajectory>& trajectories, const std::filesystem::path& path);

/// Generic table; `header` is the metadata text after '#'.
struct Table {
    std::string header;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

std::string format_table(const Table& table);
void export_table(const Table& table, const std::filesystem::path& path);

/// Writes `content`, creating parent directories. Throws IoError with the path on failure.
void write_text(const std::filesystem::path& path, const std::string& content);

} // namespace bohm
