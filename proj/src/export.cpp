#include "bohm/export.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include "bohm/errors.hpp"

namespace bohm {

std::string format_number(double value)
{
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    if (value == 0.0) {
        return "0"; // folds -0
    }
    std::array<char, 32> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) {
        throw InvalidArgument("number formatting failed");
    }
    return {buf.data(), end};
}

std::string describe_axis(const AxisSpec& axis)
{
    return axis.name + ":" + format_number(axis.min) + ":" + format_number(axis.max) + ":" + std::to_string(axis.count);
}

namespace {

void append_row(std::string& out, const std::vector<double>& values)
{
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += format_number(values[i]);
    }
    out += '\n';
}

} // namespace

std::string format_grid(const FieldGrid& grid)
{
    if (grid.axes.empty() || grid.axes.size() > 2) {
        throw InvalidArgument("grid export supports one or two axes");
    }
    std::size_t expected = 1;
    for (const AxisSpec& a : grid.axes) {
        expected *= a.count;
    }
    if (grid.values.size() != expected) {
        throw InvalidArgument("grid values do not match the axis sizes");
    }

    const bool time_axis = grid.axes.size() == 2 && grid.axes[1].name == "t";
    std::string out = "# quantity=" + grid.quantity;
    if (!time_axis) {
        out += " t=" + format_number(grid.t);
    }
    out += " axes=";
    std::string columns;
    for (std::size_t k = 0; k < grid.axes.size(); ++k) {
        out += (k ? ";" : "") + describe_axis(grid.axes[k]);
        columns += grid.axes[k].name + ",";
    }
    out += " columns=" + columns + "value\n";

    const std::size_t nx = grid.axes[0].count;
    const std::size_t ny = grid.axes.size() == 2 ? grid.axes[1].count : 1;
    std::vector<double> row;
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            row.clear();
            row.push_back(grid.axes[0].at(i));
            if (grid.axes.size() == 2) {
                row.push_back(grid.axes[1].at(j));
            }
            row.push_back(grid.values[j * nx + i]);
            append_row(out, row);
        }
    }
    return out;
}

void export_grid(const FieldGrid& grid, const std::filesystem::path& path) { write_text(path, format_grid(grid)); }

std::string format_trajectories(const std::vector<Trajectory>& trajectories)
{
    const int dim = trajectories.empty() ? 1 : trajectories.front().dimension;
    std::string out = "# trajectories dimension=" + std::to_string(dim) + " markers="
        + std::to_string(trajectories.size()) + " columns=" + (dim == 2 ? "t,x,y,v_x,v_y" : "t,x,v_x")
        + ",marker,status\n";
    for (const Trajectory& traj : trajectories) {
        const std::string tail = "," + std::to_string(traj.marker) + ",";
        for (std::size_t k = 0; k < traj.samples.size(); ++k) {
            const TrajectorySample& s = traj.samples[k];
            out += format_number(s.t) + ',' + format_number(s.point.x) + ',';
            if (dim == 2) {
                out += format_number(s.point.y) + ',';
            }
            out += format_number(s.velocity.x);
            if (dim == 2) {
                out += ',' + format_number(s.velocity.y);
            }
            // Status applies from the last sample on; earlier samples are regular.
            const bool last = k + 1 == traj.samples.size();
            out += tail + (last ? to_string(traj.status) : to_string(TrajectoryStatus::Complete)) + '\n';
        }
    }
    return out;
}

void export_trajectories(const std::vector<Trajectory>& trajectories, const std::filesystem::path& path)
{
    write_text(path, format_trajectories(trajectories));
}

std::string format_table(const Table& table)
{
    std::string out = "# " + table.header + " columns=";
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        out += (i ? "," : "") + table.columns[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size()) {
            throw InvalidArgument("table row width does not match its columns");
        }
        append_row(out, row);
    }
    return out;
}

void export_table(const Table& table, const std::filesystem::path& path) { write_text(path, format_table(table)); }

void write_text(const std::filesystem::path& path, const std::string& content)
{
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) {
            throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) {
        throw IoError("write to " + path.string() + " failed");
    }
}

} // namespace bohm
