#include "bohm/grid.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "bohm/errors.hpp"

namespace bohm {

void AxisSpec::validate() const
{
    if (!std::isfinite(min) || !std::isfinite(max) || !(max > min)) {
        throw InvalidArgument("axis '" + name + "' needs finite bounds with max > min");
    }
    if (count < 2) {
        throw InvalidArgument("axis '" + name + "' needs at least two samples");
    }
}

double AxisSpec::at(std::size_t i) const
{
    // Pin the last sample to `max` exactly.
    if (i + 1 == count) {
        return max;
    }
    return min + static_cast<double>(i) * step();
}

std::vector<double> AxisSpec::samples() const
{
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = at(i);
    }
    return out;
}

std::string to_string(FieldQuantity q)
{
    switch (q) {
    case FieldQuantity::Density: return "density";
    case FieldQuantity::VelocityX: return "velocity_x";
    case FieldQuantity::VelocityY: return "velocity_y";
    }
    return "unknown";
}

namespace {

double evaluate(const QuantumState& state, FieldQuantity q, ConfigPoint p, double t)
{
    if (q == FieldQuantity::Density) {
        return density(state, p, t);
    }
    try {
        const Velocity v = velocity(state, p, t);
        return q == FieldQuantity::VelocityX ? v.x : v.y;
    } catch (const DensityUnderflow&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

} // namespace

FieldGrid sample_field(const QuantumState& state, FieldQuantity quantity, const AxisSpec& x,
    const std::optional<AxisSpec>& y, double t)
{
    x.validate();
    const int dim = dimension(state);
    if (dim == 2 && !y) {
        throw InvalidArgument("bipartite field grid needs a y axis");
    }
    if (dim == 1 && quantity == FieldQuantity::VelocityY) {
        throw InvalidArgument("one-dimensional state has no y velocity");
    }
    FieldGrid grid;
    grid.quantity = to_string(quantity);
    grid.t = t;
    grid.axes.push_back(x);
    std::size_t ny = 1;
    if (dim == 2) {
        y->validate();
        grid.axes.push_back(*y);
        ny = y->count;
    }
    grid.values.resize(x.count * ny);
    for (std::size_t j = 0; j < ny; ++j) {
        const double yv = dim == 2 ? y->at(j) : 0.0;
        for (std::size_t i = 0; i < x.count; ++i) {
            grid.values[j * x.count + i] = evaluate(state, quantity, {x.at(i), yv}, t);
        }
    }
    return grid;
}

FieldGrid sample_spacetime(const QuantumState& state, FieldQuantity quantity, const AxisSpec& x, const AxisSpec& t)
{
    if (dimension(state) != 1) {
        throw InvalidArgument("space-time maps are defined for one-dimensional states");
    }
    if (quantity == FieldQuantity::VelocityY) {
        throw InvalidArgument("one-dimensional state has no y velocity");
    }
    x.validate();
    t.validate();
    if (t.min < 0.0) {
        throw InvalidArgument("time axis must start at t >= 0");
    }
    FieldGrid grid;
    grid.quantity = to_string(quantity);
    grid.axes = {x, t};
    grid.values.resize(x.count * t.count);
    for (std::size_t j = 0; j < t.count; ++j) {
        for (std::size_t i = 0; i < x.count; ++i) {
            grid.values[j * x.count + i] = evaluate(state, quantity, {x.at(i), 0.0}, t.at(j));
        }
    }
    return grid;
}

AxisSpec auto_axis(const SuperpositionParams& sup, double t, std::string name, double per_fringe,
    std::size_t min_count)
{
    const double sigma_t = spreading(sup.base, t).sigma_t;
    const double half = sup.x_a() + 8.0 * sigma_t;
    std::size_t count = min_count;
    const double k = fringe_wavenumber(sup, t);
    if (k > 0.0) {
        const double period = 2.0 * std::numbers::pi / k;
        const double needed = std::ceil(per_fringe * 2.0 * half / period) + 1.0;
        if (needed > static_cast<double>(count)) {
            count = static_cast<std::size_t>(needed);
        }
    }
    if (count % 2 == 0) {
        ++count; // keep x = 0 on the grid
    }
    return {std::move(name), -half, half, count};
}

} // namespace bohm
