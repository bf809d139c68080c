#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bohm/states.hpp"

namespace bohm {

/// Uniformly sampled axis including both end points.
struct AxisSpec {
    std::string name = "x";
    double min = 0.0;
    double max = 1.0;
    std::size_t count = 2;

    void validate() const;
    [[nodiscard]] double step() const { return count > 1 ? (max - min) / static_cast<double>(count - 1) : 0.0; }
    [[nodiscard]] double at(std::size_t i) const;
    [[nodiscard]] std::vector<double> samples() const;
};

/// Scalar field sampled on one or two axes. Values are stored row-major with
/// the first axis varying fastest: values[j * axes[0].count + i].
struct FieldGrid {
    std::string quantity;
    double t = 0.0; ///< snapshot time (ignored when an axis is time)
    std::vector<AxisSpec> axes;
    std::vector<double> values;

    [[nodiscard]] std::size_t size() const { return values.size(); }
    [[nodiscard]] double at(std::size_t i, std::size_t j = 0) const { return values[j * axes.front().count + i]; }
};

enum class FieldQuantity { Density, VelocityX, VelocityY };

std::string to_string(FieldQuantity q);

/// Snapshot of a field over configuration space. A second axis is required
/// for bipartite states. Velocities below the density floor are stored as NaN.
FieldGrid sample_field(const QuantumState& state, FieldQuantity quantity, const AxisSpec& x,
    const std::optional<AxisSpec>& y, double t);

/// Space-time map of a one-dimensional state: axes (x, t).
FieldGrid sample_spacetime(const QuantumState& state, FieldQuantity quantity, const AxisSpec& x, const AxisSpec& t);

/// Symmetric axis wide enough for the two-packet envelope at time t and
/// fine enough to put at least `per_fringe` samples in each fringe.
AxisSpec auto_axis(const SuperpositionParams& sup, double t, std::string name, double per_fringe = 8.0,
    std::size_t min_count = 201);

} // namespace bohm
