#pragma once

// Bohmian trajectory ensembles: initial-condition layouts, fixed-step RK4 and
// adaptive Dormand-Prince integration through the closed-form fields, and
// projections onto the single-particle subspaces.

#include <cstddef>
#include <string>
#include <vector>

#include "bohm/states.hpp"

namespace bohm {

enum class Layout { LineX, LineY, Cross, SquareGrid };

struct EnsembleSpec {
    Layout layout = Layout::LineX;
    int count_per_arm = 21;  ///< odd, so the centre is always a marker
    double half_width = 1.0; ///< markers span centre +/- half_width along each arm
    std::vector<ConfigPoint> centers;

    void validate() const;
    /// Markers in deterministic order: centre by centre, then along the layout.
    /// A Cross contributes 2 count - 1 markers per centre (the centre is shared).
    [[nodiscard]] std::vector<ConfigPoint> initial_points() const;
};

enum class Method { RK4, RK45 };

struct IntegratorConfig {
    Method method = Method::RK4;
    double dt = 1e-3;     ///< fixed step (RK4) or initial step (RK45)
    double dt_min = 1e-7; ///< below this a trajectory is halted
    double tol = 1e-8;    ///< local error tolerance for RK45
    double t_end = 10.0;
    int record_stride = 1; ///< store every n-th accepted step (the final step is always stored)
    int threads = 0;       ///< 0 picks the hardware concurrency

    void validate() const;
};

enum class TrajectoryStatus { Complete, HaltedNodeProximity };

std::string to_string(TrajectoryStatus s);

struct TrajectorySample {
    double t = 0.0;
    ConfigPoint point;
    Velocity velocity;
};

struct Trajectory {
    std::size_t marker = 0;
    int dimension = 1;
    ConfigPoint initial;
    std::vector<TrajectorySample> samples;
    TrajectoryStatus status = TrajectoryStatus::Complete;
};

/// Integrates one marker.
Trajectory integrate_marker(const QuantumState& state, ConfigPoint initial, const IntegratorConfig& cfg,
    std::size_t marker = 0);

/// One trajectory per marker, in marker order regardless of scheduling.
/// Throws InvalidInitialCondition if any marker starts below the density floor.
std::vector<Trajectory> integrate(const QuantumState& state, const EnsembleSpec& spec, const IntegratorConfig& cfg);
std::vector<Trajectory> integrate(const QuantumState& state, const std::vector<ConfigPoint>& initial,
    const IntegratorConfig& cfg);

enum class Axis { X, Y };

std::string to_string(Axis a);

/// One coordinate of a trajectory as a time series.
struct ProjectedSeries {
    std::size_t marker = 0;
    double initial = 0.0;       ///< projected coordinate at t = 0
    double slice = 0.0;         ///< the other coordinate at t = 0 (identifies the subspace slice)
    std::vector<double> t;
    std::vector<double> value;
};

std::vector<ProjectedSeries> project(const std::vector<Trajectory>& trajectories, Axis axis);

/// Smallest distance between two distinct markers of the ensemble at equal
/// recorded times, over the full configuration space.
double min_pairwise_separation(const std::vector<Trajectory>& trajectories);

} // namespace bohm
