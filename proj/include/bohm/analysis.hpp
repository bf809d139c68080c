#pragma once

// Diagnostics that turn sampled fields and trajectory ensembles into the
// quantitative statements about fringes, momentum plateaus, subspace
// crossings and decoherence of the reduced state.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "bohm/dynamics.hpp"
#include "bohm/grid.hpp"
#include "bohm/states.hpp"

namespace bohm {

/// Samples of a scalar function along one coordinate (position or arc length).
struct Slice {
    std::vector<double> coords;
    std::vector<double> values;
};

Slice make_slice(const std::function<double(double)>& f, const AxisSpec& axis);

/// Joint density along y = x (`anti = false`) or y = -x (`anti = true`),
/// parametrized by arc length s: (x, y) = (s, +/- s) / sqrt(2).
Slice diagonal_slice(const BipartiteState& state, double t, const AxisSpec& arc, bool anti);

/// Composite Simpson rule on uniform samples (3/8 rule closes an even count).
double simpson(std::span<const double> f, double h);

/// sqrt(integral (a - b)^2) over the common uniform coordinates of two slices.
double l2_distance(const Slice& a, const Slice& b);

struct FringeReport {
    double t = 0.0;
    std::vector<double> minima; ///< refined positions, ascending
    double spacing_mean = 0.0; ///< over the three central fringes
    double spacing_std = 0.0;
    double visibility = 0.0;
};

/// (rho_max - rho_min) / (rho_max + rho_min) over the three central fringes;
/// 0 when the slice has no interior minimum.
double fringe_visibility(const Slice& density);

/// Local-minimum scan with parabolic refinement. Throws NoFringes when the
/// visibility is below 0.05 and GridTooCoarse when `expected_period` is given
/// and sampled with fewer than eight points.
FringeReport detect_fringes(const Slice& density, double t, std::optional<double> expected_period = std::nullopt);

struct Plateau {
    int n = 0;
    double mean_velocity = 0.0; ///< field velocity at the midpoint between the bounding spikes
    double lo = 0.0;            ///< bounding spike positions
    double hi = 0.0;
    double expected = 0.0;      ///< hbar kappa_n / m
};

struct PlateauReport {
    double t = 0.0;
    double kappa_unit = 0.0; ///< 2 pi hbar / d
    std::vector<Plateau> plateaus;
    bool early_time = false; ///< t < 5 tau, where plateaus are not yet formed

    [[nodiscard]] const Plateau* find(int n) const;
};

/// Segments the velocity slice at its spikes (dips for x > 0, peaks for
/// x < 0) and reports the level of every complete segment.
PlateauReport extract_plateaus(const Slice& velocity, double t, const SuperpositionParams& sup);

struct Crossing {
    std::size_t marker_a = 0;
    std::size_t marker_b = 0;
    double time = 0.0;
};

struct CrossingReport {
    Axis axis = Axis::X;
    std::vector<Crossing> pairs; ///< first crossing of every pair, ordered by time

    [[nodiscard]] bool empty() const { return pairs.empty(); }
    [[nodiscard]] std::optional<double> earliest() const;
};

/// Pairs of trajectories whose projections onto `axis` change order. Pairs
/// that start coincident take their reference order from the first
/// separation above `threshold`; smaller separations never count as crossed.
CrossingReport census_crossings(const std::vector<Trajectory>& trajectories, Axis axis, double threshold = 1e-9);

using JointDensity = std::function<double(double x, double y)>;

/// Numerical marginal: integrates the joint density over `traced` on the
/// `over` axis, for every coordinate of `keep`. Throws GridTooCoarse when
/// `over` is coarser than min_feature / 4.
Slice trace_out(const JointDensity& joint, Axis traced, const AxisSpec& keep, const AxisSpec& over,
    double min_feature);

/// Marginal of a bipartite state at time t; resolution checked against sigma_t and the fringe period.
Slice trace_out(const BipartiteState& state, Axis traced, const AxisSpec& keep, const AxisSpec& over, double t);

} // namespace bohm
