#pragma once

// Independent numerical check of the closed-form fields: Bohmian velocities
// obtained by differentiating the phase of the complex amplitude, and the
// residual of the continuity equation evaluated by finite differences.

#include <complex>
#include <functional>
#include <optional>

#include "bohm/grid.hpp"
#include "bohm/states.hpp"

namespace bohm {

struct OracleConfig {
    double fd_step = 1e-5;        ///< relative step: h = fd_step * max(1, |coordinate|)
    double density_floor = 1e-12; ///< refuse to differentiate below this |psi|^2

    void validate() const;
    [[nodiscard]] double step_at(double coordinate) const;
};

using Amplitude1D = std::function<std::complex<double>(double x, double t)>;
using Amplitude2D = std::function<std::complex<double>(double x, double y, double t)>;
/// Density-matrix element rho(x, x' | t) of a one-dimensional (sub)system.
using DensityMatrix1D = std::function<std::complex<double>(double x, double xp, double t)>;

/// (hbar/m) d/dx arg psi by central differences of arg(psi(x+h) / psi(x-h)).
double velocity_from_amplitude(const Amplitude1D& psi, double hbar_over_mass, double x, double t,
    const OracleConfig& cfg = {});

Velocity velocity_from_amplitude(const Amplitude2D& psi, double hbar_over_mass, ConfigPoint p, double t,
    const OracleConfig& cfg = {});

/// Reduced velocity (1/m) Re[p_x rho(x, x')] / Re[rho(x, x')] at x' = x.
double velocity_from_density_matrix(const DensityMatrix1D& rho, double hbar_over_mass, double x, double t,
    const OracleConfig& cfg = {});

/// Amplitude (or density matrix, for the reduced state) evaluator of a state.
Amplitude2D amplitude_of(const QuantumState& state);

/// Oracle velocity of any supported state at point p.
Velocity oracle_velocity(const QuantumState& state, ConfigPoint p, double t, const OracleConfig& cfg = {});

struct ContinuityGrid {
    AxisSpec x;
    std::optional<AxisSpec> y;
};

struct ContinuityResult {
    double max_abs_residual = 0.0;
    double max_abs_drho_dt = 0.0;
    double relative = 0.0; ///< max |residual| / max |d rho / dt|
    std::size_t points = 0;
};

/// d rho/dt + div(rho v) over the grid, using the closed-form density and
/// velocity. Time derivatives use a five-point stencil with step
/// 1e-4 max(1, t); the divergence a five-point stencil with the oracle step.
/// Throws GridTooCoarse if the grid holds fewer than eight samples per fringe.
ContinuityResult continuity_residual(const QuantumState& state, const ContinuityGrid& grid, double t,
    const OracleConfig& cfg = {});

} // namespace bohm
