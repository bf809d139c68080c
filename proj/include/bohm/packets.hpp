#pragma once

// Free Gaussian wave packet in one dimension: spreading, amplitude, Bohmian
// velocity field and the closed-form trajectories it generates.
//
// Natural units (hbar = m = 1) are the defaults; every parameter can be
// overridden. All functions are pure.

#include <complex>

namespace bohm {

struct PacketParams {
    double x0 = 0.0;     ///< centroid at t = 0
    double p0 = 0.0;     ///< mean momentum
    double sigma0 = 0.5; ///< initial width, > 0
    double mass = 1.0;
    double hbar = 1.0;

    /// Throws InvalidArgument unless sigma0, mass and hbar are finite and positive.
    void validate() const;

    /// Characteristic time 2 m sigma0^2 / hbar separating near and far field.
    [[nodiscard]] double tau() const { return 2.0 * mass * sigma0 * sigma0 / hbar; }
    [[nodiscard]] double v0() const { return p0 / mass; }
    [[nodiscard]] double energy() const { return p0 * p0 / (2.0 * mass); }
    /// Classical centroid path x0 + v0 t.
    [[nodiscard]] double centroid(double t) const { return x0 + v0() * t; }
};

struct SpreadingState {
    std::complex<double> sigma_tilde; ///< sigma0 (1 + i t / tau)
    double sigma_t = 0.0;             ///< |sigma_tilde|
    double phi_t = 0.0;               ///< arg(sigma_tilde), in [0, pi/2)
    double t = 0.0;
};

SpreadingState spreading(const PacketParams& params, double t);

/// Natural log of the complex amplitude. Stays finite far in the tails where
/// the amplitude itself underflows.
std::complex<double> log_gaussian_amplitude(const PacketParams& params, double x, double t);

/// Normalized complex amplitude of the freely evolved packet.
std::complex<double> gaussian_amplitude(const PacketParams& params, double x, double t);

/// |amplitude|^2, evaluated directly in polar form.
double gaussian_density(const PacketParams& params, double x, double t);

/// Bohmian velocity field v0 + hbar^2 t (x - x_t) / (4 m^2 sigma0^2 sigma_t^2).
double single_velocity(const PacketParams& params, double x, double t);

/// Position at time t of the trajectory launched from x_init.
double analytic_trajectory(const PacketParams& params, double x_init, double t);

/// Field velocity evaluated along the trajectory launched from x_init.
double velocity_along_trajectory(const PacketParams& params, double x_init, double t);

/// Long-time limit of velocity_along_trajectory.
double asymptotic_velocity(const PacketParams& params, double x_init);

struct DiffusivePrefactors {
    double field_slope = 0.0;     ///< d v / d x at fixed t; peaks at t = tau
    double trajectory_rate = 0.0; ///< separation rate along trajectories; saturates at hbar / (2 m sigma0)
};

DiffusivePrefactors diffusive_prefactors(const PacketParams& params, double t);

namespace detail {
/// Throws InvalidArgument for non-finite or negative times.
void require_time(double t);
} // namespace detail

} // namespace bohm
