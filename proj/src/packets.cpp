#include "bohm/packets.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bohm/errors.hpp"

namespace bohm {

namespace detail {

void require_time(double t)
{
    if (!std::isfinite(t)) {
        throw InvalidArgument("time must be finite");
    }
    if (t < 0.0) {
        throw InvalidArgument("time must be non-negative, got " + std::to_string(t));
    }
}

} // namespace detail

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

} // namespace

void PacketParams::validate() const
{
    if (!std::isfinite(x0) || !std::isfinite(p0)) {
        throw InvalidArgument("packet centroid and momentum must be finite");
    }
    if (!positive_finite(sigma0)) {
        throw InvalidArgument("sigma0 must be positive");
    }
    if (!positive_finite(mass)) {
        throw InvalidArgument("mass must be positive");
    }
    if (!positive_finite(hbar)) {
        throw InvalidArgument("hbar must be positive");
    }
    if (!positive_finite(tau())) {
        throw InvalidArgument("characteristic time 2 m sigma0^2 / hbar is not finite");
    }
}

SpreadingState spreading(const PacketParams& params, double t)
{
    detail::require_time(t);
    const double ratio = t / params.tau();
    SpreadingState s;
    s.t = t;
    s.sigma_tilde = {params.sigma0, params.sigma0 * ratio};
    s.sigma_t = params.sigma0 * std::hypot(1.0, ratio);
    s.phi_t = std::atan(ratio);
    return s;
}

std::complex<double> log_gaussian_amplitude(const PacketParams& params, double x, double t)
{
    const SpreadingState s = spreading(params, t);
    const double dx = x - params.centroid(t);
    const double norm = -0.25 * std::log(2.0 * std::numbers::pi);
    // (sigma_tilde^2)^(-1/4) with the principal branch; arg(sigma_tilde) < pi/2.
    const std::complex<double> prefactor = -0.5 * std::log(s.sigma_tilde);
    const std::complex<double> gauss = -dx * dx / (4.0 * params.sigma0 * s.sigma_tilde);
    const std::complex<double> phase{0.0, (params.p0 * dx + params.energy() * t) / params.hbar};
    return norm + prefactor + gauss + phase;
}

std::complex<double> gaussian_amplitude(const PacketParams& params, double x, double t)
{
    return std::exp(log_gaussian_amplitude(params, x, t));
}

double gaussian_density(const PacketParams& params, double x, double t)
{
    const SpreadingState s = spreading(params, t);
    const double dx = x - params.centroid(t);
    const double var = s.sigma_t * s.sigma_t;
    return std::exp(-dx * dx / (2.0 * var)) / std::sqrt(2.0 * std::numbers::pi * var);
}

double single_velocity(const PacketParams& params, double x, double t)
{
    return params.v0() + diffusive_prefactors(params, t).field_slope * (x - params.centroid(t));
}

double analytic_trajectory(const PacketParams& params, double x_init, double t)
{
    const SpreadingState s = spreading(params, t);
    return params.centroid(t) + (s.sigma_t / params.sigma0) * (x_init - params.x0);
}

double velocity_along_trajectory(const PacketParams& params, double x_init, double t)
{
    return params.v0() + diffusive_prefactors(params, t).trajectory_rate * (x_init - params.x0);
}

double asymptotic_velocity(const PacketParams& params, double x_init)
{
    return params.v0()
        + params.hbar * (x_init - params.x0) / (2.0 * params.mass * params.sigma0 * params.sigma0);
}

DiffusivePrefactors diffusive_prefactors(const PacketParams& params, double t)
{
    const SpreadingState s = spreading(params, t);
    const double m = params.mass;
    const double s0 = params.sigma0;
    const double base = params.hbar * params.hbar * t / (4.0 * m * m * s0 * s0);
    return {base / (s.sigma_t * s.sigma_t), base / (s0 * s.sigma_t)};
}

} // namespace bohm
