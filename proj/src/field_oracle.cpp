#include "bohm/field_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "bohm/errors.hpp"

namespace bohm {

void OracleConfig::validate() const
{
    if (!(fd_step > 1e-9 && fd_step < 1e-2)) {
        throw InvalidArgument("fd_step must lie in (1e-9, 1e-2)");
    }
    if (!(density_floor > 0.0)) {
        throw InvalidArgument("density_floor must be positive");
    }
}

double OracleConfig::step_at(double coordinate) const
{
    return fd_step * std::max(1.0, std::abs(coordinate));
}

namespace {

void require_density(std::complex<double> psi, double floor)
{
    if (!(std::norm(psi) > floor)) {
        throw NodeProximity("amplitude density below oracle floor");
    }
}

// Phase difference across the stencil, taken from the ratio so that the
// 2 pi branch of arg never enters.
double phase_step(std::complex<double> plus, std::complex<double> minus)
{
    const double dphi = std::arg(plus / minus);
    if (std::abs(dphi) >= 0.5 * std::numbers::pi) {
        throw PhaseUnwrapFailure("phase jump of " + std::to_string(dphi) + " rad across finite-difference stencil");
    }
    return dphi;
}

} // namespace

double velocity_from_amplitude(const Amplitude1D& psi, double hbar_over_mass, double x, double t,
    const OracleConfig& cfg)
{
    cfg.validate();
    require_density(psi(x, t), cfg.density_floor);
    const double h = cfg.step_at(x);
    const std::complex<double> plus = psi(x + h, t);
    const std::complex<double> minus = psi(x - h, t);
    require_density(plus, cfg.density_floor);
    require_density(minus, cfg.density_floor);
    return hbar_over_mass * phase_step(plus, minus) / (2.0 * h);
}

Velocity velocity_from_amplitude(const Amplitude2D& psi, double hbar_over_mass, ConfigPoint p, double t,
    const OracleConfig& cfg)
{
    const double vx = velocity_from_amplitude(
        [&](double x, double tt) { return psi(x, p.y, tt); }, hbar_over_mass, p.x, t, cfg);
    const double vy = velocity_from_amplitude(
        [&](double y, double tt) { return psi(p.x, y, tt); }, hbar_over_mass, p.y, t, cfg);
    return {vx, vy};
}

double velocity_from_density_matrix(const DensityMatrix1D& rho, double hbar_over_mass, double x, double t,
    const OracleConfig& cfg)
{
    cfg.validate();
    const double diag = std::real(rho(x, x, t));
    if (!(diag > cfg.density_floor)) {
        throw NodeProximity("reduced density below oracle floor");
    }
    // hbar Im[d/dx rho(x, x')] / rho(x, x) with x' held at x, taken as the
    // derivative of arg rho so the Gaussian tails do not spoil the difference.
    const double h = cfg.step_at(x);
    const std::complex<double> plus = rho(x + h, x, t);
    const std::complex<double> minus = rho(x - h, x, t);
    require_density(plus, cfg.density_floor);
    require_density(minus, cfg.density_floor);
    return hbar_over_mass * phase_step(plus, minus) / (2.0 * h);
}

Amplitude2D amplitude_of(const QuantumState& state)
{
    if (const auto* s = std::get_if<SingleGaussian>(&state)) {
        const PacketParams p = s->packet;
        return [p](double x, double, double t) { return gaussian_amplitude(p, x, t); };
    }
    if (const auto* s = std::get_if<Superposition>(&state)) {
        const SuperpositionParams p = s->params;
        return [p](double x, double, double t) { return superposition_amplitude(p, x, t); };
    }
    if (const auto* s = std::get_if<BipartiteState>(&state)) {
        const BipartiteState b = *s;
        return [b](double x, double y, double t) { return joint_amplitude(b, x, y, t); };
    }
    throw WrongKind("the reduced state is a mixture and has no amplitude; use its density matrix");
}

Velocity oracle_velocity(const QuantumState& state, ConfigPoint p, double t, const OracleConfig& cfg)
{
    const PacketParams& u = units(state);
    const double hm = u.hbar / u.mass;
    if (const auto* r = std::get_if<ReducedEntangled>(&state)) {
        const BipartiteState b{BipartiteKind::Entangled, r->params, {}};
        auto rho = [b](double x, double xp, double tt) { return reduced_density_matrix(b, x, xp, tt); };
        return {velocity_from_density_matrix(rho, hm, p.x, t, cfg), 0.0};
    }
    const Amplitude2D psi = amplitude_of(state);
    if (dimension(state) == 1) {
        return {velocity_from_amplitude([&](double x, double tt) { return psi(x, 0.0, tt); }, hm, p.x, t, cfg), 0.0};
    }
    return velocity_from_amplitude(psi, hm, p, t, cfg);
}

namespace {

// Fourth-order first derivative from samples at offsets -2h..2h.
double central5(double fm2, double fm1, double fp1, double fp2, double h)
{
    return (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
}

double time_derivative(const QuantumState& state, ConfigPoint p, double t)
{
    const double dt = 1e-4 * std::max(1.0, t);
    auto rho = [&](double tt) { return density(state, p, tt); };
    if (t >= 2.0 * dt) {
        return central5(rho(t - 2 * dt), rho(t - dt), rho(t + dt), rho(t + 2 * dt), dt);
    }
    return (-25.0 * rho(t) + 48.0 * rho(t + dt) - 36.0 * rho(t + 2 * dt) + 16.0 * rho(t + 3 * dt)
               - 3.0 * rho(t + 4 * dt))
        / (12.0 * dt);
}

double flux_divergence(const QuantumState& state, ConfigPoint p, double t, const OracleConfig& cfg)
{
    auto flux_x = [&](double x) {
        const ConfigPoint q{x, p.y};
        return density(state, q, t) * velocity(state, q, t).x;
    };
    const double hx = cfg.step_at(p.x);
    double div = central5(flux_x(p.x - 2 * hx), flux_x(p.x - hx), flux_x(p.x + hx), flux_x(p.x + 2 * hx), hx);
    if (dimension(state) == 2) {
        auto flux_y = [&](double y) {
            const ConfigPoint q{p.x, y};
            return density(state, q, t) * velocity(state, q, t).y;
        };
        const double hy = cfg.step_at(p.y);
        div += central5(flux_y(p.y - 2 * hy), flux_y(p.y - hy), flux_y(p.y + hy), flux_y(p.y + 2 * hy), hy);
    }
    return div;
}

void check_resolution(const QuantumState& state, const AxisSpec& axis, double t)
{
    const double k = fringe_wavenumber(state, t);
    if (k <= 0.0) {
        return;
    }
    const double per_fringe = (2.0 * std::numbers::pi / k) / axis.step();
    if (per_fringe < 8.0) {
        throw GridTooCoarse("axis '" + axis.name + "' has " + std::to_string(per_fringe)
            + " samples per fringe; at least 8 are required");
    }
}

} // namespace

ContinuityResult continuity_residual(const QuantumState& state, const ContinuityGrid& grid, double t,
    const OracleConfig& cfg)
{
    cfg.validate();
    detail::require_time(t);
    grid.x.validate();
    check_resolution(state, grid.x, t);
    const bool two_d = dimension(state) == 2;
    if (two_d) {
        if (!grid.y) {
            throw InvalidArgument("bipartite continuity check needs a y axis");
        }
        grid.y->validate();
        check_resolution(state, *grid.y, t);
    }

    ContinuityResult out;
    const std::size_t ny = two_d ? grid.y->count : 1;
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < grid.x.count; ++i) {
            const ConfigPoint p{grid.x.at(i), two_d ? grid.y->at(j) : 0.0};
            double div = 0.0;
            try {
                div = flux_divergence(state, p, t, cfg);
            } catch (const DensityUnderflow&) {
                continue; // flux is numerically zero where the velocity is undefined
            }
            const double drho = time_derivative(state, p, t);
            out.max_abs_drho_dt = std::max(out.max_abs_drho_dt, std::abs(drho));
            out.max_abs_residual = std::max(out.max_abs_residual, std::abs(drho + div));
            ++out.points;
        }
    }
    out.relative = out.max_abs_drho_dt > 0.0 ? out.max_abs_residual / out.max_abs_drho_dt : out.max_abs_residual;
    return out;
}

} // namespace bohm
