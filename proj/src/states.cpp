#include "bohm/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bohm/errors.hpp"

namespace bohm {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

double sq(double v) { return v * v; }

// Time-dependent quantities shared by every two-slit expression.
struct Frame {
    double a = 0.0;         // d/2
    double var = 0.0;       // sigma_t^2
    double theta = 0.0;     // t / tau
    double k = 0.0;         // interference wavenumber k_t
    double scale = 0.0;     // hbar / (2 m sigma_t^2)
    double log_gauss = 0.0; // log (2 pi sigma_t^2)^(-1/2)
};

Frame make_frame(const SuperpositionParams& sup, double t)
{
    const SpreadingState s = spreading(sup.base, t);
    Frame f;
    f.a = sup.x_a();
    f.var = s.sigma_t * s.sigma_t;
    f.theta = t / sup.base.tau();
    f.k = f.theta * f.a / f.var;
    f.scale = sup.base.hbar / (2.0 * sup.base.mass * f.var);
    f.log_gauss = -0.5 * std::log(2.0 * std::numbers::pi * f.var);
    return f;
}

// Two Gaussian terms w1, w2 and their interference term sqrt(w1 w2) cos(phase)
// weighted by `coherence`, all scaled by exp(-log_max). The incoherent part is
// written as (sqrt(w1) - sqrt(w2))^2 + 2 sqrt(w1 w2) so that the density stays
// accurate next to interference nodes.
struct Terms {
    double log_max = 0.0;
    double w1 = 0.0;
    double w2 = 0.0;
    double wc = 0.0;
    double cos_phase = 0.0;
    double sin_phase = 0.0;
    double den = 0.0;
};

Terms make_terms(double l1, double l2, double phase, double coherence)
{
    Terms r;
    r.log_max = std::max(l1, l2);
    const double h1 = std::exp(0.5 * (l1 - r.log_max));
    const double h2 = std::exp(0.5 * (l2 - r.log_max));
    r.w1 = h1 * h1;
    r.w2 = h2 * h2;
    r.wc = h1 * h2;
    r.cos_phase = std::cos(phase);
    r.sin_phase = std::sin(phase);
    const double half_cos = std::cos(0.5 * phase);
    const double one_plus = (1.0 - coherence) + coherence * 2.0 * half_cos * half_cos;
    r.den = sq(h1 - h2) + 2.0 * r.wc * one_plus;
    return r;
}

double log_density(const Terms& terms, double log_prefactor)
{
    return log_prefactor + terms.log_max + std::log(terms.den);
}

void require_support(double log_rho, const char* what)
{
    if (!(log_rho >= std::log(kDensityFloor))) {
        throw DensityUnderflow(std::string(what) + ": density below evaluation floor");
    }
}

Terms superposition_terms(const Frame& f, double x, double coherence)
{
    const double l1 = -sq(x - f.a) / (2.0 * f.var);
    const double l2 = -sq(x + f.a) / (2.0 * f.var);
    return make_terms(l1, l2, f.k * x, coherence);
}

// Velocity of a one-dimensional two-packet mixture whose interference term
// carries weight `coherence` (1 for the pure superposition, Lambda_AB for the
// reduced entangled state).
double mixture_velocity(const Frame& f, const Terms& r, double x, double coherence)
{
    const double cross = coherence * r.wc;
    const double num = f.theta * ((x - f.a) * r.w1 + (x + f.a) * r.w2 + 2.0 * x * cross * r.cos_phase)
        - 2.0 * f.a * cross * r.sin_phase;
    return f.scale * num / r.den;
}

const SuperpositionParams& require_entangled(const BipartiteState& state)
{
    if (state.kind != BipartiteKind::Entangled) {
        throw WrongKind("reduced description is defined for the entangled state only");
    }
    return state.sup;
}

} // namespace

// --- parameters ---------------------------------------------------------------

void SuperpositionParams::validate() const
{
    base.validate();
    if (!std::isfinite(d) || d <= 0.0) {
        throw InvalidArgument("slit separation d must be positive");
    }
}

PacketParams SuperpositionParams::packet_a() const
{
    PacketParams p = base;
    p.x0 = x_a();
    p.p0 = 0.0;
    return p;
}

PacketParams SuperpositionParams::packet_b() const
{
    PacketParams p = base;
    p.x0 = x_b();
    p.p0 = 0.0;
    return p;
}

double SuperpositionParams::exact_normalization() const
{
    return 1.0 / std::sqrt(2.0 * (1.0 + std::exp(-d * d / (8.0 * base.sigma0 * base.sigma0))));
}

double SuperpositionParams::normalization() const
{
    return exact_norm ? exact_normalization() : kInvSqrt2;
}

void BipartiteState::validate() const
{
    sup.validate();
    if (kind == BipartiteKind::FactorizableSG) {
        y_packet.validate();
    }
}

double BipartiteState::normalization_entangled() const
{
    if (!sup.exact_norm) {
        return kInvSqrt2;
    }
    const double s0 = sup.base.sigma0;
    return 1.0 / std::sqrt(2.0 * (1.0 + std::exp(-sup.d * sup.d / (4.0 * s0 * s0))));
}

// --- superposition ------------------------------------------------------------

double fringe_wavenumber(const SuperpositionParams& sup, double t) { return make_frame(sup, t).k; }

double fringe_spacing(const SuperpositionParams& sup, double t)
{
    detail::require_time(t);
    return 2.0 * std::numbers::pi * sup.base.hbar * t / (sup.base.mass * sup.d);
}

double quantized_momentum(const SuperpositionParams& sup, int n)
{
    return 2.0 * std::numbers::pi * sup.base.hbar * n / sup.d;
}

double superposition_density(const SuperpositionParams& sup, double x, double t)
{
    const Frame f = make_frame(sup, t);
    const Terms r = superposition_terms(f, x, 1.0);
    const double norm2 = sq(sup.normalization());
    return std::exp(log_density(r, std::log(norm2) + f.log_gauss));
}

double superposition_velocity(const SuperpositionParams& sup, double x, double t)
{
    const Frame f = make_frame(sup, t);
    const Terms r = superposition_terms(f, x, 1.0);
    require_support(log_density(r, 2.0 * std::log(sup.normalization()) + f.log_gauss), "superposition");
    return mixture_velocity(f, r, x, 1.0);
}

std::complex<double> superposition_amplitude(const SuperpositionParams& sup, double x, double t)
{
    return sup.normalization() * (gaussian_amplitude(sup.packet_a(), x, t) + gaussian_amplitude(sup.packet_b(), x, t));
}

// --- bipartite ----------------------------------------------------------------

namespace {

double log_superposition_density(const SuperpositionParams& sup, const Frame& f, double x)
{
    const Terms r = superposition_terms(f, x, 1.0);
    return log_density(r, 2.0 * std::log(sup.normalization()) + f.log_gauss);
}

double log_single_density(const PacketParams& p, double y, double t)
{
    const SpreadingState s = spreading(p, t);
    const double var = s.sigma_t * s.sigma_t;
    return -sq(y - p.centroid(t)) / (2.0 * var) - 0.5 * std::log(2.0 * std::numbers::pi * var);
}

Terms entangled_terms(const Frame& f, double x, double y)
{
    const double l1 = -(sq(x - f.a) + sq(y + f.a)) / (2.0 * f.var);
    const double l2 = -(sq(x + f.a) + sq(y - f.a)) / (2.0 * f.var);
    return make_terms(l1, l2, f.k * (x - y), 1.0);
}

double entangled_log_prefactor(const BipartiteState& state, const Frame& f)
{
    return 2.0 * std::log(state.normalization_entangled()) + 2.0 * f.log_gauss;
}

} // namespace

double joint_density(const BipartiteState& state, double x, double y, double t)
{
    const SuperpositionParams& sup = state.sup;
    switch (state.kind) {
    case BipartiteKind::FactorizableSG:
        return superposition_density(sup, x, t) * gaussian_density(state.y_packet, y, t);
    case BipartiteKind::FactorizableSS:
        return superposition_density(sup, x, t) * superposition_density(sup, y, t);
    case BipartiteKind::Entangled: {
        const Frame f = make_frame(sup, t);
        const Terms r = entangled_terms(f, x, y);
        return std::exp(log_density(r, entangled_log_prefactor(state, f)));
    }
    }
    throw WrongKind("unknown bipartite kind");
}

Velocity joint_velocity(const BipartiteState& state, double x, double y, double t)
{
    const SuperpositionParams& sup = state.sup;
    const Frame f = make_frame(sup, t);
    switch (state.kind) {
    case BipartiteKind::FactorizableSG: {
        require_support(log_superposition_density(sup, f, x) + log_single_density(state.y_packet, y, t), "joint");
        const Terms r = superposition_terms(f, x, 1.0);
        return {mixture_velocity(f, r, x, 1.0), single_velocity(state.y_packet, y, t)};
    }
    case BipartiteKind::FactorizableSS: {
        require_support(log_superposition_density(sup, f, x) + log_superposition_density(sup, f, y), "joint");
        const Terms rx = superposition_terms(f, x, 1.0);
        const Terms ry = superposition_terms(f, y, 1.0);
        return {mixture_velocity(f, rx, x, 1.0), mixture_velocity(f, ry, y, 1.0)};
    }
    case BipartiteKind::Entangled: {
        const Terms r = entangled_terms(f, x, y);
        require_support(log_density(r, entangled_log_prefactor(state, f)), "entangled");
        const double a = f.a;
        const double num_x = f.theta * ((x - a) * r.w1 + (x + a) * r.w2 + 2.0 * x * r.wc * r.cos_phase)
            - 2.0 * a * r.wc * r.sin_phase;
        const double num_y = f.theta * ((y + a) * r.w1 + (y - a) * r.w2 + 2.0 * y * r.wc * r.cos_phase)
            + 2.0 * a * r.wc * r.sin_phase;
        return {f.scale * num_x / r.den, f.scale * num_y / r.den};
    }
    }
    throw WrongKind("unknown bipartite kind");
}

std::complex<double> joint_amplitude(const BipartiteState& state, double x, double y, double t)
{
    const SuperpositionParams& sup = state.sup;
    switch (state.kind) {
    case BipartiteKind::FactorizableSG:
        return superposition_amplitude(sup, x, t) * gaussian_amplitude(state.y_packet, y, t);
    case BipartiteKind::FactorizableSS:
        return superposition_amplitude(sup, x, t) * superposition_amplitude(sup, y, t);
    case BipartiteKind::Entangled: {
        const PacketParams pa = sup.packet_a();
        const PacketParams pb = sup.packet_b();
        // Sum in log space so that far-tail factors do not underflow before multiplying.
        const std::complex<double> t1 = log_gaussian_amplitude(pa, x, t) + log_gaussian_amplitude(pb, y, t);
        const std::complex<double> t2 = log_gaussian_amplitude(pb, x, t) + log_gaussian_amplitude(pa, y, t);
        return state.normalization_entangled() * (std::exp(t1) + std::exp(t2));
    }
    }
    throw WrongKind("unknown bipartite kind");
}

double lambda_ab(const SuperpositionParams& sup)
{
    const double s0 = sup.base.sigma0;
    return std::exp(-sup.d * sup.d / (8.0 * s0 * s0));
}

double reduced_density(const BipartiteState& state, double x, double t)
{
    const SuperpositionParams& sup = require_entangled(state);
    const Frame f = make_frame(sup, t);
    const Terms r = superposition_terms(f, x, lambda_ab(sup));
    return std::exp(log_density(r, 2.0 * std::log(state.normalization_entangled()) + f.log_gauss));
}

double reduced_velocity(const BipartiteState& state, double x, double t)
{
    const SuperpositionParams& sup = require_entangled(state);
    const Frame f = make_frame(sup, t);
    const double lambda = lambda_ab(sup);
    const Terms r = superposition_terms(f, x, lambda);
    require_support(log_density(r, 2.0 * std::log(state.normalization_entangled()) + f.log_gauss), "reduced");
    return mixture_velocity(f, r, x, lambda);
}

std::complex<double> reduced_density_matrix(const BipartiteState& state, double x, double xp, double t)
{
    const SuperpositionParams& sup = require_entangled(state);
    const PacketParams pa = sup.packet_a();
    const PacketParams pb = sup.packet_b();
    const std::complex<double> ax = gaussian_amplitude(pa, x, t);
    const std::complex<double> bx = gaussian_amplitude(pb, x, t);
    const std::complex<double> axp = std::conj(gaussian_amplitude(pa, xp, t));
    const std::complex<double> bxp = std::conj(gaussian_amplitude(pb, xp, t));
    const double lambda = lambda_ab(sup);
    const double n2 = sq(state.normalization_entangled());
    return n2 * (ax * axp + bx * bxp + lambda * (ax * bxp + bx * axp));
}

double reduced_velocity_simplified(const BipartiteState& state, double x, double t)
{
    const SuperpositionParams& sup = require_entangled(state);
    const Frame f = make_frame(sup, t);
    const Terms r = superposition_terms(f, x, 0.0);
    const double slope = f.theta * f.scale;
    return slope * ((x - f.a) * r.w1 + (x + f.a) * r.w2) / (r.w1 + r.w2);
}

double reduced_velocity_long_time(const BipartiteState& state, double x, double t)
{
    const SuperpositionParams& sup = require_entangled(state);
    return diffusive_prefactors(sup.base, t).field_slope * x;
}

double reduced_density_long_time(const BipartiteState& state, double x, double t)
{
    const SuperpositionParams& sup = require_entangled(state);
    detail::require_time(t);
    if (t <= 0.0) {
        throw InvalidArgument("long-time reduced density needs t > 0");
    }
    const PacketParams& p = sup.base;
    const SpreadingState s = spreading(p, t);
    const double amp = std::sqrt(2.0 * sq(p.mass * p.sigma0) / (std::numbers::pi * sq(p.hbar * t)));
    return amp * std::exp(-x * x / (2.0 * s.sigma_t * s.sigma_t));
}

// --- generic dispatch ---------------------------------------------------------

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

int dimension(const QuantumState& state)
{
    return std::holds_alternative<BipartiteState>(state) ? 2 : 1;
}

std::string kind_name(const QuantumState& state)
{
    return std::visit(overloaded{
                          [](const SingleGaussian&) -> std::string { return "single_gaussian"; },
                          [](const Superposition&) -> std::string { return "superposition"; },
                          [](const ReducedEntangled&) -> std::string { return "reduced_entangled"; },
                          [](const BipartiteState& b) -> std::string {
                              switch (b.kind) {
                              case BipartiteKind::FactorizableSG: return "factorizable_sg";
                              case BipartiteKind::FactorizableSS: return "factorizable_ss";
                              case BipartiteKind::Entangled: return "entangled";
                              }
                              return "bipartite";
                          },
                      },
        state);
}

const PacketParams& units(const QuantumState& state)
{
    return std::visit(overloaded{
                          [](const SingleGaussian& s) -> const PacketParams& { return s.packet; },
                          [](const Superposition& s) -> const PacketParams& { return s.params.base; },
                          [](const ReducedEntangled& s) -> const PacketParams& { return s.params.base; },
                          [](const BipartiteState& s) -> const PacketParams& { return s.sup.base; },
                      },
        state);
}

void validate(const QuantumState& state)
{
    std::visit(overloaded{
                   [](const SingleGaussian& s) { s.packet.validate(); },
                   [](const Superposition& s) { s.params.validate(); },
                   [](const ReducedEntangled& s) { s.params.validate(); },
                   [](const BipartiteState& s) { s.validate(); },
               },
        state);
}

double density(const QuantumState& state, ConfigPoint p, double t)
{
    return std::visit(overloaded{
                          [&](const SingleGaussian& s) { return gaussian_density(s.packet, p.x, t); },
                          [&](const Superposition& s) { return superposition_density(s.params, p.x, t); },
                          [&](const ReducedEntangled& s) {
                              return reduced_density({BipartiteKind::Entangled, s.params, {}}, p.x, t);
                          },
                          [&](const BipartiteState& s) { return joint_density(s, p.x, p.y, t); },
                      },
        state);
}

Velocity velocity(const QuantumState& state, ConfigPoint p, double t)
{
    return std::visit(overloaded{
                          [&](const SingleGaussian& s) {
                              if (!(gaussian_density(s.packet, p.x, t) >= kDensityFloor)) {
                                  throw DensityUnderflow("single gaussian: density below evaluation floor");
                              }
                              return Velocity{single_velocity(s.packet, p.x, t), 0.0};
                          },
                          [&](const Superposition& s) { return Velocity{superposition_velocity(s.params, p.x, t), 0.0}; },
                          [&](const ReducedEntangled& s) {
                              return Velocity{reduced_velocity({BipartiteKind::Entangled, s.params, {}}, p.x, t), 0.0};
                          },
                          [&](const BipartiteState& s) { return joint_velocity(s, p.x, p.y, t); },
                      },
        state);
}

double fringe_wavenumber(const QuantumState& state, double t)
{
    return std::visit(overloaded{
                          [&](const SingleGaussian&) { return 0.0; },
                          [&](const Superposition& s) { return fringe_wavenumber(s.params, t); },
                          [&](const ReducedEntangled& s) { return fringe_wavenumber(s.params, t); },
                          [&](const BipartiteState& s) { return fringe_wavenumber(s.sup, t); },
                      },
        state);
}

std::vector<DensitySample> sample_density(const QuantumState& state, const std::vector<ConfigPoint>& points, double t)
{
    std::vector<DensitySample> out;
    out.reserve(points.size());
    for (const ConfigPoint& p : points) {
        out.push_back({p, t, density(state, p, t)});
    }
    return out;
}

} // namespace bohm
