#pragma once

// Closed-form wave functions, densities and Bohmian velocity fields for the
// two-slit superposition and the three bipartite states built from it.
//
// Unless SuperpositionParams::exact_norm is set, normalization constants take
// their well-separated-slit value 1/sqrt(2); the neglected overlap is of order
// exp(-d^2 / 8 sigma0^2).

#include <complex>
#include <string>
#include <variant>
#include <vector>

#include "bohm/packets.hpp"

namespace bohm {

/// Velocity fields are not evaluated where the density drops below this value.
inline constexpr double kDensityFloor = 1e-280;

/// A point of configuration space; `y` is ignored by one-dimensional states.
struct ConfigPoint {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const ConfigPoint&, const ConfigPoint&) = default;
};

struct Velocity {
    double x = 0.0;
    double y = 0.0;
};

struct SuperpositionParams {
    /// Shared width, mass and hbar. Centroid and momentum of `base` are
    /// ignored: the packets sit at +/- d/2 with no transverse drift.
    PacketParams base;
    double d = 10.0; ///< slit separation, > 0
    bool exact_norm = false;

    void validate() const;
    /// True when d < 6 sigma0, i.e. the packet overlap is no longer negligible.
    [[nodiscard]] bool overlap_warning() const { return d < 6.0 * base.sigma0; }

    [[nodiscard]] double x_a() const { return 0.5 * d; }
    [[nodiscard]] double x_b() const { return -0.5 * d; }
    [[nodiscard]] PacketParams packet_a() const;
    [[nodiscard]] PacketParams packet_b() const;
    /// Exact normalization 1/sqrt(2 (1 + exp(-d^2/8 sigma0^2))).
    [[nodiscard]] double exact_normalization() const;
    /// Normalization in use (exact or 1/sqrt(2)).
    [[nodiscard]] double normalization() const;
};

enum class BipartiteKind {
    FactorizableSG, ///< superposition for X times single Gaussian for Y
    FactorizableSS, ///< identical superpositions for X and Y
    Entangled,      ///< Bell-type A(x)B(y) + B(x)A(y)
};

struct BipartiteState {
    BipartiteKind kind = BipartiteKind::Entangled;
    SuperpositionParams sup;
    PacketParams y_packet; ///< Y packet; only used by FactorizableSG

    void validate() const;
    /// Entangled-state normalization (exact or 1/sqrt(2)).
    [[nodiscard]] double normalization_entangled() const;
};

struct SingleGaussian {
    PacketParams packet;
};

struct Superposition {
    SuperpositionParams params;
};

/// The X subsystem of the entangled state, described by its reduced density
/// matrix. Its trajectories are the reduced (traced) dynamics.
struct ReducedEntangled {
    SuperpositionParams params;
};

using QuantumState = std::variant<SingleGaussian, Superposition, BipartiteState, ReducedEntangled>;

struct DensitySample {
    ConfigPoint point;
    double t = 0.0;
    double value = 0.0;
};

struct VelocitySample {
    ConfigPoint point;
    double t = 0.0;
    Velocity value;
};

// --- superposition ----------------------------------------------------------

double superposition_density(const SuperpositionParams& sup, double x, double t);
double superposition_velocity(const SuperpositionParams& sup, double x, double t);
std::complex<double> superposition_amplitude(const SuperpositionParams& sup, double x, double t);

/// Wavenumber k_t of the interference term.
double fringe_wavenumber(const SuperpositionParams& sup, double t);
/// Asymptotic distance 2 pi hbar t / (m d) between neighbouring minima.
double fringe_spacing(const SuperpositionParams& sup, double t);
/// Plateau momentum 2 pi hbar n / d.
double quantized_momentum(const SuperpositionParams& sup, int n);

// --- bipartite --------------------------------------------------------------

double joint_density(const BipartiteState& state, double x, double y, double t);
Velocity joint_velocity(const BipartiteState& state, double x, double y, double t);
std::complex<double> joint_amplitude(const BipartiteState& state, double x, double y, double t);

/// Overlap factor exp(-d^2 / 8 sigma0^2) weighting the reduced interference term.
double lambda_ab(const SuperpositionParams& sup);

// Reduced description of the entangled state. All throw WrongKind otherwise.
double reduced_density(const BipartiteState& state, double x, double t);
double reduced_velocity(const BipartiteState& state, double x, double t);
std::complex<double> reduced_density_matrix(const BipartiteState& state, double x, double xp, double t);
/// Overlap-free form: weighted mean of the two single-packet fields.
double reduced_velocity_simplified(const BipartiteState& state, double x, double t);
/// Long-time single-Gaussian field hbar^2 t x / (4 m^2 sigma0^2 sigma_t^2).
double reduced_velocity_long_time(const BipartiteState& state, double x, double t);
/// Long-time single-Gaussian density sqrt(2 m^2 sigma0^2 / (pi hbar^2 t^2)) exp(-x^2 / 2 sigma_t^2); t > 0.
double reduced_density_long_time(const BipartiteState& state, double x, double t);

// --- generic dispatch -------------------------------------------------------

int dimension(const QuantumState& state);
std::string kind_name(const QuantumState& state);
/// Mass, hbar and sigma0 shared by every packet of the state.
const PacketParams& units(const QuantumState& state);
void validate(const QuantumState& state);

double density(const QuantumState& state, ConfigPoint p, double t);
Velocity velocity(const QuantumState& state, ConfigPoint p, double t);
/// Wavenumber of the interference term (0 for a single packet).
double fringe_wavenumber(const QuantumState& state, double t);

std::vector<DensitySample> sample_density(const QuantumState& state, const std::vector<ConfigPoint>& points, double t);

} // namespace bohm
