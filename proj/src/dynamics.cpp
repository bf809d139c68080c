#include "bohm/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "bohm/errors.hpp"

namespace bohm {

void EnsembleSpec::validate() const
{
    if (count_per_arm < 1 || count_per_arm % 2 == 0) {
        throw InvalidArgument("count_per_arm must be a positive odd number");
    }
    if (!std::isfinite(half_width) || half_width < 0.0) {
        throw InvalidArgument("half_width must be non-negative");
    }
    if (centers.empty()) {
        throw InvalidArgument("ensemble needs at least one centre");
    }
}

std::vector<ConfigPoint> EnsembleSpec::initial_points() const
{
    validate();
    const int mid = count_per_arm / 2;
    const double step = mid > 0 ? half_width / mid : 0.0;
    auto offset = [&](int i) { return (i - mid) * step; };

    std::vector<ConfigPoint> out;
    for (const ConfigPoint& c : centers) {
        switch (layout) {
        case Layout::LineX:
            for (int i = 0; i < count_per_arm; ++i) {
                out.push_back({c.x + offset(i), c.y});
            }
            break;
        case Layout::LineY:
            for (int i = 0; i < count_per_arm; ++i) {
                out.push_back({c.x, c.y + offset(i)});
            }
            break;
        case Layout::Cross:
            for (int i = 0; i < count_per_arm; ++i) {
                out.push_back({c.x + offset(i), c.y});
            }
            for (int i = 0; i < count_per_arm; ++i) {
                if (i != mid) {
                    out.push_back({c.x, c.y + offset(i)});
                }
            }
            break;
        case Layout::SquareGrid:
            for (int j = 0; j < count_per_arm; ++j) {
                for (int i = 0; i < count_per_arm; ++i) {
                    out.push_back({c.x + offset(i), c.y + offset(j)});
                }
            }
            break;
        }
    }
    return out;
}

void IntegratorConfig::validate() const
{
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw InvalidArgument("dt must be positive");
    }
    if (!(dt_min > 0.0) || !(dt_min < dt)) {
        throw InvalidArgument("dt_min must be positive and smaller than dt");
    }
    if (!(tol > 0.0)) {
        throw InvalidArgument("tol must be positive");
    }
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        throw InvalidArgument("t_end must be positive");
    }
    if (record_stride < 1) {
        throw InvalidArgument("record_stride must be at least 1");
    }
    if (threads < 0) {
        throw InvalidArgument("threads must be non-negative");
    }
}

std::string to_string(TrajectoryStatus s)
{
    return s == TrajectoryStatus::Complete ? "complete" : "halted_node_proximity";
}

std::string to_string(Axis a) { return a == Axis::X ? "x" : "y"; }

namespace {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }

class Stepper {
public:
    Stepper(const QuantumState& state, const IntegratorConfig& cfg)
        : state_(state)
        , cfg_(cfg)
        , two_d_(dimension(state) == 2)
    {
    }

    Vec2 field(double t, Vec2 p) const
    {
        const Velocity v = velocity(state_, {p.x, p.y}, t);
        return {v.x, two_d_ ? v.y : 0.0};
    }

    Vec2 rk4(double t, Vec2 p, double h) const
    {
        const Vec2 k1 = field(t, p);
        const Vec2 k2 = field(t + 0.5 * h, p + (0.5 * h) * k1);
        const Vec2 k3 = field(t + 0.5 * h, p + (0.5 * h) * k2);
        const Vec2 k4 = field(t + h, p + h * k3);
        return p + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    // Advances by h, halving on DensityUnderflow down to dt_min.
    Vec2 advance(double t, Vec2 p, double h) const
    {
        try {
            return rk4(t, p, h);
        } catch (const DensityUnderflow&) {
            const double half = 0.5 * h;
            if (half < cfg_.dt_min) {
                throw StepUnderflow("step fell below dt_min next to a node");
            }
            const Vec2 mid = advance(t, p, half);
            return advance(t + half, mid, half);
        }
    }

    struct Attempt {
        Vec2 p;
        double err = 0.0;
    };

    // Dormand-Prince 5(4); err is the scaled local error estimate.
    Attempt dopri(double t, Vec2 p, double h) const
    {
        static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        static constexpr double a21 = 1.0 / 5;
        static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                                a54 = -212.0 / 729;
        static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                                a65 = -5103.0 / 18656;
        static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                                b6 = 11.0 / 84;
        static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                                e6 = 22.0 / 525, e7 = -1.0 / 40;

        const Vec2 k1 = field(t, p);
        const Vec2 k2 = field(t + c2 * h, p + h * (a21 * k1));
        const Vec2 k3 = field(t + c3 * h, p + h * (a31 * k1 + a32 * k2));
        const Vec2 k4 = field(t + c4 * h, p + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const Vec2 k5 = field(t + c5 * h, p + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Vec2 k6 = field(t + h, p + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Vec2 next = p + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Vec2 k7 = field(t + h, next);
        const Vec2 e = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double sx = cfg_.tol * std::max(1.0, std::abs(next.x));
        const double sy = cfg_.tol * std::max(1.0, std::abs(next.y));
        return {next, std::max(std::abs(e.x) / sx, std::abs(e.y) / sy)};
    }

private:
    const QuantumState& state_;
    const IntegratorConfig& cfg_;
    bool two_d_;
};

TrajectorySample make_sample(const Stepper& stepper, double t, Vec2 p)
{
    Velocity v{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    try {
        const Vec2 f = stepper.field(t, p);
        v = {f.x, f.y};
    } catch (const DensityUnderflow&) {
    }
    return {t, {p.x, p.y}, v};
}

void run_fixed(const Stepper& stepper, const IntegratorConfig& cfg, Trajectory& traj)
{
    const auto steps = static_cast<long long>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
    const double h = cfg.t_end / static_cast<double>(steps);
    Vec2 p{traj.initial.x, traj.initial.y};
    for (long long k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * h;
        try {
            p = stepper.advance(t, p, h);
        } catch (const StepUnderflow&) {
            traj.status = TrajectoryStatus::HaltedNodeProximity;
            return;
        }
        if ((k + 1) % cfg.record_stride == 0 || k + 1 == steps) {
            traj.samples.push_back(make_sample(stepper, static_cast<double>(k + 1) * h, p));
        }
    }
}

void run_adaptive(const Stepper& stepper, const IntegratorConfig& cfg, Trajectory& traj)
{
    Vec2 p{traj.initial.x, traj.initial.y};
    double t = 0.0;
    double h = cfg.dt;
    long long accepted = 0;
    while (t < cfg.t_end) {
        const bool last = t + h >= cfg.t_end;
        const double step = last ? cfg.t_end - t : h;
        Stepper::Attempt attempt;
        bool ok = true;
        try {
            attempt = stepper.dopri(t, p, step);
            ok = std::isfinite(attempt.err) && attempt.err <= 1.0;
        } catch (const DensityUnderflow&) {
            ok = false;
            attempt.err = std::numeric_limits<double>::infinity();
        }
        if (ok) {
            t = last ? cfg.t_end : t + step;
            p = attempt.p;
            ++accepted;
            if (accepted % cfg.record_stride == 0 || t >= cfg.t_end) {
                traj.samples.push_back(make_sample(stepper, t, p));
            }
        }
        const double factor = std::isfinite(attempt.err) && attempt.err > 0.0
            ? std::clamp(0.9 * std::pow(attempt.err, -0.2), 0.2, 5.0)
            : (ok ? 5.0 : 0.5);
        h = step * factor;
        if (!ok && h < cfg.dt_min) {
            traj.status = TrajectoryStatus::HaltedNodeProximity;
            return;
        }
        h = std::max(h, cfg.dt_min);
    }
}

} // namespace

Trajectory integrate_marker(const QuantumState& state, ConfigPoint initial, const IntegratorConfig& cfg,
    std::size_t marker)
{
    cfg.validate();
    if (!(density(state, initial, 0.0) > kDensityFloor)) {
        throw InvalidInitialCondition("marker " + std::to_string(marker) + " starts where the density vanishes");
    }
    const bool two_d = dimension(state) == 2;
    Trajectory traj;
    traj.marker = marker;
    traj.dimension = two_d ? 2 : 1;
    traj.initial = two_d ? initial : ConfigPoint{initial.x, 0.0};

    const Stepper stepper(state, cfg);
    traj.samples.push_back(make_sample(stepper, 0.0, {traj.initial.x, traj.initial.y}));
    if (cfg.method == Method::RK4) {
        run_fixed(stepper, cfg, traj);
    } else {
        run_adaptive(stepper, cfg, traj);
    }
    return traj;
}

std::vector<Trajectory> integrate(const QuantumState& state, const EnsembleSpec& spec, const IntegratorConfig& cfg)
{
    return integrate(state, spec.initial_points(), cfg);
}

std::vector<Trajectory> integrate(const QuantumState& state, const std::vector<ConfigPoint>& initial,
    const IntegratorConfig& cfg)
{
    validate(state);
    cfg.validate();
    for (std::size_t i = 0; i < initial.size(); ++i) {
        if (!(density(state, initial[i], 0.0) > kDensityFloor)) {
            throw InvalidInitialCondition("marker " + std::to_string(i) + " starts where the density vanishes");
        }
    }

    std::vector<Trajectory> out(initial.size());
    unsigned workers = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::thread::hardware_concurrency();
    workers = std::clamp<unsigned>(workers, 1U, static_cast<unsigned>(std::max<std::size_t>(initial.size(), 1)));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < initial.size(); i = next++) {
            try {
                out[i] = integrate_marker(state, initial[i], cfg, i);
            } catch (...) {
                const std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return out;
}

std::vector<ProjectedSeries> project(const std::vector<Trajectory>& trajectories, Axis axis)
{
    std::vector<ProjectedSeries> out;
    out.reserve(trajectories.size());
    for (const Trajectory& traj : trajectories) {
        if (axis == Axis::Y && traj.dimension != 2) {
            throw InvalidArgument("y projection needs bipartite trajectories");
        }
        ProjectedSeries s;
        s.marker = traj.marker;
        s.initial = axis == Axis::X ? traj.initial.x : traj.initial.y;
        s.slice = axis == Axis::X ? traj.initial.y : traj.initial.x;
        s.t.reserve(traj.samples.size());
        s.value.reserve(traj.samples.size());
        for (const TrajectorySample& smp : traj.samples) {
            s.t.push_back(smp.t);
            s.value.push_back(axis == Axis::X ? smp.point.x : smp.point.y);
        }
        out.push_back(std::move(s));
    }
    return out;
}

namespace {

// Position of `traj` at time t by linear interpolation between samples.
bool position_at(const Trajectory& traj, double t, ConfigPoint& out)
{
    const auto& s = traj.samples;
    if (s.empty() || t < s.front().t || t > s.back().t) {
        return false;
    }
    const auto it = std::lower_bound(s.begin(), s.end(), t,
        [](const TrajectorySample& a, double value) { return a.t < value; });
    if (it->t == t || it == s.begin()) {
        out = it->point;
        return true;
    }
    const auto prev = it - 1;
    const double w = (t - prev->t) / (it->t - prev->t);
    out = {prev->point.x + w * (it->point.x - prev->point.x), prev->point.y + w * (it->point.y - prev->point.y)};
    return true;
}

} // namespace

double min_pairwise_separation(const std::vector<Trajectory>& trajectories)
{
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < trajectories.size(); ++i) {
        for (std::size_t j = i + 1; j < trajectories.size(); ++j) {
            const Trajectory& a = trajectories[i];
            const Trajectory& b = trajectories[j];
            const bool aligned = a.samples.size() == b.samples.size();
            for (std::size_t k = 0; k < a.samples.size(); ++k) {
                const TrajectorySample& sa = a.samples[k];
                ConfigPoint pb;
                if (aligned && b.samples[k].t == sa.t) {
                    pb = b.samples[k].point;
                } else if (!position_at(b, sa.t, pb)) {
                    continue;
                }
                best = std::min(best, std::hypot(sa.point.x - pb.x, sa.point.y - pb.y));
            }
        }
    }
    return best;
}

} // namespace bohm
