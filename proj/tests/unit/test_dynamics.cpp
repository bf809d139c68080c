#include <doctest.h>

#include <cmath>

#include "bohm/analysis.hpp"
#include "bohm/dynamics.hpp"
#include "bohm/errors.hpp"

using namespace bohm;

namespace {

const SuperpositionParams kSup{};

double max_error_vs_analytic(const PacketParams& p, double dt, Method method = Method::RK4, double tol = 1e-8)
{
    EnsembleSpec spec;
    spec.centers = {{p.x0, 0.0}};
    IntegratorConfig cfg;
    cfg.dt = dt;
    cfg.method = method;
    cfg.tol = tol;
    cfg.dt_min = std::min(1e-7, 0.5 * dt);
    double worst = 0.0;
    for (const Trajectory& traj : integrate(SingleGaussian{p}, spec, cfg)) {
        for (const TrajectorySample& s : traj.samples) {
            worst = std::max(worst, std::abs(s.point.x - analytic_trajectory(p, traj.initial.x, s.t)));
        }
    }
    return worst;
}

} // namespace

TEST_SUITE("dynamics")
{
    TEST_CASE("ensemble layouts")
    {
        EnsembleSpec spec;
        spec.centers = {{5.0, -5.0}};
        spec.layout = Layout::LineX;
        auto pts = spec.initial_points();
        REQUIRE(pts.size() == 21);
        CHECK(pts.front() == ConfigPoint{4.0, -5.0});
        CHECK(pts[10] == ConfigPoint{5.0, -5.0});
        CHECK(pts.back() == ConfigPoint{6.0, -5.0});

        spec.layout = Layout::LineY;
        pts = spec.initial_points();
        CHECK(pts.front() == ConfigPoint{5.0, -6.0});

        spec.layout = Layout::Cross;
        pts = spec.initial_points();
        CHECK(pts.size() == 41);
        CHECK(std::count(pts.begin(), pts.end(), ConfigPoint{5.0, -5.0}) == 1);

        spec.layout = Layout::SquareGrid;
        spec.centers = {{5.0, 0.0}, {-5.0, 0.0}};
        CHECK(spec.initial_points().size() == 882);

        spec.count_per_arm = 20;
        CHECK_THROWS_AS(spec.initial_points(), InvalidArgument);
        spec.count_per_arm = 21;
        spec.centers.clear();
        CHECK_THROWS_AS(spec.initial_points(), InvalidArgument);
    }

    TEST_CASE("integrator configuration")
    {
        IntegratorConfig cfg;
        CHECK_NOTHROW(cfg.validate());
        cfg.dt_min = cfg.dt;
        CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
        cfg = {};
        cfg.tol = 0.0;
        CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
        cfg = {};
        cfg.record_stride = 0;
        CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    }

    TEST_CASE("RK4 reproduces the analytic single-packet trajectories")
    {
        CHECK(max_error_vs_analytic(PacketParams{}, 1e-3) < 1e-6);
        PacketParams moving;
        moving.p0 = 0.5;
        moving.x0 = -1.0;
        CHECK(max_error_vs_analytic(moving, 1e-3) < 1e-6);
    }

    TEST_CASE("RK4 converges at fourth order")
    {
        const double coarse = max_error_vs_analytic(PacketParams{}, 0.04);
        const double fine = max_error_vs_analytic(PacketParams{}, 0.02);
        CHECK(coarse / fine == doctest::Approx(16.0).epsilon(0.25));
    }

    TEST_CASE("adaptive integration")
    {
        CHECK(max_error_vs_analytic(PacketParams{}, 1e-3, Method::RK45, 1e-10) < 1e-6);
    }

    TEST_CASE("trajectory bookkeeping")
    {
        IntegratorConfig cfg;
        cfg.t_end = 2.0;
        cfg.record_stride = 100;
        const Trajectory traj = integrate_marker(SingleGaussian{}, {0.3, 0.0}, cfg, 7);
        CHECK(traj.marker == 7);
        CHECK(traj.dimension == 1);
        CHECK(traj.samples.front().t == 0.0);
        CHECK(traj.samples.front().point == traj.initial);
        CHECK(traj.samples.size() == 21);
        CHECK(traj.samples.back().t == doctest::Approx(2.0).epsilon(1e-14));
        for (std::size_t k = 1; k < traj.samples.size(); ++k) {
            CHECK(traj.samples[k].t > traj.samples[k - 1].t);
        }
        CHECK(traj.status == TrajectoryStatus::Complete);
    }

    TEST_CASE("markers must start inside the support")
    {
        CHECK_THROWS_AS(integrate(SingleGaussian{}, std::vector<ConfigPoint>{{0.0, 0.0}, {100.0, 0.0}}, {}),
            InvalidInitialCondition);
    }

    TEST_CASE("markers that leave the support halt instead of aborting the ensemble")
    {
        // A marker just above the density floor: the density along its path
        // decays like 1/sigma_t and eventually drops below the floor.
        const PacketParams p;
        double lo = 10.0, hi = 30.0;
        for (int k = 0; k < 200; ++k) {
            const double mid = 0.5 * (lo + hi);
            (gaussian_density(p, mid, 0.0) > 3.0 * kDensityFloor ? lo : hi) = mid;
        }
        IntegratorConfig cfg;
        cfg.dt = 1e-2;
        cfg.dt_min = 1e-4;
        cfg.t_end = 20.0;
        const auto trajs = integrate(SingleGaussian{p}, std::vector<ConfigPoint>{{0.5, 0.0}, {lo, 0.0}}, cfg);
        CHECK(trajs[0].status == TrajectoryStatus::Complete);
        CHECK(trajs[1].status == TrajectoryStatus::HaltedNodeProximity);
        CHECK(trajs[1].samples.back().t < 20.0);
        CHECK(trajs[1].samples.back().t > 1.0);
    }

    TEST_CASE("superposition markers never cross the symmetry axis")
    {
        EnsembleSpec spec;
        spec.centers = {{kSup.x_a(), 0.0}, {kSup.x_b(), 0.0}};
        IntegratorConfig cfg;
        cfg.record_stride = 10;
        const auto trajs = integrate(Superposition{kSup}, spec, cfg);
        REQUIRE(trajs.size() == 42);
        for (const Trajectory& traj : trajs) {
            CHECK(traj.status == TrajectoryStatus::Complete);
            for (const TrajectorySample& s : traj.samples) {
                CHECK(std::signbit(s.point.x) == std::signbit(traj.initial.x));
            }
        }
        CHECK(census_crossings(trajs, Axis::X).empty());
    }

    TEST_CASE("factorizable markers: y follows the single packet, x stays on its side")
    {
        const BipartiteState sg{BipartiteKind::FactorizableSG, kSup, {}};
        EnsembleSpec spec;
        spec.layout = Layout::Cross;
        spec.centers = {{kSup.x_a(), 0.0}, {kSup.x_b(), 0.0}};
        IntegratorConfig cfg;
        cfg.record_stride = 50;
        const auto trajs = integrate(sg, spec, cfg);
        const auto ys = project(trajs, Axis::Y);
        for (std::size_t m = 0; m < trajs.size(); ++m) {
            for (std::size_t k = 0; k < ys[m].t.size(); ++k) {
                CHECK(ys[m].value[k] == doctest::Approx(analytic_trajectory(sg.y_packet, ys[m].initial, ys[m].t[k])).epsilon(1e-8).scale(1e-8));
                CHECK(std::signbit(trajs[m].samples[k].point.x) == std::signbit(trajs[m].initial.x));
            }
            if (trajs[m].initial.y == 0.0) {
                for (double y : ys[m].value) {
                    CHECK(y == 0.0);
                }
            }
        }
    }

    TEST_CASE("projection metadata")
    {
        const BipartiteState e{BipartiteKind::Entangled, kSup, {}};
        IntegratorConfig cfg;
        cfg.t_end = 0.5;
        const auto trajs = integrate(e, std::vector<ConfigPoint>{{5.0, -4.5}}, cfg);
        const auto px = project(trajs, Axis::X);
        CHECK(px[0].initial == 5.0);
        CHECK(px[0].slice == -4.5);
        CHECK(px[0].t.size() == trajs[0].samples.size());
        const auto one_d = integrate(SingleGaussian{}, std::vector<ConfigPoint>{{0.1, 0.0}}, cfg);
        CHECK_THROWS_AS(project(one_d, Axis::Y), InvalidArgument);
    }

    TEST_CASE("full-space separation never collapses")
    {
        IntegratorConfig cfg;
        cfg.record_stride = 10;
        EnsembleSpec line;
        line.centers = {{kSup.x_a(), 0.0}, {kSup.x_b(), 0.0}};
        CHECK(min_pairwise_separation(integrate(Superposition{kSup}, line, cfg)) > 1e-9);
        line.centers = {{0.0, 0.0}};
        CHECK(min_pairwise_separation(integrate(SingleGaussian{}, line, cfg)) > 1e-9);

        for (BipartiteKind kind : {BipartiteKind::FactorizableSG, BipartiteKind::FactorizableSS, BipartiteKind::Entangled}) {
            EnsembleSpec cross;
            cross.layout = Layout::Cross;
            cross.centers = kind == BipartiteKind::Entangled ? std::vector<ConfigPoint>{{5, -5}, {-5, 5}}
                : kind == BipartiteKind::FactorizableSS     ? std::vector<ConfigPoint>{{5, 5}, {5, -5}, {-5, 5}, {-5, -5}}
                                                            : std::vector<ConfigPoint>{{5, 0}, {-5, 0}};
            CHECK(min_pairwise_separation(integrate(BipartiteState{kind, kSup, {}}, cross, cfg)) > 1e-9);
        }
    }

    TEST_CASE("determinism across thread counts")
    {
        const BipartiteState e{BipartiteKind::Entangled, kSup, {}};
        EnsembleSpec spec;
        spec.layout = Layout::Cross;
        spec.centers = {{5, -5}, {-5, 5}};
        IntegratorConfig cfg;
        cfg.t_end = 3.0;
        cfg.threads = 1;
        const auto a = integrate(e, spec, cfg);
        cfg.threads = 4;
        const auto b = integrate(e, spec, cfg);
        REQUIRE(a.size() == b.size());
        for (std::size_t m = 0; m < a.size(); ++m) {
            REQUIRE(a[m].samples.size() == b[m].samples.size());
            for (std::size_t k = 0; k < a[m].samples.size(); ++k) {
                CHECK(a[m].samples[k].point == b[m].samples[k].point);
            }
        }
    }

    TEST_CASE("reduced dynamics")
    {
        EnsembleSpec spec;
        spec.centers = {{5.0, 0.0}, {-5.0, 0.0}};
        IntegratorConfig cfg;
        cfg.record_stride = 100;
        const auto trajs = integrate(ReducedEntangled{kSup}, spec, cfg);
        CHECK(trajs.size() == 42);
        CHECK(census_crossings(trajs, Axis::X).empty());
    }
}

TEST_SUITE("paper_claims")
{
    TEST_CASE("superposition markers reach quantized velocities by t = 10")
    {
        // Each marker's final velocity should sit within 5 % of the plateau
        // unit of some hbar kappa_n / m.
        EnsembleSpec spec;
        spec.centers = {{kSup.x_a(), 0.0}, {kSup.x_b(), 0.0}};
        IntegratorConfig cfg;
        cfg.record_stride = 1000;
        const double unit = quantized_momentum(kSup, 1) / kSup.base.mass;
        int off = 0;
        for (const Trajectory& traj : integrate(Superposition{kSup}, spec, cfg)) {
            const double v = traj.samples.back().velocity.x;
            const double n = std::round(v / unit);
            if (std::abs(v - n * unit) > 0.05 * unit) {
                ++off;
            }
        }
        CHECK(off == 0);
    }
}
