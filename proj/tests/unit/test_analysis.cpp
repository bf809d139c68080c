#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bohm/analysis.hpp"
#include "bohm/errors.hpp"
#include "reference.hpp"

using namespace bohm;

namespace {

const SuperpositionParams kSup{};
const BipartiteState kEnt{BipartiteKind::Entangled, kSup, {}};

Slice sup_density(double t, std::size_t count = 4001)
{
    const double w = kSup.x_a() + 8.0 * spreading(kSup.base, t).sigma_t;
    return make_slice([&](double x) { return superposition_density(kSup, x, t); }, {"x", -w, w, count});
}

Slice sup_velocity(double t, std::size_t count = 8001)
{
    const double w = kSup.x_a() + 6.0 * spreading(kSup.base, t).sigma_t;
    return make_slice(
        [&](double x) {
            try {
                return superposition_velocity(kSup, x, t);
            } catch (const DensityUnderflow&) {
                return std::nan("");
            }
        },
        {"x", -w, w, count});
}

AxisSpec arc_axis(double t, std::size_t count = 4001)
{
    const double w = std::numbers::sqrt2 * (kSup.x_a() + 8.0 * spreading(kSup.base, t).sigma_t);
    return {"s", -w, w, count};
}

} // namespace

TEST_SUITE("analysis")
{
    TEST_CASE("Simpson quadrature")
    {
        for (std::size_t n : {3u, 4u, 5u, 8u, 101u, 102u}) {
            std::vector<double> f(n);
            const double h = 2.0 / static_cast<double>(n - 1);
            for (std::size_t i = 0; i < n; ++i) {
                const double x = -1.0 + h * static_cast<double>(i);
                f[i] = x * x * x + 2 * x * x - x + 1;
            }
            CHECK(simpson(f, h) == doctest::Approx(2.0 * 2.0 / 3.0 + 2.0).epsilon(1e-13));
        }
        const std::vector<double> two{1.0, 3.0};
        CHECK(simpson(two, 0.5) == 1.0);
    }

    TEST_CASE("L2 distance")
    {
        const AxisSpec axis{"x", 0.0, 1.0, 101};
        const Slice a = make_slice([](double x) { return x; }, axis);
        const Slice b = make_slice([](double) { return 0.0; }, axis);
        CHECK(l2_distance(a, b) == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-12));
        CHECK(l2_distance(a, a) == 0.0);
        const Slice c = make_slice([](double x) { return x; }, {"x", 0.0, 1.0, 51});
        CHECK_THROWS_AS(l2_distance(a, c), InvalidArgument);
    }

    TEST_CASE("fringes of the superposition")
    {
        const FringeReport r = detect_fringes(sup_density(10.0), 10.0, fringe_spacing(kSup, 10.0));
        REQUIRE(r.minima.size() >= 4);
        CHECK(r.spacing_mean == doctest::Approx(2.0 * std::numbers::pi).epsilon(0.01));
        CHECK(r.spacing_mean > 0.0);
        CHECK(r.t == 10.0);
        // Minima come out symmetric about the origin.
        CHECK(r.minima.front() == doctest::Approx(-r.minima.back()).epsilon(1e-6));
        CHECK(r.visibility > 0.9);
        CHECK(r.visibility <= 1.0);
    }

    TEST_CASE("fringe visibility follows its definition")
    {
        // Oracle: central maximum at x = 0, neighbouring minima found by golden section.
        const double t = 10.0;
        auto rho = [&](double x) { return std::norm(ref::superposition(ref::Packet{}, kSup.d, x, t)); };
        double a = 2.0, b = 4.5;
        const double g = (std::sqrt(5.0) - 1.0) / 2.0;
        for (int k = 0; k < 200; ++k) {
            const double c = b - g * (b - a), d = a + g * (b - a);
            if (rho(c) < rho(d)) {
                b = d;
            } else {
                a = c;
            }
        }
        const double rmin = rho(0.5 * (a + b));
        const double rmax = rho(0.0);
        const double expected = (rmax - rmin) / (rmax + rmin);
        CHECK(fringe_visibility(sup_density(t, 20001)) == doctest::Approx(expected).epsilon(1e-6));
    }

    TEST_CASE("fringe spacing grows linearly in time")
    {
        double st = 0, ss = 0, stt = 0, sts = 0;
        for (double t : {6.0, 8.0, 10.0}) {
            const FringeReport r = detect_fringes(sup_density(t), t);
            st += t;
            ss += r.spacing_mean;
            stt += t * t;
            sts += t * r.spacing_mean;
        }
        const double slope = (3 * sts - st * ss) / (3 * stt - st * st);
        CHECK(slope == doctest::Approx(2.0 * std::numbers::pi / kSup.d).epsilon(0.02));
    }

    TEST_CASE("fringe detection preconditions")
    {
        CHECK_THROWS_AS(detect_fringes(sup_density(10.0, 101), 10.0, fringe_spacing(kSup, 10.0)), GridTooCoarse);
        const double w = kSup.x_a() + 8.0 * spreading(kSup.base, 10.0).sigma_t;
        const Slice reduced = make_slice([](double x) { return reduced_density(kEnt, x, 10.0); }, {"x", -w, w, 4001});
        CHECK_THROWS_AS(detect_fringes(reduced, 10.0), NoFringes);
        CHECK(fringe_visibility(reduced) < 1e-6);
        CHECK_THROWS_AS(fringe_visibility(Slice{{0.0, 1.0}, {1.0, 2.0}}), InvalidArgument);
    }

    TEST_CASE("entangled joint density along the diagonals")
    {
        const Slice anti = diagonal_slice(kEnt, 10.0, arc_axis(10.0), true);
        const FringeReport r = detect_fringes(anti, 10.0);
        CHECK(r.spacing_mean == doctest::Approx(2.0 * std::numbers::pi / std::numbers::sqrt2).epsilon(0.01));
        const Slice diag = diagonal_slice(kEnt, 10.0, arc_axis(10.0), false);
        CHECK(fringe_visibility(diag) < 1e-6);
        CHECK_THROWS_AS(detect_fringes(diag, 10.0), NoFringes);
    }

    TEST_CASE("plateaus of the superposition velocity")
    {
        const PlateauReport r = extract_plateaus(sup_velocity(10.0), 10.0, kSup);
        CHECK(r.kappa_unit == doctest::Approx(2.0 * std::numbers::pi / 10.0).epsilon(1e-14));
        CHECK_FALSE(r.early_time);
        const Plateau* centre = r.find(0);
        REQUIRE(centre != nullptr);
        CHECK(std::abs(0.5 * (centre->lo + centre->hi)) < 1e-3);
        CHECK(std::abs(centre->mean_velocity) < 1e-9);
        // Segments are bounded by the density minima.
        const Plateau* first = r.find(1);
        REQUIRE(first != nullptr);
        CHECK(first->lo == doctest::Approx(std::numbers::pi).epsilon(2e-3));
        for (int n = -3; n <= 3; ++n) {
            const Plateau* p = r.find(n);
            REQUIRE(p != nullptr);
            CHECK(p->expected == doctest::Approx(quantized_momentum(kSup, n)).scale(1e-12));
            CHECK(std::abs(r.find(-n)->mean_velocity + p->mean_velocity) < 1e-9);
        }
    }

    TEST_CASE("plateau count grows as the envelope widens")
    {
        const PlateauReport early = extract_plateaus(sup_velocity(5.0), 5.0, kSup);
        const PlateauReport late = extract_plateaus(sup_velocity(10.0), 10.0, kSup);
        CHECK(late.plateaus.size() > early.plateaus.size());
        CHECK(extract_plateaus(sup_velocity(1.0), 1.0, kSup).early_time);
    }

    TEST_CASE("crossing census")
    {
        IntegratorConfig cfg;
        cfg.record_stride = 10;

        EnsembleSpec single;
        single.centers = {{0.0, 0.0}};
        CHECK(census_crossings(integrate(SingleGaussian{}, single, cfg), Axis::X).empty());

        const auto one = integrate(SingleGaussian{}, std::vector<ConfigPoint>{{0.2, 0.0}}, cfg);
        CHECK(census_crossings(one, Axis::X).empty());

        EnsembleSpec ss;
        ss.layout = Layout::Cross;
        ss.centers = {{5, 5}, {5, -5}, {-5, 5}, {-5, -5}};
        const auto product = integrate(BipartiteState{BipartiteKind::FactorizableSS, kSup, {}}, ss, cfg);
        CHECK(census_crossings(product, Axis::X).empty());
        CHECK(census_crossings(product, Axis::Y).empty());

        EnsembleSpec arms;
        arms.layout = Layout::LineX;
        arms.centers = {{5, -5}, {-5, 5}};
        const CrossingReport r = census_crossings(integrate(kEnt, arms, cfg), Axis::X);
        REQUIRE_FALSE(r.empty());
        CHECK(r.axis == Axis::X);
        for (const Crossing& c : r.pairs) {
            CHECK(c.time > 0.0);
            CHECK(c.marker_a < c.marker_b);
        }
        CHECK(*r.earliest() == r.pairs.front().time);
    }

    TEST_CASE("crossing time is interpolated")
    {
        auto line = [](std::size_t id, double x0, double v) {
            Trajectory t;
            t.marker = id;
            t.initial = {x0, 0.0};
            for (int k = 0; k <= 10; ++k) {
                const double time = 0.1 * k;
                t.samples.push_back({time, {x0 + v * time, 0.0}, {v, 0.0}});
            }
            return t;
        };
        const CrossingReport r = census_crossings({line(0, 0.0, 1.0), line(1, 0.5, 0.0), line(2, 2.0, 0.0)}, Axis::X);
        REQUIRE(r.pairs.size() == 1);
        CHECK(r.pairs[0].marker_a == 0);
        CHECK(r.pairs[0].marker_b == 1);
        CHECK(r.pairs[0].time == doctest::Approx(0.5).epsilon(1e-12));
        // Coincident pairs do not count.
        CHECK(census_crossings({line(0, 0.0, 1.0), line(1, 0.0, 1.0)}, Axis::X).empty());
    }

    TEST_CASE("tracing out the partner")
    {
        const double t = 2.0;
        const double w = kSup.x_a() + 8.0 * spreading(kSup.base, t).sigma_t;
        const AxisSpec keep{"x", -w, w, 81};
        const AxisSpec over{"y", -w, w, 2001};

        const BipartiteState sg{BipartiteKind::FactorizableSG, kSup, {}};
        const Slice m = trace_out(sg, Axis::Y, keep, over, t);
        for (std::size_t i = 0; i < m.coords.size(); ++i) {
            CHECK(m.values[i] == doctest::Approx(superposition_density(kSup, m.coords[i], t)).epsilon(1e-9).scale(1e-12));
        }

        for (double time : {0.0, 2.0, 10.0}) {
            const double ww = kSup.x_a() + 8.0 * spreading(kSup.base, time).sigma_t;
            const AxisSpec k2{"x", -ww, ww, 61};
            const AxisSpec o2{"y", -ww, ww, 4001};
            const Slice traced = trace_out(kEnt, Axis::Y, k2, o2, time);
            const Slice other = trace_out(kEnt, Axis::X, k2, o2, time);
            for (std::size_t i = 0; i < traced.coords.size(); ++i) {
                CHECK(std::abs(traced.values[i] - reduced_density(kEnt, traced.coords[i], time)) < 1e-6);
                CHECK(traced.values[i] == doctest::Approx(other.values[i]).epsilon(1e-12).scale(1e-15));
            }
        }
        CHECK_THROWS_AS(trace_out(kEnt, Axis::Y, keep, {"y", -w, w, 21}, t), GridTooCoarse);
    }
}

TEST_SUITE("paper_claims")
{
    TEST_CASE("momentum plateaus at t = 10 within 5 %")
    {
        const PlateauReport r = extract_plateaus(sup_velocity(10.0), 10.0, kSup);
        for (int n = -3; n <= 3; ++n) {
            INFO("n = " << n);
            const Plateau* p = r.find(n);
            REQUIRE(p != nullptr);
            if (n == 0) {
                CHECK(std::abs(p->mean_velocity) < 0.05 * r.kappa_unit);
            } else {
                CHECK(p->mean_velocity == doctest::Approx(p->expected).epsilon(0.05));
            }
        }
    }

    TEST_CASE("visibility ordering at t = 10")
    {
        CHECK(fringe_visibility(sup_density(10.0)) > 0.99);
        CHECK(fringe_visibility(diagonal_slice(kEnt, 10.0, arc_axis(10.0), true)) > 0.99);
    }

    TEST_CASE("traced marginal against the long-time single Gaussian")
    {
        const double t = 10.0;
        const double w = kSup.x_a() + 8.0 * spreading(kSup.base, t).sigma_t;
        const AxisSpec axis{"x", -w, w, 2001};
        const Slice traced = trace_out(kEnt, Axis::Y, axis, {"y", -w, w, 4001}, t);
        const Slice gaussian = make_slice([&](double x) { return reduced_density_long_time(kEnt, x, t); }, axis);
        CHECK(l2_distance(traced, gaussian) < 1e-3);
    }
}
