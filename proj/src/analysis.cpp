#include "bohm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <tuple>

#include "bohm/errors.hpp"

namespace bohm {

Slice make_slice(const std::function<double(double)>& f, const AxisSpec& axis)
{
    axis.validate();
    Slice s;
    s.coords = axis.samples();
    s.values.reserve(s.coords.size());
    for (double c : s.coords) {
        s.values.push_back(f(c));
    }
    return s;
}

Slice diagonal_slice(const BipartiteState& state, double t, const AxisSpec& arc, bool anti)
{
    const double sign = anti ? -1.0 : 1.0;
    return make_slice(
        [&](double s) {
            const double x = s / std::numbers::sqrt2;
            return joint_density(state, x, sign * x, t);
        },
        arc);
}

double simpson(std::span<const double> f, double h)
{
    const std::size_t n = f.size();
    if (n < 2) {
        return 0.0;
    }
    if (n == 2) {
        return 0.5 * h * (f[0] + f[1]);
    }
    if (n == 4) {
        return 3.0 * h / 8.0 * (f[0] + 3.0 * f[1] + 3.0 * f[2] + f[3]);
    }
    // Simpson needs an even number of intervals; close an odd one with the 3/8 rule.
    const std::size_t simpson_end = (n % 2 == 1) ? n - 1 : n - 4;
    double sum = f[0] + f[simpson_end];
    for (std::size_t i = 1; i < simpson_end; ++i) {
        sum += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
    }
    double total = sum * h / 3.0;
    if (simpson_end != n - 1) {
        const std::size_t k = simpson_end;
        total += 3.0 * h / 8.0 * (f[k] + 3.0 * f[k + 1] + 3.0 * f[k + 2] + f[k + 3]);
    }
    return total;
}

double l2_distance(const Slice& a, const Slice& b)
{
    if (a.coords.size() != b.coords.size() || a.coords.size() < 2) {
        throw InvalidArgument("l2_distance needs slices on the same grid");
    }
    std::vector<double> diff2(a.values.size());
    for (std::size_t i = 0; i < diff2.size(); ++i) {
        const double d = a.values[i] - b.values[i];
        diff2[i] = d * d;
    }
    const double h = (a.coords.back() - a.coords.front()) / static_cast<double>(a.coords.size() - 1);
    return std::sqrt(simpson(diff2, h));
}

namespace {

struct Extremum {
    std::size_t index = 0;
    double position = 0.0;
    double value = 0.0;
};

// Parabola through three neighbouring samples.
Extremum refine(const Slice& s, std::size_t i)
{
    const double fm = s.values[i - 1];
    const double f0 = s.values[i];
    const double fp = s.values[i + 1];
    const double h = s.coords[i + 1] - s.coords[i];
    const double curvature = fm - 2.0 * f0 + fp;
    double offset = 0.0;
    if (curvature != 0.0) {
        offset = std::clamp(0.5 * (fm - fp) / curvature, -0.5, 0.5);
    }
    return {i, s.coords[i] + offset * h, f0 - 0.25 * (fm - fp) * offset};
}

std::vector<Extremum> local_minima(const Slice& s)
{
    std::vector<Extremum> out;
    for (std::size_t i = 1; i + 1 < s.values.size(); ++i) {
        const double v = s.values[i];
        if (v < s.values[i - 1] && v <= s.values[i + 1]) {
            out.push_back(refine(s, i));
        }
    }
    return out;
}

void require_slice(const Slice& s)
{
    if (s.coords.size() != s.values.size() || s.coords.size() < 3) {
        throw InvalidArgument("slice needs at least three samples with matching coordinates");
    }
}

} // namespace

namespace {

// Minima bounding the central fringe, then one more on each side.
std::pair<std::size_t, std::size_t> central_window(const Slice& density, const std::vector<Extremum>& minima)
{
    const auto peak = std::max_element(density.values.begin(), density.values.end());
    const auto centre = static_cast<std::size_t>(peak - density.values.begin());
    const auto right = std::find_if(minima.begin(), minima.end(), [&](const Extremum& e) { return e.index > centre; });
    const auto first = right - std::min<std::ptrdiff_t>(2, right - minima.begin());
    const auto last = right + std::min<std::ptrdiff_t>(2, minima.end() - right);
    return {static_cast<std::size_t>(first - minima.begin()), static_cast<std::size_t>(last - minima.begin())};
}

} // namespace

double fringe_visibility(const Slice& density)
{
    require_slice(density);
    const std::vector<Extremum> minima = local_minima(density);
    if (minima.empty()) {
        return 0.0;
    }
    const auto peak = std::max_element(density.values.begin(), density.values.end());
    const auto centre = static_cast<std::size_t>(peak - density.values.begin());
    const auto [first, last] = central_window(density, minima);

    const std::size_t lo = minima[first].index;
    const std::size_t hi = minima[last - 1].index;
    double rho_max = 0.0;
    for (std::size_t i = std::min(lo, centre); i <= std::max(hi, centre); ++i) {
        rho_max = std::max(rho_max, density.values[i]);
    }
    double rho_min = rho_max;
    for (std::size_t k = first; k < last; ++k) {
        rho_min = std::min(rho_min, std::max(0.0, minima[k].value));
    }
    if (rho_max + rho_min <= 0.0) {
        return 0.0;
    }
    return (rho_max - rho_min) / (rho_max + rho_min);
}

FringeReport detect_fringes(const Slice& density, double t, std::optional<double> expected_period)
{
    require_slice(density);
    if (expected_period) {
        const double h = density.coords[1] - density.coords[0];
        if (*expected_period / h < 8.0) {
            throw GridTooCoarse("density slice has fewer than 8 samples per expected fringe");
        }
    }
    FringeReport report;
    report.t = t;
    report.visibility = fringe_visibility(density);
    if (report.visibility < 0.05) {
        throw NoFringes("fringe visibility " + std::to_string(report.visibility) + " below 0.05");
    }
    const std::vector<Extremum> minima = local_minima(density);
    for (const Extremum& e : minima) {
        report.minima.push_back(e.position);
    }
    // The envelope pushes outer minima apart, so spacing uses the central window only.
    const auto [first, last] = central_window(density, minima);
    if (last - first >= 2) {
        std::vector<double> gaps;
        for (std::size_t i = first + 1; i < last; ++i) {
            gaps.push_back(minima[i].position - minima[i - 1].position);
        }
        const double n = static_cast<double>(gaps.size());
        report.spacing_mean = std::accumulate(gaps.begin(), gaps.end(), 0.0) / n;
        double var = 0.0;
        for (double g : gaps) {
            var += (g - report.spacing_mean) * (g - report.spacing_mean);
        }
        report.spacing_std = std::sqrt(var / n);
    }
    return report;
}

const Plateau* PlateauReport::find(int n) const
{
    const auto it = std::find_if(plateaus.begin(), plateaus.end(), [n](const Plateau& p) { return p.n == n; });
    return it == plateaus.end() ? nullptr : &*it;
}

namespace {

double interpolate(const Slice& s, double x)
{
    const auto it = std::lower_bound(s.coords.begin(), s.coords.end(), x);
    if (it == s.coords.begin()) {
        return s.values.front();
    }
    if (it == s.coords.end()) {
        return s.values.back();
    }
    const auto i = static_cast<std::size_t>(it - s.coords.begin());
    const double w = (x - s.coords[i - 1]) / (s.coords[i] - s.coords[i - 1]);
    return s.values[i - 1] + w * (s.values[i] - s.values[i - 1]);
}

} // namespace

PlateauReport extract_plateaus(const Slice& velocity, double t, const SuperpositionParams& sup)
{
    require_slice(velocity);
    const auto& v = velocity.values;
    const auto& xs = velocity.coords;
    double scale = 0.0;
    for (double value : v) {
        if (std::isfinite(value)) {
            scale = std::max(scale, std::abs(value));
        }
    }
    const double prominence_floor = 1e-9 * std::max(scale, 1e-300);

    // Spike tips: dips on the positive side, peaks on the negative side. A tip
    // counts if it stands out from the running extreme since the previous tip.
    std::vector<double> right_spikes;
    double running = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        if (xs[i] <= 0.0 || !std::isfinite(v[i])) {
            continue;
        }
        running = std::max(running, v[i]);
        if (v[i] < v[i - 1] && v[i] <= v[i + 1] && running - v[i] > prominence_floor) {
            right_spikes.push_back(refine(velocity, i).position);
            running = v[i];
        }
    }
    std::vector<double> left_spikes;
    running = std::numeric_limits<double>::infinity();
    for (std::size_t i = v.size() - 2; i >= 1; --i) {
        if (xs[i] < 0.0 && std::isfinite(v[i])) {
            running = std::min(running, v[i]);
            if (v[i] > v[i - 1] && v[i] >= v[i + 1] && v[i] - running > prominence_floor) {
                // A peak of v is a minimum of -v; refine on the negated samples.
                Slice neg{{xs[i - 1], xs[i], xs[i + 1]}, {-v[i - 1], -v[i], -v[i + 1]}};
                left_spikes.push_back(refine(neg, 1).position);
                running = v[i];
            }
        }
        if (i == 1) {
            break;
        }
    }

    PlateauReport report;
    report.t = t;
    report.kappa_unit = 2.0 * std::numbers::pi * sup.base.hbar / sup.d;
    report.early_time = t < 5.0 * sup.base.tau();

    auto add = [&](int n, double lo, double hi) {
        const double mid = 0.5 * (lo + hi);
        report.plateaus.push_back({n, interpolate(velocity, mid), lo, hi, quantized_momentum(sup, n) / sup.base.mass});
    };
    if (!left_spikes.empty() && !right_spikes.empty()) {
        add(0, left_spikes.front(), right_spikes.front());
    }
    for (std::size_t j = 0; j + 1 < right_spikes.size(); ++j) {
        add(static_cast<int>(j + 1), right_spikes[j], right_spikes[j + 1]);
    }
    for (std::size_t j = 0; j + 1 < left_spikes.size(); ++j) {
        add(-static_cast<int>(j + 1), left_spikes[j + 1], left_spikes[j]);
    }
    std::sort(report.plateaus.begin(), report.plateaus.end(), [](const Plateau& a, const Plateau& b) { return a.n < b.n; });
    return report;
}

std::optional<double> CrossingReport::earliest() const
{
    if (pairs.empty()) {
        return std::nullopt;
    }
    return std::min_element(pairs.begin(), pairs.end(), [](const Crossing& a, const Crossing& b) {
        return a.time < b.time;
    })->time;
}

namespace {

double coordinate(const TrajectorySample& s, Axis axis) { return axis == Axis::X ? s.point.x : s.point.y; }

std::optional<double> first_crossing(const Trajectory& a, const Trajectory& b, Axis axis, double threshold)
{
    const std::size_t n = std::min(a.samples.size(), b.samples.size());
    int sign = 0;
    double last_t = 0.0;
    double last_gap = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const TrajectorySample& sa = a.samples[k];
        const TrajectorySample& sb = b.samples[k];
        if (sa.t != sb.t) {
            break; // census assumes a common time grid
        }
        const double gap = coordinate(sa, axis) - coordinate(sb, axis);
        if (std::abs(gap) <= threshold) {
            continue;
        }
        const int s = gap > 0.0 ? 1 : -1;
        if (sign != 0 && s != sign) {
            const double w = last_gap / (last_gap - gap);
            return last_t + w * (sa.t - last_t);
        }
        sign = s;
        last_t = sa.t;
        last_gap = gap;
    }
    return std::nullopt;
}

} // namespace

CrossingReport census_crossings(const std::vector<Trajectory>& trajectories, Axis axis, double threshold)
{
    CrossingReport report;
    report.axis = axis;
    for (std::size_t i = 0; i < trajectories.size(); ++i) {
        for (std::size_t j = i + 1; j < trajectories.size(); ++j) {
            const Trajectory& a = trajectories[i];
            const Trajectory& b = trajectories[j];
            if (auto when = first_crossing(a, b, axis, threshold)) {
                report.pairs.push_back({a.marker, b.marker, *when});
            }
        }
    }
    std::sort(report.pairs.begin(), report.pairs.end(), [](const Crossing& a, const Crossing& b) {
        return a.time < b.time || (a.time == b.time && std::tie(a.marker_a, a.marker_b) < std::tie(b.marker_a, b.marker_b));
    });
    return report;
}

Slice trace_out(const JointDensity& joint, Axis traced, const AxisSpec& keep, const AxisSpec& over, double min_feature)
{
    keep.validate();
    over.validate();
    if (!(over.step() <= 0.25 * min_feature)) {
        throw GridTooCoarse("integration axis '" + over.name + "' step " + std::to_string(over.step())
            + " does not resolve features of size " + std::to_string(min_feature));
    }
    const std::vector<double> grid = over.samples();
    std::vector<double> integrand(grid.size());
    return make_slice(
        [&](double c) {
            for (std::size_t k = 0; k < grid.size(); ++k) {
                integrand[k] = traced == Axis::Y ? joint(c, grid[k]) : joint(grid[k], c);
            }
            return simpson(integrand, over.step());
        },
        keep);
}

Slice trace_out(const BipartiteState& state, Axis traced, const AxisSpec& keep, const AxisSpec& over, double t)
{
    const double sigma_t = spreading(state.sup.base, t).sigma_t;
    double feature = sigma_t;
    const double k = fringe_wavenumber(state.sup, t);
    if (k > 0.0) {
        feature = std::min(feature, std::numbers::pi / k); // half a fringe period
    }
    return trace_out([&](double x, double y) { return joint_density(state, x, y, t); }, traced, keep, over, feature);
}

} // namespace bohm
