#include "bohm/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "bohm/analysis.hpp"
#include "bohm/errors.hpp"
#include "bohm/export.hpp"
#include "bohm/grid.hpp"

namespace bohm {

const std::vector<std::string>& preset_names()
{
    static const std::vector<std::string> names{
        "fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "s2", "s3", "s4", "s5"};
    return names;
}

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text)
{
    double v = 0.0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
        throw ConfigError(key + ": expected a finite number, got '" + text + "'");
    }
    return v;
}

long parse_integer(const std::string& key, const std::string& text)
{
    long v = 0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError(key + ": expected an integer, got '" + text + "'");
    }
    return v;
}

std::size_t parse_count(const std::string& key, const std::string& text)
{
    const long v = parse_integer(key, text);
    if (v < 0) {
        throw ConfigError(key + ": must not be negative");
    }
    return static_cast<std::size_t>(v);
}

bool parse_bool(const std::string& key, const std::string& text)
{
    if (text == "true" || text == "1" || text == "yes") {
        return true;
    }
    if (text == "false" || text == "0" || text == "no") {
        return false;
    }
    throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_double(key, trim(item)));
    }
    return out;
}

} // namespace

void ScenarioConfig::set(const std::string& key, const std::string& raw)
{
    const std::string value = trim(raw);
    if (key == "preset") {
        preset = value;
    } else if (key == "x0") {
        x0 = parse_double(key, value);
    } else if (key == "p0") {
        p0 = parse_double(key, value);
    } else if (key == "sigma0") {
        sigma0 = parse_double(key, value);
    } else if (key == "mass") {
        mass = parse_double(key, value);
    } else if (key == "hbar") {
        hbar = parse_double(key, value);
    } else if (key == "d") {
        d = parse_double(key, value);
    } else if (key == "exact_norm") {
        exact_norm = parse_bool(key, value);
    } else if (key == "method") {
        if (value == "rk4") {
            method = Method::RK4;
        } else if (value == "rk45") {
            method = Method::RK45;
        } else {
            throw ConfigError("method: expected rk4 or rk45, got '" + value + "'");
        }
    } else if (key == "dt") {
        dt = parse_double(key, value);
    } else if (key == "dt_min") {
        dt_min = parse_double(key, value);
    } else if (key == "tol") {
        tol = parse_double(key, value);
    } else if (key == "t_end") {
        t_end = parse_double(key, value);
    } else if (key == "record_stride") {
        record_stride = static_cast<int>(parse_integer(key, value));
    } else if (key == "threads") {
        threads = static_cast<int>(parse_integer(key, value));
    } else if (key == "snapshots") {
        snapshots = parse_list(key, value);
    } else if (key == "grid") {
        grid = parse_count(key, value);
    } else if (key == "time_samples") {
        time_samples = parse_count(key, value);
    } else if (key == "markers") {
        markers = static_cast<int>(parse_integer(key, value));
    } else if (key == "half_width") {
        half_width = parse_double(key, value);
    } else if (key == "out") {
        out = value;
    } else {
        throw ConfigError(key + ": unknown configuration key");
    }
}

void ScenarioConfig::validate() const
{
    auto require = [](bool ok, const std::string& message) {
        if (!ok) {
            throw ConfigError(message);
        }
    };
    require(std::find(preset_names().begin(), preset_names().end(), preset) != preset_names().end(),
        "preset: unknown preset '" + preset + "'");
    require(sigma0 > 0.0, "sigma0: must be positive");
    require(mass > 0.0, "mass: must be positive");
    require(hbar > 0.0, "hbar: must be positive");
    require(d > 0.0, "d: must be positive");
    require(dt > 0.0, "dt: must be positive");
    require(dt_min > 0.0 && dt_min < dt, "dt_min: must be positive and smaller than dt");
    require(tol > 0.0, "tol: must be positive");
    require(t_end > 0.0, "t_end: must be positive");
    require(record_stride >= 1, "record_stride: must be at least 1");
    require(threads >= 0, "threads: must not be negative");
    require(!snapshots.empty(), "snapshots: at least one time is required");
    require(std::is_sorted(snapshots.begin(), snapshots.end())
            && std::adjacent_find(snapshots.begin(), snapshots.end()) == snapshots.end(),
        "snapshots: times must be strictly ascending");
    require(snapshots.front() >= 0.0, "snapshots: times must not be negative");
    require(snapshots.back() <= t_end, "snapshots: latest snapshot exceeds t_end");
    require(grid >= 3, "grid: at least 3 samples per axis");
    require(time_samples >= 2, "time_samples: at least 2 samples");
    require(markers >= 1 && markers % 2 == 1, "markers: must be a positive odd count");
    require(half_width > 0.0, "half_width: must be positive");
}

std::string ScenarioConfig::canonical() const
{
    std::string s;
    auto line = [&](const std::string& key, const std::string& value) { s += key + " = " + value + "\n"; };
    line("preset", preset);
    line("x0", format_number(x0));
    line("p0", format_number(p0));
    line("sigma0", format_number(sigma0));
    line("mass", format_number(mass));
    line("hbar", format_number(hbar));
    line("d", format_number(d));
    line("exact_norm", exact_norm ? "true" : "false");
    line("method", method == Method::RK4 ? "rk4" : "rk45");
    line("dt", format_number(dt));
    line("dt_min", format_number(dt_min));
    line("tol", format_number(tol));
    line("t_end", format_number(t_end));
    line("record_stride", std::to_string(record_stride));
    std::string snaps;
    for (std::size_t i = 0; i < snapshots.size(); ++i) {
        snaps += (i ? "," : "") + format_number(snapshots[i]);
    }
    line("snapshots", snaps);
    line("grid", std::to_string(grid));
    line("time_samples", std::to_string(time_samples));
    line("markers", std::to_string(markers));
    line("half_width", format_number(half_width));
    return s;
}

std::uint64_t ScenarioConfig::hash() const
{
    // FNV-1a, 64 bit.
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

ScenarioConfig parse_config(const std::string& text, ScenarioConfig base)
{
    std::stringstream ss(text);
    std::string line;
    int number = 0;
    while (std::getline(ss, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(number) + ": expected key = value");
        }
        base.set(trim(line.substr(0, eq)), line.substr(eq + 1));
    }
    return base;
}


ScenarioConfig preset_defaults(const std::string& preset)
{
    ScenarioConfig cfg;
    cfg.preset = preset;
    if (preset == "s2" || preset == "s3" || preset == "s4") {
        cfg.dt = 4e-3;
    }
    return cfg;
}

namespace {

std::string read_text(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read config file " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

ScenarioConfig resolve_config(const std::optional<std::filesystem::path>& file,
    const std::map<std::string, std::string>& overrides)
{
    const std::string text = file ? read_text(*file) : std::string{};
    std::string preset = parse_config(text).preset;
    if (const auto it = overrides.find("preset"); it != overrides.end()) {
        preset = trim(it->second);
    }
    ScenarioConfig cfg = parse_config(text, preset_defaults(preset));
    for (const auto& [key, value] : overrides) {
        cfg.set(key, value);
    }
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path, ScenarioConfig base)
{
    return parse_config(read_text(path), std::move(base));
}

std::string RunManifest::format() const
{
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(config_hash));
    std::string s = "# manifest\n";
    s += "tool = " + tool_version + "\n";
    s += "preset = " + preset + "\n";
    s += "config_hash = " + std::string(hex) + "\n";
    for (const Artifact& a : artifacts) {
        s += "artifact = " + a.file + " kind=" + a.kind;
        if (!a.axes.empty()) {
            s += " axes=" + a.axes;
        }
        s += "\n";
    }
    return s;
}

namespace {

class Runner {
public:
    explicit Runner(const ScenarioConfig& cfg)
        : cfg_(cfg)
    {
        manifest_.preset = cfg.preset;
        manifest_.config_hash = cfg.hash();
    }

    RunManifest run()
    {
        write("config.txt", "config", "", cfg_.canonical());
        const std::string& p = cfg_.preset;
        if (p == "fig1") {
            fig1();
        } else if (p == "fig2") {
            fig2();
        } else if (p == "fig3") {
            bipartite_fields(FieldQuantity::Density, Layout::Cross);
        } else if (p == "fig4") {
            bipartite_fields(FieldQuantity::VelocityX, std::nullopt);
        } else if (p == "fig5") {
            bipartite_fields(FieldQuantity::VelocityY, std::nullopt);
        } else if (p == "fig6") {
            bipartite_trajectories(true);
        } else if (p == "s2") {
            bipartite_fields(FieldQuantity::Density, Layout::SquareGrid);
        } else if (p == "s3") {
            bipartite_fields(FieldQuantity::VelocityX, Layout::SquareGrid);
        } else if (p == "s4") {
            bipartite_fields(FieldQuantity::VelocityY, Layout::SquareGrid);
        } else if (p == "s5") {
            bipartite_trajectories(false);
        }
        write_text(cfg_.out / "manifest.txt", manifest_.format());
        return manifest_;
    }

private:
    PacketParams packet() const { return {cfg_.x0, cfg_.p0, cfg_.sigma0, cfg_.mass, cfg_.hbar}; }
    SuperpositionParams sup() const { return {packet(), cfg_.d, cfg_.exact_norm}; }

    IntegratorConfig integrator(double t_end) const
    {
        IntegratorConfig ic;
        ic.method = cfg_.method;
        ic.dt = cfg_.dt;
        ic.dt_min = cfg_.dt_min;
        ic.tol = cfg_.tol;
        ic.t_end = t_end;
        ic.record_stride = cfg_.record_stride;
        ic.threads = cfg_.threads;
        return ic;
    }

    EnsembleSpec ensemble(Layout layout, std::vector<ConfigPoint> centers) const
    {
        EnsembleSpec e;
        e.layout = layout;
        e.count_per_arm = cfg_.markers;
        e.half_width = cfg_.half_width;
        e.centers = std::move(centers);
        return e;
    }

    std::vector<ConfigPoint> centers(BipartiteKind kind) const
    {
        const double a = 0.5 * cfg_.d;
        switch (kind) {
        case BipartiteKind::FactorizableSG: return {{a, cfg_.x0}, {-a, cfg_.x0}};
        case BipartiteKind::FactorizableSS: return {{a, a}, {a, -a}, {-a, a}, {-a, -a}};
        case BipartiteKind::Entangled: return {{a, -a}, {-a, a}};
        }
        return {};
    }

    void write(const std::string& file, const std::string& kind, const std::string& axes, const std::string& content)
    {
        write_text(cfg_.out / file, content);
        manifest_.artifacts.push_back({file, kind, axes});
    }

    void grid(const std::string& file, const FieldGrid& g)
    {
        std::string axes;
        for (std::size_t k = 0; k < g.axes.size(); ++k) {
            axes += (k ? ";" : "") + describe_axis(g.axes[k]);
        }
        write(file, "grid", axes, format_grid(g));
    }

    void table(const std::string& file, const Table& t) { write(file, "table", "", format_table(t)); }

    static std::string stamp(double t) { return "t" + format_number(t); }

    static const std::vector<BipartiteKind>& kinds()
    {
        static const std::vector<BipartiteKind> k{
            BipartiteKind::FactorizableSG, BipartiteKind::FactorizableSS, BipartiteKind::Entangled};
        return k;
    }

    QuantumState bipartite(BipartiteKind kind) const { return BipartiteState{kind, sup(), packet()}; }

    void fig1()
    {
        const PacketParams g = packet();
        const SuperpositionParams s = sup();
        const AxisSpec t_axis{"t", 0.0, cfg_.t_end, cfg_.time_samples};

        const double half = 8.0 * spreading(g, cfg_.t_end).sigma_t;
        const AxisSpec x_single{"x", g.x0 - half, g.x0 + half, cfg_.grid};
        const AxisSpec x_sup = auto_axis(s, cfg_.t_end, "x", 8.0, cfg_.grid);

        const QuantumState single = SingleGaussian{g};
        const QuantumState two = Superposition{s};
        grid("single_gaussian_density.csv", sample_spacetime(single, FieldQuantity::Density, x_single, t_axis));
        grid("single_gaussian_velocity.csv", sample_spacetime(single, FieldQuantity::VelocityX, x_single, t_axis));
        grid("superposition_density.csv", sample_spacetime(two, FieldQuantity::Density, x_sup, t_axis));
        grid("superposition_velocity.csv", sample_spacetime(two, FieldQuantity::VelocityX, x_sup, t_axis));

        const IntegratorConfig ic = integrator(cfg_.t_end);
        write("single_gaussian_trajectories.csv", "trajectories", "",
            format_trajectories(integrate(single, ensemble(Layout::LineX, {{g.x0, 0.0}}), ic)));
        write("superposition_trajectories.csv", "trajectories", "",
            format_trajectories(integrate(two, ensemble(Layout::LineX, {{s.x_a(), 0.0}, {s.x_b(), 0.0}}), ic)));

        // Fringes and momentum plateaus at the final time.
        const Slice rho = make_slice([&](double x) { return superposition_density(s, x, cfg_.t_end); }, x_sup);
        Table fringes{"fringes t=" + format_number(cfg_.t_end), {"minimum"}, {}};
        try {
            const FringeReport fr = detect_fringes(rho, cfg_.t_end);
            fringes.header += " spacing_mean=" + format_number(fr.spacing_mean) + " spacing_std="
                + format_number(fr.spacing_std) + " visibility=" + format_number(fr.visibility);
            for (double m : fr.minima) {
                fringes.rows.push_back({m});
            }
        } catch (const NoFringes&) {
            fringes.header += " visibility=" + format_number(fringe_visibility(rho)) + " fringes=none";
        }
        table("superposition_fringes.csv", fringes);

        const Slice vel = make_slice(
            [&](double x) {
                try {
                    return superposition_velocity(s, x, cfg_.t_end);
                } catch (const DensityUnderflow&) {
                    return std::numeric_limits<double>::quiet_NaN();
                }
            },
            x_sup);
        const PlateauReport pr = extract_plateaus(vel, cfg_.t_end, s);
        Table plateaus{"plateaus t=" + format_number(cfg_.t_end) + " kappa_unit=" + format_number(pr.kappa_unit)
                + " early_time=" + (pr.early_time ? "true" : "false"),
            {"n", "velocity", "lo", "hi", "expected"}, {}};
        for (const Plateau& p : pr.plateaus) {
            plateaus.rows.push_back({static_cast<double>(p.n), p.mean_velocity, p.lo, p.hi, p.expected});
        }
        table("superposition_plateaus.csv", plateaus);
    }

    void fig2()
    {
        const PacketParams g = packet();
        const AxisSpec t_axis{"t", 0.0, cfg_.t_end, std::max<std::size_t>(cfg_.time_samples, 1001)};
        Table t{"diffusive_prefactors tau=" + format_number(g.tau()), {"t", "field_slope", "trajectory_rate"}, {}};
        double best = -1.0;
        double t_best = 0.0;
        for (double time : t_axis.samples()) {
            const DiffusivePrefactors f = diffusive_prefactors(g, time);
            if (f.field_slope > best) {
                best = f.field_slope;
                t_best = time;
            }
            t.rows.push_back({time, f.field_slope, f.trajectory_rate});
        }
        t.header += " t_max_slope=" + format_number(t_best);
        table("diffusive_prefactors.csv", t);
    }

    static ConfigPoint position_at(const Trajectory& traj, double t)
    {
        const auto& s = traj.samples;
        const auto it = std::lower_bound(s.begin(), s.end(), t, [](const TrajectorySample& a, double v) {
            return a.t < v;
        });
        if (it == s.begin()) {
            return s.front().point;
        }
        if (it == s.end()) {
            return s.back().point;
        }
        const auto& b = *it;
        const auto& a = *(it - 1);
        const double w = (t - a.t) / (b.t - a.t);
        return {a.point.x + w * (b.point.x - a.point.x), a.point.y + w * (b.point.y - a.point.y)};
    }

    void bipartite_fields(FieldQuantity quantity, std::optional<Layout> markers)
    {
        const SuperpositionParams s = sup();
        for (BipartiteKind kind : kinds()) {
            const QuantumState state = bipartite(kind);
            const std::string name = kind_name(state);
            for (double t : cfg_.snapshots) {
                const AxisSpec x = auto_axis(s, t, "x", 8.0, cfg_.grid);
                AxisSpec y = x;
                y.name = "y";
                grid(name + "_" + to_string(quantity) + "_" + stamp(t) + ".csv", sample_field(state, quantity, x, y, t));
            }
            if (!markers) {
                continue;
            }
            const auto trajs = integrate(state, ensemble(*markers, centers(kind)), integrator(cfg_.snapshots.back()));
            for (double t : cfg_.snapshots) {
                Table tab{"markers state=" + name + " t=" + format_number(t), {"marker", "x", "y"}, {}};
                for (const Trajectory& traj : trajs) {
                    const ConfigPoint p = position_at(traj, t);
                    tab.rows.push_back({static_cast<double>(traj.marker), p.x, p.y});
                }
                table(name + "_markers_" + stamp(t) + ".csv", tab);
            }
        }
    }

    void crossing_table(const std::string& file, const std::string& label, const std::vector<Trajectory>& trajs, Axis axis)
    {
        const CrossingReport r = census_crossings(trajs, axis);
        Table tab{"crossings " + label + " axis=" + to_string(axis) + " pairs=" + std::to_string(r.pairs.size()),
            {"marker_a", "marker_b", "time"}, {}};
        for (const Crossing& c : r.pairs) {
            tab.rows.push_back({static_cast<double>(c.marker_a), static_cast<double>(c.marker_b), c.time});
        }
        table(file, tab);
    }

    void bipartite_trajectories(bool reports)
    {
        const IntegratorConfig ic = integrator(cfg_.t_end);
        for (BipartiteKind kind : kinds()) {
            const QuantumState state = bipartite(kind);
            const std::string name = kind_name(state);
            const auto trajs = integrate(state, ensemble(Layout::Cross, centers(kind)), ic);
            write(name + "_trajectories.csv", "trajectories", "", format_trajectories(trajs));
            if (!reports) {
                continue;
            }
            const std::string label = "state=" + name + " min_separation=" + format_number(min_pairwise_separation(trajs));
            crossing_table(name + "_crossings_x.csv", label, trajs, Axis::X);
            crossing_table(name + "_crossings_y.csv", label, trajs, Axis::Y);
            if (kind == BipartiteKind::Entangled) {
                // Markers launched along x map the X subsystem.
                const auto arms = integrate(state, ensemble(Layout::LineX, centers(kind)), ic);
                crossing_table(name + "_x_subsystem_crossings.csv", "state=" + name + " markers=x_arms", arms, Axis::X);
            }
        }
    }

    const ScenarioConfig& cfg_;
    RunManifest manifest_;
};

} // namespace

RunManifest run_scenario(const ScenarioConfig& config)
{
    config.validate();
    if (config.out.empty()) {
        throw ConfigError("out: output directory is required");
    }
    return Runner(config).run();
}

} // namespace bohm
