#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bohm/errors.hpp"
#include "bohm/export.hpp"

using namespace bohm;

namespace {

std::filesystem::path scratch(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / "bohm_export_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::vector<std::string> lines_of(const std::string& text)
{
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        out.push_back(line);
    }
    return out;
}

std::vector<double> fields_of(const std::string& line)
{
    std::vector<double> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            out.push_back(std::nan(""));
        }
    }
    return out;
}

} // namespace

TEST_SUITE("export")
{
    TEST_CASE("number formatting round-trips")
    {
        CHECK(format_number(0.0) == "0");
        CHECK(format_number(-0.0) == "0");
        CHECK(format_number(1.5) == "1.5");
        CHECK(format_number(std::nan("")) == "nan");
        CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
        for (double v : {0.1, 1.0 / 3.0, -2.718281828459045, 6.02214076e23, 1e-300}) {
            CHECK(std::stod(format_number(v)) == v);
        }
    }

    TEST_CASE("a 3 x 3 grid of zeros is a header plus nine rows")
    {
        FieldGrid g;
        g.quantity = "density";
        g.axes = {{"x", -1, 1, 3}, {"y", -1, 1, 3}};
        g.values.assign(9, 0.0);
        const auto lines = lines_of(format_grid(g));
        REQUIRE(lines.size() == 10);
        CHECK(lines[0] == "# quantity=density t=0 axes=x:-1:1:3;y:-1:1:3 columns=x,y,value");
        CHECK(lines[1] == "-1,-1,0");
        CHECK(lines[2] == "0,-1,0");
        CHECK(lines[9] == "1,1,0");

        const auto path = scratch("zeros.csv");
        export_grid(g, path);
        std::ifstream in(path);
        std::stringstream buf;
        buf << in.rdbuf();
        CHECK(buf.str() == format_grid(g));
    }

    TEST_CASE("grid rows follow the field layout")
    {
        const QuantumState e = BipartiteState{BipartiteKind::Entangled, SuperpositionParams{}, {}};
        const FieldGrid g = sample_field(e, FieldQuantity::Density, {"x", -6, 6, 5}, AxisSpec{"y", -6, 6, 4}, 1.0);
        const auto lines = lines_of(format_grid(g));
        REQUIRE(lines.size() == 21);
        for (std::size_t r = 1; r < lines.size(); ++r) {
            const auto f = fields_of(lines[r]);
            CHECK(f[2] == density(e, {f[0], f[1]}, 1.0));
        }
    }

    TEST_CASE("space-time header has no snapshot time")
    {
        const FieldGrid g = sample_spacetime(SingleGaussian{}, FieldQuantity::VelocityX, {"x", -1, 1, 3}, {"t", 0, 1, 2});
        const auto lines = lines_of(format_grid(g));
        CHECK(lines[0] == "# quantity=velocity_x axes=x:-1:1:3;t:0:1:2 columns=x,t,value");
        CHECK(lines.size() == 7);
    }

    TEST_CASE("malformed grids are rejected")
    {
        FieldGrid g;
        g.axes = {{"x", 0, 1, 3}};
        g.values = {1.0};
        CHECK_THROWS_AS(format_grid(g), InvalidArgument);
    }

    TEST_CASE("trajectory files match the analytic single-packet law")
    {
        const PacketParams p;
        EnsembleSpec spec;
        spec.centers = {{0.0, 0.0}};
        IntegratorConfig cfg;
        cfg.record_stride = 100;
        const auto trajs = integrate(SingleGaussian{p}, spec, cfg);
        const auto path = scratch("single.csv");
        export_trajectories(trajs, path);
        std::ifstream in(path);
        std::string line;
        std::getline(in, line);
        CHECK(line == "# trajectories dimension=1 markers=21 columns=t,x,v_x,marker,status");
        std::size_t rows = 0;
        while (std::getline(in, line)) {
            ++rows;
            CHECK(line.substr(line.rfind(',') + 1) == "complete");
            const auto f = fields_of(line);
            REQUIRE(f.size() == 5);
            const Trajectory& traj = trajs[static_cast<std::size_t>(f[3])];
            CHECK(std::abs(f[1] - analytic_trajectory(p, traj.initial.x, f[0])) < 1e-6);
            CHECK(std::abs(f[2] - velocity_along_trajectory(p, traj.initial.x, f[0])) < 1e-6);
        }
        CHECK(rows == 21 * 101);
    }

    TEST_CASE("bipartite trajectory columns")
    {
        IntegratorConfig cfg;
        cfg.t_end = 0.01;
        const auto trajs = integrate(BipartiteState{BipartiteKind::Entangled, SuperpositionParams{}, {}},
            std::vector<ConfigPoint>{{5.0, -5.0}}, cfg);
        const auto lines = lines_of(format_trajectories(trajs));
        CHECK(lines[0] == "# trajectories dimension=2 markers=1 columns=t,x,y,v_x,v_y,marker,status");
        CHECK(fields_of(lines[1]).size() == 7);
    }

    TEST_CASE("tables")
    {
        const Table t{"report a=1", {"n", "value"}, {{1, 0.5}, {2, 0.25}}};
        CHECK(format_table(t) == "# report a=1 columns=n,value\n1,0.5\n2,0.25\n");
        const Table bad{"bad", {"n"}, {{1, 2}}};
        CHECK_THROWS_AS(format_table(bad), InvalidArgument);
    }

    TEST_CASE("write failures carry the path")
    {
        const auto blocker = scratch("blocker");
        std::ofstream(blocker) << "x";
        const auto target = blocker / "child.csv";
        try {
            write_text(target, "data");
            FAIL("expected an IoError");
        } catch (const IoError& e) {
            CHECK(std::string(e.what()).find(blocker.string()) != std::string::npos);
        }
    }
}
