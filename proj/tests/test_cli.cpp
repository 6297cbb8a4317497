#include "toric/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace toric;
using namespace toric::cli;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome lab(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "toric_lab_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config text round trip") {
  std::mt19937_64 rng(37);
  for (int t = 0; t < 200; ++t) {
    InstanceSpec s;
    const Index rank = std::uniform_int_distribution<Index>(1, 4)(rng);
    for (Index i = 0; i < rank; ++i) s.dims.push_back(std::uniform_int_distribution<Index>(1, 12)(rng));
    s.metric = static_cast<Metric>(rng() % 4);
    const char* energies[] = {"inverse-power:0.3", "exp:1.05:sq", "exp:2", "table:/tmp/f.txt"};
    s.energy = energies[rng() % 4];
    if (rng() % 2) s.p = Index(rng() % 20);
    s.objective = rng() % 2 ? Objective::Total : Objective::Max;
    s.top_k = Index(1 + rng() % 9);
    s.reduce = rng() % 2 ? Reduction::None : Reduction::Translations;
    s.method = rng() % 2 ? SearchMethod::Brute : SearchMethod::Local;
    s.restarts = int(1 + rng() % 500);
    if (rng() % 2) s.tie_tol = std::uniform_real_distribution<double>(0, 1e-6)(rng);
    s.budget = std::uniform_real_distribution<double>(1, 1e12)(rng);
    s.seed = rng();
    s.threads = int(rng() % 8);
    s.format = static_cast<OutputFormat>(rng() % 3);
    if (rng() % 2) s.out = "results/run " + std::to_string(t);
    CHECK(parse_config_text(to_config_text(s)) == s);
  }
}

TEST_CASE("config text parsing") {
  const InstanceSpec s = parse_config_text("# sweep input\n\ndims = 4x4\n  metric=chebyshev \np = 8\n");
  CHECK(s.dims == std::vector<Index>{4, 4});
  CHECK(s.metric == Metric::Chebyshev);
  CHECK(s.p == 8);
  CHECK_THROWS_AS(parse_config_text("colour = red\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config_text("dims 4,4\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config_text("p = eight\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config_text("format = xml\n"), std::invalid_argument);
}

TEST_CASE("energy syntax") {
  CHECK(parse_energy("inverse-power:2").describe() == "inverse-power:2");
  CHECK(parse_energy("exp:1.05").describe() == "exp:1.05");
  CHECK(parse_energy("exp:1.05:sq").describe() == "exp:1.05:sq");
  const auto path = scratch("table.txt");
  write(path, "# distance value\n1 1.0\n2, 0.5\n\n3 0.25\n");
  const EnergyFunction t = parse_energy("table:" + path.string());
  CHECK(evaluate(t, 2) == 0.5);
  CHECK_THROWS_AS(parse_energy("table:/nonexistent/energy.txt"), IoError);
  CHECK_THROWS_AS(parse_energy("inverse-power"), std::invalid_argument);
  CHECK_THROWS_AS(parse_energy("inverse-power:x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_energy("exp:0.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_energy("gauss:1"), std::invalid_argument);
}

TEST_CASE("site lists") {
  const GridDims d{4, 4};
  CHECK(parse_sites(d, "0,0;0,1").size() == 2);
  CHECK(parse_sites(d, "# row\n0 0\n(0,1)\n0,2 # third\n").size() == 3);
  CHECK_THROWS_AS(parse_sites(d, "0,4"), std::invalid_argument);
  CHECK_THROWS_AS(parse_sites(d, "0,1,2"), std::invalid_argument);
}

TEST_CASE("ascii rendering uses rows for the first coordinate") {
  const GridDims d{2, 3};
  const Configuration s = Configuration::from_sites(d, {Site{{0, 2}}, Site{{1, 0}}});
  CHECK(render_ascii(s) == "0 0 1\n1 0 0\n");
  CHECK(render_ascii(Configuration::from_sites(GridDims{4}, {Site{{1}}})) == "0 1 0 0\n");
  const std::string cube = render_ascii(Configuration::from_sites(GridDims{2, 2, 2}, {Site{{1, 0, 1}}}));
  CHECK(cube == "# slice [*,*,0]\n0 0\n0 0\n# slice [*,*,1]\n0 0\n1 0\n");
}

TEST_CASE("number and field formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_double(2.0 / 3)) == 2.0 / 3);
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("eigs command") {
  const Outcome r = lab({"eigs", "--dims", "4,4", "--metric", "lee", "--f", "inverse-power:1"});
  REQUIRE(r.code == kOk);
  const json j = json::parse(r.out);
  CHECK(j["lambda_min"].get<double>() == doctest::Approx(-25.0 / 12).epsilon(1e-14));
  CHECK(j["argmin"] == json::array({json::array({2, 2})}));

  const Outcome ten = lab({"eigs", "--dims", "10,10", "--f", "inverse-power:0.3", "--dft", "fast"});
  CHECK(json::parse(ten.out)["argmin"] == json::array({json::array({5, 5})}));

  const Outcome two = lab({"eigs", "--dims", "2", "--format", "csv"});
  CHECK(lines(two.out) == std::vector<std::string>{"character,lambda", "0,1", "1,-1"});

  const auto prefix = scratch("four");
  CHECK(lab({"eigs", "--dims", "4x4", "--out", prefix.string()}).code == kOk);
  const auto csv = lines(slurp(prefix.string() + ".csv"));
  CHECK(csv.size() == 17);
  CHECK(csv[11] == "2 2,-2.083333333333333");
  CHECK(json::parse(slurp(prefix.string() + ".json"))["order"] == 16);
}

TEST_CASE("certify exit codes") {
  const Outcome ok = lab({"certify", "--dims", "4,4", "--metric", "lee", "--f", "inverse-power:1"});
  CHECK(ok.code == kOk);
  CHECK(json::parse(ok.out)["certified"] == true);

  const Outcome no = lab({"certify", "--dims", "8", "--metric", "euclid-sq", "--f", "exp:1.05"});
  CHECK(no.code == kNotCertified);
  CHECK(json::parse(no.out)["offenders"] == json::array({json::array({2}), json::array({6})}));

  CHECK(lab({"certify", "--dims", "4,8,2", "--f", "inverse-power:2"}).code == kOk);
  CHECK(lab({"certify", "--dims", "5,4"}).code == kInvalidSpec);
}

TEST_CASE("search, energy and sweep commands") {
  const Outcome s = lab({"search", "--dims", "4,4", "--p", "8", "--objective", "max", "--top-k", "2", "--format",
                         "ascii-grid"});
  REQUIRE(s.code == kOk);
  CHECK(s.out ==
        "# rank 1 max 3.25\n1 0 1 0\n0 1 0 1\n1 0 1 0\n0 1 0 1\n\n"
        "# rank 2 max 3.25\n0 1 0 1\n1 0 1 0\n0 1 0 1\n1 0 1 0\n");

  const Outcome sj = lab({"search", "--dims", "4,4", "--p", "4", "--top-k", "3", "--reduce", "translations"});
  REQUIRE(sj.code == kOk);
  const json doc = json::parse(sj.out);
  CHECK(doc["results"].size() == 3);
  CHECK(doc["results"][0]["orbit_size"] == 4);

  const Outcome e = lab({"energy", "--dims", "4,4", "--sites", "0,0;0,1;0,2;0,3"});
  REQUIRE(e.code == kOk);
  CHECK(json::parse(e.out)["e_tot"].get<double>() == doctest::Approx(10.0).epsilon(1e-14));

  const auto sites = scratch("row.txt");
  write(sites, "0 0\n0 1\n0 2\n0 3\n");
  const Outcome ec = lab({"energy", "--dims", "4,4", "--sites-file", sites.string(), "--format", "csv"});
  CHECK(lines(ec.out).front() == "site,energy");
  CHECK(lines(ec.out).size() == 5);

  const Outcome w = lab({"sweep", "--dims-list", "2x2 4x4 8x4", "--format", "csv"});
  CHECK(w.code == kOk);
  const auto rows = lines(w.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "dims,certified,lambda_min,lambda_minus_one,argmin,optimal_value,checkerboard_e_tot,checkerboard_e_max");
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].find(",true,") != std::string::npos);

  CHECK(lab({"sweep", "--dims-list", "4x4 8", "--metric", "euclid-sq", "--f", "exp:1.05"}).code == kNotCertified);
}

TEST_CASE("kernel, factor and bernstein commands") {
  const Outcome k = lab({"kernel", "--dims", "4,4", "--format", "csv"});
  CHECK(lines(k.out).size() == 17);
  CHECK(lines(k.out)[0] == "site,distance,u");
  CHECK(lines(k.out)[1] == "0 0,0,0");

  const Outcome f = lab({"factor", "--n", "8", "--a", "1.05", "--power", "2"});
  CHECK(f.code == kOk);
  CHECK(lines(f.out).size() == 9);
  CHECK(lines(f.out)[0] == "k,value");

  CHECK(lab({"bernstein", "--n", "8", "--a-grid", "1.01,1.5,2,10"}).code == kOk);
  const Outcome six = lab({"bernstein", "--n", "6", "--a-grid", "1.5", "--format", "json"});
  CHECK(six.code == kNotCertified);
  CHECK(json::parse(six.out)["rows"][0]["argmin"] == json::array({2, 4}));
}

TEST_CASE("error exit codes") {
  CHECK(lab({"eigs"}).code == kInvalidSpec);
  CHECK(lab({"eigs", "--dims", "4,4", "--metric", "taxicab"}).code == kInvalidSpec);
  CHECK(lab({"eigs", "--dims", "4,4", "--unknown"}).code == kInvalidSpec);
  CHECK(lab({}).code == kInvalidSpec);
  CHECK(lab({"search", "--dims", "4,4"}).code == kInvalidSpec);
  CHECK(lab({"search", "--dims", "8,8", "--p", "32"}).code == kBudget);
  CHECK(lab({"search", "--dims", "4,4", "--p", "8", "--budget", "10"}).code == kBudget);
  CHECK(lab({"eigs", "--dims", "100000,100000"}).code == kBudget);
  CHECK(lab({"energy", "--dims", "4,4", "--sites-file", "/nonexistent/sites.txt"}).code == kIo);
  CHECK(lab({"certify", "--dims", "4,4", "--out", "/nonexistent/dir/cert.json"}).code == kIo);
  CHECK(lab({"eigs", "--dims", "4,4", "--config", "/nonexistent/spec.txt"}).code == kIo);
  CHECK(lab({"--help"}).code == kOk);
}

TEST_CASE("budget and config precedence") {
  ::setenv("TORIC_LAB_BUDGET", "100", 1);
  CHECK(lab({"search", "--dims", "4,4", "--p", "8"}).code == kBudget);
  CHECK(lab({"search", "--dims", "4,4", "--p", "8", "--budget", "1e9"}).code == kOk);
  ::unsetenv("TORIC_LAB_BUDGET");

  const auto config = scratch("spec.txt");
  write(config, "dims = 8\nmetric = euclid-sq\nf = exp:1.05\n");
  CHECK(lab({"certify", "--config", config.string()}).code == kNotCertified);
  CHECK(lab({"certify", "--config", config.string(), "--metric", "lee", "--f", "inverse-power:1"}).code == kOk);
}

TEST_CASE("commands are deterministic") {
  const std::vector<std::string> args{"search", "--dims", "6,6",   "--p",       "18",       "--metric",
                                      "chebyshev", "--method", "local", "--restarts", "5", "--seed", "9",
                                      "--objective", "max"};
  const Outcome a = lab(args), b = lab(args);
  CHECK(a.code == kOk);
  CHECK(a.out == b.out);
}

}  // TEST_SUITE
