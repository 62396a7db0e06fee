#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "config.hpp"
#include "output.hpp"
#include "presets.hpp"

using namespace ratchet::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ratchet_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::size_t count_files(const fs::path& dir, const std::string& ext) {
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(dir)) n += e.path().extension() == ext;
  return n;
}

std::vector<double> list(const Json& j) { return j.get<std::vector<double>>(); }

}  // namespace

TEST_CASE("preset table encodes the figure parameter lists") {
  const std::vector<double> fig1_P = {0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  const auto check_evolve = [&](const std::string& name, double hbar_over_pi, const std::vector<double>& P) {
    const Preset& p = find_preset(name);
    CHECK(p.command == Command::Evolve);
    Json cfg = default_config();
    overlay(cfg, p.overlay, "");
    CHECK(list(cfg["evolve"]["hbar_over_pi"]) == std::vector<double>{hbar_over_pi});
    CHECK(list(cfg["evolve"]["P"]) == P);
    CHECK(cfg["evolve"]["kicks"] == 200);
    CHECK(cfg["alpha"] == 0.3);
  };
  check_evolve("fig1a", 1.001, fig1_P);
  check_evolve("fig1b", 0.7, fig1_P);
  check_evolve("fig1c", 2.625, {1.0, 2.0, 3.0, 4.0, 5.0, 7.0, 8.0});
  check_evolve("fig1d", 1.5, fig1_P);

  const std::pair<const char*, double> panels[] = {{"fig2a", 0.5}, {"fig2b", 1.0}, {"fig2c", 3.0}, {"fig2d", 6.0}};
  for (const auto& [name, P] : panels) {
    const Preset& p = find_preset(name);
    CHECK(p.command == Command::Scan);
    Json cfg = default_config();
    overlay(cfg, p.overlay, "");
    const ScanConfig scan = decode_scan(cfg);
    CHECK(scan.spec.P == P);
    CHECK(scan.spec.l_max == 200);
    CHECK(scan.spec.alpha == 0.3);
    CHECK(scan.spec.values.size() == 781);
    CHECK(scan.spec.values.front() == 0.1);
    CHECK(scan.spec.values.back() == doctest::Approx(4.0));
  }

  Json fig3 = default_config();
  overlay(fig3, find_preset("fig3").overlay, "");
  CHECK(list(fig3["classical"]["K_over_pi"]) == std::vector<double>{0.25, 0.55, 0.70, 0.8});

  Json fig4 = default_config();
  overlay(fig4, find_preset("fig4").overlay, "");
  const GammaConfig gamma = decode_gamma(fig4);
  CHECK(gamma.kicks == 100);
  CHECK(gamma.P.front() == 0.5);
  CHECK(gamma.P.back() == 8.0);
  CHECK(std::find(gamma.hbar_over_pi.begin(), gamma.hbar_over_pi.end(), 1.5) != gamma.hbar_over_pi.end());
  CHECK(std::find(gamma.hbar_over_pi.begin(), gamma.hbar_over_pi.end(), 0.7) != gamma.hbar_over_pi.end());

  Json inset = default_config();
  overlay(inset, find_preset("fig4inset").overlay, "");
  const BandsConfig bands = decode_bands(inset);
  REQUIRE(bands.depths.size() == 12);
  CHECK(bands.depths.front() == doctest::Approx(5.0));
  CHECK(bands.depths.back() == doctest::Approx(200.0));
  CHECK(bands.depths[1] / bands.depths[0] == doctest::Approx(bands.depths[11] / bands.depths[10]));

  CHECK_THROWS_AS(find_preset("fig9"), ConfigError);
}

TEST_CASE("overlay rejects unknown keys and mistyped values") {
  Json cfg = default_config();
  CHECK_THROWS_WITH_AS(overlay(cfg, Json{{"evolve", {{"kiks", 3}}}}, ""), "unknown key 'evolve.kiks'", ConfigError);
  CHECK_THROWS_AS(overlay(cfg, Json{{"evolve", {{"kicks", -1}}}}, ""), ConfigError);
  CHECK_THROWS_AS(overlay(cfg, Json{{"evolve", {{"kicks", 2.5}}}}, ""), ConfigError);
  CHECK_THROWS_AS(overlay(cfg, Json{{"alpha", "big"}}, ""), ConfigError);
  CHECK_THROWS_AS(overlay(cfg, Json{{"evolve", {{"P", {1.0, "x"}}}}}, ""), ConfigError);
  CHECK_THROWS_AS(overlay(cfg, Json{{"evolve", 3}}, ""), ConfigError);
  overlay(cfg, Json{{"alpha", 1}}, "");
  CHECK(cfg["alpha"].is_number_float());
}

TEST_CASE("yaml scalars are typed") {
  const Json j = parse_yaml("a: 3\nb: -2\nc: 0.5\nd: true\ne: '7'\nf: ~\ng: [1, 2.5]\nh: text\n", "inline");
  CHECK(j["a"].is_number_unsigned());
  CHECK(j["b"] == -2);
  CHECK(j["c"] == 0.5);
  CHECK(j["d"] == true);
  CHECK(j["e"] == "7");
  CHECK(j["f"].is_null());
  CHECK(j["g"][1] == 2.5);
  CHECK(j["h"] == "text");
  CHECK_THROWS_AS(parse_yaml("a: [1, 2", "broken"), ConfigError);
  CHECK(parse_yaml("", "empty").empty());
}

TEST_CASE("empty scan value list is a config error") {
  Json cfg = default_config();
  overlay(cfg, parse_yaml("scan:\n  values: []\n", "inline"), "");
  CHECK_THROWS_AS(decode_scan(cfg), ConfigError);
}

TEST_CASE("precedence: defaults < preset < config < flags") {
  const fs::path dir = scratch("precedence");
  { std::ofstream(dir / "c.yaml") << "evolve:\n  kicks: 7\n  P: [0.25]\n"; }
  const Run r = run({"evolve", "--preset", "fig1d", "--config", (dir / "c.yaml").string(), "--kicks", "4", "--out",
                     (dir / "o").string()});
  REQUIRE(r.code == 0);
  const Json meta = Json::parse(slurp(dir / "o" / "evolve_hbar1.5_P0.25.csv.meta.json"));
  CHECK(meta["effective_config"]["evolve"]["kicks"] == 4);
  CHECK(list(meta["effective_config"]["evolve"]["P"]) == std::vector<double>{0.25});
  CHECK(list(meta["effective_config"]["evolve"]["hbar_over_pi"]) == std::vector<double>{1.5});
  CHECK(meta["parsed_config"]["evolve"]["kicks"] == 7);
  CHECK(meta["preset"] == "fig1d");
  CHECK(meta["sha256"] == sha256_hex(slurp(dir / "o" / "evolve_hbar1.5_P0.25.csv")));
  const std::string csv = slurp(dir / "o" / "evolve_hbar1.5_P0.25.csv");
  CHECK(csv.rfind("l,mean_k,norm,energy\n0,0,1,0\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
  CHECK(csv.find('\r') == std::string::npos);
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("evolve presets write one file per P") {
  for (const char* preset : {"fig1a", "fig1c"}) {
    const fs::path dir = scratch(preset);
    const Run r = run({"evolve", "--preset", preset, "--kicks", "5", "--out", dir.string()});
    CHECK(r.code == 0);
    CHECK(count_files(dir, ".csv") == 7);
  }
}

TEST_CASE("exit codes") {
  CHECK(run({"evolve", "--kicks", "0"}).code == kExitConfig);
  CHECK(run({"evolve", "--preset", "fig2a"}).code == kExitConfig);
  CHECK(run({"evolve", "--config", "/nonexistent/ratchet.yaml"}).code == kExitConfig);
  CHECK(run({"evolve", "--no-such-flag"}).code == kExitConfig);
  CHECK(run({}).code == kExitConfig);
  CHECK(run({"--help"}).code == kExitOk);

  const fs::path dir = scratch("aliasing");
  const Run r = run({"evolve", "--P", "3", "--hbar-over-pi", "1.5", "--m-max", "16", "--out", dir.string()});
  CHECK(r.code == kExitGuard);
  CHECK(r.err.find("P=3") != std::string::npos);
  CHECK(r.err.find("kick") != std::string::npos);
}

TEST_CASE("scan records aborted rows and writes peaks") {
  const fs::path dir = scratch("scan");
  const Run r = run({"scan", "--axis", "P", "--hbar-over-pi", "1.5", "--values", "0.1,3", "--kicks", "40", "--m-max",
                     "16", "--window", "1", "--out", dir.string()});
  CHECK(r.code == kExitGuard);
  const std::string csv = slurp(dir / "scan.csv");
  CHECK(csv.rfind("param,mean_k,norm,r,s,error\n", 0) == 0);
  std::istringstream lines(csv);
  std::string header, first, second;
  std::getline(lines, header);
  std::getline(lines, first);
  std::getline(lines, second);
  CHECK(first.rfind("0.1,", 0) == 0);
  CHECK(first.find(",3,8,") != std::string::npos);
  CHECK(first.back() == ',');
  CHECK(second.rfind("3,,,3,8,", 0) == 0);
  CHECK(second.find("kick") != std::string::npos);
  CHECK(fs::exists(dir / "peaks.csv"));
}

TEST_CASE("bands: too few depths still writes the counts") {
  const fs::path dir = scratch("bands2");
  const Run r = run({"bands", "--depths", "5,20", "--out", dir.string()});
  CHECK(r.code == kExitConfig);
  CHECK(slurp(dir / "bands.csv") == "depth,barrier,n_below\n5,5.682482840160552,6\n20,22.729931360642208,12\n");
  CHECK_FALSE(fs::exists(dir / "bands_fit.json"));

  const fs::path zero = scratch("bands0");
  run({"bands", "--depths", "0", "--out", zero.string()});
  CHECK(slurp(zero / "bands.csv") == "depth,barrier,n_below\n0,0,0\n");
}

TEST_CASE("gamma with P = 0 gives a single zero row") {
  const fs::path dir = scratch("gamma");
  REQUIRE(run({"gamma", "--P", "0", "--hbar-over-pi", "1.5", "--out", dir.string()}).code == 0);
  std::istringstream lines(slurp(dir / "gamma_hbar1.5.csv"));
  std::string header, row, extra;
  std::getline(lines, header);
  std::getline(lines, row);
  CHECK(header == "P,gamma,error");
  CHECK_FALSE(std::getline(lines, extra));
  CHECK(row.rfind("0,", 0) == 0);
  CHECK(std::abs(std::stod(row.substr(2))) < 1e-15);
}

TEST_CASE("classical K = 0 portrait has constant momentum per orbit") {
  const fs::path dir = scratch("classical");
  REQUIRE(run({"classical", "--K-over-pi", "0", "--ic-per-side", "3", "--steps-per-ic", "20", "--fraction-grid", "4",
               "--fraction-steps", "1000", "--out", dir.string()})
              .code == 0);
  std::istringstream lines(slurp(dir / "portrait_K0pi.csv"));
  std::string line;
  std::getline(lines, line);
  CHECK(line == "ic,x,p");
  std::map<int, std::set<std::string>> momenta;
  while (std::getline(lines, line)) {
    const auto a = line.find(','), b = line.rfind(',');
    momenta[std::stoi(line.substr(0, a))].insert(line.substr(b + 1));
  }
  CHECK(momenta.size() == 9);
  for (const auto& [ic, ps] : momenta) CHECK(ps.size() == 1);
  CHECK(slurp(dir / "chaos_fraction.csv") == "K_over_pi,fraction\n0,0\n");
}

TEST_CASE("outputs are byte-identical across thread counts") {
  const std::vector<std::vector<std::string>> commands = {
      {"scan", "--lo", "0.4", "--hi", "1.6", "--step", "0.05", "--kicks", "60", "--window", "5"},
      {"gamma", "--P", "0.5,1,2,3", "--hbar-over-pi", "0.7,1.5", "--kicks", "40"},
      {"classical", "--ic-per-side", "4", "--steps-per-ic", "30", "--fraction-grid", "8", "--fraction-steps", "1000"},
  };
  int n = 0;
  for (auto args : commands) {
    const fs::path a = scratch("det_a" + std::to_string(n)), b = scratch("det_b" + std::to_string(n));
    ++n;
    auto one = args, four = args;
    one.insert(one.end(), {"--threads", "1", "--out", a.string()});
    four.insert(four.end(), {"--threads", "4", "--out", b.string()});
    REQUIRE(run(one).code == 0);
    REQUIRE(run(four).code == 0);
    for (const auto& e : fs::directory_iterator(a)) CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
  }
}
