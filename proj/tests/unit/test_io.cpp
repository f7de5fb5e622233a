#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cosknn/cli.hpp"
#include "cosknn/config.hpp"
#include "cosknn/csv.hpp"
#include "cosknn/fixture.hpp"
#include "cosknn/reference.hpp"
#include "support/gen.hpp"

using namespace cosknn;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("cosknn_unit_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string config_error_key(std::string_view text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "";
}

const std::string kFixture = COSKNN_FIXTURE_DIR "/table1.csv";

}  // namespace

TEST_CASE("minimal config fills documented defaults") {
  const auto cfg = parse_config_text("# minimal\nd = 5\ns = 10\n");
  CHECK(cfg == ScenarioConfig{});
  CHECK(cfg.seed == 20090101);
  CHECK(cfg.trials == 200);
  CHECK(cfg.n_values == std::vector<std::size_t>{100, 400, 1600, 6400});
}

TEST_CASE("config errors name the key") {
  CHECK(config_error_key("reveal.p = 1.5\n") == "reveal.p");
  try {
    parse_config_text("reveal.p = 1.5\n");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("(0, 1)") != std::string::npos);
  }
  CHECK(config_error_key("colour = blue\n") == "colour");
  CHECK(config_error_key("d = 5\nd = 6\n") == "d");
  CHECK(config_error_key("d = five\n") == "d");
  CHECK(config_error_key("mask.process = sometimes\n") == "mask.process");
  CHECK(config_error_key("experiment.n_values = 400,100\n") == "experiment.n_values");
  CHECK(config_error_key("d = 5\nmask.process = example2_incremental\nmask.start_size = 9\n") == "mask.start_size");
  CHECK(config_error_key("d\n") != "");
  CHECK_THROWS_AS(parse_config("/nonexistent/cosknn.cfg"), ConfigError);
}

TEST_CASE("resolved config round-trips") {
  testgen::Engine g(31);
  for (int t = 0; t < 300; ++t) {
    ScenarioConfig c;
    c.d = testgen::uniform_int(g, 5, 12);
    c.s = testgen::uniform_real(g, 1.5, 20.0);
    c.seed = g();
    c.trials = testgen::uniform_int(g, 1, 1000);
    c.mask_process = static_cast<MaskProcess>(testgen::uniform_int(g, 0, 2));
    c.mask_start_size = testgen::uniform_int(g, 1, c.d);
    c.mask_growth_prob = testgen::uniform_real(g, 0.01, 1.0);
    c.reveal_process = static_cast<RevealProcess>(testgen::uniform_int(g, 0, 1));
    c.reveal_p = testgen::uniform_real(g, 0.01, 0.99);
    c.new_user_mask_law = static_cast<NewUserMaskLaw>(testgen::uniform_int(g, 0, 1));
    c.rating_model = static_cast<RatingModel>(testgen::uniform_int(g, 0, 1));
    c.noise_delta = c.rating_model == RatingModel::mean_rating ? 0.0 : testgen::uniform_real(g, 0.0, 0.2);
    c.psi = testgen::coin(g) ? Psi::identity : Psi::sqrt;
    c.schedule = {ScheduleKind::power, testgen::uniform_real(g, 0.05, 1.0)};
    c.n_values = {testgen::uniform_int(g, 1, 50), testgen::uniform_int(g, 51, 5000)};
    c.validate();
    CHECK(parse_config_text(render_config(c)) == c);
  }
}

TEST_CASE("format_double") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e300) == "1e+300");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("CSV rendering") {
  auto m = make_manifest("cosknn test", "d = 5\n", 42, true);
  m.notes.push_back("hello");
  const CsvTable empty{{"a", "b"}, {}};
  const auto text = render_csv(empty, m);
  CHECK(text ==
        "# command: cosknn test\n# code_version: " COSKNN_VERSION
        "\n# rng_algorithm: xoshiro256**/splitmix64-keyed-streams v1\n# seed: 42\n"
        "# timestamp: 1970-01-01T00:00:00Z\n# note: hello\n# config:\n#   d = 5\na,b\n");
  const CsvTable quoted{{"x"}, {{"a,b"}, {"say \"hi\""}}};
  const auto q = render_csv(quoted, m);
  CHECK(q.find("\"a,b\"\n") != std::string::npos);
  CHECK(q.find("\"say \"\"hi\"\"\"\n") != std::string::npos);
  CHECK(q.find('\r') == std::string::npos);

  const auto dir = scratch("csv");
  emit_csv(quoted, dir / "a.csv", m);
  emit_csv(quoted, dir / "b.csv", m);
  CHECK(read_file(dir / "a.csv") == read_file(dir / "b.csv"));
  CHECK_THROWS_WITH_AS(emit_csv(quoted, dir / "missing" / "c.csv", m), doctest::Contains("missing"),
                       std::runtime_error);
  CHECK(make_manifest("x", "", 1, false).timestamp != "1970-01-01T00:00:00Z");
}

TEST_CASE("MAE table schema") {
  experiments::MaeTable t;
  experiments::MaeRow r;
  r.n = 100;
  r.k_n = 5;
  r.trials = 200;
  r.mae = 0.25;
  t.rows.push_back(r);
  const auto csv = mae_csv(t);
  CHECK(csv.header == std::vector<std::string>{"n", "k_n", "trials", "mae", "mae_stderr", "degenerate_fraction"});
  CHECK(csv.rows[0][0] == "100");
  CHECK(csv.rows[0][3] == "0.25");
  CHECK(bounds_csv(t).rows.empty());
  const auto dat = render_gnuplot_dat(t, make_manifest("x", "", 1, true));
  CHECK(dat.find("\n100 5 0.25 0\n") != std::string::npos);
}

TEST_CASE("fixture parsing") {
  const auto fx = load_fixture(kFixture);
  CHECK(fx.user_ids.size() == 8);
  CHECK(fx.new_user_id == "Bob");
  CHECK(fx.snapshot.reveal_set().size() == 5);
  CHECK(fx.snapshot.target(7) == 9.0);
  CHECK_THROWS_WITH(parse_fixture("2,10,1\na,1:3,4\nb,3:1,NA\n"), doctest::Contains("line 3"));
  CHECK_THROWS(parse_fixture("2,10,2\na,1:3,4\nb,2:1,NA\n"));
  CHECK_THROWS(parse_fixture("2,10,1\na,1:3,4\nb,2:1,5\n"));
  CHECK_THROWS(parse_fixture("2,10,1\na,1:3;1:4,4\nb,2:1,NA\n"));
  CHECK_THROWS(load_fixture("/nonexistent.csv"));
}

TEST_CASE("cli: version and usage errors") {
  const auto v = cli({"version"});
  CHECK(v.code == kExitOk);
  CHECK(v.out.find(COSKNN_VERSION) != std::string::npos);
  CHECK(v.out.find("xoshiro256**") != std::string::npos);

  const auto unknown = cli({"frobnicate"});
  CHECK(unknown.code == kExitUsage);
  CHECK(unknown.err.find("Usage") != std::string::npos);
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"estimate", "--fixture", kFixture}).code == kExitUsage);
  CHECK(cli({"estimate", "--fixture", "/nonexistent.csv", "--k", "2"}).code == kExitUsage);
  CHECK(cli({"estimate", "--fixture", kFixture, "--k", "2", "--psi", "cube"}).code == kExitUsage);
  CHECK(cli({"--help"}).code == kExitOk);
}

TEST_CASE("cli: estimate on the Table-1 fixture matches the oracle") {
  const auto r = cli({"estimate", "--fixture", kFixture, "--k", "2", "--reproducible"});
  REQUIRE(r.code == kExitOk);
  const auto fx = load_fixture(kFixture);
  const auto oracle = reference::brute_force_estimate(fx.snapshot, 2, Psi::identity);
  CHECK(r.out.rfind("# command: cosknn estimate --fixture table1.csv --k 2 --reproducible\n", 0) == 0);
  CHECK(r.out.find("estimate,Bob,,,,,," + format_double(oracle.value) + ",none\n") != std::string::npos);
  CHECK(r.out.find("neighbor,Lucy,1,") != std::string::npos);
  CHECK(r.out.find("neighbor,Johanna,2,") != std::string::npos);
}

TEST_CASE("cli: similarity lists every ordered pair") {
  const auto r = cli({"similarity", "--fixture", kFixture, "--psi", "sqrt"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("row_id,col_id,sbar,penalty,s\n") != std::string::npos);
  CHECK(r.out.find("\nLucy,Bob,") != std::string::npos);
  std::size_t lines = 0;
  for (char c : r.out) lines += c == '\n';
  std::size_t comments = 0;
  std::istringstream in(r.out);
  for (std::string l; std::getline(in, l);) comments += !l.empty() && l[0] == '#';
  CHECK(lines - comments == 1 + 9 * 8);
}

TEST_CASE("cli: validate-alpha, rates and consistency") {
  const auto dir = scratch("cli");
  fs::create_directories(dir / "a");
  fs::create_directories(dir / "b");
  const auto out_a = (dir / "a" / "alpha.csv").string();
  const auto out_b = (dir / "b" / "alpha.csv").string();
  REQUIRE(cli({"validate-alpha", "--d", "6", "--n", "10", "--trials", "2000", "--out", out_a, "--reproducible",
               "--threads", "1"})
              .code == kExitOk);
  REQUIRE(cli({"validate-alpha", "--d", "6", "--n", "10", "--trials", "2000", "--out", out_b, "--reproducible",
               "--threads", "2"})
              .code == kExitOk);
  CHECK(read_file(out_a) == read_file(out_b));
  CHECK(read_file(out_a).find("i,alpha_closed_form,alpha_mc,stderr,z_score\n") != std::string::npos);

  const auto cfg = dir / "ok.cfg";
  std::ofstream(cfg) << "d = 5\ns = 10\ntrials = 30\nexperiment.n_values = 10,40,160,640\n";
  const auto rates = cli({"rates", "--config", cfg.string(), "--out", (dir / "rates").string(), "--reproducible"});
  REQUIRE(rates.code == kExitOk);
  for (const char* f : {"mae.csv", "ratefit.csv", "mae.dat", "bounds.csv"}) {
    const auto text = read_file(dir / "rates" / f);
    CHECK(text.rfind("# command: ", 0) == 0);
    CHECK(text.find("#   experiment.n_values = 10,40,160,640\n") != std::string::npos);
  }

  const auto broken = dir / "broken.cfg";
  std::ofstream(broken) << "d = 5\ns = 10\ntrials = 100\nschedule.name = power\nschedule.value = 1\n"
                           "experiment.n_values = 10,640\n";
  CHECK(cli({"consistency", "--config", broken.string()}).code == kExitAssertion);

  const auto bad = dir / "bad.cfg";
  std::ofstream(bad) << "reveal.p = 1.5\n";
  const auto r = cli({"consistency", "--config", bad.string()});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("reveal.p") != std::string::npos);
  CHECK(cli({"rates", "--config", (dir / "nope.cfg").string(), "--out", dir.string()}).code == kExitUsage);
}
