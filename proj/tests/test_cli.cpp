#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "doctest.h"
#include "fiberent/cli.hpp"

using namespace fiberent;
using namespace fiberent::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("fiberent_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_config(const std::string& name, const std::string& json) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << json;
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string config_dir() { return FIBERENT_CONFIG_DIR; }

const char* kGhz3PdlZero = R"({
  "state": "ghz", "n_qubits": 3, "effect": "pdl",
  "spectrum": {"kind": "uncorrelated", "bandwidths": [1, 1, 1]},
  "channels": [{"pdl": 0}, {"pdl": 0}, {"pdl": 0}]
})";

}  // namespace

TEST_CASE("number formatting and column names") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(2.0 / 3.0) == "0.666666666667");
  CHECK(format_number(1e-20) == "1e-20");
  CHECK(pair_column(0, 1) == "C_01");
  CHECK(pair_column(3, 11) == "C_3_11");
  CHECK(csv_header(3, true) == "param,witness,neg_witness,fidelity,C_01,C_02,C_12,esd,dsf\n");
  CHECK(csv_header(2, false) == "witness,neg_witness,fidelity,C_01,esd,dsf\n");
}

TEST_CASE("simulate: GHZ3 without loss") {
  const auto r = call({"simulate", "--config", write_config("ghz_pdl0.json", kGhz3PdlZero)});
  CHECK(r.code == 0);
  CHECK(r.out.find("witness:    -0.5\n") != std::string::npos);
  CHECK(r.out.find("-0.5,0.5,1,0,0,0,0,1\n") != std::string::npos);
}

TEST_CASE("simulate: W3 under PMD is flagged") {
  const fs::path out = scratch() / "w3.csv";
  const auto r = call({"simulate", "--config", config_dir() + "/simulate_w3_pmd.json", "--out", out.string(), "--quiet"});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  const auto rows = parse_csv(slurp(out));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][3] == "C_01");
  CHECK(std::abs(std::stod(rows[1][3]) - 2.0 / 3.0 * std::exp(-1.0)) <= 1e-11);
  CHECK(std::abs(std::stod(rows[1][0]) - 0.088080) <= 1e-6);
  CHECK(rows[1][6] == "1");
  CHECK(rows[1][7] == "0");
}

TEST_CASE("simulate: anti-aligned PDL on GHZ3 is decoherence-free") {
  const auto r = call({"simulate", "--config", config_dir() + "/simulate_ghz3_pdl_dsf.json", "--quiet"});
  CHECK(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(std::abs(std::stod(rows[1][0]) + 0.5) <= 1e-12);
  CHECK(rows[1].back() == "1");
}

TEST_CASE("CSV output is byte-identical across runs") {
  const fs::path a = scratch() / "a.csv", b = scratch() / "b.csv";
  const std::string cfg = config_dir() + "/sweep_w_pdl.json";
  REQUIRE(call({"sweep", "--config", cfg, "--out", a.string(), "--quiet"}).code == 0);
  REQUIRE(call({"sweep", "--config", cfg, "--out", b.string(), "--quiet"}).code == 0);
  for (const char* label : {"two-channel", "equal", "single"}) {
    const std::string sa = slurp(scratch() / ("a." + std::string(label) + ".csv"));
    CHECK(!sa.empty());
    CHECK(sa == slurp(scratch() / ("b." + std::string(label) + ".csv")));
    CHECK(sa.find('\r') == std::string::npos);
  }
}

TEST_CASE("sweep: GHZ3 PMD family writes three series and an SVG") {
  const fs::path csv = scratch() / "ghz_pmd.csv", svg = scratch() / "ghz_pmd.svg";
  const auto r = call({"sweep", "--config", config_dir() + "/sweep_ghz_pmd.json", "--out", csv.string(), "--svg",
                       svg.string()});
  CHECK(r.code == 0);
  const auto corr = parse_csv(slurp(scratch() / "ghz_pmd.correlated.csv"));
  REQUIRE(corr.size() == 62);
  for (std::size_t k = 1; k < corr.size(); ++k) CHECK(corr[k][2] == "0.5");
  CHECK(fs::exists(scratch() / "ghz_pmd.single.csv"));
  CHECK(fs::exists(scratch() / "ghz_pmd.uncorrelated.csv"));

  const std::string s = slurp(svg);
  CHECK(s.rfind("<?xml", 0) == 0);
  CHECK(s.find("</svg>") != std::string::npos);
  std::size_t polylines = 0;
  for (std::size_t pos = 0; (pos = s.find("<polyline", pos)) != std::string::npos; ++pos) ++polylines;
  CHECK(polylines == 3);
  CHECK(s.find("dgd[0] / dgd*scale") != std::string::npos);
}

TEST_CASE("sweep: two-point grid on an identity channel gives identical rows") {
  const std::string cfg = write_config("ident.json", R"({
    "state": "w", "n_qubits": 3, "effect": "pmd",
    "spectrum": {"kind": "uncorrelated", "bandwidths": [1, 1, 1]},
    "channels": [{"dgd": 0}, {"dgd": 0}, {"dgd": 0}],
    "sweep": {"scan": "uniform", "values": [0, 1]}
  })");
  const auto r = call({"sweep", "--config", cfg, "--quiet"});
  CHECK(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1][0] == "0");
  CHECK(rows[2][0] == "1");
  CHECK(std::vector<std::string>(rows[1].begin() + 1, rows[1].end()) ==
        std::vector<std::string>(rows[2].begin() + 1, rows[2].end()));
}

TEST_CASE("esd command") {
  auto thr = [](const std::string& file) {
    return call({"esd", "--config", config_dir() + "/" + file, "--quiet"});
  };
  const auto pmd = thr("esd_w3_pmd.json");
  CHECK(pmd.code == 0);
  CHECK(std::abs(std::stod(pmd.out) - 0.832555) <= 1e-6);
  CHECK(std::abs(std::stod(thr("esd_w3_pdl.json").out) - 1.386294) <= 1e-6);
  CHECK(thr("esd_ghz3_pmd.json").out == "none\n");

  const auto verbose = call({"esd", "--config", config_dir() + "/esd_w3_pdl.json"});
  CHECK(verbose.out.find("parameter: pdl*scale\n") != std::string::npos);
}

TEST_CASE("esd with an explicit bracket") {
  const std::string cfg = write_config("esd_bracket.json", R"({
    "state": "w", "n_qubits": 3, "effect": "pdl",
    "spectrum": {"kind": "uncorrelated", "bandwidths": [1, 1, 1]},
    "channels": [{"pdl": 1}, {"pdl": 1}, {"pdl": 0}],
    "esd": {"scan": "uniform", "lo": 1, "hi": 2}
  })");
  const auto r = call({"esd", "--config", cfg, "--quiet"});
  CHECK(r.code == 0);
  CHECK(std::abs(std::stod(r.out) - std::log(4.0)) <= 1e-9);
}

TEST_CASE("dsf-check command") {
  const auto r = call({"dsf-check", "--config", config_dir() + "/simulate_ghz3_pdl_dsf.json"});
  CHECK(r.code == 0);
  CHECK(r.out.find("dsf:          yes") != std::string::npos);
  CHECK(call({"dsf-check", "--config", config_dir() + "/simulate_w3_pmd.json", "--quiet"}).out == "not dsf\n");
}

TEST_CASE("oracle-compare command") {
  const auto ghz = call({"oracle-compare", "--config", config_dir() + "/oracle_ghz3.json"});
  CHECK(ghz.code == 0);
  CHECK(ghz.out.find("result:        pass") != std::string::npos);
  CHECK(call({"oracle-compare", "--config", config_dir() + "/oracle_w3_correlated.json", "--quiet"}).out == "pass\n");

  const fs::path out = scratch() / "oracle.csv";
  const std::string zero = write_config("oracle_zero.json", R"({
    "state": "w", "n_qubits": 3, "effect": "pmd",
    "spectrum": {"kind": "uncorrelated", "bandwidths": [1, 1, 1]},
    "channels": [{"dgd": 0}, {"dgd": 0}, {"dgd": 0}],
    "oracle": {"points": 41, "half_width": 5}
  })");
  CHECK(call({"oracle-compare", "--config", zero, "--out", out.string(), "--quiet"}).code == 0);
  const auto rows = parse_csv(slurp(out));
  REQUIRE(rows.size() == 2);
  CHECK(std::stod(rows[1][0]) < 1e-9);

  const std::string big = write_config("oracle_big.json", R"({
    "state": "ghz", "n_qubits": 5, "effect": "pmd",
    "spectrum": {"kind": "uncorrelated", "bandwidths": [1, 1, 1, 1, 1]},
    "channels": [{"dgd": 1}, {"dgd": 1}, {"dgd": 1}, {"dgd": 1}, {"dgd": 1}]
  })");
  const auto too_big = call({"oracle-compare", "--config", big});
  CHECK(too_big.code == kExitConfig);
  CHECK(too_big.err.find("n_qubits") != std::string::npos);
  CHECK(call({"oracle-compare", "--config", write_config("ghz_pdl0b.json", kGhz3PdlZero)}).code == kExitConfig);
}

TEST_CASE("schema violations exit with code 2 and name the field") {
  auto expect_field = [](const std::string& json, const std::string& field) {
    const auto r = call({"simulate", "--config", write_config("bad.json", json)});
    CHECK(r.code == kExitConfig);
    CHECK_MESSAGE(r.err.find(field) != std::string::npos, r.err);
  };
  expect_field(R"({"state": "ghz", "n_qubits": 3, "effect": "pmd",
    "spectrum": {"kind": "uncorrelated", "bandwidths": [1, 1, 1]},
    "channels": [{"dgd": 1}, {"dgd": 1}]})",
               "channels");
  expect_field(R"({"state": "ghz", "n_qubits": 3, "effect": "pmd", "colour": 1,
    "spectrum": {"kind": "uncorrelated", "bandwidths": [1, 1, 1]},
    "channels": [{"dgd": 1}, {"dgd": 1}, {"dgd": 1}]})",
               "colour");
  expect_field(R"({"state": "ghz", "n_qubits": 3, "effect": "pmd",
    "spectrum": {"kind": "uncorrelated", "bandwidths": [1, 1, 1]},
    "channels": [{"dgd": 1, "dgd_sign": 2}, {"dgd": 1}, {"dgd": 1}]})",
               "channels[0].dgd_sign");
  expect_field(R"({"state": "bell", "n_qubits": 2, "effect": "pmd",
    "spectrum": {"kind": "uncorrelated", "bandwidths": [1, 1]},
    "channels": [{"dgd": 1}, {"dgd": 1}]})",
               "state");
  expect_field(R"({"state": "w", "n_qubits": 3, "effect": "pmd",
    "spectrum": {"kind": "uncorrelated", "bandwidths": [1, -1, 1]},
    "channels": [{"dgd": 1}, {"dgd": 1}, {"dgd": 1}]})",
               "spectrum.bandwidths[1]");
  expect_field(R"({"state": "w", "n_qubits": 3, "effect": "pmd",
    "spectrum": {"kind": "uncorrelated", "bandwidths": [1, 1, 1]},
    "channels": [{"dgd": -1}, {"dgd": 1}, {"dgd": 1}]})",
               "channels[0].dgd");
  expect_field(R"({"state": "w", "n_qubits": 13, "effect": "pmd",
    "spectrum": {"kind": "uncorrelated", "bandwidths": [1]}, "channels": []})",
               "n_qubits");
  expect_field(R"({"state": "w", "n_qubits": 3)", "invalid JSON");
  expect_field(R"({"state": "w", "n_qubits": 3, "effect": "pmd",
    "channels": [{"dgd": 1}, {"dgd": 1}, {"dgd": 1}]})",
               "spectrum");
}

TEST_CASE("sweep and esd blocks are validated") {
  const std::string head = R"("state": "w", "n_qubits": 3, "effect": "pmd",
    "spectrum": {"kind": "uncorrelated", "bandwidths": [1, 1, 1]},
    "channels": [{"dgd": 1}, {"dgd": 1}, {"dgd": 1}])";
  auto code_of = [&](const std::string& cmd, const std::string& extra) {
    return call({cmd, "--config", write_config("blk.json", "{" + head + extra + "}")});
  };
  CHECK(code_of("sweep", "").code == kExitConfig);
  CHECK(code_of("esd", "").code == kExitConfig);
  auto r = code_of("sweep", R"(, "sweep": {"scan": {"photon": 3}, "values": [0, 1]})");
  CHECK(r.code == kExitConfig);
  CHECK(r.err.find("sweep.scan.photon") != std::string::npos);
  r = code_of("sweep", R"(, "sweep": {"scan": "uniform", "values": [1, 0]})");
  CHECK(r.err.find("sweep.values") != std::string::npos);
  r = code_of("sweep", R"(, "sweep": {"scan": "uniform", "grid": {"start": 0, "stop": 1, "points": 3}, "values": [0, 1]})");
  CHECK(r.code == kExitConfig);
  r = code_of("sweep", R"(, "sweep": {"grid": {"start": 0, "stop": 1, "points": 3},
      "series": [{"label": "a", "scan": "uniform"}, {"label": "a", "scan": "uniform"}]})");
  CHECK(r.err.find("duplicate") != std::string::npos);
  r = code_of("sweep", R"(, "sweep": {"grid": {"start": 0, "stop": 1, "points": 3},
      "series": [{"label": "a", "n_qubits": 4, "scan": "uniform"}]})");
  CHECK(r.code == kExitConfig);
  CHECK(r.err.find("sweep.series[0].channels") != std::string::npos);
  r = code_of("esd", R"(, "esd": {"scan": "uniform", "lo": 2, "hi": 1})");
  CHECK(r.err.find("esd.hi") != std::string::npos);
  r = code_of("oracle-compare", R"(, "oracle": {"points": 40})");
  CHECK(r.code == kExitConfig);
}

TEST_CASE("I/O failures exit with code 4") {
  CHECK(call({"simulate", "--config", (scratch() / "missing.json").string()}).code == kExitIo);
  const auto r = call({"simulate", "--config", config_dir() + "/simulate_w3_pmd.json", "--out",
                       (scratch() / "no_dir" / "x.csv").string()});
  CHECK(r.code == kExitIo);
  CHECK(call({"sweep", "--config", config_dir() + "/sweep_w_pdl.json", "--out", (scratch() / "s.csv").string(),
              "--svg", (scratch() / "no_dir" / "x.svg").string(), "--quiet"})
            .code == kExitIo);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(call({}).code == kExitConfig);
  CHECK(call({"teleport"}).code == kExitConfig);
  CHECK(call({"simulate"}).code == kExitConfig);
  CHECK(call({"esd", "--config", "x.json", "--svg", "y.svg"}).code == kExitConfig);
  const auto help = call({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("oracle-compare") != std::string::npos);
}
