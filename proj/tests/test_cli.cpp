#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#ifndef SAGATE_CLI_BIN
#error "SAGATE_CLI_BIN must point at the built binary"
#endif

namespace {

using nlohmann::json;

int run_cli(const std::string& args, const std::string& stdout_path = "cli_stdout.txt",
            const std::string& stderr_path = "cli_stderr.txt") {
  const std::string cmd =
      std::string(SAGATE_CLI_BIN) + " " + args + " > " + stdout_path + " 2> " + stderr_path;
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

Table parse_csv(const std::string& text) {
  Table table;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream cells(line);
    std::string cell;
    if (first) {
      while (std::getline(cells, cell, ',')) table.header.push_back(cell);
      first = false;
      continue;
    }
    std::vector<double> row;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace

TEST_CASE("rotate with phi = 0 reports a perfect identity gate") {
  REQUIRE(run_cli("rotate --phi 0 --tau 0.5 --out rotate_id.json") == 0);
  const json doc = json::parse(slurp("rotate_id.json"));
  CHECK(doc.at("fidelity").get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(doc.at("success_probability").get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(doc.at("qsl").at("slack").get<double>() >= -1e-9);
  CHECK(!doc.contains("warning"));
}

TEST_CASE("fast superadiabatic rotation stays exact") {
  REQUIRE(run_cli("rotate --axis 1,0,1 --phi 1.5707963 --theta0 2.827433388 --tau 0.5 "
                  "--out rotate_sa.json") == 0);
  const json doc = json::parse(slurp("rotate_sa.json"));
  CHECK(doc.at("fidelity").get<double>() >= 1.0 - 1e-7);
  const auto& cost = doc.at("cost");
  CHECK(cost.at("sigma_numeric").get<double>() ==
        doctest::Approx(cost.at("sigma_closed").get<double>()).epsilon(1e-6));
}

TEST_CASE("fast bare drive reports its infidelity") {
  REQUIRE(run_cli("rotate --axis 1,0,1 --phi 1.5707963 --theta0 2.827433388 --tau 0.5 "
                  "--mode adiabatic --out rotate_ad.json") == 0);
  const json doc = json::parse(slurp("rotate_ad.json"));
  CHECK(doc.at("fidelity").get<double>() < 1.0);
  CHECK(doc.contains("warning"));
}

TEST_CASE("identical flags produce bit-identical reports") {
  REQUIRE(run_cli("rotate --axis 0,1,1 --phi 0.8 --theta0 2.9 --tau 0.7 --seed 9 "
                  "--out det_a.json") == 0);
  REQUIRE(run_cli("rotate --axis 0,1,1 --phi 0.8 --theta0 2.9 --tau 0.7 --seed 9 "
                  "--out det_b.json") == 0);
  CHECK(slurp("det_a.json") == slurp("det_b.json"));

  REQUIRE(run_cli("cost-sweep --jobs 3 --out sweep_a.csv") == 0);
  REQUIRE(run_cli("cost-sweep --jobs 1 --out sweep_b.csv") == 0);
  const std::string a = slurp("sweep_a.csv");
  CHECK(!a.empty());
  CHECK(a == slurp("sweep_b.csv"));
}

TEST_CASE("controlled subcommand runs a cnot-style gate") {
  REQUIRE(run_cli("controlled --controls 1 --axis 1,0,0 --phi 3.14159265358979 "
                  "--tau 0.5 --out controlled.json") == 0);
  const json doc = json::parse(slurp("controlled.json"));
  CHECK(doc.at("controls").get<int>() == 1);
  CHECK(doc.at("fidelity").get<double>() >= 1.0 - 1e-7);
}

TEST_CASE("cost sweep emits the expected table") {
  REQUIRE(run_cli("cost-sweep --theta0-list 3.14159265358979 "
                  "--tau-omega-list 1.5707963267949,20,50 --out sweep.csv") == 0);
  const Table table = parse_csv(slurp("sweep.csv"));
  REQUIRE(table.header ==
          std::vector<std::string>{"theta0", "tau_omega", "sigma_numeric", "sigma_closed",
                                   "sigma_controlled"});
  REQUIRE(table.rows.size() == 3);
  for (const auto& row : table.rows) {
    CHECK(row[2] / row[3] == doctest::Approx(1.0).epsilon(1e-6));
    // Values round-trip through 12 significant digits in the CSV.
    CHECK(row[4] == doctest::Approx(std::sqrt(2.0) * row[3]).epsilon(1e-10));
  }
  // tau*omega = pi/2 at theta0 = pi costs exactly 2 sqrt(2).
  CHECK(table.rows[0][3] == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));
  // Large tau*omega rows sit against the 2 hbar omega asymptote.
  CHECK(std::abs(table.rows[1][3] - 2.0) < 0.01 * 2.0);
  CHECK(std::abs(table.rows[2][3] - 2.0) < 0.01 * 2.0);
}

TEST_CASE("cost sweep json format parses") {
  REQUIRE(run_cli("cost-sweep --theta0-list 1.5707963 --tau-omega-list 1,2 "
                  "--format json --out sweep.json") == 0);
  const json doc = json::parse(slurp("sweep.json"));
  REQUIRE(doc.is_array());
  REQUIRE(doc.size() == 2);
  CHECK(doc[0].contains("sigma_numeric"));
}

TEST_CASE("qsl sweep holds the bound down to tau*omega = 0.025") {
  REQUIRE(run_cli("qsl --axis 1,0,1 --phi 1.5707963 --theta0 2.827433388 --tau 1.6 "
                  "--steps 2000 --tau-octaves 6 --out qsl.csv") == 0);
  const Table table = parse_csv(slurp("qsl.csv"));
  REQUIRE(table.header ==
          std::vector<std::string>{"tau_omega", "bures", "e_tau", "bound_time", "slack",
                                   "chi", "chi_floor"});
  REQUIRE(table.rows.size() == 7);
  for (const auto& row : table.rows) {
    CHECK(row[4] >= -1e-9);            // slack
    CHECK(row[5] >= row[6] - 1e-9);    // chi >= chi_floor
  }
  CHECK(table.rows.back()[0] == doctest::Approx(0.025));
}

TEST_CASE("circuit file runs and reports per-gate outcomes") {
  spit("toffoli.json",
       R"({"qubits": 3, "seed": 1, "gates": [{"name": "toffoli", "targets": [0, 1, 2]}]})");
  REQUIRE(run_cli("circuit toffoli.json --input 110 --steps 2000 --out toffoli_out.json") ==
          0);
  const json doc = json::parse(slurp("toffoli_out.json"));
  const auto& amp = doc.at("final_amplitudes");
  REQUIRE(amp.size() == 8);
  const double p7 = amp[7][0].get<double>() * amp[7][0].get<double>() +
                    amp[7][1].get<double>() * amp[7][1].get<double>();
  CHECK(p7 == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(doc.at("gates")[0].at("outcome").get<int>() == 1);
  CHECK(doc.at("total_sigma").get<double>() > 0.0);
}

TEST_CASE("empty circuit echoes the input state") {
  spit("empty.json", R"({"qubits": 2, "seed": 0, "gates": []})");
  REQUIRE(run_cli("circuit empty.json --input 10 --out empty_out.json") == 0);
  const json doc = json::parse(slurp("empty_out.json"));
  const auto& amp = doc.at("final_amplitudes");
  CHECK(amp[2][0].get<double>() == doctest::Approx(1.0));
  CHECK(doc.at("total_sigma").get<double>() == doctest::Approx(0.0));
}

TEST_CASE("bell circuit lands on the maximally entangled pair") {
  spit("bell.json", R"({
    "qubits": 2,
    "seed": 3,
    "gates": [
      {"name": "hadamard", "targets": [0]},
      {"name": "cnot", "targets": [0, 1]}
    ]
  })");
  REQUIRE(run_cli("circuit bell.json --steps 2000 --out bell_out.json") == 0);
  const json doc = json::parse(slurp("bell_out.json"));
  const auto& amp = doc.at("final_amplitudes");
  const auto mag = [&](int i) {
    return std::sqrt(amp[i][0].get<double>() * amp[i][0].get<double>() +
                     amp[i][1].get<double>() * amp[i][1].get<double>());
  };
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(mag(0) - r) < 1e-6);
  CHECK(std::abs(mag(3) - r) < 1e-6);
  CHECK(mag(1) < 1e-6);
  CHECK(mag(2) < 1e-6);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli("rotate --tau 0.5") == 2);                   // missing required --phi
  CHECK(run_cli("rotate --phi 0 --no-such-flag 1") == 2);
  CHECK(run_cli("rotate --phi 0 --axis 0,0,0") == 2);
  CHECK(run_cli("rotate --phi 0 --mode sideways") == 2);
  CHECK(run_cli("circuit missing_file.json") == 2);
  CHECK(run_cli("cost-sweep --format yaml") == 2);
}

TEST_CASE("schema violations exit with code 2 and a field diagnostic") {
  spit("bad.json", R"({"qubits": 2, "seed": 0, "gates": [{"name": "cnot", "targets": [0, 1], "oops": 1}]})");
  CHECK(run_cli("circuit bad.json") == 2);
  const std::string err = slurp("cli_stderr.txt");
  CHECK(err.find("gates[0]") != std::string::npos);
  CHECK(err.find("oops") != std::string::npos);

  spit("bad2.json", R"({"qubits": 2, "seed": 0, "gates": [{"name": "cnot", "targets": [0, 1]}], "extra": 4})");
  CHECK(run_cli("circuit bad2.json") == 2);

  REQUIRE(run_cli("circuit bell.json --input 101") == 2);  // wrong bitstring length
}

TEST_CASE("SAGATE_JOBS sets the default worker count") {
  const std::string cmd = std::string("SAGATE_JOBS=4 ") + SAGATE_CLI_BIN +
                          " cost-sweep --theta0-list 1.57 --tau-omega-list 1,2,3,4 "
                          "--out env_sweep.csv > cli_stdout.txt 2> cli_stderr.txt";
  REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  REQUIRE(run_cli("cost-sweep --theta0-list 1.57 --tau-omega-list 1,2,3,4 "
                  "--out plain_sweep.csv") == 0);
  CHECK(slurp("env_sweep.csv") == slurp("plain_sweep.csv"));
}

TEST_CASE("help exits cleanly") {
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("rotate --help") == 0);
}
