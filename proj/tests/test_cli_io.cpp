#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "pairsel/csv.hpp"
#include "test_support.hpp"

using namespace pairsel;
using nlohmann::json;

namespace {

struct CliResult {
    int status = -1;
    std::string output;
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(PAIRSEL_CLI_PATH) + " " + args + " 2>&1";
    CliResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    while (std::size_t got = fread(buf.data(), 1, buf.size(), pipe))
        r.output.append(buf.data(), got);
    const int rc = pclose(pipe);
    r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return r;
}

std::string tmp_path(const std::string& name) {
    return "/tmp/pairsel_cli_test_" + name;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    REQUIRE(out.good());
    out << text;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("csv round trip preserves values to full precision") {
    DataMatrix d;
    d.x = test_support::random_matrix(15, 4, 5);
    d.x(0, 0) = 1.0 / 3.0;
    d.x(1, 1) = 1e-17;
    d.x(2, 2) = -123456789.123456789;
    d.y = test_support::random_vector(15, 6);
    d.column_names = {"alpha", "beta", "gamma", "delta"};

    const std::string path = tmp_path("roundtrip.csv");
    emit_csv(path, d);
    const DataMatrix back = ingest_csv(path, std::string("y"));
    REQUIRE(back.n() == 15);
    REQUIRE(back.p() == 4);
    CHECK(back.column_names == d.column_names);
    // %.17g output reparses bit-exactly
    CHECK(back.x == d.x);
    CHECK(back.y == d.y);
}

TEST_CASE("ingest_csv selects the response by name or index") {
    const std::string path = tmp_path("resp.csv");
    write_file(path, "a,b,c\n1,2,3\n4,5,6\n");
    const DataMatrix by_name = ingest_csv(path, std::string("b"));
    CHECK(by_name.y[0] == 2.0);
    CHECK(by_name.y[1] == 5.0);
    CHECK(by_name.column_names == std::vector<std::string>{"a", "c"});
    CHECK(by_name.x(1, 1) == 6.0);

    const DataMatrix by_index = ingest_csv(path, 2);
    CHECK(by_index.y[0] == 3.0);
    CHECK(by_index.column_names == std::vector<std::string>{"a", "b"});

    // headerless input synthesizes x1..xp names
    const std::string hless = tmp_path("hless.csv");
    write_file(hless, "1,2,3\n4,5,6\n");
    const DataMatrix nh = ingest_csv(hless, 0, /*header=*/false);
    CHECK(nh.y[1] == 4.0);
    CHECK(nh.column_names == std::vector<std::string>{"x2", "x3"});

    CHECK_THROWS_AS(ingest_csv(path, std::string("zz")), std::runtime_error);
    CHECK_THROWS_AS(ingest_csv(path, 5), std::runtime_error);
    CHECK_THROWS_AS(ingest_csv("/nonexistent/file.csv", 0), std::runtime_error);
}

TEST_CASE("ingest_csv reports the coordinates of bad cells") {
    const std::string path = tmp_path("bad.csv");
    write_file(path, "a,b\n1,2\n3,NA\n");
    CHECK_THROWS_WITH_AS(static_cast<void>(ingest_csv(path, std::string("b"))),
                         "csv: non-numeric or missing value at row 3, column 2: \"NA\"",
                         std::runtime_error);

    write_file(path, "a,b\n1,2\n3,\n");
    CHECK_THROWS_AS(ingest_csv(path, std::string("b")), std::runtime_error);

    const std::string ragged = tmp_path("ragged.csv");
    write_file(ragged, "a,b\n1,2\n3,4,5\n");
    CHECK_THROWS_WITH_AS(static_cast<void>(ingest_csv(ragged, std::string("b"))),
                         "csv: ragged row 3 has 3 fields, expected 2",
                         std::runtime_error);

    const std::string empty = tmp_path("empty.csv");
    write_file(empty, "a,b\n");
    CHECK_THROWS_AS(ingest_csv(empty, std::string("b")), std::runtime_error);
}

TEST_CASE("cli quantile prints the frozen thresholds") {
    const CliResult r = run_cli("quantile --n 100 --p 1000 --alpha 0.05 --delta 0.1");
    REQUIRE(r.status == 0);
    const json j = json::parse(r.output);
    CHECK(j.at("schema_version").get<int>() == 1);
    CHECK(j.at("t_star").get<double>() == doctest::Approx(0.25270669756717154).epsilon(1e-10));
    CHECK(j.at("r0").get<double>() == doctest::Approx(0.25321450097765867).epsilon(1e-10));
    CHECK(j.at("s_star_saturated").get<bool>() == false);
    CHECK(j.at("n").get<int>() == 100);
    CHECK(j.at("p").get<long long>() == 1000);
}

TEST_CASE("cli quantile rejects bad arguments") {
    CHECK(run_cli("quantile --n 100").status != 0);       // missing --p
    CHECK(run_cli("quantile --n 2 --p 100").status != 0);  // n too small
    const CliResult r = run_cli("quantile --n 100 --p 1000 --alpha 1.5");
    CHECK(r.status == 1);
    CHECK(r.output.find("error:") != std::string::npos);
}

TEST_CASE("cli reruns are byte-identical") {
    const std::string args = "validate-laws --n 12 --p 30 --reps 150 --seed 9";
    const CliResult a = run_cli(args);
    const CliResult b = run_cli(args);
    REQUIRE(a.status == 0);
    CHECK(a.output == b.output);
    const json j = json::parse(a.output);
    CHECK(j.at("replicates").get<int>() == 150);
    CHECK(j.at("generator").get<std::string>() ==
          "mt19937_64/splitmix64-substreams/box-muller");

    // thread count does not change the bytes either
    const CliResult c = run_cli(args + " --threads 4");
    CHECK(c.output == a.output);
}

TEST_CASE("cli screen emits the set JSON for a planted design") {
    // columns 0 and 1 strongly correlated; y driven by both
    DataMatrix d;
    d.x = test_support::random_matrix(80, 12, 17);
    d.x.col(1) = 0.95 * d.x.col(0) +
                 0.3120024589 * test_support::random_vector(80, 18);
    d.y = d.x.col(0) + d.x.col(1) + 0.2 * test_support::random_vector(80, 19);
    const std::string path = tmp_path("screen.csv");
    emit_csv(path, d);

    const std::string out = tmp_path("screen.json");
    const CliResult r = run_cli("--out " + out + " screen --data " + path);
    REQUIRE(r.status == 0);
    const json j = json::parse(read_file(out));
    CHECK(j.at("schema_version").get<int>() == 1);
    CHECK(j.at("method").get<std::string>() == "pearson");
    CHECK(j.at("mode").get<std::string>() == "linear");
    bool has01 = false;
    for (const auto& pr : j.at("g"))
        has01 = has01 || (pr.at(0).get<int>() == 0 && pr.at(1).get<int>() == 1);
    CHECK(has01);
    const auto c = j.at("c").get<std::vector<int>>();
    CHECK(std::find(c.begin(), c.end(), 0) != c.end());
    CHECK(std::find(c.begin(), c.end(), 1) != c.end());
}

TEST_CASE("cli fit with a huge lambda1 zeroes the l1 block") {
    DataMatrix train;
    train.x = test_support::random_matrix(60, 8, 23);
    train.y = 2.0 * train.x.col(0) + 0.3 * test_support::random_vector(60, 24);
    DataMatrix val;
    val.x = test_support::random_matrix(40, 8, 25);
    val.y = 2.0 * val.x.col(0) + 0.3 * test_support::random_vector(40, 26);
    const std::string tr = tmp_path("fit_train.csv");
    const std::string va = tmp_path("fit_val.csv");
    emit_csv(tr, train);
    emit_csv(va, val);

    const std::string out = tmp_path("fit.json");
    const CliResult r = run_cli("--out " + out + " fit --train " + tr +
                                " --validation " + va + " --lambda1 1e8 --lambda2 0");
    REQUIRE(r.status == 0);
    const json j = json::parse(read_file(out));
    CHECK(j.at("lambda1").get<double>() == 1e8);
    // everything screened into the l1 block is shrunk to zero
    const auto l2_set = j.at("penalty").at("l2_set").get<std::vector<int>>();
    const auto beta = j.at("beta_original").get<std::vector<double>>();
    const auto active = j.at("active_set").get<std::vector<int>>();
    for (int a : active)
        CHECK(std::find(l2_set.begin(), l2_set.end(), a) != l2_set.end());
    CHECK(j.at("converged").get<bool>());
    CHECK(j.at("screen").at("m").size() > 0);

    // a modest grid fits the signal and writes predictions
    const std::string pred = tmp_path("pred.csv");
    const CliResult r2 = run_cli("--out " + out + " fit --train " + tr +
                                 " --validation " + va + " --predictions " + pred);
    REQUIRE(r2.status == 0);
    const json j2 = json::parse(read_file(out));
    const auto active2 = j2.at("active_set").get<std::vector<int>>();
    CHECK(std::find(active2.begin(), active2.end(), 0) != active2.end());
    const std::string pred_text = read_file(pred);
    CHECK(pred_text.rfind("prediction\n", 0) == 0);
    CHECK(std::count(pred_text.begin(), pred_text.end(), '\n') == 61);
}

TEST_CASE("cli fit supports k-fold tuning without a validation file") {
    DataMatrix train;
    train.x = test_support::random_matrix(60, 6, 33);
    train.y = 1.5 * train.x.col(0) + 0.4 * test_support::random_vector(60, 34);
    const std::string tr = tmp_path("kfold_train.csv");
    emit_csv(tr, train);
    const CliResult r =
        run_cli("fit --train " + tr + " --kfold 4 --seed 11 --lambda1 0.3 0.1 0.02");
    REQUIRE(r.status == 0);
    const json j = json::parse(r.output);
    CHECK(j.at("family").get<std::string>() == "gaussian");
    CHECK(j.at("converged").get<bool>());
}

TEST_CASE("cli simulate produces the report and the long CSV") {
    const std::string out = tmp_path("sim.json");
    const std::string csv = tmp_path("sim.csv");
    const CliResult r = run_cli(
        "--out " + out +
        " simulate --example 2 --p 30 --sigma 0.5 --reps 2 --seed 3 --csv " + csv);
    REQUIRE(r.status == 0);
    const json j = json::parse(read_file(out));
    CHECK(j.at("scenario").at("example_id").get<int>() == 2);
    CHECK(j.at("records").size() == 2);
    CHECK(j.at("failures").get<int>() == 0);
    const std::string table = read_file(csv);
    CHECK(table.rfind("example_id,n_train,p,sigma,replication,metric,value\n", 0) == 0);
    CHECK(std::count(table.begin(), table.end(), '\n') == 1 + 5 * 2);

    // same invocation, same bytes
    const std::string out2 = tmp_path("sim2.json");
    const CliResult r2 = run_cli(
        "--out " + out2 +
        " simulate --example 2 --p 30 --sigma 0.5 --reps 2 --seed 3 --threads 3");
    REQUIRE(r2.status == 0);
    CHECK(read_file(out) == read_file(out2));
}

TEST_CASE("cli sweep emits one report per grid cell") {
    const std::string out = tmp_path("sweep.json");
    const CliResult r = run_cli(
        "--out " + out +
        " sweep --example 1 --n-values 50 --p-values 20 25 --sigma-values 1 --reps 2");
    REQUIRE(r.status == 0);
    const json j = json::parse(read_file(out));
    CHECK(j.at("reports").size() == 2);
    CHECK(j.at("reports")[0].at("scenario").at("p").get<int>() == 20);
    CHECK(j.at("reports")[1].at("scenario").at("p").get<int>() == 25);
}

TEST_CASE("cli rejects unknown subcommands and pipelines") {
    CHECK(run_cli("frobnicate").status != 0);
    CHECK(run_cli("simulate --example 1 --p 20 --reps 1 --pipeline nonsense").status == 1);
    CHECK(run_cli("screen --data /nonexistent.csv").status == 1);
}
