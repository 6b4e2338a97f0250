#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

using nlohmann::json;

namespace {

std::string g_binary;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = g_binary + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    std::array<char, 4096> buf;
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

struct Row {
    double t, q, qprime, residual;
};

std::vector<Row> parse_csv(const std::string& path) {
    std::ifstream is(path);
    REQUIRE(is.good());
    std::string line;
    REQUIRE(std::getline(is, line));
    REQUIRE(line == "t,q,qprime,energy_residual");
    std::vector<Row> rows;
    while (std::getline(is, line)) {
        Row r;
        char c;
        std::istringstream ss(line);
        REQUIRE((ss >> r.t >> c >> r.q >> c >> r.qprime >> c >> r.residual));
        rows.push_back(r);
    }
    return rows;
}

const Row* at_time(const std::vector<Row>& rows, double t) {
    for (const auto& r : rows)
        if (std::fabs(r.t - t) < 1e-9) return &r;
    return nullptr;
}

}  // namespace

TEST_CASE("solve writes the classic kink CSV") {
    const std::string out = "/tmp/hetlab_cli_kink.csv";
    const auto r =
        run("solve --kernel p-power:p=2 --potential p-dw:p=2,alpha=1 --out " + out);
    CHECK(r.exit_code == 0);
    const auto rows = parse_csv(out);
    const Row* row = at_time(rows, 1.0);
    REQUIRE(row != nullptr);
    CHECK(row->q == doctest::Approx(0.761594).epsilon(1e-5));
    CHECK(std::fabs(row->residual) <= 1e-8);
}

TEST_CASE("anchoring at a well is a solver error (exit 2)") {
    const auto r = run("solve --kernel p-power:p=2 --potential p-dw:p=2,alpha=1 --anchor 1");
    CHECK(r.exit_code == 2);
}

TEST_CASE("bad specs are config errors (exit 1)") {
    CHECK(run("solve --kernel nonsense:p=2").exit_code == 1);
    CHECK(run("solve --kernel p-power:p=0.5").exit_code == 1);
    CHECK(run("verify /tmp/does_not_exist.csv").exit_code == 1);
    CHECK(run("sweep --grid \"\"").exit_code == 1);
    CHECK(run("sweep --grid zeta=1,2").exit_code == 1);
}

TEST_CASE("verify accepts a good profile and rejects a corrupted one") {
    const std::string good = "/tmp/hetlab_cli_verify.csv";
    REQUIRE(run("solve --kernel p-power:p=2 --potential p-dw:p=2,alpha=1 --out " + good)
                .exit_code == 0);
    const auto ok = run("verify --kernel p-power:p=2 --potential p-dw:p=2,alpha=1 " + good);
    CHECK(ok.exit_code == 0);
    const json rep = json::parse(ok.out);
    CHECK(rep.at("all_passed").get<bool>());
    CHECK(rep.at("checks").size() == 9);

    // swap two interior q values to break monotonicity
    auto rows = parse_csv(good);
    const std::string bad = "/tmp/hetlab_cli_corrupt.csv";
    {
        std::ofstream os(bad);
        os << "t,q,qprime,energy_residual\n";
        os.precision(17);
        std::swap(rows[rows.size() / 2].q, rows[rows.size() / 2 + 1].q);
        for (const auto& r : rows)
            os << r.t << ',' << r.q << ',' << r.qprime << ',' << r.residual << '\n';
    }
    const auto rej = run("verify --kernel p-power:p=2 --potential p-dw:p=2,alpha=1 " + bad);
    CHECK(rej.exit_code == 3);
    CHECK_FALSE(json::parse(rej.out).at("all_passed").get<bool>());
}

TEST_CASE("minimize subcommand reproduces the kink at coarse resolution") {
    const std::string out = "/tmp/hetlab_cli_min.csv";
    const auto r = run("minimize --kernel p-power:p=2 --potential p-dw:p=2,alpha=1 "
                       "--T 8 --N 1201 --out " +
                       out);
    CHECK(r.exit_code == 0);
    double sup = 0.0;
    for (const auto& row : parse_csv(out)) {
        if (std::fabs(row.t) > 6.0) continue;
        sup = std::max(sup, std::fabs(row.q - std::tanh(row.t)));
    }
    CHECK(sup <= 5e-3);
}

TEST_CASE("sweep over the tanh family reports tiny oracle errors") {
    const auto r = run("sweep --kernel p-power:p=2 --potential p-dw:p=2,alpha=1 "
                       "--grid p=1.5,2,3");
    CHECK(r.exit_code == 0);
    std::istringstream lines(r.out);
    std::string line;
    int n = 0;
    while (std::getline(lines, line)) {
        const json row = json::parse(line);
        INFO(line);
        CHECK(row.at("status") == "ok");
        CHECK(row.at("oracle_sup_error").get<double>() <= 1e-8);
        ++n;
    }
    CHECK(n == 3);
}

TEST_CASE("mean-curvature sweep emits slope certificates in grid order") {
    const auto r = run("sweep --kernel mc-truncated:L=1 --potential quartic:alpha=0.1 "
                       "--grid \"alpha=0.1:0.3:0.1;L=1\"");
    CHECK(r.exit_code == 0);
    std::istringstream lines(r.out);
    std::string line;
    std::vector<json> rows;
    while (std::getline(lines, line)) rows.push_back(json::parse(line));
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        INFO(rows[i].dump());
        CHECK(rows[i].at("status") == "ok");
        CHECK(rows[i].at("params").at("alpha").get<double>() ==
              doctest::Approx(0.1 * (i + 1)));
        CHECK(rows[i].at("slope_certificate_passed").get<bool>());
        CHECK(rows[i].at("bounds_passed").get<bool>());
    }
}

TEST_CASE("config file fills unset flags; flags win") {
    const std::string cfgpath = "/tmp/hetlab_cli_cfg.json";
    const std::string out = "/tmp/hetlab_cli_cfg.csv";
    {
        std::ofstream os(cfgpath);
        os << json{{"kernel", "p-power:p=2"},
                   {"potential", "p-dw:p=2,alpha=2"},
                   {"out", out}}
                  .dump();
    }
    // --potential overrides the config; out comes from the config
    const auto r = run("solve --config " + cfgpath + " --potential p-dw:p=2,alpha=1");
    CHECK(r.exit_code == 0);
    const auto rows = parse_csv(out);
    // alpha=1 from the flag: q stays below 1
    for (const auto& row : rows) CHECK(std::fabs(row.q) < 1.0);
}

TEST_CASE("thread cap env var is accepted") {
    const std::string saved = g_binary;
    g_binary = "HETLAB_THREADS=1 " + g_binary;
    const auto r = run("sweep --kernel p-power:p=2 --potential p-dw:p=2,alpha=1 --grid p=2,3");
    g_binary = saved;
    CHECK(r.exit_code == 0);
}

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: test_cli <hetlab binary> [doctest args]\n");
        return 1;
    }
    g_binary = argv[1];
    doctest::Context ctx;
    // strip the binary path before doctest sees the arguments
    std::vector<char*> args;
    args.push_back(argv[0]);
    for (int i = 2; i < argc; ++i) args.push_back(argv[i]);
    ctx.applyCommandLine(static_cast<int>(args.size()), args.data());
    return ctx.run();
}
