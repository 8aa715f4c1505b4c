#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "droneflow_cli/audit.hpp"
#include "droneflow_cli/cli.hpp"
#include "droneflow_cli/report.hpp"
#include "test_support.hpp"

using namespace droneflow_cli;

namespace {

const std::string kConfigDir = DF_CONFIG_DIR;

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

} // namespace

TEST_CASE("statement counting") {
    CHECK(count_api_statements("") == 0);
    CHECK(count_api_statements("// just a comment\n/* and ; another */\n") == 0);
    CHECK(count_api_statements("int a = 1;\nint b = 2;\n") == 2);
    CHECK(count_api_statements("auto s = \"semi;colon\";\n") == 1);
    CHECK(count_api_statements("char c = ';';\n") == 1);
    CHECK(count_api_statements("call(\n  arg1,\n  arg2);\n") == 1);
    CHECK(count_api_statements("f(); // trailing; comment;\n") == 1);
}

TEST_CASE("bundled apps stay within the statement budget") {
    auto entries = audit_bundled_apps();
    REQUIRE(entries.size() == 4);
    for (const auto& e : entries) {
        INFO(e.app);
        CHECK(e.statements > 0);
        CHECK(e.statements <= 40);
        CHECK(e.pass);
    }
}

TEST_CASE("cli exit codes") {
    SUBCASE("no subcommand") { CHECK(run_cli({}) == 1); }
    SUBCASE("unknown app") {
        CHECK(run_cli({"run", "teleport", "--config", kConfigDir + "/vip.json"}) == 1);
    }
    SUBCASE("missing config file") {
        CHECK(run_cli({"run", "survey", "--config", "/nonexistent/cfg.json"}) == 1);
    }
    SUBCASE("bogus scheduler lists the known policies") {
        CHECK(run_cli({"run", "vip-follow", "--config", kConfigDir + "/vip.json",
                       "--scheduler", "bogus"}) == 1);
    }
    SUBCASE("loc-audit passes") { CHECK(run_cli({"loc-audit"}) == 0); }
    SUBCASE("loc-audit with an impossible budget fails") {
        CHECK(run_cli({"loc-audit", "--budget", "1"}) == 1);
    }
}

TEST_CASE("run writes the full output set") {
    dftest::TempDir out("cli_run");
    const int code = run_cli({"run", "wildfire", "--config", kConfigDir + "/wildfire.json",
                              "--duration", "90", "--seed", "7", "--out",
                              out.path().string()});
    REQUIRE(code == 0);
    for (const char* name : {"plan.json", "latency.csv", "jobs.csv", "alerts.csv",
                             "trajectory.csv", "battery.csv", "summary.txt", "plot.svg"}) {
        INFO(name);
        CHECK(std::filesystem::exists(out.path() / name));
    }
    // The patrol passes the fire site: at least one alert, deduplicated,
    // with non-decreasing emission times.
    auto alerts = read_csv(out.path() / "alerts.csv");
    CHECK(alerts.size() >= 2); // header + >= 1 alert
    for (std::size_t i = 2; i < alerts.size(); ++i) {
        CHECK(std::stod(alerts[i][0]) >= std::stod(alerts[i - 1][0]));
    }
    const std::string svg = slurp(out.path() / "plot.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
}

TEST_CASE("re-running into the same directory replaces stale outputs") {
    dftest::TempDir out("cli_rerun");
    REQUIRE(run_cli({"run", "vip-follow", "--config", kConfigDir + "/vip.json", "--duration",
                     "20", "--seed", "7", "--out", out.path().string()}) == 0);
    auto first = read_csv(out.path() / "trajectory.csv");
    REQUIRE(run_cli({"run", "vip-follow", "--config", kConfigDir + "/vip.json", "--duration",
                     "8", "--seed", "7", "--out", out.path().string()}) == 0);
    auto second = read_csv(out.path() / "trajectory.csv");
    // The shorter rerun rewrote the file; a stale 20 s trace would be longer.
    CHECK(second.size() < first.size());
    CHECK(std::stod(second.back()[0]) < 12000.0);
}

TEST_CASE("summary numbers are recomputable from the CSVs") {
    dftest::TempDir out("cli_sum");
    REQUIRE(run_cli({"run", "vip-follow", "--config", kConfigDir + "/vip.json", "--duration",
                     "30", "--seed", "7", "--out", out.path().string()}) == 0);

    std::map<std::string, std::string> summary;
    {
        std::ifstream in(out.path() / "summary.txt");
        std::string line;
        while (std::getline(in, line)) {
            auto colon = line.find(": ");
            if (colon != std::string::npos) {
                summary[line.substr(0, colon)] = line.substr(colon + 2);
            }
        }
    }

    // Median inference latency from jobs.csv (vision analytic rows).
    auto jobs = read_csv(out.path() / "jobs.csv");
    std::vector<double> det;
    for (std::size_t i = 1; i < jobs.size(); ++i) {
        if (jobs[i][1] == summary["vision_analytic"]) det.push_back(std::stod(jobs[i][7]));
    }
    std::sort(det.begin(), det.end());
    const double median = det.size() % 2 == 1
                              ? det[det.size() / 2]
                              : (det[det.size() / 2 - 1] + det[det.size() / 2]) / 2.0;
    CHECK(summary["inference_latency_ms"].find("median=" + droneflow::format_fixed(median)) !=
          std::string::npos);

    // Jobs total equals the CSV row count.
    CHECK(summary["jobs_total"] == std::to_string(jobs.size() - 1));

    // Final battery equals the last battery.csv row.
    auto battery = read_csv(out.path() / "battery.csv");
    CHECK(summary["final_battery_pct"] == battery.back()[1]);

    // Distance recomputes from the trajectory within CSV rounding noise.
    auto traj = read_csv(out.path() / "trajectory.csv");
    double dist = 0.0;
    for (std::size_t i = 2; i < traj.size(); ++i) {
        const double dx = std::stod(traj[i][1]) - std::stod(traj[i - 1][1]);
        const double dy = std::stod(traj[i][2]) - std::stod(traj[i - 1][2]);
        const double dz = std::stod(traj[i][3]) - std::stod(traj[i - 1][3]);
        dist += std::sqrt(dx * dx + dy * dy + dz * dz);
    }
    const double reported = std::stod(summary["distance_flown_m"]);
    CHECK(dist == doctest::Approx(reported).epsilon(0.02));

    // Frame end-to-end median from latency.csv.
    auto lat = read_csv(out.path() / "latency.csv");
    std::vector<double> e2e;
    for (std::size_t i = 1; i < lat.size(); ++i) {
        e2e.push_back(std::stod(lat[i][5]) - std::stod(lat[i][1]));
    }
    std::sort(e2e.begin(), e2e.end());
    const double e2e_median = e2e.size() % 2 == 1
                                  ? e2e[e2e.size() / 2]
                                  : (e2e[e2e.size() / 2 - 1] + e2e[e2e.size() / 2]) / 2.0;
    CHECK(summary["end_to_end_ms"].find("median=" + droneflow::format_fixed(e2e_median)) !=
          std::string::npos);
}

TEST_CASE("situation-awareness routes pose jobs through the scheduler") {
    dftest::TempDir out("cli_sa");
    REQUIRE(run_cli({"run", "situation-awareness", "--config", kConfigDir + "/vip.json",
                     "--duration", "30", "--seed", "7", "--out", out.path().string()}) == 0);
    auto jobs = read_csv(out.path() / "jobs.csv");
    int pose_jobs = 0, detect_jobs = 0;
    for (std::size_t i = 1; i < jobs.size(); ++i) {
        if (jobs[i][1] == "body_pose") ++pose_jobs;
        if (jobs[i][1] == "vip_detect") ++detect_jobs;
    }
    CHECK(pose_jobs > 100);
    CHECK(detect_jobs > 100);
    // The plan names every service of the composed graph.
    const std::string plan = slurp(out.path() / "plan.json");
    for (const char* svc : {"edge", "edge_cloud", "camera", "vip_detect", "follow_nav",
                            "body_pose", "tello"}) {
        INFO(svc);
        CHECK(plan.find(std::string("\"") + svc + "\"") != std::string::npos);
    }
}
