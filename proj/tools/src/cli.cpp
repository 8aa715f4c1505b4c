#include "droneflow_cli/cli.hpp"

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "droneflow_cli/apps.hpp"
#include "droneflow_cli/audit.hpp"
#include "droneflow_cli/report.hpp"

namespace droneflow_cli {

using namespace droneflow;

namespace {

int do_run(const RunRequest& req) {
    std::unique_ptr<Environment> env;
    if (req.seed) {
        env = std::make_unique<Environment>(req.config_path, *req.seed);
    } else {
        env = std::make_unique<Environment>(req.config_path);
    }
    try {
        ensure_writable_directory(req.out_dir);
    } catch (const IoError& e) {
        throw ValidationError(e.what());
    }
    // Clear the previous run's outputs so the don't-clobber logic in
    // write_run_outputs sees only files produced by this run.
    for (const char* name : {"trajectory.csv", "battery.csv", "latency.csv", "jobs.csv",
                             "alerts.csv", "plan.json", "summary.txt", "plot.svg"}) {
        std::error_code ec;
        std::filesystem::remove(req.out_dir / name, ec);
    }

    RunMetrics metrics = run_app(*env, req);
    write_run_outputs(*env, req, metrics);

    std::cout << req.app << ": " << format_fixed(metrics.virtual_end_ms / 1000.0, 1)
              << " s virtual in " << format_fixed(metrics.wall_elapsed_s, 2)
              << " s wall; outputs in " << req.out_dir.string() << "\n";
    return 0;
}

int do_loc_audit(int budget) {
    auto entries = audit_bundled_apps(budget);
    std::printf("%-22s %10s %7s  %s\n", "app", "statements", "budget", "status");
    bool all_pass = true;
    for (const auto& e : entries) {
        std::printf("%-22s %10d %7d  %s\n", e.app.c_str(), e.statements, e.budget,
                    e.pass ? "pass" : "FAIL");
        all_pass = all_pass && e.pass;
    }
    std::printf("loc-audit: %zu/%zu apps within the %d-statement budget\n",
                static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(),
                                                       [](const auto& e) { return e.pass; })),
                entries.size(), budget);
    return all_pass ? 0 : 1;
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"compose and run drone sensing/analytics/navigation applications "
                 "on a deterministic simulated backend"};
    app.name("droneflow");
    app.require_subcommand(1);

    RunRequest req;
    std::string scheduler;
    std::string mode = "virtual";
    std::uint64_t seed = 0;

    auto* run = app.add_subcommand("run", "run a bundled application");
    run->add_option("app", req.app, "one of: vip-follow, situation-awareness, survey, wildfire")
        ->required();
    run->add_option("--config", req.config_path, "environment config file (JSON)")->required();
    run->add_option("--scheduler", scheduler,
                    "deploy vision analytics via the edge_cloud scheduler with this policy "
                    "(edge-only|cloud-only|ec|queue-aware)");
    run->add_option("--duration", req.duration_s, "virtual run duration, seconds")
        ->check(CLI::PositiveNumber);
    auto* seed_opt = run->add_option("--seed", seed, "override the config's simulation seed");
    run->add_option("--out", req.out_dir, "output directory");
    run->add_option("--mode", mode, "virtual|wall clock mode")
        ->check(CLI::IsMember({"virtual", "wall"}));

    int budget = kLocBudget;
    auto* audit = app.add_subcommand(
        "loc-audit", "count public-API statements in the bundled applications");
    audit->add_option("--budget", budget, "statement budget per app");

    std::vector<std::string> cli_args(args.rbegin(), args.rend());
    try {
        app.parse(cli_args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (audit->parsed()) {
            return do_loc_audit(budget);
        }
        if (!scheduler.empty()) {
            scheduler_policy_from_string(scheduler); // fail fast with the policy list
            req.scheduler_policy = scheduler;
        }
        if (seed_opt->count() > 0) req.seed = seed;
        req.mode = mode == "wall" ? RunMode::Wall : RunMode::Virtual;
        bool known = false;
        for (const auto& name : app_names()) known = known || name == req.app;
        if (!known) {
            throw ValidationError("unknown app '" + req.app +
                                  "' (known: vip-follow, situation-awareness, survey, wildfire)");
        }
        return do_run(req);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ConfigParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ArgumentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NotFoundError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const DeployError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime failure: " << e.what() << "\n";
        return 2;
    }
}

} // namespace droneflow_cli
