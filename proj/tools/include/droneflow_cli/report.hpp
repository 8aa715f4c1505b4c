#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "droneflow/droneflow.hpp"
#include "droneflow_cli/apps.hpp"

namespace droneflow_cli {

struct Stats {
    bool valid = false;
    double median = 0.0;
    double mean = 0.0;
    double p95 = 0.0;
};

Stats compute_stats(std::vector<double> values);

/// Deterministic run summary (virtual-time quantities only, so equal seeds
/// serialize identically).
std::string build_summary(const droneflow::Environment& env, const RunRequest& req,
                          const droneflow::RunMetrics& metrics,
                          const droneflow::JobLog& jobs,
                          const std::vector<droneflow::AlertRecord>& alerts);

/// Top-down trajectory plus a latency histogram as one static SVG.
void write_plot_svg(const std::filesystem::path& path, const droneflow::RunMetrics& metrics,
                    const droneflow::JobLog& jobs);

/// Writes the full output set for a finished run: plan.json, latency.csv,
/// jobs.csv, alerts.csv, summary.txt, plot.svg, and trajectory.csv /
/// battery.csv unless an analytic already produced them in this directory.
void write_run_outputs(droneflow::Environment& env, const RunRequest& req,
                       const droneflow::RunMetrics& metrics);

} // namespace droneflow_cli
