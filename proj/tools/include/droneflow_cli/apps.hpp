#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "droneflow/droneflow.hpp"

namespace droneflow_cli {

/// One CLI invocation: which bundled application to run and how.
struct RunRequest {
    std::string app; // vip-follow | situation-awareness | survey | wildfire
    std::string config_path;
    std::optional<std::string> scheduler_policy; // overrides the app's deploy target
    double duration_s = 120.0;
    std::optional<std::uint64_t> seed; // overrides the config seed
    std::filesystem::path out_dir = "out";
    droneflow::RunMode mode = droneflow::RunMode::Virtual;
};

const std::vector<std::string>& app_names();

/// Deploy target for the app's vision analytic: the named resource by
/// default, or the "edge_cloud" scheduler re-pinned to the requested
/// policy when --scheduler was given.
droneflow::ComputeBase& select_compute(droneflow::Environment& env, const RunRequest& req,
                                       const std::string& default_id);

droneflow::RunMetrics run_vip_follow(droneflow::Environment& env, const RunRequest& req);
droneflow::RunMetrics run_situation_awareness(droneflow::Environment& env,
                                              const RunRequest& req);
droneflow::RunMetrics run_survey(droneflow::Environment& env, const RunRequest& req);
droneflow::RunMetrics run_wildfire(droneflow::Environment& env, const RunRequest& req);

/// Dispatch on req.app; throws ValidationError for an unknown name.
droneflow::RunMetrics run_app(droneflow::Environment& env, const RunRequest& req);

} // namespace droneflow_cli
