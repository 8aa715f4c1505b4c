#include "droneflow_cli/apps.hpp"

namespace droneflow_cli {

using namespace droneflow;

const std::vector<std::string>& app_names() {
    static const std::vector<std::string> names = {"vip-follow", "situation-awareness",
                                                   "survey", "wildfire"};
    return names;
}

ComputeBase& select_compute(Environment& env, const RunRequest& req,
                            const std::string& default_id) {
    if (!req.scheduler_policy) {
        return env.compute_by_id(default_id);
    }
    const SchedulerPolicy policy = scheduler_policy_from_string(*req.scheduler_policy);
    auto& sched = dynamic_cast<SchedulerResource&>(env.compute_by_id("edge_cloud"));
    sched.set_policy(policy);
    return sched;
}

RunMetrics run_app(Environment& env, const RunRequest& req) {
    if (req.app == "vip-follow") return run_vip_follow(env, req);
    if (req.app == "situation-awareness") return run_situation_awareness(env, req);
    if (req.app == "survey") return run_survey(env, req);
    if (req.app == "wildfire") return run_wildfire(env, req);
    std::string known;
    for (const auto& n : app_names()) known += (known.empty() ? "" : ", ") + n;
    throw ValidationError("unknown app '" + req.app + "' (known: " + known + ")");
}

} // namespace droneflow_cli
