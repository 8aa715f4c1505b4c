#include <doctest.h>

#include <algorithm>
#include <map>

#include "droneflow/analytics.hpp"
#include "droneflow/environment.hpp"
#include "test_support.hpp"

using namespace droneflow;

namespace {

ComputeResource& resource(Environment& env, const std::string& id) {
    return dynamic_cast<ComputeResource&>(env.compute_by_id(id));
}
SchedulerResource& scheduler(Environment& env, const std::string& id) {
    return dynamic_cast<SchedulerResource&>(env.compute_by_id(id));
}

class IdentityAnalytic : public Analytic<int, int> {
public:
    using Analytic::Analytic;

protected:
    std::vector<int> transform(const AeroData<int>& item, double) override {
        return {item.get_data()};
    }
};

} // namespace

TEST_CASE("compute properties") {
    Environment env(dftest::basic_config());
    SUBCASE("edge") {
        auto p = env.compute_by_id("edge").properties();
        CHECK(p["kind"] == "edge");
        CHECK(p["service_times"]["vip_detect"] == 50.0);
        CHECK(p["capacity"] == 1);
    }
    SUBCASE("cloud") {
        auto p = env.compute_by_id("cloud").properties();
        CHECK(p["kind"] == "cloud");
        CHECK(p["service_times"]["vip_detect"] == 275.0);
        CHECK(p["network_delay_ms"] == 25.0);
    }
    SUBCASE("scheduler") {
        auto p = env.compute_by_id("edge_cloud").properties();
        CHECK(p["kind"] == "scheduler");
        CHECK(p["policy"] == "queue-aware (DEMS-like)");
        CHECK(p["members"] == nlohmann::ordered_json::array({"edge", "cloud"}));
    }
}

TEST_CASE("deploy validates service times") {
    Environment env(dftest::basic_config());
    SUBCASE("deploy to edge, submit runs on edge") {
        IdentityAnalytic a("vip_detect");
        a.deploy(env.compute_by_id("edge"));
        CHECK(a.deployed());
        auto info = env.compute_by_id("edge").submit("vip_detect", 0, nullptr);
        CHECK(info.resource_id == "edge");
    }
    SUBCASE("deploy to scheduler routes per policy") {
        IdentityAnalytic a("vip_detect");
        a.deploy(env.compute_by_id("edge_cloud"));
        auto info = env.compute_by_id("edge_cloud").submit("vip_detect", 0, nullptr);
        CHECK(info.resource_id == "edge"); // queue-aware picks the idle edge
    }
    SUBCASE("no configured service time is an error") {
        IdentityAnalytic a("mystery_model");
        CHECK_THROWS_AS(a.deploy(env.compute_by_id("edge")), DeployError);
        CHECK_FALSE(a.deployed());
    }
    SUBCASE("scheduler requires the time on every member") {
        auto cfg = dftest::basic_config();
        cfg.compute[0].service_times_ms["edge_only_model"] = 10.0;
        Environment env2(cfg);
        IdentityAnalytic a("edge_only_model");
        CHECK_THROWS_AS(a.deploy(env2.compute_by_id("edge_cloud")), DeployError);
        CHECK_NOTHROW(a.deploy(env2.compute_by_id("edge")));
    }
}

TEST_CASE("submit latency arithmetic") {
    Environment env(dftest::basic_config());
    SUBCASE("idle edge: latency equals the service time") {
        auto info = env.compute_by_id("edge").submit("vip_detect", 0, nullptr);
        CHECK(info.latency_ms() == 50.0);
        CHECK(info.t_start_ms == info.t_submit_ms);
    }
    SUBCASE("idle cloud: network + service + network") {
        auto info = env.compute_by_id("cloud").submit("vip_detect", 0, nullptr);
        CHECK(info.latency_ms() == 25.0 + 275.0 + 25.0);
    }
    SUBCASE("two queued ahead on capacity 1: 150 ms") {
        auto& edge = env.compute_by_id("edge");
        edge.submit("vip_detect", 0, nullptr);
        edge.submit("vip_detect", 1, nullptr);
        auto info = edge.submit("vip_detect", 2, nullptr);
        CHECK(info.latency_ms() == 150.0);
        CHECK(info.t_start_ms == 100.0);
    }
    SUBCASE("completion callback fires at t_return") {
        auto& cloud = env.compute_by_id("cloud");
        double fired_at = -1.0;
        cloud.submit("vip_detect", 0,
                     [&](const CompletionInfo&) { fired_at = env.calendar().now(); });
        env.calendar().advance_to(1000.0);
        CHECK(fired_at == 325.0);
    }
}

TEST_CASE("scheduling policies") {
    Environment env(dftest::basic_config());
    auto& edge = resource(env, "edge");
    auto& cloud = resource(env, "cloud");
    std::vector<ComputeResource*> members{&edge, &cloud};
    std::uint64_t rr = 0;

    SUBCASE("queue-aware: loaded edge still beats the idle cloud") {
        for (int i = 0; i < 3; ++i) edge.admit("vip_detect", 0.0);
        CHECK(edge.estimate_completion_ms("vip_detect", 0.0) == 200.0);
        CHECK(cloud.estimate_completion_ms("vip_detect", 0.0) == 325.0);
        CHECK(&pick_member(SchedulerPolicy::QueueAware, members, "vip_detect", 0.0, rr) ==
              &edge);
    }
    SUBCASE("queue-aware: heavily loaded edge diverts to the cloud") {
        for (int i = 0; i < 7; ++i) edge.admit("vip_detect", 0.0);
        CHECK(edge.estimate_completion_ms("vip_detect", 0.0) == 400.0);
        CHECK(&pick_member(SchedulerPolicy::QueueAware, members, "vip_detect", 0.0, rr) ==
              &cloud);
    }
    SUBCASE("edge-only always picks the edge") {
        for (int i = 0; i < 20; ++i) {
            CHECK(&pick_member(SchedulerPolicy::EdgeOnly, members, "vip_detect", 0.0, rr) ==
                  &edge);
        }
    }
    SUBCASE("cloud-only always picks the cloud") {
        CHECK(&pick_member(SchedulerPolicy::CloudOnly, members, "vip_detect", 0.0, rr) ==
              &cloud);
    }
    SUBCASE("ec alternates per job counter") {
        CHECK(&pick_member(SchedulerPolicy::RoundRobinEC, members, "vip_detect", 0.0, rr) ==
              &edge);
        CHECK(&pick_member(SchedulerPolicy::RoundRobinEC, members, "vip_detect", 0.0, rr) ==
              &cloud);
        CHECK(&pick_member(SchedulerPolicy::RoundRobinEC, members, "vip_detect", 0.0, rr) ==
              &edge);
    }
}

TEST_CASE("per-resource FIFO and conservation") {
    Environment env(dftest::basic_config());
    auto& sched = env.compute_by_id("edge_cloud");
    std::map<std::int64_t, int> completions;
    const int n = 40;
    for (int i = 0; i < n; ++i) {
        env.calendar().advance_to(i * 10.0);
        sched.submit("vip_detect", i,
                     [&completions, i](const CompletionInfo&) { completions[i]++; });
    }
    env.calendar().advance_to(60000.0);

    CHECK(completions.size() == n); // every job completed...
    for (const auto& [seq, count] : completions) CHECK(count == 1); // ...exactly once

    const auto& jobs = env.runtime().job_log().jobs();
    REQUIRE(jobs.size() == n);
    std::map<std::string, double> last_start;
    for (const auto& j : jobs) {
        CHECK(j.t_start_ms >= j.t_submit_ms);
        CHECK(j.t_end_ms >= j.t_start_ms);
        auto it = last_start.find(j.resource_id);
        if (it != last_start.end()) CHECK(j.t_start_ms >= it->second);
        last_start[j.resource_id] = j.t_start_ms;
    }
}

TEST_CASE("queue-aware decisions match an independent replay model") {
    // Deterministic 15 jobs/s arrivals with the configured service times:
    // the edge never backs up, so every job lands on the edge with zero
    // queue wait.
    Environment env(dftest::basic_config());
    auto& sched = scheduler(env, "edge_cloud");

    struct Model {
        double edge_free = 0.0;
        double cloud_free[8] = {};
    };
    Model model;
    const int n = 300;
    for (int i = 0; i < n; ++i) {
        const double t = (static_cast<double>(i) * 1000.0) / 15.0;
        env.calendar().advance_to(t);

        const double est_edge = 2.0 * 0.0 + std::max(0.0, model.edge_free - t) + 50.0;
        const double cloud_slot = *std::min_element(std::begin(model.cloud_free),
                                                    std::end(model.cloud_free));
        const double est_cloud = 2.0 * 25.0 + std::max(0.0, cloud_slot - (t + 25.0)) + 275.0;
        const bool expect_edge = est_edge <= est_cloud;

        auto info = sched.submit("vip_detect", i, nullptr);
        REQUIRE(info.resource_id == (expect_edge ? "edge" : "cloud"));
        if (expect_edge) {
            model.edge_free = std::max(model.edge_free, t) + 50.0;
        } else {
            auto* slot = std::min_element(std::begin(model.cloud_free),
                                          std::end(model.cloud_free));
            *slot = std::max(*slot, t + 25.0) + 275.0;
        }
    }
    env.calendar().advance_to(1e9);

    for (const auto& j : env.runtime().job_log().jobs()) {
        CHECK(j.resource_id == "edge");
        CHECK(j.t_start_ms == j.t_submit_ms); // queue wait = 0, exactly
        CHECK(j.latency_ms == doctest::Approx(50.0).epsilon(1e-12));
    }
    // Optimality at decision time, from the scheduler's recorded estimates.
    for (const auto& d : sched.decisions()) {
        double chosen_est = 0.0;
        for (const auto& [id, est] : d.estimates) {
            if (id == d.chosen) chosen_est = est;
        }
        for (const auto& [id, est] : d.estimates) {
            CHECK(chosen_est <= est);
        }
    }
}

TEST_CASE("identical workload replays identical job timelines") {
    auto run = [] {
        Environment env(dftest::basic_config());
        auto& sched = env.compute_by_id("edge_cloud");
        for (int i = 0; i < 100; ++i) {
            env.calendar().advance_to(i * 30.0);
            sched.submit("body_pose", i, nullptr);
        }
        env.calendar().advance_to(1e9);
        std::vector<std::tuple<std::string, double, double>> timeline;
        for (const auto& j : env.runtime().job_log().jobs()) {
            timeline.emplace_back(j.resource_id, j.t_start_ms, j.t_end_ms);
        }
        return timeline;
    };
    CHECK(run() == run());
}

TEST_CASE("queue length is observable") {
    Environment env(dftest::basic_config());
    auto& edge = resource(env, "edge");
    CHECK(edge.queue_length(0.0) == 0);
    for (int i = 0; i < 4; ++i) edge.admit("vip_detect", 0.0);
    // One running, three waiting.
    CHECK(edge.queue_length(0.0) == 3);
    CHECK(edge.queue_length(60.0) == 2);
    CHECK(edge.queue_length(1000.0) == 0);
}

TEST_CASE("optional service-time jitter is bounded and seeded") {
    auto sample_services = [](bool jitter) {
        Environment env(dftest::basic_config());
        auto& edge = resource(env, "edge");
        edge.set_service_jitter(jitter);
        std::vector<double> services;
        for (int i = 0; i < 50; ++i) {
            auto info = edge.admit("vip_detect", i * 1000.0);
            services.push_back(info.t_end_ms - info.t_start_ms);
        }
        return services;
    };
    SUBCASE("off by default keeps configured values exact") {
        for (double s : sample_services(false)) CHECK(s == 50.0);
    }
    SUBCASE("on: uniform within +-10%, reproducible from the root seed") {
        auto a = sample_services(true);
        auto b = sample_services(true);
        CHECK(a == b);
        bool varied = false;
        for (double s : a) {
            CHECK(s >= 45.0);
            CHECK(s <= 55.0);
            varied = varied || s != 50.0;
        }
        CHECK(varied);
    }
}

TEST_CASE("policy names parse and label correctly") {
    CHECK(scheduler_policy_from_string("edge-only") == SchedulerPolicy::EdgeOnly);
    CHECK(scheduler_policy_from_string("ec") == SchedulerPolicy::RoundRobinEC);
    CHECK_THROWS_AS(scheduler_policy_from_string("bogus"), ValidationError);
    CHECK(policy_label(SchedulerPolicy::QueueAware) == "queue-aware (DEMS-like)");
    CHECK(policy_label(SchedulerPolicy::EdgeOnly) == "edge-only");
}
