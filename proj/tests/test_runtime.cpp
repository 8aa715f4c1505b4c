#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "droneflow/analytics.hpp"
#include "droneflow/environment.hpp"
#include "droneflow/metrics_io.hpp"
#include "test_support.hpp"

using namespace droneflow;

namespace {

droneflow::EnvironmentConfig vip_config(const std::filesystem::path& dir,
                                        const std::string& pose_script = "") {
    auto cfg = dftest::basic_config();
    cfg.base_dir = dir;
    nlohmann::json params{{"width", 320},       {"height", 240},
                          {"focal_px", 800.0},  {"script", "target.csv"},
                          {"target_width_m", 0.5}, {"target_height_m", 0.5}};
    if (!pose_script.empty()) params["pose_script"] = pose_script;
    cfg.robots[0].sensors.push_back(
        dftest::make_sensor_spec("camera", SensorKind::Camera, 30.0, params));
    return cfg;
}

void write_target_script(const std::filesystem::path& dir) {
    std::ofstream script(dir / "target.csv");
    script << "t_ms,x,y,z\n0,3.0,0.5,1.5\n";
}

/// The situation-awareness pipeline wired by hand: camera -> detector ->
/// follow plus camera -> body pose, merged into the robot.
struct VipRig {
    dftest::TempDir dir{"viprig"};
    std::unique_ptr<Environment> env;
    std::unique_ptr<BlobDetectionAnalytic> detect;
    std::unique_ptr<FollowObjectNavigation> follow;
    std::unique_ptr<BodyPoseNavigation> pose;

    explicit VipRig(bool with_pose = true, const std::string& pose_script = "") {
        write_target_script(dir.path());
        if (!pose_script.empty()) {
            std::ofstream out(dir.path() / "poses.csv");
            out << pose_script;
        }
        env = std::make_unique<Environment>(
            vip_config(dir.path(), pose_script.empty() ? "" : "poses.csv"));
        Robot& drone = env->robot_by_id("tello");
        drone.start_mission();
        auto& frames = drone.sensor<CameraSensor>("camera").data_stream();

        detect = std::make_unique<BlobDetectionAnalytic>("vip_detect", "vest");
        detect->deploy(env->compute_by_id("edge"));
        auto& boxes = detect->analyse(frames);

        follow = std::make_unique<FollowObjectNavigation>("follow_nav");
        follow->deploy(env->compute_by_id("edge"));
        auto& nav = follow->generate_navigation(boxes);

        std::vector<Stream<NavigationCommand>*> sources{&nav};
        if (with_pose) {
            pose = std::make_unique<BodyPoseNavigation>("body_pose");
            pose->deploy(env->compute_by_id("edge_cloud"));
            auto& emergency = pose->generate_navigation(frames);
            sources.push_back(&emergency);
        }
        drone.navigate(sources);
    }
};

std::string file_contents(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("application graph and deployment plan") {
    VipRig rig;
    auto plan = rig.env->runtime().emit_plan();

    std::vector<std::string> names;
    for (const auto& svc : plan["services"]) names.push_back(svc["name"]);
    CHECK(names == std::vector<std::string>{"edge", "edge_cloud", "camera", "vip_detect",
                                            "follow_nav", "body_pose", "tello"});

    // Robot inputs carry merge priority by position: pose outranks follow.
    const auto& robot_svc = plan["services"].back();
    CHECK(robot_svc["role"] == "robot");
    CHECK(robot_svc["inputs"] ==
          nlohmann::ordered_json::array({"follow_nav.out", "body_pose.out"}));

    SUBCASE("plan emission is byte-stable") {
        CHECK(plan.dump(2) == rig.env->runtime().emit_plan().dump(2));
    }
    SUBCASE("launch order groups compute, sensors, analytics, robot") {
        CHECK(plan["launch_order"] == nlohmann::ordered_json(names));
    }
}

TEST_CASE("list navigation is recorded in the graph") {
    Environment env(dftest::basic_config());
    Robot& drone = env.robot_by_id("tello");
    CHECK_FALSE(env.runtime().graph().has_list_navigation);
    drone.start_mission();
    drone.navigate(ListData<NavigationCommand>({NavigationCommand::takeoff(5.0)}));
    CHECK(env.runtime().graph().has_list_navigation);
    const auto* robot_svc = env.runtime().graph().find("tello", ServiceRole::Robot);
    REQUIRE(robot_svc != nullptr);
    CHECK(robot_svc->binding == "sim-kinematic");
    CHECK(robot_svc->inputs.empty()); // waypoints are data, not a channel
}

TEST_CASE("empty graph emits an empty plan") {
    Environment env(dftest::basic_config());
    auto plan = env.runtime().emit_plan();
    CHECK(plan["services"].empty());
    CHECK(plan["launch_order"].empty());
}

TEST_CASE("graph validation") {
    SUBCASE("analytic without deployment") {
        ApplicationGraph g;
        auto& a = g.find_or_add("det", ServiceRole::Analytic);
        a.outputs.push_back("det.out");
        CHECK_THROWS_AS(g.validate(), ValidationError);
    }
    SUBCASE("dangling consumed channel") {
        ApplicationGraph g;
        auto& a = g.find_or_add("det", ServiceRole::Analytic);
        a.binding = "edge";
        a.inputs.push_back("ghost_channel");
        CHECK_THROWS_AS(g.validate(), ValidationError);
    }
    SUBCASE("duplicate channel producers") {
        ApplicationGraph g;
        auto& s1 = g.find_or_add("cam1", ServiceRole::Sensor);
        s1.outputs.push_back("frames");
        auto& s2 = g.find_or_add("cam2", ServiceRole::Sensor);
        s2.outputs.push_back("frames");
        CHECK_THROWS_AS(g.validate(), ValidationError);
    }
}

TEST_CASE("navigation merge: priority, freshness, terminal land") {
    Environment env(dftest::basic_config());
    Robot& drone = env.robot_by_id("tello");
    drone.set_vertical_disturbance(0.0, 8.0);
    drone.start_mission();
    for (int i = 0; i < 100; ++i) env.step_simulation(kDefaultTickMs); // finish takeoff

    Stream<NavigationCommand> low("low_nav");
    Stream<NavigationCommand> high("high_nav");
    drone.navigate({&low, &high});

    auto feed_velocity = [&](double until_ms) {
        while (env.calendar().now() < until_ms) {
            low.publish(NavigationCommand::velocity(1.0, 0.0, 0.0, 0.0, 500.0),
                        env.calendar().now());
            for (int i = 0; i < 5; ++i) env.step_simulation(kDefaultTickMs);
        }
    };

    // Only the low-priority source is live: its velocity command drives.
    const double x0 = drone.state().position.x;
    feed_velocity(env.calendar().now() + 1000.0);
    const double x1 = drone.state().position.x;
    CHECK(x1 > x0 + 0.5);

    // A fresh high-priority hover outranks the streaming velocity.
    high.publish(NavigationCommand::hover(), env.calendar().now());
    feed_velocity(env.calendar().now() + 1500.0);
    const double x2 = drone.state().position.x;
    CHECK(x2 == doctest::Approx(x1).epsilon(1e-12)); // frozen while hover is fresh

    // 2 s later the hover is stale and the fresh velocity takes over again.
    feed_velocity(env.calendar().now() + 1500.0);
    const double x3 = drone.state().position.x;
    CHECK(x3 > x2 + 0.5);

    // Land from the high-priority source is terminal: the velocity stream
    // keeps publishing but can no longer supersede it.
    high.publish(NavigationCommand::land(), env.calendar().now());
    feed_velocity(env.calendar().now() + 4000.0);
    CHECK(drone.state().position.z <= kLandingToleranceM + 1e-9);
    CHECK(drone.terminal_landed());
    const double x4 = drone.state().position.x;
    feed_velocity(env.calendar().now() + 1000.0);
    CHECK(drone.state().position.x == x4);
}

TEST_CASE("independent robots keep independent merge state") {
    auto cfg = dftest::basic_config();
    RobotSpec second = cfg.robots[0];
    second.id = "scout";
    cfg.robots.push_back(second);
    Environment env(cfg);
    Robot& a = env.robot_by_id("tello");
    Robot& b = env.robot_by_id("scout");
    a.set_vertical_disturbance(0.0, 8.0);
    b.set_vertical_disturbance(0.0, 8.0);
    a.start_mission();
    b.start_mission();
    for (int i = 0; i < 100; ++i) env.step_simulation(kDefaultTickMs);

    Stream<NavigationCommand> nav_a("nav_a");
    Stream<NavigationCommand> nav_b("nav_b");
    a.navigate({&nav_a});
    b.navigate({&nav_b});

    for (int i = 0; i < 50; ++i) {
        nav_a.publish(NavigationCommand::velocity(1.0, 0.0, 0.0, 0.0, 500.0),
                      env.calendar().now());
        env.step_simulation(kDefaultTickMs);
    }
    CHECK(a.state().position.x > 0.5); // a follows its stream
    CHECK(b.state().position.x == 0.0); // b hovers: its own source is silent
}

TEST_CASE("select_nav_source picks the freshest highest priority") {
    std::vector<NavSourceState> sources(2);
    sources[0].priority = 0;
    sources[1].priority = 1;
    CHECK(select_nav_source(sources, 1000.0, 2000.0) == -1);

    sources[0] = {0, true, 900.0, NavigationCommand::hover()};
    CHECK(select_nav_source(sources, 1000.0, 2000.0) == 0);

    sources[1] = {1, true, 500.0, NavigationCommand::hover()};
    CHECK(select_nav_source(sources, 1000.0, 2000.0) == 1);

    // High-priority source goes stale: control falls back to the fresh one.
    CHECK(select_nav_source(sources, 2600.0, 2000.0) == 0);
    // Everything stale: nobody drives.
    CHECK(select_nav_source(sources, 9000.0, 2000.0) == -1);
}

TEST_CASE("alternate-frame cadence halves the vision rate") {
    VipRig rig(false);
    rig.env->runtime().run(2000.0);
    int detect_jobs = 0;
    for (const auto& j : rig.env->runtime().job_log().jobs()) {
        // end_mission pumps a landing wrap-up past the requested duration;
        // count only the requested window.
        if (j.analytic == "vip_detect" && j.t_submit_ms <= 2000.0) ++detect_jobs;
    }
    CHECK(detect_jobs == 30); // 30 FPS camera over 2 s, every other frame
}

TEST_CASE("frame cadence is configurable") {
    VipRig rig(false);
    rig.env->runtime().set_frame_cadence(3); // every third frame
    rig.env->runtime().run(2000.0);
    int detect_jobs = 0;
    for (const auto& j : rig.env->runtime().job_log().jobs()) {
        if (j.analytic == "vip_detect" && j.t_submit_ms <= 2000.0) ++detect_jobs;
    }
    CHECK(detect_jobs == 20); // 60 frames / 3
    CHECK_THROWS_AS(rig.env->runtime().set_frame_cadence(0), ArgumentError);
}

TEST_CASE("virtual run: duration, records, exact overhead identity") {
    VipRig rig(false);
    RunMetrics m = rig.env->runtime().run(10000.0);

    CHECK(m.mode == RunMode::Virtual);
    CHECK(m.virtual_end_ms >= 10000.0);
    CHECK(m.wall_elapsed_s < 5.0); // virtual mode runs far faster than real time
    CHECK(m.vision_analytic == "vip_detect");
    CHECK(m.command_analytic == "follow_nav");
    REQUIRE(m.frames.size() > 100);

    int complete = 0;
    for (const auto& r : m.frames) {
        if (!r.infer_done || !r.command_done) continue;
        ++complete;
        // Decomposition: every stage gap is non-negative...
        CHECK(r.t_dispatch_ms >= r.t_capture_ms);
        CHECK(r.t_infer_start_ms >= r.t_dispatch_ms);
        CHECK(r.t_infer_end_ms >= r.t_infer_start_ms);
        CHECK(r.t_command_ms >= r.t_infer_end_ms);
        // ...and the framework adds exactly zero virtual time.
        CHECK(r.overhead_ms() == 0.0);
        CHECK(r.t_infer_end_ms - r.t_infer_start_ms ==
              doctest::Approx(50.0).epsilon(1e-12));
    }
    CHECK(complete > 100);
    CHECK(m.memory_hwm_bytes > 0);
    REQUIRE_FALSE(m.trajectory.empty());
    CHECK(m.trajectory.back().t_ms >= 10000.0);
}

TEST_CASE("configured dispatch delay shows up as overhead") {
    VipRig rig(false);
    rig.env->runtime().set_virtual_dispatch_delay_ms(2.0);
    RunMetrics m = rig.env->runtime().run(3000.0);
    int checked = 0;
    for (const auto& r : m.frames) {
        if (!r.infer_done || !r.command_done) continue;
        // Two dispatch hops on the chain (detector, follower), 2 ms each.
        CHECK(r.overhead_ms() == doctest::Approx(4.0).epsilon(1e-9));
        ++checked;
    }
    CHECK(checked > 10);
}

TEST_CASE("terminal land from the pose analytic ends the run early") {
    VipRig rig(true, "t_ms,label\n0,normal\n5000,hand_raised\n");
    RunMetrics m = rig.env->runtime().run(30000.0);
    Robot& drone = rig.env->robot_by_id("tello");
    CHECK(drone.mission_state() == MissionState::Ended);
    CHECK(m.virtual_end_ms < 12000.0); // landed long before the requested 30 s
    REQUIRE(m.report.has_value());
    CHECK(drone.state().position.z <= kLandingToleranceM + 1e-9);
    CHECK(m.trajectory.back().z <= kLandingToleranceM + 1e-9);
}

TEST_CASE("identical seeds reproduce byte-identical CSV outputs") {
    auto run_once = [](const std::string& tag) {
        VipRig rig(true);
        RunMetrics m = rig.env->runtime().run(5000.0);
        dftest::TempDir out("csv_" + tag);
        write_latency_csv(out.path() / "latency.csv", m);
        write_jobs_csv(out.path() / "jobs.csv", rig.env->runtime().job_log());
        write_trajectory_csv(out.path() / "trajectory.csv", m.trajectory);
        return std::tuple{file_contents(out.path() / "latency.csv"),
                          file_contents(out.path() / "jobs.csv"),
                          file_contents(out.path() / "trajectory.csv")};
    };
    auto a = run_once("a");
    auto b = run_once("b");
    CHECK(std::get<0>(a) == std::get<0>(b));
    CHECK(std::get<1>(a) == std::get<1>(b));
    CHECK(std::get<2>(a) == std::get<2>(b));
    CHECK_FALSE(std::get<0>(a).empty());
}

TEST_CASE("event calendar executes strictly in (time, insertion) order") {
    std::mt19937 rng(11);
    EventCalendar cal;
    struct Executed {
        double t;
        int idx;
    };
    std::vector<Executed> executed;
    std::vector<double> times;
    for (int i = 0; i < 500; ++i) {
        // Coarse times force plenty of ties.
        times.push_back(static_cast<double>(rng() % 50) * 10.0);
    }
    for (int i = 0; i < 500; ++i) {
        cal.schedule(times[i], [&executed, &cal, i] {
            executed.push_back({cal.now(), i});
        });
    }
    cal.advance_to(1000.0);
    REQUIRE(executed.size() == 500);
    // Reconstruct the expected order: stable sort by time (stability =
    // insertion order on ties).
    std::vector<int> expected(500);
    for (int i = 0; i < 500; ++i) expected[i] = i;
    std::stable_sort(expected.begin(), expected.end(),
                     [&](int a, int b) { return times[a] < times[b]; });
    for (int i = 0; i < 500; ++i) {
        REQUIRE(executed[i].idx == expected[i]);
        REQUIRE(executed[i].t == times[expected[i]]);
    }
    CHECK_THROWS_AS(cal.schedule(10.0, [] {}), ArgumentError); // in the past
}
