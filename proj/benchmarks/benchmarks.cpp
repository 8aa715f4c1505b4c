#include <benchmark/benchmark.h>

#include <filesystem>
#include <fstream>

#include "droneflow/droneflow.hpp"

using namespace droneflow;

namespace {

EnvironmentConfig bench_config(const std::filesystem::path& dir) {
    EnvironmentConfig cfg;
    cfg.seed = 7;
    cfg.base_dir = dir;

    RobotSpec robot;
    robot.id = "bench";
    robot.max_speed_mps = 2.0;
    SensorSpec cam;
    cam.id = "camera";
    cam.kind = SensorKind::Camera;
    cam.rate_hz = 30.0;
    cam.params = nlohmann::json{{"width", 320},       {"height", 240},
                                {"focal_px", 800.0},  {"script", "target.csv"},
                                {"target_width_m", 0.5}, {"target_height_m", 0.5}};
    robot.sensors.push_back(cam);
    cfg.robots.push_back(robot);

    ComputeSpec edge;
    edge.id = "edge";
    edge.kind = ComputeKind::Edge;
    edge.service_times_ms = {{"detect", 50.0}, {"follow", 10.0}};
    cfg.compute.push_back(edge);
    return cfg;
}

std::filesystem::path scratch_dir() {
    auto dir = std::filesystem::temp_directory_path() / "droneflow_bench";
    std::filesystem::create_directories(dir);
    std::ofstream script(dir / "target.csv");
    script << "t_ms,x,y,z\n0,3.0,0.5,1.5\n";
    return dir;
}

class Follower : public NavigableAnalytic<BoundingBox> {
public:
    using NavigableAnalytic::NavigableAnalytic;

protected:
    std::vector<NavigationCommand> transform(const AeroData<BoundingBox>&, double) override {
        return {NavigationCommand::hover()};
    }
};

} // namespace

static void BM_StreamPublish(benchmark::State& state) {
    Stream<int> s("bench", 64);
    std::int64_t sink = 0;
    s.subscribe([&](const AeroData<int>& d, std::int64_t) { sink += d.get_data(); });
    double t = 0.0;
    for (auto _ : state) {
        s.publish(42, t);
        t += 1.0;
    }
    benchmark::DoNotOptimize(sink);
}
BENCHMARK(BM_StreamPublish);

static void BM_StreamPoll(benchmark::State& state) {
    Stream<int> s("bench", 64);
    for (int i = 0; i < 64; ++i) s.publish(i, i);
    for (auto _ : state) {
        auto res = s.poll(Stream<int>::kPollFromStart);
        benchmark::DoNotOptimize(res.items.size());
    }
}
BENCHMARK(BM_StreamPoll);

static void BM_CameraRender(benchmark::State& state) {
    auto dir = scratch_dir();
    Environment env(bench_config(dir));
    auto& cam = env.robot_by_id("bench").sensor<CameraSensor>("camera");
    double t = 0.0;
    for (auto _ : state) {
        Frame f = cam.render(t);
        benchmark::DoNotOptimize(f.pixels.data());
        t += 33.0;
    }
}
BENCHMARK(BM_CameraRender);

static void BM_BlobDetector(benchmark::State& state) {
    auto dir = scratch_dir();
    Environment env(bench_config(dir));
    auto& cam = env.robot_by_id("bench").sensor<CameraSensor>("camera");
    Frame f = cam.render(0.0);
    for (auto _ : state) {
        auto boxes = builtin_blob_detector(f);
        benchmark::DoNotOptimize(boxes.size());
    }
}
BENCHMARK(BM_BlobDetector);

static void BM_PidStep(benchmark::State& state) {
    PidController pid({1.2, 0.05, 0.1}, 0.5, 1.0);
    double e = 0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(pid.step(e, 0.033));
        e = -e;
    }
}
BENCHMARK(BM_PidStep);

static void BM_SurveyPath(benchmark::State& state) {
    for (auto _ : state) {
        auto path = rectangular_survey_path(30.0, 60.0, 10.0, 10.0, 1.0);
        benchmark::DoNotOptimize(path.size());
    }
}
BENCHMARK(BM_SurveyPath);

static void BM_ComputeSubmit(benchmark::State& state) {
    auto dir = scratch_dir();
    Environment env(bench_config(dir));
    auto& edge = env.compute_by_id("edge");
    std::int64_t seq = 0;
    for (auto _ : state) {
        auto info = edge.submit("detect", seq++, nullptr);
        benchmark::DoNotOptimize(info.t_return_ms);
        if (seq % 1024 == 0) {
            state.PauseTiming();
            env.calendar().advance_to(info.t_return_ms + 1.0);
            state.ResumeTiming();
        }
    }
}
BENCHMARK(BM_ComputeSubmit);

// Whole-pipeline cost: one second of virtual vip-follow per iteration.
static void BM_PipelineVirtualSecond(benchmark::State& state) {
    auto dir = scratch_dir();
    for (auto _ : state) {
        state.PauseTiming();
        Environment env(bench_config(dir));
        Robot& drone = env.robot_by_id("bench");
        drone.start_mission();
        auto& frames = drone.sensor<CameraSensor>("camera").data_stream();
        BlobDetectionAnalytic detect("detect", "target");
        detect.deploy(env.compute_by_id("edge"));
        auto& boxes = detect.analyse(frames);
        Follower follow("follow");
        follow.deploy(env.compute_by_id("edge"));
        auto& nav = follow.generate_navigation(boxes);
        drone.navigate({&nav});
        state.ResumeTiming();

        env.runtime().run(1000.0);
    }
}
BENCHMARK(BM_PipelineVirtualSecond)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
