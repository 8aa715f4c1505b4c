#include "droneflow_cli/apps.hpp"

using namespace droneflow;

namespace droneflow_cli {

// Analytics-driven service: the camera feed runs through a vest detector
// whose bounding boxes drive a PID follower; its velocity commands steer
// the drone.
RunMetrics run_vip_follow(Environment& env, const RunRequest& req) {
    ComputeBase& detect_compute = select_compute(env, req, "edge");
    Robot& drone = env.robot_by_id("tello");
    drone.start_mission();
    CameraSensor& camera = drone.sensor<CameraSensor>("camera");
    Stream<Frame>& camera_stream = camera.data_stream();
    BlobDetectionAnalytic vip_detect("vip_detect", "vest");
    vip_detect.deploy(detect_compute);
    Stream<BoundingBox>& detections = vip_detect.analyse(camera_stream);
    FollowObjectNavigation follow_nav("follow_nav");
    follow_nav.deploy(env.compute_by_id("edge"));
    Stream<NavigationCommand>& navigation = follow_nav.generate_navigation(detections);
    drone.navigate({&navigation});
    return env.runtime().run(req.duration_s * 1000.0, req.mode);
}

} // namespace droneflow_cli
