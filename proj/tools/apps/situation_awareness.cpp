#include "droneflow_cli/apps.hpp"

using namespace droneflow;

namespace droneflow_cli {

// VIP tracking plus emergency commands: body-pose analytics on the same
// camera stream can land the drone (raised hand) or hold position and
// alert (fall). Its commands outrank the follower's in the merge.
RunMetrics run_situation_awareness(Environment& env, const RunRequest& req) {
    ComputeBase& detect_compute = select_compute(env, req, "edge");
    ComputeBase& edge_cloud = env.compute_by_id("edge_cloud");
    Robot& drone = env.robot_by_id("tello");
    drone.start_mission();
    Stream<Frame>& camera_stream = drone.sensor<CameraSensor>("camera").data_stream();
    BlobDetectionAnalytic vip_detect("vip_detect", "vest");
    vip_detect.deploy(detect_compute);
    Stream<BoundingBox>& detections = vip_detect.analyse(camera_stream);
    FollowObjectNavigation follow_nav("follow_nav");
    follow_nav.deploy(env.compute_by_id("edge"));
    Stream<NavigationCommand>& navigation = follow_nav.generate_navigation(detections);
    BodyPoseNavigation body_pose("body_pose");
    body_pose.deploy(edge_cloud);
    Stream<NavigationCommand>& emergency = body_pose.generate_navigation(camera_stream);
    drone.navigate({&navigation, &emergency});
    return env.runtime().run(req.duration_s * 1000.0, req.mode);
}

} // namespace droneflow_cli
