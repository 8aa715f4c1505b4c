#include "droneflow_cli/apps.hpp"

using namespace droneflow;

namespace droneflow_cli {

// Patrol a fire-prone area while a cloud-deployed detector scans the
// camera feed; confident detections become deduplicated alerts.
RunMetrics run_wildfire(Environment& env, const RunRequest& req) {
    ComputeBase& cloud = select_compute(env, req, "cloud");
    Robot& drone = env.robot_by_id("px4");
    drone.start_mission();
    Stream<Frame>& camera_stream = drone.sensor<CameraSensor>("camera").data_stream();
    BlobDetectionAnalytic fire_detect("fire_detect", "fire");
    fire_detect.deploy(cloud);
    Stream<BoundingBox>& fire_boxes = fire_detect.analyse(camera_stream);
    FireAlertAnalytics fire_alert("fire_alert");
    fire_alert.deploy(cloud);
    fire_alert.analyse(fire_boxes);
    ListData<NavigationCommand> patrol = rectangular_survey_path(40.0, 20.0, 12.0, 10.0, 2.0);
    drone.navigate(patrol);
    return env.runtime().run(req.duration_s * 1000.0, req.mode);
}

} // namespace droneflow_cli
