#include "droneflow_cli/apps.hpp"

using namespace droneflow;

namespace droneflow_cli {

// Waypoint-driven service: survey a 30 m x 60 m field at 10 m altitude and
// 1 m/s, saving the GPS and camera feeds and logging battery/trajectory.
RunMetrics run_survey(Environment& env, const RunRequest& req) {
    ComputeBase& edge = env.compute_by_id("edge");
    Robot& drone = env.robot_by_id("px4");
    drone.start_mission();
    Stream<Vec3>& gps_stream = drone.sensor<GpsSensor>("gps").data_stream();
    Stream<Frame>& camera_stream = drone.sensor<CameraSensor>("camera").data_stream();
    SaveDataAnalytics save_gps("save_gps", req.out_dir);
    save_gps.deploy(edge);
    save_gps.analyse(gps_stream);
    SaveDataAnalytics save_camera("save_camera", req.out_dir);
    save_camera.deploy(edge);
    save_camera.analyse(camera_stream);
    ListData<NavigationCommand> path = rectangular_survey_path(30.0, 60.0, 10.0, 10.0, 1.0);
    MonitoringAnalytics monitoring({"battery", "trajectory"}, req.out_dir);
    monitoring.deploy(edge);
    monitoring.analyse(drone.sensor<OdometrySensor>("odom").data_stream());
    monitoring.analyse(drone.sensor<BatterySensor>("battery").data_stream());
    drone.navigate(path);
    return env.runtime().run(req.duration_s * 1000.0, req.mode);
}

} // namespace droneflow_cli
