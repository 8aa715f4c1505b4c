#include "droneflow/metrics_io.hpp"

#include "droneflow/csvio.hpp"

namespace droneflow {

namespace {

double ns_to_ms(std::int64_t ns) { return static_cast<double>(ns) / 1e6; }

} // namespace

void write_latency_csv(const std::filesystem::path& path, const RunMetrics& metrics) {
    CsvFile csv;
    csv.open(path,
             "frame_seq,t_capture_ms,t_dispatch_ms,t_infer_start_ms,t_infer_end_ms,"
             "t_command_ms");
    const bool wall = metrics.mode == RunMode::Wall;
    for (const auto& r : metrics.frames) {
        if (!r.infer_done || !r.command_done) continue;
        std::string row = std::to_string(r.frame_seq) + ",";
        if (wall) {
            row += format_fixed(ns_to_ms(r.wall_capture_ns)) + "," +
                   format_fixed(ns_to_ms(r.wall_dispatch_ns)) + "," +
                   format_fixed(ns_to_ms(r.wall_infer_start_ns)) + "," +
                   format_fixed(ns_to_ms(r.wall_infer_end_ns)) + "," +
                   format_fixed(ns_to_ms(r.wall_command_ns));
        } else {
            row += format_fixed(r.t_capture_ms) + "," + format_fixed(r.t_dispatch_ms) + "," +
                   format_fixed(r.t_infer_start_ms) + "," + format_fixed(r.t_infer_end_ms) +
                   "," + format_fixed(r.t_command_ms);
        }
        csv.row(row);
    }
}

void write_jobs_csv(const std::filesystem::path& path, const JobLog& log) {
    CsvFile csv;
    csv.open(path, "job_id,analytic,frame_seq,resource,t_submit_ms,t_start_ms,t_end_ms,"
                   "latency_ms");
    for (const auto& j : log.jobs()) {
        csv.row(std::to_string(j.job_id) + "," + j.analytic + "," +
                std::to_string(j.frame_seq) + "," + j.resource_id + "," +
                format_fixed(j.t_submit_ms) + "," + format_fixed(j.t_start_ms) + "," +
                format_fixed(j.t_end_ms) + "," + format_fixed(j.latency_ms));
    }
}

void write_alerts_csv(const std::filesystem::path& path,
                      const std::vector<AlertRecord>& alerts) {
    CsvFile csv;
    csv.open(path, "t_ms,kind,label,confidence,cx,cy,w,h");
    for (const auto& a : alerts) {
        csv.row(format_fixed(a.t_ms) + "," + a.kind + "," + a.label + "," +
                format_fixed(a.confidence) + "," + format_fixed(a.cx) + "," +
                format_fixed(a.cy) + "," + format_fixed(a.w) + "," + format_fixed(a.h));
    }
}

void write_trajectory_csv(const std::filesystem::path& path,
                          const std::vector<TrajectorySample>& samples) {
    CsvFile csv;
    csv.open(path, "t_ms,x,y,z,yaw");
    for (const auto& s : samples) {
        csv.row(format_fixed(s.t_ms) + "," + format_fixed(s.x) + "," + format_fixed(s.y) + "," +
                format_fixed(s.z) + "," + format_fixed(s.yaw));
    }
}

void write_battery_csv(const std::filesystem::path& path,
                       const std::vector<BatterySample>& samples) {
    CsvFile csv;
    csv.open(path, "t_ms,percent");
    for (const auto& s : samples) {
        csv.row(format_fixed(s.t_ms) + "," + format_fixed(s.pct));
    }
}

} // namespace droneflow
