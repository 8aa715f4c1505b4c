#pragma once

#include <filesystem>
#include <vector>

#include "droneflow/compute.hpp"
#include "droneflow/runtime.hpp"
#include "droneflow/vision.hpp"

namespace droneflow {

/// latency.csv: one row per completed frame record.
/// Header: frame_seq,t_capture_ms,t_dispatch_ms,t_infer_start_ms,t_infer_end_ms,t_command_ms
void write_latency_csv(const std::filesystem::path& path, const RunMetrics& metrics);

/// jobs.csv with the compute layer's schema.
/// Header: job_id,analytic,frame_seq,resource,t_submit_ms,t_start_ms,t_end_ms,latency_ms
void write_jobs_csv(const std::filesystem::path& path, const JobLog& log);

/// alerts.csv. Header: t_ms,kind,label,confidence,cx,cy,w,h
void write_alerts_csv(const std::filesystem::path& path,
                      const std::vector<AlertRecord>& alerts);

/// trajectory.csv. Header: t_ms,x,y,z,yaw
void write_trajectory_csv(const std::filesystem::path& path,
                          const std::vector<TrajectorySample>& samples);

/// battery.csv. Header: t_ms,percent
void write_battery_csv(const std::filesystem::path& path,
                       const std::vector<BatterySample>& samples);

} // namespace droneflow
