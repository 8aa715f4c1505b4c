#include "droneflow_cli/report.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

using namespace droneflow;

namespace droneflow_cli {

Stats compute_stats(std::vector<double> values) {
    Stats s;
    if (values.empty()) return s;
    std::sort(values.begin(), values.end());
    s.valid = true;
    const std::size_t n = values.size();
    s.median = n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(n);
    std::size_t idx = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n)));
    if (idx > 0) --idx;
    s.p95 = values[idx];
    return s;
}

namespace {

std::string stats_line(const Stats& s) {
    if (!s.valid) return "n/a";
    return "median=" + format_fixed(s.median) + " mean=" + format_fixed(s.mean) +
           " p95=" + format_fixed(s.p95);
}

std::vector<double> frame_end_to_end_ms(const RunMetrics& m) {
    std::vector<double> out;
    for (const auto& r : m.frames) {
        if (!r.infer_done || !r.command_done) continue;
        if (m.mode == RunMode::Wall) {
            out.push_back(static_cast<double>(r.wall_command_ns - r.wall_capture_ns) / 1e6);
        } else {
            out.push_back(r.end_to_end_ms());
        }
    }
    return out;
}

std::vector<double> frame_overhead_ms(const RunMetrics& m) {
    std::vector<double> out;
    for (const auto& r : m.frames) {
        if (!r.infer_done || !r.command_done) continue;
        if (m.mode == RunMode::Wall) {
            out.push_back(static_cast<double>(r.wall_command_ns - r.wall_capture_ns -
                                              r.wall_chain_compute_ns) /
                          1e6);
        } else {
            out.push_back(r.overhead_ms());
        }
    }
    return out;
}

std::vector<double> inference_latencies_ms(const RunMetrics& m, const JobLog& jobs) {
    std::vector<double> out;
    for (const auto& j : jobs.jobs()) {
        if (!m.vision_analytic.empty() && j.analytic == m.vision_analytic) {
            out.push_back(j.latency_ms);
        }
    }
    return out;
}

} // namespace

std::string build_summary(const Environment& env, const RunRequest& req,
                          const RunMetrics& metrics, const JobLog& jobs,
                          const std::vector<AlertRecord>& alerts) {
    std::ostringstream out;
    out << "app: " << req.app << "\n";
    out << "mode: " << (metrics.mode == RunMode::Wall ? "wall" : "virtual") << "\n";
    out << "seed: " << env.seed() << "\n";
    if (req.scheduler_policy) {
        out << "scheduler: " << policy_label(scheduler_policy_from_string(*req.scheduler_policy))
            << "\n";
    } else {
        out << "scheduler: app-default\n";
    }
    out << "duration_requested_ms: " << format_fixed(metrics.requested_duration_ms) << "\n";
    out << "virtual_end_ms: " << format_fixed(metrics.virtual_end_ms) << "\n";
    out << "vision_analytic: "
        << (metrics.vision_analytic.empty() ? "none" : metrics.vision_analytic) << "\n";

    std::size_t complete = 0;
    for (const auto& r : metrics.frames) {
        if (r.infer_done && r.command_done) ++complete;
    }
    out << "frames_dispatched: " << metrics.frames.size() << "\n";
    out << "frames_completed: " << complete << "\n";
    out << "jobs_total: " << jobs.size() << "\n";
    out << "inference_latency_ms: " << stats_line(compute_stats(inference_latencies_ms(
                                           metrics, jobs)))
        << "\n";
    out << "end_to_end_ms: " << stats_line(compute_stats(frame_end_to_end_ms(metrics))) << "\n";
    out << "overhead_ms: " << stats_line(compute_stats(frame_overhead_ms(metrics))) << "\n";

    if (metrics.report) {
        out << "distance_flown_m: " << format_fixed(metrics.report->distance_m) << "\n";
        out << "final_battery_pct: " << format_fixed(metrics.report->final_battery_pct) << "\n";
        out << "flight_time_ms: " << format_fixed(metrics.report->flight_time_ms) << "\n";
    } else {
        out << "distance_flown_m: n/a\nfinal_battery_pct: n/a\nflight_time_ms: n/a\n";
    }

    out << "alerts: " << alerts.size() << "\n";
    std::int64_t drops = 0;
    for (const auto& [name, count] : metrics.drop_counts) drops += count;
    out << "stream_drops_total: " << drops << "\n";
    return out.str();
}

namespace {

struct Bounds {
    double min_x = 0.0, max_x = 1.0, min_y = 0.0, max_y = 1.0;
};

Bounds trajectory_bounds(const std::vector<TrajectorySample>& t) {
    Bounds b;
    if (t.empty()) return b;
    b.min_x = b.max_x = t.front().x;
    b.min_y = b.max_y = t.front().y;
    for (const auto& s : t) {
        b.min_x = std::min(b.min_x, s.x);
        b.max_x = std::max(b.max_x, s.x);
        b.min_y = std::min(b.min_y, s.y);
        b.max_y = std::max(b.max_y, s.y);
    }
    // Avoid a degenerate scale for hover-in-place runs.
    if (b.max_x - b.min_x < 1.0) b.max_x = b.min_x + 1.0;
    if (b.max_y - b.min_y < 1.0) b.max_y = b.min_y + 1.0;
    return b;
}

} // namespace

void write_plot_svg(const std::filesystem::path& path, const RunMetrics& metrics,
                    const JobLog& jobs) {
    std::ofstream svg(path);
    if (!svg) throw IoError("cannot write '" + path.string() + "'");

    const int W = 980, H = 520;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    svg << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";

    // Left panel: top-down trajectory.
    const double px0 = 60, py0 = 60, pw = 380, ph = 380;
    svg << "<text x=\"" << px0 << "\" y=\"40\" font-family=\"monospace\" font-size=\"16\">"
        << "trajectory (top-down, m)</text>\n";
    svg << "<rect x=\"" << px0 << "\" y=\"" << py0 << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    const Bounds b = trajectory_bounds(metrics.trajectory);
    auto map_x = [&](double x) {
        return px0 + (x - b.min_x) / (b.max_x - b.min_x) * pw;
    };
    auto map_y = [&](double y) {
        return py0 + ph - (y - b.min_y) / (b.max_y - b.min_y) * ph;
    };
    if (!metrics.trajectory.empty()) {
        svg << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
        const std::size_t step = std::max<std::size_t>(1, metrics.trajectory.size() / 2000);
        for (std::size_t i = 0; i < metrics.trajectory.size(); i += step) {
            const auto& s = metrics.trajectory[i];
            svg << format_fixed(map_x(s.x), 1) << "," << format_fixed(map_y(s.y), 1) << " ";
        }
        svg << "\"/>\n";
        const auto& first = metrics.trajectory.front();
        const auto& last = metrics.trajectory.back();
        svg << "<circle cx=\"" << format_fixed(map_x(first.x), 1) << "\" cy=\""
            << format_fixed(map_y(first.y), 1) << "\" r=\"4\" fill=\"green\"/>\n";
        svg << "<circle cx=\"" << format_fixed(map_x(last.x), 1) << "\" cy=\""
            << format_fixed(map_y(last.y), 1) << "\" r=\"4\" fill=\"red\"/>\n";
    }
    svg << "<text x=\"" << px0 << "\" y=\"" << py0 + ph + 20
        << "\" font-family=\"monospace\" font-size=\"12\">x: [" << format_fixed(b.min_x, 1)
        << ", " << format_fixed(b.max_x, 1) << "]  y: [" << format_fixed(b.min_y, 1) << ", "
        << format_fixed(b.max_y, 1) << "]</text>\n";

    // Right panel: latency histogram (frame end-to-end when available,
    // otherwise job latencies).
    std::vector<double> latencies;
    for (const auto& r : metrics.frames) {
        if (r.infer_done && r.command_done) latencies.push_back(r.end_to_end_ms());
    }
    if (latencies.empty()) {
        for (const auto& j : jobs.jobs()) latencies.push_back(j.latency_ms);
    }
    const double hx0 = 540, hy0 = 60, hw = 380, hh = 380;
    svg << "<text x=\"" << hx0 << "\" y=\"40\" font-family=\"monospace\" font-size=\"16\">"
        << (metrics.frames.empty() ? "job latency (ms)" : "frame latency (ms)") << "</text>\n";
    svg << "<rect x=\"" << hx0 << "\" y=\"" << hy0 << "\" width=\"" << hw << "\" height=\"" << hh
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    if (!latencies.empty()) {
        const double lo = *std::min_element(latencies.begin(), latencies.end());
        const double hi = std::max(*std::max_element(latencies.begin(), latencies.end()),
                                   lo + 1e-9);
        constexpr int kBins = 24;
        std::vector<int> bins(kBins, 0);
        for (double v : latencies) {
            int idx = static_cast<int>((v - lo) / (hi - lo) * kBins);
            idx = std::clamp(idx, 0, kBins - 1);
            ++bins[idx];
        }
        const int peak = *std::max_element(bins.begin(), bins.end());
        const double bar_w = hw / kBins;
        for (int i = 0; i < kBins; ++i) {
            if (bins[i] == 0) continue;
            const double bar_h = hh * bins[i] / peak;
            svg << "<rect x=\"" << format_fixed(hx0 + i * bar_w, 1) << "\" y=\""
                << format_fixed(hy0 + hh - bar_h, 1) << "\" width=\""
                << format_fixed(bar_w - 1.0, 1) << "\" height=\"" << format_fixed(bar_h, 1)
                << "\" fill=\"#ff7f0e\"/>\n";
        }
        svg << "<text x=\"" << hx0 << "\" y=\"" << hy0 + hh + 20
            << "\" font-family=\"monospace\" font-size=\"12\">range [" << format_fixed(lo)
            << ", " << format_fixed(hi) << "] ms, n=" << latencies.size() << "</text>\n";
    } else {
        svg << "<text x=\"" << hx0 + 40 << "\" y=\"" << hy0 + hh / 2
            << "\" font-family=\"monospace\" font-size=\"14\">no latency data</text>\n";
    }
    svg << "</svg>\n";
}

void write_run_outputs(Environment& env, const RunRequest& req, const RunMetrics& metrics) {
    const auto& dir = req.out_dir;
    std::filesystem::create_directories(dir);

    {
        std::ofstream plan(dir / "plan.json");
        if (!plan) throw IoError("cannot write plan.json");
        plan << env.runtime().emit_plan().dump(2) << "\n";
    }
    write_latency_csv(dir / "latency.csv", metrics);
    write_jobs_csv(dir / "jobs.csv", env.runtime().job_log());
    write_alerts_csv(dir / "alerts.csv", env.runtime().alerts());
    // Monitoring analytics may already have produced these; don't clobber.
    if (!std::filesystem::exists(dir / "trajectory.csv")) {
        write_trajectory_csv(dir / "trajectory.csv", metrics.trajectory);
    }
    if (!std::filesystem::exists(dir / "battery.csv")) {
        write_battery_csv(dir / "battery.csv", metrics.battery);
    }
    {
        std::ofstream summary(dir / "summary.txt");
        if (!summary) throw IoError("cannot write summary.txt");
        summary << build_summary(env, req, metrics, env.runtime().job_log(),
                                 env.runtime().alerts());
    }
    write_plot_svg(dir / "plot.svg", metrics, env.runtime().job_log());
}

} // namespace droneflow_cli
