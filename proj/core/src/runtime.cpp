#include "droneflow/runtime.hpp"

#include <sys/resource.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "droneflow/calendar.hpp"
#include "droneflow/environment.hpp"
#include "droneflow/errors.hpp"
#include "droneflow/robot.hpp"

namespace droneflow {

std::string to_string(ServiceRole r) {
    switch (r) {
    case ServiceRole::Compute: return "compute";
    case ServiceRole::Sensor: return "sensor";
    case ServiceRole::Analytic: return "analytic";
    case ServiceRole::Robot: return "robot";
    }
    return "?";
}

ApplicationGraph::Service& ApplicationGraph::find_or_add(const std::string& name,
                                                         ServiceRole role) {
    for (auto& s : services_) {
        if (s.name == name && s.role == role) return s;
    }
    services_.push_back(Service{name, role, "", {}, {}});
    return services_.back();
}

const ApplicationGraph::Service* ApplicationGraph::find(const std::string& name,
                                                        ServiceRole role) const {
    for (const auto& s : services_) {
        if (s.name == name && s.role == role) return &s;
    }
    return nullptr;
}

std::vector<std::string> ApplicationGraph::launch_order() const {
    std::vector<std::string> order;
    for (ServiceRole role : {ServiceRole::Compute, ServiceRole::Sensor, ServiceRole::Analytic,
                             ServiceRole::Robot}) {
        for (const auto& s : services_) {
            if (s.role == role) order.push_back(s.name);
        }
    }
    return order;
}

void ApplicationGraph::validate() const {
    std::map<std::string, const Service*> producer_of;
    for (const auto& s : services_) {
        for (const auto& ch : s.outputs) {
            auto [it, inserted] = producer_of.emplace(ch, &s);
            if (!inserted) {
                throw ValidationError("channel '" + ch + "' has more than one producer ('" +
                                      it->second->name + "' and '" + s.name + "')");
            }
        }
    }
    for (const auto& s : services_) {
        if (s.role == ServiceRole::Analytic && s.binding.empty()) {
            throw ValidationError("analytic '" + s.name + "' has no deployment");
        }
        for (const auto& ch : s.inputs) {
            if (!producer_of.contains(ch)) {
                throw ValidationError("service '" + s.name + "' consumes channel '" + ch +
                                      "' that no service produces");
            }
        }
    }
    // Cycle check across analytic channel edges.
    std::map<std::string, std::vector<std::string>> downstream;
    for (const auto& s : services_) {
        if (s.role != ServiceRole::Analytic) continue;
        for (const auto& in : s.inputs) {
            const Service* p = producer_of.at(in);
            if (p->role == ServiceRole::Analytic) {
                downstream[p->name].push_back(s.name);
            }
        }
    }
    std::set<std::string> done, visiting;
    std::function<void(const std::string&)> visit = [&](const std::string& n) {
        if (done.contains(n)) return;
        if (!visiting.insert(n).second) {
            throw ValidationError("analytic dataflow cycle through '" + n + "'");
        }
        for (const auto& next : downstream[n]) visit(next);
        visiting.erase(n);
        done.insert(n);
    };
    for (const auto& s : services_) {
        if (s.role == ServiceRole::Analytic) visit(s.name);
    }
}

int select_nav_source(const std::vector<NavSourceState>& sources, double now_ms,
                      double freshness_ms) {
    int best = -1;
    for (std::size_t i = 0; i < sources.size(); ++i) {
        const auto& s = sources[i];
        if (!s.has_command) continue;
        if (now_ms - s.last_emit_ms > freshness_ms) continue;
        if (best < 0 || s.priority > sources[best].priority) {
            best = static_cast<int>(i);
        }
    }
    return best;
}

Runtime::Runtime(Environment& env) : env_(env) {}

EventCalendar& Runtime::calendar() { return env_.calendar(); }

void Runtime::register_compute(ComputeBase& c) {
    auto& svc = graph_.find_or_add(c.id(), ServiceRole::Compute);
    svc.binding = nlohmann::json(c.properties())["kind"].get<std::string>();
    if (auto* sched = dynamic_cast<SchedulerResource*>(&c)) {
        std::string members;
        for (const auto* m : sched->members()) {
            members += (members.empty() ? "" : ",") + m->id();
        }
        svc.binding = "scheduler policy=" + policy_label(sched->policy()) + " members=[" +
                      members + "]";
    }
}

void Runtime::register_sensor(const std::string& id, const std::string& owner,
                              const std::string& channel, bool is_camera) {
    auto& svc = graph_.find_or_add(id, ServiceRole::Sensor);
    svc.binding = owner;
    if (std::find(svc.outputs.begin(), svc.outputs.end(), channel) == svc.outputs.end()) {
        svc.outputs.push_back(channel);
    }
    if (is_camera &&
        std::find(camera_channels_.begin(), camera_channels_.end(), channel) ==
            camera_channels_.end()) {
        camera_channels_.push_back(channel);
    }
}

void Runtime::register_analytic(const std::string& name, const std::string& binding) {
    auto& svc = graph_.find_or_add(name, ServiceRole::Analytic);
    svc.binding = binding;
}

void Runtime::add_analytic_edge(const std::string& name, const std::string& input_channel,
                                const std::string& output_channel, bool input_is_frame,
                                bool emits_navigation) {
    auto& svc = graph_.find_or_add(name, ServiceRole::Analytic);
    svc.inputs.push_back(input_channel);
    svc.outputs.push_back(output_channel);

    const bool camera_input =
        std::find(camera_channels_.begin(), camera_channels_.end(), input_channel) !=
        camera_channels_.end();
    if (input_is_frame && camera_input && metrics_.vision_analytic.empty()) {
        metrics_.vision_analytic = name;
    }
    if (emits_navigation && metrics_.command_analytic.empty()) {
        // Confirmed against the vision chain in resolve_metrics_chain().
        metrics_.command_analytic = name;
    }
}

void Runtime::register_nav_sources(Robot& robot,
                                   std::vector<Stream<NavigationCommand>*> sources) {
    auto& svc = graph_.find_or_add(robot.id(), ServiceRole::Robot);
    svc.binding = robot.spec().backend;

    RobotNav* nav = nullptr;
    for (auto& rn : robot_nav_) {
        if (rn.robot == &robot) nav = &rn;
    }
    if (!nav) {
        robot_nav_.push_back(RobotNav{&robot, {}, {}, false});
        nav = &robot_nav_.back();
    }
    for (std::size_t i = 0; i < sources.size(); ++i) {
        Stream<NavigationCommand>* stream = sources[i];
        svc.inputs.push_back(stream->name());
        nav->sources.push_back(NavSourceState{static_cast<int>(nav->sources.size()), false,
                                              -1.0, std::nullopt});
        const std::size_t idx = nav->sources.size() - 1;
        RobotNav* nav_ptr = nav;
        auto sub = stream->subscribe(
            [nav_ptr, idx](const AeroData<NavigationCommand>& item, std::int64_t) {
                NavSourceState& src = nav_ptr->sources[idx];
                src.command = item.get_data();
                src.command->set_priority(src.priority);
                src.has_command = true;
                src.last_emit_ms = item.timestamp_ms();
            });
        nav->subscriptions.emplace_back(stream, sub);
        track_stream_drops(stream->name(), [stream] { return stream->drop_count(); });
    }
}

void Runtime::register_list_navigation(Robot& robot, std::size_t) {
    auto& svc = graph_.find_or_add(robot.id(), ServiceRole::Robot);
    svc.binding = robot.spec().backend;
    graph_.has_list_navigation = true;
}

void Runtime::track_stream_drops(const std::string& name, std::function<std::int64_t()> getter) {
    drop_getters_[name] = std::move(getter);
}

void Runtime::set_frame_cadence(int every_nth) {
    if (every_nth < 1) throw ArgumentError("frame cadence must be >= 1");
    frame_cadence_ = every_nth;
}

int Runtime::cadence_for_stream(const std::string& channel) const {
    const bool camera =
        std::find(camera_channels_.begin(), camera_channels_.end(), channel) !=
        camera_channels_.end();
    return camera ? frame_cadence_ : 1;
}

void Runtime::set_virtual_dispatch_delay_ms(double ms) {
    if (ms < 0.0) throw ArgumentError("dispatch delay must be >= 0");
    dispatch_delay_ms_ = ms;
}

std::int64_t Runtime::wall_now_ns() const {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
               std::chrono::steady_clock::now() - wall_epoch_)
        .count();
}

void Runtime::note_frame_captured(const std::string& channel, std::int64_t seq, double) {
    last_capture_wall_[channel] = {seq, wall_now_ns()};
}

FrameRecord* Runtime::record_for(std::int64_t frame_seq) {
    auto it = frame_index_.find(frame_seq);
    if (it == frame_index_.end()) return nullptr;
    return &metrics_.frames[it->second];
}

void Runtime::note_dispatch(const std::string& analytic, std::int64_t frame_seq,
                            double t_capture_ms, double t_dispatch_ms) {
    if (analytic != metrics_.vision_analytic || frame_seq < 0) return;
    if (frame_index_.contains(frame_seq)) return;
    FrameRecord rec;
    rec.frame_seq = frame_seq;
    rec.t_capture_ms = t_capture_ms;
    rec.t_dispatch_ms = t_dispatch_ms;
    rec.last_chain_mark_ms = t_capture_ms;
    rec.wall_dispatch_ns = wall_now_ns();
    rec.wall_capture_ns = rec.wall_dispatch_ns;
    for (const auto& [channel, cap] : last_capture_wall_) {
        if (cap.first == frame_seq) rec.wall_capture_ns = cap.second;
    }
    frame_index_[frame_seq] = metrics_.frames.size();
    metrics_.frames.push_back(rec);
}

void Runtime::note_chain_submit(const std::string& analytic, std::int64_t frame_seq,
                                double t_submit_ms) {
    FrameRecord* rec = record_for(frame_seq);
    if (!rec || rec->command_done) return;
    const bool on_chain = std::find(chain_analytics_.begin(), chain_analytics_.end(),
                                    analytic) != chain_analytics_.end();
    if (!on_chain) return;
    rec->plumbing_gap_ms += t_submit_ms - rec->last_chain_mark_ms;
    rec->last_chain_mark_ms = t_submit_ms;
}

void Runtime::note_completion(const std::string& analytic, std::int64_t frame_seq,
                              const CompletionInfo& info, std::int64_t wall_start_ns,
                              std::int64_t wall_end_ns) {
    FrameRecord* rec = record_for(frame_seq);
    if (!rec) return;
    const bool on_chain = std::find(chain_analytics_.begin(), chain_analytics_.end(),
                                    analytic) != chain_analytics_.end();
    if (analytic == metrics_.vision_analytic && !rec->infer_done) {
        rec->infer_done = true;
        rec->t_infer_start_ms = info.t_start_ms;
        rec->t_infer_end_ms = info.t_end_ms;
        rec->wall_infer_start_ns = wall_start_ns;
        rec->wall_infer_end_ns = wall_end_ns;
    }
    if (on_chain && !rec->command_done) {
        rec->chain_jobs_ms += info.latency_ms();
        rec->wall_chain_compute_ns += wall_end_ns - wall_start_ns;
        rec->last_chain_mark_ms = std::max(rec->last_chain_mark_ms, info.t_return_ms);
    }
}

void Runtime::note_command(const std::string& analytic, std::int64_t frame_seq, double t_ms) {
    if (analytic != metrics_.command_analytic) return;
    FrameRecord* rec = record_for(frame_seq);
    if (!rec || rec->command_done) return;
    rec->command_done = true;
    rec->t_command_ms = t_ms;
    rec->wall_command_ns = wall_now_ns();
}

void Runtime::record_alert(AlertRecord alert) { alerts_.push_back(std::move(alert)); }

void Runtime::on_tick(double t_ms) {
    if (!recording_robot_) return;
    const DroneState& st = recording_robot_->state();
    metrics_.trajectory.push_back({t_ms, st.position.x, st.position.y, st.position.z, st.yaw});
    metrics_.battery.push_back({t_ms, st.battery_pct});
}

const NavigationCommand* Runtime::active_stream_command(const Robot& robot, double now_ms) {
    for (auto& nav : robot_nav_) {
        if (nav.robot != &robot) continue;
        if (nav.land_latched) {
            static const NavigationCommand land = NavigationCommand::land();
            return &land;
        }
        const int idx = select_nav_source(nav.sources, now_ms, freshness_ms_);
        if (idx < 0) return nullptr;
        const NavSourceState& src = nav.sources[idx];
        const NavigationCommand& cmd = *src.command;
        if (cmd.is_land()) {
            nav.land_latched = true;
            return &*src.command;
        }
        if (cmd.kind() == NavKind::Velocity &&
            now_ms > src.last_emit_ms + cmd.as<VelocityCmd>().duration_ms) {
            return nullptr; // command ran out; hover until something fresh lands
        }
        return &cmd;
    }
    return nullptr;
}

bool Runtime::land_latched(const Robot& robot) const {
    for (const auto& nav : robot_nav_) {
        if (nav.robot == &robot) return nav.land_latched;
    }
    return false;
}

void Runtime::resolve_metrics_chain() {
    chain_analytics_.clear();
    if (metrics_.vision_analytic.empty()) {
        metrics_.command_analytic.clear();
        return;
    }
    // Channel producers among analytics.
    std::map<std::string, std::string> produced_by;
    for (const auto& s : graph_.services()) {
        if (s.role != ServiceRole::Analytic) continue;
        for (const auto& ch : s.outputs) produced_by[ch] = s.name;
    }
    // Parent edges: analytic -> analytics it consumes from.
    std::map<std::string, std::vector<std::string>> parents;
    for (const auto& s : graph_.services()) {
        if (s.role != ServiceRole::Analytic) continue;
        for (const auto& ch : s.inputs) {
            auto it = produced_by.find(ch);
            if (it != produced_by.end()) parents[s.name].push_back(it->second);
        }
    }
    // First navigation analytic transitively fed by the vision head.
    auto reaches_head = [&](const std::string& name) {
        std::vector<std::string> stack{name};
        std::set<std::string> seen;
        while (!stack.empty()) {
            std::string cur = stack.back();
            stack.pop_back();
            if (cur == metrics_.vision_analytic) return true;
            if (!seen.insert(cur).second) continue;
            for (const auto& p : parents[cur]) stack.push_back(p);
        }
        return false;
    };
    metrics_.command_analytic.clear();
    // Walk robot inputs back to their producing analytics.
    for (const auto& s : graph_.services()) {
        if (s.role != ServiceRole::Robot) continue;
        for (const auto& ch : s.inputs) {
            auto it = produced_by.find(ch);
            if (it == produced_by.end()) continue;
            if (reaches_head(it->second)) {
                metrics_.command_analytic = it->second;
                break;
            }
        }
        if (!metrics_.command_analytic.empty()) break;
    }
    // Chain = analytics on paths head -> command analytic.
    if (metrics_.command_analytic.empty()) {
        chain_analytics_ = {metrics_.vision_analytic};
        return;
    }
    std::vector<std::string> stack{metrics_.command_analytic};
    std::set<std::string> chain;
    while (!stack.empty()) {
        std::string cur = stack.back();
        stack.pop_back();
        if (!reaches_head(cur) && cur != metrics_.vision_analytic) continue;
        if (!chain.insert(cur).second) continue;
        for (const auto& p : parents[cur]) stack.push_back(p);
    }
    chain_analytics_.assign(chain.begin(), chain.end());
}

RunMetrics Runtime::run(double duration_ms, RunMode mode) {
    if (duration_ms <= 0.0) throw ArgumentError("run duration must be > 0");
    graph_.validate();

    mode_ = mode;
    const std::string vision = metrics_.vision_analytic;
    const std::string command = metrics_.command_analytic;
    metrics_ = RunMetrics{};
    metrics_.mode = mode;
    metrics_.requested_duration_ms = duration_ms;
    metrics_.vision_analytic = vision;
    metrics_.command_analytic = command;
    frame_index_.clear();
    resolve_metrics_chain();

    const auto wall_start = std::chrono::steady_clock::now();

    // Robots referenced by the graph drive the run.
    std::vector<Robot*> active_robots;
    for (const auto& s : graph_.services()) {
        if (s.role == ServiceRole::Robot) {
            active_robots.push_back(&env_.robot_by_id(s.name));
        }
    }
    for (Robot* r : active_robots) {
        if (r->mission_state() == MissionState::Idle) r->start_mission();
    }

    recording_robot_ = active_robots.empty() ? nullptr : active_robots.front();

    const double t0 = env_.calendar().now();
    std::uint64_t tick = 0;
    while (true) {
        const double t_next = t0 + static_cast<double>(++tick) * tick_ms_;
        if (t_next > t0 + duration_ms + 1e-9) break;
        env_.step_to(t_next);

        bool all_ended = !active_robots.empty();
        for (Robot* r : active_robots) {
            if (r->terminal_landed() && r->mission_state() == MissionState::Active) {
                metrics_.report = r->finalize_landed();
            }
            all_ended = all_ended && r->mission_state() == MissionState::Ended;
        }
        if (all_ended) break;
    }

    for (Robot* r : active_robots) {
        if (r->mission_state() == MissionState::Active ||
            r->mission_state() == MissionState::Paused) {
            metrics_.report = r->end_mission(); // lands; ticks keep recording
        }
    }
    recording_robot_ = nullptr;

    metrics_.virtual_end_ms = env_.calendar().now();
    for (const auto& [name, getter] : drop_getters_) {
        metrics_.drop_counts[name] = getter();
    }
    metrics_.memory_hwm_bytes = read_peak_rss_bytes();
    metrics_.wall_elapsed_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    return metrics_;
}

nlohmann::ordered_json Runtime::emit_plan() const {
    graph_.validate();
    nlohmann::ordered_json plan;
    nlohmann::ordered_json services = nlohmann::ordered_json::array();
    for (ServiceRole role : {ServiceRole::Compute, ServiceRole::Sensor, ServiceRole::Analytic,
                             ServiceRole::Robot}) {
        for (const auto& s : graph_.services()) {
            if (s.role != role) continue;
            nlohmann::ordered_json svc;
            svc["name"] = s.name;
            svc["role"] = to_string(s.role);
            svc["binding"] = s.binding;
            svc["inputs"] = s.inputs;
            svc["outputs"] = s.outputs;
            services.push_back(svc);
        }
    }
    plan["services"] = services;
    plan["launch_order"] = graph_.launch_order();
    return plan;
}

std::int64_t read_peak_rss_bytes() {
    std::ifstream status("/proc/self/status");
    std::string line;
    while (std::getline(status, line)) {
        if (line.rfind("VmHWM:", 0) == 0) {
            std::istringstream ss(line.substr(6));
            std::int64_t kb = 0;
            ss >> kb;
            if (kb > 0) return kb * 1024;
        }
    }
    rusage usage{};
    if (getrusage(RUSAGE_SELF, &usage) == 0) {
        return static_cast<std::int64_t>(usage.ru_maxrss) * 1024;
    }
    return 0;
}

} // namespace droneflow
