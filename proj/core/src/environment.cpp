#include "droneflow/environment.hpp"

#include <algorithm>

#include "droneflow/errors.hpp"

namespace droneflow {

Environment::Environment(const std::string& config_path)
    : Environment(load_environment_config(config_path)) {}

Environment::Environment(const std::string& config_path, std::uint64_t seed_override)
    : cfg_([&] {
          auto c = load_environment_config(config_path);
          c.seed = seed_override;
          return c;
      }()),
      rng_(cfg_.seed) {
    build();
}

Environment::Environment(EnvironmentConfig cfg) : cfg_(std::move(cfg)), rng_(cfg_.seed) {
    validate_config(cfg_);
    build();
}

void Environment::build() {
    runtime_ = std::make_unique<Runtime>(*this);

    // Plain resources first so schedulers can resolve member pointers.
    std::map<std::string, ComputeResource*> resources;
    for (const auto& spec : cfg_.compute) {
        if (spec.kind == ComputeKind::Scheduler) continue;
        auto r = std::make_unique<ComputeResource>(spec, calendar_, *runtime_,
                                                   cfg_.seed ^ computes_.size());
        resources[spec.id] = r.get();
        computes_.push_back(std::move(r));
    }
    for (const auto& spec : cfg_.compute) {
        if (spec.kind != ComputeKind::Scheduler) continue;
        std::vector<ComputeResource*> members;
        for (const auto& mid : spec.members) members.push_back(resources.at(mid));
        computes_.push_back(
            std::make_unique<SchedulerResource>(spec, std::move(members), calendar_, *runtime_));
    }

    for (const auto& spec : cfg_.robots) {
        robots_.push_back(std::make_unique<Robot>(*this, spec));
    }
    for (const auto& spec : cfg_.env_sensors) {
        auto s = make_sensor(*this, spec, nullptr);
        s->activate(0.0);
        env_sensors_.push_back(std::move(s));
    }
}

std::vector<Robot*> Environment::robots() {
    std::vector<Robot*> out;
    out.reserve(robots_.size());
    for (auto& r : robots_) out.push_back(r.get());
    return out;
}

Robot& Environment::robot_by_id(const std::string& rid) {
    for (auto& r : robots_) {
        if (r->id() == rid) return *r;
    }
    throw NotFoundError("no robot with id '" + rid + "'");
}

std::vector<Sensor*> Environment::env_sensors() {
    std::vector<Sensor*> out;
    out.reserve(env_sensors_.size());
    for (auto& s : env_sensors_) out.push_back(s.get());
    return out;
}

Sensor& Environment::env_sensor_by_id(const std::string& sid) {
    for (auto& s : env_sensors_) {
        if (s->id() == sid) return *s;
    }
    throw NotFoundError("no environment sensor with id '" + sid + "'");
}

std::vector<ComputeBase*> Environment::compute_resources() {
    std::vector<ComputeBase*> out;
    out.reserve(computes_.size());
    for (auto& c : computes_) out.push_back(c.get());
    return out;
}

ComputeBase& Environment::compute_by_id(const std::string& cid) {
    for (auto& c : computes_) {
        if (c->id() == cid) return *c;
    }
    throw NotFoundError("no compute resource with id '" + cid + "'");
}

void Environment::step_simulation(double dt_ms) {
    if (dt_ms <= 0.0) throw ArgumentError("step dt must be > 0");
    step_to(calendar_.now() + dt_ms);
}

void Environment::step_to(double t_ms) {
    const double t_prev = calendar_.now();
    calendar_.schedule(t_ms, [this, t_prev, t_ms] {
        for (auto& r : robots_) {
            r->tick(t_prev, t_ms);
        }
        runtime_->on_tick(t_ms);
    });
    calendar_.advance_to(t_ms);
}

} // namespace droneflow
