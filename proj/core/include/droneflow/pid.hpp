#pragma once

#include <algorithm>

namespace droneflow {

struct PidAxisGains {
    double kp = 0.0;
    double ki = 0.0;
    double kd = 0.0;
};

/// Gains for the three follow-control axes plus shared clamps. The output
/// clamp must not exceed the robot's max speed.
struct PidGains {
    PidAxisGains yaw{1.2, 0.05, 0.1};
    PidAxisGains vertical{1.0, 0.02, 0.05};
    PidAxisGains forward{2.0, 0.0, 0.2};
    double integral_clamp = 0.5;
    double output_clamp = 1.0; // m/s and rad/s
};

/// Single-axis PID with integral anti-windup and symmetric output clamp.
/// With zero history and zero error the output is exactly zero.
class PidController {
public:
    PidController(PidAxisGains gains, double integral_clamp, double output_clamp)
        : gains_(gains), integral_clamp_(integral_clamp), output_clamp_(output_clamp) {}

    double step(double error, double dt_s) {
        double derivative = 0.0;
        if (dt_s > 0.0) {
            integral_ = std::clamp(integral_ + error * dt_s, -integral_clamp_, integral_clamp_);
            derivative = (error - prev_error_) / dt_s;
        }
        prev_error_ = error;
        const double out = gains_.kp * error + gains_.ki * integral_ + gains_.kd * derivative;
        return std::clamp(out, -output_clamp_, output_clamp_);
    }

    void reset() {
        integral_ = 0.0;
        prev_error_ = 0.0;
    }

    double integral() const { return integral_; }

private:
    PidAxisGains gains_;
    double integral_clamp_;
    double output_clamp_;
    double integral_ = 0.0;
    double prev_error_ = 0.0;
};

} // namespace droneflow
