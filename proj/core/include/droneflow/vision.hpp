#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "droneflow/errors.hpp"

namespace droneflow {

/// Normalized detection box. Center and extents are fractions of the frame;
/// the box is clamped so it always lies inside the unit square.
struct BoundingBox {
    std::string label;
    double confidence = 0.0; // [0, 1]
    double cx = 0.5;
    double cy = 0.5;
    double w = 0.0; // (0, 1]
    double h = 0.0;

    static BoundingBox make(std::string label, double confidence, double cx, double cy, double w,
                            double h) {
        BoundingBox b;
        b.label = std::move(label);
        b.confidence = std::clamp(confidence, 0.0, 1.0);
        // Clamp edges into [0,1], then rebuild center/extent.
        double x0 = std::clamp(cx - w / 2.0, 0.0, 1.0);
        double x1 = std::clamp(cx + w / 2.0, 0.0, 1.0);
        double y0 = std::clamp(cy - h / 2.0, 0.0, 1.0);
        double y1 = std::clamp(cy + h / 2.0, 0.0, 1.0);
        b.cx = (x0 + x1) / 2.0;
        b.cy = (y0 + y1) / 2.0;
        b.w = x1 - x0;
        b.h = y1 - y0;
        return b;
    }

    double area() const { return w * h; }
};

/// 8-bit grayscale camera frame plus side-channel metadata (ground-truth
/// target box, pose label) used by oracle tests and the pose analytic.
struct Frame {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;
    std::map<std::string, std::string> annotations;

    Frame() = default;
    Frame(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {
        if (w <= 0 || h <= 0) throw ArgumentError("frame dimensions must be positive");
    }

    std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    void set(int x, int y, std::uint8_t v) { pixels[static_cast<std::size_t>(y) * width + x] = v; }

    bool well_formed() const {
        return width > 0 && height > 0 &&
               pixels.size() == static_cast<std::size_t>(width) * height;
    }

    std::optional<std::string> annotation(const std::string& key) const {
        auto it = annotations.find(key);
        if (it == annotations.end()) return std::nullopt;
        return it->second;
    }
};

/// Odometry sample: the drone's kinematic state as the sensor reports it.
struct OdomSample {
    // Local ENU, meters / m/s / radians.
    double x = 0.0, y = 0.0, z = 0.0;
    double vx = 0.0, vy = 0.0, vz = 0.0;
    double yaw = 0.0;
};

/// One emitted alert (fire detection, fall detection, ...). Flattened so it
/// serializes straight into alerts.csv.
struct AlertRecord {
    double t_ms = 0.0;
    std::string kind;   // "fire", "fall", ...
    std::string source; // emitting analytic name
    std::string label;
    double confidence = 0.0;
    double cx = 0.0, cy = 0.0, w = 0.0, h = 0.0;
};

} // namespace droneflow
