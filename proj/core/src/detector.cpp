#include "droneflow/detector.hpp"

#include <vector>

#include "droneflow/errors.hpp"

namespace droneflow {

std::optional<BoundingBox> detect_largest_bright_region(const Frame& frame,
                                                        const BlobDetectorConfig& cfg,
                                                        const std::string& label) {
    if (!frame.well_formed()) {
        throw ArgumentError("malformed frame passed to detector");
    }
    const int w = frame.width, h = frame.height;
    std::vector<char> visited(static_cast<std::size_t>(w) * h, 0);
    std::vector<int> stack;

    int best_count = 0;
    int best_x0 = 0, best_x1 = 0, best_y0 = 0, best_y1 = 0;

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int idx = y * w + x;
            if (visited[idx] || frame.pixels[idx] < cfg.threshold) continue;
            // Flood fill this component.
            int count = 0;
            int x0 = x, x1 = x, y0 = y, y1 = y;
            stack.clear();
            stack.push_back(idx);
            visited[idx] = 1;
            while (!stack.empty()) {
                const int cur = stack.back();
                stack.pop_back();
                const int cx = cur % w, cy = cur / w;
                ++count;
                x0 = std::min(x0, cx);
                x1 = std::max(x1, cx);
                y0 = std::min(y0, cy);
                y1 = std::max(y1, cy);
                const int neighbors[4][2] = {{cx - 1, cy}, {cx + 1, cy}, {cx, cy - 1},
                                             {cx, cy + 1}};
                for (const auto& n : neighbors) {
                    if (n[0] < 0 || n[0] >= w || n[1] < 0 || n[1] >= h) continue;
                    const int nidx = n[1] * w + n[0];
                    if (!visited[nidx] && frame.pixels[nidx] >= cfg.threshold) {
                        visited[nidx] = 1;
                        stack.push_back(nidx);
                    }
                }
            }
            if (count > best_count) {
                best_count = count;
                best_x0 = x0;
                best_x1 = x1;
                best_y0 = y0;
                best_y1 = y1;
            }
        }
    }

    if (best_count < cfg.min_region_px) {
        return std::nullopt;
    }
    const double box_px = static_cast<double>(best_x1 - best_x0 + 1) * (best_y1 - best_y0 + 1);
    return BoundingBox::make(label, static_cast<double>(best_count) / box_px,
                             (best_x0 + best_x1 + 1.0) / 2.0 / w,
                             (best_y0 + best_y1 + 1.0) / 2.0 / h,
                             static_cast<double>(best_x1 - best_x0 + 1) / w,
                             static_cast<double>(best_y1 - best_y0 + 1) / h);
}

std::vector<BoundingBox> builtin_blob_detector(const Frame& frame, const BlobDetectorConfig& cfg,
                                               const std::string& label) {
    auto box = detect_largest_bright_region(frame, cfg, label);
    if (!box) return {};
    return {*box};
}

} // namespace droneflow
