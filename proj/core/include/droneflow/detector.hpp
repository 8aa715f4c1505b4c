#pragma once

#include <optional>
#include <string>
#include <vector>

#include "droneflow/vision.hpp"

namespace droneflow {

struct BlobDetectorConfig {
    std::uint8_t threshold = 200; // pixel intensity considered "bright"
    int min_region_px = 9;        // smaller regions are noise
};

/// Largest 4-connected bright region in the frame, as a normalized box.
/// Confidence is the fraction of the box's pixels that belong to the
/// region (1.0 for a solid rectangle). Empty when no region reaches the
/// minimum size.
std::optional<BoundingBox> detect_largest_bright_region(const Frame& frame,
                                                        const BlobDetectorConfig& cfg = {},
                                                        const std::string& label = "target");

/// List-returning variant: zero or one box.
std::vector<BoundingBox> builtin_blob_detector(const Frame& frame,
                                               const BlobDetectorConfig& cfg = {},
                                               const std::string& label = "target");

} // namespace droneflow
