#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "droneflow/errors.hpp"

namespace droneflow {

/// Fixed-point decimal with '.' separator; all CSV output goes through this
/// so runs with equal virtual timelines serialize byte-identically.
inline std::string format_fixed(double v, int decimals = 3) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return std::string(buf);
}

class CsvFile {
public:
    CsvFile() = default;

    void open(const std::filesystem::path& path, const std::string& header) {
        out_.open(path);
        if (!out_) {
            throw IoError("cannot open '" + path.string() + "' for writing");
        }
        out_ << header << "\n";
    }

    // Flush per row so monitors tailing the file see live data.
    void row(const std::string& line) {
        out_ << line << "\n";
        out_.flush();
    }
    bool is_open() const { return out_.is_open(); }
    void close() {
        if (out_.is_open()) out_.close();
    }

private:
    std::ofstream out_;
};

} // namespace droneflow
