#pragma once

#include "hawkes/lln.hpp"

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

namespace hawkes {

// One row per T: T,v,limit,mean,mean_se,mse,mse_se,exceedance,negative_fraction,replications.
std::string report_to_csv(const ConvergenceReport& report);

nlohmann::json report_to_json(const ConvergenceReport& report);

// Log-log plot of MSE against T with a 1/T guide through the first point and
// the analytic limit in the caption. Byte-identical for identical reports.
// Throws std::invalid_argument for fewer than two rows.
std::string render_svg(const ConvergenceReport& report);

// Renders and writes atomically.
void emit_plot(const ConvergenceReport& report, const std::filesystem::path& path);

// Points at which an atomic write can be made to fail in tests.
enum class WriteFault {
    none,
    after_partial_write,  // temp file holds half the content, then throw
    before_rename,        // temp file complete, then throw
};

/// Writes content to a temporary sibling of path and renames it into place.
/// On any failure the temporary is removed and path is left untouched.
void write_file_atomic(const std::filesystem::path& path, std::string_view content,
                       WriteFault fault = WriteFault::none);

std::string read_file(const std::filesystem::path& path);

}  // namespace hawkes
