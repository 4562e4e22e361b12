#pragma once

#include <filesystem>
#include <span>
#include <string>

#include <json.hpp>

#include "spectra_lab/spectra.hpp"

namespace spectra_lab {

using Json = nlohmann::ordered_json;

// 17 significant digits; NaN and infinities become null.
std::string format_double(double v);

// JSON text with every floating-point number printed by format_double.
std::string dump_json(const Json& value, int indent = 2);

// bin_left,bin_right,count with LF line endings.
std::string histogram_csv(std::span<const HistogramBin> bins);

// One value per line, 17 significant digits.
std::string spectrum_text(std::span<const double> values);

// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace spectra_lab
