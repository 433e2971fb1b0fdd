#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "kkd/field.hpp"
#include "kkd/phi_model.hpp"

namespace kkd {

// Shortest round-trip scientific notation ("nan"/"inf" for non-finite).
std::string format_number(double x);

// Short "%g" form for labels and file names, e.g. 2 -> "2", 1.5 -> "1.5".
std::string format_label(double x);
// "<run>_t<time>.tsv" with the time in fixed notation, six decimals.
std::string snapshot_filename(const std::string& run, double t);

// Columns x, u, v, r, W, Z; Z is "nan" where v = 0.
void write_snapshot(const std::filesystem::path& path, const StateField& f, const PhiModel& phi);

// Tab-separated table with '#'-prefixed header lines.
void write_table(const std::filesystem::path& path, const std::vector<std::string>& comments,
                 const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& rows);
std::string format_table(const std::vector<std::string>& comments,
                         const std::vector<std::string>& columns,
                         const std::vector<std::vector<double>>& rows);

// Reads rows of whitespace-separated numbers, skipping '#' comments.
std::vector<std::vector<double>> read_table(const std::filesystem::path& path);

}  // namespace kkd
