#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "behavior_metrics/behaviors.hpp"

namespace bmetrics {

// Shortest decimal that parses back to the same double.
std::string format_roundtrip(double x);
// 12 significant digits, for console output.
std::string format_console(double x);

/// Trajectory CSV: one sample per row, q comma-separated reals, optional header
/// row (any first row that is not numeric, conventionally v1,...,vq).
Trajectory read_trajectory_csv(std::istream& is);
Trajectory read_trajectory_csv(const std::filesystem::path& path);
void write_trajectory_csv(std::ostream& os, const Trajectory& w);

/// Kernel file: first line "p q ell", then ell+1 blocks of p lines with q reals,
/// block i holding R_i. Blank lines and lines starting with '#' are ignored.
KernelRep read_kernel(std::istream& is);
KernelRep read_kernel(const std::filesystem::path& path);
void write_kernel(std::ostream& os, const KernelRep& r);

// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

} // namespace bmetrics
