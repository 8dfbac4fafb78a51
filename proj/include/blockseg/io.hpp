#pragma once

#include <string>

#include "blockseg/types.hpp"

namespace blockseg {

// Dense numeric matrix file, one row per line, no header. Tab-separated by
// default, comma-separated when the filename ends in .csv.
ObservationMatrix load_matrix(const std::string& path, const SegConfig& cfg);
void save_matrix(const ObservationMatrix& y, const std::string& path);

// shortest decimal representation that round-trips (used by every writer)
std::string format_double(double x);

}  // namespace blockseg
