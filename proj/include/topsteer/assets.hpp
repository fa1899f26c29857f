#pragma once

#include <filesystem>

namespace topsteer {

class KnotoidTable;
class KnotTable;

/// Directory holding knotoid_table.csv, knot_table.csv, protein_angles.csv
/// and the curve assets. Resolution order: set_data_dir, the
/// TOPSTEER_DATA_DIR environment variable, the compiled-in default.
std::filesystem::path data_dir();
void set_data_dir(const std::filesystem::path& dir);

/// Tables loaded from data_dir() on first use (reloaded if the directory changes).
const KnotoidTable& default_knotoid_table();
const KnotTable& default_knot_table();

}  // namespace topsteer
