#pragma once

#include <string>

#include "smolin/analysis.hpp"
#include "smolin/linalg.hpp"
#include "smolin/tomography.hpp"

namespace smolin {

// Density-matrix file: {"n_qubits": n, "re": [[..]], "im": [[..]]} row-major.
// Loaders verify shape, Hermiticity, and unit trace.
void save_density_json(const Mat& rho, const std::string& path);
Mat load_density_json(const std::string& path);

// Count files. CSV: header `setting,outcome,count`, one row per outcome; rows
// with the same product basis merge into one block (summing repeats). The
// JSON mirror carries optional metadata and the same rows.
void save_counts_csv(const CountSet& set, const std::string& path);
void save_counts_json(const CountSet& set, const std::string& path);
CountSet load_counts_csv(const std::string& path);
CountSet load_counts_json(const std::string& path);
CountSet load_counts(const std::string& path); // dispatch on extension

std::string report_to_json(const AnalysisReport& report);

} // namespace smolin
