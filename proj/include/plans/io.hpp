#pragma once

// File formats: matrices as header-less CSV (one row per line), population
// models as JSON {"p": [...], "u": [[...], ...]}. Parse failures throw DataError.

#include <iosfwd>
#include <string>
#include <vector>

#include "plans/matrix.hpp"
#include "plans/reward_model.hpp"

namespace plans::io {

DenseMatrix read_matrix_csv(std::istream& in);
DenseMatrix read_matrix_csv(const std::string& path);
/// Round-trippable (%.17g) CSV.
void write_matrix_csv(std::ostream& out, const DenseMatrix& m);
void write_matrix_csv(const std::string& path, const DenseMatrix& m);

PopulationModel read_model_json(std::istream& in);
PopulationModel read_model_json(const std::string& path);
void write_model_json(std::ostream& out, const PopulationModel& model);
void write_model_json(const std::string& path, const PopulationModel& model);

/// Loss matrix from either a matrix CSV or a model JSON (detected by content).
LossMatrix load_loss_matrix(const std::string& path);

/// Binary users x K rating table as CSV.
std::vector<std::vector<int>> read_ratings_csv(const std::string& path);
/// One group label per line; blank lines are skipped.
std::vector<std::string> read_group_labels(const std::string& path);

/// Whole file as a string; throws DataError when unreadable.
std::string read_file(const std::string& path);
/// Writes `content` to `path`; throws DataError on failure.
void write_file(const std::string& path, const std::string& content);

}  // namespace plans::io
