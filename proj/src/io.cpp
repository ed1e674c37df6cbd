#include "plans/io.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "plans/errors.hpp"

namespace plans::io {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, std::size_t line_no) {
  double v = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw DataError("line " + std::to_string(line_no) + ": not a number: '" + s + "'");
  }
  return v;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return in;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

DenseMatrix read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    for (const auto& field : split_commas(line)) row.push_back(parse_double(field, line_no));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw DataError("line " + std::to_string(line_no) + ": row length differs from the first row");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("matrix CSV is empty");
  try {
    return DenseMatrix::from_rows(rows);
  } catch (const DimensionError& e) {
    throw DataError(e.what());
  }
}

DenseMatrix read_matrix_csv(const std::string& path) {
  auto in = open_in(path);
  return read_matrix_csv(in);
}

void write_matrix_csv(std::ostream& out, const DenseMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_matrix_csv(const std::string& path, const DenseMatrix& m) {
  std::ostringstream os;
  write_matrix_csv(os, m);
  write_file(path, os.str());
}

PopulationModel read_model_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
    return PopulationModel(j.at("p").get<std::vector<double>>(),
                           j.at("u").get<std::vector<std::vector<double>>>());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model JSON: ") + e.what());
  }
}

PopulationModel read_model_json(const std::string& path) {
  auto in = open_in(path);
  return read_model_json(in);
}

void write_model_json(std::ostream& out, const PopulationModel& model) {
  nlohmann::json j;
  j["p"] = model.weights();
  j["u"] = model.like_probabilities();
  out << j.dump(2) << '\n';
}

void write_model_json(const std::string& path, const PopulationModel& model) {
  std::ostringstream os;
  write_model_json(os, model);
  write_file(path, os.str());
}

LossMatrix load_loss_matrix(const std::string& path) {
  const std::string text = read_file(path);
  const std::string head = trim(text.substr(0, std::min<std::size_t>(text.size(), 64)));
  std::istringstream in(text);
  if (!head.empty() && head.front() == '{') return build_loss_matrix(read_model_json(in));
  return LossMatrix(read_matrix_csv(in));
}

std::vector<std::vector<int>> read_ratings_csv(const std::string& path) {
  auto in = open_in(path);
  std::vector<std::vector<int>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<int> row;
    for (const auto& field : split_commas(line)) {
      if (field == "0") {
        row.push_back(0);
      } else if (field == "1") {
        row.push_back(1);
      } else {
        throw DataError("line " + std::to_string(line_no) + ": ratings must be 0 or 1, got '" + field + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw DataError("line " + std::to_string(line_no) + ": row length differs from the first row");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("ratings CSV is empty");
  return rows;
}

std::vector<std::string> read_group_labels(const std::string& path) {
  auto in = open_in(path);
  std::vector<std::string> labels;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (!t.empty()) labels.push_back(std::move(t));
  }
  return labels;
}

std::string read_file(const std::string& path) {
  auto in = open_in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  out << content;
  if (!out) throw DataError("write failed for " + path);
}

}  // namespace plans::io
