#include "kergraph/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "kergraph/errors.hpp"

namespace kergraph {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // trim surrounding whitespace
    const auto begin = field.find_first_not_of(" \t\r");
    const auto end = field.find_last_not_of(" \t\r");
    fields.push_back(begin == std::string::npos
                         ? std::string()
                         : field.substr(begin, end - begin + 1));
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_number(const std::string& field, std::size_t line_no) {
  try {
    std::size_t pos = 0;
    const double value = std::stod(field, &pos);
    if (pos != field.size())
      throw ParseError("line " + std::to_string(line_no) +
                       ": trailing characters in '" + field + "'");
    return value;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line_no) +
                     ": cannot parse '" + field + "' as a number");
  }
}

int parse_label(const std::string& field, std::size_t line_no) {
  const double value = parse_number(field, line_no);
  const double rounded = std::llround(value);
  if (std::abs(value - rounded) > 1e-9)
    throw ParseError("line " + std::to_string(line_no) +
                     ": label '" + field + "' is not an integer");
  return static_cast<int>(rounded);
}

Dataset load_dense(std::ifstream& in, const LabelSpec& label_spec,
                   bool has_header) {
  std::string line;
  std::size_t line_no = 0;
  int label_col = -1;

  if (has_header) {
    if (!std::getline(in, line))
      throw ParseError("line 1: expected header row");
    ++line_no;
    const auto names = split_csv_line(line);
    if (label_spec.kind == LabelSpec::Kind::by_name) {
      const auto it = std::find(names.begin(), names.end(), label_spec.name);
      if (it == names.end())
        throw MissingLabelColumnError("no column named '" + label_spec.name +
                                      "'");
      label_col = static_cast<int>(it - names.begin());
    }
  } else if (label_spec.kind == LabelSpec::Kind::by_name) {
    throw MissingLabelColumnError(
        "label column by name requires a header row");
  }
  if (label_spec.kind == LabelSpec::Kind::by_index)
    label_col = label_spec.index;

  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::size_t width = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    const auto fields = split_csv_line(line);
    if (width == 0) {
      width = fields.size();
      if (label_col >= static_cast<int>(width))
        throw MissingLabelColumnError(
            "label column index " + std::to_string(label_col) +
            " out of range for " + std::to_string(width) + " columns");
    } else if (fields.size() != width) {
      throw RaggedRowsError("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(width) + " fields, got " +
                            std::to_string(fields.size()));
    }

    std::vector<double> row;
    row.reserve(width);
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (static_cast<int>(c) == label_col)
        labels.push_back(parse_label(fields[c], line_no));
      else
        row.push_back(parse_number(fields[c], line_no));
    }
    rows.push_back(std::move(row));
  }

  if (rows.empty()) throw ParseError("no data rows found");

  Dataset ds;
  const std::size_t n = rows.size();
  const std::size_t m = rows.front().size();
  if (m == 0) throw ParseError("rows contain no feature columns");
  ds.X.values.resize(static_cast<Eigen::Index>(m),
                     static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t f = 0; f < m; ++f)
      ds.X.values(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(i)) =
          rows[i][f];
  if (label_col >= 0) ds.labels = std::move(labels);
  return ds;
}

Dataset load_sparse(std::ifstream& in, const LabelSpec& label_spec,
                    bool has_header) {
  if (label_spec.kind != LabelSpec::Kind::none)
    throw MissingLabelColumnError(
        "sparse triplet input has no label column; supply a labels file");

  std::string line;
  std::size_t line_no = 0;
  if (has_header) {
    std::getline(in, line);
    ++line_no;
  }

  struct Triplet {
    long row, col;
    double value;
  };
  std::vector<Triplet> triplets;
  long max_row = -1, max_col = -1;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 3)
      throw ParseError("line " + std::to_string(line_no) +
                       ": expected 'row,col,value'");
    const long row = static_cast<long>(parse_number(fields[0], line_no));
    const long col = static_cast<long>(parse_number(fields[1], line_no));
    if (row < 0 || col < 0)
      throw ParseError("line " + std::to_string(line_no) +
                       ": negative index");
    triplets.push_back({row, col, parse_number(fields[2], line_no)});
    max_row = std::max(max_row, row);
    max_col = std::max(max_col, col);
  }

  if (triplets.empty()) throw ParseError("no data rows found");

  Dataset ds;
  // file rows are samples, columns are features
  ds.X.values = Eigen::MatrixXd::Zero(max_col + 1, max_row + 1);
  for (const auto& t : triplets) ds.X.values(t.col, t.row) += t.value;
  return ds;
}

}  // namespace

Dataset load_dataset(const std::string& path, DatasetFormat format,
                     const LabelSpec& label_spec, bool has_header) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset file: " + path);
  return format == DatasetFormat::dense_csv
             ? load_dense(in, label_spec, has_header)
             : load_sparse(in, label_spec, has_header);
}

std::vector<int> load_labels_file(const std::string& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open labels file: " + path);
  std::string line;
  std::size_t line_no = 0;
  if (has_header) {
    std::getline(in, line);
    ++line_no;
  }
  std::vector<int> labels;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    labels.push_back(parse_label(split_csv_line(line).at(0), line_no));
  }
  if (labels.empty()) throw ParseError("no labels found in " + path);
  return labels;
}

void scale_features(FeatureMatrix& X) {
  const Eigen::Index m = X.n_features();
  const Eigen::Index n = X.n_samples();
  for (Eigen::Index f = 0; f < m; ++f) {
    const double mean = X.values.row(f).mean();
    X.values.row(f).array() -= mean;
    const double sd =
        std::sqrt(X.values.row(f).squaredNorm() / static_cast<double>(n));
    if (sd > 0.0) X.values.row(f) /= sd;
  }
}

}  // namespace kergraph
