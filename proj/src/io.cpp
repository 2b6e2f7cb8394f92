#include "hsicinf/io.hpp"

#include "hsicinf/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace hsicinf {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  return out;
}

std::string row_label(std::size_t data_row) {
  // Rows are reported counting the header as row 1.
  return "row " + std::to_string(data_row + 2);
}

nlohmann::json json_extended(double value) {
  if (std::isfinite(value)) return value;
  if (value > 0) return "inf";
  if (value < 0) return "-inf";
  return "nan";
}

}  // namespace

std::vector<std::vector<std::string>> parse_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any_char = false;

  const auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
  };
  const auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
    any_char = false;
  };

  char c;
  while (in.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty()) {
          throw DataError("CSV: stray quote in unquoted field at row " +
                          std::to_string(rows.size() + 1));
        }
        quoted = true;
        any_char = true;
        break;
      case ',':
        end_field();
        any_char = true;
        break;
      case '\r':
        if (in.peek() == '\n') in.get(c);
        end_row();
        break;
      case '\n':
        end_row();
        break;
      default:
        field.push_back(c);
        any_char = true;
        break;
    }
  }
  if (quoted) throw DataError("CSV: unterminated quoted field");
  if (any_char || !field.empty() || !row.empty()) end_row();
  return rows;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += '"';
  return out;
}

std::string format_g17(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string format_g12(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

double parse_double_field(const std::string& field, const std::string& context) {
  if (field.empty()) throw DataError(context + ": empty cell");
  const char* begin = field.c_str();
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(begin, &end);
  if (end != begin + field.size()) {
    throw DataError(context + ": cannot parse '" + field + "' as a number");
  }
  return value;
}

Dataset ingest_csv(const std::filesystem::path& path, const IngestSpec& spec) {
  if (spec.response_columns.empty()) {
    throw DataError("ingest_csv: no response column named");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  const std::vector<std::vector<std::string>> rows = parse_csv(in);
  if (rows.empty()) throw DataError("'" + path.string() + "' is empty");

  const std::vector<std::string>& header = rows.front();
  std::unordered_map<std::string, std::size_t> column_of;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (!column_of.emplace(header[c], c).second) {
      throw DataError("ingest_csv: duplicate column name '" + header[c] + "'");
    }
  }
  const auto find_column = [&](const std::string& name, const char* role) {
    const auto it = column_of.find(name);
    if (it == column_of.end()) {
      throw DataError("ingest_csv: " + std::string(role) + " column '" + name +
                      "' not found in header");
    }
    return it->second;
  };

  std::vector<std::size_t> response_cols;
  for (const std::string& name : spec.response_columns) {
    response_cols.push_back(find_column(name, "response"));
  }
  if (spec.classification && response_cols.size() != 1) {
    throw DataError("ingest_csv: classification expects exactly one response column");
  }
  std::vector<bool> skip(header.size(), false);
  for (std::size_t c : response_cols) skip[c] = true;
  for (const std::string& name : spec.drop_columns) skip[find_column(name, "dropped")] = true;

  std::vector<std::size_t> feature_cols;
  Dataset data;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (!skip[c]) {
      feature_cols.push_back(c);
      data.feature_names.push_back(header[c]);
    }
  }
  if (feature_cols.empty()) throw DataError("ingest_csv: no feature columns left");
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size()) - 1;
  if (n < 1) throw DataError("ingest_csv: no data rows");

  data.x.resize(n, static_cast<Eigen::Index>(feature_cols.size()));
  Eigen::MatrixXd responses(n, static_cast<Eigen::Index>(response_cols.size()));
  for (std::size_t r = 0; r < static_cast<std::size_t>(n); ++r) {
    const std::vector<std::string>& cells = rows[r + 1];
    if (cells.size() != header.size()) {
      throw DataError("ingest_csv: " + row_label(r) + " has " + std::to_string(cells.size()) +
                      " cells, expected " + std::to_string(header.size()));
    }
    for (std::size_t j = 0; j < feature_cols.size(); ++j) {
      data.x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = parse_double_field(
          cells[feature_cols[j]],
          "ingest_csv: " + row_label(r) + ", column '" + header[feature_cols[j]] + "'");
    }
    for (std::size_t j = 0; j < response_cols.size(); ++j) {
      responses(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = parse_double_field(
          cells[response_cols[j]],
          "ingest_csv: " + row_label(r) + ", column '" + header[response_cols[j]] + "'");
    }
  }

  if (spec.classification) {
    ClassLabels labels;
    labels.labels.resize(n);
    int max_label = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double value = responses(i, 0);
      const int label = static_cast<int>(std::lround(value));
      if (!std::isfinite(value) || static_cast<double>(label) != value || label < 1) {
        throw DataError("ingest_csv: " + row_label(static_cast<std::size_t>(i)) +
                        ": label must be a positive integer, got '" + format_g17(value) + "'");
      }
      labels.labels[i] = label;
      max_label = std::max(max_label, label);
    }
    labels.num_classes = spec.num_classes > 0 ? spec.num_classes : max_label;
    data.y = std::move(labels);
  } else if (response_cols.size() == 1) {
    data.y = Eigen::VectorXd(responses.col(0));
  } else {
    data.y = std::move(responses);
  }

  validate(data);
  return data;
}

void write_dataset_csv(const std::filesystem::path& path, const Dataset& data) {
  validate(data);
  std::ofstream out = open_output(path);
  const Eigen::Index n = data.x.rows();
  const Eigen::Index d = data.x.cols();

  for (Eigen::Index j = 0; j < d; ++j) {
    if (j > 0) out << ',';
    out << csv_escape(feature_name(data, j));
  }
  if (std::holds_alternative<ClassLabels>(data.y)) {
    out << ",label";
  } else if (const auto* mat = std::get_if<Eigen::MatrixXd>(&data.y)) {
    for (Eigen::Index q = 0; q < mat->cols(); ++q) out << ",y" << (q + 1);
  } else {
    out << ",y";
  }
  out << '\n';

  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      if (j > 0) out << ',';
      out << format_g17(data.x(i, j));
    }
    if (const auto* labels = std::get_if<ClassLabels>(&data.y)) {
      out << ',' << labels->labels[i];
    } else if (const auto* mat = std::get_if<Eigen::MatrixXd>(&data.y)) {
      for (Eigen::Index q = 0; q < mat->cols(); ++q) out << ',' << format_g17((*mat)(i, q));
    } else {
      out << ',' << format_g17(std::get<Eigen::VectorXd>(data.y)[i]);
    }
    out << '\n';
  }
  if (!out) throw DataError("failed while writing '" + path.string() + "'");
}

void write_report_csv(const std::filesystem::path& path, const InferenceReport& report) {
  std::ofstream out = open_output(path);
  out << "feature_index,feature_name,hsic,variance,v_lower,v_upper,p_value,reject\n";
  for (const FeatureInference& row : report.features) {
    out << row.feature_index << ',' << csv_escape(row.feature_name) << ','
        << format_g17(row.hsic) << ',' << format_g17(row.variance) << ','
        << format_g17(row.v_lower) << ',' << format_g17(row.v_upper) << ','
        << format_g17(row.p_value) << ',' << (row.reject ? 1 : 0) << '\n';
  }
  if (!out) throw DataError("failed while writing '" + path.string() + "'");
}

void write_report_json(const std::filesystem::path& path, const InferenceReport& report) {
  nlohmann::json doc;
  doc["method"] = method_name(report.method);
  doc["seed"] = report.seed;
  doc["k"] = report.k;
  doc["block_size"] = report.block_size;
  doc["alpha"] = report.alpha;
  doc["shrinkage"] = report.shrinkage;
  doc["split_samples"] = report.split_samples;
  doc["split_blocks"] = report.split_blocks;
  doc["warnings"] = report.warnings;
  doc["features"] = nlohmann::json::array();
  for (const FeatureInference& row : report.features) {
    doc["features"].push_back({{"feature_index", row.feature_index},
                               {"feature_name", row.feature_name},
                               {"hsic", row.hsic},
                               {"variance", row.variance},
                               {"v_lower", json_extended(row.v_lower)},
                               {"v_upper", json_extended(row.v_upper)},
                               {"p_value", row.p_value},
                               {"reject", row.reject}});
  }
  std::ofstream out = open_output(path);
  out << doc.dump(2) << '\n';
  if (!out) throw DataError("failed while writing '" + path.string() + "'");
}

std::string format_report_table(const InferenceReport& report) {
  std::size_t name_width = std::string("feature").size();
  for (const FeatureInference& row : report.features) {
    name_width = std::max(name_width, row.feature_name.size());
  }

  std::ostringstream out;
  out << "method " << method_name(report.method) << ", k=" << report.k
      << ", block size " << report.block_size << ", alpha " << format_g12(report.alpha)
      << ", seed " << report.seed << '\n';
  if (!report.split_samples.empty()) {
    out << "split samples:";
    for (Eigen::Index s : report.split_samples) out << ' ' << s;
    out << " (blocks:";
    for (Eigen::Index b : report.split_blocks) out << ' ' << b;
    out << ")\n";
  }
  out << '\n';
  out << "  " << "feature";
  out << std::string(name_width - std::string("feature").size(), ' ') << "  p-value\n";
  out << "  " << std::string(name_width, '-') << "  " << std::string(14, '-') << '\n';
  for (const FeatureInference& row : report.features) {
    out << "  " << row.feature_name << std::string(name_width - row.feature_name.size(), ' ')
        << "  " << format_g12(row.p_value);
    if (row.reject) out << "  *";
    out << '\n';
  }
  out << '\n'
      << "* p-value below alpha = " << format_g12(report.alpha) << '\n';
  for (const std::string& warning : report.warnings) {
    out << "warning: " << warning << '\n';
  }
  return out.str();
}

}  // namespace hsicinf
