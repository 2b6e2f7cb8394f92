#pragma once

#include "hsicinf/dataset.hpp"
#include "hsicinf/pipeline.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace hsicinf {

/// CSV cells of an entire stream (RFC 4180 quoting: quoted fields may
/// contain commas, doubled quotes, and newlines; CRLF and LF both accepted).
std::vector<std::vector<std::string>> parse_csv(std::istream& in);

/// Field quoted if it contains a comma, quote, or newline.
std::string csv_escape(const std::string& field);

/// Shortest exact decimal round-trip is not needed; %.17g always
/// round-trips doubles. Infinities print as inf/-inf.
std::string format_g17(double value);

/// %.12g, for human-readable output.
std::string format_g12(double value);

/// Strict double parse of a whole field; understands inf/-inf. The context
/// string is prepended to error messages.
double parse_double_field(const std::string& field, const std::string& context);

/// How to interpret the columns of an ingested CSV: named response
/// column(s), optional label mode, columns to ignore. Every remaining
/// column is a feature and must be numeric.
struct IngestSpec {
  std::vector<std::string> response_columns;
  bool classification = false;
  /// 0 means: infer as the largest label seen.
  int num_classes = 0;
  std::vector<std::string> drop_columns;
};

/// Read a headered CSV into a Dataset. Rows with unparseable cells, ragged
/// rows, and missing columns are hard errors with row/column diagnostics;
/// nothing is imputed.
Dataset ingest_csv(const std::filesystem::path& path, const IngestSpec& spec);

/// Inverse of ingest_csv for synthetic data: features under their names
/// (default x1..xd), then the response as y / y1..yq / label. Values are
/// written with format_g17 so a round trip is bit-identical.
void write_dataset_csv(const std::filesystem::path& path, const Dataset& data);

void write_report_csv(const std::filesystem::path& path, const InferenceReport& report);
void write_report_json(const std::filesystem::path& path, const InferenceReport& report);

/// Two-column table (feature, p-value at 12 significant digits) with a
/// metadata header, suitable for a terminal.
std::string format_report_table(const InferenceReport& report);

}  // namespace hsicinf
