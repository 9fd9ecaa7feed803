#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "isotropy/core.hpp"

namespace isotropy::cli {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// RFC 4180: comma separated, optional double-quoted fields with "" escapes,
/// CRLF or LF line ends, embedded newlines inside quotes. The first record is
/// the header; every record must have the header's field count.
CsvTable parse_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

void write_csv(std::ostream& out, const CsvTable& table);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double value);

/// Parses a finite double; row/column are used only in the error message.
double parse_number(std::string_view text, std::size_t row, std::string_view column);

/// Numeric feature matrix plus an optional integer label column.
struct Dataset {
  PointCloud cloud;
  std::optional<std::vector<long long>> labels;
  std::string label_column;
};

/// Every column except `label_column` must be numeric. Data rows are numbered
/// from 1 in error messages.
Dataset load_dataset(const CsvTable& table, const std::optional<std::string>& label_column);

/// Maps arbitrary integer labels to contiguous ids 0..k-1 in ascending order
/// of the original values. `values` receives the original value of each id.
ClusterAssignment contiguous_labels(const std::vector<long long>& labels, std::vector<long long>& values);

/// Writes a cloud (with an optional trailing label column) as CSV.
CsvTable cloud_table(const Matrix& data, const std::vector<std::string>& names,
                     const std::optional<std::vector<long long>>& labels = std::nullopt,
                     const std::string& label_name = "label");

}  // namespace isotropy::cli
