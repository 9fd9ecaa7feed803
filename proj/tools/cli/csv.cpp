#include "csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

namespace isotropy::cli {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool needs_quotes(std::string_view s) {
  return s.find_first_of(",\"\r\n") != std::string_view::npos || (!s.empty() && (s.front() == ' ' || s.back() == ' '));
}

}  // namespace

CsvTable parse_csv(std::istream& in) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;  // distinguishes an empty last field from a blank line
  std::size_t line = 1;
  std::size_t quote_line = 0;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    if (record.empty() && !field_started && field.empty()) return;  // blank line
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };

  char c = 0;
  while (in.get(c)) {
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!trim(field).empty()) {
          throw DataError("line " + std::to_string(line) + ": quote inside an unquoted field");
        }
        field.clear();
        in_quotes = true;
        field_started = true;
        quote_line = line;
        break;
      case ',':
        end_field();
        field_started = true;
        break;
      case '\r':
        if (in.peek() == '\n') in.get(c);
        end_record();
        ++line;
        break;
      case '\n':
        end_record();
        ++line;
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (in_quotes) {
    throw DataError("line " + std::to_string(quote_line) + ": unterminated quoted field");
  }
  end_record();

  if (records.empty()) throw DataError("empty CSV input");
  CsvTable table;
  table.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.header.size()) {
      throw DataError("row " + std::to_string(r) + ": expected " + std::to_string(table.header.size()) +
                      " fields, found " + std::to_string(records[r].size()));
    }
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open input file '" + path + "'");
  return parse_csv(in);
}

void write_csv(std::ostream& out, const CsvTable& table) {
  auto write_record = [&](const std::vector<std::string>& rec) {
    for (std::size_t i = 0; i < rec.size(); ++i) {
      if (i) out << ',';
      if (needs_quotes(rec[i])) {
        out << '"';
        for (char c : rec[i]) {
          if (c == '"') out << '"';
          out << c;
        }
        out << '"';
      } else {
        out << rec[i];
      }
    }
    out << "\r\n";
  };
  write_record(table.header);
  for (const auto& r : table.rows) write_record(r);
}

std::string format_double(double value) {
  if (std::isnan(value)) return "";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view text, std::size_t row, std::string_view column) {
  const std::string_view t = trim(text);
  auto fail = [&](const std::string& what) {
    return DataError("row " + std::to_string(row) + ", column '" + std::string(column) + "': " + what);
  };
  if (t.empty()) throw fail("empty value");
  std::string_view digits = t;
  if (digits.front() == '+') digits.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (res.ec != std::errc() || res.ptr != digits.data() + digits.size()) {
    throw fail("not a number: '" + std::string(t) + "'");
  }
  if (!std::isfinite(v)) throw fail("non-finite value '" + std::string(t) + "'");
  return v;
}

Dataset load_dataset(const CsvTable& table, const std::optional<std::string>& label_column) {
  std::optional<std::size_t> label_index;
  if (label_column) {
    const auto it = std::find(table.header.begin(), table.header.end(), *label_column);
    if (it == table.header.end()) throw DataError("label column '" + *label_column + "' not found in header");
    label_index = static_cast<std::size_t>(it - table.header.begin());
  }
  std::vector<std::size_t> feature_cols;
  std::vector<std::string> names;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (label_index && c == *label_index) continue;
    feature_cols.push_back(c);
    names.push_back(table.header[c]);
  }
  if (feature_cols.empty()) throw DataError("no feature columns");
  if (table.rows.empty()) throw DataError("no data rows");

  Matrix data(static_cast<Index>(table.rows.size()), static_cast<Index>(feature_cols.size()));
  std::optional<std::vector<long long>> labels;
  if (label_index) labels.emplace(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& rec = table.rows[r];
    for (std::size_t j = 0; j < feature_cols.size(); ++j) {
      data(static_cast<Index>(r), static_cast<Index>(j)) =
          parse_number(rec[feature_cols[j]], r + 1, table.header[feature_cols[j]]);
    }
    if (label_index) {
      const std::string_view t = trim(rec[*label_index]);
      long long v = 0;
      const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
      if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
        throw DataError("row " + std::to_string(r + 1) + ", column '" + *label_column + "': label is not an integer: '" +
                        std::string(t) + "'");
      }
      (*labels)[r] = v;
    }
  }
  return Dataset{PointCloud(std::move(data), std::move(names)), std::move(labels), label_column.value_or("")};
}

ClusterAssignment contiguous_labels(const std::vector<long long>& labels, std::vector<long long>& values) {
  std::map<long long, int> ids;
  for (long long v : labels) ids.emplace(v, 0);
  values.clear();
  int next = 0;
  for (auto& [v, id] : ids) {
    id = next++;
    values.push_back(v);
  }
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = ids.at(labels[i]);
  return ClusterAssignment(std::move(out));
}

CsvTable cloud_table(const Matrix& data, const std::vector<std::string>& names,
                     const std::optional<std::vector<long long>>& labels, const std::string& label_name) {
  CsvTable t;
  t.header = names;
  if (labels) t.header.push_back(label_name);
  t.rows.reserve(static_cast<std::size_t>(data.rows()));
  for (Index i = 0; i < data.rows(); ++i) {
    std::vector<std::string> rec;
    rec.reserve(t.header.size());
    for (Index j = 0; j < data.cols(); ++j) rec.push_back(format_double(data(i, j)));
    if (labels) rec.push_back(std::to_string((*labels)[static_cast<std::size_t>(i)]));
    t.rows.push_back(std::move(rec));
  }
  return t;
}

}  // namespace isotropy::cli
