#pragma once

// SweepTable: the one output type of every sweep. Numeric cells only; a cell
// that could not be computed holds NaN and has a matching entry in `errors`.

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dscale/errors.hpp"

namespace dscale {

class IoError : public Error {
 public:
  using Error::Error;
};

struct Column {
  std::string name;
  std::string unit;
};

struct CellError {
  std::size_t row;
  std::string column;
  std::string message;
};

class SweepTable {
 public:
  SweepTable() = default;
  explicit SweepTable(std::vector<Column> columns);

  const std::vector<Column>& columns() const { return columns_; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }
  const std::vector<CellError>& errors() const { return errors_; }
  const std::vector<std::pair<std::string, std::string>>& metadata() const { return metadata_; }

  std::size_t row_count() const { return rows_.size(); }
  std::size_t column_count() const { return columns_.size(); }

  std::optional<std::size_t> column_index(const std::string& name) const;
  /// Throws std::out_of_range for unknown names.
  std::size_t require_column(const std::string& name) const;
  double at(std::size_t row, const std::string& column) const;
  std::vector<double> column_values(const std::string& name) const;

  void add_column(Column c, std::vector<double> values);
  void add_row(std::vector<double> cells);
  /// Marks the cell NaN and records why.
  void set_error(std::size_t row, const std::string& column, std::string message);
  void set_metadata(const std::string& key, const std::string& value);
  std::optional<std::string> metadata_value(const std::string& key) const;

 private:
  std::vector<Column> columns_;
  std::vector<std::vector<double>> rows_;
  std::vector<CellError> errors_;
  std::vector<std::pair<std::string, std::string>> metadata_;
};

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Nine significant digits, shortest form, locale independent. NaN -> "NaN".
std::string format_number(double v);
/// The double closest to format_number(v).
double round_to_output_precision(double v);

std::string to_csv(const SweepTable& t);
std::string to_json(const SweepTable& t);
SweepTable parse_csv(const std::string& text);
SweepTable parse_json(const std::string& text);
/// "row,column,message" lines; empty when the table has no errors.
std::string errors_csv(const SweepTable& t);
/// Two-column whitespace-separated (x, y) data with a `#` header line.
std::string plot_series(const SweepTable& t, const std::string& x, const std::string& y);

/// Write via a temporary file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

struct BoundSummary {
  std::vector<double> ratios;  // |eps_corr| / |delta_area| per row, NaN if skipped
  double constant = 0.0;       // smallest C with |eps_corr| <= C |delta_area|
  std::size_t rows_considered = 0;
  std::vector<std::size_t> unbounded_rows;
};

/// Rows count when `stable` and `valid` columns (if present) are nonzero and
/// both quantities are finite. Zero area with nonzero energy is unbounded.
BoundSummary bound_check(const SweepTable& t, const std::string& eps_column = "eps_corr",
                         const std::string& area_column = "delta_area");

/// Copy of `t` with a `bound_ratio` column appended.
SweepTable with_bound_ratio(const SweepTable& t, const BoundSummary& s);

}  // namespace dscale
