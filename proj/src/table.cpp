#include "dscale/table.hpp"

#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <unistd.h>

namespace dscale {

SweepTable::SweepTable(std::vector<Column> columns) : columns_(std::move(columns)) {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    for (std::size_t j = i + 1; j < columns_.size(); ++j)
      if (columns_[i].name == columns_[j].name)
        throw std::invalid_argument("SweepTable: duplicate column " + columns_[i].name);
}

std::optional<std::size_t> SweepTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i].name == name) return i;
  return std::nullopt;
}

std::size_t SweepTable::require_column(const std::string& name) const {
  if (auto i = column_index(name)) return *i;
  throw std::out_of_range("SweepTable: no column " + name);
}

double SweepTable::at(std::size_t row, const std::string& column) const {
  return rows_.at(row).at(require_column(column));
}

std::vector<double> SweepTable::column_values(const std::string& name) const {
  const std::size_t c = require_column(name);
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) out.push_back(r[c]);
  return out;
}

void SweepTable::add_column(Column c, std::vector<double> values) {
  if (column_index(c.name)) throw std::invalid_argument("SweepTable: duplicate column " + c.name);
  if (values.size() != rows_.size()) throw std::invalid_argument("SweepTable: column length mismatch");
  columns_.push_back(std::move(c));
  for (std::size_t i = 0; i < rows_.size(); ++i) rows_[i].push_back(values[i]);
}

void SweepTable::add_row(std::vector<double> cells) {
  if (cells.size() != columns_.size())
    throw std::invalid_argument("SweepTable: row has " + std::to_string(cells.size()) + " cells, expected " +
                                std::to_string(columns_.size()));
  rows_.push_back(std::move(cells));
}

void SweepTable::set_error(std::size_t row, const std::string& column, std::string message) {
  rows_.at(row).at(require_column(column)) = kNaN;
  errors_.push_back({row, column, std::move(message)});
}

void SweepTable::set_metadata(const std::string& key, const std::string& value) {
  for (auto& kv : metadata_)
    if (kv.first == key) {
      kv.second = value;
      return;
    }
  metadata_.emplace_back(key, value);
}

std::optional<std::string> SweepTable::metadata_value(const std::string& key) const {
  for (const auto& kv : metadata_)
    if (kv.first == key) return kv.second;
  return std::nullopt;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

double round_to_output_precision(double v) {
  if (!std::isfinite(v)) return v;
  const std::string s = format_number(v);
  double out = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

namespace {

std::string escape_csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

double parse_number(const std::string& s) {
  if (s == "NaN" || s == "nan") return kNaN;
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string to_csv(const SweepTable& t) {
  std::string out;
  for (const auto& [k, v] : t.metadata()) out += "# " + k + "=" + v + "\n";
  for (std::size_t c = 0; c < t.column_count(); ++c) {
    if (c) out += ',';
    out += escape_csv_field(t.columns()[c].name + "[" + t.columns()[c].unit + "]");
  }
  out += '\n';
  for (const auto& row : t.rows()) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_number(row[c]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const SweepTable& t) {
  nlohmann::ordered_json j;
  j["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.metadata()) j["metadata"][k] = v;
  j["columns"] = nlohmann::ordered_json::array();
  for (const auto& c : t.columns()) j["columns"].push_back({{"name", c.name}, {"unit", c.unit}});
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : t.rows()) {
    auto r = nlohmann::ordered_json::array();
    for (double v : row) {
      // JSON has no NaN; undefined cells become null.
      if (std::isfinite(v))
        r.push_back(round_to_output_precision(v));
      else
        r.push_back(nullptr);
    }
    j["rows"].push_back(std::move(r));
  }
  j["errors"] = nlohmann::ordered_json::array();
  for (const auto& e : t.errors())
    j["errors"].push_back({{"row", e.row}, {"column", e.column}, {"message", e.message}});
  return j.dump(1) + "\n";
}

SweepTable parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<Column> cols;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto body = line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1);
      const auto eq = body.find('=');
      if (eq != std::string::npos) meta.emplace_back(body.substr(0, eq), body.substr(eq + 1));
      continue;
    }
    for (const auto& f : split(line, ',')) {
      const auto lb = f.find('[');
      if (lb == std::string::npos || f.back() != ']')
        cols.push_back({f, ""});
      else
        cols.push_back({f.substr(0, lb), f.substr(lb + 1, f.size() - lb - 2)});
    }
    break;
  }
  if (cols.empty()) throw std::invalid_argument("parse_csv: no header row");
  SweepTable t(cols);
  for (const auto& [k, v] : meta) t.set_metadata(k, v);
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> cells;
    for (const auto& f : split(line, ',')) cells.push_back(parse_number(f));
    t.add_row(std::move(cells));
  }
  return t;
}

SweepTable parse_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  std::vector<Column> cols;
  for (const auto& c : j.at("columns")) cols.push_back({c.at("name"), c.at("unit")});
  SweepTable t(cols);
  if (j.contains("metadata"))
    for (const auto& [k, v] : j.at("metadata").items()) t.set_metadata(k, v.get<std::string>());
  for (const auto& r : j.at("rows")) {
    std::vector<double> cells;
    for (const auto& v : r) cells.push_back(v.is_null() ? kNaN : v.get<double>());
    t.add_row(std::move(cells));
  }
  return t;
}

std::string errors_csv(const SweepTable& t) {
  if (t.errors().empty()) return {};
  std::string out = "row,column,message\n";
  for (const auto& e : t.errors())
    out += std::to_string(e.row) + "," + escape_csv_field(e.column) + "," + escape_csv_field(e.message) + "\n";
  return out;
}

std::string plot_series(const SweepTable& t, const std::string& x, const std::string& y) {
  const std::size_t cx = t.require_column(x), cy = t.require_column(y);
  std::string out = "# " + x + "[" + t.columns()[cx].unit + "] " + y + "[" + t.columns()[cy].unit + "]\n";
  for (const auto& row : t.rows()) out += format_number(row[cx]) + " " + format_number(row[cy]) + "\n";
  return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw IoError("cannot rename " + tmp.string() + " to " + path + ": " + ec.message());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

BoundSummary bound_check(const SweepTable& t, const std::string& eps_column, const std::string& area_column) {
  const std::size_t ce = t.require_column(eps_column);
  const std::size_t ca = t.require_column(area_column);
  const auto cs = t.column_index("stable");
  const auto cv = t.column_index("valid");

  BoundSummary s;
  s.ratios.assign(t.row_count(), kNaN);
  for (std::size_t i = 0; i < t.row_count(); ++i) {
    const auto& row = t.rows()[i];
    if (cs && !(row[*cs] != 0.0)) continue;
    if (cv && !(row[*cv] != 0.0)) continue;
    const double e = std::abs(row[ce]);
    const double a = std::abs(row[ca]);
    if (!std::isfinite(e) || !std::isfinite(a)) continue;
    ++s.rows_considered;
    if (e == 0.0) {
      s.ratios[i] = 0.0;
    } else if (a == 0.0) {
      s.ratios[i] = std::numeric_limits<double>::infinity();
      s.unbounded_rows.push_back(i);
      continue;
    } else {
      s.ratios[i] = e / a;
    }
    s.constant = std::max(s.constant, s.ratios[i]);
  }
  return s;
}

SweepTable with_bound_ratio(const SweepTable& t, const BoundSummary& s) {
  SweepTable out = t;
  out.add_column({"bound_ratio", "1"}, s.ratios);
  out.set_metadata("bound_constant", format_number(s.constant));
  out.set_metadata("bound_rows_considered", std::to_string(s.rows_considered));
  out.set_metadata("bound_unbounded_rows", std::to_string(s.unbounded_rows.size()));
  return out;
}

}  // namespace dscale
