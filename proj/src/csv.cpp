#include "etpa/csv.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "etpa/errors.hpp"

namespace etpa::cli {

namespace {

const std::set<std::string> kKnownColumns = {
    "x_kind", "x_value", "counts", "singles_a", "singles_b",
    "coincidences", "duration_s", "attenuation", "dark_counts"};

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  cells.push_back(trim(cur));
  return cells;
}

bool parse_number(const std::string& text, double* out) {
  if (text.empty()) return false;
  char* end = nullptr;
  double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || !std::isfinite(v)) return false;
  *out = v;
  return true;
}

MeasurementTable parse_stream(std::istream& in) {
  std::vector<std::string> issues;
  auto at = [&issues](int line_no, const std::string& msg) {
    issues.push_back("line " + std::to_string(line_no) + ": " + msg);
  };

  std::string line;
  int line_no = 0;

  // schema line
  bool have_schema = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (trim(line) != "# schema=1") at(line_no, "expected '# schema=1' as first content");
    have_schema = true;
    break;
  }
  if (!have_schema) throw validation_error("empty input, expected '# schema=1'");

  // header
  std::map<std::string, size_t> col;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto names = split_csv(t);
    for (size_t i = 0; i < names.size(); ++i) {
      if (!kKnownColumns.count(names[i])) {
        at(line_no, "unknown column '" + names[i] + "'");
      } else if (!col.emplace(names[i], i).second) {
        at(line_no, "duplicate column '" + names[i] + "'");
      }
    }
    break;
  }

  MeasurementTable table;
  for (const char* req : {"x_kind", "x_value", "duration_s"}) {
    if (!col.count(req)) issues.push_back(std::string("missing required column '") + req + "'");
  }
  table.has_counts = col.count("counts") > 0;
  const int triple = int(col.count("singles_a")) + int(col.count("singles_b")) +
                     int(col.count("coincidences"));
  table.has_triple = triple == 3;
  if (triple > 0 && triple < 3)
    issues.push_back("singles_a/singles_b/coincidences must appear together");
  if (!table.has_counts && !table.has_triple)
    issues.push_back("need a counts column or the singles/coincidences triple");
  if (!issues.empty()) throw validation_error(issues);

  const size_t n_cols = col.size();
  auto cell = [&col](const std::vector<std::string>& cells, const char* name) {
    return cells[col.at(name)];
  };
  auto num_at = [&](const std::vector<std::string>& cells, const char* name, int ln,
                    double* out) {
    if (parse_number(cell(cells, name), out)) return true;
    at(ln, std::string("column '") + name + "': cannot parse '" + cell(cells, name) + "'");
    return false;
  };

  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto cells = split_csv(t);
    if (cells.size() != n_cols) {
      at(line_no, "expected " + std::to_string(n_cols) + " fields, got " +
                      std::to_string(cells.size()));
      continue;
    }
    MeasurementRow row;
    row.x_kind = cell(cells, "x_kind");
    if (row.x_kind.empty()) at(line_no, "empty x_kind");
    bool ok = num_at(cells, "x_value", line_no, &row.x_value);
    double v = 0;
    if (table.has_counts && num_at(cells, "counts", line_no, &v)) row.counts = v;
    if (table.has_triple) {
      if (num_at(cells, "singles_a", line_no, &v)) row.singles_a = v;
      if (num_at(cells, "singles_b", line_no, &v)) row.singles_b = v;
      if (num_at(cells, "coincidences", line_no, &v)) row.coincidences = v;
    }
    ok = num_at(cells, "duration_s", line_no, &row.duration) && ok;
    if (col.count("attenuation")) num_at(cells, "attenuation", line_no, &row.attenuation);
    if (col.count("dark_counts")) num_at(cells, "dark_counts", line_no, &row.dark_counts);

    if (ok) {
      if (row.duration <= 0) at(line_no, "duration_s must be > 0");
      if (row.attenuation <= 0 || row.attenuation > 1)
        at(line_no, "attenuation must be in (0, 1]");
      for (auto [name, val] : {std::pair<const char*, std::optional<double>>
               {"counts", row.counts}, {"singles_a", row.singles_a},
               {"singles_b", row.singles_b}, {"coincidences", row.coincidences}}) {
        if (val && *val < 0) at(line_no, std::string(name) + " must be >= 0");
      }
      if (row.dark_counts < 0) at(line_no, "dark_counts must be >= 0");
    }
    table.rows.push_back(std::move(row));
  }

  if (!issues.empty()) throw validation_error(issues);
  if (table.rows.empty()) throw validation_error("no data rows");
  return table;
}

}  // namespace

MeasurementTable read_measurements(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open measurement file '" + path + "'");
  return parse_stream(in);
}

MeasurementTable parse_measurements_string(const std::string& text) {
  std::istringstream in(text);
  return parse_stream(in);
}

DataSeries series_from_table(const MeasurementTable& table, double dark_rate) {
  DataSeries s;
  s.dark_rate = dark_rate;
  s.duration = table.rows.front().duration;
  for (const auto& row : table.rows) {
    double y_counts;
    if (table.has_counts) {
      y_counts = *row.counts;
    } else {
      y_counts = *row.coincidences;
    }
    if (row.duration != s.duration)
      throw validation_error("fit input needs a common duration_s across rows");
    s.x.push_back(row.x_value);
    s.y.push_back(y_counts / row.duration);
  }
  return s;
}

std::vector<PowerRecord> records_from_table(const MeasurementTable& table) {
  if (!table.has_triple)
    throw validation_error("coincidence analysis needs singles_a/singles_b/coincidences");
  std::vector<PowerRecord> records;
  for (const auto& row : table.rows) {
    PowerRecord pr;
    pr.pump_power = row.x_value;
    pr.record.singles_a = *row.singles_a / row.duration;
    pr.record.singles_b = *row.singles_b / row.duration;
    pr.record.coincidences = *row.coincidences / row.duration;
    pr.record.duration = row.duration;
    pr.record.applied_attenuation = row.attenuation;
    records.push_back(pr);
  }
  return records;
}

}  // namespace etpa::cli
