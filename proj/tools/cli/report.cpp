#include "report.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "config.hpp"

namespace softphoton::cli {
namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

nlohmann::ordered_json cell_json(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  const double x = std::get<double>(c);
  // JSON has no inf/nan; keep them as text.
  if (!std::isfinite(x)) return format_double(x);
  return x;
}

}  // namespace

std::string cell_text(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return format_double(std::get<double>(c));
}

void Report::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::logic_error("report row width does not match columns");
  rows.push_back(std::move(row));
}

void Report::note_grid(const std::string& fingerprint) {
  for (const auto& f : grid_fingerprints) {
    if (f == fingerprint) return;
  }
  grid_fingerprints.push_back(fingerprint);
}

void write_csv(const Report& r, std::ostream& out) {
  for (std::size_t i = 0; i < r.columns.size(); ++i) out << (i ? "," : "") << csv_field(r.columns[i]);
  out << "\r\n";
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(cell_text(row[i]));
    out << "\r\n";
  }
}

void write_json(const Report& r, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["experiment"] = r.experiment;
  auto& cfg = doc["config"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.config) cfg[k] = v;

  auto& res = doc["results"];
  res["columns"] = r.columns;
  res["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    auto& jr = res["rows"].emplace_back(nlohmann::ordered_json::array());
    for (const auto& c : row) jr.push_back(cell_json(c));
  }
  auto& sum = res["summary"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.summary) sum[k] = cell_json(v);

  auto& meta = doc["metadata"];
  meta["version"] = SOFTPHOTON_VERSION_STRING;
  meta["grid_fingerprints"] = r.grid_fingerprints;
  auto& gs = meta["grid"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.grid_spec) gs[k] = v;
  meta["form_factor"] = "gaussian";
  meta["wall_time_s"] = r.wall_time;
  // %.17g-equivalent round trip: nlohmann prints doubles with max_digits10.
  out << doc.dump(2) << "\n";
}

}  // namespace softphoton::cli
