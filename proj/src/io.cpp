#include "pssmp/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace pssmp {

namespace {

// JSON has no NaN or infinity; emit null so the document stays valid.
Json num(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json num_array(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(num(x));
  return a;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) throw std::invalid_argument("header and column count differ");
  std::string out;
  for (std::size_t c = 0; c < header.size(); ++c) out += (c ? "," : "") + header[c];
  out += "\n";
  const std::size_t rows = columns.empty() ? 0 : columns[0].size();
  for (const auto& col : columns)
    if (col.size() != rows) throw std::invalid_argument("columns differ in length");
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out += ",";
      out += format_double(columns[c][r]);
    }
    out += "\n";
  }
  return out;
}

std::string path_csv(const PssmpPath& path) { return csv_table({"t", "value"}, {path.times, path.values}); }

std::string samples_csv(const std::vector<double>& samples) { return csv_table({"sample"}, {samples}); }

void write_text(const std::string& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + file);
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + file);
}

Json path_json(const PssmpPath& path) {
  Json j;
  j["times"] = num_array(path.times);
  j["values"] = num_array(path.values);
  j["start"] = num(path.start);
  j["seed"] = path.seed;
  j["model"] = path.model.name();
  return j;
}

Json verdict_json(const Verdict& v) {
  Json j;
  j["outcome"] = to_string(v.kind);
  j["fitted_exponent"] = num(v.exponent);
  j["exponent_se"] = num(v.exponent_se);
  j["extrapolated_total"] = num(v.extrapolated_total);
  j["beyond_data"] = v.beyond_data;
  j["reason"] = v.reason;
  Json w = Json::array();
  double lo = v.u_lo;
  for (double s : v.partial_sums) {
    Json e;
    e["u_lo"] = num(lo);
    e["u_hi"] = num(2.0 * lo);
    e["partial_sum"] = num(s);
    w.push_back(e);
    lo *= 2.0;
  }
  j["windows"] = w;
  return j;
}

Json stat_record_json(const StatRecord& r) {
  Json j;
  j["gauge"] = r.gauge;
  j["end"] = to_string(r.end);
  Json w = Json::array();
  for (std::size_t k = 0; k < r.window_lo.size(); ++k) w.push_back(Json::array({num(r.window_lo[k]), num(r.window_hi[k])}));
  j["windows"] = w;
  j["per_path_terminal"] = num_array(r.terminal);
  j["median"] = num(r.median);
  j["iqr"] = num(r.iqr);
  return j;
}

Json ks_json(const KsResult& k) {
  Json j;
  j["statistic"] = num(k.statistic);
  j["p_value"] = num(k.p_value);
  j["exact"] = k.exact;
  return j;
}

Json summary_json(const SampleSummary& s) {
  Json j;
  j["n"] = s.n;
  j["mean"] = num(s.mean);
  j["sd"] = num(s.sd);
  j["stderr"] = num(s.stderr_);
  return j;
}

}  // namespace pssmp
