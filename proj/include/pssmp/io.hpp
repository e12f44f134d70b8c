#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "pssmp/envelope.hpp"
#include "pssmp/lamperti.hpp"
#include "pssmp/lil.hpp"
#include "pssmp/stats.hpp"

namespace pssmp {

using Json = nlohmann::ordered_json;

// Shortest text that reads back to the same double; "nan" and "inf" spelled out.
std::string format_double(double x);

// CSV with a header row. Columns must have equal length.
std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<double>>& columns);
std::string path_csv(const PssmpPath& path);                 // t,value
std::string samples_csv(const std::vector<double>& samples);  // sample

// Writes atomically enough for single-writer use; throws std::runtime_error on failure.
void write_text(const std::string& file, const std::string& text);

Json path_json(const PssmpPath& path);
Json verdict_json(const Verdict& v);
Json stat_record_json(const StatRecord& r);
Json ks_json(const KsResult& k);
Json summary_json(const SampleSummary& s);

}  // namespace pssmp
