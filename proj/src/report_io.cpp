#include "spectone/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "spectone/errors.hpp"

namespace spectone::io {

namespace {

using nlohmann::json;

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

// JSON has no NaN/inf; those become null.
json jnum(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round12(x);
}

double to_double(const std::string& field) {
  char* end = nullptr;
  const double x = std::strtod(field.c_str(), &end);
  if (field.empty() || end != field.c_str() + field.size()) {
    throw ParseError("not a number: '" + field + "'");
  }
  return x;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::kCsv;
  if (name == "json") return Format::kJson;
  throw ParseError("unknown output format '" + std::string(name) + "' (expected csv or json)");
}

double round12(double x) {
  if (!std::isfinite(x)) return x;
  return std::strtod(num(x).c_str(), nullptr);
}

std::string serialize_report(const harness::SweepReport& report, Format format) {
  if (format == Format::kCsv) {
    std::string out = "r_i,bound,tone,free_vertices\n";
    for (const auto& rec : report.records) {
      out += num(rec.r_i) + ',' + num(rec.closed_form_bound) + ',' +
             (rec.discrete_tone ? num(*rec.discrete_tone) : std::string()) + ',' +
             std::to_string(rec.free_vertex_count) + '\n';
    }
    return out;
  }
  const auto& p = report.profile;
  json j;
  j["surface_name"] = report.surface_name;
  j["admissible"] = report.admissible;
  j["profile"] = {{"a", jnum(p.curvature.a)}, {"b", jnum(p.curvature.b)}, {"r", jnum(p.r)},
                  {"m", p.m},                 {"ell", p.ell},              {"sup_h", jnum(p.sup_h)}};
  j["records"] = json::array();
  for (const auto& rec : report.records) {
    json row = {{"r_i", jnum(rec.r_i)},
                {"bound", jnum(rec.closed_form_bound)},
                {"tone", rec.discrete_tone ? jnum(*rec.discrete_tone) : json(nullptr)},
                {"free_vertices", rec.free_vertex_count}};
    if (!rec.note.empty()) row["note"] = rec.note;
    j["records"].push_back(std::move(row));
  }
  return j.dump(2) + '\n';
}

harness::SweepReport parse_report_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    harness::SweepReport report;
    report.surface_name = j.at("surface_name").get<std::string>();
    report.admissible = j.at("admissible").get<bool>();
    const json& p = j.at("profile");
    report.profile.curvature.a = p.at("a").get<double>();
    report.profile.curvature.b = p.at("b").get<double>();
    report.profile.r = p.at("r").get<double>();
    report.profile.m = p.at("m").get<int>();
    report.profile.ell = p.at("ell").get<int>();
    report.profile.sup_h = p.at("sup_h").get<double>();
    for (const json& row : j.at("records")) {
      harness::SweepRecord rec;
      rec.r_i = row.at("r_i").get<double>();
      rec.closed_form_bound = row.at("bound").get<double>();
      if (!row.at("tone").is_null()) rec.discrete_tone = row.at("tone").get<double>();
      rec.free_vertex_count = row.at("free_vertices").get<int>();
      if (row.contains("note")) rec.note = row.at("note").get<std::string>();
      report.records.push_back(std::move(rec));
    }
    return report;
  } catch (const json::exception& e) {
    throw ParseError(std::string("sweep report JSON: ") + e.what());
  }
}

std::vector<harness::SweepRecord> parse_report_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "r_i,bound,tone,free_vertices") {
    throw ParseError("sweep report CSV: missing header");
  }
  std::vector<harness::SweepRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 4) throw ParseError("sweep report CSV: expected 4 fields in '" + line + "'");
    harness::SweepRecord rec;
    rec.r_i = to_double(cells[0]);
    rec.closed_form_bound = to_double(cells[1]);
    if (!cells[2].empty()) rec.discrete_tone = to_double(cells[2]);
    rec.free_vertex_count = static_cast<int>(to_double(cells[3]));
    records.push_back(std::move(rec));
  }
  return records;
}

std::string serialize_barta(const harness::BartaSummary& s, Format format) {
  if (format == Format::kCsv) {
    return "lambda1,m_matrix_ok,radial_bound,ground_state_bound,trials,random_min_bound,"
           "random_max_bound,violations,tightest_bound,free_vertices\n" +
           num(s.lambda1) + ',' + (s.m_matrix_ok ? "1" : "0") + ',' + num(s.radial_bound) + ',' +
           num(s.ground_state_bound) + ',' + std::to_string(s.trials) + ',' +
           num(s.random_min_bound) + ',' + num(s.random_max_bound) + ',' +
           std::to_string(s.violations) + ',' + num(s.tightest_bound) + ',' +
           std::to_string(s.free_vertex_count) + '\n';
  }
  json j = {{"lambda1", jnum(s.lambda1)},
            {"m_matrix_ok", s.m_matrix_ok},
            {"radial_bound", jnum(s.radial_bound)},
            {"ground_state_bound", jnum(s.ground_state_bound)},
            {"trials", s.trials},
            {"random_min_bound", jnum(s.random_min_bound)},
            {"random_max_bound", jnum(s.random_max_bound)},
            {"violations", s.violations},
            {"tightest_bound", jnum(s.tightest_bound)},
            {"free_vertices", s.free_vertex_count}};
  return j.dump(2) + '\n';
}

std::string serialize_spectrum(const spectral::SpectralResult& result, Format format) {
  if (format == Format::kCsv) {
    std::string out = "index,eigenvalue,residual\n";
    for (Eigen::Index i = 0; i < result.eigenvalues.size(); ++i) {
      out += std::to_string(i) + ',' + num(result.eigenvalues[i]) + ',' + num(result.residuals[i]) + '\n';
    }
    return out;
  }
  json j;
  j["eigenvalues"] = json::array();
  j["residuals"] = json::array();
  for (Eigen::Index i = 0; i < result.eigenvalues.size(); ++i) {
    j["eigenvalues"].push_back(jnum(result.eigenvalues[i]));
    j["residuals"].push_back(jnum(result.residuals[i]));
  }
  j["free_vertices"] = result.free_vertices.size();
  j["ground_state_single_signed"] = result.ground_state_single_signed;
  return j.dump(2) + '\n';
}

}  // namespace spectone::io
