#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "spectone/harness.hpp"
#include "spectone/spectral.hpp"

namespace spectone::io {

enum class Format { kCsv, kJson };

/// "csv" or "json"; throws ParseError otherwise.
Format parse_format(std::string_view name);

/// x rounded to 12 significant digits (the precision of every report).
double round12(double x);

/// CSV: header `r_i,bound,tone,free_vertices`, one row per record, numbers
/// with 12 significant digits, empty tone field when absent.
/// JSON: object with surface_name, admissible, profile and records.
std::string serialize_report(const harness::SweepReport& report, Format format);

/// Inverse of the JSON form. Throws ParseError.
harness::SweepReport parse_report_json(std::string_view text);

/// Inverse of the CSV form (records only; profile and name are not in CSV).
std::vector<harness::SweepRecord> parse_report_csv(std::string_view text);

std::string serialize_barta(const harness::BartaSummary& summary, Format format);

/// Eigenvalues with residuals: CSV `index,eigenvalue,residual`.
std::string serialize_spectrum(const spectral::SpectralResult& result, Format format);

}  // namespace spectone::io
