#include "nfsar/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "nfsar/geometry.hpp"

namespace nfsar {

std::vector<ExtractedScatterer> extract_scatterers(const ComplexImage& coefficients, double min_level_db) {
  std::vector<ExtractedScatterer> out;
  const double peak = coefficients.max_abs();
  if (peak == 0.0) return out;
  const double level = peak * std::pow(10.0, min_level_db / 20.0);
  const GridSpec& g = coefficients.grid();
  for (std::size_t ia = 0; ia < g.n_azimuth; ++ia) {
    for (std::size_t ir = 0; ir < g.n_range; ++ir) {
      const double m = std::abs(coefficients(ia, ir));
      if (m == 0.0 || m < level) continue;
      bool strict = true;
      for (int da = -1; da <= 1 && strict; ++da) {
        for (int dr = -1; dr <= 1; ++dr) {
          if (da == 0 && dr == 0) continue;
          const auto na = static_cast<std::ptrdiff_t>(ia) + da;
          const auto nr = static_cast<std::ptrdiff_t>(ir) + dr;
          if (na < 0 || nr < 0 || na >= static_cast<std::ptrdiff_t>(g.n_azimuth) ||
              nr >= static_cast<std::ptrdiff_t>(g.n_range)) {
            continue;
          }
          if (std::abs(coefficients(static_cast<std::size_t>(na), static_cast<std::size_t>(nr))) >= m) {
            strict = false;
            break;
          }
        }
      }
      if (strict) out.push_back({g.azimuth_of(ia), g.range_of(ir), coefficients(ia, ir), true, g.index(ia, ir)});
    }
  }
  return out;
}

MatchReport match_scatterers(const std::vector<ExtractedScatterer>& estimates, const SceneSpec& truth,
                             double gate_radius_m) {
  if (!(gate_radius_m > 0.0)) throw std::invalid_argument("gate radius must be > 0");
  struct Candidate {
    double distance;
    std::size_t truth;
    std::size_t estimate;
  };
  std::vector<Candidate> candidates;
  for (std::size_t t = 0; t < truth.scatterers.size(); ++t) {
    for (std::size_t e = 0; e < estimates.size(); ++e) {
      const double d = std::hypot(estimates[e].azimuth_m - truth.scatterers[t].azimuth_m,
                                  estimates[e].range_m - truth.scatterers[t].range_m);
      if (d <= gate_radius_m) candidates.push_back({d, t, e});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [&](const Candidate& a, const Candidate& b) {
    const auto& ea = estimates[a.estimate];
    const auto& eb = estimates[b.estimate];
    return std::tie(a.distance, a.truth, ea.azimuth_m, ea.range_m) <
           std::tie(b.distance, b.truth, eb.azimuth_m, eb.range_m);
  });

  MatchReport report;
  std::vector<bool> truth_used(truth.scatterers.size(), false);
  std::vector<bool> est_used(estimates.size(), false);
  for (const auto& c : candidates) {
    if (truth_used[c.truth] || est_used[c.estimate]) continue;
    truth_used[c.truth] = est_used[c.estimate] = true;
    const double true_mag = std::abs(truth.scatterers[c.truth].complex_amplitude());
    const double est_mag = std::abs(estimates[c.estimate].amplitude);
    report.pairs.push_back({c.truth, c.estimate, std::abs(20.0 * std::log10(est_mag / true_mag)), c.distance});
  }
  std::sort(report.pairs.begin(), report.pairs.end(),
            [](const MatchedPair& a, const MatchedPair& b) { return a.truth < b.truth; });
  for (std::size_t t = 0; t < truth_used.size(); ++t) {
    if (!truth_used[t]) report.misses.push_back(t);
  }
  for (std::size_t e = 0; e < est_used.size(); ++e) {
    if (!est_used[e]) report.false_alarms.push_back(e);
  }
  if (!report.pairs.empty()) {
    double amp = 0.0;
    double pos = 0.0;
    double pos_max = 0.0;
    for (const auto& p : report.pairs) {
      amp += p.amplitude_error_db;
      pos += p.position_error_m;
      pos_max = std::max(pos_max, p.position_error_m);
    }
    const auto n = static_cast<double>(report.pairs.size());
    report.mean_amplitude_error_db = amp / n;
    report.mean_position_error_m = pos / n;
    report.max_position_error_m = pos_max;
  }
  return report;
}

double default_gate_radius(const ImagingGeometry& geometry) {
  const GridSpec& g = geometry.grid;
  double r_max = 0.0;
  for (std::size_t ia : {std::size_t{0}, g.n_azimuth - 1}) {
    for (std::size_t ir : {std::size_t{0}, g.n_range - 1}) {
      r_max = std::max(r_max, slant_range(geometry, g.azimuth_of(ia), g.range_of(ir)));
    }
  }
  const Resolutions res = resolutions(geometry, r_max);
  return 3.0 * std::max(res.range_m, res.azimuth_m);
}

ComparisonTable comparison_report(const std::vector<MethodReport>& reports, double lambda_rf_m) {
  if (reports.empty()) throw std::invalid_argument("comparison needs at least one method report");
  ComparisonTable table;
  table.lambda_rf_m = lambda_rf_m;
  for (const auto& r : reports) {
    ComparisonRow row;
    row.method = r.method;
    row.mean_amplitude_error_db = r.report.mean_amplitude_error_db;
    row.max_position_error_m = r.report.max_position_error_m;
    row.mean_position_error_m = r.report.mean_position_error_m;
    row.detections = r.report.detections();
    row.false_alarms = r.report.false_alarms.size();
    row.misses = r.report.misses.size();
    table.rows.push_back(row);
  }
  for (const auto& ref : published_reference) {
    ComparisonRow row;
    row.method = ref.method;
    row.mean_amplitude_error_db = ref.mean_amplitude_error_db;
    row.reference = true;
    row.note = std::string(ref.method) == "IAA" ? "reference only (not implemented)" : "published value";
    table.rows.push_back(row);
  }
  return table;
}

namespace {

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.6g", v);
  return buf;
}

template <class T>
std::string opt_num(const std::optional<T>& v, const char* missing) {
  if (!v) return missing;
  if constexpr (std::is_integral_v<T>) {
    return std::to_string(*v);
  } else {
    return fmt6(*v);
  }
}

std::string within(const ComparisonRow& row, double bound, const char* missing) {
  if (!row.max_position_error_m) return missing;
  return *row.max_position_error_m <= bound ? "yes" : "no";
}

}  // namespace

std::string format_table_text(const ComparisonTable& table) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-10s %-9s %12s %12s %12s %6s %6s %6s  %s\n", "method", "kind", "amp_err_dB",
                "max_pos_m", "mean_pos_m", "det", "fa", "miss", "note");
  os << line;
  for (const auto& r : table.rows) {
    std::snprintf(line, sizeof line, "%-10s %-9s %12s %12s %12s %6s %6s %6s  %s\n", r.method.c_str(),
                  r.reference ? "reference" : "computed", opt_num(r.mean_amplitude_error_db, "-").c_str(),
                  opt_num(r.max_position_error_m, "-").c_str(), opt_num(r.mean_position_error_m, "-").c_str(),
                  opt_num(r.detections, "-").c_str(), opt_num(r.false_alarms, "-").c_str(),
                  opt_num(r.misses, "-").c_str(), r.note.c_str());
    os << line;
  }
  os << "position thresholds: lambda/2 = " << fmt6(table.lambda_rf_m / 2.0) << " m, lambda = " << fmt6(table.lambda_rf_m)
     << " m, stated bound = " << fmt6(table.stated_position_bound_m) << " m\n";
  for (const auto& r : table.rows) {
    if (r.reference) continue;
    os << "  " << r.method << ": max position error within lambda/2: " << within(r, table.lambda_rf_m / 2.0, "n/a")
       << ", within lambda: " << within(r, table.lambda_rf_m, "n/a")
       << ", within stated bound: " << within(r, table.stated_position_bound_m, "n/a") << "\n";
  }
  return os.str();
}

std::string format_table_csv(const ComparisonTable& table) {
  std::ostringstream os;
  os << "method,kind,mean_amplitude_error_db,max_position_error_m,mean_position_error_m,detections,false_alarms,"
        "misses,within_half_lambda,within_lambda,within_stated_bound,note\n";
  for (const auto& r : table.rows) {
    os << r.method << ',' << (r.reference ? "reference" : "computed") << ','
       << opt_num(r.mean_amplitude_error_db, "") << ',' << opt_num(r.max_position_error_m, "") << ','
       << opt_num(r.mean_position_error_m, "") << ',' << opt_num(r.detections, "") << ','
       << opt_num(r.false_alarms, "") << ',' << opt_num(r.misses, "") << ','
       << within(r, table.lambda_rf_m / 2.0, "") << ',' << within(r, table.lambda_rf_m, "") << ','
       << within(r, table.stated_position_bound_m, "") << ',' << r.note << '\n';
  }
  return os.str();
}

}  // namespace nfsar
