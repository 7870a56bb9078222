#pragma once

// The comparison table, pointwise risk curves, and their CSV/JSON forms.

#include "densrisk/bandwidth.hpp"
#include "densrisk/case_studies.hpp"

#include <string>
#include <vector>

namespace densrisk {

struct ComparisonRow
{
  int n = 0;
  double benchmark_mise = 0.0; ///< exact plug-in MISE, sigma = 1
  double umvu_ratio = 0.0;     ///< +inf at n = 3
  double b_n = 0.0;
  double normal_ratio1 = 0.0; ///< oracle bandwidth
  double normal_ratio2 = 0.0; ///< h = b_n sigma_hat / n^(1/5)
  double c_n = 0.0;
  double epan_ratio1 = 0.0;
  double epan_ratio2 = 0.0;
};

const std::vector<int>& default_table_sizes();

ComparisonRow compute_comparison_row(int n, const QuadratureConfig& cfg = {});
/// Rows come back in the order of `ns` whatever the thread count.
std::vector<ComparisonRow> compute_comparison_table(const std::vector<int>& ns,
                                                    const QuadratureConfig& cfg = {},
                                                    int threads = 1);

struct RiskPoint
{
  double x;
  double bias;
  double sd;
  double rmse;
};

struct RiskCurve
{
  std::string estimator_label;
  std::vector<RiskPoint> points;
};

RiskPoint to_risk_point(double x, const PointRisk& r);

/// x = -3, -2.98, ..., 3
std::vector<double> default_figure_grid();

RiskCurve plugin_risk_curve(const NormalParams& p, int n,
                            const std::vector<double>& grid,
                            const QuadratureConfig& cfg = {}, int threads = 1);
RiskCurve kernel_risk_curve(KernelType k, const NormalParams& p, int n, double h,
                            const std::vector<double>& grid, int threads = 1);

/// which = 1: plug-in against the Epanechnikov kernel at its best bandwidth.
/// which = 2: normal against Epanechnikov kernel, both at best bandwidths.
std::vector<RiskCurve> figure_curves(int which, int n,
                                     const std::vector<double>& grid,
                                     const NormalParams& p = NormalParams::standard(),
                                     const QuadratureConfig& cfg = {},
                                     int threads = 1);

/// Points x in (0, x_max) where the Epanechnikov (best bandwidth) and plug-in
/// MSE curves cross, standard normal truth.
std::vector<double> mse_crossovers(int n, double x_max = 3.0,
                                   const QuadratureConfig& cfg = {});

// --- rendering --------------------------------------------------------------

/// Locale-independent fixed notation; "inf" for +infinity.
std::string format_fixed(double v, int decimals);
/// Shortest round-trip representation.
std::string format_exact(double v);
/// Three decimals, or four when three would round a value below 1 up to 1.
std::string format_ratio(double v);

std::string render_table_csv(const std::vector<ComparisonRow>& rows);
std::string render_table_json(const std::vector<ComparisonRow>& rows);
std::vector<ComparisonRow> parse_table_csv(const std::string& text);
std::vector<ComparisonRow> parse_table_json(const std::string& text);

std::string render_curves_csv(const std::vector<RiskCurve>& curves);
std::string render_curves_json(const std::vector<RiskCurve>& curves);

std::string render_mise_report_json(const MiseReport& r);
MiseReport parse_mise_report_json(const std::string& text);

std::string render_crossovers_csv(const std::vector<CrossoverResult>& rows);
std::string render_crossovers_json(const std::vector<CrossoverResult>& rows);

} // namespace densrisk
