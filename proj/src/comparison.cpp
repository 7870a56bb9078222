#include "densrisk/comparison.hpp"

#include "densrisk/parallel.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace densrisk {

using numerics::kInf;
using json = nlohmann::json;

const std::vector<int>& default_table_sizes()
{
  static const std::vector<int> sizes = {3,  4,  5,  6,  7,  8,  9,  10, 11,  12,  13,
                                         14, 15, 16, 17, 18, 19, 20, 50, 100, 1000};
  return sizes;
}

ComparisonRow compute_comparison_row(int n, const QuadratureConfig& cfg)
{
  if (n < 3)
    throw std::domain_error("comparison table: requires n >= 3 (got " +
                            std::to_string(n) + ")");
  const NormalParams std_normal = NormalParams::standard();
  const double scale = std::pow(static_cast<double>(n), -0.2);
  ComparisonRow row;
  row.n = n;
  row.benchmark_mise = exact_mise_plugin(std_normal, n, cfg).value;
  row.umvu_ratio = exact_mise_umvu(std_normal, n).value / row.benchmark_mise;

  row.b_n = optimal_b(n);
  row.normal_ratio1 = mise_closed_normal_kernel(n, row.b_n * scale) / row.benchmark_mise;
  row.normal_ratio2 =
    real_mise_exact(BandwidthRule(KernelType::normal, row.b_n * scale), n, cfg).value /
    row.benchmark_mise;

  row.c_n = optimal_c(n);
  row.epan_ratio1 = mise_closed_epan_kernel(n, row.c_n * scale) / row.benchmark_mise;
  row.epan_ratio2 =
    real_mise_exact(BandwidthRule(KernelType::epanechnikov, row.c_n * scale), n, cfg)
      .value /
    row.benchmark_mise;
  return row;
}

std::vector<ComparisonRow> compute_comparison_table(const std::vector<int>& ns,
                                                    const QuadratureConfig& cfg,
                                                    int threads)
{
  std::vector<ComparisonRow> rows(ns.size());
  parallel_for(ns.size(), threads,
               [&](std::size_t i) { rows[i] = compute_comparison_row(ns[i], cfg); });
  return rows;
}

RiskPoint to_risk_point(double x, const PointRisk& r)
{
  const double sd = r.sd();
  return {x, r.bias, sd, std::hypot(r.bias, sd)};
}

std::vector<double> default_figure_grid()
{
  std::vector<double> grid;
  for (int i = 0; i <= 300; ++i)
    grid.push_back(-3.0 + 0.02 * i);
  return grid;
}

RiskCurve plugin_risk_curve(const NormalParams& p, int n,
                            const std::vector<double>& grid,
                            const QuadratureConfig& cfg, int threads)
{
  RiskCurve curve{"plugin", std::vector<RiskPoint>(grid.size())};
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    curve.points[i] = to_risk_point(grid[i], exact_mse_plugin(grid[i], p, n, cfg));
  });
  return curve;
}

RiskCurve kernel_risk_curve(KernelType k, const NormalParams& p, int n, double h,
                            const std::vector<double>& grid, int threads)
{
  const Kernel kern = Kernel::of(k);
  const Bandwidth bw(h);
  RiskCurve curve{"kernel-" + std::string(to_string(k)),
                  std::vector<RiskPoint>(grid.size())};
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    curve.points[i] = to_risk_point(grid[i], exact_mse_kernel(kern, grid[i], p, n, bw));
  });
  return curve;
}

namespace {

double best_bandwidth(KernelType k, int n, const NormalParams& p)
{
  return p.sigma() * optimal_constant(k, n) * std::pow(static_cast<double>(n), -0.2);
}

} // namespace

std::vector<RiskCurve> figure_curves(int which, int n, const std::vector<double>& grid,
                                     const NormalParams& p, const QuadratureConfig& cfg,
                                     int threads)
{
  if (n < 3)
    throw std::domain_error("figure: requires n >= 3");
  const double h_epan = best_bandwidth(KernelType::epanechnikov, n, p);
  auto epan = kernel_risk_curve(KernelType::epanechnikov, p, n, h_epan, grid, threads);
  if (which == 1)
    return {plugin_risk_curve(p, n, grid, cfg, threads), std::move(epan)};
  if (which == 2) {
    const double h_norm = best_bandwidth(KernelType::normal, n, p);
    return {kernel_risk_curve(KernelType::normal, p, n, h_norm, grid, threads),
            std::move(epan)};
  }
  throw std::invalid_argument("figure: expected 1 or 2 (got " + std::to_string(which) +
                              ")");
}

std::vector<double> mse_crossovers(int n, double x_max, const QuadratureConfig& cfg)
{
  const NormalParams p = NormalParams::standard();
  const Kernel epan = Kernel::of(KernelType::epanechnikov);
  const Bandwidth h(best_bandwidth(KernelType::epanechnikov, n, p));
  auto diff = [&](double x) {
    return exact_mse_kernel(epan, x, p, n, h).mse - exact_mse_plugin(x, p, n, cfg).mse;
  };
  const int steps = static_cast<int>(std::ceil(x_max / 0.01));
  std::vector<double> roots;
  double lo = 1e-6;
  double f_lo = diff(lo);
  for (int i = 1; i <= steps; ++i) {
    const double hi = std::min(x_max, 0.01 * i);
    const double f_hi = diff(hi);
    if ((f_lo < 0.0) != (f_hi < 0.0)) {
      double a = lo, b = hi, fa = f_lo;
      while (b - a > 1e-10) {
        const double m = 0.5 * (a + b);
        const double fm = diff(m);
        if ((fa < 0.0) == (fm < 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    lo = hi;
    f_lo = f_hi;
  }
  return roots;
}

// --- rendering --------------------------------------------------------------

std::string format_fixed(double v, int decimals)
{
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  if (std::isnan(v))
    return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
  return std::string(buf, res.ptr);
}

std::string format_exact(double v)
{
  if (!std::isfinite(v))
    return format_fixed(v, 0);
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_ratio(double v)
{
  const std::string three = format_fixed(v, 3);
  if (v < 1.0 && three == "1.000")
    return format_fixed(v, 4);
  return three;
}

namespace {

const char* const kTableHeader =
  "n,plugin,umvu,b_n,normal_ratio1,normal_ratio2,c_n,epan_ratio1,epan_ratio2";

double parse_double(const std::string& field)
{
  if (field == "inf")
    return kInf;
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size())
    throw std::invalid_argument("cannot parse number '" + field + "'");
  return v;
}

std::vector<std::string> split_csv(const std::string& line)
{
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ','))
    out.push_back(field);
  return out;
}

json extended(double v)
{
  if (std::isinf(v))
    return {{"value", nullptr}, {"infinite", true}};
  return {{"value", v}, {"infinite", false}};
}

double from_extended(const json& j)
{
  if (j.at("infinite").get<bool>())
    return kInf;
  return j.at("value").get<double>();
}

} // namespace

std::string render_table_csv(const std::vector<ComparisonRow>& rows)
{
  std::string out = std::string(kTableHeader) + "\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n) + "," + format_fixed(r.benchmark_mise, 5) + "," +
           format_fixed(r.umvu_ratio, 4) + "," + format_fixed(r.b_n, 4) + "," +
           format_ratio(r.normal_ratio1) + "," + format_ratio(r.normal_ratio2) + "," +
           format_fixed(r.c_n, 4) + "," + format_ratio(r.epan_ratio1) + "," +
           format_ratio(r.epan_ratio2) + "\n";
  }
  return out;
}

std::string render_table_json(const std::vector<ComparisonRow>& rows)
{
  std::string out;
  for (const auto& r : rows) {
    const json j = {{"n", r.n},
                    {"plugin", r.benchmark_mise},
                    {"umvu", extended(r.umvu_ratio)},
                    {"b_n", r.b_n},
                    {"normal_ratio1", r.normal_ratio1},
                    {"normal_ratio2", r.normal_ratio2},
                    {"c_n", r.c_n},
                    {"epan_ratio1", r.epan_ratio1},
                    {"epan_ratio2", r.epan_ratio2}};
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<ComparisonRow> parse_table_csv(const std::string& text)
{
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kTableHeader)
    throw std::invalid_argument("table CSV: missing or unexpected header");
  std::vector<ComparisonRow> rows;
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    const auto f = split_csv(line);
    if (f.size() != 9)
      throw std::invalid_argument("table CSV: expected 9 fields in '" + line + "'");
    rows.push_back({std::stoi(f[0]), parse_double(f[1]), parse_double(f[2]),
                    parse_double(f[3]), parse_double(f[4]), parse_double(f[5]),
                    parse_double(f[6]), parse_double(f[7]), parse_double(f[8])});
  }
  return rows;
}

std::vector<ComparisonRow> parse_table_json(const std::string& text)
{
  std::istringstream in(text);
  std::string line;
  std::vector<ComparisonRow> rows;
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    const json j = json::parse(line);
    rows.push_back({j.at("n").get<int>(), j.at("plugin").get<double>(),
                    from_extended(j.at("umvu")), j.at("b_n").get<double>(),
                    j.at("normal_ratio1").get<double>(),
                    j.at("normal_ratio2").get<double>(), j.at("c_n").get<double>(),
                    j.at("epan_ratio1").get<double>(), j.at("epan_ratio2").get<double>()});
  }
  return rows;
}

std::string render_curves_csv(const std::vector<RiskCurve>& curves)
{
  std::string out = "estimator,x,bias,sd,rmse\n";
  for (const auto& c : curves)
    for (const auto& p : c.points)
      out += c.estimator_label + "," + format_fixed(p.x, 2) + "," + format_exact(p.bias) +
             "," + format_exact(p.sd) + "," + format_exact(p.rmse) + "\n";
  return out;
}

std::string render_curves_json(const std::vector<RiskCurve>& curves)
{
  std::string out;
  for (const auto& c : curves)
    for (const auto& p : c.points)
      out += json{{"estimator", c.estimator_label},
                  {"x", p.x},
                  {"bias", p.bias},
                  {"sd", p.sd},
                  {"rmse", p.rmse}}
               .dump() +
             "\n";
  return out;
}

std::string render_mise_report_json(const MiseReport& r)
{
  json j = extended(r.value);
  j["method"] = std::string(to_string(r.method));
  if (r.std_error)
    j["std_error"] = std::isinf(*r.std_error) ? json(nullptr) : json(*r.std_error);
  return j.dump();
}

MiseReport parse_mise_report_json(const std::string& text)
{
  const json j = json::parse(text);
  MiseReport r;
  r.value = from_extended(j);
  const auto method = j.at("method").get<std::string>();
  if (method == "closed_form")
    r.method = MiseMethod::closed_form;
  else if (method == "quadrature")
    r.method = MiseMethod::quadrature;
  else if (method == "monte_carlo")
    r.method = MiseMethod::monte_carlo;
  else
    throw std::invalid_argument("unknown MISE method '" + method + "'");
  if (j.contains("std_error"))
    r.std_error = j["std_error"].is_null() ? kInf : j["std_error"].get<double>();
  return r;
}

std::string render_crossovers_csv(const std::vector<CrossoverResult>& rows)
{
  std::string out = "b,n0\n";
  for (const auto& r : rows)
    out += format_exact(r.b) + "," + std::to_string(r.n0) + "\n";
  return out;
}

std::string render_crossovers_json(const std::vector<CrossoverResult>& rows)
{
  std::string out;
  for (const auto& r : rows)
    out += json{{"b", r.b}, {"n0", r.n0}}.dump() + "\n";
  return out;
}

} // namespace densrisk
