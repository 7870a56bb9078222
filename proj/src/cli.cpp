#include "densrisk/cli.hpp"

#include "densrisk/comparison.hpp"
#include "densrisk/parallel.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace densrisk::cli {

namespace {

class UsageError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct Options
{
  std::string n_list;
  int n = 0;
  std::string kernel = "normal";
  double sigma = 1.0;
  std::string format = "csv";
  std::string out;
  double tol = 0.0;
  std::uint64_t seed = McConfig{}.seed;
  long long replicates = McConfig{}.replicates;
  int eval_points = McConfig{}.eval_points;
  int threads = 1;

  std::string estimator;
  double h = 0.0;
  std::string rule;
  std::string method = "exact";
  int which = 1;
  std::string b_list = "0.2,0.4,0.6,0.8,1.0,1.2";
  double x_min = -3.0;
  double x_max = 3.0;
  double step = 0.02;

  QuadratureConfig quadrature() const
  {
    QuadratureConfig cfg;
    if (tol > 0.0)
      cfg.abs_tol = tol;
    return cfg;
  }
};

template <class T>
std::vector<T> parse_list(const std::string& text, const char* what)
{
  std::vector<T> values;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty())
      continue;
    T v{};
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (res.ec != std::errc() || res.ptr != item.data() + item.size())
      throw UsageError(std::string(what) + ": cannot parse '" + item + "'");
    values.push_back(v);
  }
  return values;
}

std::vector<int> sizes_or_default(const Options& o)
{
  if (o.n_list.empty())
    return default_table_sizes();
  return parse_list<int>(o.n_list, "--n");
}

std::vector<double> grid(const Options& o)
{
  if (!(o.step > 0.0) || !(o.x_max >= o.x_min))
    throw UsageError("grid: need --x-max >= --x-min and --step > 0");
  std::vector<double> xs;
  const auto count = static_cast<long>(std::floor((o.x_max - o.x_min) / o.step + 1e-9));
  for (long i = 0; i <= count; ++i)
    xs.push_back(o.x_min + o.step * static_cast<double>(i));
  return xs;
}

void require_min_n(int n, int min_n, const char* cmd)
{
  if (n < min_n)
    throw UsageError(std::string(cmd) + ": --n must be >= " + std::to_string(min_n));
}

bool json_format(const Options& o) { return o.format == "json"; }

std::string cmd_table(const Options& o)
{
  const auto ns = sizes_or_default(o);
  for (int n : ns)
    require_min_n(n, 3, "table");
  const auto rows = compute_comparison_table(ns, o.quadrature(), o.threads);
  return json_format(o) ? render_table_json(rows) : render_table_csv(rows);
}

std::string cmd_figure(const Options& o)
{
  const int n = o.n > 0 ? o.n : 14;
  require_min_n(n, 3, "figure");
  const auto curves = figure_curves(o.which, n, grid(o), NormalParams(0.0, o.sigma),
                                    o.quadrature(), o.threads);
  return json_format(o) ? render_curves_json(curves) : render_curves_csv(curves);
}

std::string cmd_mse_curve(const Options& o)
{
  const int n = o.n > 0 ? o.n : 14;
  require_min_n(n, 3, "mse-curve");
  const NormalParams p(0.0, o.sigma);
  const auto xs = grid(o);
  std::vector<RiskCurve> curves;
  if (o.estimator == "plugin") {
    curves.push_back(plugin_risk_curve(p, n, xs, o.quadrature(), o.threads));
  } else if (o.estimator == "kernel") {
    const KernelType k = parse_kernel(o.kernel);
    const double h = o.h > 0.0
                       ? o.h
                       : o.sigma * optimal_constant(k, n) * std::pow(double(n), -0.2);
    curves.push_back(kernel_risk_curve(k, p, n, h, xs, o.threads));
  } else {
    throw UsageError("mse-curve: --estimator must be plugin or kernel");
  }
  return json_format(o) ? render_curves_json(curves) : render_curves_csv(curves);
}

BandwidthRule rule_for(const Options& o, KernelType k)
{
  if (o.rule == "thumb")
    return BandwidthRule::finite_sample_optimal(k, o.n);
  if (o.rule == "reference")
    return BandwidthRule::asymptotic(k, o.n);
  throw UsageError("mise: --rule must be thumb or reference");
}

MiseReport scaled(MiseReport r, double sigma)
{
  r.value /= sigma;
  if (r.std_error)
    *r.std_error /= sigma;
  return r;
}

std::string cmd_mise(const Options& o, bool mc_flags_given)
{
  require_min_n(o.n, 1, "mise");
  const NormalParams p(0.0, o.sigma);
  const bool mc = o.method == "mc";
  if (!mc && mc_flags_given)
    throw UsageError("mise: --seed, --replicates and --eval-points need --method mc");
  MiseReport report;
  if (o.estimator == "plugin" || o.estimator == "umvu") {
    if (mc)
      throw UsageError("mise: --method mc applies to the kernel estimator only");
    if (o.h > 0.0 || !o.rule.empty())
      throw UsageError("mise: --h and --rule apply to the kernel estimator only");
    require_min_n(o.n, 3, "mise");
    report = o.estimator == "plugin" ? exact_mise_plugin(p, o.n, o.quadrature())
                                     : exact_mise_umvu(p, o.n);
  } else if (o.estimator == "kernel") {
    const KernelType k = parse_kernel(o.kernel);
    const bool fixed_h = o.h > 0.0;
    if (fixed_h == !o.rule.empty())
      throw UsageError("mise: give exactly one of --h and --rule for the kernel estimator");
    if (fixed_h) {
      if (mc)
        throw UsageError("mise: --method mc needs a --rule (h = a * sigma_hat)");
      report = {mise_closed(k, p, o.n, o.h), MiseMethod::closed_form, std::nullopt};
    } else if (mc) {
      require_min_n(o.n, 2, "mise");
      McConfig cfg;
      cfg.seed = o.seed;
      cfg.replicates = o.replicates;
      cfg.eval_points = o.eval_points;
      cfg.threads = o.threads;
      report = scaled(real_mise_mc(rule_for(o, k), o.n, cfg), o.sigma);
    } else {
      require_min_n(o.n, 3, "mise");
      report = scaled(real_mise_exact(rule_for(o, k), o.n, o.quadrature()), o.sigma);
    }
  } else {
    throw UsageError("mise: --estimator must be plugin, umvu or kernel");
  }
  if (o.format == "csv") {
    return "value,method,std_error\n" + format_exact(report.value) + "," +
           std::string(to_string(report.method)) + "," +
           (report.std_error ? format_exact(*report.std_error) : std::string()) + "\n";
  }
  return render_mise_report_json(report) + "\n";
}

std::string cmd_bandwidth_constants(const Options& o)
{
  const auto ns = sizes_or_default(o);
  for (int n : ns)
    require_min_n(n, 2, "bandwidth-constants");
  std::vector<std::pair<double, double>> bc(ns.size());
  parallel_for(ns.size(), o.threads, [&](std::size_t i) {
    bc[i] = {optimal_b(ns[i]), optimal_c(ns[i])};
  });
  std::string out;
  if (!json_format(o))
    out = "n,b_n,c_n\n";
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (json_format(o))
      out += nlohmann::json{{"n", ns[i]}, {"b_n", bc[i].first}, {"c_n", bc[i].second}}
               .dump() +
             "\n";
    else
      out += std::to_string(ns[i]) + "," + format_fixed(bc[i].first, 4) + "," +
             format_fixed(bc[i].second, 4) + "\n";
  }
  return out;
}

std::string cmd_lognormal(const Options& o)
{
  const auto bs = parse_list<double>(o.b_list, "--b");
  for (double b : bs)
    if (!(b > 0.0))
      throw UsageError("lognormal: every b must be positive");
  std::vector<CrossoverResult> rows(bs.size());
  parallel_for(bs.size(), o.threads,
               [&](std::size_t i) { rows[i] = lognormal_crossover(bs[i]); });
  return json_format(o) ? render_crossovers_json(rows) : render_crossovers_csv(rows);
}

std::string cmd_skew_mise(const Options& o)
{
  if (!(o.sigma > 0.0))
    throw UsageError("skew-mise: --sigma must be positive");
  const double value = skew_normal_asymptotic_mise(o.sigma, o.quadrature());
  const double normal = 0.875 * numerics::kRoughnessStdNormal / o.sigma;
  if (json_format(o))
    return nlohmann::json{{"sigma", o.sigma}, {"value", value}, {"ratio", value / normal}}
             .dump() +
           "\n";
  return "sigma,value,ratio\n" + format_exact(o.sigma) + "," + format_exact(value) + "," +
         format_exact(value / normal) + "\n";
}

void add_output_options(CLI::App* sub, Options& o)
{
  sub->add_option("--format", o.format, "Output format")
    ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", o.out, "Write output to FILE instead of stdout");
  sub->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
}

void add_tol_option(CLI::App* sub, Options& o)
{
  sub->add_option("--tol", o.tol, "Quadrature absolute tolerance")
    ->check(CLI::PositiveNumber);
}

void add_grid_options(CLI::App* sub, Options& o)
{
  sub->add_option("--sigma", o.sigma, "Scale of the normal truth")
    ->check(CLI::PositiveNumber);
  sub->add_option("--x-min", o.x_min, "Grid start");
  sub->add_option("--x-max", o.x_max, "Grid end");
  sub->add_option("--step", o.step, "Grid spacing")->check(CLI::PositiveNumber);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  Options o;
  CLI::App app{"Exact finite-sample risk of parametric and kernel density estimators "
               "for normal data"};
  app.name(args.empty() ? "densrisk" : args.front());
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  auto* table = app.add_subcommand("table", "Comparison table of MISE ratios");
  table->add_option("--n", o.n_list, "Comma-separated sample sizes");
  add_output_options(table, o);
  add_tol_option(table, o);

  auto* figure = app.add_subcommand("figure", "Bias, sd and rmse curves for a figure");
  figure->add_option("--which", o.which, "1: plug-in vs Epanechnikov, 2: normal vs Epanechnikov kernel")->check(CLI::IsMember({1, 2}));
  figure->add_option("--n", o.n, "Sample size (default 14)");
  add_grid_options(figure, o);
  add_output_options(figure, o);
  add_tol_option(figure, o);

  auto* mise = app.add_subcommand("mise", "MISE of one estimator");
  mise->add_option("--estimator", o.estimator, "plugin, umvu or kernel")->required();
  mise->add_option("--n", o.n, "Sample size")->required();
  mise->add_option("--kernel", o.kernel, "normal or epan")
    ->check(CLI::IsMember({"normal", "epan", "epanechnikov"}));
  mise->add_option("--sigma", o.sigma, "Scale of the normal truth")
    ->check(CLI::PositiveNumber);
  mise->add_option("--h", o.h, "Fixed bandwidth")->check(CLI::PositiveNumber);
  mise->add_option("--rule", o.rule,
                   "Estimated bandwidth: thumb (best finite-sample constant) or "
                   "reference (asymptotic constant)");
  mise->add_option("--method", o.method, "exact or mc")
    ->check(CLI::IsMember({"exact", "mc"}));
  auto* seed_opt = mise->add_option("--seed", o.seed, "Monte Carlo seed");
  auto* reps_opt =
    mise->add_option("--replicates", o.replicates, "Monte Carlo replicates B")
      ->check(CLI::PositiveNumber);
  auto* eval_opt =
    mise->add_option("--eval-points", o.eval_points, "Evaluation points m per replicate")
      ->check(CLI::PositiveNumber);
  add_output_options(mise, o);
  add_tol_option(mise, o);

  auto* curve = app.add_subcommand("mse-curve", "Pointwise bias, sd and rmse of one estimator");
  curve->add_option("--estimator", o.estimator, "plugin or kernel")->required();
  curve->add_option("--n", o.n, "Sample size (default 14)");
  curve->add_option("--kernel", o.kernel, "normal or epan")
    ->check(CLI::IsMember({"normal", "epan", "epanechnikov"}));
  curve->add_option("--h", o.h, "Bandwidth (default: MISE-optimal)")
    ->check(CLI::PositiveNumber);
  add_grid_options(curve, o);
  add_output_options(curve, o);
  add_tol_option(curve, o);

  auto* constants =
    app.add_subcommand("bandwidth-constants", "Finite-sample optimal constants b_n and c_n");
  constants->add_option("--n", o.n_list, "Comma-separated sample sizes");
  add_output_options(constants, o);

  auto* lognormal = app.add_subcommand("lognormal", "Lognormal mean crossover sizes n0(b)");
  lognormal->add_option("--b", o.b_list, "Comma-separated log-scale sds (may be empty)");
  add_output_options(lognormal, o);

  auto* skew = app.add_subcommand("skew-mise", "Skew-extended normal n*MISE limit");
  skew->add_option("--sigma", o.sigma, "Scale of the normal truth")
    ->check(CLI::PositiveNumber);
  add_output_options(skew, o);
  add_tol_option(skew, o);

  std::vector<const char*> argv;
  for (const auto& a : args)
    argv.push_back(a.c_str());
  if (argv.empty())
    argv.push_back("densrisk");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (mise->parsed() && o.format == "csv" && mise->count("--format") == 0)
    o.format = "json";

  try {
    std::string result;
    if (table->parsed())
      result = cmd_table(o);
    else if (figure->parsed())
      result = cmd_figure(o);
    else if (mise->parsed())
      result = cmd_mise(o, seed_opt->count() + reps_opt->count() + eval_opt->count() > 0);
    else if (curve->parsed())
      result = cmd_mse_curve(o);
    else if (constants->parsed())
      result = cmd_bandwidth_constants(o);
    else if (lognormal->parsed())
      result = cmd_lognormal(o);
    else
      result = cmd_skew_mise(o);

    if (o.out.empty()) {
      out << result;
    } else {
      std::ofstream file(o.out, std::ios::binary);
      if (!file)
        throw UsageError("cannot open '" + o.out + "' for writing");
      file << result;
    }
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

} // namespace densrisk::cli
