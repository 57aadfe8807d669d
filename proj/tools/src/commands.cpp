#include <garchmom/csv.hpp>
#include <garchmom/error.hpp>
#include <garchmom/fitting.hpp>
#include <garchmom/phase.hpp>
#include <garchmom/rolling.hpp>
#include <garchmom/series.hpp>
#include <garchmom/simulate.hpp>

#include "context.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace garchmom::cli {
namespace {

ReturnSeries load_returns(const std::string& path) {
  return returns_of(read_series_csv(path));
}

std::vector<double> parse_doubles(const std::string& text, std::size_t count,
                                  const std::string& flag) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size())
      throw std::invalid_argument(flag + " expects " + std::to_string(count) +
                                  " comma-separated numbers, got '" + text + "'");
    values.push_back(v);
  }
  if (values.size() != count)
    throw std::invalid_argument(flag + " expects " + std::to_string(count) +
                                " comma-separated numbers, got '" + text + "'");
  return values;
}

void write_moment_header(std::ostream& os, int order) {
  os << "sigma_sq";
  for (int k = 4; k <= order; k += 2) os << ",gamma" << k;
}

void write_moment_fields(std::ostream& os, const MomentSummary& m, int order) {
  os << format_double(m.variance);
  for (int k = 4; k <= order; k += 2) os << ',' << format_double(m.gamma(k));
}

json moments_json(const MomentSummary& m, int order) {
  json j;
  j["n"] = m.sample_size;
  j["sigma_sq"] = number(m.variance);
  for (int k = 4; k <= order; k += 2) j["gamma" + std::to_string(k)] = number(m.gamma(k));
  return j;
}

json params_json(const GarchParams& p) {
  return json{{"alpha0", p.alpha0}, {"alpha1", p.alpha1}, {"beta1", p.beta1}};
}

double relative_difference(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

}  // namespace

Registered register_moments(CLI::App& app) {
  struct State {
    std::string input;
    std::string out;
    int order = 6;
    std::size_t window = kTradingYear;
    bool truncate = false;
    CLI::Option* window_opt = nullptr;
  };
  auto st = std::make_shared<State>();
  auto common = std::make_shared<CommonFlags>();
  auto* sub = app.add_subcommand("moments", "Sample variance and standardised moments");
  sub->add_option("input", st->input, "CSV with date,close or date,return")->required();
  sub->add_option("--order", st->order, "Highest even order (4 to 12)")->capture_default_str();
  st->window_opt = sub->add_option("--window", st->window,
                                   "Per-window moments over N trading days, "
                                   "attributed to the window median")
                       ->expected(0, 1)
                       ->default_str(std::to_string(kTradingYear));
  sub->add_flag("--truncate", st->truncate,
                "Moments of the 1%, 2%, ..., 100% prefixes of the series");
  sub->add_option("--out", st->out, "Write the CSV to a file");
  add_common_flags(*sub, *common);

  Action action = [st](Session& s) {
    if (st->order < 4 || st->order > 12 || st->order % 2 != 0)
      throw std::invalid_argument("--order must be one of 4, 6, 8, 10, 12");
    const bool windowed = st->window_opt->count() > 0;
    if (windowed && st->truncate)
      throw std::invalid_argument("--window and --truncate are exclusive");
    const auto returns = load_returns(st->input);
    const int order = st->order;
    s.inputs["input"] = st->input;
    s.inputs["order"] = order;
    s.inputs["mode"] = windowed ? "window" : st->truncate ? "truncate" : "global";
    if (windowed) s.inputs["window"] = st->window;

    const bool csv = !s.json_output || !st->out.empty();
    std::optional<OutputTarget> target;
    if (csv) target.emplace(st->out, s.out);

    if (windowed) {
      const std::size_t T = st->window;
      if (T < 2 || T > returns.size())
        throw std::invalid_argument("--window must lie between 2 and the series length");
      const std::size_t count = returns.size() - T + 1;
      json rows = json::array();
      std::size_t degenerate = 0;
      if (csv) {
        target->stream() << "median_date,";
        write_moment_header(target->stream(), order);
        target->stream() << '\n';
      }
      for (std::size_t first = 0; first < count; ++first) {
        const auto date = format_iso_date(returns.dates()[first + (T - 1) / 2]);
        std::optional<MomentSummary> m;
        try {
          m = standardized_moments(std::span(returns.values().data() + first, T), order);
        } catch (const NumericalError&) {
          ++degenerate;
        }
        if (csv) {
          auto& os = target->stream();
          os << date << ',';
          if (m) {
            write_moment_fields(os, *m, order);
          } else {
            for (int k = 4; k <= order; k += 2) os << ',';
          }
          os << '\n';
        }
        if (s.json_output) {
          json row{{"median_date", date}};
          if (m) row.update(moments_json(*m, order));
          rows.push_back(std::move(row));
        }
      }
      if (degenerate > 0)
        s.warn(std::to_string(degenerate) + " window(s) have zero variance");
      s.results["windows"] = std::move(rows);
    } else if (st->truncate) {
      std::vector<double> percents(100);
      std::iota(percents.begin(), percents.end(), 1.0);
      const auto sweep = truncation_sweep(returns, percents, order);
      for (const auto& n : sweep.notices) s.warn(n);
      json rows = json::array();
      if (csv) {
        target->stream() << "percent,length,";
        write_moment_header(target->stream(), order);
        target->stream() << '\n';
      }
      for (const auto& p : sweep.points) {
        if (csv) {
          auto& os = target->stream();
          os << format_double(p.percent) << ',' << p.length << ',';
          write_moment_fields(os, p.moments, order);
          os << '\n';
        }
        json row{{"percent", p.percent}, {"length", p.length}};
        row.update(moments_json(p.moments, order));
        rows.push_back(std::move(row));
      }
      s.results["prefixes"] = std::move(rows);
    } else {
      const auto m = standardized_moments(returns, order);
      if (csv) {
        auto& os = target->stream();
        os << "n,";
        write_moment_header(os, order);
        os << '\n' << m.sample_size << ',';
        write_moment_fields(os, m, order);
        os << '\n';
      }
      s.results = moments_json(m, order);
    }
  };
  return {sub, common, std::move(action)};
}

Registered register_region(CLI::App& app) {
  struct State {
    DistFlags dist;
    int resolution = 128;
    int scan_resolution = 512;
    std::vector<std::string> queries;
    std::string out;
  };
  auto st = std::make_shared<State>();
  auto common = std::make_shared<CommonFlags>();
  auto* sub = app.add_subcommand(
      "region", "Boundary of the attainable (Gamma4, Gamma6) region");
  add_dist_flags(*sub, st->dist);
  sub->add_option("--resolution", st->resolution, "Number of Gamma4 levels")
      ->capture_default_str();
  sub->add_option("--scan-resolution", st->scan_resolution,
                  "Samples along each level curve")
      ->capture_default_str();
  sub->add_option("--query", st->queries, "Classify a point g4,g6 (repeatable)");
  sub->add_option("--out", st->out, "Write the boundary CSV to a file");
  add_common_flags(*sub, *common);

  Action action = [st](Session& s) {
    const auto dist = resolve_distribution(st->dist, s.inputs);
    if (st->resolution < 2 || st->scan_resolution < 16)
      throw std::invalid_argument("--resolution >= 2 and --scan-resolution >= 16 required");
    std::vector<std::pair<double, double>> points;
    for (const auto& q : st->queries) {
      const auto v = parse_doubles(q, 2, "--query");
      points.emplace_back(v[0], v[1]);
    }
    s.inputs["resolution"] = st->resolution;
    s.inputs["scan_resolution"] = st->scan_resolution;
    json qin = json::array();
    for (const auto& [g4, g6] : points) qin.push_back(json::array({g4, g6}));
    s.inputs["queries"] = std::move(qin);

    const bool want_boundary = s.json_output || !st->out.empty() || points.empty();
    if (want_boundary) {
      const auto region =
          region_boundary(dist, st->resolution, st->scan_resolution, s.threads);
      if (!st->out.empty() || (!s.json_output && points.empty())) {
        OutputTarget target(st->out, s.out);
        write_region_csv(target.stream(), region);
      }
      s.results["gamma4_min"] = number(region.gamma4_min);
      s.results["gamma4_max"] = number(region.gamma4_max);
      json rows = json::array();
      for (const auto& b : region.boundary)
        rows.push_back({{"gamma4", number(b.gamma4)},
                        {"gamma6_min", number(b.gamma6_min)},
                        {"gamma6_max", number(b.gamma6_max)}});
      s.results["boundary"] = std::move(rows);
    }
    if (!points.empty()) {
      json rows = json::array();
      if (!s.json_output) s.out << "gamma4,gamma6,membership\n";
      for (const auto& [g4, g6] : points) {
        const auto m = to_string(region_membership(g4, g6, dist, st->scan_resolution));
        if (!s.json_output)
          s.out << format_double(g4) << ',' << format_double(g6) << ',' << m << '\n';
        rows.push_back({{"gamma4", g4}, {"gamma6", g6}, {"membership", m}});
      }
      s.results["queries"] = std::move(rows);
    }
  };
  return {sub, common, std::move(action)};
}

Registered register_fit(CLI::App& app) {
  struct State {
    DistFlags dist;
    std::string input;
    std::string moments;
    std::string from;
    std::string to;
    std::string method = "trajectory";
    FitOptions options;
  };
  auto st = std::make_shared<State>();
  auto common = std::make_shared<CommonFlags>();
  auto* sub = app.add_subcommand("fit", "Fit GARCH(1,1) parameters to (sigma^2, Gamma4, Gamma6)");
  sub->add_option("input", st->input, "CSV with date,close or date,return");
  sub->add_option("--moments", st->moments,
                  "Fit sigma_sq,gamma4,gamma6 directly instead of a series");
  sub->add_option("--from", st->from, "First date of the fitted window (inclusive)");
  sub->add_option("--to", st->to, "Last date of the fitted window (inclusive)");
  sub->add_option("--method", st->method, "trajectory, moment or both")
      ->capture_default_str();
  sub->add_option("--resolution", st->options.resolution, "Root-bracketing samples")
      ->capture_default_str();
  sub->add_option("--tol", st->options.residual_tol,
                  "Relative residual accepted on each moment")
      ->capture_default_str();
  add_dist_flags(*sub, st->dist);
  add_common_flags(*sub, *common);

  Action action = [st](Session& s) {
    if (st->input.empty() == st->moments.empty())
      throw std::invalid_argument("give either an input CSV or --moments");
    if (!st->moments.empty() && (!st->from.empty() || !st->to.empty()))
      throw std::invalid_argument("--from/--to need an input series");
    std::vector<FitMethod> methods;
    if (st->method == "trajectory") {
      methods = {FitMethod::trajectory};
    } else if (st->method == "moment") {
      methods = {FitMethod::moment_match};
    } else if (st->method == "both") {
      methods = {FitMethod::trajectory, FitMethod::moment_match};
    } else {
      throw std::invalid_argument("--method must be trajectory, moment or both");
    }
    const auto dist = resolve_distribution(st->dist, s.inputs);

    MomentSummary target;
    if (!st->moments.empty()) {
      const auto v = parse_doubles(st->moments, 3, "--moments");
      target.variance = v[0];
      target.gamma4 = v[1];
      target.gamma6 = v[2];
      s.inputs["moments"] = json{{"sigma_sq", v[0]}, {"gamma4", v[1]}, {"gamma6", v[2]}};
    } else {
      auto returns = load_returns(st->input);
      s.inputs["input"] = st->input;
      const auto& dates = returns.dates();
      std::size_t first = 0;
      std::size_t last = returns.size();
      if (!st->from.empty()) {
        first = std::lower_bound(dates.begin(), dates.end(), parse_iso_date(st->from)) -
                dates.begin();
        s.inputs["from"] = st->from;
      }
      if (!st->to.empty()) {
        last = std::upper_bound(dates.begin(), dates.end(), parse_iso_date(st->to)) -
               dates.begin();
        s.inputs["to"] = st->to;
      }
      if (last <= first) throw std::invalid_argument("the --from/--to window is empty");
      returns = returns.slice(first, last - first);
      target = standardized_moments(returns, 6);
      s.results["moments"] = moments_json(target, 6);
    }
    s.inputs["method"] = st->method;

    std::vector<FitResult> fits;
    for (auto m : methods) fits.push_back(fit(target, dist, m, st->options));

    if (!s.json_output)
      s.out << "method,root,roots,alpha0,alpha1,beta1,residual_sigma_sq,"
               "residual_gamma4,residual_gamma6\n";
    json jfits = json::array();
    for (const auto& f : fits) {
      json cands = json::array();
      for (std::size_t i = 0; i < f.candidates.size(); ++i) {
        const auto& p = f.candidates[i];
        const auto r = fit_residuals(p, dist, target);
        if (!s.json_output) {
          s.out << to_string(f.method) << ',' << i << ',' << f.root_count() << ','
                << format_double(p.alpha0) << ',' << format_double(p.alpha1) << ','
                << format_double(p.beta1) << ',' << format_double(r.sigma_sq) << ','
                << format_double(r.gamma4) << ',' << format_double(r.gamma6) << '\n';
        }
        json c = params_json(p);
        c["residuals"] = {{"sigma_sq", r.sigma_sq}, {"gamma4", r.gamma4}, {"gamma6", r.gamma6}};
        cands.push_back(std::move(c));
      }
      jfits.push_back({{"method", to_string(f.method)},
                       {"roots", f.root_count()},
                       {"candidates", std::move(cands)}});
    }
    s.results["fits"] = std::move(jfits);
    if (fits.size() > 1) {
      constexpr double kAgreement = 1e-8;
      const auto& a = fits[0];
      const auto& b = fits[1];
      const bool same_count = a.root_count() == b.root_count();
      double diff = 0.0;
      for (std::size_t i = 0; i < std::min(a.root_count(), b.root_count()); ++i) {
        diff = std::max({diff,
                         relative_difference(a.candidates[i].alpha0, b.candidates[i].alpha0),
                         relative_difference(a.candidates[i].alpha1, b.candidates[i].alpha1),
                         relative_difference(a.candidates[i].beta1, b.candidates[i].beta1)});
      }
      const bool agree = same_count && diff <= kAgreement;
      s.results["agreement"] = {{"max_relative_difference", diff},
                                {"same_root_count", same_count},
                                {"tolerance", kAgreement},
                                {"agree", agree}};
      if (!s.json_output)
        s.err << "cross-method max relative difference: " << format_double(diff) << '\n';
      if (!agree) {
        s.deferred = std::make_exception_ptr(NumericalError(
            "fitting methods disagree (relative difference " + format_double(diff) +
            (same_count ? ")" : ", different root counts)")));
      }
    }
    for (const auto& f : fits)
      if (f.root_count() > 1)
        s.warn(std::string(to_string(f.method)) + ": " + std::to_string(f.root_count()) +
               " parameter sets reproduce the moments; root 0 has the smallest alpha0");
  };
  return {sub, common, std::move(action)};
}

Registered register_rolling(CLI::App& app) {
  struct State {
    DistFlags dist;
    std::string input;
    std::string out;
    WindowSpec window;
    FitOptions options;
  };
  auto st = std::make_shared<State>();
  auto common = std::make_shared<CommonFlags>();
  auto* sub = app.add_subcommand("rolling", "Rolling-window GARCH fits, alpha0(t) and friends");
  sub->add_option("input", st->input, "CSV with date,close or date,return")->required();
  sub->add_option("--window", st->window.length, "Window length T in trading days")
      ->capture_default_str();
  sub->add_option("--step", st->window.step, "Shift between windows in days")
      ->capture_default_str();
  sub->add_option("--resolution", st->options.resolution, "Root-bracketing samples")
      ->capture_default_str();
  sub->add_option("--out", st->out, "Write the CSV to a file");
  add_dist_flags(*sub, st->dist);
  add_common_flags(*sub, *common);

  Action action = [st](Session& s) {
    st->window.validate();
    const auto dist = resolve_distribution(st->dist, s.inputs);
    const auto returns = load_returns(st->input);
    s.inputs["input"] = st->input;
    s.inputs["window"] = st->window.length;
    s.inputs["step"] = st->window.step;
    const auto fits = rolling_fit(returns, st->window, dist, st->options, s.threads);

    if (!s.json_output || !st->out.empty()) {
      OutputTarget target(st->out, s.out);
      write_rolling_csv(target.stream(), fits);
    }
    std::size_t counts[3] = {0, 0, 0};
    json rows = json::array();
    for (const auto& w : fits) {
      ++counts[static_cast<int>(w.status)];
      json row{{"median_date", format_iso_date(w.median_date)},
               {"first_index", w.first_index}};
      row["sigma_sq"] = w.moments ? number(w.moments->variance) : json(nullptr);
      row["gamma4"] = w.moments ? number(w.moments->gamma4) : json(nullptr);
      row["gamma6"] = w.moments ? number(w.moments->gamma6) : json(nullptr);
      row["alpha0"] = w.params ? json(w.params->alpha0) : json(nullptr);
      row["alpha1"] = w.params ? json(w.params->alpha1) : json(nullptr);
      row["beta1"] = w.params ? json(w.params->beta1) : json(nullptr);
      row["status"] = to_string(w.status);
      row["reason"] = w.reason;
      rows.push_back(std::move(row));
    }
    s.results["counts"] = {{"ok", counts[0]},
                           {"infeasible", counts[1]},
                           {"out_of_region", counts[2]}};
    s.results["windows"] = std::move(rows);
    if (counts[0] == 0) s.warn("no window could be fitted");
  };
  return {sub, common, std::move(action)};
}

Registered register_simulate(CLI::App& app) {
  struct State {
    DistFlags dist;
    GarchParams params;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::size_t burn_in = 10'000;
    std::string start = "2000-01-03";
    double initial_price = 100.0;
    double variance_cap = 1e12;
    bool returns = false;
    bool estimate = false;
    int order = 6;
    std::string out;
  };
  auto st = std::make_shared<State>();
  auto common = std::make_shared<CommonFlags>();
  auto* sub = app.add_subcommand("simulate", "Simulate a GARCH(1,1) path");
  sub->add_option("--alpha0", st->params.alpha0, "Variance intercept")->required();
  sub->add_option("--alpha1", st->params.alpha1, "ARCH coefficient")->required();
  sub->add_option("--beta1", st->params.beta1, "GARCH coefficient")->required();
  sub->add_option("--n", st->n, "Number of returns kept")->required();
  sub->add_option("--seed", st->seed, "Generator seed")->capture_default_str();
  sub->add_option("--burn-in", st->burn_in, "Discarded initial steps")->capture_default_str();
  sub->add_option("--start-date", st->start, "Date of the initial price")
      ->capture_default_str();
  sub->add_option("--initial-price", st->initial_price, "First close")
      ->capture_default_str();
  sub->add_option("--variance-cap", st->variance_cap,
                  "Abort when sigma_t^2 exceeds this multiple of the initial variance")
      ->capture_default_str();
  sub->add_flag("--returns", st->returns, "Emit date,return instead of date,close");
  sub->add_flag("--estimate", st->estimate,
                "Emit moment estimates with batch-means standard errors instead of the path");
  sub->add_option("--order", st->order, "Highest even order for --estimate")
      ->capture_default_str();
  sub->add_option("--out", st->out, "Write the CSV to a file");
  add_dist_flags(*sub, st->dist);
  add_common_flags(*sub, *common);

  Action action = [st](Session& s) {
    const auto dist = resolve_distribution(st->dist, s.inputs);
    if (!(st->initial_price > 0.0)) throw std::invalid_argument("--initial-price must be positive");
    if (st->order < 4 || st->order > 12 || st->order % 2 != 0)
      throw std::invalid_argument("--order must be one of 4, 6, 8, 10, 12");
    SimConfig config;
    config.params = st->params;
    config.dist = dist;
    config.n_steps = st->n;
    config.burn_in = st->burn_in;
    config.seed = st->seed;
    config.variance_cap = st->variance_cap;
    config.start_date = parse_iso_date(st->start);
    config.validate();
    s.inputs["params"] = params_json(st->params);
    s.inputs["n"] = st->n;
    s.inputs["seed"] = st->seed;
    s.inputs["burn_in"] = st->burn_in;
    s.inputs["variance_cap"] = st->variance_cap;

    if (st->estimate) {
      const auto e = mc_moment_estimate(config, st->order);
      s.inputs["order"] = st->order;
      json rows = json::array();
      const bool csv = !s.json_output || !st->out.empty();
      std::optional<OutputTarget> target;
      if (csv) {
        target.emplace(st->out, s.out);
        target->stream() << "statistic,value,standard_error\n";
      }
      for (int k = 2; k <= st->order; k += 2) {
        const std::string name = k == 2 ? "sigma_sq" : "gamma" + std::to_string(k);
        const double v = k == 2 ? e.summary.variance : e.summary.gamma(k);
        const double se = e.standard_error(k);
        if (csv)
          target->stream() << name << ',' << format_double(v) << ',' << format_double(se)
                           << '\n';
        rows.push_back({{"statistic", name}, {"value", number(v)}, {"standard_error", number(se)}});
        if (!e.reliable(k)) s.warn(name + " has a relative standard error above 20%");
      }
      s.results["batches"] = e.batches;
      s.results["estimates"] = std::move(rows);
      return;
    }

    s.inputs["start_date"] = st->start;
    const auto values = simulate_returns(config);
    const auto dates = business_days(config.start_date, values.size() + 1);
    const bool csv = !s.json_output || !st->out.empty();
    std::optional<OutputTarget> target;
    if (csv) target.emplace(st->out, s.out);
    json rows = json::array();
    if (st->returns) {
      s.inputs["output"] = "returns";
      const ReturnSeries series({dates.begin(), dates.end() - 1}, values);
      if (csv) write_returns_csv(target->stream(), series);
      if (s.json_output && st->out.empty())
        for (std::size_t i = 0; i < values.size(); ++i)
          rows.push_back({{"date", format_iso_date(dates[i])}, {"return", values[i]}});
    } else {
      s.inputs["output"] = "prices";
      s.inputs["initial_price"] = st->initial_price;
      const PriceSeries series(dates, cumulate_prices(values, st->initial_price));
      if (csv) write_prices_csv(target->stream(), series);
      if (s.json_output && st->out.empty())
        for (std::size_t i = 0; i < series.size(); ++i)
          rows.push_back({{"date", format_iso_date(dates[i])}, {"close", series.prices()[i]}});
    }
    s.results["rows"] = st->returns ? values.size() : values.size() + 1;
    if (s.json_output && st->out.empty()) s.results["series"] = std::move(rows);
  };
  return {sub, common, std::move(action)};
}

}  // namespace garchmom::cli
