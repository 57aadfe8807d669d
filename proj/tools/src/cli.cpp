#include <garchmom/cli.hpp>

#include <garchmom/error.hpp>
#include <garchmom/mixture.hpp>
#include <garchmom/parallel.hpp>

#include "context.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace garchmom::cli {

void add_common_flags(CLI::App& sub, CommonFlags& flags) {
  sub.add_flag("--json", flags.json_output,
               "Emit a JSON envelope {command, inputs, results, warnings}");
  sub.add_option("--threads", flags.threads,
                 "Worker threads (0: GARCHMOM_THREADS or hardware concurrency)")
      ->capture_default_str();
}

void add_dist_flags(CLI::App& sub, DistFlags& flags) {
  sub.add_flag("--normal", flags.normal, "Gaussian innovations (the default)");
  sub.add_flag("--mixture", flags.mixture,
               "Double-gaussian innovations; needs --eta4 and --eta6");
  flags.dist_opt = sub.add_option(
      "--dist", flags.dist,
      "normal, mixture, preset:red (5, 41.7), preset:blue (7, 81.7) or "
      "preset:green (12, 240)");
  flags.eta4_opt = sub.add_option("--eta4", flags.eta4, "Innovation E[z^4]");
  flags.eta6_opt = sub.add_option("--eta6", flags.eta6, "Innovation E[z^6]");
  sub.add_flag("--allow-boundary", flags.allow_boundary,
               "Accept eta6 on the (15/9) eta4^2 bound");
}

ConditionalDistribution resolve_distribution(const DistFlags& flags, json& inputs) {
  const bool has4 = flags.eta4_opt && flags.eta4_opt->count() > 0;
  const bool has6 = flags.eta6_opt && flags.eta6_opt->count() > 0;
  if (has6 && !has4) throw std::invalid_argument("--eta6 given without --eta4");
  if (has4 && !has6) throw std::invalid_argument("--eta4 given without --eta6");

  std::string kind = flags.dist;
  if (flags.normal) {
    if (flags.mixture || has4 || (!kind.empty() && kind != "normal"))
      throw std::invalid_argument("--normal conflicts with mixture settings");
    kind = "normal";
  }
  if (flags.mixture) {
    if (!kind.empty() && kind != "mixture")
      throw std::invalid_argument("--mixture conflicts with --dist " + kind);
    kind = "mixture";
  }
  if (kind.empty()) kind = has4 ? "mixture" : "normal";

  double eta4 = flags.eta4;
  double eta6 = flags.eta6;
  std::string preset;
  if (kind.rfind("preset:", 0) == 0) {
    if (has4) throw std::invalid_argument("a preset fixes eta4 and eta6");
    preset = kind.substr(7);
    bool found = false;
    for (const auto& p : kEtaPresets) {
      if (preset == p.name) {
        eta4 = p.eta4;
        eta6 = p.eta6;
        found = true;
      }
    }
    if (!found) throw std::invalid_argument("unknown preset '" + preset + "'");
  } else if (kind == "mixture") {
    if (!has4) throw std::invalid_argument("mixture innovations need --eta4 and --eta6");
  } else if (kind == "normal") {
    if (has4) throw std::invalid_argument("--eta4/--eta6 given with normal innovations");
    inputs["distribution"] = json{{"kind", "normal"}};
    return ConditionalDistribution::normal();
  } else {
    throw std::invalid_argument("unknown distribution '" + kind + "'");
  }

  const auto m = MixtureParams::from_eta(eta4, eta6, {flags.allow_boundary});
  json d{{"kind", "mixture"}};
  if (!preset.empty()) d["preset"] = preset;
  d["eta4"] = eta4;
  d["eta6"] = eta6;
  d["a"] = m.a();
  d["sigma1_sq"] = m.sigma1_sq();
  d["sigma2_sq"] = m.sigma2_sq();
  inputs["distribution"] = std::move(d);
  return ConditionalDistribution::mixture(m);
}

json number(double value) {
  if (std::isfinite(value)) return value;
  return nullptr;
}

OutputTarget::OutputTarget(const std::string& path, std::ostream& fallback)
    : fallback_(fallback) {
  if (path.empty()) return;
  file_.open(path, std::ios::binary);
  if (!file_) throw IoError("cannot write '" + path + "'");
}

namespace {

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::io: return kIo;
    case ErrorKind::infeasible: return kInfeasible;
    case ErrorKind::out_of_region: return kOutOfRegion;
    case ErrorKind::numerical: return kNumerical;
  }
  return kInternal;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"GARCH(1,1) higher-moment analysis", "garchmom"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "garchmom 0.1.0");

  std::vector<Registered> commands{register_moments(app), register_region(app),
                                   register_fit(app), register_rolling(app),
                                   register_simulate(app)};

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  for (auto& command : commands) {
    if (!command.sub->parsed()) continue;
    Session session{out, err, false, 0, json::object(), json::object(), {}, nullptr};
    session.json_output = command.common->json_output;
    session.threads =
        command.common->threads ? command.common->threads : default_thread_count();
    try {
      command.action(session);
      if (session.json_output) {
        json envelope;
        envelope["command"] = command.sub->get_name();
        envelope["inputs"] = std::move(session.inputs);
        envelope["results"] = std::move(session.results);
        envelope["warnings"] = session.warnings;
        out << envelope.dump(2) << '\n';
      } else {
        for (const auto& w : session.warnings) err << "warning: " << w << '\n';
      }
      out.flush();
      if (session.deferred) std::rethrow_exception(session.deferred);
      return kOk;
    } catch (const Error& e) {
      err << "error: " << e.what() << '\n';
      return exit_code(e.kind());
    } catch (const std::logic_error& e) {
      err << "error: " << e.what() << '\n';
      return kUsage;
    } catch (const std::exception& e) {
      err << "internal error: " << e.what() << '\n';
      return kInternal;
    }
  }
  return kInternal;
}

}  // namespace garchmom::cli
