#include <cmath>
#include <cstdlib>
#include <optional>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <httplib.h>

#include "api.hpp"
#include "http.hpp"
#include "survpower/design_effect.hpp"
#include "survpower/error.hpp"
#include "survpower/normal.hpp"
#include "survpower/survival.hpp"
#include "survpower/version.hpp"

namespace api = survpower::api;
using api::Json;

namespace {

struct CommandFlags {
  std::string json = "-";
  std::string out;
  std::string replicates_csv;
  std::optional<std::uint64_t> seed;
  bool pretty = false;
};

std::string slurp(const std::string& source) {
  if (source == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(source, std::ios::binary);
  if (!in) throw survpower::Error(survpower::ErrorCode::kValidation, "cannot read " + source, "json");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int emit(const Json& doc, int code, const CommandFlags& flags) {
  const std::string text = api::render(doc, flags.pretty);
  if (flags.out.empty() || code != api::kExitOk) {
    std::cout << text;
  } else {
    std::ofstream out(flags.out, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << flags.out << "\n";
      return api::kExitInternal;
    }
    out << text;
  }
  return code;
}

int write_replicates_csv(const Json& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    std::cerr << "cannot write " << path << "\n";
    return api::kExitInternal;
  }
  out << "replicate,tau_hat,robust_se\n";
  out.precision(17);
  std::size_t k = 0;
  for (const auto& row : report.at("replicates")) {
    out << k++ << ',' << row.at("tau_hat").get<double>() << ','
        << row.at("robust_se").get<double>() << '\n';
  }
  return api::kExitOk;
}

int run_command(const std::string& command, const CommandFlags& flags) {
  api::Response res;
  try {
    const std::string text = slurp(flags.json);
    Json payload = Json::parse(text, nullptr, false);
    if (payload.is_discarded()) {
      res = {api::kExitValidation, api::error_document("validation", "malformed JSON input", "json")};
      return emit(res.body, res.exit_code, flags);
    }
    if (flags.seed) {
      if (command == "rct" || command == "bounds") {
        res = {api::kExitValidation,
               api::error_document("validation", command + " takes no seed", "seed")};
        return emit(res.body, res.exit_code, flags);
      }
      if (payload.is_object()) payload["seed"] = *flags.seed;
    }
    if (!flags.replicates_csv.empty() && payload.is_object()) payload["replicates"] = true;
    res = api::dispatch(command, payload);
  } catch (const survpower::Error& e) {
    res = {api::kExitValidation, api::error_document("validation", e.what(), e.field())};
  }
  if (res.exit_code == api::kExitOk && !flags.replicates_csv.empty()) {
    if (int rc = write_replicates_csv(res.body, flags.replicates_csv); rc != 0) return rc;
  }
  return emit(res.body, res.exit_code, flags);
}

int run_fit(const std::string& csv, const std::string& scheme_name, double alpha,
            const std::string& alternative, bool pretty) {
  using namespace survpower;
  try {
    std::ifstream in(csv);
    if (!in) throw Error(ErrorCode::kValidation, "cannot read " + csv, "csv");
    std::vector<SubjectRecord> records = read_subject_records_csv(in);
    if (scheme_name != "none" && scheme_name != "given") {
      WeightKind kind = WeightKind::kIpw;
      if (scheme_name == "overlap") kind = WeightKind::kOverlap;
      else if (scheme_name == "treated") kind = WeightKind::kTreated;
      else if (scheme_name != "ipw") throw Error(ErrorCode::kValidation, "unknown scheme", "scheme");
      const LogisticFit ps = fit_logistic_ps(records);
      double r_hat = 0.0;
      for (const auto& rec : records) r_hat += rec.z;
      r_hat /= static_cast<double>(records.size());
      const WeightScheme w = WeightScheme::of_kind(kind, r_hat);
      for (std::size_t i = 0; i < records.size(); ++i)
        records[i].weight = w.weight(records[i].z, ps.fitted[i]);
    } else if (scheme_name == "none") {
      for (auto& rec : records) rec.weight = 1.0;
    }
    const CoxFit fit = fit_weighted_cox(records);
    Alternative alt = Alternative::kTwoSided;
    if (alternative == "less") alt = Alternative::kLess;
    else if (alternative == "greater") alt = Alternative::kGreater;
    const WaldResult wald = wald_test(fit.tau_hat, fit.robust_se, 0.0, alpha, alt);
    const double z = critical_value(0.05, Sides::kTwo);
    Json doc{{"command", "fit"},
             {"n", records.size()},
             {"scheme", scheme_name},
             {"tau_hat", fit.tau_hat},
             {"hazard_ratio", std::exp(fit.tau_hat)},
             {"robust_se", fit.robust_se},
             {"naive_se", fit.naive_se},
             {"ci95", {std::exp(fit.tau_hat - z * fit.robust_se), std::exp(fit.tau_hat + z * fit.robust_se)}},
             {"wald", {{"alternative", alternative}, {"statistic", wald.statistic},
                       {"p_value", wald.p_value}, {"reject", wald.reject}}},
             {"engine", {{"name", "survpower"}, {"version", kVersion}}}};
    std::cout << api::render(doc, pretty);
    return api::kExitOk;
  } catch (const Error& e) {
    const int code = e.code() == ErrorCode::kValidation ? api::kExitValidation
                     : (e.code() == ErrorCode::kConvergence || e.code() == ErrorCode::kSeparation)
                         ? api::kExitConvergence
                         : api::kExitDomain;
    std::cout << api::render(api::error_document(to_string(e.code()), e.what(),
                                                 e.field().empty() ? Json(nullptr) : Json(e.field())),
                             pretty);
    return code;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sample size and power for the causal marginal hazard ratio", "survpower"};
  app.set_version_flag("--version", std::string(survpower::kVersion));
  app.require_subcommand(1);

  CommandFlags flags;
  const std::pair<const char*, const char*> commands[] = {
      {"rct", "Randomized-trial sample size"},
      {"obs", "Observational (propensity-weighted) sample size"},
      {"vif", "Monte Carlo design effect of a weighting scheme"},
      {"bounds", "Sensitivity bounds on the observational variance"},
      {"curve", "Power or sample-size sweep"},
      {"simulate", "Synthetic-data check of a sample-size formula"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--json", flags.json, "Payload file, or - for stdin")->capture_default_str();
    sub->add_option("--seed", flags.seed, "Override the payload seed");
    sub->add_option("--out", flags.out, "Write the result document here");
    sub->add_flag("--pretty", flags.pretty, "Indent the output");
    if (std::string(name) == "simulate")
      sub->add_option("--replicates-csv", flags.replicates_csv, "Per-replicate estimates as CSV");
  }

  std::string bind;
  std::string static_dir;
  auto* serve = app.add_subcommand("serve", "Run the JSON HTTP service");
  serve->add_option("--bind", bind, std::string("host:port (default $") + api::kBindEnv +
                                        " or 127.0.0.1:8080)");
  serve->add_option("--static", static_dir, "Directory of static files served at /");

  std::string csv;
  std::string scheme = "ipw";
  double alpha = 0.05;
  std::string alternative = "two-sided";
  bool fit_pretty = false;
  auto* fit = app.add_subcommand("fit", "Weighted Cox fit of a subject-level CSV");
  fit->add_option("--csv", csv, "time,event,z,x1..xp[,weight]")->required();
  fit->add_option("--scheme", scheme, "ipw, overlap, treated, given or none")
      ->check(CLI::IsMember({"ipw", "overlap", "treated", "given", "none"}))
      ->capture_default_str();
  fit->add_option("--alpha", alpha)->capture_default_str();
  fit->add_option("--alternative", alternative)
      ->check(CLI::IsMember({"less", "greater", "two-sided"}))
      ->capture_default_str();
  fit->add_flag("--pretty", fit_pretty);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : api::kExitValidation;
  }

  if (*serve) {
    if (bind.empty()) {
      const char* env = std::getenv(api::kBindEnv);
      bind = env ? env : "127.0.0.1:8080";
    }
    api::BindAddress addr;
    try {
      addr = api::parse_bind(bind);
    } catch (const survpower::Error& e) {
      std::cerr << e.what() << "\n";
      return api::kExitValidation;
    }
    httplib::Server server;
    api::install_routes(server, static_dir);
    std::cerr << "survpower " << survpower::kVersion << " listening on " << addr.host << ':'
              << addr.port << "\n";
    return server.listen(addr.host, addr.port) ? 0 : api::kExitInternal;
  }
  if (*fit) return run_fit(csv, scheme, alpha, alternative, fit_pretty);

  for (const auto& [name, help] : commands) {
    if (app.got_subcommand(name)) return run_command(name, flags);
  }
  return api::kExitValidation;
}
