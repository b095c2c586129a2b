// betarma: beta autoregressive moving average modeling from the command line.
//
// Subcommands: fit, bootstrap, forecast, simulate, select, mc-study,
// diagnose. Structured outputs are JSON, series and tables are CSV; every
// output file is written atomically and the exit code is 0 only when the
// requested artifact was fully written.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "betarma/bootstrap.hpp"
#include "betarma/diagnostics.hpp"
#include "betarma/estimation.hpp"
#include "betarma/forecast.hpp"
#include "betarma/io.hpp"
#include "betarma/mc_study.hpp"
#include "betarma/model.hpp"
#include "betarma/serialize.hpp"

namespace {

using namespace barma;

struct CommonModelArgs {
  std::string input;
  int p = 0;
  int q = 0;
  std::string link = "logit";
  bool percent = false;
};

void add_model_args(CLI::App* cmd, CommonModelArgs& args) {
  cmd->add_option("--input", args.input, "input series CSV")->required();
  cmd->add_option("-p,--p", args.p, "AR order")->required();
  cmd->add_option("-q,--q", args.q, "MA order")->required();
  cmd->add_option("--link", args.link, "link function (logit, probit, cloglog)")
      ->default_val("logit");
  cmd->add_flag("--percent", args.percent, "input values are percentages in (0,100)");
}

std::vector<Scenario> load_scenarios_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json doc = nlohmann::json::parse(in);
  std::vector<Scenario> out;
  for (const auto& js : doc.at("scenarios")) {
    Scenario s;
    s.order.p = js.at("p").get<int>();
    s.order.q = js.at("q").get<int>();
    s.truth.alpha = js.at("alpha").get<double>();
    if (js.contains("ar")) s.truth.ar = js.at("ar").get<std::vector<double>>();
    if (js.contains("ma")) s.truth.ma = js.at("ma").get<std::vector<double>>();
    s.truth.precision = js.at("precision").get<double>();
    s.link = link_from_name(js.value("link", std::string("logit")));
    s.n = js.at("n").get<int>();
    s.label = js.at("label").get<std::string>();
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"beta ARMA modeling toolkit"};
  app.set_version_flag("--version", "betarma 0.1.0");
  app.require_subcommand(1);

  // ---- fit ----
  CommonModelArgs fit_args;
  double fit_level = 0.95;
  std::string fit_out;
  CLI::App* cmd_fit = app.add_subcommand("fit", "conditional maximum likelihood fit");
  add_model_args(cmd_fit, fit_args);
  cmd_fit->add_option("--level", fit_level, "confidence level")->default_val(0.95);
  cmd_fit->add_option("--out", fit_out, "output JSON path")->required();

  // ---- bootstrap ----
  CommonModelArgs boot_args;
  int boot_B = 1000;
  double boot_level = 0.95;
  std::uint64_t boot_seed = 1;
  bool boot_replicates = false;
  std::string boot_out;
  CLI::App* cmd_boot =
      app.add_subcommand("bootstrap", "parametric bootstrap correction and intervals");
  add_model_args(cmd_boot, boot_args);
  cmd_boot->add_option("--B", boot_B, "bootstrap replicates")->default_val(1000);
  cmd_boot->add_option("--level", boot_level, "confidence level")->default_val(0.95);
  cmd_boot->add_option("--seed", boot_seed, "RNG seed")->default_val(1);
  cmd_boot->add_flag("--include-replicates", boot_replicates,
                     "embed the replicate matrix in the output");
  cmd_boot->add_option("--out", boot_out, "output JSON path")->required();

  // ---- forecast ----
  CommonModelArgs fc_args;
  int fc_horizon = 1;
  int fc_holdout = 0;
  std::string fc_out;
  CLI::App* cmd_fc = app.add_subcommand("forecast", "h-step mean forecasts");
  add_model_args(cmd_fc, fc_args);
  cmd_fc->add_option("--horizon", fc_horizon, "forecast horizon");
  cmd_fc->add_option("--holdout", fc_holdout,
                     "reserve the last H observations and report accuracy metrics");
  cmd_fc->add_option("--out", fc_out, "output JSON path")->required();

  // ---- simulate ----
  int sim_n = 0;
  int sim_burn = -1;
  double sim_alpha = 0.0;
  std::vector<double> sim_ar, sim_ma;
  double sim_precision = 0.0;
  std::string sim_link = "logit";
  std::uint64_t sim_seed = 1;
  std::string sim_out;
  CLI::App* cmd_sim = app.add_subcommand("simulate", "draw a synthetic series");
  cmd_sim->add_option("--n", sim_n, "series length")->required();
  cmd_sim->add_option("--burn-in", sim_burn, "burn-in steps (default 100+m)");
  cmd_sim->add_option("--alpha", sim_alpha, "constant")->required();
  cmd_sim->add_option("--ar", sim_ar, "AR coefficients")->delimiter(',');
  cmd_sim->add_option("--ma", sim_ma, "MA coefficients")->delimiter(',');
  cmd_sim->add_option("--precision", sim_precision, "precision")->required();
  cmd_sim->add_option("--link", sim_link, "link function")->default_val("logit");
  cmd_sim->add_option("--seed", sim_seed, "RNG seed")->default_val(1);
  cmd_sim->add_option("--out", sim_out, "output CSV path")->required();

  // ---- select ----
  std::string sel_input, sel_link = "logit", sel_out, sel_grid_out;
  int sel_pmax = 6, sel_qmax = 6;
  bool sel_percent = false;
  CLI::App* cmd_sel = app.add_subcommand("select", "exhaustive AIC order search");
  cmd_sel->add_option("--input", sel_input, "input series CSV")->required();
  cmd_sel->add_option("--p-max", sel_pmax, "maximum AR order")->default_val(6);
  cmd_sel->add_option("--q-max", sel_qmax, "maximum MA order")->default_val(6);
  cmd_sel->add_option("--link", sel_link, "link function")->default_val("logit");
  cmd_sel->add_flag("--percent", sel_percent, "input values are percentages");
  cmd_sel->add_option("--out", sel_out, "winner JSON path")->required();
  cmd_sel->add_option("--grid", sel_grid_out, "grid CSV path (default: stdout)");

  // ---- mc-study ----
  std::string mc_preset = "paper-s4", mc_config, mc_out, mc_csv;
  std::vector<int> mc_sizes = {20, 30, 50, 100};
  int mc_nmc = 1000, mc_nboot = 1000;
  double mc_level = 0.95;
  std::uint64_t mc_seed = 1;
  CLI::App* cmd_mc = app.add_subcommand("mc-study", "Monte Carlo evaluation study");
  cmd_mc->add_option("--preset", mc_preset, "scenario preset name")->default_val("paper-s4");
  cmd_mc->add_option("--config", mc_config, "custom scenario JSON file (overrides preset)");
  cmd_mc->add_option("--sizes", mc_sizes, "sample sizes for the preset")->delimiter(',');
  cmd_mc->add_option("--n-mc", mc_nmc, "Monte Carlo replications")->default_val(1000);
  cmd_mc->add_option("--n-boot", mc_nboot, "bootstrap replicates per replication")
      ->default_val(1000);
  cmd_mc->add_option("--level", mc_level, "confidence level")->default_val(0.95);
  cmd_mc->add_option("--seed", mc_seed, "RNG seed")->default_val(1);
  cmd_mc->add_option("--out", mc_out, "report JSON path")->required();
  cmd_mc->add_option("--csv", mc_csv, "also write the tables as CSV");

  // ---- diagnose ----
  CommonModelArgs diag_args;
  int diag_maxlag = 20;
  std::string diag_out, diag_acf_out;
  CLI::App* cmd_diag =
      app.add_subcommand("diagnose", "fitted path, standardized residuals, correlograms");
  add_model_args(cmd_diag, diag_args);
  cmd_diag->add_option("--max-lag", diag_maxlag, "correlogram lags")->default_val(20);
  cmd_diag->add_option("--out", diag_out, "residual/fit CSV path")->required();
  cmd_diag->add_option("--correlogram", diag_acf_out, "ACF/PACF CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_fit->parsed()) {
      const BoundedSeries y = ingest_csv(fit_args.input, fit_args.percent);
      const ModelOrder order{fit_args.p, fit_args.q};
      const FitReport report = fit(order, link_from_name(fit_args.link), y);
      std::vector<ConfidenceInterval> ci;
      if (report.converged && report.info_ok) ci = asymptotic_ci(report, fit_level);
      write_text_atomic(fit_out, fit_with_ci_json(report, ci));
      if (!report.converged)
        std::cerr << "warning: optimizer did not converge (see the report)\n";
    } else if (cmd_boot->parsed()) {
      const BoundedSeries y = ingest_csv(boot_args.input, boot_args.percent);
      const ModelOrder order{boot_args.p, boot_args.q};
      const LinkKind lk = link_from_name(boot_args.link);
      const FitReport report = fit(order, lk, y);
      if (!report.converged)
        throw std::runtime_error("fit did not converge; bootstrap aborted");
      const BootstrapResult boot =
          run_bootstrap(order, lk, y, report, boot_B, RngStream(boot_seed));
      write_text_atomic(boot_out, bootstrap_json(report, boot, boot_level, boot_replicates));
    } else if (cmd_fc->parsed()) {
      BoundedSeries y = ingest_csv(fc_args.input, fc_args.percent);
      const ModelOrder order{fc_args.p, fc_args.q};
      const LinkKind lk = link_from_name(fc_args.link);

      std::optional<ForecastAccuracy> metrics;
      int horizon = fc_horizon;
      if (fc_holdout > 0) {
        if (y.n() <= fc_holdout + order.m() + 2)
          throw std::runtime_error("holdout leaves too few observations for fitting");
        horizon = fc_holdout;
        std::vector<double> head(y.values.begin(), y.values.end() - fc_holdout);
        const std::vector<double> tail(y.values.end() - fc_holdout, y.values.end());
        y = BoundedSeries::from_values(std::move(head));
        const FitReport report = fit(order, lk, y);
        const MeanPath path = mean_recursion(order, report.estimate, lk, y);
        const ForecastPath fc = forecast(order, report.estimate, lk, y, path, horizon);
        metrics = accuracy(tail, fc.mu_hat);
        write_text_atomic(fc_out, forecast_json(fc, metrics));
      } else {
        const FitReport report = fit(order, lk, y);
        const MeanPath path = mean_recursion(order, report.estimate, lk, y);
        const ForecastPath fc = forecast(order, report.estimate, lk, y, path, horizon);
        write_text_atomic(fc_out, forecast_json(fc, metrics));
      }
    } else if (cmd_sim->parsed()) {
      ModelOrder order{static_cast<int>(sim_ar.size()), static_cast<int>(sim_ma.size())};
      ParamVector params;
      params.alpha = sim_alpha;
      params.ar = sim_ar;
      params.ma = sim_ma;
      params.precision = sim_precision;
      const int burn = sim_burn >= 0 ? sim_burn : default_burn_in(order);
      RngStream rng = RngStream(sim_seed);
      const BoundedSeries y =
          simulate(order, params, link_from_name(sim_link), sim_n, burn, rng);
      write_text_atomic(sim_out, series_to_csv(y));
    } else if (cmd_sel->parsed()) {
      const BoundedSeries y = ingest_csv(sel_input, sel_percent);
      const OrderSearchResult sel =
          select_order(link_from_name(sel_link), y, sel_pmax, sel_qmax);
      if (sel_grid_out.empty())
        std::cout << selection_grid_csv(sel);
      else
        write_text_atomic(sel_grid_out, selection_grid_csv(sel));
      write_text_atomic(sel_out, selection_json(sel));
    } else if (cmd_mc->parsed()) {
      StudyConfig cfg;
      cfg.scenarios = mc_config.empty() ? preset_scenarios(mc_preset, mc_sizes)
                                        : load_scenarios_file(mc_config);
      cfg.n_mc = mc_nmc;
      cfg.n_boot = mc_nboot;
      cfg.level = mc_level;
      cfg.seed = mc_seed;
      const StudyResult result = run_study(cfg);
      write_text_atomic(mc_out, emit_tables(result, TableFormat::json));
      if (!mc_csv.empty()) write_text_atomic(mc_csv, emit_tables(result, TableFormat::csv));
    } else if (cmd_diag->parsed()) {
      const BoundedSeries y = ingest_csv(diag_args.input, diag_args.percent);
      const ModelOrder order{diag_args.p, diag_args.q};
      const LinkKind lk = link_from_name(diag_args.link);
      const FitReport report = fit(order, lk, y);
      if (!report.converged)
        throw std::runtime_error("fit did not converge; diagnostics aborted");
      const MeanPath path = mean_recursion(order, report.estimate, lk, y);
      const std::vector<double> sres = standardized_residuals(report, path);
      write_text_atomic(diag_out, diagnostics_csv(y, path, sres, order.m()));
      if (!diag_acf_out.empty()) {
        const std::vector<double> acf = sample_acf(sres, diag_maxlag);
        const std::vector<double> pacf = sample_pacf(sres, diag_maxlag);
        write_text_atomic(diag_acf_out, correlogram_csv(acf, pacf));
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
