#include "betarma/serialize.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace barma {

namespace {

using nlohmann::json;

json report_fields(const FitReport& report) {
  return json{{"alpha", report.estimate.alpha},
              {"ar", report.estimate.ar},
              {"ma", report.estimate.ma},
              {"precision", report.estimate.precision},
              {"loglik", report.loglik},
              {"converged", report.converged},
              {"iterations", report.iterations},
              {"grad_norm", report.grad_norm},
              {"info_matrix", report.info_matrix}};
}

json ci_fields(const std::vector<ConfidenceInterval>& ci, const ModelOrder& order) {
  json out = json::array();
  for (std::size_t r = 0; r < ci.size(); ++r) {
    out.push_back({{"coordinate", coord_name(order, static_cast<int>(r))},
                   {"lower", ci[r].lower},
                   {"upper", ci[r].upper}});
  }
  return out;
}

std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string fit_report_json(const FitReport& report) {
  return report_fields(report).dump(2) + "\n";
}

FitReport fit_report_from_json(const std::string& text) {
  const json j = json::parse(text);
  FitReport report;
  report.estimate.alpha = j.at("alpha").get<double>();
  report.estimate.ar = j.at("ar").get<std::vector<double>>();
  report.estimate.ma = j.at("ma").get<std::vector<double>>();
  report.estimate.precision = j.at("precision").get<double>();
  report.order = ModelOrder{static_cast<int>(report.estimate.ar.size()),
                            static_cast<int>(report.estimate.ma.size())};
  report.loglik = j.at("loglik").get<double>();
  report.converged = j.at("converged").get<bool>();
  report.iterations = j.at("iterations").get<int>();
  report.grad_norm = j.at("grad_norm").get<double>();
  report.info_matrix = j.at("info_matrix").get<std::vector<double>>();
  report.info_ok = !report.info_matrix.empty();
  return report;
}

std::string fit_with_ci_json(const FitReport& report,
                             const std::vector<ConfidenceInterval>& ci) {
  json doc;
  doc["fit"] = report_fields(report);
  if (!ci.empty()) {
    doc["ci"] = {{"level", ci.front().level},
                 {"asymptotic", ci_fields(ci, report.order)}};
  }
  return doc.dump(2) + "\n";
}

std::string bootstrap_json(const FitReport& report, const BootstrapResult& boot,
                           double level, bool include_replicates) {
  json doc;
  doc["fit"] = report_fields(report);
  doc["bootstrap"] = {{"requested_B", boot.requested_B},
                      {"effective_B", boot.effective_B()},
                      {"n_failed", boot.n_failed},
                      {"mean_star", boot.mean_star},
                      {"se_boot", boot.se_boot},
                      {"corrected",
                       {{"alpha", boot.corrected.alpha},
                        {"ar", boot.corrected.ar},
                        {"ma", boot.corrected.ma},
                        {"precision", boot.corrected.precision}}},
                      {"precision_floored", boot.precision_floored}};
  if (include_replicates) {
    doc["bootstrap"]["replicates"] = boot.replicates;
  }

  json cis;
  cis["level"] = level;
  cis["asymptotic"] = ci_fields(asymptotic_ci(report, level), report.order);
  cis["boot_se"] = ci_fields(ci_boot_se(report, boot, level), report.order);
  cis["boot_t"] = ci_fields(ci_boot_t(report, boot, level), report.order);
  cis["percentile"] = ci_fields(ci_percentile(boot, level), report.order);
  cis["unbiased_centered"] =
      ci_fields(ci_unbiased_centered(report, boot, level), report.order);
  doc["ci"] = std::move(cis);
  return doc.dump(2) + "\n";
}

std::string forecast_json(const ForecastPath& path,
                          const std::optional<ForecastAccuracy>& metrics) {
  json doc;
  doc["horizon"] = path.horizon();
  doc["mu_hat"] = path.mu_hat;
  if (metrics) {
    doc["metrics"] = {{"mse", metrics->mse}, {"mape", metrics->mape}, {"mase", metrics->mase}};
  }
  return doc.dump(2) + "\n";
}

std::string selection_json(const OrderSearchResult& sel) {
  json doc;
  doc["best"] = {{"p", sel.best.p}, {"q", sel.best.q}};
  doc["aic"] = aic_of(sel.best_fit);
  doc["fit"] = report_fields(sel.best_fit);
  return doc.dump(2) + "\n";
}

std::string selection_grid_csv(const OrderSearchResult& sel) {
  std::string out = "p,q,aic,converged\n";
  for (const OrderSearchCell& c : sel.grid) {
    out += std::to_string(c.p) + "," + std::to_string(c.q) + ",";
    out += c.converged ? fmt_num(c.aic) : "NA";
    out += c.converged ? ",1\n" : ",0\n";
  }
  return out;
}

std::string diagnostics_csv(const BoundedSeries& y, const MeanPath& path,
                            const std::vector<double>& std_resid, int m) {
  std::string out = "t,y,mu_hat,resid,std_resid\n";
  for (int t = 0; t < y.n(); ++t) {
    out += std::to_string(t + 1) + "," + fmt_num(y.values[t]) + ",";
    if (t < m) {
      out += "NA,NA,NA\n";
    } else {
      out += fmt_num(path.mu[t]) + "," + fmt_num(path.resid[t]) + "," +
             fmt_num(std_resid[t - m]) + "\n";
    }
  }
  return out;
}

std::string correlogram_csv(const std::vector<double>& acf,
                            const std::vector<double>& pacf) {
  std::string out = "lag,acf,pacf\n";
  for (std::size_t l = 0; l < acf.size(); ++l) {
    out += std::to_string(l + 1) + "," + fmt_num(acf[l]) + "," + fmt_num(pacf[l]) + "\n";
  }
  return out;
}

}  // namespace barma
