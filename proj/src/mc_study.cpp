#include "betarma/mc_study.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "parallel.hpp"

namespace barma {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using nlohmann::json;

}  // namespace

void StudyConfig::validate() const {
  if (scenarios.empty()) throw std::invalid_argument("StudyConfig: no scenarios");
  if (n_mc < 1) throw std::invalid_argument("StudyConfig: n_mc must be >= 1");
  if (n_boot < 2) throw std::invalid_argument("StudyConfig: n_boot must be >= 2");
  if (!(level > 0.5 && level < 1.0))
    throw std::invalid_argument("StudyConfig: level must be in (0.5, 1)");
  std::set<std::string> labels;
  for (const Scenario& s : scenarios) {
    s.order.validate();
    if (!(s.truth.precision > 0.0))
      throw std::invalid_argument("StudyConfig: scenario precision must be positive");
    if (!labels.insert(s.label).second)
      throw std::invalid_argument("StudyConfig: duplicate scenario label " + s.label);
  }
}

std::vector<Scenario> preset_scenarios(const std::string& name,
                                       const std::vector<int>& sizes) {
  if (name != "paper-s4") throw std::invalid_argument("unknown preset: " + name);
  if (sizes.empty()) throw std::invalid_argument("preset_scenarios: no sizes");

  struct Base {
    const char* label;
    ModelOrder order;
    double alpha;
    std::vector<double> ar, ma;
    double precision;
  };
  const std::vector<Base> bases = {
      {"bar1_phi20", {1, 0}, 1.0, {-0.5}, {}, 20.0},
      {"bar1_phi120", {1, 0}, 1.0, {-0.5}, {}, 120.0},
      {"bma1_phi20", {0, 1}, -1.0, {}, {1.0}, 20.0},
      {"bma1_phi120", {0, 1}, 1.0, {}, {-0.5}, 120.0},
      {"barma11_phi20", {1, 1}, -0.5, {0.5}, {1.0}, 20.0},
      {"barma11_phi120", {1, 1}, 1.0, {0.5}, {-1.5}, 120.0},
  };

  std::vector<Scenario> out;
  for (const Base& b : bases) {
    for (int n : sizes) {
      Scenario s;
      s.order = b.order;
      s.truth.alpha = b.alpha;
      s.truth.ar = b.ar;
      s.truth.ma = b.ma;
      s.truth.precision = b.precision;
      s.link = LinkKind::logit;
      s.n = n;
      s.label = std::string(b.label) + "_n" + std::to_string(n);
      out.push_back(std::move(s));
    }
  }
  return out;
}

const char* ci_family_name(int family) {
  switch (family) {
    case 0: return "asymptotic";
    case 1: return "boot_se";
    case 2: return "boot_t";
    case 3: return "percentile";
    case 4: return "unbiased_centered";
  }
  throw std::out_of_range("ci_family_name");
}

namespace {

struct Replication {
  bool ok = false;
  std::vector<double> estimate;
  std::vector<double> corrected;
  std::array<std::vector<char>, kNumCiFamilies> hit;
};

Replication run_replication(const Scenario& sc, const StudyConfig& cfg, RngStream base) {
  Replication rec;
  const int k = sc.order.k();
  const std::vector<double> truth = sc.truth.flat();
  try {
    RngStream sim_rng = base.substream(0);
    const BoundedSeries y = simulate(sc.order, sc.truth, sc.link, sc.n,
                                     default_burn_in(sc.order), sim_rng);
    const FitReport rep = fit(sc.order, sc.link, y);
    if (!rep.converged) return rec;

    const auto ci_asy = asymptotic_ci(rep, cfg.level);
    const BootstrapResult boot =
        run_bootstrap(sc.order, sc.link, y, rep, cfg.n_boot, base.substream(1));

    const std::array<std::vector<ConfidenceInterval>, kNumCiFamilies> cis = {
        ci_asy,
        ci_boot_se(rep, boot, cfg.level),
        ci_boot_t(rep, boot, cfg.level),
        ci_percentile(boot, cfg.level),
        ci_unbiased_centered(rep, boot, cfg.level),
    };

    rec.estimate = rep.estimate.flat();
    rec.corrected = boot.corrected.flat();
    for (int f = 0; f < kNumCiFamilies; ++f) {
      rec.hit[f].resize(k);
      for (int r = 0; r < k; ++r)
        rec.hit[f][r] = (cis[f][r].lower <= truth[r] && truth[r] <= cis[f][r].upper) ? 1 : 0;
    }
    rec.ok = true;
  } catch (const std::exception&) {
    rec.ok = false;
  }
  return rec;
}

EstimatorMetrics aggregate_points(const std::vector<const std::vector<double>*>& rows,
                                  const std::vector<double>& truth) {
  const int k = static_cast<int>(truth.size());
  const int R = static_cast<int>(rows.size());
  EstimatorMetrics m;
  m.mean.assign(k, kNaN);
  m.bias.assign(k, kNaN);
  m.rb.assign(k, kNaN);
  m.se.assign(k, kNaN);
  m.mse.assign(k, kNaN);
  m.total_rb = kNaN;
  if (R == 0) return m;

  for (int r = 0; r < k; ++r) {
    double mean = 0.0;
    for (const auto* row : rows) mean += (*row)[r];
    mean /= R;
    double var = 0.0, mse = 0.0;
    for (const auto* row : rows) {
      const double dm = (*row)[r] - mean;
      const double dt = (*row)[r] - truth[r];
      var += dm * dm;
      mse += dt * dt;
    }
    m.mean[r] = mean;
    m.bias[r] = mean - truth[r];
    m.rb[r] = truth[r] != 0.0 ? 100.0 * m.bias[r] / truth[r] : kNaN;
    m.se[r] = R >= 2 ? std::sqrt(var / R) : kNaN;
    m.mse[r] = mse / R;
  }
  double total = 0.0;
  bool any = false;
  for (int r = 0; r < k; ++r) {
    if (!std::isnan(m.rb[r])) {
      total += std::fabs(m.rb[r]);
      any = true;
    }
  }
  m.total_rb = any ? total : kNaN;
  return m;
}

}  // namespace

StudyResult run_study(const StudyConfig& config) {
  config.validate();
  StudyResult result;
  result.config = config;

  const RngStream root(config.seed);

  for (std::size_t si = 0; si < config.scenarios.size(); ++si) {
    const Scenario& sc = config.scenarios[si];
    const int k = sc.order.k();
    const std::vector<double> truth = sc.truth.flat();
    const RngStream sc_stream = root.substream(si);

    std::vector<Replication> reps(config.n_mc);
    detail::parallel_for(config.n_mc, [&](int r) {
      reps[r] = run_replication(sc, config, sc_stream.substream(r));
    });

    ScenarioResult out;
    out.scenario = sc;

    std::vector<const std::vector<double>*> est_rows, corr_rows;
    std::array<std::vector<long>, kNumCiFamilies> hits;
    for (auto& h : hits) h.assign(k, 0);

    for (const Replication& rec : reps) {
      if (!rec.ok) {
        ++out.n_dropped;
        continue;
      }
      ++out.n_used;
      est_rows.push_back(&rec.estimate);
      corr_rows.push_back(&rec.corrected);
      for (int f = 0; f < kNumCiFamilies; ++f)
        for (int r = 0; r < k; ++r) hits[f][r] += rec.hit[f][r];
    }

    out.invalid = out.n_dropped > config.n_mc / 5;
    out.point.uncorrected = aggregate_points(est_rows, truth);
    out.point.corrected = aggregate_points(corr_rows, truth);

    for (int f = 0; f < kNumCiFamilies; ++f) {
      out.coverage.cr[f].assign(k, kNaN);
      double acc = 0.0;
      for (int r = 0; r < k; ++r) {
        out.coverage.cr[f][r] =
            out.n_used > 0 ? static_cast<double>(hits[f][r]) / out.n_used : kNaN;
        acc += out.coverage.cr[f][r];
      }
      out.coverage.acr[f] = out.n_used > 0 ? acc / k : kNaN;
    }

    result.scenarios.push_back(std::move(out));
  }
  return result;
}

namespace {

std::string fmt6(double v) {
  if (std::isnan(v)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

json metrics_to_json(const EstimatorMetrics& m) {
  return json{{"mean", m.mean}, {"bias", m.bias}, {"rb", m.rb},
              {"se", m.se},     {"mse", m.mse},   {"total_rb", m.total_rb}};
}

EstimatorMetrics metrics_from_json(const json& j) {
  EstimatorMetrics m;
  auto vec = [](const json& a) {
    std::vector<double> v;
    for (const auto& x : a) v.push_back(x.is_null() ? kNaN : x.get<double>());
    return v;
  };
  m.mean = vec(j.at("mean"));
  m.bias = vec(j.at("bias"));
  m.rb = vec(j.at("rb"));
  m.se = vec(j.at("se"));
  m.mse = vec(j.at("mse"));
  m.total_rb = j.at("total_rb").is_null() ? kNaN : j.at("total_rb").get<double>();
  return m;
}

std::vector<std::string> scenario_coords(const Scenario& sc) {
  std::vector<std::string> names;
  for (int r = 0; r < sc.order.k(); ++r) names.push_back(coord_name(sc.order, r));
  return names;
}

}  // namespace

std::string emit_tables(const StudyResult& result, TableFormat format) {
  if (format == TableFormat::json) {
    json doc;
    doc["config"] = {{"n_mc", result.config.n_mc},
                     {"n_boot", result.config.n_boot},
                     {"level", result.config.level},
                     {"seed", result.config.seed}};
    doc["scenarios"] = json::array();
    for (const ScenarioResult& s : result.scenarios) {
      json js;
      js["label"] = s.scenario.label;
      js["n"] = s.scenario.n;
      js["p"] = s.scenario.order.p;
      js["q"] = s.scenario.order.q;
      js["link"] = link_name(s.scenario.link);
      js["truth"] = {{"alpha", s.scenario.truth.alpha},
                     {"ar", s.scenario.truth.ar},
                     {"ma", s.scenario.truth.ma},
                     {"precision", s.scenario.truth.precision}};
      js["coordinates"] = scenario_coords(s.scenario);
      js["n_used"] = s.n_used;
      js["n_dropped"] = s.n_dropped;
      js["invalid"] = s.invalid;
      js["point"] = {{"uncorrected", metrics_to_json(s.point.uncorrected)},
                     {"corrected", metrics_to_json(s.point.corrected)}};
      json cov;
      for (int f = 0; f < kNumCiFamilies; ++f)
        cov[ci_family_name(f)] = {{"cr", s.coverage.cr[f]}, {"acr", s.coverage.acr[f]}};
      js["coverage"] = cov;
      doc["scenarios"].push_back(std::move(js));
    }
    return doc.dump(2) + "\n";
  }

  // CSV: point tables (5 metric rows, uncorrected/corrected column pairs),
  // blank line, coverage tables. Headers repeat when the layout changes.
  std::string out;
  std::string prev_header;
  for (const ScenarioResult& s : result.scenarios) {
    std::string header = "scenario,n,measure";
    for (const std::string& c : scenario_coords(s.scenario))
      header += "," + c + "_hat," + c + "_bar";
    if (header != prev_header) {
      out += header + "\n";
      prev_header = header;
    }
    const char* rows[5] = {"Mean", "Bias", "RB", "SE", "MSE"};
    const std::vector<double>* unc[5] = {&s.point.uncorrected.mean, &s.point.uncorrected.bias,
                                         &s.point.uncorrected.rb, &s.point.uncorrected.se,
                                         &s.point.uncorrected.mse};
    const std::vector<double>* cor[5] = {&s.point.corrected.mean, &s.point.corrected.bias,
                                         &s.point.corrected.rb, &s.point.corrected.se,
                                         &s.point.corrected.mse};
    for (int row = 0; row < 5; ++row) {
      out += s.scenario.label + "," + std::to_string(s.scenario.n) + "," + rows[row];
      for (int r = 0; r < s.scenario.order.k(); ++r)
        out += "," + fmt6((*unc[row])[r]) + "," + fmt6((*cor[row])[r]);
      out += "\n";
    }
  }
  if (result.scenarios.empty()) {
    out += "scenario,n,measure\n";
    return out;
  }

  out += "\n";
  prev_header.clear();
  for (const ScenarioResult& s : result.scenarios) {
    std::string header = "scenario,n,interval";
    for (const std::string& c : scenario_coords(s.scenario)) header += "," + c;
    header += ",acr";
    if (header != prev_header) {
      out += header + "\n";
      prev_header = header;
    }
    for (int f = 0; f < kNumCiFamilies; ++f) {
      out += s.scenario.label + "," + std::to_string(s.scenario.n) + "," + ci_family_name(f);
      for (int r = 0; r < s.scenario.order.k(); ++r)
        out += "," + fmt6(s.coverage.cr[f][r]);
      out += "," + fmt6(s.coverage.acr[f]) + "\n";
    }
  }
  return out;
}

StudyResult study_from_json(const std::string& text) {
  const json doc = json::parse(text);
  StudyResult result;
  result.config.n_mc = doc.at("config").at("n_mc").get<int>();
  result.config.n_boot = doc.at("config").at("n_boot").get<int>();
  result.config.level = doc.at("config").at("level").get<double>();
  result.config.seed = doc.at("config").at("seed").get<std::uint64_t>();

  for (const json& js : doc.at("scenarios")) {
    ScenarioResult s;
    s.scenario.label = js.at("label").get<std::string>();
    s.scenario.n = js.at("n").get<int>();
    s.scenario.order = ModelOrder{js.at("p").get<int>(), js.at("q").get<int>()};
    s.scenario.link = link_from_name(js.at("link").get<std::string>());
    s.scenario.truth.alpha = js.at("truth").at("alpha").get<double>();
    s.scenario.truth.ar = js.at("truth").at("ar").get<std::vector<double>>();
    s.scenario.truth.ma = js.at("truth").at("ma").get<std::vector<double>>();
    s.scenario.truth.precision = js.at("truth").at("precision").get<double>();
    s.n_used = js.at("n_used").get<int>();
    s.n_dropped = js.at("n_dropped").get<int>();
    s.invalid = js.at("invalid").get<bool>();
    s.point.uncorrected = metrics_from_json(js.at("point").at("uncorrected"));
    s.point.corrected = metrics_from_json(js.at("point").at("corrected"));
    for (int f = 0; f < kNumCiFamilies; ++f) {
      const json& cov = js.at("coverage").at(ci_family_name(f));
      std::vector<double> cr;
      for (const auto& x : cov.at("cr")) cr.push_back(x.is_null() ? kNaN : x.get<double>());
      s.coverage.cr[f] = std::move(cr);
      s.coverage.acr[f] =
          cov.at("acr").is_null() ? kNaN : cov.at("acr").get<double>();
    }
    result.config.scenarios.push_back(s.scenario);
    result.scenarios.push_back(std::move(s));
  }
  return result;
}

}  // namespace barma
