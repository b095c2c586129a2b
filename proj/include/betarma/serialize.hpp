#pragma once

#include <optional>
#include <string>
#include <vector>

#include "betarma/bootstrap.hpp"
#include "betarma/diagnostics.hpp"
#include "betarma/estimation.hpp"
#include "betarma/forecast.hpp"

namespace barma {

/// FitReport document with fields alpha, ar, ma, precision, loglik,
/// converged, iterations, grad_norm and info_matrix (row-major).
std::string fit_report_json(const FitReport& report);
FitReport fit_report_from_json(const std::string& text);

/// Fit plus asymptotic intervals (the `fit` command output).
std::string fit_with_ci_json(const FitReport& report,
                             const std::vector<ConfidenceInterval>& ci);

/// Bootstrap document: point estimates (usual and corrected), bootstrap SEs,
/// and the asymptotic plus four bootstrap CI families.
std::string bootstrap_json(const FitReport& report, const BootstrapResult& boot,
                           double level, bool include_replicates);

std::string forecast_json(const ForecastPath& path,
                          const std::optional<ForecastAccuracy>& metrics);

/// Winner document for order selection (best order plus its fit).
std::string selection_json(const OrderSearchResult& sel);

/// Grid CSV: p,q,aic,converged.
std::string selection_grid_csv(const OrderSearchResult& sel);

/// Diagnostics CSVs: per-observation fitted path and a lag table.
std::string diagnostics_csv(const BoundedSeries& y, const MeanPath& path,
                            const std::vector<double>& std_resid, int m);
std::string correlogram_csv(const std::vector<double>& acf,
                            const std::vector<double>& pacf);

}  // namespace barma
