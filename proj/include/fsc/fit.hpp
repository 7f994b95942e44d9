#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "fsc/harness.hpp"

namespace fsc {

struct FitPoint {
  double p = 0.0;
  int size = 0;
  std::int64_t trials = 0;
  std::int64_t failures = 0;

  double p_L() const { return trials > 0 ? static_cast<double>(failures) / static_cast<double>(trials) : 0.0; }
};

std::vector<FitPoint> fit_points(const std::vector<PointResult>& results);

struct FitOptions {
  int window = 7;            // grid points nearest the crossing
  int bootstrap = 200;       // parametric resamples
  std::uint64_t seed = 1;    // bootstrap stream
};

// Finite-size-scaling fit p_L = A + B x + C x^2 with x = (p - p_th) L^(1/nu).
struct ThresholdEstimate {
  enum class Status { kOk, kNoCrossing, kFailed };
  Status status = Status::kFailed;
  double p_th = 0.0;
  double p_th_err = 0.0;
  double nu = 0.0;
  double nu_err = 0.0;
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double chi2_dof = 0.0;
  std::vector<double> window;  // p values used
  int resamples = 0;           // bootstrap fits that converged
  std::string message;         // diagnostics for kNoCrossing / kFailed

  bool ok() const noexcept { return status == Status::kOk; }
};

const char* status_name(ThresholdEstimate::Status status);

// Linear interpolation of the first sign change of p_L(Lmax) - p_L(Lmin)
// over the p values every size shares. Returns false when there is none.
bool crossing_guess(const std::vector<FitPoint>& points, double& p_guess);

// Throws std::invalid_argument unless the data has >= 3 sizes and >= 5 p values.
ThresholdEstimate fit_threshold(const std::vector<FitPoint>& points, const FitOptions& options = {});

nlohmann::json to_json(const ThresholdEstimate& estimate);
ThresholdEstimate estimate_from_json(const nlohmann::json& doc);

}  // namespace fsc
