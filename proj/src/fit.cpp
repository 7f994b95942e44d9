#include "fsc/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>

namespace fsc {

std::vector<FitPoint> fit_points(const std::vector<PointResult>& results) {
  std::vector<FitPoint> out;
  out.reserve(results.size());
  for (const PointResult& r : results) out.push_back({r.key.p, r.key.size, r.trials, r.failures});
  return out;
}

const char* status_name(ThresholdEstimate::Status status) {
  switch (status) {
    case ThresholdEstimate::Status::kOk:
      return "ok";
    case ThresholdEstimate::Status::kNoCrossing:
      return "no crossing";
    case ThresholdEstimate::Status::kFailed:
      break;
  }
  return "failed";
}

bool crossing_guess(const std::vector<FitPoint>& points, double& p_guess) {
  std::map<int, std::map<double, double>> by_size;
  for (const FitPoint& pt : points) by_size[pt.size][pt.p] = pt.p_L();
  if (by_size.size() < 2) return false;
  const auto& small = by_size.begin()->second;
  const auto& large = by_size.rbegin()->second;

  std::vector<std::pair<double, double>> diffs;  // (p, p_L(Lmax) - p_L(Lmin)), nonzero only
  for (const auto& [p, value] : small) {
    bool shared = true;
    for (const auto& [size, row] : by_size) shared = shared && row.count(p) > 0;
    if (!shared) continue;
    double d = large.at(p) - value;
    if (d != 0.0) diffs.emplace_back(p, d);
  }
  // Below threshold the larger code fails less often, so the crossing of
  // interest goes from negative to positive; any other sign change is a
  // fallback for noisy data.
  int fallback = -1;
  for (std::size_t i = 0; i + 1 < diffs.size(); ++i) {
    double d0 = diffs[i].second;
    double d1 = diffs[i + 1].second;
    if ((d0 < 0) == (d1 < 0)) continue;
    if (d0 < 0) {
      fallback = static_cast<int>(i);
      break;
    }
    if (fallback < 0) fallback = static_cast<int>(i);
  }
  if (fallback < 0) return false;
  const auto [p0, d0] = diffs[static_cast<std::size_t>(fallback)];
  const auto [p1, d1] = diffs[static_cast<std::size_t>(fallback) + 1];
  p_guess = p0 + (p1 - p0) * d0 / (d0 - d1);
  return true;
}

namespace {

struct Sample {
  double p;
  double log_size;
  double value;
  double sigma;
};

// Weighted residuals of the quadratic scaling form, with an analytic
// Jacobian. Parameters: p_th, 1/nu, A, B, C.
struct ScalingFunctor {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  const std::vector<Sample>* samples;

  int inputs() const { return 5; }
  int values() const { return static_cast<int>(samples->size()); }

  int operator()(const Eigen::VectorXd& t, Eigen::VectorXd& r) const {
    for (std::size_t i = 0; i < samples->size(); ++i) {
      const Sample& s = (*samples)[i];
      double x = (s.p - t[0]) * std::exp(t[1] * s.log_size);
      r[static_cast<Eigen::Index>(i)] = (t[2] + t[3] * x + t[4] * x * x - s.value) / s.sigma;
    }
    return 0;
  }

  int df(const Eigen::VectorXd& t, Eigen::MatrixXd& j) const {
    for (std::size_t i = 0; i < samples->size(); ++i) {
      const Sample& s = (*samples)[i];
      const auto row = static_cast<Eigen::Index>(i);
      double scale = std::exp(t[1] * s.log_size);
      double x = (s.p - t[0]) * scale;
      double slope = t[3] + 2.0 * t[4] * x;
      j(row, 0) = -slope * scale / s.sigma;
      j(row, 1) = slope * x * s.log_size / s.sigma;
      j(row, 2) = 1.0 / s.sigma;
      j(row, 3) = x / s.sigma;
      j(row, 4) = x * x / s.sigma;
    }
    return 0;
  }
};

struct Attempt {
  Eigen::VectorXd theta;
  double chi2 = std::numeric_limits<double>::infinity();
  int status = 0;
  bool converged = false;
};

// A, B, C by weighted linear least squares at fixed (p_th, 1/nu).
void linear_start(const std::vector<Sample>& samples, Eigen::VectorXd& theta) {
  Eigen::MatrixXd design(static_cast<Eigen::Index>(samples.size()), 3);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Sample& s = samples[i];
    const auto row = static_cast<Eigen::Index>(i);
    double x = (s.p - theta[0]) * std::exp(theta[1] * s.log_size);
    design(row, 0) = 1.0 / s.sigma;
    design(row, 1) = x / s.sigma;
    design(row, 2) = x * x / s.sigma;
    rhs[row] = s.value / s.sigma;
  }
  Eigen::Vector3d abc = design.colPivHouseholderQr().solve(rhs);
  theta.segment<3>(2) = abc;
}

Attempt minimise(const std::vector<Sample>& samples, Eigen::VectorXd theta) {
  ScalingFunctor functor{&samples};
  Eigen::LevenbergMarquardt<ScalingFunctor> lm(functor);
  lm.parameters.maxfev = 4000;
  int status = lm.minimize(theta);
  Attempt out;
  out.theta = theta;
  out.status = status;
  Eigen::VectorXd r(static_cast<Eigen::Index>(samples.size()));
  functor(theta, r);
  out.chi2 = r.squaredNorm();
  bool good_status = (status >= 1 && status <= 4) || (status >= 6 && status <= 8);
  out.converged = good_status && std::isfinite(out.chi2) && theta.allFinite() && theta[1] > 0.0;
  return out;
}

std::vector<Sample> make_samples(const std::vector<FitPoint>& points, const std::vector<std::int64_t>& failures) {
  std::vector<Sample> samples;
  samples.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const FitPoint& pt = points[i];
    double value = static_cast<double>(failures[i]) / static_cast<double>(pt.trials);
    samples.push_back({pt.p, std::log(static_cast<double>(pt.size)), value, wilson_stderr(failures[i], pt.trials)});
  }
  return samples;
}

double spread(const std::vector<double>& values) {
  if (values.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

}  // namespace

ThresholdEstimate fit_threshold(const std::vector<FitPoint>& points, const FitOptions& options) {
  std::set<int> sizes;
  std::set<double> grid;
  for (const FitPoint& pt : points) {
    if (pt.trials <= 0) throw std::invalid_argument("fit input has a point with no trials");
    sizes.insert(pt.size);
    grid.insert(pt.p);
  }
  if (sizes.size() < 3) {
    throw std::invalid_argument("threshold fit needs at least 3 sizes, got " + std::to_string(sizes.size()));
  }
  if (grid.size() < 5) {
    throw std::invalid_argument("threshold fit needs at least 5 p values, got " + std::to_string(grid.size()));
  }
  if (options.window < 5) throw std::invalid_argument("threshold fit window must hold at least 5 p values");

  ThresholdEstimate est;
  double guess = 0.0;
  if (!crossing_guess(points, guess)) {
    est.status = ThresholdEstimate::Status::kNoCrossing;
    est.message = "p_L(Lmax) - p_L(Lmin) keeps one sign over the p grid";
    return est;
  }

  std::vector<double> ordered(grid.begin(), grid.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [&](double x, double y) { return std::abs(x - guess) < std::abs(y - guess); });
  ordered.resize(std::min<std::size_t>(ordered.size(), static_cast<std::size_t>(options.window)));
  std::sort(ordered.begin(), ordered.end());
  est.window = ordered;

  // Sort the windowed data so the fit does not depend on input row order.
  std::vector<FitPoint> data;
  for (const FitPoint& pt : points) {
    if (std::binary_search(ordered.begin(), ordered.end(), pt.p)) data.push_back(pt);
  }
  std::sort(data.begin(), data.end(), [](const FitPoint& x, const FitPoint& y) {
    return x.size != y.size ? x.size < y.size : x.p < y.p;
  });
  std::vector<std::int64_t> observed;
  for (const FitPoint& pt : data) observed.push_back(pt.failures);
  if (data.size() <= 5) {
    est.message = "window holds too few points for 5 parameters";
    return est;
  }

  const std::vector<Sample> samples = make_samples(data, observed);
  std::ostringstream trace;
  Attempt best;
  for (double inv_nu : {0.5, 1.0, 1.5, 2.0}) {
    Eigen::VectorXd theta(5);
    theta << guess, inv_nu, 0.0, 0.0, 0.0;
    linear_start(samples, theta);
    Attempt a = minimise(samples, theta);
    trace << "start p_th=" << guess << " 1/nu=" << inv_nu << " -> status " << a.status << ", chi2 " << a.chi2
          << (a.converged ? "" : " (rejected)") << "; ";
    if (a.converged && a.chi2 < best.chi2) best = a;
  }
  const double lo = *grid.begin();
  const double hi = *grid.rbegin();
  if (!best.converged) {
    est.message = "no start converged: " + trace.str();
    return est;
  }
  if (!(best.theta[0] >= lo && best.theta[0] <= hi)) {
    est.message = "fitted p_th outside the p grid: " + trace.str();
    return est;
  }

  est.p_th = best.theta[0];
  est.nu = 1.0 / best.theta[1];
  est.A = best.theta[2];
  est.B = best.theta[3];
  est.C = best.theta[4];
  est.chi2_dof = best.chi2 / static_cast<double>(samples.size() - 5);

  // Parametric bootstrap: redraw every failure count from its observed rate.
  std::mt19937_64 engine(options.seed);
  std::vector<double> p_ths;
  std::vector<double> nus;
  for (int r = 0; r < options.bootstrap; ++r) {
    std::vector<std::int64_t> drawn(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
      std::binomial_distribution<std::int64_t> binomial(data[i].trials, data[i].p_L());
      drawn[i] = binomial(engine);
    }
    Attempt a = minimise(make_samples(data, drawn), best.theta);
    if (!a.converged) continue;
    p_ths.push_back(a.theta[0]);
    nus.push_back(1.0 / a.theta[1]);
  }
  est.resamples = static_cast<int>(p_ths.size());
  if (est.resamples < options.bootstrap / 2) {
    est.message = "only " + std::to_string(est.resamples) + " of " + std::to_string(options.bootstrap) +
                  " bootstrap fits converged";
    return est;
  }
  est.p_th_err = spread(p_ths);
  est.nu_err = spread(nus);
  est.status = ThresholdEstimate::Status::kOk;
  return est;
}

nlohmann::json to_json(const ThresholdEstimate& e) {
  nlohmann::json doc;
  doc["status"] = status_name(e.status);
  auto number = [&](double v) { return e.ok() ? nlohmann::json(v) : nlohmann::json(nullptr); };
  doc["p_th"] = number(e.p_th);
  doc["p_th_err"] = number(e.p_th_err);
  doc["nu"] = number(e.nu);
  doc["nu_err"] = number(e.nu_err);
  doc["A"] = number(e.A);
  doc["B"] = number(e.B);
  doc["C"] = number(e.C);
  doc["chi2_dof"] = number(e.chi2_dof);
  doc["window"] = e.window;
  doc["resamples"] = e.resamples;
  if (!e.message.empty()) doc["message"] = e.message;
  return doc;
}

ThresholdEstimate estimate_from_json(const nlohmann::json& doc) {
  ThresholdEstimate e;
  const std::string status = doc.at("status").get<std::string>();
  if (status == "ok") {
    e.status = ThresholdEstimate::Status::kOk;
  } else if (status == "no crossing") {
    e.status = ThresholdEstimate::Status::kNoCrossing;
  } else if (status == "failed") {
    e.status = ThresholdEstimate::Status::kFailed;
  } else {
    throw std::runtime_error("fit.json: unknown status '" + status + "'");
  }
  auto number = [&](const char* key) {
    const auto& v = doc.at(key);
    return v.is_null() ? 0.0 : v.get<double>();
  };
  e.p_th = number("p_th");
  e.p_th_err = number("p_th_err");
  e.nu = number("nu");
  e.nu_err = number("nu_err");
  e.A = number("A");
  e.B = number("B");
  e.C = number("C");
  e.chi2_dof = number("chi2_dof");
  e.window = doc.at("window").get<std::vector<double>>();
  e.resamples = doc.value("resamples", 0);
  e.message = doc.value("message", std::string());
  return e;
}

}  // namespace fsc
