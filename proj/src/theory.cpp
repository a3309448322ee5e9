#include "pagraph/theory.hpp"

#include <algorithm>
#include <cmath>

#include "pagraph/error.hpp"

namespace pagraph {

namespace {

void check_mean_beta(double m, double beta) {
  if (!(m > 0.0) || !std::isfinite(m)) {
    throw Error(ErrorCode::NonPositiveMean, "mean edge count must be positive and finite");
  }
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw Error(ErrorCode::RangeError, "beta must be finite and >= 0");
  }
}

// Edge-law masses p_1..p_{j_max}.
std::vector<double> masses(const EdgeCountDistribution& law, std::int64_t j_max) {
  std::vector<double> p(static_cast<std::size_t>(j_max));
  for (std::int64_t j = 1; j <= j_max; ++j) p[static_cast<std::size_t>(j - 1)] = law.pmf(j);
  return p;
}

// Indices k (1-based) with p_k > 0, up to j_max.
std::vector<std::size_t> support(const std::vector<double>& p) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] > 0.0) out.push_back(k + 1);
  }
  return out;
}

struct LeastSquares {
  double slope = 0.0;
  double intercept = 0.0;
};

LeastSquares fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LeastSquares fit;
  fit.slope = sxx > 0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

}  // namespace

double theta(double m, double beta) {
  check_mean_beta(m, beta);
  return m / (2.0 * m + beta);
}

double tail_exponent_theory(double m, double beta) {
  check_mean_beta(m, beta);
  return 3.0 + beta / m;
}

double pi_explicit(std::int64_t x0, double beta, std::int64_t j) {
  if (x0 < 1) throw Error(ErrorCode::NonPositiveSupport, "x0 must be >= 1");
  if (!(beta >= 0.0)) throw Error(ErrorCode::RangeError, "beta must be >= 0");
  if (j < 1 || j % x0 != 0) return 0.0;
  const auto l = j / x0;
  const auto x = static_cast<double>(x0);
  double value = (2.0 * x + beta) / (static_cast<double>(j) + 2.0 * x + 2.0 * beta);
  for (std::int64_t k = 1; k < l; ++k) {
    const auto kd = static_cast<double>(k);
    value *= (kd * x + beta) / ((kd + 2.0) * x + 2.0 * beta);
  }
  return value;
}

LimitSpectrum make_spectrum(std::vector<double> pi, double m, double beta) {
  LimitSpectrum s;
  s.m = m;
  s.beta = beta;
  s.theta = theta(m, beta);
  s.lambda = 2.0 * m + beta;
  s.tail_exponent = tail_exponent_theory(m, beta);
  s.pi = std::move(pi);
  double total = 0.0;
  for (const double v : s.pi) total += v;
  s.truncation_mass = 1.0 - total;
  return s;
}

LimitSpectrum pi_recursive(const EdgeCountDistribution& edge_law, double beta, std::int64_t j_max,
                           std::optional<double> truncation_tolerance) {
  const double m = edge_law.mean();
  check_mean_beta(m, beta);
  if (j_max < 1) throw Error(ErrorCode::RangeError, "j_max must be >= 1");

  const double lambda = 2.0 * m + beta;
  const auto p = masses(edge_law, j_max);
  const auto steps = support(p);

  // Works directly in pi_j = lambda L_j:
  //   (lambda + j + beta) pi_j = lambda p_j + sum_k (j - k + beta) pi_{j-k} p_k.
  std::vector<double> pi(static_cast<std::size_t>(j_max), 0.0);
  for (std::int64_t j = 1; j <= j_max; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    double acc = lambda * p[jj - 1];
    for (const std::size_t k : steps) {
      if (k >= jj) break;
      const std::size_t from = jj - k;
      acc += (static_cast<double>(from) + beta) * pi[from - 1] * p[k - 1];
    }
    pi[jj - 1] = acc / (lambda + static_cast<double>(j) + beta);
  }

  auto spectrum = make_spectrum(std::move(pi), m, beta);
  if (truncation_tolerance && spectrum.truncation_mass > *truncation_tolerance) {
    throw Error(ErrorCode::TruncationTooSmall,
                "mass beyond j_max=" + std::to_string(j_max) + " is " +
                    std::to_string(spectrum.truncation_mass));
  }
  return spectrum;
}

namespace {

// State: u_j = P_j(y) e^{-lambda y} for j = 1..J, then the running integrals
// lambda * int_0^y u_j. Every derivative depends only on the u part.
class ForwardSystem {
 public:
  ForwardSystem(std::vector<double> p, double lambda, double beta)
      : p_(std::move(p)), steps_(support(p_)), lambda_(lambda), beta_(beta) {}

  std::size_t dim() const { return p_.size(); }

  void derivative(const std::vector<double>& u, std::vector<double>& du) const {
    const std::size_t J = dim();
    for (std::size_t j = 1; j <= J; ++j) {
      double acc = -(lambda_ + static_cast<double>(j) + beta_) * u[j - 1];
      for (const std::size_t k : steps_) {
        if (k >= j) break;
        acc += (static_cast<double>(j - k) + beta_) * u[j - k - 1] * p_[k - 1];
      }
      du[j - 1] = acc;
      du[J + j - 1] = lambda_ * u[j - 1];
    }
  }

  std::vector<double> integrate(double y_max, std::int64_t steps) const {
    const std::size_t J = dim();
    std::vector<double> state(2 * J, 0.0);
    std::copy(p_.begin(), p_.end(), state.begin());
    if (y_max <= 0.0) return std::vector<double>(J, 0.0);

    const double h = y_max / static_cast<double>(steps);
    std::vector<double> k1(2 * J), k2(2 * J), k3(2 * J), k4(2 * J), tmp(2 * J);
    for (std::int64_t s = 0; s < steps; ++s) {
      derivative(state, k1);
      for (std::size_t i = 0; i < 2 * J; ++i) tmp[i] = state[i] + 0.5 * h * k1[i];
      derivative(tmp, k2);
      for (std::size_t i = 0; i < 2 * J; ++i) tmp[i] = state[i] + 0.5 * h * k2[i];
      derivative(tmp, k3);
      for (std::size_t i = 0; i < 2 * J; ++i) tmp[i] = state[i] + h * k3[i];
      derivative(tmp, k4);
      for (std::size_t i = 0; i < 2 * J; ++i) {
        state[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      }
    }
    return {state.begin() + static_cast<std::ptrdiff_t>(J), state.end()};
  }

 private:
  std::vector<double> p_;
  std::vector<std::size_t> steps_;
  double lambda_;
  double beta_;
};

}  // namespace

QuadratureResult pi_quadrature(const EdgeCountDistribution& edge_law, double beta,
                               std::int64_t j_max, const QuadratureOptions& options) {
  const double m = edge_law.mean();
  check_mean_beta(m, beta);
  if (j_max < 1) throw Error(ErrorCode::RangeError, "j_max must be >= 1");
  if (options.steps < 1000) throw Error(ErrorCode::RangeError, "quadrature needs >= 1000 steps");

  const double lambda = 2.0 * m + beta;
  QuadratureResult result;
  result.y_max = options.y_max ? std::max(*options.y_max, 0.0)
                               : -std::log(options.domain_tolerance) / lambda;
  result.dropped_weight = std::exp(-lambda * result.y_max);

  const ForwardSystem system(masses(edge_law, j_max), lambda, beta);
  result.pi = system.integrate(result.y_max, options.steps);
  if (result.y_max > 0.0) {
    const auto coarse = system.integrate(result.y_max, options.steps / 2);
    for (std::size_t j = 0; j < coarse.size(); ++j) {
      result.error_estimate = std::max(result.error_estimate, std::abs(result.pi[j] - coarse[j]) / 15.0);
    }
  }
  result.step_too_coarse = result.dropped_weight > options.domain_tolerance * (1.0 + 1e-9) ||
                           result.error_estimate > options.error_tolerance;
  return result;
}

void require_converged(const QuadratureResult& result) {
  if (result.step_too_coarse) {
    throw Error(ErrorCode::StepTooCoarse,
                "dropped weight " + std::to_string(result.dropped_weight) + ", error estimate " +
                    std::to_string(result.error_estimate));
  }
}

std::string to_string(MomentVerdict verdict) {
  return verdict == MomentVerdict::Plateauing ? "plateauing" : "diverging";
}

std::vector<MomentCurve> moment_profile(const LimitSpectrum& spectrum,
                                        const std::vector<double>& s_values) {
  const auto J = spectrum.j_max();
  std::vector<MomentCurve> out;
  out.reserve(s_values.size());
  for (const double s : s_values) {
    MomentCurve curve;
    curve.s = s;
    curve.partial_sums.resize(static_cast<std::size_t>(J));
    double acc = 0.0;
    std::vector<double> log_j, log_inc;
    const std::int64_t decade_start = std::max<std::int64_t>(1, J / 10);
    for (std::int64_t j = 1; j <= J; ++j) {
      const double pj = spectrum.at(j);
      const double inc = std::pow(static_cast<double>(j), s) * pj;
      acc += inc;
      curve.partial_sums[static_cast<std::size_t>(j - 1)] = acc;
      if (j >= decade_start && pj > 0.0) {
        log_j.push_back(std::log(static_cast<double>(j)));
        log_inc.push_back(std::log(inc));
      }
    }
    const double before = curve.partial_sums[static_cast<std::size_t>(decade_start - 1)];
    curve.last_decade_increase = acc > 0.0 ? (acc - before) / acc : 0.0;
    curve.increment_slope = log_j.size() >= 2 ? fit_line(log_j, log_inc).slope : -INFINITY;
    curve.verdict = curve.increment_slope >= -1.0 ? MomentVerdict::Diverging
                                                  : MomentVerdict::Plateauing;
    out.push_back(std::move(curve));
  }
  return out;
}

}  // namespace pagraph
