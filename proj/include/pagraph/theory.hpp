#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pagraph/edge_law.hpp"

namespace pagraph {

/// Degree growth exponent m / (2m + beta).
double theta(double m, double beta);

/// Order of the power-law decay of the limit degree law, 3 + beta/m.
double tail_exponent_theory(double m, double beta);

/// Closed-form limit degree law for a deterministic edge count x0: nonzero
/// only on multiples j = l*x0, where it equals
///   (2x0 + beta)/(j + 2x0 + 2beta) * prod_{k<l} (k x0 + beta)/((k+2) x0 + 2 beta).
double pi_explicit(std::int64_t x0, double beta, std::int64_t j);

struct LimitSpectrum {
  double m = 0.0;
  double beta = 0.0;
  double theta = 0.0;
  /// Rate of the exponential weight, 2m + beta.
  double lambda = 0.0;
  double tail_exponent = 0.0;
  /// pi[k] is pi_{k+1}.
  std::vector<double> pi;
  /// 1 - sum of pi.
  double truncation_mass = 0.0;

  std::int64_t j_max() const noexcept { return static_cast<std::int64_t>(pi.size()); }
  double at(std::int64_t j) const noexcept {
    return j >= 1 && j <= j_max() ? pi[static_cast<std::size_t>(j - 1)] : 0.0;
  }
};

/// Limit degree law from the Laplace-transformed forward equations of the
/// single-vertex degree process. With L_j the Laplace transform of
/// P(D(y) = j) at lambda = 2m + beta,
///   (lambda + j + beta) L_j = p_j + sum_{k=1}^{j-1} (j - k + beta) L_{j-k} p_k,
/// and pi_j = lambda L_j. Throws TruncationTooSmall when a tolerance is given
/// and the mass beyond j_max exceeds it.
LimitSpectrum pi_recursive(const EdgeCountDistribution& edge_law, double beta, std::int64_t j_max,
                           std::optional<double> truncation_tolerance = std::nullopt);

/// Builds a spectrum around given values (pi[k] = pi_{k+1}).
LimitSpectrum make_spectrum(std::vector<double> pi, double m, double beta);

struct QuadratureOptions {
  /// Unset selects -log(domain_tolerance) / lambda.
  std::optional<double> y_max;
  std::int64_t steps = 100000;
  /// Bound on the dropped weight e^{-lambda y_max}.
  double domain_tolerance = 1e-12;
  /// Bound on the step-doubling error estimate.
  double error_tolerance = 1e-8;
};

struct QuadratureResult {
  std::vector<double> pi;
  double y_max = 0.0;
  /// max_j |pi(h) - pi(2h)| / 15.
  double error_estimate = 0.0;
  double dropped_weight = 0.0;
  bool step_too_coarse = false;
};

/// Integrates the forward equations with classical RK4 on [0, y_max] and
/// accumulates lambda * int P_j(y) e^{-lambda y} dy. Independent of
/// pi_recursive apart from the shared generator.
QuadratureResult pi_quadrature(const EdgeCountDistribution& edge_law, double beta,
                               std::int64_t j_max, const QuadratureOptions& options);

/// Throws StepTooCoarse if the quadrature flagged itself.
void require_converged(const QuadratureResult& result);

enum class MomentVerdict { Plateauing, Diverging };

std::string to_string(MomentVerdict verdict);

struct MomentCurve {
  double s = 0.0;
  /// partial_sums[J-1] = sum_{j<=J} j^s pi_j.
  std::vector<double> partial_sums;
  /// Least-squares slope of log(j^s pi_j) on log j over the last decade.
  double increment_slope = 0.0;
  /// Growth over the last decade relative to the final level.
  double last_decade_increase = 0.0;
  MomentVerdict verdict = MomentVerdict::Plateauing;
};

/// Diverging when the increments decay no faster than 1/j (slope >= -1),
/// plateauing otherwise.
std::vector<MomentCurve> moment_profile(const LimitSpectrum& spectrum,
                                        const std::vector<double>& s_values);

}  // namespace pagraph
