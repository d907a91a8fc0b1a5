#pragma once

#include <optional>

#include "p0/estimation.hpp"

namespace p0 {

enum class TestMethod { LrtChiSquare, LrtNormal, Wald };

enum class LrtReference { ChiSquareFixedR, NormalIncreasingR, Auto };

struct ReferenceDistribution {
  enum class Type { ChiSquare, StdNormal, None };
  Type type = Type::None;
  int df = 0;  // ChiSquare only

  static ReferenceDistribution chi_square(int df) { return {Type::ChiSquare, df}; }
  static ReferenceDistribution std_normal() { return {Type::StdNormal, 0}; }
  static ReferenceDistribution none() { return {Type::None, 0}; }
};

struct TestResult {
  TestMethod method = TestMethod::LrtChiSquare;
  double statistic = 0.0;              // 2*dloglik, its normalized form, or the Wald form
  ReferenceDistribution reference;
  std::optional<double> p_value;       // absent when reference is None
  int r = 0;                           // number of constrained parameters
  double two_delta_loglik = 0.0;       // raw 2{l(full) - l(null)}; equals the Wald statistic for Wald
  FitResult full_fit;
  std::optional<FitResult> null_fit;   // LRT only
};

struct LrtOptions {
  FitOptions fit;
  int r_switch = 30;  // Auto: homogeneous nulls with r <= r_switch use chi-square
};

/// Likelihood-ratio test. ChiSquareFixedR refers 2*dloglik to chi-square
/// with r-1 degrees of freedom and is valid for homogeneous nulls only
/// (requesting it for a specified null throws InvalidReferenceError: the
/// fixed-dimension specified null has no chi-square limit).
/// NormalIncreasingR refers (2*dloglik - r)/sqrt(2r) to N(0,1), one-sided
/// upper. Auto picks chi-square for homogeneous nulls with r <= r_switch
/// and the normal reference otherwise, except that a specified null with
/// r <= r_switch gets reference None and no p-value; force the normal
/// reference to override.
TestResult lrt(const DirectedGraph& g, const NullHypothesis& null, LrtReference ref,
               const LrtOptions& opts = {});

/// Wald test of alpha_{i_1} = ... = alpha_{i_r} (0-based indices, r >= 2):
/// the consecutive differences of the unrestricted alpha-hats, weighted by
/// the inverse of their tridiagonal plug-in covariance built from the
/// Fisher diagonal, referred to chi-square with r-1 degrees of freedom.
TestResult wald(const DirectedGraph& g, const std::vector<int>& alpha_indices,
                const FitOptions& opts = {});

/// Same test on the beta side, via the transposed graph.
TestResult wald(const DirectedGraph& g, Side side, const std::vector<int>& indices,
                const FitOptions& opts = {});

/// Standard normal CDF.
double normal_cdf(double x);

/// Chi-square CDF: the regularized lower incomplete gamma P(df/2, x/2),
/// series expansion below df+1 and continued fraction above.
double chisq_cdf(double x, int df);

/// Quantiles by bisection on the corresponding CDF (|x| tolerance 1e-9).
double normal_quantile(double p);
double chisq_quantile(double p, int df);

}  // namespace p0
