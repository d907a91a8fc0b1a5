#pragma once

#include <vector>

#include "p0/graph.hpp"
#include "p0/matrix.hpp"

namespace p0 {

/// Model parameters: alpha_i controls how readily node i sends edges,
/// beta_j how readily node j receives them. Only alpha_i + beta_j is
/// observable, so the model is fixed by the convention beta_n = 0;
/// `identified` records whether that convention is in force (restricted
/// fits under a specified null leave beta_n free instead).
struct Theta {
  std::vector<double> alpha;  // size n
  std::vector<double> beta;   // size n; beta[n-1] == 0 when identified
  bool identified = true;

  int n() const { return static_cast<int>(alpha.size()); }

  static Theta zeros(int n) { return Theta{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), true}; }
};

/// Fisher information of the identified parameter vector
/// (alpha_1..alpha_n, beta_1..beta_{n-1}), dimension 2n-1. Row/column k
/// corresponds to alpha_{k+1} for k < n and to beta_{k-n+1} otherwise.
/// The beta_n direction is not a matrix row; its cross terms
/// mu'(alpha_i + beta_n) are kept as a side channel because the
/// closed-form inverse approximations need their sum v_{2n,2n}.
struct FisherInfo {
  int dim = 0;                          // 2n-1
  Matrix v;                             // symmetric, block-structured
  std::vector<double> beta_n_cross;     // length n; entry i is mu'(alpha_i + beta_n), 0 at i = n-1
  double v_2n = 0.0;                    // sum of beta_n_cross

  int node_count() const { return (dim + 1) / 2; }
};

/// Logistic function e^x / (1 + e^x).
double mu(double x);

/// Derivative of mu: e^x / (1 + e^x)^2, the variance of an edge indicator.
double mu_prime(double x);

/// log(1 + e^x), evaluated as max(x,0) + log1p(e^{-|x|}) so it neither
/// overflows nor loses precision for large |x|.
double log1p_exp(double x);

/// Probability of edge i -> j, mu(alpha_i + beta_j). Rejects i == j.
double edge_prob(const Theta& theta, int i, int j);

/// sum_i alpha_i d_i + sum_j beta_j b_j - sum_{i != j} log(1 + e^{alpha_i + beta_j}).
/// The beta_n term is included; it vanishes identically when theta is
/// identified, and the specified-null fits need it when beta_n is free.
double log_likelihood(const DirectedGraph& g, const Theta& theta);

/// Gradient of the log-likelihood in the identified coordinates:
/// component i is d_i - sum_{j != i} mu(alpha_i + beta_j) for i < n, and
/// component n+j is b_j - sum_{i != j} mu(alpha_i + beta_j) for j < n-1.
std::vector<double> score(const DirectedGraph& g, const Theta& theta);

/// Fisher information at an identified theta (also the negative Hessian of
/// the log-likelihood and the covariance of the bi-degree vector).
FisherInfo fisher_info(const Theta& theta);

/// Extremes of (1 + e^{alpha_i+beta_j})^2 / e^{alpha_i+beta_j} over ordered
/// pairs i != j; reciprocals of the minimum and maximum edge variances.
/// c_n >= 4 always, with equality when some alpha_i + beta_j = 0.
struct Conditioning {
  double b_n;  // maximum
  double c_n;  // minimum
};
Conditioning conditioning(const Theta& theta);

/// Closed-form approximation S to V^{-1}: diagonal 1/v_{ii} plus a
/// +-1/v_{2n,2n} rank-structure with signs +,- by parameter block.
/// Throws SingularInformationError when a diagonal entry or v_{2n,2n}
/// vanishes. Diagnostic only; the entrywise error decays like (n-1)^{-2}.
Matrix approx_inverse_S(const FisherInfo& info);

/// Fisher information of the pooled parametrization under the homogeneous
/// null alpha_1 = ... = alpha_r: row 0 is the pooled parameter, followed by
/// alpha_{r+1}..alpha_n and beta_1..beta_{n-1}. Dimension 2n-r.
Matrix pooled_fisher_info(const FisherInfo& info, int r);

/// Approximation to pooled_fisher_info(info, r)^{-1}; reduces to S at r=1.
Matrix approx_inverse_S_tilde(const FisherInfo& info, int r);

/// Lower-right (2n-1-r)-dimensional block of V, i.e. V with the first r
/// alpha rows and columns removed.
Matrix fisher_block_22(const FisherInfo& info, int r);

/// Approximation to fisher_block_22(info, r)^{-1}, built from the same
/// diagonal-plus-rank structure with the beta_n row sum restricted to the
/// unconstrained coordinates. Reduces to S at r=0.
Matrix approx_inverse_S22(const FisherInfo& info, int r);

}  // namespace p0
