#include "p0/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "p0/errors.hpp"

namespace p0 {

double mu(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double mu_prime(double x) {
  const double e = std::exp(-std::abs(x));
  const double q = 1.0 + e;
  return e / (q * q);
}

double log1p_exp(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

double edge_prob(const Theta& theta, int i, int j) {
  const int n = theta.n();
  if (i < 0 || i >= n || j < 0 || j >= n) throw std::invalid_argument("node out of range");
  if (i == j) throw std::invalid_argument("self-loops have no edge probability");
  return mu(theta.alpha[i] + theta.beta[j]);
}

double log_likelihood(const DirectedGraph& g, const Theta& theta) {
  const int n = g.node_count();
  if (theta.n() != n) throw std::invalid_argument("parameter dimension does not match graph");
  const BiDegree& deg = g.bi_degree();
  double value = 0.0;
  for (int i = 0; i < n; ++i) value += theta.alpha[i] * deg.out_deg[i];
  // The beta_n term vanishes when theta is identified (beta_n = 0).
  for (int j = 0; j < n; ++j) value += theta.beta[j] * deg.in_deg[j];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) value -= log1p_exp(theta.alpha[i] + theta.beta[j]);
  return value;
}

std::vector<double> score(const DirectedGraph& g, const Theta& theta) {
  const int n = g.node_count();
  if (theta.n() != n) throw std::invalid_argument("parameter dimension does not match graph");
  const BiDegree& deg = g.bi_degree();
  std::vector<double> row(n, 0.0), col(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double m = mu(theta.alpha[i] + theta.beta[j]);
      row[i] += m;
      col[j] += m;
    }
  }
  std::vector<double> s(2 * n - 1);
  for (int i = 0; i < n; ++i) s[i] = deg.out_deg[i] - row[i];
  for (int j = 0; j + 1 < n; ++j) s[n + j] = deg.in_deg[j] - col[j];
  return s;
}

FisherInfo fisher_info(const Theta& theta) {
  const int n = theta.n();
  if (n < 2) throw std::invalid_argument("fisher_info requires at least 2 nodes");
  if (!theta.identified || theta.beta[n - 1] != 0.0)
    throw std::invalid_argument("fisher_info requires an identified theta (beta_n = 0)");

  FisherInfo info;
  info.dim = 2 * n - 1;
  info.v = Matrix(info.dim, info.dim, 0.0);
  info.beta_n_cross.assign(n, 0.0);

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double w = mu_prime(theta.alpha[i] + theta.beta[j]);
      info.v(i, i) += w;
      if (j < n - 1) {
        info.v(n + j, n + j) += w;
        info.v(i, n + j) = w;
        info.v(n + j, i) = w;
      } else {
        info.beta_n_cross[i] = w;
      }
    }
  }
  for (double w : info.beta_n_cross) info.v_2n += w;
  return info;
}

Conditioning conditioning(const Theta& theta) {
  const int n = theta.n();
  if (n < 2) throw std::invalid_argument("conditioning requires at least 2 nodes");
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      // (1 + e^x)^2 / e^x = 1 / mu'(x), evaluated stably
      const double ratio = 1.0 / mu_prime(theta.alpha[i] + theta.beta[j]);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
  }
  return {hi, lo};
}

namespace {

void require_invertible_diag(const FisherInfo& info, int from) {
  for (int i = from; i < info.dim; ++i)
    if (info.v(i, i) <= 0.0)
      throw SingularInformationError("Fisher diagonal vanishes at index " + std::to_string(i));
}

}  // namespace

Matrix approx_inverse_S(const FisherInfo& info) {
  const int n = info.node_count();
  require_invertible_diag(info, 0);
  if (info.v_2n <= 0.0) throw SingularInformationError("beta_n row sum v_{2n,2n} vanishes");

  const double u = 1.0 / info.v_2n;
  Matrix s(info.dim, info.dim);
  for (int i = 0; i < info.dim; ++i) {
    const bool i_alpha = i < n;
    for (int j = 0; j < info.dim; ++j) {
      const bool j_alpha = j < n;
      double val = (i_alpha == j_alpha) ? u : -u;
      if (i == j) val += 1.0 / info.v(i, i);
      s(i, j) = val;
    }
  }
  return s;
}

Matrix pooled_fisher_info(const FisherInfo& info, int r) {
  const int n = info.node_count();
  if (r < 1 || r > n - 1) throw std::invalid_argument("pooled size r out of range [1, n-1]");
  const int m = info.dim - r + 1;  // 2n - r

  // Rows/columns of the pooled matrix: 0 = shared alpha, then the original
  // rows r..2n-2. The shared row aggregates the first r alpha rows.
  Matrix vt(m, m, 0.0);
  double v11 = 0.0;
  for (int i = 0; i < r; ++i) v11 += info.v(i, i);
  vt(0, 0) = v11;
  for (int k = 1; k < m; ++k) {
    const int orig = r + k - 1;
    double cross = 0.0;
    for (int i = 0; i < r; ++i) cross += info.v(i, orig);
    vt(0, k) = cross;
    vt(k, 0) = cross;
    for (int l = 1; l < m; ++l) vt(k, l) = info.v(orig, r + l - 1);
  }
  return vt;
}

Matrix approx_inverse_S_tilde(const FisherInfo& info, int r) {
  const int n = info.node_count();
  if (r < 1 || r > n - 1) throw std::invalid_argument("pooled size r out of range [1, n-1]");
  require_invertible_diag(info, 0);
  if (info.v_2n <= 0.0) throw SingularInformationError("beta_n row sum v_{2n,2n} vanishes");

  double v11 = 0.0;
  for (int i = 0; i < r; ++i) v11 += info.v(i, i);

  const int m = info.dim - r + 1;
  const double u = 1.0 / info.v_2n;
  // Local index k maps to the pooled alpha (k = 0), alpha_{r+k} for
  // k <= n-r, and beta otherwise; the sign pattern follows the blocks.
  auto is_alpha = [&](int k) { return k <= n - r; };

  Matrix s(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      double val = (is_alpha(i) == is_alpha(j)) ? u : -u;
      if (i == j) val += (i == 0) ? 1.0 / v11 : 1.0 / info.v(r + i - 1, r + i - 1);
      s(i, j) = val;
    }
  }
  return s;
}

Matrix fisher_block_22(const FisherInfo& info, int r) {
  const int n = info.node_count();
  if (r < 0 || r > n - 1) throw std::invalid_argument("block size r out of range [0, n-1]");
  const int m = info.dim - r;
  Matrix v22(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) v22(i, j) = info.v(r + i, r + j);
  return v22;
}

Matrix approx_inverse_S22(const FisherInfo& info, int r) {
  const int n = info.node_count();
  if (r < 0 || r > n - 1) throw std::invalid_argument("block size r out of range [0, n-1]");
  require_invertible_diag(info, r);

  // Row sum of the beta_n column restricted to the unconstrained
  // coordinates: the alpha part over i > r plus the beta rows' overlap with
  // the constrained alpha columns.
  double tv2n = 0.0;
  for (int i = r; i < n; ++i) tv2n += info.beta_n_cross[i];
  for (int j = 0; j + 1 < n; ++j)
    for (int i = 0; i < r; ++i) tv2n += info.v(n + j, i);
  if (tv2n <= 0.0) throw SingularInformationError("restricted beta_n row sum vanishes");

  const int m = info.dim - r;
  const double u = 1.0 / tv2n;
  Matrix s(m, m);
  for (int i = 0; i < m; ++i) {
    const bool i_alpha = (r + i) < n;
    for (int j = 0; j < m; ++j) {
      const bool j_alpha = (r + j) < n;
      double val = (i_alpha == j_alpha) ? u : -u;
      if (i == j) val += 1.0 / info.v(r + i, r + i);
      s(i, j) = val;
    }
  }
  return s;
}

}  // namespace p0
