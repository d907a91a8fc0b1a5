#include "p0/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "p0/errors.hpp"

namespace p0 {

NullHypothesis NullHypothesis::homogeneous(Side side, std::vector<int> indices) {
  std::sort(indices.begin(), indices.end());
  if (std::adjacent_find(indices.begin(), indices.end()) != indices.end())
    throw std::invalid_argument("null indices must be distinct");
  if (indices.size() < 2)
    throw std::invalid_argument("a homogeneous null needs at least 2 indices");
  return NullHypothesis{side, Kind::Homogeneous, std::move(indices), {}};
}

NullHypothesis NullHypothesis::specified(Side side, std::vector<int> indices,
                                         std::vector<double> values) {
  if (indices.empty()) throw std::invalid_argument("a specified null needs at least 1 index");
  if (indices.size() != values.size())
    throw std::invalid_argument("specified null needs one value per index");
  std::vector<std::size_t> order(indices.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return indices[a] < indices[b]; });
  std::vector<int> si(indices.size());
  std::vector<double> sv(values.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    si[k] = indices[order[k]];
    sv[k] = values[order[k]];
  }
  if (std::adjacent_find(si.begin(), si.end()) != si.end())
    throw std::invalid_argument("null indices must be distinct");
  return NullHypothesis{side, Kind::Specified, std::move(si), std::move(sv)};
}

void NullHypothesis::validate(int n) const {
  for (int i : indices) {
    if (i < 0 || i >= n) throw std::invalid_argument("null index out of range");
    if (side == Side::Beta && i == n - 1)
      throw std::invalid_argument("beta_n is the identification anchor and cannot be constrained");
  }
}

namespace {

// Shared state of one fixed-point solve. All sweeps are Jacobi-style: the
// right-hand sides use only the previous iterate, matching the update order
// of the reference algorithms.
struct Sweeper {
  const DirectedGraph& g;
  int n;
  std::vector<double> d, b;  // degrees as doubles
  std::vector<double> alpha, beta;
  std::vector<double> ea, ena, eb, enb;  // exp(+-alpha), exp(+-beta), refreshed per pass

  explicit Sweeper(const DirectedGraph& graph) : g(graph), n(graph.node_count()) {
    const BiDegree& deg = g.bi_degree();
    d.assign(deg.out_deg.begin(), deg.out_deg.end());
    b.assign(deg.in_deg.begin(), deg.in_deg.end());
    ea.resize(n);
    ena.resize(n);
    eb.resize(n);
    enb.resize(n);
  }

  void refresh_exp() {
    for (int i = 0; i < n; ++i) {
      ea[i] = std::exp(alpha[i]);
      ena[i] = std::exp(-alpha[i]);
      eb[i] = std::exp(beta[i]);
      enb[i] = std::exp(-beta[i]);
    }
  }

  // Accumulates, from the current iterate, the update denominators
  //   asum[i] = sum_{j != i} e^{beta_j} / (1 + e^{alpha_i + beta_j})
  //   bsum[j] = sum_{i != j} e^{alpha_i} / (1 + e^{alpha_i + beta_j})
  // in the overflow-safe forms 1/(e^{-beta_j} + e^{alpha_i}) and
  // 1/(e^{-alpha_i} + e^{beta_j}).
  void update_denominators(std::vector<double>& asum, std::vector<double>& bsum) {
    asum.assign(n, 0.0);
    bsum.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
      const double eai = ea[i];
      const double enai = ena[i];
      double acc = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        acc += 1.0 / (enb[j] + eai);
        bsum[j] += 1.0 / (enai + eb[j]);
      }
      asum[i] = acc;
    }
  }

  // max over the checked likelihood equations of |fitted/observed - 1|,
  // evaluated at the freshly updated iterate. alpha_checked[i] == false
  // skips the out-equation of node i (pooled or pinned nodes).
  double deviation(const std::vector<char>& alpha_checked) {
    refresh_exp();
    std::vector<double> row(n, 0.0), col(n, 0.0);
    for (int i = 0; i < n; ++i) {
      const double enai = ena[i];
      double acc = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double m = 1.0 / (1.0 + enai * enb[j]);
        acc += m;
        col[j] += m;
      }
      row[i] = acc;
    }
    double dev = 0.0;
    for (int i = 0; i < n; ++i)
      if (alpha_checked[i]) dev = std::max(dev, std::abs(row[i] / d[i] - 1.0));
    for (int j = 0; j < n; ++j) dev = std::max(dev, std::abs(col[j] / b[j] - 1.0));
    return dev;
  }

  bool iterate_in_bounds() const {
    for (int i = 0; i < n; ++i) {
      if (!std::isfinite(alpha[i]) || !std::isfinite(beta[i])) return false;
      if (std::abs(alpha[i]) > 500.0 || std::abs(beta[i]) > 500.0) return false;
    }
    return true;
  }

  FitResult result(const DirectedGraph& graph, int iterations, bool converged, double dev,
                   bool identified) const {
    Theta theta{alpha, beta, identified};
    FitResult fr;
    fr.theta = std::move(theta);
    fr.loglik = log_likelihood(graph, fr.theta);
    fr.iterations = iterations;
    fr.converged = converged;
    fr.max_rel_dev = dev;
    return fr;
  }
};

void require_positive(const std::vector<double>& deg, const std::vector<char>& needed,
                      DegenerateDegreeError::What what) {
  std::vector<int> bad;
  for (std::size_t i = 0; i < deg.size(); ++i)
    if (needed[i] && deg[i] < 1.0) bad.push_back(static_cast<int>(i));
  if (!bad.empty()) throw DegenerateDegreeError(what, bad);
}

Theta default_init(int n, const FitOptions& opts) {
  if (!opts.init) return Theta::zeros(n);
  const Theta& t = *opts.init;
  if (t.n() != n) throw std::invalid_argument("init dimension does not match graph");
  return t;
}

void renormalize_beta_n(Theta& theta) {
  const double shift = theta.beta.back();
  for (double& a : theta.alpha) a += shift;
  for (double& b : theta.beta) b -= shift;
  theta.beta.back() = 0.0;  // exact zero, not a rounding residue
  theta.identified = true;
}

FitResult swap_roles(const FitResult& fit, const DirectedGraph& original) {
  FitResult out = fit;
  std::swap(out.theta.alpha, out.theta.beta);
  out.loglik = log_likelihood(original, out.theta);
  return out;
}

DegenerateDegreeError transpose_error(const DegenerateDegreeError& e) {
  using What = DegenerateDegreeError::What;
  What w = e.code();
  if (w == What::OutDegreeZero) w = What::InDegreeZero;
  else if (w == What::InDegreeZero) w = What::OutDegreeZero;
  return DegenerateDegreeError(w, e.nodes());
}

}  // namespace

FitResult fit_mle(const DirectedGraph& g, const FitOptions& opts) {
  const int n = g.node_count();
  if (n < 2) throw std::invalid_argument("fit requires at least 2 nodes");

  Sweeper sw(g);
  const std::vector<char> all(n, 1);
  require_positive(sw.d, all, DegenerateDegreeError::What::OutDegreeZero);
  require_positive(sw.b, all, DegenerateDegreeError::What::InDegreeZero);

  Theta init = default_init(n, opts);
  sw.alpha = init.alpha;
  sw.beta = init.beta;

  std::vector<double> asum, bsum, na(n), nb(n);
  double dev = 0.0;
  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    sw.refresh_exp();
    sw.update_denominators(asum, bsum);
    for (int i = 0; i < n; ++i) na[i] = std::log(sw.d[i]) - std::log(asum[i]);
    for (int j = 0; j < n; ++j) nb[j] = std::log(sw.b[j]) - std::log(bsum[j]);
    const double shift = nb[n - 1];
    for (int i = 0; i < n; ++i) na[i] += shift;
    for (int j = 0; j < n; ++j) nb[j] -= shift;
    nb[n - 1] = 0.0;
    sw.alpha = na;
    sw.beta = nb;

    if (!sw.iterate_in_bounds())
      throw NonConvergenceError("iterates diverged; the MLE likely does not exist",
                                sw.result(g, iter, false, dev, true));
    dev = sw.deviation(all);
    if (dev < opts.eps) return sw.result(g, iter, true, dev, true);
  }
  throw NonConvergenceError("no convergence after max_iter sweeps; the MLE likely does not exist",
                            sw.result(g, opts.max_iter, false, dev, true));
}

FitResult fit_restricted_homogeneous(const DirectedGraph& g, const NullHypothesis& null,
                                     const FitOptions& opts) {
  if (null.kind != NullHypothesis::Kind::Homogeneous)
    throw std::invalid_argument("fit_restricted_homogeneous needs a homogeneous null");
  null.validate(g.node_count());

  if (null.side == Side::Beta) {
    DirectedGraph t = g.transpose();
    NullHypothesis flipped = null;
    flipped.side = Side::Alpha;
    FitOptions topts = opts;
    if (opts.init) {
      topts.init = *opts.init;
      std::swap(topts.init->alpha, topts.init->beta);
    }
    try {
      FitResult fit = fit_restricted_homogeneous(t, flipped, topts);
      FitResult out = swap_roles(fit, g);
      renormalize_beta_n(out.theta);
      out.loglik = log_likelihood(g, out.theta);
      return out;
    } catch (const DegenerateDegreeError& e) {
      throw transpose_error(e);
    } catch (const NonConvergenceError& e) {
      throw NonConvergenceError(e.what(), swap_roles(e.last(), g));
    }
  }

  const int n = g.node_count();
  if (n < 2) throw std::invalid_argument("fit requires at least 2 nodes");

  Sweeper sw(g);
  std::vector<char> in_set(n, 0);
  for (int i : null.indices) in_set[i] = 1;
  std::vector<char> checked(n, 1), all(n, 1);
  for (int i : null.indices) checked[i] = 0;

  double pooled_d = 0.0;
  for (int i : null.indices) pooled_d += sw.d[i];
  if (pooled_d < 1.0)
    throw DegenerateDegreeError(DegenerateDegreeError::What::PooledDegreeZero, null.indices);
  require_positive(sw.d, checked, DegenerateDegreeError::What::OutDegreeZero);
  require_positive(sw.b, all, DegenerateDegreeError::What::InDegreeZero);

  Theta init = default_init(n, opts);
  // Project the start onto the null manifold.
  double shared0 = 0.0;
  for (int i : null.indices) shared0 += init.alpha[i];
  shared0 /= null.r();
  for (int i : null.indices) init.alpha[i] = shared0;
  sw.alpha = init.alpha;
  sw.beta = init.beta;

  std::vector<double> asum, bsum, na(n), nb(n);
  double dev = 0.0;
  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    sw.refresh_exp();
    sw.update_denominators(asum, bsum);
    double pooled_denom = 0.0;
    for (int i : null.indices) pooled_denom += asum[i];
    const double shared = std::log(pooled_d) - std::log(pooled_denom);
    for (int i = 0; i < n; ++i)
      na[i] = in_set[i] ? shared : std::log(sw.d[i]) - std::log(asum[i]);
    for (int j = 0; j < n; ++j) nb[j] = std::log(sw.b[j]) - std::log(bsum[j]);
    sw.alpha = na;
    sw.beta = nb;

    if (!sw.iterate_in_bounds())
      throw NonConvergenceError("iterates diverged; the restricted MLE likely does not exist",
                                sw.result(g, iter, false, dev, false));
    dev = sw.deviation(checked);
    if (dev < opts.eps) {
      FitResult fit = sw.result(g, iter, true, dev, false);
      renormalize_beta_n(fit.theta);
      fit.loglik = log_likelihood(g, fit.theta);
      return fit;
    }
  }
  throw NonConvergenceError("no convergence after max_iter sweeps; the restricted MLE likely does not exist",
                            sw.result(g, opts.max_iter, false, dev, false));
}

FitResult fit_restricted_specified(const DirectedGraph& g, const NullHypothesis& null,
                                   const FitOptions& opts) {
  if (null.kind != NullHypothesis::Kind::Specified)
    throw std::invalid_argument("fit_restricted_specified needs a specified null");
  null.validate(g.node_count());

  if (null.side == Side::Beta) {
    DirectedGraph t = g.transpose();
    NullHypothesis flipped = null;
    flipped.side = Side::Alpha;
    FitOptions topts = opts;
    if (opts.init) {
      topts.init = *opts.init;
      std::swap(topts.init->alpha, topts.init->beta);
    }
    try {
      FitResult fit = fit_restricted_specified(t, flipped, topts);
      // No renormalization: the pinned betas must stay exact.
      return swap_roles(fit, g);
    } catch (const DegenerateDegreeError& e) {
      throw transpose_error(e);
    } catch (const NonConvergenceError& e) {
      throw NonConvergenceError(e.what(), swap_roles(e.last(), g));
    }
  }

  const int n = g.node_count();
  if (n < 2) throw std::invalid_argument("fit requires at least 2 nodes");

  Sweeper sw(g);
  std::vector<char> pinned(n, 0);
  for (int i : null.indices) pinned[i] = 1;
  std::vector<char> checked(n, 1), all(n, 1);
  for (int i : null.indices) checked[i] = 0;

  require_positive(sw.d, checked, DegenerateDegreeError::What::OutDegreeZero);
  require_positive(sw.b, all, DegenerateDegreeError::What::InDegreeZero);

  Theta init = default_init(n, opts);
  init.identified = false;
  for (std::size_t k = 0; k < null.indices.size(); ++k) init.alpha[null.indices[k]] = null.values[k];
  sw.alpha = init.alpha;
  sw.beta = init.beta;

  std::vector<double> asum, bsum, na(n), nb(n);
  double dev = 0.0;
  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    sw.refresh_exp();
    sw.update_denominators(asum, bsum);
    for (int i = 0; i < n; ++i)
      na[i] = pinned[i] ? sw.alpha[i] : std::log(sw.d[i]) - std::log(asum[i]);
    for (int j = 0; j < n; ++j) nb[j] = std::log(sw.b[j]) - std::log(bsum[j]);
    sw.alpha = na;
    sw.beta = nb;

    if (!sw.iterate_in_bounds())
      throw NonConvergenceError("iterates diverged; the restricted MLE likely does not exist",
                                sw.result(g, iter, false, dev, false));
    dev = sw.deviation(checked);
    if (dev < opts.eps) return sw.result(g, iter, true, dev, false);
  }
  throw NonConvergenceError("no convergence after max_iter sweeps; the restricted MLE likely does not exist",
                            sw.result(g, opts.max_iter, false, dev, false));
}

FitResult fit_restricted(const DirectedGraph& g, const NullHypothesis& null, const FitOptions& opts) {
  return null.kind == NullHypothesis::Kind::Homogeneous
             ? fit_restricted_homogeneous(g, null, opts)
             : fit_restricted_specified(g, null, opts);
}

ExistenceDiagnosis check_existence(const DirectedGraph& g, const NullHypothesis* null) {
  const int n = g.node_count();
  const BiDegree& deg = g.bi_degree();
  ExistenceDiagnosis diag;
  for (int i = 0; i < n; ++i) {
    if (deg.out_deg[i] == 0) diag.zero_out.push_back(i);
    if (deg.out_deg[i] == n - 1) diag.saturated_out.push_back(i);
    if (deg.in_deg[i] == 0) diag.zero_in.push_back(i);
    if (deg.in_deg[i] == n - 1) diag.saturated_in.push_back(i);
  }
  if (null && null->kind == NullHypothesis::Kind::Homogeneous) {
    long long pooled = 0;
    const auto& d = null->side == Side::Alpha ? deg.out_deg : deg.in_deg;
    for (int i : null->indices) pooled += d[i];
    diag.pooled_zero = pooled == 0;
  }
  return diag;
}

std::string ExistenceDiagnosis::summary() const {
  if (ok()) return "no degenerate or saturated degrees; fixed-point updates are well defined";
  std::ostringstream os;
  auto list = [&os](const char* label, const std::vector<int>& nodes) {
    if (nodes.empty()) return;
    os << label;
    for (int v : nodes) os << ' ' << v + 1;
    os << "; ";
  };
  list("zero out-degree at", zero_out);
  list("saturated out-degree at", saturated_out);
  list("zero in-degree at", zero_in);
  list("saturated in-degree at", saturated_in);
  if (pooled_zero) os << "pooled degree sum of the null set is zero; ";
  os << "boundary degrees typically mean the MLE does not exist";
  return os.str();
}

}  // namespace p0
