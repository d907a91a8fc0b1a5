#include "p0/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "p0/errors.hpp"

namespace p0 {

namespace {

std::string format_double(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

std::vector<int> first_indices(int r) {
  std::vector<int> idx(r);
  for (int i = 0; i < r; ++i) idx[i] = i;
  return idx;
}

}  // namespace

Scenario scenario_h01(int n, double L) {
  if (n < 2) throw std::invalid_argument("scenario needs n >= 2");
  Theta theta = Theta::zeros(n);
  for (int i = 0; i < n; ++i) theta.alpha[i] = i * L / (n - 1);
  for (int i = 0; i + 1 < n; ++i) theta.beta[i] = theta.alpha[i];
  Scenario sc;
  sc.label = "h01(n=" + std::to_string(n) + ",L=" + format_double(L) + ")";
  sc.n = n;
  sc.null = NullHypothesis::specified(Side::Alpha, first_indices(n), theta.alpha);
  sc.theta = std::move(theta);
  sc.L = L;
  return sc;
}

Scenario scenario_h02_h03(int n, int r, double L) {
  if (n < 2) throw std::invalid_argument("scenario needs n >= 2");
  if (r < 2 || r > n) throw std::invalid_argument("pooled size r out of range [2, n]");
  Theta theta = Theta::zeros(n);
  for (int i = r; i < n; ++i) theta.alpha[i] = i * L / (n - 1);
  for (int i = 0; i + 1 < n; ++i) theta.beta[i] = theta.alpha[i];
  Scenario sc;
  sc.label = "h0r(n=" + std::to_string(n) + ",r=" + std::to_string(r) + ",L=" + format_double(L) + ")";
  sc.n = n;
  sc.null = NullHypothesis::homogeneous(Side::Alpha, first_indices(r));
  sc.theta = std::move(theta);
  sc.L = L;
  return sc;
}

Scenario scenario_power(int n, int r, double c) {
  if (n < 2) throw std::invalid_argument("scenario needs n >= 2");
  if (r < 2 || r > n) throw std::invalid_argument("tested size r out of range [2, n]");
  if (c < 0.0) throw std::invalid_argument("effect size c must be non-negative");
  Theta theta = Theta::zeros(n);
  const double slope = 0.2 * std::log(static_cast<double>(n)) / n;
  for (int i = 0; i < n; ++i) theta.alpha[i] = (i < r) ? (i + 1) * c / r : (i + 1) * slope;
  for (int i = 0; i + 1 < n; ++i) theta.beta[i] = (i + 1) * slope;
  Scenario sc;
  sc.label = "power(n=" + std::to_string(n) + ",r=" + std::to_string(r) + ",c=" + format_double(c) + ")";
  sc.n = n;
  sc.null = NullHypothesis::homogeneous(Side::Alpha, first_indices(r));
  sc.theta = std::move(theta);
  sc.c = c;
  return sc;
}

DirectedGraph sample_graph(const Theta& theta, RngStream& rng) {
  const int n = theta.n();
  DirectedGraph g(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (rng.bernoulli(mu(theta.alpha[i] + theta.beta[j]))) g.add_edge(i, j);
    }
  }
  return g;
}

namespace {

struct ResolvedTest {
  TestMethod method;
  ReferenceDistribution reference;
};

ResolvedTest resolve_test(const Scenario& scenario, const TestSpec& spec) {
  const int r = scenario.null.r();
  if (spec.type == TestSpec::Type::Wald) {
    if (scenario.null.kind != NullHypothesis::Kind::Homogeneous)
      throw InvalidReferenceError("the Wald test applies to homogeneous nulls only");
    return {TestMethod::Wald, ReferenceDistribution::chi_square(r - 1)};
  }
  const bool homogeneous = scenario.null.kind == NullHypothesis::Kind::Homogeneous;
  bool use_chisq;
  switch (spec.ref) {
    case LrtReference::ChiSquareFixedR:
      if (!homogeneous)
        throw InvalidReferenceError("no chi-square reference exists for a specified null");
      use_chisq = true;
      break;
    case LrtReference::NormalIncreasingR:
      use_chisq = false;
      break;
    case LrtReference::Auto:
    default:
      use_chisq = homogeneous && r <= spec.r_switch;
      break;
  }
  if (use_chisq)
    return {TestMethod::LrtChiSquare, ReferenceDistribution::chi_square(r - 1)};
  return {TestMethod::LrtNormal, ReferenceDistribution::std_normal()};
}

// One replicate: sample, fit, return the statistic in the resolved scale.
// Degenerate degrees and non-convergence surface as nullopt.
std::optional<double> run_replicate(const Scenario& scenario, const ResolvedTest& resolved,
                                    std::uint64_t seed, int k, const FitOptions& fit_opts) {
  RngStream rng(seed, static_cast<std::uint64_t>(k));
  DirectedGraph g = sample_graph(scenario.theta, rng);
  try {
    if (resolved.method == TestMethod::Wald) {
      TestResult t = wald(g, scenario.null.side, scenario.null.indices, fit_opts);
      return t.statistic;
    }
    FitResult full = fit_mle(g, fit_opts);
    FitResult restricted = fit_restricted(g, scenario.null, fit_opts);
    const double tdl = 2.0 * (full.loglik - restricted.loglik);
    if (resolved.method == TestMethod::LrtChiSquare) return tdl;
    return (tdl - scenario.null.r()) / std::sqrt(2.0 * scenario.null.r());
  } catch (const DegenerateDegreeError&) {
    return std::nullopt;
  } catch (const NonConvergenceError&) {
    return std::nullopt;
  }
}

}  // namespace

SimulationReport monte_carlo(const Scenario& scenario, const TestSpec& test, int replicates,
                             std::uint64_t seed, int workers, const std::vector<double>& levels,
                             const FitOptions& fit_opts) {
  if (replicates < 1) throw std::invalid_argument("need at least one replicate");
  scenario.null.validate(scenario.n);
  const ResolvedTest resolved = resolve_test(scenario, test);

  std::vector<std::optional<double>> slots(replicates);
  const int nworkers = std::max(1, workers);
  if (nworkers == 1) {
    for (int k = 0; k < replicates; ++k)
      slots[k] = run_replicate(scenario, resolved, seed, k, fit_opts);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
      for (;;) {
        const int k = next.fetch_add(1);
        if (k >= replicates) return;
        try {
          slots[k] = run_replicate(scenario, resolved, seed, k, fit_opts);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(nworkers);
    for (int w = 0; w < nworkers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }

  SimulationReport report;
  report.scenario = scenario;
  report.test = test;
  report.method = resolved.method;
  report.reference = resolved.reference;
  report.replicates = replicates;
  report.seed = seed;
  for (const auto& s : slots) {
    if (s)
      report.statistics.push_back(*s);
    else
      ++report.n_failed;
  }

  const double m = static_cast<double>(report.statistics.size());
  for (double level : levels) {
    if (level <= 0.0 || level >= 1.0) throw std::invalid_argument("levels must be in (0,1)");
    long long rejected = 0;
    double lo, hi;
    if (resolved.reference.type == ReferenceDistribution::Type::ChiSquare) {
      lo = chisq_quantile(level / 2.0, resolved.reference.df);
      hi = chisq_quantile(1.0 - level / 2.0, resolved.reference.df);
    } else {
      lo = normal_quantile(level / 2.0);
      hi = normal_quantile(1.0 - level / 2.0);
    }
    for (double s : report.statistics)
      if (s < lo || s > hi) ++rejected;
    report.rejection_rates.emplace_back(level, m > 0 ? rejected / m : 0.0);
  }
  return report;
}

std::vector<std::pair<double, double>> qq_data(std::vector<double> statistics,
                                               const ReferenceDistribution& reference) {
  if (statistics.size() < 2) throw std::invalid_argument("qq_data needs at least 2 statistics");
  for (double s : statistics)
    if (!std::isfinite(s)) throw std::invalid_argument("qq_data needs finite statistics");
  std::sort(statistics.begin(), statistics.end());
  const std::size_t m = statistics.size();
  std::vector<std::pair<double, double>> out;
  out.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double p = (static_cast<double>(k) + 0.5) / static_cast<double>(m);
    double q;
    switch (reference.type) {
      case ReferenceDistribution::Type::ChiSquare:
        q = chisq_quantile(p, reference.df);
        break;
      case ReferenceDistribution::Type::StdNormal:
        q = normal_quantile(p);
        break;
      default:
        throw std::invalid_argument("qq_data needs a chi-square or normal reference");
    }
    out.emplace_back(q, statistics[k]);
  }
  return out;
}

}  // namespace p0
