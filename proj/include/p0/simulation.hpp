#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "p0/inference.hpp"
#include "p0/rng.hpp"

namespace p0 {

/// A data-generating configuration plus the hypothesis tested against it.
struct Scenario {
  std::string label;
  int n = 0;
  Theta theta;              // identified (beta_n = 0)
  NullHypothesis null;
  std::optional<double> L;  // heterogeneity slope, when applicable
  std::optional<double> c;  // power-design effect size, when applicable
};

/// Specified null at the truth: alpha_i = (i-1)L/(n-1) for all i,
/// beta_i = alpha_i except beta_n = 0.
Scenario scenario_h01(int n, double L);

/// Homogeneous null on the first r nodes: alpha_1..alpha_r = 0, remaining
/// alpha_i = (i-1)L/(n-1), beta_i = alpha_i except beta_n = 0.
Scenario scenario_h02_h03(int n, int r, double L);

/// Power design: alpha_i = i*c/r on the tested set {1..r}, alpha_i =
/// 0.2*i*log(n)/n beyond it, beta_i = 0.2*i*log(n)/n with beta_n = 0;
/// the null alpha_1 = ... = alpha_r is false whenever c > 0.
Scenario scenario_power(int n, int r, double c);

/// One draw from the model: each ordered pair (i, j), i != j, carries an
/// edge independently with probability mu(alpha_i + beta_j).
DirectedGraph sample_graph(const Theta& theta, RngStream& rng);

struct TestSpec {
  enum class Type { Lrt, Wald };
  Type type = Type::Lrt;
  LrtReference ref = LrtReference::Auto;  // LRT only
  int r_switch = 30;
};

struct SimulationReport {
  Scenario scenario;
  TestSpec test;
  TestMethod method = TestMethod::LrtChiSquare;  // resolved from scenario + spec
  ReferenceDistribution reference;
  int replicates = 0;
  std::uint64_t seed = 0;
  std::vector<double> statistics;     // converged replicates, in replicate order
  int n_failed = 0;                   // fit failures, excluded from the rates
  std::vector<std::pair<double, double>> rejection_rates;  // (level, fraction)
};

/// Runs `replicates` independent draws of the scenario, fitting and testing
/// each one. Replicate k draws from stream (seed, k), so the report is
/// bitwise-identical for any worker count. Replicates whose fits fail
/// (degenerate degrees or non-convergence) are counted and excluded.
///
/// A replicate counts as rejected at level tau when its statistic falls
/// outside the equal-tailed [tau/2, 1-tau/2] quantile band of the
/// reference. The finite-sample deviance runs slightly right of its limit,
/// and the equal-tailed band is the rule under which the simulated type-I
/// errors sit at the nominal level for both references.
SimulationReport monte_carlo(const Scenario& scenario, const TestSpec& test, int replicates,
                             std::uint64_t seed, int workers = 1,
                             const std::vector<double>& levels = {0.05, 0.10},
                             const FitOptions& fit_opts = {});

/// Pairs the sorted statistics with reference quantiles at plotting
/// positions (k - 0.5)/m. First coordinate theoretical, second empirical.
std::vector<std::pair<double, double>> qq_data(std::vector<double> statistics,
                                               const ReferenceDistribution& reference);

}  // namespace p0
