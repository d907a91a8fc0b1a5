#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "p0/errors.hpp"
#include "p0/serialize.hpp"
#include "p0/simulation.hpp"

using namespace p0;

TEST_SUITE("simulation") {

TEST_CASE("sample_graph: fixed seed reproduces the graph") {
  Theta t = oracle::random_theta(12, 3);
  RngStream a(42, 7), b(42, 7);
  DirectedGraph ga = sample_graph(t, a);
  DirectedGraph gb = sample_graph(t, b);
  CHECK(ga.adjacency() == gb.adjacency());

  RngStream c(42, 8);
  DirectedGraph gc = sample_graph(t, c);
  CHECK(ga.adjacency() != gc.adjacency());  // different stream, different graph
}

TEST_CASE("sample_graph: mean density matches the model") {
  const int n = 30;
  double total = 0.0;
  for (int k = 0; k < 100; ++k) {
    RngStream rng(2024, k);
    total += sample_graph(Theta::zeros(n), rng).density();
  }
  CHECK(std::abs(total / 100.0 - 0.5) < 0.02);
}

TEST_CASE("sample_graph: strongly negative alpha empties the graph") {
  Theta t = Theta::zeros(10);
  for (double& a : t.alpha) a = -10.0;
  RngStream rng(5, 0);
  CHECK(sample_graph(t, rng).edge_count() == 0);
}

TEST_CASE("scenario h01") {
  Scenario flat = scenario_h01(100, 0.0);
  for (double a : flat.theta.alpha) CHECK(a == 0.0);
  CHECK(flat.null.kind == NullHypothesis::Kind::Specified);
  CHECK(flat.null.r() == 100);

  Scenario s5 = scenario_h01(5, 0.1 * std::log(5.0));
  const std::vector<double> expect{0.0, 0.040236, 0.080472, 0.120708, 0.160944};
  for (int i = 0; i < 5; ++i) CHECK(std::abs(s5.theta.alpha[i] - expect[i]) < 1e-5);
  CHECK(s5.theta.beta[3] == doctest::Approx(s5.theta.alpha[3]));
  CHECK(s5.theta.beta[4] == 0.0);

  Scenario s100 = scenario_h01(100, 0.2 * std::log(100.0));
  CHECK(s100.theta.alpha[99] == doctest::Approx(0.2 * std::log(100.0)).epsilon(1e-12));
}

TEST_CASE("scenario h02/h03") {
  Scenario h02 = scenario_h02_h03(100, 50, 0.0);
  for (double a : h02.theta.alpha) CHECK(a == 0.0);
  CHECK(h02.null.kind == NullHypothesis::Kind::Homogeneous);
  CHECK(h02.null.r() == 50);

  Scenario h03 = scenario_h02_h03(100, 10, 0.1 * std::log(100.0));
  CHECK(h03.theta.alpha[9] == 0.0);
  CHECK(h03.theta.alpha[10] == doctest::Approx(10.0 * 0.1 * std::log(100.0) / 99.0).epsilon(1e-9));
  CHECK(std::abs(h03.theta.alpha[10] - 0.046517) < 1e-5);

  Scenario full = scenario_h02_h03(20, 20, 0.3);  // r = n boundary: all pooled
  for (double a : full.theta.alpha) CHECK(a == 0.0);
  CHECK_THROWS_AS(scenario_h02_h03(10, 1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(scenario_h02_h03(10, 11, 0.0), std::invalid_argument);
}

TEST_CASE("scenario power") {
  Scenario p = scenario_power(100, 5, 1.3);
  const std::vector<double> lead{0.26, 0.52, 0.78, 1.04, 1.30};
  for (int i = 0; i < 5; ++i) CHECK(p.theta.alpha[i] == doctest::Approx(lead[i]).epsilon(1e-12));
  const double slope = 0.2 * std::log(100.0) / 100.0;
  CHECK(p.theta.alpha[5] == doctest::Approx(6.0 * slope).epsilon(1e-12));
  CHECK(p.theta.beta[0] == doctest::Approx(slope).epsilon(1e-12));
  CHECK(p.theta.beta[99] == 0.0);
  CHECK(p.null.r() == 5);

  Scenario null_true = scenario_power(50, 5, 0.0);
  for (int i = 0; i < 5; ++i) CHECK(null_true.theta.alpha[i] == 0.0);
}

TEST_CASE("monte carlo: deterministic across worker counts") {
  Scenario sc = scenario_h02_h03(40, 10, 0.0);
  TestSpec spec;  // auto -> chi-square at r=10
  SimulationReport one = monte_carlo(sc, spec, 30, 99, 1);
  SimulationReport eight = monte_carlo(sc, spec, 30, 99, 8);
  CHECK(one.statistics == eight.statistics);
  CHECK(one.n_failed == eight.n_failed);
  CHECK(one.rejection_rates == eight.rejection_rates);
  CHECK(one.method == TestMethod::LrtChiSquare);
  CHECK(one.reference.df == 9);
}

TEST_CASE("monte carlo: failed replicates are counted and excluded") {
  // tiny sparse graphs frequently have zero degrees
  Scenario sc = scenario_h02_h03(6, 2, 0.0);
  for (double& a : sc.theta.alpha) a = -2.0;
  for (int j = 0; j + 1 < 6; ++j) sc.theta.beta[j] = -2.0;
  TestSpec spec;
  SimulationReport rep = monte_carlo(sc, spec, 60, 7, 4);
  CHECK(rep.n_failed > 0);
  CHECK(static_cast<int>(rep.statistics.size()) + rep.n_failed == 60);
}

TEST_CASE("monte carlo: rejection bookkeeping matches the statistics") {
  Scenario sc = scenario_h02_h03(40, 10, 0.0);
  TestSpec spec;
  SimulationReport rep = monte_carlo(sc, spec, 40, 123, 4, {0.05, 0.5});
  const double lo = chisq_quantile(0.025, 9), hi = chisq_quantile(0.975, 9);
  int manual = 0;
  for (double s : rep.statistics)
    if (s < lo || s > hi) ++manual;
  CHECK(rep.rejection_rates[0].first == 0.05);
  CHECK(rep.rejection_rates[0].second ==
        doctest::Approx(manual / static_cast<double>(rep.statistics.size())));
}

TEST_CASE("monte carlo: normal reference uses the equal-tailed band too") {
  Scenario sc = scenario_h01(30, 0.0);
  TestSpec spec;
  spec.ref = LrtReference::NormalIncreasingR;
  SimulationReport rep = monte_carlo(sc, spec, 30, 5, 4, {0.1});
  CHECK(rep.method == TestMethod::LrtNormal);
  const double lo = normal_quantile(0.05), hi = normal_quantile(0.95);
  int manual = 0;
  for (double s : rep.statistics)
    if (s < lo || s > hi) ++manual;
  CHECK(rep.rejection_rates[0].second ==
        doctest::Approx(manual / static_cast<double>(rep.statistics.size())));
}

TEST_CASE("monte carlo: wald spec needs a homogeneous null") {
  Scenario sc = scenario_h01(20, 0.0);
  TestSpec spec;
  spec.type = TestSpec::Type::Wald;
  CHECK_THROWS_AS(monte_carlo(sc, spec, 5, 1, 1), InvalidReferenceError);

  Scenario h = scenario_h02_h03(20, 5, 0.0);
  SimulationReport rep = monte_carlo(h, spec, 10, 1, 2);
  CHECK(rep.method == TestMethod::Wald);
  CHECK(rep.reference.df == 4);
}

TEST_CASE("qq_data: chi-square self-consistency") {
  const int m = 50;
  std::vector<double> stats;
  for (int k = 0; k < m; ++k) stats.push_back(chisq_quantile((k + 0.5) / m, 2));
  auto qq = qq_data(stats, ReferenceDistribution::chi_square(2));
  for (const auto& [theo, emp] : qq) CHECK(std::abs(theo - emp) < 1e-8);
}

TEST_CASE("qq_data: constant statistics give a flat empirical coordinate") {
  std::vector<double> stats(10, 3.25);
  auto qq = qq_data(stats, ReferenceDistribution::std_normal());
  for (const auto& [theo, emp] : qq) CHECK(emp == 3.25);
  CHECK(qq.front().first < qq.back().first);
}

TEST_CASE("qq_data input validation") {
  CHECK_THROWS_AS(qq_data({1.0}, ReferenceDistribution::chi_square(1)), std::invalid_argument);
  CHECK_THROWS_AS(qq_data({1.0, 2.0}, ReferenceDistribution::none()), std::invalid_argument);
}

TEST_CASE("power grows with the effect size and with the tested-set size") {
  TestSpec spec;  // chi-square(4) at r = 5
  const int reps = 500;
  double prev = -1.0;
  std::vector<double> by_c;
  for (double c : {0.0, 0.4, 1.0, 1.3}) {
    SimulationReport rep = monte_carlo(scenario_power(100, 5, c), spec, reps, 4242, 8, {0.05});
    by_c.push_back(rep.rejection_rates[0].second);
  }
  for (std::size_t k = 0; k < by_c.size(); ++k) {
    CHECK(by_c[k] >= prev - 0.02);  // non-decreasing up to MC slack
    prev = by_c[k];
  }
  CHECK(by_c.back() > 0.5);  // strong alternatives are actually detected

  SimulationReport r5 = monte_carlo(scenario_power(100, 5, 1.0), spec, reps, 4242, 8, {0.05});
  SimulationReport r10 = monte_carlo(scenario_power(100, 10, 1.0), spec, reps, 4242, 8, {0.05});
  CHECK(r10.rejection_rates[0].second > r5.rejection_rates[0].second);
}

TEST_CASE("paper-scale scenarios never lose replicates to fit failures") {
  TestSpec spec;
  for (Scenario sc : {scenario_h01(100, 0.2 * std::log(100.0)),
                      scenario_h02_h03(100, 50, 0.1 * std::log(100.0))}) {
    SimulationReport rep = monte_carlo(sc, spec, 200, 99, 8);
    CHECK(rep.n_failed == 0);
  }
}

TEST_CASE("lrt and wald rejections agree on most null replicates") {
  // paired by construction: identical seed means identical graphs
  Scenario sc = scenario_power(100, 5, 0.0);
  TestSpec lrt_spec;
  TestSpec wald_spec;
  wald_spec.type = TestSpec::Type::Wald;
  const int reps = 500;
  SimulationReport l = monte_carlo(sc, lrt_spec, reps, 777, 8, {0.05});
  SimulationReport w = monte_carlo(sc, wald_spec, reps, 777, 8, {0.05});
  REQUIRE(l.statistics.size() == w.statistics.size());
  const double cut = chisq_quantile(0.95, 4);  // one-sided 5% rejection on p-values
  int agree = 0;
  for (std::size_t k = 0; k < l.statistics.size(); ++k)
    if ((l.statistics[k] > cut) == (w.statistics[k] > cut)) ++agree;
  CHECK(agree >= static_cast<int>(l.statistics.size() * 9) / 10);
}

TEST_CASE("report serialization round-trips through the emitted JSON") {
  Scenario sc = scenario_power(30, 5, 0.4);
  TestSpec spec;
  SimulationReport rep = monte_carlo(sc, spec, 25, 31, 2);
  const std::string json = to_json(rep);
  CHECK(json.find("\"power(n=30,r=5,c=0.4)\"") != std::string::npos);
  CHECK(json.find("\"rejection\":\"equal_tailed\"") != std::string::npos);
  CHECK(json.find("\"n_failed\":") != std::string::npos);
  // every statistic survives a parse at full precision
  std::size_t pos = json.find("\"statistics\":[");
  REQUIRE(pos != std::string::npos);
  std::string tail = json.substr(pos + 14);
  for (double expected : rep.statistics) {
    const double parsed = std::stod(tail);
    CHECK(parsed == expected);
    tail = tail.substr(tail.find_first_of(",]") + 1);
  }
}

}  // TEST_SUITE
