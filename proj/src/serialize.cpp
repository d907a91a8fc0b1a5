#include "p0/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace p0 {

namespace {

// 17 significant digits round-trip any double exactly.
std::string num(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
  return out;
}

std::string array_of(const std::vector<double>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += num(xs[i]);
  }
  out += "]";
  return out;
}

std::string array_of(const std::vector<int>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(xs[i]);
  }
  out += "]";
  return out;
}

std::string side_to_string(Side side) { return side == Side::Alpha ? "alpha" : "beta"; }

// Node indices serialize 1-based, matching the CLI and docs.
std::vector<int> one_based(const std::vector<int>& idx) {
  std::vector<int> out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = idx[i] + 1;
  return out;
}

std::string null_to_json(const NullHypothesis& null) {
  std::string out = "{";
  out += "\"kind\":" + quoted(null.kind == NullHypothesis::Kind::Homogeneous ? "homogeneous" : "specified");
  out += ",\"side\":" + quoted(side_to_string(null.side));
  out += ",\"indices\":" + array_of(one_based(null.indices));
  if (null.kind == NullHypothesis::Kind::Specified) out += ",\"values\":" + array_of(null.values);
  out += "}";
  return out;
}

std::string fit_to_json_inner(const FitResult& fit) {
  std::string out = "{";
  out += "\"n\":" + std::to_string(fit.theta.n());
  out += ",\"alpha\":" + array_of(fit.theta.alpha);
  out += ",\"beta\":" + array_of(fit.theta.beta);
  out += ",\"identified\":" + std::string(fit.theta.identified ? "true" : "false");
  out += ",\"loglik\":" + num(fit.loglik);
  out += ",\"iterations\":" + std::to_string(fit.iterations);
  out += ",\"converged\":" + std::string(fit.converged ? "true" : "false");
  out += ",\"max_rel_dev\":" + num(fit.max_rel_dev);
  out += "}";
  return out;
}

std::string reference_to_json(const ReferenceDistribution& ref) {
  switch (ref.type) {
    case ReferenceDistribution::Type::ChiSquare:
      return "{\"type\":\"chisq\",\"df\":" + std::to_string(ref.df) + "}";
    case ReferenceDistribution::Type::StdNormal:
      return "{\"type\":\"normal\"}";
    default:
      return "{\"type\":\"none\"}";
  }
}

}  // namespace

std::string reference_to_string(const ReferenceDistribution& ref) {
  switch (ref.type) {
    case ReferenceDistribution::Type::ChiSquare:
      return "chisq(" + std::to_string(ref.df) + ")";
    case ReferenceDistribution::Type::StdNormal:
      return "normal";
    default:
      return "none";
  }
}

std::string method_to_string(TestMethod method) {
  switch (method) {
    case TestMethod::LrtChiSquare: return "lrt_chisq";
    case TestMethod::LrtNormal: return "lrt_normal";
    default: return "wald";
  }
}

std::string to_json(const FitResult& fit) { return fit_to_json_inner(fit); }

std::string to_json(const TestResult& test) {
  std::string out = "{";
  out += "\"method\":" + quoted(method_to_string(test.method));
  out += ",\"statistic\":" + num(test.statistic);
  out += ",\"reference\":" + reference_to_json(test.reference);
  out += ",\"p_value\":" + (test.p_value ? num(*test.p_value) : std::string("null"));
  out += ",\"r\":" + std::to_string(test.r);
  out += ",\"two_delta_loglik\":" + num(test.two_delta_loglik);
  out += ",\"full_fit\":" + fit_to_json_inner(test.full_fit);
  if (test.null_fit) out += ",\"null_fit\":" + fit_to_json_inner(*test.null_fit);
  out += "}";
  return out;
}

std::string to_json(const SimulationReport& report) {
  const Scenario& sc = report.scenario;
  std::string out = "{";
  out += "\"scenario\":{";
  out += "\"label\":" + quoted(sc.label);
  out += ",\"n\":" + std::to_string(sc.n);
  if (sc.L) out += ",\"L\":" + num(*sc.L);
  if (sc.c) out += ",\"c\":" + num(*sc.c);
  out += ",\"null\":" + null_to_json(sc.null);
  out += "}";
  out += ",\"method\":" + quoted(method_to_string(report.method));
  out += ",\"reference\":" + reference_to_json(report.reference);
  out += ",\"rejection\":" + quoted("equal_tailed");
  out += ",\"replicates\":" + std::to_string(report.replicates);
  out += ",\"seed\":" + std::to_string(report.seed);
  out += ",\"n_failed\":" + std::to_string(report.n_failed);
  out += ",\"rejection_rates\":{";
  for (std::size_t i = 0; i < report.rejection_rates.size(); ++i) {
    if (i) out += ",";
    out += quoted(num(report.rejection_rates[i].first)) + ":" + num(report.rejection_rates[i].second);
  }
  out += "}";
  out += ",\"statistics\":" + array_of(report.statistics);
  out += "}";
  return out;
}

void write_csv(std::ostream& out, const FitResult& fit) {
  out << "# loglik=" << num(fit.loglik) << " iterations=" << fit.iterations
      << " converged=" << (fit.converged ? 1 : 0) << " max_rel_dev=" << num(fit.max_rel_dev)
      << " identified=" << (fit.theta.identified ? 1 : 0) << '\n';
  out << "node,alpha,beta\n";
  for (int i = 0; i < fit.theta.n(); ++i)
    out << (i + 1) << ',' << num(fit.theta.alpha[i]) << ',' << num(fit.theta.beta[i]) << '\n';
}

void write_csv(std::ostream& out, const TestResult& test) {
  out << "key,value\n";
  out << "method," << method_to_string(test.method) << '\n';
  out << "statistic," << num(test.statistic) << '\n';
  out << "reference," << reference_to_string(test.reference) << '\n';
  out << "p_value," << (test.p_value ? num(*test.p_value) : std::string("")) << '\n';
  out << "r," << test.r << '\n';
  out << "two_delta_loglik," << num(test.two_delta_loglik) << '\n';
  out << "full_loglik," << num(test.full_fit.loglik) << '\n';
  if (test.null_fit) out << "null_loglik," << num(test.null_fit->loglik) << '\n';
}

void write_csv(std::ostream& out, const SimulationReport& report) {
  out << "# scenario=" << report.scenario.label << " method=" << method_to_string(report.method)
      << " reference=" << reference_to_string(report.reference)
      << " rejection=equal_tailed"
      << " replicates=" << report.replicates << " seed=" << report.seed
      << " n_failed=" << report.n_failed;
  for (const auto& [level, rate] : report.rejection_rates)
    out << " reject@" << num(level) << "=" << num(rate);
  out << '\n';
  out << "statistic\n";
  for (double s : report.statistics) out << num(s) << '\n';
}

void write_qq_csv(std::ostream& out, const std::vector<std::pair<double, double>>& qq) {
  out << "theoretical,empirical\n";
  for (const auto& [theo, emp] : qq) out << num(theo) << ',' << num(emp) << '\n';
}

std::string qq_to_json(const std::vector<std::pair<double, double>>& qq,
                       const ReferenceDistribution& reference) {
  std::string out = "{";
  out += "\"reference\":" + reference_to_json(reference);
  out += ",\"points\":[";
  for (std::size_t i = 0; i < qq.size(); ++i) {
    if (i) out += ",";
    out += "[" + num(qq[i].first) + "," + num(qq[i].second) + "]";
  }
  out += "]}";
  return out;
}

}  // namespace p0
