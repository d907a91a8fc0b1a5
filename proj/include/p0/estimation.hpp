#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "p0/graph.hpp"
#include "p0/model.hpp"

namespace p0 {

enum class Side { Alpha, Beta };

/// A constraint on one parameter family: either a set of parameters forced
/// to share a common (unspecified) value, or a set pinned to given values.
/// Indices are 0-based; beta-side constraints may not include node n-1,
/// whose beta is the identification anchor.
struct NullHypothesis {
  enum class Kind { Homogeneous, Specified };

  Side side = Side::Alpha;
  Kind kind = Kind::Homogeneous;
  std::vector<int> indices;      // strictly increasing
  std::vector<double> values;    // Specified only, parallel to indices

  int r() const { return static_cast<int>(indices.size()); }

  static NullHypothesis homogeneous(Side side, std::vector<int> indices);
  static NullHypothesis specified(Side side, std::vector<int> indices, std::vector<double> values);

  /// Range/size checks that need the graph's node count.
  void validate(int n) const;
};

struct FitOptions {
  double eps = 1e-8;          // on max(|y_i - 1|, |z_j - 1|)
  int max_iter = 5000;
  std::optional<Theta> init;  // defaults to all zeros
};

struct FitResult {
  Theta theta;
  double loglik = 0.0;
  int iterations = 0;
  bool converged = false;
  double max_rel_dev = 0.0;   // final convergence-check value
};

/// Fixed-point sweeps ran out of iterations (or the iterates diverged),
/// which in practice signals that the constrained MLE does not exist.
/// Carries the last iterate for inspection.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& msg, FitResult last)
      : std::runtime_error(msg), last_(std::move(last)) {}
  const FitResult& last() const { return last_; }

 private:
  FitResult last_;
};

/// Unrestricted MLE by alternating log-updates of alpha and beta with a
/// beta_n -> 0 renormalization each sweep. Every out- and in-degree must be
/// at least 1. The returned theta is identified.
FitResult fit_mle(const DirectedGraph& g, const FitOptions& opts = {});

/// Restricted MLE under a homogeneous null: the constrained parameters move
/// together through a pooled update driven by their total degree. Beta-side
/// nulls run the alpha-side algorithm on the transposed graph. The result
/// is renormalized to beta_n = 0, which is harmless inside the null
/// manifold.
FitResult fit_restricted_homogeneous(const DirectedGraph& g, const NullHypothesis& null,
                                     const FitOptions& opts = {});

/// Restricted MLE with the constrained parameters pinned at given values.
/// Pinning breaks the translation symmetry, so beta_n stays free and the
/// result is not identified.
FitResult fit_restricted_specified(const DirectedGraph& g, const NullHypothesis& null,
                                   const FitOptions& opts = {});

/// Dispatches on null.kind.
FitResult fit_restricted(const DirectedGraph& g, const NullHypothesis& null,
                         const FitOptions& opts = {});

/// Pre-flight for the fits: boundary degrees (0 or n-1) typically mean the
/// MLE does not exist, and a zero pooled sum breaks the pooled update.
struct ExistenceDiagnosis {
  std::vector<int> zero_out, saturated_out;
  std::vector<int> zero_in, saturated_in;
  bool pooled_zero = false;

  bool ok() const {
    return zero_out.empty() && saturated_out.empty() && zero_in.empty() &&
           saturated_in.empty() && !pooled_zero;
  }
  std::string summary() const;
};

ExistenceDiagnosis check_existence(const DirectedGraph& g, const NullHypothesis* null = nullptr);

}  // namespace p0
