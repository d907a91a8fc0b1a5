#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace p0 {

// Malformed edge-list input. line() is 1-based; 0 when no line applies.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, long line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg
                                    : msg),
        line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

class EmptyInputError : public std::runtime_error {
 public:
  explicit EmptyInputError(const std::string& msg) : std::runtime_error(msg) {}
};

// A degree required by the fixed-point updates is zero, so the restricted or
// unrestricted MLE cannot exist. nodes() lists the offending 0-based nodes.
class DegenerateDegreeError : public std::runtime_error {
 public:
  enum class What { OutDegreeZero, InDegreeZero, PooledDegreeZero };

  DegenerateDegreeError(What what, std::vector<int> nodes)
      : std::runtime_error(describe(what, nodes)), what_(what), nodes_(std::move(nodes)) {}

  What code() const { return what_; }
  const std::vector<int>& nodes() const { return nodes_; }

 private:
  static std::string describe(What what, const std::vector<int>& nodes) {
    std::string s;
    switch (what) {
      case What::OutDegreeZero: s = "zero out-degree at node(s)"; break;
      case What::InDegreeZero: s = "zero in-degree at node(s)"; break;
      case What::PooledDegreeZero: s = "pooled degree sum is zero over node(s)"; break;
    }
    for (int v : nodes) s += " " + std::to_string(v + 1);
    s += "; MLE does not exist";
    return s;
  }

  What what_;
  std::vector<int> nodes_;
};

// Fisher-information diagonal (or the beta_n row sum) vanished, so the
// closed-form approximate inverses are undefined.
class SingularInformationError : public std::runtime_error {
 public:
  explicit SingularInformationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Requested reference distribution is not valid for the null hypothesis,
// e.g. a chi-square reference for a fixed-dimension specified null.
class InvalidReferenceError : public std::runtime_error {
 public:
  explicit InvalidReferenceError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace p0
