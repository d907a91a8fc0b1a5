#pragma once

#include <iosfwd>
#include <string>

#include "p0/estimation.hpp"
#include "p0/inference.hpp"
#include "p0/simulation.hpp"

namespace p0 {

// JSON/CSV emission for the CLI and report files. JSON numbers are written
// with 17 significant digits so parsed values round-trip exactly; CSV uses
// '.' decimals and no quoting.

std::string to_json(const FitResult& fit);
std::string to_json(const TestResult& test);
std::string to_json(const SimulationReport& report);

void write_csv(std::ostream& out, const FitResult& fit);
void write_csv(std::ostream& out, const TestResult& test);
void write_csv(std::ostream& out, const SimulationReport& report);

/// Two-column "theoretical,empirical" CSV.
void write_qq_csv(std::ostream& out, const std::vector<std::pair<double, double>>& qq);
std::string qq_to_json(const std::vector<std::pair<double, double>>& qq,
                       const ReferenceDistribution& reference);

std::string reference_to_string(const ReferenceDistribution& ref);
std::string method_to_string(TestMethod method);

}  // namespace p0
