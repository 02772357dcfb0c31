// Copyright 2026 The Forrelation Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "forrelation/classical.h"
#include "forrelation/forrelation.h"
#include "forrelation/orthogonal.h"

namespace forr {

inline constexpr const char *kReportSchema = "forrelation-report/1";

enum class MatrixKind { Hadamard, Haar };
enum class OutputFormat { Json, Csv };

struct RunConfig {
    std::string command;
    int n = 8;
    int k = 2;
    std::optional<double> delta;
    MatrixKind matrix = MatrixKind::Hadamard;
    std::size_t samples = 100000;
    std::uint64_t seed = 1;
    int workers = 1;
    OutputFormat format = OutputFormat::Json;
    std::string out;

    ForrelationParams params() const { return ForrelationParams::make(n, k, delta); }
};

/// Hard checks decide the overall verdict; report-only entries never do.
enum class CheckKind { Hard, Report };

struct Check {
    std::string id;
    double value = 0.0;
    double expected = 0.0;
    double tol = 0.0;
    bool pass = true;
    CheckKind kind = CheckKind::Hard;
};

struct VerificationReport {
    std::vector<Check> checks;
    std::vector<AdvantageResult> rows;
    std::vector<std::string> warnings;

    bool pass() const;
    void hard(std::string id, double value, double expected, double tol, bool pass);
    /// |value - expected| <= tol.
    void near(std::string id, double value, double expected, double tol);
    void report(std::string id, double value, double expected = 0.0, double tol = 0.0);
};

/// Hadamard, or a Haar sample drawn from the config's seed.
OrthogonalMatrix make_matrix(const RunConfig &config);

/// Whitespace-separated ±1 tokens ("1", "+1", "-1"), exactly `expected` of
/// them. Throws InvalidInput otherwise.
std::vector<double> parse_sign_vector(const std::string &text, std::size_t expected);

struct EvalResult {
    double value = 0.0;
    PartialLabel label = PartialLabel::OutsidePromise;
    double accept_probability = 0.0;
    int queries = 0;
};

EvalResult run_eval(const RunConfig &config, const std::string &input_text);

/// p_1 conditional-mean average against the closed form and the (1/32)^{k-1}
/// bound, the p_0 second moment against 1/N, and the promise masses at delta.
VerificationReport run_verify_input_dist(const RunConfig &config);

/// Special-function, Owen's T, truncated correlation, Wick interpolation and
/// integration-by-parts suites. psi_scale != 1 corrupts Ψ_σ in the
/// φ-integration-by-parts checks, a negative control that must fail.
VerificationReport run_verify_identities(const RunConfig &config, double psi_scale = 1.0);

struct FourierOptions {
    /// Random-tree mode when no tree is given.
    std::size_t m = 8;
    int depth = 3;
    std::size_t count = 100;
    bool restriction_checks = true;
    bool level_experiment = false;
};

VerificationReport run_fourier(const RunConfig &config, const std::optional<RandomizedTree> &tree,
                               const FourierOptions &options);

struct SeparationOptions {
    std::vector<std::size_t> tuple_budgets = {4, 16, 64};
    std::vector<int> tree_depths = {1, 2, 3, 4};
};

/// Quantum, constant-1/2, tuple-estimator and decision-tree rows on shared
/// p_1/p_0 samples. The hard check requires the quantum advantage to exceed
/// every classical row's upper confidence limit.
VerificationReport run_separation(const RunConfig &config, const SeparationOptions &options = {});

std::string render_report(const RunConfig &config, const VerificationReport &report);
std::string render_eval(const RunConfig &config, const EvalResult &result);

/// Entry point of the command-line tool. Exit codes: 0 all hard checks pass,
/// 1 verification failure, 2 usage, parse or guard error.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace forr
