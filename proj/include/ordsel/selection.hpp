#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ordsel/copula.hpp"
#include "ordsel/rng.hpp"

// Success probability of the offline multiple noisy secretary problem:
// draw n candidates, keep the m with the smallest observed percentile, and
// succeed when at least one kept candidate's true percentile is <= alpha.

namespace ordsel {

struct SelectionProblem {
    std::int64_t n;
    std::int64_t m;
    double alpha;

    void validate() const;
};

enum class EstimateMethod { Quadrature, BruteForce, MonteCarlo, ClosedForm };

const char* method_name(EstimateMethod m);

struct ProbabilityEstimate {
    double value = 0.0;
    EstimateMethod method = EstimateMethod::Quadrature;
    std::optional<double> std_error;           // Monte Carlo only
    std::optional<std::int64_t> replications;  // Monte Carlo only
    std::optional<std::string> note;           // e.g. accuracy-loss flag for huge n
};

// Quadrature of the success probability via the one-dimensional reduction
//   p = 1 - n!/((n-m)!(m-1)!) int_0^1 g(t) G(t)^(m-1) (1-t)^(n-m) dt,
// g(t) = 1 - C_{X|Z}(alpha|t), G(t) = int_0^t g. For n >= 1e4 (and m << n)
// the variable is rescaled by n so the probability mass near zero stays
// resolved. Throws unsupported_family_error for the comonotonic family.
ProbabilityEstimate success_quadrature(const CopulaModel& model, const SelectionProblem& prob,
                                       double tol = 1e-10);

// Direct nested quadrature of the ordered m-dimensional integral over
// {0 <= z_1 <= ... <= z_m <= 1}; the independent oracle for the reduction.
// Requires m <= 3 and grid >= 50.
ProbabilityEstimate success_bruteforce(const CopulaModel& model, const SelectionProblem& prob,
                                       int grid);

// Simulates the selection mechanism verbatim: per replication, draw n pairs,
// keep the m smallest by u, succeed if min attached v <= alpha. Replications
// run on derived per-replication streams, so the result is bit-identical for
// a fixed (seed, stream, reps) no matter how many threads execute it.
// max_threads = 0 uses the hardware count.
ProbabilityEstimate success_montecarlo(const CopulaModel& model, const SelectionProblem& prob,
                                       std::int64_t reps, const RandomStream& stream,
                                       int max_threads = 0);

// Success probability of the randomised-size rule that keeps every candidate
// with observed percentile <= m/n: 1 - (1 - C(m/n, alpha))^n.
ProbabilityEstimate success_randomized_threshold(const CopulaModel& model,
                                                 const SelectionProblem& prob);

// n -> infinity limit of the randomised-size rule.
double randomized_limit(const CopulaModel& model, std::int64_t m, double alpha);

// n -> infinity limit of the fixed-size rule: 1 - (1 - C_{X|Z}(alpha|0))^m.
double fixed_limit(const CopulaModel& model, std::int64_t m, double alpha);

struct GeneralBounds {
    double lower;  // 1 - (1-alpha)^m
    double upper;  // 1 - (1-alpha)^n
};

GeneralBounds general_bounds(const SelectionProblem& prob);

}  // namespace ordsel
