#pragma once

#include <cstdint>
#include <vector>

namespace gapseq {

// Regularized upper incomplete gamma Q(a, x); series for x < a+1, Lentz
// continued fraction otherwise.
double gamma_q(double a, double x);

// Survival function of the chi-square distribution with df degrees of freedom.
double chi_square_sf(double x, double df);

// (1 - alpha) quantile, by bisection on the survival function.
double chi_square_critical(double alpha, double df);

struct ChiSquareResult {
    double statistic = 0.0;
    double df = 0.0;
    double p_value = 1.0;
    bool rejected = false;
};

// Goodness-of-fit of observed counts against fully specified cell
// probabilities (df = cells - 1).
ChiSquareResult chi_square_gof(const std::vector<uint64_t>& observed,
                               const std::vector<double>& expected_probs, double alpha);

}  // namespace gapseq
