#include "gapseq/stats.hpp"

#include <cmath>
#include <limits>

#include "gapseq/errors.hpp"

namespace gapseq {

namespace {

// series expansion of P(a, x), valid for x < a + 1
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 1000; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// modified Lentz continued fraction for Q(a, x), valid for x >= a + 1
double gamma_q_cf(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) return std::numeric_limits<double>::quiet_NaN();
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;  // keeps sf(inf) = 0 instead of NaN
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi_square_sf(double x, double df) {
    if (x <= 0.0) return 1.0;
    return gamma_q(df / 2.0, x / 2.0);
}

double chi_square_critical(double alpha, double df) {
    if (!(alpha > 0.0) || !(alpha < 1.0)) throw ConfigError("chi-square critical: alpha must lie in (0, 1)");
    double hi = df + 10.0;
    while (chi_square_sf(hi, df) > alpha) hi *= 2.0;
    double lo = 0.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (chi_square_sf(mid, df) > alpha)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

ChiSquareResult chi_square_gof(const std::vector<uint64_t>& observed,
                               const std::vector<double>& expected_probs, double alpha) {
    if (observed.size() != expected_probs.size() || observed.empty())
        throw ConfigError("chi-square gof: observed and expected sizes must match and be nonempty");
    double n = 0.0;
    for (uint64_t o : observed) n += (double)o;
    ChiSquareResult res;
    res.df = (double)(observed.size() - 1);
    for (size_t i = 0; i < observed.size(); ++i) {
        double e = n * expected_probs[i];
        if (e <= 0.0) {
            if (observed[i] > 0) res.statistic = std::numeric_limits<double>::infinity();
            continue;
        }
        double diff = (double)observed[i] - e;
        res.statistic += diff * diff / e;
    }
    res.p_value = res.df == 0.0 ? 1.0 : chi_square_sf(res.statistic, res.df);
    res.rejected = res.p_value < alpha;
    return res;
}

}  // namespace gapseq
