#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <vector>

namespace ri {

// Shared numeric policy. Probability bookkeeping stays exact whenever the
// inputs are binary fractions; everything else works to these tolerances.
inline constexpr double prob_sum_tol = 1e-12;   // |sum of probs - 1|
inline constexpr double norm_rel_tol = 1e-10;   // bisection stopping width
inline constexpr int    norm_max_iter = 200;
inline constexpr double verify_slack = 1e-9;    // slack for inequality checks
inline constexpr int    canonical_digits = 12;  // significant digits for value identity

// Round to `digits` significant decimal digits, locale independent.
// Used when grouping real values that arose from different summation orders.
inline double round_sig(double x, int digits = canonical_digits) {
    if (x == 0.0) return 0.0;  // normalizes -0 as well
    if (!std::isfinite(x)) return x;
    char buf[48];
    auto sc = std::to_chars(buf, buf + sizeof buf, x,
                            std::chars_format::scientific, digits - 1);
    double out = 0.0;
    std::from_chars(buf, sc.ptr, out);
    return out;
}

// tol scaled to the magnitude of the quantity being bounded
inline double slack_for(double bound, double slack = verify_slack) {
    return slack * std::max(1.0, std::abs(bound));
}

inline bool leq_with_slack(double lhs, double rhs, double slack = verify_slack) {
    return lhs <= rhs + slack_for(rhs, slack);
}

// 33 points, powers of 4 from 2^-16 to 2^16
inline std::vector<double> default_t_grid() {
    std::vector<double> t;
    t.reserve(33);
    for (int j = 0; j <= 32; ++j) t.push_back(std::exp2(-16.0 + 2.0 * j));
    return t;
}

// 129 points over the same span, quarter-octave steps
inline std::vector<double> dense_t_grid() {
    std::vector<double> t;
    t.reserve(129);
    for (int j = 0; j <= 128; ++j) t.push_back(std::exp2(-16.0 + 0.25 * j));
    return t;
}

}  // namespace ri
