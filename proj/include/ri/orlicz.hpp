#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ri/measure.hpp"

namespace ri {

/// Nonnegative nondecreasing function with phi(0) = 0, built from a small
/// closed-form vocabulary: x^p, min(x^p, (t x)^q), the hinge (x-a)^+, the
/// pointwise minimum of two members, and positive scalar multiples.
/// Construction validates vanishing at 0 and monotonicity on a grid.
class OrliczFunction {
public:
    enum class Kind { power, power_pair_min, hinge, min_pair, scaled };

    static OrliczFunction power(double p);
    /// min(x^p, (t x)^q), requires 0 < p < q, t > 0
    static OrliczFunction power_pair_min(double p, double q, double t);
    static OrliczFunction hinge(double a);
    static OrliczFunction min_of(OrliczFunction lhs, OrliczFunction rhs);
    static OrliczFunction scaled(double c, OrliczFunction base);

    double operator()(double x) const;
    Kind kind() const noexcept { return kind_; }
    bool convex() const noexcept { return convex_; }

    /// Least q such that phi(c x) <= c^q phi(x) for all x >= 0, c >= 2, when
    /// a valid order is known from the closed form. For min_pair the bound is
    /// valid but possibly not least.
    std::optional<double> upper_order_bound() const noexcept { return upper_order_; }
    /// Largest known p with phi(c x) >= c^p phi(x) for all x >= 0, c >= 2.
    std::optional<double> lower_order_bound() const noexcept { return lower_order_; }

    std::string describe() const;

private:
    OrliczFunction() = default;
    void validate() const;

    Kind kind_ = Kind::power;
    double a_ = 1.0, b_ = 1.0, c_ = 1.0;  // meaning depends on kind
    std::shared_ptr<const OrliczFunction> left_, right_;
    bool convex_ = false;
    std::optional<double> upper_order_, lower_order_;
};

struct OrliczNormResult {
    double value = 0.0;
    /// true when the norm is the documented 0 sentinel: f vanishes, or
    /// E phi(|f|/lambda) <= 1 held for every lambda probed down to the
    /// bracket floor
    bool degenerate = false;
    const char* degenerate_reason = nullptr;
    int iterations = 0;
};

/// Luxemburg norm inf{ lambda > 0 : E phi(|f|/lambda) <= 1 }, by bracket
/// expansion from max|f| followed by bisection to norm_rel_tol relative
/// width (at most norm_max_iter iterations). The returned lambda satisfies
/// E phi(|f|/lambda) <= 1.
OrliczNormResult orlicz_norm_full(const DiscreteRandomVariable& f,
                                  const OrliczFunction& phi);
double orlicz_norm(const DiscreteRandomVariable& f, const OrliczFunction& phi);
double orlicz_norm(const StepFunction& f, const OrliczFunction& phi);

enum class GrowthSide {
    upper,  // phi(c x) <= c^order phi(x)
    lower,  // phi(c x) >= c^order phi(x)
};

struct GrowthGrid {
    std::vector<double> x;
    std::vector<double> c;
    static GrowthGrid standard();  // x log-spaced over [1e-6, 1e6], c in {2, 2^1.5, 4, 8, 64}
};

struct GrowthReport {
    GrowthSide side = GrowthSide::upper;
    double order = 0.0;
    bool pass = false;
    bool analytic = false;     // certified from the closed form, no grid sweep
    double max_violation = 1.0;  // worst ratio of the violating side, 1 = tight ok
    double worst_x = 0.0, worst_c = 0.0;
};

/// Certify a scaling-order membership. Closed forms with a known order pass
/// analytically; everything else is swept on the grid and passes iff the
/// worst violation ratio stays within 1 + 1e-12.
GrowthReport verify_growth_class(const OrliczFunction& phi, double order,
                                 GrowthSide side,
                                 const GrowthGrid& grid = GrowthGrid::standard());

struct SplitBound {
    double value = 0.0;
    const char* family = "";   // candidate family that attained the minimum
    std::vector<double> part1_values, part2_values;  // witness on the partition of f^#
};

/// Upper bound on inf{ ||g||_phi + ||h||_psi : g + h = f^# } over the
/// deterministic candidate family: the level-set assignment by
/// phi(v) <= psi(v), scalar splits, and breakpoint cuts.
SplitBound split_infimum(const DiscreteRandomVariable& f, const OrliczFunction& phi,
                         const OrliczFunction& psi);

struct SandwichReport {
    double lower = 0.0;   // 0.5 ||f|| in the halved-min function
    double value = 0.0;   // split infimum upper bound
    double upper = 0.0;   // 2 ||f|| in the min function
    bool pass = false;
    SplitBound witness;
};

/// Check 0.5 ||f||_{(1/2)(phi ^ psi)} <= split infimum <= 2 ||f||_{phi ^ psi}
/// with the given slack.
SandwichReport check_split_sandwich(const DiscreteRandomVariable& f,
                                    const OrliczFunction& phi,
                                    const OrliczFunction& psi,
                                    double slack = 1e-9);

}  // namespace ri
