#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace ri {

struct Atom {
    double value = 0.0;
    double prob = 0.0;
};

/// Finitely supported law of a real random variable.
///
/// Invariants: values finite, probabilities strictly positive and summing to 1
/// within prob_sum_tol, at most 2^22 atoms. Probabilities that originate from
/// a dyadic path space are exact binary fractions, so their sums carry no
/// rounding error at all.
class DiscreteRandomVariable {
public:
    static constexpr std::size_t max_atoms = std::size_t{1} << 22;

    explicit DiscreteRandomVariable(std::vector<Atom> atoms);

    static DiscreteRandomVariable constant(double c);

    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }

    bool is_zero() const noexcept;  // all mass at 0
    double max_abs() const noexcept;

    DiscreteRandomVariable scaled(double c) const;
    DiscreteRandomVariable negated() const;

    // sorted by value, equal values coalesced; the canonical form is what
    // distribution comparisons operate on
    DiscreteRandomVariable canonical() const;

private:
    std::vector<Atom> atoms_;
};

/// Right-continuous step function on [0,1): value(s) = values[i] for
/// s in [breaks[i], breaks[i+1]). breaks.front() == 0, breaks.back() == 1.
/// The `decreasing` flag asserts nonnegative nonincreasing values and is
/// required by the operators that expect a decreasing rearrangement.
class StepFunction {
public:
    StepFunction(std::vector<double> breaks, std::vector<double> values,
                 bool decreasing = false);

    double operator()(double s) const;  // s in [0,1)

    const std::vector<double>& breaks() const noexcept { return breaks_; }
    const std::vector<double>& values() const noexcept { return values_; }
    bool decreasing() const noexcept { return decreasing_; }
    std::size_t segments() const noexcept { return values_.size(); }
    double segment_length(std::size_t i) const { return breaks_[i + 1] - breaks_[i]; }

    StepFunction scaled(double c) const;          // c >= 0 preserves monotonicity
    StepFunction clipped_above(double c) const;   // min(f, c)
    StepFunction excess_above(double c) const;    // (f - c)^+
    StepFunction head(double u) const;            // f on [0,u), 0 after
    StepFunction tail(double u) const;            // 0 before u, f on [u,1)

    // pointwise difference on the merged partition; result carries no
    // monotonicity claim
    StepFunction minus(const StepFunction& other) const;

    // segment lengths as probabilities, equal values coalesced
    DiscreteRandomVariable as_distribution() const;

    // adjacent equal values merged, zero-length segments dropped
    StepFunction canonicalized() const;

private:
    std::vector<double> breaks_;
    std::vector<double> values_;
    bool decreasing_ = false;
};

/// f^#(s) = sup{ t : P(|f| > t) > s }: atoms sorted by |value| descending,
/// ties merged, cumulative probabilities as breakpoints.
StepFunction decreasing_rearrangement(const DiscreteRandomVariable& f);

/// (E |f|^p)^{1/p} for p in (0, inf); max |value| for p = inf.
double p_norm(const DiscreteRandomVariable& f, double p);
double p_norm(const StepFunction& f, double p);

double tail_prob(const DiscreteRandomVariable& f, double t);         // P(|f| >= t)
double tail_prob_strict(const DiscreteRandomVariable& f, double t);  // P(|f| > t)

/// E phi(|f| / scale); phi is any nonnegative function of a nonnegative real.
double expect_phi(const DiscreteRandomVariable& f,
                  const std::function<double(double)>& phi, double scale = 1.0);
double expect_phi(const StepFunction& f,
                  const std::function<double(double)>& phi, double scale = 1.0);

/// Two-piece decompositions part1 + part2 = f of a decreasing step function.
/// The family is deterministic: scalar splits (alpha f, (1-alpha) f) on a
/// 101-point grid, cuts f·1_[0,u) / f·1_[u,1) at every breakpoint and at each
/// extra_cuts point (both orientations), and optionally truncations
/// min(f,c) / (f-c)^+ at every distinct value and adjacent midpoints (both
/// orientations). Minimizing a subadditive cost over the family yields an
/// upper bound on the corresponding split infimum.
struct SplitPair {
    StepFunction part1;
    StepFunction part2;
    const char* family;
};
std::vector<SplitPair> canonical_splits(const StepFunction& f,
                                        const std::vector<double>& extra_cuts = {},
                                        bool with_truncations = false);

}  // namespace ri
