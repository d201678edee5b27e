#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ri/measure.hpp"

namespace ri {

/// Paths of the dyadic filtration: Omega = {-1,+1}^depth, uniform measure.
/// A length-k prefix is a k-bit integer with the first sign in the most
/// significant bit (bit set means +1), so prefix >> 1 drops the newest sign
/// and (prefix & 1) reads it.
class DyadicSpace {
public:
    static constexpr int max_depth = 22;

    explicit DyadicSpace(int depth);

    int depth() const noexcept { return depth_; }
    std::uint64_t paths() const noexcept { return std::uint64_t{1} << depth_; }

    /// sign of coordinate `level` (1-based) along a full path
    int sign(std::uint64_t path, int level) const;

private:
    int depth_;
};

/// Sequence (f_1, ..., f_n) adapted to the dyadic filtration: f_k is a
/// function of the first k signs, stored as a table of size 2^k indexed by
/// the prefix.
class AdaptedSequence {
public:
    AdaptedSequence(int depth, std::vector<std::vector<double>> levels);

    int depth() const noexcept { return depth_; }
    const std::vector<std::vector<double>>& levels() const noexcept { return levels_; }

    /// f_level at a length-`level` prefix, level 1-based
    double value(int level, std::uint64_t prefix) const {
        return levels_[static_cast<std::size_t>(level) - 1][prefix];
    }

    AdaptedSequence negated() const;

private:
    int depth_;
    std::vector<std::vector<double>> levels_;
};

/// Predictable factors (v_1, ..., v_n): v_k depends on the first k-1 signs
/// only (table size 2^{k-1}).
class PredictableMultiplier {
public:
    PredictableMultiplier(int depth, std::vector<std::vector<double>> levels);

    int depth() const noexcept { return depth_; }
    const std::vector<std::vector<double>>& levels() const noexcept { return levels_; }

    /// f_k = v_k * (k-th sign)
    AdaptedSequence times_rademacher() const;

private:
    int depth_;
    std::vector<std::vector<double>> levels_;
};

/// Law of f_level conditioned on a length-(level-1) prefix: the two child
/// values with probability 1/2 each, coalesced when equal at 12 significant
/// digits.
DiscreteRandomVariable conditional_distribution(const AdaptedSequence& f, int level,
                                                std::uint64_t prefix);

struct TangentReport {
    bool pass = false;
    int first_level = 0;  // earliest failing level (1-based), 0 when pass
    std::uint64_t first_prefix = 0;
};

/// Two sequences on the same filtration are tangent when their conditional
/// one-step laws agree at every node. Checked exhaustively; values compared
/// at 12 significant digits, probabilities exactly.
TangentReport check_tangent(const AdaptedSequence& f, const AdaptedSequence& g);

/// Decoupled companion of an adapted sequence on the doubled path space:
/// term k reads the base prefix from the first copy and the fresh k-th sign
/// from the second, making the terms conditionally independent given the
/// first copy.
class DecoupledPair {
public:
    static constexpr int max_depth = 11;  // 2^{2n} product paths stay within 2^22

    const AdaptedSequence& base() const noexcept { return base_; }
    int depth() const noexcept { return base_.depth(); }

    /// value of decoupled term `level` at (base path eps, fresh path eps2)
    double value(int level, std::uint64_t eps, std::uint64_t eps2) const;

private:
    friend DecoupledPair decouple(const AdaptedSequence& f);
    explicit DecoupledPair(AdaptedSequence base) : base_(std::move(base)) {}
    AdaptedSequence base_;
};

/// Build the decoupled companion. Up to depth 6 the structural guarantees
/// are re-verified on the doubled space (tangency to the lifted base, and
/// conditional independence given the first copy up to depth 6); a failure
/// there is a construction bug and throws std::logic_error.
DecoupledPair decouple(const AdaptedSequence& f);

/// Tangency of the decoupled terms to the lifted base terms, checked over
/// every node of the doubled filtration (the 4-way reveal of both signs).
TangentReport check_pair_tangent_to_base(const DecoupledPair& pair);

/// Given the first copy, the decoupled terms must be independent: for every
/// base path the joint law of the term tuple factors into its marginals,
/// with exactly dyadic probabilities. Exhaustive up to depth 8.
bool check_conditional_independence(const DecoupledPair& pair);

enum class SumMode {
    enumeration,  // walk all paths, O(2^n) resp. O(4^n)
    level_dp,     // merge prefixes with identical value subtrees
};

/// Law of f_1 + ... + f_n. Both modes produce bitwise-identical sums (terms
/// are added in level order in each) and exact dyadic probabilities, so the
/// two agree atom for atom; values are coalesced at 12 significant digits.
DiscreteRandomVariable sum_distribution(const AdaptedSequence& f, SumMode mode);
DiscreteRandomVariable sum_distribution(const DecoupledPair& pair, SumMode mode);

enum class MaximalKind {
    increments,    // max_k |f_k|
    partial_sums,  // max_k |f_1 + ... + f_k|
};

DiscreteRandomVariable maximal_function(const AdaptedSequence& f,
                                        MaximalKind kind = MaximalKind::increments);
DiscreteRandomVariable maximal_function(const DecoupledPair& pair,
                                        MaximalKind kind = MaximalKind::increments);

struct TailComparisonRow {
    double t = 0.0;
    double lhs = 0.0;  // P(base maximal >= t)
    double rhs = 0.0;  // P(decoupled maximal >= t)
    bool pass = false;
};

struct TailComparisonReport {
    bool increments_pass = false;
    std::vector<TailComparisonRow> increment_rows;
    // the partial-sum analogue is informational: computed on the same grid,
    // never asserted
    std::vector<TailComparisonRow> partial_sum_rows;
    double partial_sum_worst_ratio = 0.0;  // max lhs/rhs, inf when rhs = 0 < lhs
};

/// Tail comparison P(max_k |f_k| >= t) <= 2 P(max_k |fbar_k| >= t) on the
/// union of both atom grids plus a point past the maximum. Probabilities are
/// dyadic, so the factor-2 comparison is exact (slack 1e-15 absorbs nothing
/// but is kept for form).
TailComparisonReport check_maximal_tail_domination(const AdaptedSequence& f);

struct LevyReport {
    bool applicable = false;  // base conditionally symmetric
    bool pass = false;        // vacuously true when not applicable
    double worst_ratio = 0.0;  // max over conditioning paths and thresholds of
                               // lhs / (2 rhs); finite when pass
};

/// Conditional two-sided bound for conditionally symmetric sequences: given
/// the first copy, the decoupled partial sums N_k form sums of independent
/// symmetric terms, so P(max_k |N_k| >= t) <= 2 P(|N_n| >= t) for each
/// conditioning path. Applicability is the tangency of the base to its
/// negation; path counts are integers, so the comparison is exact.
/// Exhaustive up to depth 10.
LevyReport check_levy_inequality(const DecoupledPair& pair);

struct KolmogorovRow {
    double t = 0.0;
    double lhs = 0.0;  // P(max_k |S_k| >= t)
    double rhs = 0.0;  // 2^{-q} (1 - 2^{2q} (t^q + E max|xi|^q) / E (max|S|)^q)
    bool pass = false;
};

struct KolmogorovReport {
    double q = 0.0;
    double moment_max = 0.0;  // E (max_k |xi_k|)^q
    double moment_sum = 0.0;  // E (max_k |S_k|)^q
    std::vector<KolmogorovRow> rows;
    bool pass = false;
};

/// Second-moment-style lower bound for the maximal partial sum of
/// independent symmetric variables, checked by exact product enumeration
/// (the product of support sizes must stay within 2^22). Symmetry of each
/// variable is validated up front.
KolmogorovReport check_kolmogorov_converse(const std::vector<DiscreteRandomVariable>& xs,
                                           double q, std::span<const double> t_grid);

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

/// Monte Carlo tail estimates for depths beyond exact enumeration. Sampling
/// is counter-based, so a (seed, sample index) pair always regenerates the
/// same path. Estimates are reported with standard errors and never used in
/// assertions.
McEstimate mc_tail(const AdaptedSequence& f, MaximalKind kind, double t,
                   std::size_t samples, std::uint64_t seed);
McEstimate mc_tail_decoupled(const AdaptedSequence& f, MaximalKind kind, double t,
                             std::size_t samples, std::uint64_t seed);

}  // namespace ri
