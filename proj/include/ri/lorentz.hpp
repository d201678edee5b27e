#pragma once

#include <span>
#include <vector>

#include "ri/measure.hpp"

namespace ri {

struct LorentzIndices {
    double p = 1.0;  // in (0, inf]
    double q = 1.0;  // in (0, inf]
};

/// Lorentz functional on a decreasing rearrangement r = f^#:
///   q < inf : ( sum_i r_i^q (s_i^{q/p} - s_{i-1}^{q/p}) )^{1/q}
///             which is the exact value of ((q/p) int s^{q/p-1} r(s)^q ds)^{1/q}
///   q = inf : max_i s_i^{1/p} r_i over segment right endpoints
/// p = inf reduces to the essential sup. Input must carry the decreasing flag.
double lorentz_norm(const StepFunction& rearranged, LorentzIndices pq);
double lorentz_norm(const DiscreteRandomVariable& f, LorentzIndices pq);

/// Dilation (D_a r)(s) = r(a s) on [0,1), with r extended by 0 past 1.
/// For a >= 1 this satisfies ||D_a r||_{p,q} = a^{-1/p} ||r||_{p,q} exactly;
/// for a < 1 the identity needs r to vanish on [a, 1).
StepFunction dilate(const StepFunction& rearranged, double a);

/// ((1/t) int_0^t r(s)^{p/2} ds)^{2/p}, t in (0,1]
double hardy_head(const StepFunction& rearranged, double p, double t);
/// ((1/t) int_t^1 r(s)^{2p} ds)^{1/(2p)}, t in (0,1); the integrand is 0 past 1
double hardy_tail(const StepFunction& rearranged, double p, double t);
/// hardy_head + hardy_tail, the averaged majorant of the weighted split bound
double hardy_majorant(const StepFunction& rearranged, double p, double t);

struct WeightedSplitBound {
    double upper = 0.0;  // best candidate value of
                         // t^{-2/p} ||g||_{p/2} + t^{-1/(2p)} ||h||_{2p}, g+h = r
    double floor = 0.0;  // proved lower bound min(1, 2^{1-2/p}) r(t)
};

/// Candidate-family upper bound for the weighted two-norm split at t,
/// with the cut at t itself included so upper <= hardy_majorant holds by
/// construction.
WeightedSplitBound weighted_split_bound(const StepFunction& rearranged, double p,
                                        double t);

struct KQuery {
    double p = 1.0;  // 0 < p < q < inf
    double q = 2.0;
    double t = 1.0;  // >= 0
};

/// One candidate split evaluated as ||part1||_p + t ||part2||_q; the pair
/// (a, b) lets a whole t-grid reuse the same family.
struct KCandidate {
    double a = 0.0;
    double b = 0.0;
};

std::vector<KCandidate> k_candidates(const StepFunction& rearranged, double p, double q);

/// K(f, t) = inf{ ||g||_p + t ||h||_q : g + h = f^# } as the minimum over the
/// candidate family (cuts, truncations, scalar splits). An upper bound that
/// is exact for the closed-form cases; nondecreasing and concave in t by
/// construction. K(f, 0) = 0.
double k_functional(const StepFunction& rearranged, const KQuery& query);
double k_functional(const DiscreteRandomVariable& f, const KQuery& query);
std::vector<double> k_profile(const StepFunction& rearranged, double p, double q,
                              std::span<const double> ts);

struct KOrliczRow {
    double t = 0.0;
    double k_value = 0.0;
    double orlicz_value = 0.0;  // Luxemburg norm in min(x^p, (t x)^q)
    bool pass = false;
};

struct KOrliczEquivalenceReport {
    double p = 0.0, q = 0.0;
    std::vector<KOrliczRow> rows;
    bool pass = false;
};

/// Check 2^{-1-1/p} ||f||_{Phi_t} <= K_{p,q}(f,t) <= 2 ||f||_{Phi_t} with
/// Phi_t(x) = min(x^p, (t x)^q), on the t grid.
KOrliczEquivalenceReport check_k_orlicz_equivalence(const DiscreteRandomVariable& f,
                                                    double p, double q,
                                                    std::span<const double> t_grid,
                                                    double slack = 1e-9);

struct KInterpolationReport {
    bool hypothesis_ok = false;   // K_{p/2,2p}(f,.) <= K_{p/2,2p}(g,.) on the grid
    double worst_hypothesis_gap = 0.0;
    double lhs_norm = 0.0, rhs_norm = 0.0;
    double conclusion_factor = 0.0;  // 128^{1/min(p,q)}
    bool conclusion_ok = false;
    double majorant_norm = 0.0;      // step-majorant Lorentz norm of t -> hardy_majorant(g,p,t)
    double majorant_factor = 0.0;    // 32^{1/min(p,q)}
    bool majorant_ok = false;
    bool pass = false;  // conclusion and majorant hold whenever the hypothesis does
};

/// If K_{p/2,2p}(f,t) <= K_{p/2,2p}(g,t) across the grid, then
/// ||f||_{p,q} <= 128^{1/min(p,q)} ||g||_{p,q}, with the intermediate bound
/// ||Hg||_{p,q} <= 32^{1/min(p,q)} ||g||_{p,q} for the averaged majorant Hg.
/// A failed hypothesis is reported, not treated as a violation.
KInterpolationReport check_k_interpolation(const DiscreteRandomVariable& f,
                                           const DiscreteRandomVariable& g,
                                           LorentzIndices pq,
                                           std::span<const double> t_grid,
                                           double slack = 1e-9);

}  // namespace ri
