#include "ri/lorentz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ri/numeric.hpp"
#include "ri/orlicz.hpp"

namespace ri {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_rearranged(const StepFunction& r) {
    if (!r.decreasing())
        throw std::invalid_argument(
            "rearrangement-invariant functional needs a decreasing rearrangement");
}

// int_lo^hi r(s)^e ds for piecewise constant r, exact up to the power calls
double integral_of_power(const StepFunction& r, double e, double lo, double hi) {
    const auto& b = r.breaks();
    const auto& v = r.values();
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double a0 = std::max(lo, b[i]);
        const double a1 = std::min(hi, b[i + 1]);
        if (a1 <= a0 || v[i] == 0.0) continue;
        acc += std::pow(v[i], e) * (a1 - a0);
    }
    return acc;
}

}  // namespace

double lorentz_norm(const StepFunction& rearranged, LorentzIndices pq) {
    require_rearranged(rearranged);
    if (!(pq.p > 0.0) || !(pq.q > 0.0))
        throw std::invalid_argument("lorentz indices must be positive");
    const auto& b = rearranged.breaks();
    const auto& v = rearranged.values();
    if (pq.p == kInf) {
        // the weight s^{1/p} degenerates to 1; any q gives the sup
        return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
    }
    if (pq.q == kInf) {
        // sup_s s^{1/p} r(s); on each segment the sup sits at the right endpoint
        double best = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i)
            best = std::max(best, std::pow(b[i + 1], 1.0 / pq.p) * v[i]);
        return best;
    }
    const double e = pq.q / pq.p;
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0.0) continue;
        sum += std::pow(v[i], pq.q) * (std::pow(b[i + 1], e) - std::pow(b[i], e));
    }
    return std::pow(sum, 1.0 / pq.q);
}

double lorentz_norm(const DiscreteRandomVariable& f, LorentzIndices pq) {
    return lorentz_norm(decreasing_rearrangement(f), pq);
}

StepFunction dilate(const StepFunction& rearranged, double a) {
    require_rearranged(rearranged);
    if (!(a > 0.0) || !std::isfinite(a))
        throw std::invalid_argument("dilation factor must be positive and finite");
    const auto& b = rearranged.breaks();
    const auto& v = rearranged.values();
    std::vector<double> nb{0.0};
    std::vector<double> nv;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double right = b[i + 1] / a;
        nv.push_back(v[i]);
        if (right >= 1.0) {
            nb.push_back(1.0);
            return StepFunction(std::move(nb), std::move(nv), true).canonicalized();
        }
        nb.push_back(right);
    }
    // a > 1: past s = 1/a the argument a s leaves [0,1) and r reads as 0
    nv.push_back(0.0);
    nb.push_back(1.0);
    return StepFunction(std::move(nb), std::move(nv), true).canonicalized();
}

double hardy_head(const StepFunction& rearranged, double p, double t) {
    require_rearranged(rearranged);
    if (!(p > 0.0) || !std::isfinite(p))
        throw std::invalid_argument("hardy average needs finite p > 0");
    if (!(t > 0.0) || t > 1.0)
        throw std::invalid_argument("hardy head needs t in (0,1]");
    const double e = p / 2.0;
    return std::pow(integral_of_power(rearranged, e, 0.0, t) / t, 1.0 / e);
}

double hardy_tail(const StepFunction& rearranged, double p, double t) {
    require_rearranged(rearranged);
    if (!(p > 0.0) || !std::isfinite(p))
        throw std::invalid_argument("hardy average needs finite p > 0");
    if (!(t > 0.0) || t > 1.0)
        throw std::invalid_argument("hardy tail needs t in (0,1]");
    const double e = 2.0 * p;
    return std::pow(integral_of_power(rearranged, e, t, 1.0) / t, 1.0 / e);
}

double hardy_majorant(const StepFunction& rearranged, double p, double t) {
    return hardy_head(rearranged, p, t) + hardy_tail(rearranged, p, t);
}

WeightedSplitBound weighted_split_bound(const StepFunction& rearranged, double p,
                                        double t) {
    require_rearranged(rearranged);
    if (!(p > 0.0) || !std::isfinite(p))
        throw std::invalid_argument("weighted split needs finite p > 0");
    if (!(t > 0.0) || !(t < 1.0))
        throw std::invalid_argument("weighted split needs t in (0,1)");
    const double w1 = std::pow(t, -2.0 / p);
    const double w2 = std::pow(t, -1.0 / (2.0 * p));
    WeightedSplitBound out;
    out.floor = std::min(1.0, std::exp2(1.0 - 2.0 / p)) * rearranged(t);
    double best = kInf;
    // the cut at t itself is in the family, so upper <= hardy_majorant always
    for (const auto& sp : canonical_splits(rearranged, {t}, true)) {
        const double cost =
            w1 * p_norm(sp.part1, p / 2.0) + w2 * p_norm(sp.part2, 2.0 * p);
        best = std::min(best, cost);
    }
    out.upper = best;
    return out;
}

std::vector<KCandidate> k_candidates(const StepFunction& rearranged, double p,
                                     double q) {
    require_rearranged(rearranged);
    if (!(p > 0.0) || !(p < q) || !std::isfinite(q))
        throw std::invalid_argument("k-functional needs 0 < p < q < inf");
    const auto splits = canonical_splits(rearranged, {}, true);
    std::vector<KCandidate> out;
    out.reserve(splits.size());
    for (const auto& sp : splits)
        out.push_back({p_norm(sp.part1, p), p_norm(sp.part2, q)});
    return out;
}

namespace {

double k_min(const std::vector<KCandidate>& cands, double t) {
    double best = kInf;
    for (const auto& c : cands) best = std::min(best, c.a + t * c.b);
    return best;
}

}  // namespace

double k_functional(const StepFunction& rearranged, const KQuery& query) {
    if (!(query.t >= 0.0))
        throw std::invalid_argument("k-functional needs t >= 0");
    return k_min(k_candidates(rearranged, query.p, query.q), query.t);
}

double k_functional(const DiscreteRandomVariable& f, const KQuery& query) {
    return k_functional(decreasing_rearrangement(f), query);
}

std::vector<double> k_profile(const StepFunction& rearranged, double p, double q,
                              std::span<const double> ts) {
    const auto cands = k_candidates(rearranged, p, q);
    std::vector<double> out;
    out.reserve(ts.size());
    for (double t : ts) {
        if (!(t >= 0.0)) throw std::invalid_argument("k-functional needs t >= 0");
        out.push_back(k_min(cands, t));
    }
    return out;
}

KOrliczEquivalenceReport check_k_orlicz_equivalence(const DiscreteRandomVariable& f,
                                                    double p, double q,
                                                    std::span<const double> t_grid,
                                                    double slack) {
    KOrliczEquivalenceReport rep;
    rep.p = p;
    rep.q = q;
    const StepFunction r = decreasing_rearrangement(f);
    const auto cands = k_candidates(r, p, q);
    const double lower_factor = std::exp2(-1.0 - 1.0 / p);
    rep.pass = true;
    rep.rows.reserve(t_grid.size());
    for (double t : t_grid) {
        KOrliczRow row;
        row.t = t;
        row.k_value = k_min(cands, t);
        row.orlicz_value = orlicz_norm(f, OrliczFunction::power_pair_min(p, q, t));
        row.pass = leq_with_slack(lower_factor * row.orlicz_value, row.k_value, slack) &&
                   leq_with_slack(row.k_value, 2.0 * row.orlicz_value, slack);
        rep.pass = rep.pass && row.pass;
        rep.rows.push_back(row);
    }
    return rep;
}

KInterpolationReport check_k_interpolation(const DiscreteRandomVariable& f,
                                           const DiscreteRandomVariable& g,
                                           LorentzIndices pq,
                                           std::span<const double> t_grid,
                                           double slack) {
    if (!(pq.p > 0.0) || !std::isfinite(pq.p) || !(pq.q > 0.0))
        throw std::invalid_argument("interpolation needs finite p > 0 and q > 0");
    KInterpolationReport rep;
    const StepFunction rf = decreasing_rearrangement(f);
    const StepFunction rg = decreasing_rearrangement(g);
    const double ip = pq.p / 2.0;   // interpolation couple (p/2, 2p)
    const double iq = 2.0 * pq.p;

    const auto cf = k_candidates(rf, ip, iq);
    const auto cg = k_candidates(rg, ip, iq);
    rep.hypothesis_ok = true;
    rep.worst_hypothesis_gap = -kInf;
    for (double t : t_grid) {
        if (!(t >= 0.0)) throw std::invalid_argument("k-functional needs t >= 0");
        const double kf = k_min(cf, t);
        const double kg = k_min(cg, t);
        rep.worst_hypothesis_gap = std::max(rep.worst_hypothesis_gap, kf - kg);
        if (!leq_with_slack(kf, kg, slack)) rep.hypothesis_ok = false;
    }

    rep.lhs_norm = lorentz_norm(rf, pq);
    rep.rhs_norm = lorentz_norm(rg, pq);
    const double min_index = std::min(pq.p, pq.q);
    rep.conclusion_factor = std::pow(128.0, 1.0 / min_index);
    rep.conclusion_ok =
        leq_with_slack(rep.lhs_norm, rep.conclusion_factor * rep.rhs_norm, slack);

    // Averaged majorant H(t) = hardy_head + hardy_tail of g at exponent p.
    // H is nonincreasing, so sampling cell left endpoints on a log grid over
    // [2^-60, 1) majorizes it there; on the head cell [0, 2^-60) the closed
    // form H(t) <= A + B t^{-1/(2p)} with A = max g, B = ||g||_{2p} takes over.
    const int cells = 1024;
    const double a_head = rg.values().empty() ? 0.0 : rg.values().front();
    const double b_head = p_norm(rg, 2.0 * pq.p);
    std::vector<double> edge(cells + 1);
    for (int j = 0; j <= cells; ++j)
        edge[j] = std::exp2(-60.0 * (1.0 - static_cast<double>(j) / cells));
    const double t0 = edge[0];
    double majorant = 0.0;
    if (pq.q == kInf) {
        // sup over the head cell of s^{1/p} (A + B s^{-1/(2p)}), increasing in s
        majorant = a_head * std::pow(t0, 1.0 / pq.p) +
                   b_head * std::pow(t0, 1.0 / (2.0 * pq.p));
        for (int j = 0; j < cells; ++j) {
            const double h = hardy_majorant(rg, pq.p, edge[j]);
            majorant = std::max(majorant, std::pow(edge[j + 1], 1.0 / pq.p) * h);
        }
    } else {
        const double e = pq.q / pq.p;
        const double kappa = std::max(1.0, std::exp2(pq.q - 1.0));
        double qsum = kappa * (std::pow(a_head, pq.q) * std::pow(t0, e) +
                               2.0 * std::pow(b_head, pq.q) *
                                   std::pow(t0, pq.q / (2.0 * pq.p)));
        for (int j = 0; j < cells; ++j) {
            const double h = hardy_majorant(rg, pq.p, edge[j]);
            if (h == 0.0) continue;
            qsum += std::pow(h, pq.q) *
                    (std::pow(edge[j + 1], e) - std::pow(edge[j], e));
        }
        majorant = std::pow(qsum, 1.0 / pq.q);
    }
    rep.majorant_norm = majorant;
    rep.majorant_factor = std::pow(32.0, 1.0 / min_index);
    rep.majorant_ok =
        leq_with_slack(rep.majorant_norm, rep.majorant_factor * rep.rhs_norm, slack);

    rep.pass = !rep.hypothesis_ok || (rep.conclusion_ok && rep.majorant_ok);
    return rep;
}

}  // namespace ri
