#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ri/lorentz.hpp"
#include "ri/measure.hpp"
#include "ri/orlicz.hpp"
#include "ri/tangent.hpp"

namespace ri {

enum class CorpusKind {
    rademacher,              // f_k = k-th sign; decoupled copy has the same law
    predictable_multiplier,  // quarter-integer predictable factors times signs
    random_adapted,          // integer-valued tables, no symmetry imposed
};

struct CorpusSpec {
    CorpusKind kind = CorpusKind::predictable_multiplier;
    std::size_t count = 1;
    int min_depth = 3;
    int max_depth = 6;
    int value_range = 4;  // factors in [-range, range] (quarter steps), values in [-range, range]
    std::uint64_t seed = 1;
};

/// Instance i is a pure function of (spec, i): the generator runs on its own
/// counter stream, so corpora replay exactly.
AdaptedSequence make_instance(const CorpusSpec& spec, std::size_t index);

struct RatioRow {
    std::size_t instance = 0;
    std::string param;       // which exponent / index pair the row refers to
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;      // reported only when rhs > 0 or lhs > 0
    double constant = 0.0;   // experiment-normalized constant for aggregation
    bool degenerate = false; // lhs = rhs = 0, excluded from aggregates
};

struct RatioReport {
    std::string experiment;
    std::string params;  // corpus and experiment parameters echoed
    std::vector<RatioRow> rows;
    std::size_t degenerate_count = 0;
    double max_ratio = 0.0;
    double median_ratio = 0.0;
    double empirical_constant = 0.0;  // max of row constants
    bool all_finite = true;           // no row had rhs = 0 < lhs
};

/// Ratio of E phi(|sum f|) to E phi(|sum fbar|) over the corpus, both sides
/// by exact enumeration. phi must carry a certified upper scaling order
/// (analytic or grid); the implied constant per row is ratio^{1/(1+order)}.
/// Reporting only: no universal bound is asserted.
RatioReport run_decoupling_comparison(const CorpusSpec& corpus,
                                      const OrliczFunction& phi, double order,
                                      int threads = 1);

/// p-norm ratios of the coupled and decoupled sums for each p in ps plus
/// p = infinity (always included). Constants are the ratios themselves.
RatioReport run_moment_comparison(const CorpusSpec& corpus, std::vector<double> ps,
                                  int threads = 1);

/// Lorentz-norm ratios of the coupled and decoupled sums for each index pair.
RatioReport run_lorentz_comparison(const CorpusSpec& corpus,
                                   const std::vector<LorentzIndices>& pqs,
                                   int threads = 1);

struct DominationChainReport {
    double couple_p = 0.0, couple_q = 0.0;  // interpolation couple (p/2, 2p)
    bool hypothesis_ok = false;  // Orlicz-norm domination over the min-power family
    double worst_hypothesis_gap = 0.0;
    double k_factor = 0.0;       // 2^{2 + 1/couple_p}
    bool k_domination_ok = false;
    KInterpolationReport interpolation;  // delegated with g scaled by k_factor
    bool pass = false;
};

/// Chain from Orlicz-norm domination to Lorentz-norm domination: if
/// ||f||_{Phi_t} <= ||g||_{Phi_t} for the whole min-power family on the
/// grid, then the K-functionals dominate with factor 2^{2+1/(p/2)} (via the
/// two-sided K-Orlicz comparison), and the interpolation step bounds
/// ||f||_{p,q} by that factor times 128^{1/min(p,q)} times ||g||_{p,q}.
/// A failed hypothesis is reported, not treated as a violation.
DominationChainReport run_norm_domination_chain(const DiscreteRandomVariable& f,
                                                const DiscreteRandomVariable& g,
                                                LorentzIndices pq,
                                                std::span<const double> t_grid);

struct BlowupReport {
    int k = 0;
    int n1 = 0;
    std::vector<int> block_bounds;  // cumulative level counts N_1 .. N_k
    double hinge_point = 0.0;       // k*n1 - k/4, exactly representable
    double lhs = 0.0;               // E phi(|sum v_j r_j|)
    double rhs = 0.0;               // E phi((k/4) |sum v_j r'_j|)
    double ratio = 0.0;             // +infinity when rhs = 0 < lhs
    double bound = 0.0;             // 2^{n1/2^{k-2}} / (k^2 n1)
    bool bound_ok = false;
    std::vector<double> level_probs;  // law of the membership level, 0..k-1
    std::optional<double> brute_lhs;  // direct path enumeration, when feasible
    std::optional<double> brute_rhs;
    bool brute_agrees = true;  // |block - brute| <= 1e-12 whenever both ran
};

/// Sharpness construction: geometric blocks of predictable multipliers that
/// ride a shrinking alignment event, against the hinge function with knee
/// just below the peak. The coupled side keeps mass at the peak while the
/// decoupled side (scaled by k/4) cannot reach the knee for small k, so the
/// ratio beats 2^{n1/2^{k-2}}/(k^2 n1). Both sides are computed exactly by
/// conditioning on the membership level and convolving sign blocks; a
/// brute-force double enumeration cross-checks when 2 N_k <= 24.
BlowupReport blowup_construction(int k, int n1);

/// The same construction as explicit predictable-multiplier tables, for
/// cross-checking against the path-space engines. Needs N_k <= 22.
PredictableMultiplier blowup_multiplier(int k, int n1);

struct ConstantRow {
    std::string experiment;
    std::string param;
    std::size_t instances = 0;
    std::size_t degenerate = 0;
    double max_constant = 0.0;
    double median_constant = 0.0;
};

/// Aggregate row constants per (experiment, param) cell. Empty input gives
/// an empty table; a single-instance cell has max = median.
std::vector<ConstantRow> estimate_constants(const std::vector<RatioReport>& reports);

}  // namespace ri
