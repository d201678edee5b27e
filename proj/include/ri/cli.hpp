#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ri/lorentz.hpp"
#include "ri/measure.hpp"

namespace ri::cli {

// Deterministic corpora shared by the command-line checks and the acceptance
// suite. An instance is a pure function of (seed, stream), so any failing
// case replays from its coordinates alone.

/// Up to max_atoms atoms with exactly dyadic probabilities (2^20 grains) and
/// quarter-integer values in [-quarter_range, quarter_range].
DiscreteRandomVariable random_variable(std::uint64_t seed, std::uint64_t stream,
                                       int max_atoms, int quarter_range = 8);

/// Pair (f, g) with |f| <= 0.9 |g| atom by atom on shared probabilities.
/// Even streams scale by one factor in {0.4,...,0.9}; odd streams draw a
/// factor per atom.
std::pair<DiscreteRandomVariable, DiscreteRandomVariable> dominated_pair(
    std::uint64_t seed, std::uint64_t stream, int max_atoms);

/// Variable whose support has measure at most cap (an exact dyadic), for
/// dilation cases with a < 1. Nonzero values are positive quarter-integers.
DiscreteRandomVariable small_support_variable(std::uint64_t seed,
                                              std::uint64_t stream, int max_atoms,
                                              double cap);

/// Independent symmetric summands (2 to 5 of them) with exactly dyadic
/// probabilities, for the maximal-sum lower bound.
std::vector<DiscreteRandomVariable> symmetric_tuple(std::uint64_t seed,
                                                    std::uint64_t stream);

struct CheckOutcome {
    std::string name;
    bool pass = false;
    nlohmann::json report;  // full machine-readable detail, schema in README
};

// The verification battery. Counts are per innermost loop (per index pair
// where one applies); passing 0 selects the documented default size.

CheckOutcome verify_split_sandwich(std::uint64_t seed, std::size_t count = 0);
CheckOutcome verify_k_sandwich(std::uint64_t seed, std::size_t count = 0,
                               std::vector<LorentzIndices> pqs = {},
                               std::span<const double> t_grid = {});
CheckOutcome verify_k_interpolation(std::uint64_t seed, std::size_t count = 0,
                                    std::vector<LorentzIndices> pqs = {},
                                    std::span<const double> t_grid = {});
CheckOutcome verify_dilation(std::uint64_t seed, std::size_t count = 0);
CheckOutcome verify_tangency(std::uint64_t seed, std::size_t count = 0);
CheckOutcome verify_tails(std::uint64_t seed, std::size_t count_per_kind = 0);
CheckOutcome verify_levy(std::uint64_t seed, std::size_t count = 0);
CheckOutcome verify_kolmogorov(std::uint64_t seed, std::size_t count = 0);

/// Sharpness construction at one size, or the three canonical sizes when
/// called through the command line without flags.
CheckOutcome run_counterexample(int k, int n1);

/// Reporting harness over three corpora (ratio experiments for an Orlicz
/// family, moments, and Lorentz norms) with finiteness and cross-consistency
/// assertions. instances = 0 selects the default 500.
CheckOutcome run_sweep(std::uint64_t seed, std::size_t instances = 0,
                       int threads = 1);

/// Command-line entry point; args exclude the program name. Returns the
/// process exit code: 0 all assertions pass, 1 usage or configuration error
/// (the message names the violated precondition), 2 assertion failure (the
/// failing instance is serialized in the report for replay).
int run(const std::vector<std::string>& args);

}  // namespace ri::cli
