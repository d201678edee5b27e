#include "ri/tangent.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "ri/numeric.hpp"
#include "ri/rng.hpp"

namespace ri {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_depth(int depth) {
    if (depth < 1 || depth > DyadicSpace::max_depth)
        throw std::invalid_argument("depth must lie in [1, 22]");
}

// -0 and +0 compare equal but hash differently; normalize before keying
double key_norm(double x) { return x == 0.0 ? 0.0 : x; }

std::uint64_t bits_of(double x) {
    std::uint64_t b;
    std::memcpy(&b, &x, sizeof b);
    return b;
}

struct DoubleKeyHash {
    std::size_t operator()(double x) const noexcept {
        return std::hash<std::uint64_t>{}(bits_of(x));
    }
};

using CountMap = std::unordered_map<double, std::uint64_t, DoubleKeyHash>;

// counts over exact sums -> law with probabilities count * 2^{-pow} and
// values coalesced at 12 significant digits
DiscreteRandomVariable law_from_counts(const CountMap& counts, int pow) {
    CountMap rounded;
    rounded.reserve(counts.size());
    for (const auto& [value, count] : counts)
        rounded[round_sig(value)] += count;
    std::vector<Atom> atoms;
    atoms.reserve(rounded.size());
    for (const auto& [value, count] : rounded)
        atoms.push_back({value, std::ldexp(static_cast<double>(count), -pow)});
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.value < b.value; });
    return DiscreteRandomVariable(std::move(atoms));
}

}  // namespace

DyadicSpace::DyadicSpace(int depth) : depth_(depth) { require_depth(depth); }

int DyadicSpace::sign(std::uint64_t path, int level) const {
    if (level < 1 || level > depth_)
        throw std::invalid_argument("level out of range");
    return ((path >> (depth_ - level)) & 1) ? 1 : -1;
}

AdaptedSequence::AdaptedSequence(int depth, std::vector<std::vector<double>> levels)
    : depth_(depth), levels_(std::move(levels)) {
    require_depth(depth);
    if (levels_.size() != static_cast<std::size_t>(depth))
        throw std::invalid_argument("adapted sequence needs one table per level");
    for (int k = 1; k <= depth; ++k) {
        const auto& table = levels_[static_cast<std::size_t>(k) - 1];
        if (table.size() != (std::size_t{1} << k))
            throw std::invalid_argument("level table size must be 2^level");
        for (double v : table)
            if (!std::isfinite(v))
                throw std::invalid_argument("level values must be finite");
    }
}

AdaptedSequence AdaptedSequence::negated() const {
    auto tables = levels_;
    for (auto& table : tables)
        for (double& v : table) v = -v;
    return AdaptedSequence(depth_, std::move(tables));
}

PredictableMultiplier::PredictableMultiplier(int depth,
                                             std::vector<std::vector<double>> levels)
    : depth_(depth), levels_(std::move(levels)) {
    require_depth(depth);
    if (levels_.size() != static_cast<std::size_t>(depth))
        throw std::invalid_argument("multiplier needs one table per level");
    for (int k = 1; k <= depth; ++k) {
        const auto& table = levels_[static_cast<std::size_t>(k) - 1];
        if (table.size() != (std::size_t{1} << (k - 1)))
            throw std::invalid_argument("multiplier table size must be 2^(level-1)");
        for (double v : table)
            if (!std::isfinite(v))
                throw std::invalid_argument("multiplier values must be finite");
    }
}

AdaptedSequence PredictableMultiplier::times_rademacher() const {
    std::vector<std::vector<double>> tables(levels_.size());
    for (std::size_t k = 0; k < levels_.size(); ++k) {
        const auto& v = levels_[k];
        auto& table = tables[k];
        table.resize(v.size() * 2);
        for (std::size_t i = 0; i < table.size(); ++i)
            table[i] = v[i >> 1] * ((i & 1) ? 1.0 : -1.0);
    }
    return AdaptedSequence(depth_, std::move(tables));
}

DiscreteRandomVariable conditional_distribution(const AdaptedSequence& f, int level,
                                                std::uint64_t prefix) {
    if (level < 1 || level > f.depth())
        throw std::invalid_argument("level out of range");
    if (prefix >= (std::uint64_t{1} << (level - 1)))
        throw std::invalid_argument("prefix out of range");
    const double lo = round_sig(f.value(level, prefix << 1));
    const double hi = round_sig(f.value(level, (prefix << 1) | 1));
    if (lo == hi) return DiscreteRandomVariable({{lo, 1.0}});
    return DiscreteRandomVariable({{std::min(lo, hi), 0.5}, {std::max(lo, hi), 0.5}});
}

TangentReport check_tangent(const AdaptedSequence& f, const AdaptedSequence& g) {
    if (f.depth() != g.depth())
        throw std::invalid_argument("tangency needs a common filtration depth");
    TangentReport rep;
    for (int k = 1; k <= f.depth(); ++k) {
        const std::uint64_t prefixes = std::uint64_t{1} << (k - 1);
        for (std::uint64_t u = 0; u < prefixes; ++u) {
            double fa = round_sig(f.value(k, u << 1));
            double fb = round_sig(f.value(k, (u << 1) | 1));
            double ga = round_sig(g.value(k, u << 1));
            double gb = round_sig(g.value(k, (u << 1) | 1));
            if (fa > fb) std::swap(fa, fb);
            if (ga > gb) std::swap(ga, gb);
            if (fa != ga || fb != gb) {
                rep.pass = false;
                rep.first_level = k;
                rep.first_prefix = u;
                return rep;
            }
        }
    }
    rep.pass = true;
    return rep;
}

double DecoupledPair::value(int level, std::uint64_t eps, std::uint64_t eps2) const {
    const int n = base_.depth();
    const std::uint64_t prefix = eps >> (n - level + 1);
    const std::uint64_t fresh = (eps2 >> (n - level)) & 1;
    return base_.value(level, (prefix << 1) | fresh);
}

DecoupledPair decouple(const AdaptedSequence& f) {
    if (f.depth() > DecoupledPair::max_depth)
        throw std::invalid_argument("decoupled pair needs depth <= 11");
    DecoupledPair pair(f);
    if (f.depth() <= 6) {
        if (!check_pair_tangent_to_base(pair).pass)
            throw std::logic_error("decoupled terms lost tangency to the base");
        if (!check_conditional_independence(pair))
            throw std::logic_error("decoupled terms lost conditional independence");
    }
    return pair;
}

TangentReport check_pair_tangent_to_base(const DecoupledPair& pair) {
    const AdaptedSequence& f = pair.base();
    const int n = f.depth();
    TangentReport rep;
    for (int k = 1; k <= n; ++k) {
        const std::uint64_t prefixes = std::uint64_t{1} << (k - 1);
        for (std::uint64_t u = 0; u < prefixes; ++u) {
            for (std::uint64_t w = 0; w < prefixes; ++w) {
                // one-step laws at the doubled node (u, w): four equally
                // likely reveals (s, s'); the lifted term reads s, the
                // decoupled term reads s'
                double lifted[4], dec[4];
                for (int s = 0; s < 2; ++s) {
                    for (int s2 = 0; s2 < 2; ++s2) {
                        const std::uint64_t eps = ((u << 1) | static_cast<std::uint64_t>(s))
                                                  << (n - k);
                        const std::uint64_t eps2 = ((w << 1) | static_cast<std::uint64_t>(s2))
                                                   << (n - k);
                        lifted[s * 2 + s2] =
                            round_sig(f.value(k, (u << 1) | static_cast<std::uint64_t>(s)));
                        dec[s * 2 + s2] = round_sig(pair.value(k, eps, eps2));
                    }
                }
                std::sort(lifted, lifted + 4);
                std::sort(dec, dec + 4);
                if (!std::equal(lifted, lifted + 4, dec)) {
                    rep.pass = false;
                    rep.first_level = k;
                    rep.first_prefix = (u << (k - 1)) | w;
                    return rep;
                }
            }
        }
    }
    rep.pass = true;
    return rep;
}

bool check_conditional_independence(const DecoupledPair& pair) {
    const AdaptedSequence& f = pair.base();
    const int n = f.depth();
    if (n > 8)
        throw std::invalid_argument("independence check enumerates tuples, depth <= 8");
    const std::uint64_t paths = std::uint64_t{1} << n;
    for (std::uint64_t eps = 0; eps < paths; ++eps) {
        // children seen by term k once the first copy is fixed
        std::vector<double> lo(n), hi(n);
        for (int k = 1; k <= n; ++k) {
            const std::uint64_t prefix = eps >> (n - k + 1);
            lo[k - 1] = round_sig(f.value(k, prefix << 1));
            hi[k - 1] = round_sig(f.value(k, (prefix << 1) | 1));
        }
        std::map<std::vector<double>, std::uint64_t> joint;
        std::vector<double> tuple(n);
        for (std::uint64_t eps2 = 0; eps2 < paths; ++eps2) {
            for (int k = 1; k <= n; ++k)
                tuple[k - 1] = ((eps2 >> (n - k)) & 1) ? hi[k - 1] : lo[k - 1];
            joint[tuple] += 1;
        }
        // product law: free choice only at levels whose children differ
        std::vector<int> free_levels;
        for (int k = 0; k < n; ++k)
            if (lo[k] != hi[k]) free_levels.push_back(k);
        const std::size_t d = free_levels.size();
        if (joint.size() != (std::size_t{1} << d)) return false;
        const std::uint64_t expected = std::uint64_t{1} << (n - d);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
            for (int k = 0; k < n; ++k) tuple[k] = lo[k];
            for (std::size_t j = 0; j < d; ++j)
                if ((mask >> j) & 1) tuple[free_levels[j]] = hi[free_levels[j]];
            auto it = joint.find(tuple);
            if (it == joint.end() || it->second != expected) return false;
        }
    }
    return true;
}

DiscreteRandomVariable sum_distribution(const AdaptedSequence& f, SumMode mode) {
    const int n = f.depth();
    if (mode == SumMode::enumeration) {
        const std::uint64_t paths = std::uint64_t{1} << n;
        CountMap counts;
        for (std::uint64_t w = 0; w < paths; ++w) {
            double s = 0.0;
            for (int k = 1; k <= n; ++k) s += f.value(k, w >> (n - k));
            counts[key_norm(s)] += 1;
        }
        return law_from_counts(counts, n);
    }

    // prefixes whose entire future value subtrees are identical (bitwise)
    // carry identical conditional laws of the remaining sum, so the walk can
    // merge them; partial sums then match enumeration bit for bit because
    // the addends and their order coincide
    for (const auto& table : f.levels()) {
        std::unordered_set<double, DoubleKeyHash> distinct;
        for (double v : table) {
            distinct.insert(round_sig(v));
            if (distinct.size() > 4096)
                throw std::invalid_argument(
                    "level value diversity exceeds the merge precondition (4096)");
        }
    }

    struct ClassRec {
        double v0, v1;
        std::uint32_t c0, c1;
    };
    struct SigKey {
        std::uint64_t v0, v1;
        std::uint32_t c0, c1;
        bool operator==(const SigKey&) const = default;
    };
    struct SigHash {
        std::size_t operator()(const SigKey& k) const noexcept {
            std::uint64_t h = k.v0 * 0x9e3779b97f4a7c15ULL;
            h ^= k.v1 + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            h ^= (std::uint64_t{k.c0} << 32 | k.c1) + (h << 6) + (h >> 2);
            return std::hash<std::uint64_t>{}(h);
        }
    };

    // bottom-up interning of subtree classes; recs[k] drives the step from
    // prefix length k to k+1
    std::vector<std::vector<ClassRec>> recs(static_cast<std::size_t>(n));
    std::vector<std::uint32_t> next_cls(std::size_t{1} << n, 0);  // classes at depth n
    for (int k = n - 1; k >= 0; --k) {
        const auto& table = f.levels()[static_cast<std::size_t>(k)];
        std::vector<std::uint32_t> cls(std::size_t{1} << k);
        std::unordered_map<SigKey, std::uint32_t, SigHash> intern;
        auto& rec = recs[static_cast<std::size_t>(k)];
        for (std::uint64_t u = 0; u < (std::uint64_t{1} << k); ++u) {
            const double v0 = key_norm(table[u << 1]);
            const double v1 = key_norm(table[(u << 1) | 1]);
            const SigKey key{bits_of(v0), bits_of(v1), next_cls[u << 1],
                             next_cls[(u << 1) | 1]};
            auto [it, inserted] = intern.try_emplace(
                key, static_cast<std::uint32_t>(rec.size()));
            if (inserted) rec.push_back({v0, v1, key.c0, key.c1});
            cls[u] = it->second;
        }
        next_cls = std::move(cls);
    }

    struct StateKey {
        std::uint32_t cls;
        double sum;
        bool operator==(const StateKey&) const = default;
    };
    struct StateHash {
        std::size_t operator()(const StateKey& k) const noexcept {
            return std::hash<std::uint64_t>{}(bits_of(k.sum) ^
                                              (std::uint64_t{k.cls} * 0x9e3779b97f4a7c15ULL));
        }
    };
    std::unordered_map<StateKey, std::uint64_t, StateHash> states;
    states[{next_cls[0], 0.0}] = 1;
    for (int k = 0; k < n; ++k) {
        std::unordered_map<StateKey, std::uint64_t, StateHash> next;
        next.reserve(states.size() * 2);
        const auto& rec = recs[static_cast<std::size_t>(k)];
        for (const auto& [state, count] : states) {
            const ClassRec& r = rec[state.cls];
            next[{r.c0, key_norm(state.sum + r.v0)}] += count;
            next[{r.c1, key_norm(state.sum + r.v1)}] += count;
            if (next.size() > (std::size_t{1} << 22))
                throw std::runtime_error("state-space overflow");
        }
        states = std::move(next);
    }
    CountMap counts;
    counts.reserve(states.size());
    for (const auto& [state, count] : states) counts[state.sum] += count;
    return law_from_counts(counts, n);
}

DiscreteRandomVariable sum_distribution(const DecoupledPair& pair, SumMode mode) {
    const AdaptedSequence& f = pair.base();
    const int n = f.depth();
    const std::uint64_t paths = std::uint64_t{1} << n;
    CountMap counts;
    if (mode == SumMode::enumeration) {
        for (std::uint64_t eps = 0; eps < paths; ++eps) {
            for (std::uint64_t eps2 = 0; eps2 < paths; ++eps2) {
                double s = 0.0;
                for (int k = 1; k <= n; ++k) s += pair.value(k, eps, eps2);
                counts[key_norm(s)] += 1;
            }
        }
        return law_from_counts(counts, 2 * n);
    }
    // given the first copy the terms are independent two-point variables, so
    // the conditional law is a levelwise convolution; addends arrive in the
    // same order as enumeration, keeping the sums bitwise equal
    for (std::uint64_t eps = 0; eps < paths; ++eps) {
        CountMap cond;
        cond[0.0] = 1;
        for (int k = 1; k <= n; ++k) {
            const std::uint64_t prefix = eps >> (n - k + 1);
            const double v0 = f.value(k, prefix << 1);
            const double v1 = f.value(k, (prefix << 1) | 1);
            CountMap next;
            next.reserve(cond.size() * 2);
            for (const auto& [s, c] : cond) {
                next[key_norm(s + v0)] += c;
                next[key_norm(s + v1)] += c;
            }
            cond = std::move(next);
        }
        for (const auto& [s, c] : cond) counts[s] += c;
    }
    return law_from_counts(counts, 2 * n);
}

DiscreteRandomVariable maximal_function(const AdaptedSequence& f, MaximalKind kind) {
    const int n = f.depth();
    const std::uint64_t paths = std::uint64_t{1} << n;
    CountMap counts;
    for (std::uint64_t w = 0; w < paths; ++w) {
        double running = 0.0, best = 0.0;
        for (int k = 1; k <= n; ++k) {
            const double v = f.value(k, w >> (n - k));
            running = (kind == MaximalKind::partial_sums) ? running + v : v;
            best = std::max(best, std::abs(running));
        }
        counts[key_norm(best)] += 1;
    }
    return law_from_counts(counts, n);
}

DiscreteRandomVariable maximal_function(const DecoupledPair& pair, MaximalKind kind) {
    const int n = pair.depth();
    const std::uint64_t paths = std::uint64_t{1} << n;
    CountMap counts;
    for (std::uint64_t eps = 0; eps < paths; ++eps) {
        for (std::uint64_t eps2 = 0; eps2 < paths; ++eps2) {
            double running = 0.0, best = 0.0;
            for (int k = 1; k <= n; ++k) {
                const double v = pair.value(k, eps, eps2);
                running = (kind == MaximalKind::partial_sums) ? running + v : v;
                best = std::max(best, std::abs(running));
            }
            counts[key_norm(best)] += 1;
        }
    }
    return law_from_counts(counts, 2 * n);
}

namespace {

std::vector<double> tail_grid(const DiscreteRandomVariable& a,
                              const DiscreteRandomVariable& b) {
    std::vector<double> grid;
    for (const auto& atom : a.atoms()) grid.push_back(atom.value);
    for (const auto& atom : b.atoms()) grid.push_back(atom.value);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    grid.push_back(grid.empty() ? 1.0 : grid.back() * 2.0 + 1.0);
    return grid;
}

}  // namespace

TailComparisonReport check_maximal_tail_domination(const AdaptedSequence& f) {
    const DecoupledPair pair = decouple(f);
    TailComparisonReport rep;

    const auto base_inc = maximal_function(f, MaximalKind::increments);
    const auto pair_inc = maximal_function(pair, MaximalKind::increments);
    rep.increments_pass = true;
    for (double t : tail_grid(base_inc, pair_inc)) {
        TailComparisonRow row;
        row.t = t;
        row.lhs = tail_prob(base_inc, t);
        row.rhs = tail_prob(pair_inc, t);
        row.pass = row.lhs <= 2.0 * row.rhs + 1e-15;
        rep.increments_pass = rep.increments_pass && row.pass;
        rep.increment_rows.push_back(row);
    }

    const auto base_sum = maximal_function(f, MaximalKind::partial_sums);
    const auto pair_sum = maximal_function(pair, MaximalKind::partial_sums);
    rep.partial_sum_worst_ratio = 0.0;
    for (double t : tail_grid(base_sum, pair_sum)) {
        TailComparisonRow row;
        row.t = t;
        row.lhs = tail_prob(base_sum, t);
        row.rhs = tail_prob(pair_sum, t);
        const double ratio =
            row.rhs > 0.0 ? row.lhs / row.rhs : (row.lhs > 0.0 ? kInf : 0.0);
        row.pass = true;  // informational
        rep.partial_sum_worst_ratio = std::max(rep.partial_sum_worst_ratio, ratio);
        rep.partial_sum_rows.push_back(row);
    }
    return rep;
}

LevyReport check_levy_inequality(const DecoupledPair& pair) {
    const AdaptedSequence& f = pair.base();
    const int n = f.depth();
    if (n > 10)
        throw std::invalid_argument("conditional two-sided bound enumerates, depth <= 10");

    LevyReport rep;
    rep.applicable = check_tangent(f, f.negated()).pass;
    if (!rep.applicable) {
        rep.pass = true;  // bound only claimed under conditional symmetry
        return rep;
    }

    rep.pass = true;
    rep.worst_ratio = 0.0;
    const std::uint64_t paths = std::uint64_t{1} << n;
    std::vector<double> running_max(paths), final_abs(paths);
    for (std::uint64_t eps = 0; eps < paths; ++eps) {
        for (std::uint64_t eps2 = 0; eps2 < paths; ++eps2) {
            double s = 0.0, m = 0.0;
            for (int k = 1; k <= n; ++k) {
                s += pair.value(k, eps, eps2);
                m = std::max(m, std::abs(s));
            }
            running_max[eps2] = m;
            final_abs[eps2] = std::abs(s);
        }
        std::vector<double> ms = running_max;
        std::sort(ms.begin(), ms.end());
        std::vector<double> fs = final_abs;
        std::sort(fs.begin(), fs.end());
        std::vector<double> thresholds = ms;
        thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                         thresholds.end());
        for (double t : thresholds) {
            const auto lhs = static_cast<std::uint64_t>(
                ms.end() - std::lower_bound(ms.begin(), ms.end(), t));
            const auto rhs = static_cast<std::uint64_t>(
                fs.end() - std::lower_bound(fs.begin(), fs.end(), t));
            if (lhs > 2 * rhs) {
                rep.pass = false;
                rep.worst_ratio = kInf;
            } else if (rhs > 0) {
                rep.worst_ratio = std::max(
                    rep.worst_ratio, static_cast<double>(lhs) /
                                         (2.0 * static_cast<double>(rhs)));
            }
        }
    }
    return rep;
}

KolmogorovReport check_kolmogorov_converse(const std::vector<DiscreteRandomVariable>& xs,
                                           double q, std::span<const double> t_grid) {
    if (xs.empty()) throw std::invalid_argument("need at least one variable");
    if (!(q > 0.0) || !std::isfinite(q))
        throw std::invalid_argument("moment exponent must be finite and positive");
    std::uint64_t combos = 1;
    for (const auto& x : xs) {
        const auto canon = x.canonical();
        const auto flipped = x.negated().canonical();
        if (canon.size() != flipped.size())
            throw std::invalid_argument("variables must be symmetric");
        for (std::size_t i = 0; i < canon.size(); ++i) {
            if (round_sig(canon.atoms()[i].value) !=
                    round_sig(flipped.atoms()[i].value) ||
                std::abs(canon.atoms()[i].prob - flipped.atoms()[i].prob) > prob_sum_tol)
                throw std::invalid_argument("variables must be symmetric");
        }
        if (combos > (std::uint64_t{1} << 22) / x.size())
            throw std::invalid_argument("product support exceeds 2^22 outcomes");
        combos *= x.size();
    }

    KolmogorovReport rep;
    rep.q = q;
    const std::size_t m = xs.size();
    std::vector<std::size_t> idx(m, 0);
    std::unordered_map<double, double, DoubleKeyHash> s_star;  // value -> prob
    double moment_max = 0.0, moment_sum = 0.0;
    for (;;) {
        double prob = 1.0, s = 0.0, max_s = 0.0, max_xi = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const Atom& a = xs[k].atoms()[idx[k]];
            prob *= a.prob;
            s += a.value;
            max_s = std::max(max_s, std::abs(s));
            max_xi = std::max(max_xi, std::abs(a.value));
        }
        s_star[key_norm(max_s)] += prob;
        moment_sum += prob * std::pow(max_s, q);
        moment_max += prob * std::pow(max_xi, q);
        std::size_t k = 0;
        while (k < m && ++idx[k] == xs[k].size()) idx[k++] = 0;
        if (k == m) break;
    }
    rep.moment_max = moment_max;
    rep.moment_sum = moment_sum;

    std::vector<std::pair<double, double>> hist(s_star.begin(), s_star.end());
    std::sort(hist.begin(), hist.end());
    // suffix sums give P(max |S_k| >= t) directly
    std::vector<double> suffix(hist.size() + 1, 0.0);
    for (std::size_t i = hist.size(); i-- > 0;)
        suffix[i] = suffix[i + 1] + hist[i].second;

    rep.pass = true;
    for (double t : t_grid) {
        KolmogorovRow row;
        row.t = t;
        const auto at = std::lower_bound(
            hist.begin(), hist.end(), t,
            [](const std::pair<double, double>& a, double b) { return a.first < b; });
        row.lhs = suffix[static_cast<std::size_t>(at - hist.begin())];
        row.rhs = moment_sum > 0.0
                      ? std::exp2(-q) * (1.0 - std::exp2(2.0 * q) *
                                                   (std::pow(t, q) + moment_max) /
                                                   moment_sum)
                      : -kInf;
        row.pass = row.lhs >= row.rhs - 1e-12;
        rep.pass = rep.pass && row.pass;
        rep.rows.push_back(row);
    }
    return rep;
}

namespace {

double sampled_maximal(const AdaptedSequence& f, MaximalKind kind, std::uint64_t eps,
                       std::uint64_t eps2, bool decoupled) {
    const int n = f.depth();
    double running = 0.0, best = 0.0;
    for (int k = 1; k <= n; ++k) {
        const std::uint64_t prefix = eps >> (n - k + 1);
        const std::uint64_t bit =
            decoupled ? (eps2 >> (n - k)) & 1 : (eps >> (n - k)) & 1;
        const double v = f.value(k, (prefix << 1) | bit);
        running = (kind == MaximalKind::partial_sums) ? running + v : v;
        best = std::max(best, std::abs(running));
    }
    return best;
}

McEstimate mc_tail_impl(const AdaptedSequence& f, MaximalKind kind, double t,
                        std::size_t samples, std::uint64_t seed, bool decoupled) {
    if (samples == 0) throw std::invalid_argument("need at least one sample");
    const std::uint64_t mask = (f.depth() == 64)
                                   ? ~std::uint64_t{0}
                                   : (std::uint64_t{1} << f.depth()) - 1;
    CounterRng rng(seed);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        const std::uint64_t eps = rng.next_u64() & mask;
        const std::uint64_t eps2 = decoupled ? (rng.next_u64() & mask) : 0;
        if (sampled_maximal(f, kind, eps, eps2, decoupled) >= t) ++hits;
    }
    McEstimate est;
    est.samples = samples;
    est.mean = static_cast<double>(hits) / static_cast<double>(samples);
    est.std_error =
        std::sqrt(est.mean * (1.0 - est.mean) / static_cast<double>(samples));
    return est;
}

}  // namespace

McEstimate mc_tail(const AdaptedSequence& f, MaximalKind kind, double t,
                   std::size_t samples, std::uint64_t seed) {
    return mc_tail_impl(f, kind, t, samples, seed, false);
}

McEstimate mc_tail_decoupled(const AdaptedSequence& f, MaximalKind kind, double t,
                             std::size_t samples, std::uint64_t seed) {
    return mc_tail_impl(f, kind, t, samples, seed, true);
}

}  // namespace ri
