#include "ri/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ri/numeric.hpp"
#include "ri/rng.hpp"

namespace ri {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_corpus(const CorpusSpec& spec) {
    if (spec.count < 1) throw std::invalid_argument("corpus needs count >= 1");
    if (spec.min_depth < 1 || spec.max_depth > DyadicSpace::max_depth ||
        spec.min_depth > spec.max_depth)
        throw std::invalid_argument("corpus depth range must satisfy 1 <= min <= max <= 22");
    if (spec.value_range < 1)
        throw std::invalid_argument("corpus value range must be >= 1");
}

void require_exact_depth(const CorpusSpec& spec) {
    if (spec.max_depth > DecoupledPair::max_depth)
        throw std::invalid_argument(
            "exact decoupled enumeration needs corpus depth <= 11");
}

std::string fmt(double x) {
    if (x == kInf) return "inf";
    std::ostringstream os;
    os << x;
    return os.str();
}

std::string describe_corpus(const CorpusSpec& spec) {
    const char* kind = spec.kind == CorpusKind::rademacher ? "rademacher"
                       : spec.kind == CorpusKind::predictable_multiplier
                           ? "predictable-multiplier"
                           : "random-adapted";
    std::ostringstream os;
    os << "kind=" << kind << ", count=" << spec.count << ", depth=["
       << spec.min_depth << "," << spec.max_depth << "], range=" << spec.value_range
       << ", seed=" << spec.seed;
    return os.str();
}

template <typename Fn>
void for_each_instance(std::size_t count, int threads, Fn&& fn) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(threads), count);
    std::vector<std::future<void>> futures;
    futures.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        futures.push_back(std::async(std::launch::async, [&fn, w, workers, count] {
            for (std::size_t i = w; i < count; i += workers) fn(i);
        }));
    for (auto& f : futures) f.get();
}

// ratio conventions: rhs > 0 reports lhs/rhs; rhs = 0 < lhs is an infinite
// ratio; both zero is degenerate and excluded from aggregates
void fill_ratio(RatioRow& row, double constant_power) {
    if (row.rhs > 0.0) {
        row.ratio = row.lhs / row.rhs;
        row.constant = std::pow(row.ratio, 1.0 / constant_power);
    } else if (row.lhs > 0.0) {
        row.ratio = kInf;
        row.constant = kInf;
    } else {
        row.degenerate = true;
    }
}

void finalize(RatioReport& rep) {
    std::vector<double> ratios;
    ratios.reserve(rep.rows.size());
    for (const auto& row : rep.rows) {
        if (row.degenerate) {
            ++rep.degenerate_count;
            continue;
        }
        ratios.push_back(row.ratio);
        rep.max_ratio = std::max(rep.max_ratio, row.ratio);
        rep.empirical_constant = std::max(rep.empirical_constant, row.constant);
        if (!std::isfinite(row.ratio)) rep.all_finite = false;
    }
    if (!ratios.empty()) {
        std::sort(ratios.begin(), ratios.end());
        const std::size_t mid = ratios.size() / 2;
        rep.median_ratio = (ratios.size() % 2) ? ratios[mid]
                                               : 0.5 * (ratios[mid - 1] + ratios[mid]);
    }
}

struct SumLaws {
    DiscreteRandomVariable coupled;
    DiscreteRandomVariable decoupled;
};

SumLaws instance_sums(const CorpusSpec& spec, std::size_t index) {
    const AdaptedSequence f = make_instance(spec, index);
    return {sum_distribution(f, SumMode::enumeration),
            sum_distribution(decouple(f), SumMode::level_dp)};
}

}  // namespace

AdaptedSequence make_instance(const CorpusSpec& spec, std::size_t index) {
    validate_corpus(spec);
    if (index >= spec.count)
        throw std::invalid_argument("instance index out of range");
    CounterRng rng(spec.seed, index);
    const int depth =
        static_cast<int>(rng.next_int(spec.min_depth, spec.max_depth));
    std::vector<std::vector<double>> tables(static_cast<std::size_t>(depth));
    switch (spec.kind) {
        case CorpusKind::rademacher:
            for (int k = 1; k <= depth; ++k) {
                auto& t = tables[static_cast<std::size_t>(k) - 1];
                t.resize(std::size_t{1} << k);
                for (std::size_t i = 0; i < t.size(); ++i)
                    t[i] = (i & 1) ? 1.0 : -1.0;
            }
            return AdaptedSequence(depth, std::move(tables));
        case CorpusKind::predictable_multiplier: {
            const std::int64_t r = 4 * spec.value_range;
            for (int k = 1; k <= depth; ++k) {
                auto& t = tables[static_cast<std::size_t>(k) - 1];
                t.resize(std::size_t{1} << (k - 1));
                for (auto& v : t)
                    v = static_cast<double>(rng.next_int(-r, r)) / 4.0;
            }
            return PredictableMultiplier(depth, std::move(tables)).times_rademacher();
        }
        case CorpusKind::random_adapted:
            for (int k = 1; k <= depth; ++k) {
                auto& t = tables[static_cast<std::size_t>(k) - 1];
                t.resize(std::size_t{1} << k);
                for (auto& v : t)
                    v = static_cast<double>(
                        rng.next_int(-spec.value_range, spec.value_range));
            }
            return AdaptedSequence(depth, std::move(tables));
    }
    throw std::logic_error("unknown corpus kind");
}

RatioReport run_decoupling_comparison(const CorpusSpec& corpus,
                                      const OrliczFunction& phi, double order,
                                      int threads) {
    validate_corpus(corpus);
    require_exact_depth(corpus);
    if (!verify_growth_class(phi, order, GrowthSide::upper).pass)
        throw std::invalid_argument("upper scaling order " + fmt(order) +
                                    " is not certified for " + phi.describe());
    RatioReport rep;
    rep.experiment = "orlicz-decoupling";
    rep.params = describe_corpus(corpus) + ", phi=" + phi.describe() +
                 ", order=" + fmt(order);
    rep.rows.resize(corpus.count);
    const std::string param = phi.describe();
    for_each_instance(corpus.count, threads, [&](std::size_t i) {
        const SumLaws laws = instance_sums(corpus, i);
        const auto fn = [&phi](double x) { return phi(x); };
        RatioRow row;
        row.instance = i;
        row.param = param;
        row.lhs = expect_phi(laws.coupled, fn);
        row.rhs = expect_phi(laws.decoupled, fn);
        fill_ratio(row, 1.0 + order);
        rep.rows[i] = std::move(row);
    });
    finalize(rep);
    return rep;
}

RatioReport run_moment_comparison(const CorpusSpec& corpus, std::vector<double> ps,
                                  int threads) {
    validate_corpus(corpus);
    require_exact_depth(corpus);
    if (std::find(ps.begin(), ps.end(), kInf) == ps.end()) ps.push_back(kInf);
    for (double p : ps)
        if (!(p > 0.0)) throw std::invalid_argument("moment exponents must be positive");
    RatioReport rep;
    rep.experiment = "moment-decoupling";
    rep.params = describe_corpus(corpus);
    rep.rows.resize(corpus.count * ps.size());
    for_each_instance(corpus.count, threads, [&](std::size_t i) {
        const SumLaws laws = instance_sums(corpus, i);
        for (std::size_t e = 0; e < ps.size(); ++e) {
            RatioRow row;
            row.instance = i;
            row.param = "p=" + fmt(ps[e]);
            row.lhs = p_norm(laws.coupled, ps[e]);
            row.rhs = p_norm(laws.decoupled, ps[e]);
            fill_ratio(row, 1.0);
            rep.rows[i * ps.size() + e] = std::move(row);
        }
    });
    finalize(rep);
    return rep;
}

RatioReport run_lorentz_comparison(const CorpusSpec& corpus,
                                   const std::vector<LorentzIndices>& pqs,
                                   int threads) {
    validate_corpus(corpus);
    require_exact_depth(corpus);
    if (pqs.empty()) throw std::invalid_argument("need at least one index pair");
    for (const auto& pq : pqs)
        if (!(pq.p > 0.0) || !(pq.q > 0.0))
            throw std::invalid_argument("lorentz indices must be positive");
    RatioReport rep;
    rep.experiment = "lorentz-decoupling";
    rep.params = describe_corpus(corpus);
    rep.rows.resize(corpus.count * pqs.size());
    for_each_instance(corpus.count, threads, [&](std::size_t i) {
        const SumLaws laws = instance_sums(corpus, i);
        for (std::size_t e = 0; e < pqs.size(); ++e) {
            RatioRow row;
            row.instance = i;
            row.param = "(p,q)=(" + fmt(pqs[e].p) + "," + fmt(pqs[e].q) + ")";
            row.lhs = lorentz_norm(laws.coupled, pqs[e]);
            row.rhs = lorentz_norm(laws.decoupled, pqs[e]);
            fill_ratio(row, 1.0);
            rep.rows[i * pqs.size() + e] = std::move(row);
        }
    });
    finalize(rep);
    return rep;
}

DominationChainReport run_norm_domination_chain(const DiscreteRandomVariable& f,
                                                const DiscreteRandomVariable& g,
                                                LorentzIndices pq,
                                                std::span<const double> t_grid) {
    if (!(pq.p > 0.0) || !std::isfinite(pq.p) || !(pq.q > 0.0))
        throw std::invalid_argument("domination chain needs finite p > 0 and q > 0");
    DominationChainReport rep;
    rep.couple_p = pq.p / 2.0;
    rep.couple_q = 2.0 * pq.p;

    rep.hypothesis_ok = true;
    rep.worst_hypothesis_gap = -kInf;
    for (double t : t_grid) {
        const auto family = OrliczFunction::power_pair_min(rep.couple_p, rep.couple_q, t);
        const double a = orlicz_norm(f, family);
        const double b = orlicz_norm(g, family);
        rep.worst_hypothesis_gap = std::max(rep.worst_hypothesis_gap, a - b);
        if (!leq_with_slack(a, b)) rep.hypothesis_ok = false;
    }

    rep.k_factor = std::exp2(2.0 + 1.0 / rep.couple_p);
    const StepFunction rf = decreasing_rearrangement(f);
    const StepFunction rg = decreasing_rearrangement(g);
    const auto kf = k_profile(rf, rep.couple_p, rep.couple_q, t_grid);
    const auto kg = k_profile(rg, rep.couple_p, rep.couple_q, t_grid);
    rep.k_domination_ok = true;
    for (std::size_t i = 0; i < kf.size(); ++i)
        if (!leq_with_slack(kf[i], rep.k_factor * kg[i])) rep.k_domination_ok = false;

    rep.interpolation = check_k_interpolation(f, g.scaled(rep.k_factor), pq, t_grid);
    rep.pass = !rep.hypothesis_ok ||
               (rep.k_domination_ok && rep.interpolation.hypothesis_ok &&
                rep.interpolation.pass);
    return rep;
}

namespace {

std::vector<std::uint64_t> binomial_row(int n) {
    std::vector<std::uint64_t> c(static_cast<std::size_t>(n) + 1);
    c[0] = 1;
    for (int i = 1; i <= n; ++i)
        c[static_cast<std::size_t>(i)] =
            c[static_cast<std::size_t>(i) - 1] *
            static_cast<std::uint64_t>(n - i + 1) / static_cast<std::uint64_t>(i);
    return c;
}

struct BlowupShape {
    int k = 0, n1 = 0;
    std::vector<int> len;  // 1-based block lengths
    std::vector<int> N;    // 1-based cumulative counts, N[0] = 0
};

BlowupShape blowup_shape(int k, int n1) {
    if (k < 2) throw std::invalid_argument("blowup needs k >= 2");
    if (k > 20) throw std::invalid_argument("blowup sizing overflow (k too large)");
    const int align = 1 << (k - 1);
    if (n1 < (1 << k) || n1 % align != 0)
        throw std::invalid_argument(
            "blowup needs n1 >= 2^k and divisible by 2^(k-1)");
    BlowupShape s;
    s.k = k;
    s.n1 = n1;
    s.len.assign(static_cast<std::size_t>(k) + 1, 0);
    s.N.assign(static_cast<std::size_t>(k) + 1, 0);
    for (int i = 1; i <= k; ++i) {
        s.len[static_cast<std::size_t>(i)] = n1 >> (i - 1);
        s.N[static_cast<std::size_t>(i)] =
            s.N[static_cast<std::size_t>(i) - 1] + s.len[static_cast<std::size_t>(i)];
    }
    if (s.N[static_cast<std::size_t>(k)] > 40)
        throw std::invalid_argument("blowup sizing overflow (more than 40 levels)");
    return s;
}

}  // namespace

BlowupReport blowup_construction(int k, int n1) {
    const BlowupShape s = blowup_shape(k, n1);
    const int total = s.N[static_cast<std::size_t>(k)];
    BlowupReport rep;
    rep.k = k;
    rep.n1 = n1;
    rep.block_bounds.assign(s.N.begin() + 1, s.N.end());
    rep.hinge_point = static_cast<double>(k) * n1 - 0.25 * k;
    const OrliczFunction phi = OrliczFunction::hinge(rep.hinge_point);

    // law of the alignment level: how many nested alignment events hold
    rep.level_probs.assign(static_cast<std::size_t>(k), 0.0);
    rep.level_probs[0] = 1.0 - std::ldexp(1.0, -n1);
    for (int m = 1; m <= k - 2; ++m)
        rep.level_probs[static_cast<std::size_t>(m)] =
            std::ldexp(1.0, m - 1 - s.N[static_cast<std::size_t>(m)]) -
            std::ldexp(1.0, m - s.N[static_cast<std::size_t>(m) + 1]);
    rep.level_probs[static_cast<std::size_t>(k) - 1] =
        std::ldexp(1.0, k - 2 - s.N[static_cast<std::size_t>(k) - 1]);

    // decoupled side: given the level, the factors are deterministic and the
    // fresh signs are free, so the sum is a weighted convolution of
    // symmetric sign blocks; counts are exact integers
    double rhs = 0.0;
    for (int m = 0; m < k; ++m) {
        const int active = m + 1;
        std::map<long long, std::uint64_t> hist{{0, 1}};
        for (int i = 1; i <= active; ++i) {
            const int blen = s.len[static_cast<std::size_t>(i)];
            const auto row = binomial_row(blen);
            const long long w = 1LL << (i - 1);
            std::map<long long, std::uint64_t> next;
            for (const auto& [v, c] : hist)
                for (int j = 0; j <= blen; ++j)
                    next[v + w * (blen - 2 * j)] += c * row[static_cast<std::size_t>(j)];
            hist = std::move(next);
        }
        const double scale = std::ldexp(1.0, -s.N[static_cast<std::size_t>(active)]);
        double cond = 0.0;
        for (const auto& [v, c] : hist)
            cond += static_cast<double>(c) * scale *
                    phi(0.25 * k * std::abs(static_cast<double>(v)));
        rhs += rep.level_probs[static_cast<std::size_t>(m)] * cond;
    }
    rep.rhs = rhs;

    // coupled side, by the same level conditioning: blocks at or below the
    // level are sign-locked, the next block is in play (constrained away
    // from full alignment except at the top level), later blocks are silent
    double lhs = 0.0;
    double mass = 0.0;
    {
        const auto row = binomial_row(n1);
        const double scale = std::ldexp(1.0, -n1);
        for (int j = 0; j <= n1; ++j) {
            const std::uint64_t c = row[static_cast<std::size_t>(j)] - (j == 0 ? 1 : 0);
            if (c == 0) continue;
            lhs += static_cast<double>(c) * scale *
                   phi(std::abs(static_cast<double>(n1 - 2 * j)));
            mass += static_cast<double>(c) * scale;
        }
    }
    for (int m = 1; m <= k - 1; ++m) {
        const int nb = m + 1;  // block in play
        const int blen = s.len[static_cast<std::size_t>(nb)];
        const auto row = binomial_row(blen);
        const long long w = 1LL << m;
        const double scale = std::ldexp(1.0, -s.N[static_cast<std::size_t>(nb)]);
        const int jlo = (m <= k - 2) ? 1 : 0;
        const int jhi = (m <= k - 2) ? blen - 1 : blen;
        const std::uint64_t sigmas = std::uint64_t{1} << (m - 1);
        for (std::uint64_t mask = 0; mask < sigmas; ++mask) {
            long long fixed = n1;
            for (int b = 2; b <= m; ++b)
                fixed += (1LL << (b - 1)) * s.len[static_cast<std::size_t>(b)] *
                         (((mask >> (b - 2)) & 1) ? 1 : -1);
            for (int j = jlo; j <= jhi; ++j) {
                const long long val = fixed + w * (blen - 2 * j);
                lhs += static_cast<double>(row[static_cast<std::size_t>(j)]) * scale *
                       phi(std::abs(static_cast<double>(val)));
                mass += static_cast<double>(row[static_cast<std::size_t>(j)]) * scale;
            }
        }
    }
    if (std::abs(mass - 1.0) > 1e-12)
        throw std::logic_error("blowup level decomposition lost probability mass");
    rep.lhs = lhs;

    rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : (rep.lhs > 0.0 ? kInf : 0.0);
    rep.bound = std::exp2(static_cast<double>(n1) / std::exp2(k - 2)) /
                (static_cast<double>(k) * k * n1);
    rep.bound_ok = leq_with_slack(rep.bound, rep.ratio);

    // independent cross-check: dumb double enumeration with its own hinge
    if (2 * total <= 24) {
        const std::uint64_t paths = std::uint64_t{1} << total;
        const double p_path = std::ldexp(1.0, -total);
        const double hp = rep.hinge_point;
        const auto brute_phi = [hp](double x) { return x > hp ? x - hp : 0.0; };
        std::vector<int> blk_of(static_cast<std::size_t>(total) + 1, 1);
        for (int l = 1; l <= total; ++l) {
            int b = 1;
            while (l > s.N[static_cast<std::size_t>(b)]) ++b;
            blk_of[static_cast<std::size_t>(l)] = b;
        }
        const auto sign_at = [total](std::uint64_t path, int l) {
            return ((path >> (total - l)) & 1) ? 1.0 : -1.0;
        };
        double blhs = 0.0, brhs = 0.0;
        for (std::uint64_t eps = 0; eps < paths; ++eps) {
            int level = 0;
            bool aligned = true;
            for (int l = 1; l <= s.n1 && aligned; ++l)
                aligned = sign_at(eps, l) > 0.0;
            if (aligned) {
                level = 1;
                for (int b = 2; b <= k - 1 && aligned; ++b) {
                    const double first = sign_at(eps, s.N[static_cast<std::size_t>(b) - 1] + 1);
                    for (int l = s.N[static_cast<std::size_t>(b) - 1] + 2;
                         l <= s.N[static_cast<std::size_t>(b)] && aligned; ++l)
                        aligned = sign_at(eps, l) == first;
                    if (aligned) level = b;
                }
            }
            std::vector<double> v(static_cast<std::size_t>(total) + 1, 0.0);
            for (int l = 1; l <= total; ++l) {
                const int b = blk_of[static_cast<std::size_t>(l)];
                if (b - 1 <= level)
                    v[static_cast<std::size_t>(l)] = static_cast<double>(1LL << (b - 1));
            }
            double sum = 0.0;
            for (int l = 1; l <= total; ++l)
                sum += v[static_cast<std::size_t>(l)] * sign_at(eps, l);
            blhs += p_path * brute_phi(std::abs(sum));
            for (std::uint64_t eps2 = 0; eps2 < paths; ++eps2) {
                double s2 = 0.0;
                for (int l = 1; l <= total; ++l)
                    s2 += v[static_cast<std::size_t>(l)] * sign_at(eps2, l);
                brhs += p_path * p_path * brute_phi(0.25 * k * std::abs(s2));
            }
        }
        rep.brute_lhs = blhs;
        rep.brute_rhs = brhs;
        rep.brute_agrees =
            std::abs(blhs - rep.lhs) <= 1e-12 && std::abs(brhs - rep.rhs) <= 1e-12;
    }
    return rep;
}

PredictableMultiplier blowup_multiplier(int k, int n1) {
    const BlowupShape s = blowup_shape(k, n1);
    const int total = s.N[static_cast<std::size_t>(k)];
    if (total > DyadicSpace::max_depth)
        throw std::invalid_argument("blowup tables need at most 22 levels");
    const auto bit_at = [](std::uint64_t u, int plen, int l) {
        return (u >> (plen - l)) & 1;
    };
    // does the alignment event of order m hold on a length-plen prefix?
    const auto omega = [&](std::uint64_t u, int plen, int m) {
        for (int l = 1; l <= s.n1; ++l)
            if (!bit_at(u, plen, l)) return false;
        for (int b = 2; b <= m; ++b) {
            const auto first = bit_at(u, plen, s.N[static_cast<std::size_t>(b) - 1] + 1);
            for (int l = s.N[static_cast<std::size_t>(b) - 1] + 2;
                 l <= s.N[static_cast<std::size_t>(b)]; ++l)
                if (bit_at(u, plen, l) != first) return false;
        }
        return true;
    };
    std::vector<std::vector<double>> tables(static_cast<std::size_t>(total));
    for (int j = 1; j <= total; ++j) {
        int b = 1;
        while (j > s.N[static_cast<std::size_t>(b)]) ++b;
        auto& table = tables[static_cast<std::size_t>(j) - 1];
        table.resize(std::size_t{1} << (j - 1));
        if (b == 1) {
            std::fill(table.begin(), table.end(), 1.0);
            continue;
        }
        for (std::uint64_t u = 0; u < table.size(); ++u)
            table[u] = omega(u, j - 1, b - 1) ? static_cast<double>(1LL << (b - 1)) : 0.0;
    }
    return PredictableMultiplier(total, std::move(tables));
}

std::vector<ConstantRow> estimate_constants(const std::vector<RatioReport>& reports) {
    std::map<std::pair<std::string, std::string>,
             std::pair<std::vector<double>, std::size_t>>
        cells;  // constants, degenerate count
    for (const auto& rep : reports) {
        for (const auto& row : rep.rows) {
            auto& cell = cells[{rep.experiment, row.param}];
            if (row.degenerate)
                ++cell.second;
            else
                cell.first.push_back(row.constant);
        }
    }
    std::vector<ConstantRow> table;
    table.reserve(cells.size());
    for (auto& [key, cell] : cells) {
        ConstantRow out;
        out.experiment = key.first;
        out.param = key.second;
        out.instances = cell.first.size() + cell.second;
        out.degenerate = cell.second;
        if (!cell.first.empty()) {
            std::sort(cell.first.begin(), cell.first.end());
            out.max_constant = cell.first.back();
            const std::size_t mid = cell.first.size() / 2;
            out.median_constant = (cell.first.size() % 2)
                                      ? cell.first[mid]
                                      : 0.5 * (cell.first[mid - 1] + cell.first[mid]);
        }
        table.push_back(std::move(out));
    }
    return table;
}

}  // namespace ri
