#include "ri/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ri/numeric.hpp"

namespace ri {

DiscreteRandomVariable::DiscreteRandomVariable(std::vector<Atom> atoms)
    : atoms_(std::move(atoms)) {
    if (atoms_.empty())
        throw std::invalid_argument("distribution needs at least one atom");
    if (atoms_.size() > max_atoms)
        throw std::invalid_argument("atom count exceeds 2^22 cap");
    double sum = 0.0;
    for (const Atom& a : atoms_) {
        if (!std::isfinite(a.value))
            throw std::invalid_argument("atom value must be finite");
        if (!(a.prob > 0.0))
            throw std::invalid_argument("atom probability must be positive");
        sum += a.prob;
    }
    if (std::abs(sum - 1.0) > prob_sum_tol)
        throw std::invalid_argument("probabilities sum to " + std::to_string(sum) +
                                    ", expected 1");
}

DiscreteRandomVariable DiscreteRandomVariable::constant(double c) {
    return DiscreteRandomVariable({{c, 1.0}});
}

bool DiscreteRandomVariable::is_zero() const noexcept {
    for (const Atom& a : atoms_)
        if (a.value != 0.0) return false;
    return true;
}

double DiscreteRandomVariable::max_abs() const noexcept {
    double m = 0.0;
    for (const Atom& a : atoms_) m = std::max(m, std::abs(a.value));
    return m;
}

DiscreteRandomVariable DiscreteRandomVariable::scaled(double c) const {
    if (!std::isfinite(c)) throw std::invalid_argument("scale must be finite");
    std::vector<Atom> out = atoms_;
    for (Atom& a : out) a.value *= c;
    return DiscreteRandomVariable(std::move(out));
}

DiscreteRandomVariable DiscreteRandomVariable::negated() const { return scaled(-1.0); }

DiscreteRandomVariable DiscreteRandomVariable::canonical() const {
    std::vector<Atom> out = atoms_;
    std::sort(out.begin(), out.end(),
              [](const Atom& a, const Atom& b) { return a.value < b.value; });
    std::vector<Atom> merged;
    merged.reserve(out.size());
    for (const Atom& a : out) {
        if (!merged.empty() && merged.back().value == a.value)
            merged.back().prob += a.prob;
        else
            merged.push_back(a);
    }
    return DiscreteRandomVariable(std::move(merged));
}

StepFunction::StepFunction(std::vector<double> breaks, std::vector<double> values,
                           bool decreasing)
    : breaks_(std::move(breaks)), values_(std::move(values)), decreasing_(decreasing) {
    if (breaks_.size() < 2 || values_.size() + 1 != breaks_.size())
        throw std::invalid_argument("step function needs m+1 breakpoints for m values");
    if (breaks_.front() != 0.0 || breaks_.back() != 1.0)
        throw std::invalid_argument("breakpoints must start at 0 and end at 1");
    for (std::size_t i = 0; i + 1 < breaks_.size(); ++i)
        if (!(breaks_[i] < breaks_[i + 1]))
            throw std::invalid_argument("breakpoints must be strictly increasing");
    for (double v : values_)
        if (!std::isfinite(v)) throw std::invalid_argument("segment value must be finite");
    if (decreasing_) {
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (values_[i] < 0.0)
                throw std::invalid_argument("decreasing step function must be nonnegative");
            if (i > 0 && values_[i] > values_[i - 1])
                throw std::invalid_argument("values not nonincreasing");
        }
    }
}

double StepFunction::operator()(double s) const {
    if (!(s >= 0.0 && s < 1.0))
        throw std::invalid_argument("step function argument outside [0,1)");
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), s);
    return values_[static_cast<std::size_t>(it - breaks_.begin()) - 1];
}

StepFunction StepFunction::scaled(double c) const {
    if (c < 0.0) throw std::invalid_argument("scale must be nonnegative");
    std::vector<double> v = values_;
    for (double& x : v) x *= c;
    return StepFunction(breaks_, std::move(v), decreasing_);
}

StepFunction StepFunction::clipped_above(double c) const {
    std::vector<double> v = values_;
    for (double& x : v) x = std::min(x, c);
    return StepFunction(breaks_, std::move(v), decreasing_ && c >= 0.0);
}

StepFunction StepFunction::excess_above(double c) const {
    std::vector<double> v = values_;
    for (double& x : v) x = std::max(x - c, 0.0);
    return StepFunction(breaks_, std::move(v), decreasing_);
}

StepFunction StepFunction::head(double u) const {
    if (!(u > 0.0 && u < 1.0)) {
        if (u >= 1.0) return *this;
        throw std::invalid_argument("cut point must lie in (0,1)");
    }
    std::vector<double> nb{0.0};
    std::vector<double> nv;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const double hi = breaks_[i + 1];
        if (hi <= u) {
            nb.push_back(hi);
            nv.push_back(values_[i]);
        } else {
            if (breaks_[i] < u) {
                nb.push_back(u);
                nv.push_back(values_[i]);
            }
            break;
        }
    }
    if (nb.back() < 1.0) {
        nb.push_back(1.0);
        nv.push_back(0.0);
    }
    return StepFunction(std::move(nb), std::move(nv), decreasing_).canonicalized();
}

StepFunction StepFunction::tail(double u) const {
    if (!(u > 0.0 && u < 1.0)) {
        if (u <= 0.0) return *this;
        throw std::invalid_argument("cut point must lie in (0,1)");
    }
    std::vector<double> nb{0.0, u};
    std::vector<double> nv{0.0};
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const double hi = breaks_[i + 1];
        if (hi <= u) continue;
        nb.push_back(hi);
        nv.push_back(values_[i]);
    }
    // tail of a nonincreasing function starts at 0, so no monotone claim
    return StepFunction(std::move(nb), std::move(nv), false).canonicalized();
}

StepFunction StepFunction::minus(const StepFunction& other) const {
    std::vector<double> merged;
    merged.reserve(breaks_.size() + other.breaks_.size());
    std::merge(breaks_.begin(), breaks_.end(), other.breaks_.begin(),
               other.breaks_.end(), std::back_inserter(merged));
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    std::vector<double> nv;
    nv.reserve(merged.size() - 1);
    for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
        const double mid = merged[i];
        nv.push_back((*this)(mid)-other(mid));
    }
    return StepFunction(std::move(merged), std::move(nv), false).canonicalized();
}

DiscreteRandomVariable StepFunction::as_distribution() const {
    std::vector<Atom> atoms;
    atoms.reserve(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i)
        atoms.push_back({values_[i], segment_length(i)});
    return DiscreteRandomVariable(std::move(atoms)).canonical();
}

StepFunction StepFunction::canonicalized() const {
    std::vector<double> nb{breaks_.front()};
    std::vector<double> nv;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!nv.empty() && nv.back() == values_[i])
            nb.back() = breaks_[i + 1];  // extend previous segment
        else {
            nv.push_back(values_[i]);
            nb.push_back(breaks_[i + 1]);
        }
    }
    return StepFunction(std::move(nb), std::move(nv), decreasing_);
}

StepFunction decreasing_rearrangement(const DiscreteRandomVariable& f) {
    std::vector<Atom> abs_atoms;
    abs_atoms.reserve(f.size());
    for (const Atom& a : f.atoms()) abs_atoms.push_back({std::abs(a.value), a.prob});
    std::sort(abs_atoms.begin(), abs_atoms.end(),
              [](const Atom& a, const Atom& b) { return a.value > b.value; });

    std::vector<double> breaks{0.0};
    std::vector<double> values;
    double cum = 0.0;
    for (std::size_t i = 0; i < abs_atoms.size(); ++i) {
        double p = abs_atoms[i].prob;
        // ties coalesce into one segment
        while (i + 1 < abs_atoms.size() && abs_atoms[i + 1].value == abs_atoms[i].value)
            p += abs_atoms[++i].prob;
        cum += p;
        values.push_back(abs_atoms[i].value);
        breaks.push_back(cum);
    }
    breaks.back() = 1.0;  // probabilities sum to 1 within prob_sum_tol
    return StepFunction(std::move(breaks), std::move(values), true);
}

double p_norm(const DiscreteRandomVariable& f, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("p-norm needs p > 0");
    if (std::isinf(p)) return f.max_abs();
    double s = 0.0;
    for (const Atom& a : f.atoms()) s += a.prob * std::pow(std::abs(a.value), p);
    return std::pow(s, 1.0 / p);
}

double p_norm(const StepFunction& f, double p) { return p_norm(f.as_distribution(), p); }

double tail_prob(const DiscreteRandomVariable& f, double t) {
    double s = 0.0;
    for (const Atom& a : f.atoms())
        if (std::abs(a.value) >= t) s += a.prob;
    return s;
}

double tail_prob_strict(const DiscreteRandomVariable& f, double t) {
    double s = 0.0;
    for (const Atom& a : f.atoms())
        if (std::abs(a.value) > t) s += a.prob;
    return s;
}

double expect_phi(const DiscreteRandomVariable& f,
                  const std::function<double(double)>& phi, double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("scale must be positive");
    double s = 0.0;
    for (const Atom& a : f.atoms()) s += a.prob * phi(std::abs(a.value) / scale);
    return s;
}

double expect_phi(const StepFunction& f, const std::function<double(double)>& phi,
                  double scale) {
    return expect_phi(f.as_distribution(), phi, scale);
}

std::vector<SplitPair> canonical_splits(const StepFunction& f,
                                        const std::vector<double>& extra_cuts,
                                        bool with_truncations) {
    if (!f.decreasing())
        throw std::invalid_argument("splits operate on a decreasing rearrangement");
    std::vector<SplitPair> out;

    // scalar splits, endpoints give the two one-sided extremes
    for (int i = 0; i <= 100; ++i) {
        const double alpha = i / 100.0;
        out.push_back({f.scaled(alpha), f.scaled(1.0 - alpha), "scalar"});
    }

    std::vector<double> cuts(f.breaks().begin() + 1, f.breaks().end() - 1);
    cuts.insert(cuts.end(), extra_cuts.begin(), extra_cuts.end());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (double u : cuts) {
        if (!(u > 0.0 && u < 1.0)) continue;
        StepFunction h = f.head(u);
        StepFunction t = f.tail(u);
        out.push_back({h, t, "cut"});
        out.push_back({t, h, "cut-reversed"});
    }

    if (with_truncations) {
        std::vector<double> levels(f.values());
        std::sort(levels.begin(), levels.end());
        levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
        std::vector<double> thresholds;
        for (std::size_t i = 0; i < levels.size(); ++i) {
            thresholds.push_back(levels[i]);
            if (i + 1 < levels.size())
                thresholds.push_back(0.5 * (levels[i] + levels[i + 1]));
        }
        for (double c : thresholds) {
            if (!(c > 0.0)) continue;
            StepFunction low = f.clipped_above(c);
            StepFunction high = f.excess_above(c);
            out.push_back({low, high, "truncation"});
            out.push_back({high, low, "truncation-reversed"});
        }
    }
    return out;
}

}  // namespace ri
