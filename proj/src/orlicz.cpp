#include "ri/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ri/numeric.hpp"

namespace ri {

OrliczFunction OrliczFunction::power(double p) {
    if (!(p > 0.0) || !std::isfinite(p))
        throw std::invalid_argument("power exponent must be positive and finite");
    OrliczFunction f;
    f.kind_ = Kind::power;
    f.a_ = p;
    f.convex_ = p >= 1.0;
    f.upper_order_ = p;
    f.lower_order_ = p;
    f.validate();
    return f;
}

OrliczFunction OrliczFunction::power_pair_min(double p, double q, double t) {
    if (!(p > 0.0 && q > 0.0 && p < q))
        throw std::invalid_argument("power pair needs 0 < p < q");
    if (!(t > 0.0) || !std::isfinite(t))
        throw std::invalid_argument("power pair needs t > 0");
    OrliczFunction f;
    f.kind_ = Kind::power_pair_min;
    f.a_ = p;
    f.b_ = q;
    f.c_ = t;
    f.convex_ = false;  // kink where the branches cross
    // min(c^p x^p, c^q (tx)^q) is pinched between c^p and c^q times the min
    f.upper_order_ = q;
    f.lower_order_ = p;
    f.validate();
    return f;
}

OrliczFunction OrliczFunction::hinge(double a) {
    if (!(a >= 0.0) || !std::isfinite(a))
        throw std::invalid_argument("hinge offset must be nonnegative");
    OrliczFunction f;
    f.kind_ = Kind::hinge;
    f.a_ = a;
    f.convex_ = true;
    // vanishes on [0,a], so no upper scaling order exists; convexity with
    // phi(0)=0 gives the lower order 1
    f.lower_order_ = 1.0;
    f.validate();
    return f;
}

OrliczFunction OrliczFunction::min_of(OrliczFunction lhs, OrliczFunction rhs) {
    OrliczFunction f;
    f.kind_ = Kind::min_pair;
    f.left_ = std::make_shared<const OrliczFunction>(std::move(lhs));
    f.right_ = std::make_shared<const OrliczFunction>(std::move(rhs));
    f.convex_ = false;
    if (f.left_->upper_order_ && f.right_->upper_order_)
        f.upper_order_ = std::max(*f.left_->upper_order_, *f.right_->upper_order_);
    if (f.left_->lower_order_ && f.right_->lower_order_)
        f.lower_order_ = std::min(*f.left_->lower_order_, *f.right_->lower_order_);
    f.validate();
    return f;
}

OrliczFunction OrliczFunction::scaled(double c, OrliczFunction base) {
    if (!(c > 0.0) || !std::isfinite(c))
        throw std::invalid_argument("scale must be positive and finite");
    OrliczFunction f;
    f.kind_ = Kind::scaled;
    f.c_ = c;
    f.left_ = std::make_shared<const OrliczFunction>(std::move(base));
    f.convex_ = f.left_->convex_;
    f.upper_order_ = f.left_->upper_order_;
    f.lower_order_ = f.left_->lower_order_;
    f.validate();
    return f;
}

double OrliczFunction::operator()(double x) const {
    switch (kind_) {
        case Kind::power:
            return std::pow(x, a_);
        case Kind::power_pair_min:
            return std::min(std::pow(x, a_), std::pow(c_ * x, b_));
        case Kind::hinge:
            return std::max(x - a_, 0.0);
        case Kind::min_pair:
            return std::min((*left_)(x), (*right_)(x));
        case Kind::scaled:
            return c_ * (*left_)(x);
    }
    return 0.0;
}

void OrliczFunction::validate() const {
    if ((*this)(0.0) != 0.0)
        throw std::invalid_argument("orlicz function must vanish at 0");
    double prev = 0.0, prev_x = 0.0;
    for (int i = -30; i <= 30; ++i) {
        const double x = std::pow(10.0, i / 3.0);
        const double y = (*this)(x);
        if (std::isnan(y) || y < 0.0)
            throw std::invalid_argument("orlicz function must be nonnegative");
        if (y < prev)
            throw std::invalid_argument("orlicz function not monotone on grid near x=" +
                                        std::to_string(prev_x));
        prev = y;
        prev_x = x;
    }
}

std::string OrliczFunction::describe() const {
    switch (kind_) {
        case Kind::power:
            return "x^" + std::to_string(a_);
        case Kind::power_pair_min:
            return "min(x^" + std::to_string(a_) + ", (" + std::to_string(c_) +
                   "x)^" + std::to_string(b_) + ")";
        case Kind::hinge:
            return "(x - " + std::to_string(a_) + ")^+";
        case Kind::min_pair:
            return "min(" + left_->describe() + ", " + right_->describe() + ")";
        case Kind::scaled:
            return std::to_string(c_) + " * " + left_->describe();
    }
    return "";
}

namespace {

double modular(const DiscreteRandomVariable& f, const OrliczFunction& phi,
               double lambda) {
    double s = 0.0;
    for (const Atom& a : f.atoms()) s += a.prob * phi(std::abs(a.value) / lambda);
    return s;
}

}  // namespace

OrliczNormResult orlicz_norm_full(const DiscreteRandomVariable& f,
                                  const OrliczFunction& phi) {
    OrliczNormResult r;
    if (f.is_zero()) {
        r.degenerate = true;
        r.degenerate_reason = "zero function";
        return r;
    }

    double hi = f.max_abs();
    double lo = hi;
    if (modular(f, phi, hi) <= 1.0) {
        // expand the infeasible side downward
        bool bracketed = false;
        for (int i = 0; i < norm_max_iter; ++i) {
            const double next = lo / 2.0;
            if (modular(f, phi, next) > 1.0) {
                lo = next;
                bracketed = true;
                break;
            }
            lo = next;
        }
        if (!bracketed) {
            // feasible all the way down: the modular bound never bites
            r.degenerate = true;
            r.degenerate_reason = "every scale satisfies the modular bound";
            r.iterations = norm_max_iter;
            return r;
        }
    } else {
        // expand the feasible side upward; phi is continuous at 0 with
        // phi(0) = 0, so this terminates
        int work = 0;
        for (;;) {
            if (++work > 2048)
                throw std::runtime_error("orlicz norm bracket expansion failed");
            hi *= 2.0;
            if (modular(f, phi, hi) <= 1.0) break;
            lo = hi;
        }
    }

    int it = 0;
    while (hi - lo > norm_rel_tol * hi && it < norm_max_iter) {
        const double mid = 0.5 * (lo + hi);
        if (modular(f, phi, mid) <= 1.0)
            hi = mid;
        else
            lo = mid;
        ++it;
    }
    r.value = hi;
    r.iterations = it;
    return r;
}

double orlicz_norm(const DiscreteRandomVariable& f, const OrliczFunction& phi) {
    return orlicz_norm_full(f, phi).value;
}

double orlicz_norm(const StepFunction& f, const OrliczFunction& phi) {
    return orlicz_norm_full(f.as_distribution(), phi).value;
}

GrowthGrid GrowthGrid::standard() {
    GrowthGrid g;
    for (int i = 0; i <= 120; ++i) g.x.push_back(std::pow(10.0, -6.0 + 0.1 * i));
    g.c = {2.0, std::pow(2.0, 1.5), 4.0, 8.0, 64.0};
    return g;
}

GrowthReport verify_growth_class(const OrliczFunction& phi, double order,
                                 GrowthSide side, const GrowthGrid& grid) {
    GrowthReport rep;
    rep.side = side;
    rep.order = order;

    if (side == GrowthSide::upper && phi.upper_order_bound() &&
        *phi.upper_order_bound() <= order) {
        rep.pass = true;
        rep.analytic = true;
        return rep;
    }
    if (side == GrowthSide::lower && phi.lower_order_bound() &&
        *phi.lower_order_bound() >= order) {
        rep.pass = true;
        rep.analytic = true;
        return rep;
    }

    double worst = 1.0;
    for (double x : grid.x) {
        const double fx = phi(x);
        for (double c : grid.c) {
            const double fcx = phi(c * x);
            const double scale = std::pow(c, order);
            double ratio;
            if (side == GrowthSide::upper) {
                const double cap = scale * fx;
                ratio = cap > 0.0 ? fcx / cap
                                  : (fcx > 0.0 ? std::numeric_limits<double>::infinity()
                                               : 1.0);
            } else {
                const double floor = scale * fx;
                ratio = fcx > 0.0 ? floor / fcx
                                  : (floor > 0.0 ? std::numeric_limits<double>::infinity()
                                                 : 1.0);
            }
            if (ratio > worst) {
                worst = ratio;
                rep.worst_x = x;
                rep.worst_c = c;
            }
        }
    }
    rep.max_violation = worst;
    rep.pass = worst <= 1.0 + 1e-12;
    return rep;
}

SplitBound split_infimum(const DiscreteRandomVariable& f, const OrliczFunction& phi,
                         const OrliczFunction& psi) {
    const StepFunction r = decreasing_rearrangement(f);

    std::vector<SplitPair> cands = canonical_splits(r);

    // level-set assignment: each constancy level goes wholly to the cheaper side
    {
        std::vector<double> v1(r.values().size()), v2(r.values().size());
        for (std::size_t i = 0; i < r.values().size(); ++i) {
            const double v = r.values()[i];
            if (phi(v) <= psi(v))
                v1[i] = v;
            else
                v2[i] = v;
        }
        cands.push_back({StepFunction(r.breaks(), std::move(v1)),
                         StepFunction(r.breaks(), std::move(v2)), "level-set"});
    }

    SplitBound best;
    best.value = std::numeric_limits<double>::infinity();
    for (const SplitPair& c : cands) {
        const double v = orlicz_norm(c.part1, phi) + orlicz_norm(c.part2, psi);
        if (v < best.value) {
            best.value = v;
            best.family = c.family;
            best.part1_values = c.part1.values();
            best.part2_values = c.part2.values();
        }
    }
    return best;
}

SandwichReport check_split_sandwich(const DiscreteRandomVariable& f,
                                    const OrliczFunction& phi,
                                    const OrliczFunction& psi, double slack) {
    SandwichReport rep;
    OrliczFunction theta = OrliczFunction::min_of(phi, psi);
    OrliczFunction theta_half = OrliczFunction::scaled(0.5, theta);
    rep.lower = 0.5 * orlicz_norm(f, theta_half);
    rep.upper = 2.0 * orlicz_norm(f, theta);
    rep.witness = split_infimum(f, phi, psi);
    rep.value = rep.witness.value;
    rep.pass = rep.value >= rep.lower - slack_for(rep.lower, slack) &&
               rep.value <= rep.upper + slack_for(rep.upper, slack);
    return rep;
}

}  // namespace ri
