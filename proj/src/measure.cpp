#include "nkappa/measure.hpp"
#include "nkappa/errors.hpp"

#include <algorithm>
#include <cmath>

namespace nk {

namespace {

bool kernel_depends_on_z(Kernel k) {
    switch (k) {
    case Kernel::Cauchy:
    case Kernel::Herglotz:
    case Kernel::WeightedCauchy:
    case Kernel::CauchySq:
        return true;
    default:
        return false;
    }
}

// power of the kernel's structural singularity at t = 0
int kernel_zero_power(Kernel k) {
    return (k == Kernel::WeightedCauchy || k == Kernel::ZeroMoment) ? -1 : 0;
}

// decay power p with |kernel| <= K(z)/t^p for t >= 2(|z|+1)
int kernel_decay_power(Kernel k) {
    switch (k) {
    case Kernel::Cauchy: return 1;
    case Kernel::ZeroMoment: return 3;
    default: return 2;
    }
}

double kernel_decay_const(Kernel k, Complex z) {
    switch (k) {
    case Kernel::Cauchy: return 2.0;
    case Kernel::Herglotz: return 2.0 * (std::abs(z) + 1.0);
    case Kernel::WeightedCauchy: return 2.0;
    case Kernel::InvQuad: return 1.0;
    case Kernel::ZeroMoment: return 1.0;
    case Kernel::CauchySq: return 4.0;
    }
    return 1.0;
}

Complex kernel_value(Kernel k, double t, Complex z) {
    switch (k) {
    case Kernel::Cauchy:
        return 1.0 / (t - z);
    case Kernel::Herglotz:
        // algebraically identical to 1/(t-z) - t/(1+t^2) but free of the
        // large-t cancellation between the two terms
        return (1.0 + t * z) / ((t - z) * (1.0 + t * t));
    case Kernel::WeightedCauchy:
        return 1.0 / (t * (t - z));
    case Kernel::InvQuad:
        return 1.0 / (1.0 + t * t);
    case Kernel::ZeroMoment:
        return 1.0 / (t * (1.0 + t * t));
    case Kernel::CauchySq: {
        const Complex d = t - z;
        return 1.0 / (d * d);
    }
    }
    return 0.0;
}

} // namespace

double DensityPiece::exponent_at_lo() const {
    double e = 0.0;
    if (lo == anchor) e += exp_lo;
    if (lo == 0.0) e += t_power;
    return e;
}

double DensityPiece::exponent_at_zero() const {
    if (lo == 0.0) return exponent_at_lo();
    return static_cast<double>(t_power);
}

double DensityPiece::exponent_at_inf() const {
    const double base = has_tail ? exp_inf : exp_lo;
    return base + t_power - static_cast<double>(divisors.size());
}

double DensityPiece::density_from_offset(double dt) const {
    const double t = anchor + dt;
    double v = scale * std::pow(dt, exp_lo);
    if (has_tail) v *= std::pow(1.0 + dt, exp_inf - exp_lo);
    if (t_power > 0)
        for (int i = 0; i < t_power; ++i) v *= t;
    else
        for (int i = 0; i < -t_power; ++i) v /= t;
    for (double d : divisors) v /= (t + d);
    return v;
}

StieltjesMeasure::StieltjesMeasure(std::vector<Atom> atoms,
                                   std::vector<DensityPiece> pieces)
    : atoms_(std::move(atoms)), pieces_(std::move(pieces)) {
    for (const Atom& a : atoms_) {
        if (!(a.w > 0.0) || !std::isfinite(a.w) || !std::isfinite(a.t))
            throw InvalidSpec("atom weight must be positive and finite");
    }
    std::sort(atoms_.begin(), atoms_.end(),
              [](const Atom& l, const Atom& r) { return l.t < r.t; });
    // coincident atoms merge
    std::vector<Atom> merged;
    for (const Atom& a : atoms_) {
        if (!merged.empty() && merged.back().t == a.t)
            merged.back().w += a.w;
        else
            merged.push_back(a);
    }
    atoms_ = std::move(merged);

    for (const DensityPiece& p : pieces_) {
        if (!(p.scale > 0.0)) throw InvalidSpec("piece scale must be positive");
        if (!(p.lo < p.hi)) throw InvalidSpec("piece requires lo < hi");
        if (!(p.anchor <= p.lo)) throw InvalidSpec("piece anchor right of lo");
        if (p.unbounded() && !p.has_tail)
            throw InvalidSpec("unbounded piece requires a tail exponent");
        if (!(p.exponent_at_lo() > -1.0))
            throw InvalidSpec("piece mass diverges at its left endpoint");
        if (p.unbounded() && !(p.exponent_at_inf() < 1.0))
            throw InvalidSpec("piece violates int dm/(1+t^2) < inf at the tail");
        if ((p.t_power != 0 || !p.divisors.empty()) && p.anchor < 0.0)
            throw InvalidSpec("rational reweighting requires support in [0,inf)");
        for (double d : p.divisors)
            if (!(d > 0.0)) throw InvalidSpec("piece divisor must be positive");
    }
    std::sort(pieces_.begin(), pieces_.end(),
              [](const DensityPiece& l, const DensityPiece& r) { return l.lo < r.lo; });
    for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
        if (pieces_[i + 1].lo < pieces_[i].hi)
            throw InvalidSpec("pieces must have disjoint interiors");
    }
}

bool StieltjesMeasure::has_atom_at(double t) const {
    for (const Atom& a : atoms_)
        if (a.t == t) return true;
    return false;
}

double StieltjesMeasure::atom_weight_at(double t) const {
    for (const Atom& a : atoms_)
        if (a.t == t) return a.w;
    return 0.0;
}

double StieltjesMeasure::support_distance(Complex z) const {
    double d = kInf;
    for (const Atom& a : atoms_)
        d = std::min(d, std::abs(z - Complex(a.t, 0.0)));
    for (const DensityPiece& p : pieces_) {
        const double x = std::clamp(z.real(), p.lo, p.hi);
        d = std::min(d, std::abs(z - Complex(x, 0.0)));
    }
    return d;
}

double StieltjesMeasure::support_infimum() const {
    double v = kInf;
    if (!atoms_.empty()) v = std::min(v, atoms_.front().t);
    for (const DensityPiece& p : pieces_) v = std::min(v, p.lo);
    return v;
}

double StieltjesMeasure::support_supremum() const {
    double v = -kInf;
    if (!atoms_.empty()) v = std::max(v, atoms_.back().t);
    for (const DensityPiece& p : pieces_) v = std::max(v, p.hi);
    return v;
}

StieltjesMeasure StieltjesMeasure::scaled(double c) const {
    if (!(c > 0.0)) throw InvalidSpec("measure scaling must be positive");
    std::vector<Atom> as = atoms_;
    std::vector<DensityPiece> ps = pieces_;
    for (Atom& a : as) a.w *= c;
    for (DensityPiece& p : ps) p.scale *= c;
    return StieltjesMeasure(std::move(as), std::move(ps));
}

StieltjesMeasure StieltjesMeasure::multiplied_by_t() const {
    if (!supported_in_nonnegative())
        throw PreconditionFailed("t * dm requires support in [0,inf)");
    std::vector<Atom> as;
    for (const Atom& a : atoms_)
        if (a.t > 0.0) as.push_back({a.t, a.w * a.t});
    std::vector<DensityPiece> ps = pieces_;
    for (DensityPiece& p : ps) p.t_power += 1;
    return StieltjesMeasure(std::move(as), std::move(ps));
}

StieltjesMeasure StieltjesMeasure::divided_by_t() const {
    if (!supported_in_nonnegative())
        throw PreconditionFailed("dm / t requires support in [0,inf)");
    if (has_atom_at(0.0))
        throw PreconditionFailed("dm / t undefined with an atom at 0");
    std::vector<Atom> as;
    for (const Atom& a : atoms_) as.push_back({a.t, a.w / a.t});
    std::vector<DensityPiece> ps = pieces_;
    for (DensityPiece& p : ps) p.t_power -= 1;
    return StieltjesMeasure(std::move(as), std::move(ps));
}

StieltjesMeasure StieltjesMeasure::reweighted_t_over_t_plus(double eps) const {
    if (!(eps > 0.0)) throw PreconditionFailed("reweighting requires eps > 0");
    if (!supported_in_nonnegative())
        throw PreconditionFailed("t/(t+eps) * dm requires support in [0,inf)");
    std::vector<Atom> as;
    for (const Atom& a : atoms_)
        if (a.t > 0.0) as.push_back({a.t, a.w * a.t / (a.t + eps)});
    std::vector<DensityPiece> ps = pieces_;
    for (DensityPiece& p : ps) {
        p.t_power += 1;
        p.divisors.push_back(eps);
    }
    return StieltjesMeasure(std::move(as), std::move(ps));
}

Finiteness integrability(const StieltjesMeasure& m, IntTest test) {
    const bool near_zero = (test == IntTest::DSigmaOverTNear0 || test == IntTest::ZeroMoment);
    if (near_zero) {
        if (m.has_atom_at(0.0)) return Finiteness::Infinite;
        for (const DensityPiece& p : m.pieces()) {
            if (p.lo <= 0.0 && p.hi > 0.0 && p.exponent_at_zero() <= 0.0)
                return Finiteness::Infinite;
        }
    }
    double tail_threshold = kInf; // e_inf >= threshold diverges
    switch (test) {
    case IntTest::DSigmaOverTNear0: tail_threshold = kInf; break; // cut off at 1
    case IntTest::DSigmaOver1PlusT2: tail_threshold = 1.0; break;
    case IntTest::DNuOver1PlusT: tail_threshold = 0.0; break;
    case IntTest::ZeroMoment: tail_threshold = 2.0; break;
    }
    if (tail_threshold < kInf) {
        for (const DensityPiece& p : m.pieces())
            if (p.unbounded() && p.exponent_at_inf() >= tail_threshold)
                return Finiteness::Infinite;
    }
    return Finiteness::Finite;
}

StieltjesMeasure restrict_measure(const StieltjesMeasure& m, double lo, double hi) {
    std::vector<Atom> as;
    for (const Atom& a : m.atoms())
        if (a.t >= lo && a.t < hi) as.push_back(a);
    std::vector<DensityPiece> ps;
    for (const DensityPiece& p : m.pieces()) {
        DensityPiece q = p;
        q.lo = std::max(p.lo, lo);
        q.hi = std::min(p.hi, hi);
        if (q.lo < q.hi) {
            if (q.hi < kInf && q.has_tail) {
                // keep the analytic form; only the bounds shrink
            }
            ps.push_back(q);
        }
    }
    return StieltjesMeasure(std::move(as), std::move(ps));
}

namespace {

// choose the truncation point T so that the analytic bound on
// int_T^inf density*|kernel| stays below abs_tail
double tail_cut(const DensityPiece& p, Kernel k, Complex z, double abs_tail) {
    const double e = p.exponent_at_inf();
    const int pk = kernel_decay_power(k);
    const double K = kernel_decay_const(k, z);
    const double t_min =
        std::max({p.lo + 1.0, 2.0 * (std::abs(z) + 1.0), 2.0, 2.0 * std::max(p.anchor, 0.0) + 2.0});
    const double expo = e - pk + 1.0; // < 0, enforced by the divergence check
    const double shape = std::fabs(p.exp_lo) + std::fabs(p.has_tail ? p.exp_inf - p.exp_lo : 0.0);
    const double c = p.scale * K * std::pow(2.0, shape + 2.0) *
                     std::max(1.0, std::pow(1.0 + std::max(p.anchor, 0.0), std::fabs(e)));
    double t = std::pow(abs_tail * (-expo) / c, 1.0 / expo);
    if (!(t > t_min)) t = t_min;
    if (t > 1e60) t = 1e60;
    return t;
}

struct PieceIntegrand {
    const DensityPiece* p;
    Kernel k;
    Complex z;

    Complex direct(double t) const {
        return p->density(t) * kernel_value(k, t, z);
    }

    // dlo = t - p->lo held exactly; keeps (t - anchor)^exp_lo accurate when
    // the singular endpoint coincides with the anchor
    Complex from_left(double dlo) const {
        const double off = (p->lo - p->anchor) + dlo;
        const double t = p->lo + dlo;
        return p->density_from_offset(off) * kernel_value(k, t, z);
    }
};

Complex integrate_piece(const DensityPiece& p, Kernel k, Complex z,
                        const QuadConfig& cfg, double rel) {
    const double a = p.lo;
    double b = p.hi;
    PieceIntegrand fi{&p, k, z};

    if (p.unbounded()) {
        const double t_min =
            std::max({a + 1.0, 2.0 * (std::abs(z) + 1.0), 2.0, 2.0 * std::max(p.anchor, 0.0) + 2.0});
        double head_err = 0.0;
        const Complex head = gk15_panel([&](double t) { return fi.direct(t); },
                                        std::min(a + 1e-3 * (t_min - a), t_min), t_min, head_err);
        const double abs_tail = 0.1 * rel * std::max(std::abs(head), 1e-30);
        b = tail_cut(p, k, z, abs_tail);
    }

    double e_end = p.exponent_at_lo();
    if (a == 0.0) e_end += kernel_zero_power(k);

    Complex total = 0.0;
    if (e_end < 0.0) {
        // substitution t = a + u^q with q = 1/(1+e) removes the endpoint
        // singularity: (t-a)^e dt = q du
        const double m1 = std::min(b, a + 1.0);
        const double q = 1.0 / (1.0 + e_end);
        const double u_hi = std::pow(m1 - a, 1.0 + e_end);
        auto f_u = [&](double u) -> Complex {
            const double dlo = std::pow(u, q);
            return q * fi.from_left(dlo) * std::pow(dlo, -e_end);
        };
        total += integrate_adaptive(f_u, 0.0, u_hi, 1e-300, rel, cfg.max_intervals).value;
        if (b > m1)
            total += integrate_adaptive([&](double t) { return fi.direct(t); }, m1, b,
                                        1e-300, rel, cfg.max_intervals).value;
    } else {
        total = integrate_adaptive([&](double t) { return fi.direct(t); }, a, b,
                                   1e-300, rel, cfg.max_intervals).value;
    }
    return total;
}

void check_kernel_integrable(const StieltjesMeasure& m, Kernel k) {
    if (kernel_zero_power(k) < 0) {
        if (m.has_atom_at(0.0))
            throw DivergentIntegral("kernel singular at an atom at t = 0");
        for (const DensityPiece& p : m.pieces())
            if (p.lo <= 0.0 && p.hi > 0.0 && p.exponent_at_zero() <= 0.0)
                throw DivergentIntegral("kernel x density non-integrable at t = 0+");
    }
    const int pk = kernel_decay_power(k);
    for (const DensityPiece& p : m.pieces())
        if (p.unbounded() && p.exponent_at_inf() - pk >= -1.0)
            throw DivergentIntegral("kernel x density non-integrable at t = +inf");
}

} // namespace

Complex integrate(const StieltjesMeasure& m, Kernel k, Complex z,
                  const QuadConfig& cfg) {
    if (kernel_depends_on_z(k)) {
        const double d = m.support_distance(z);
        if (d < 1e-13 * (1.0 + std::abs(z)))
            throw PoleOnSupport("evaluation point on the support of the measure");
    }
    check_kernel_integrable(m, k);

    Complex total = 0.0;
    for (const Atom& a : m.atoms())
        total += a.w * kernel_value(k, a.t, z);
    for (const DensityPiece& p : m.pieces())
        total += integrate_piece(p, k, z, cfg, 0.5 * cfg.rel_tol);
    return total;
}

double total_mass(const StieltjesMeasure& m, double lo, double hi) {
    if (!(std::isfinite(lo) && std::isfinite(hi)))
        throw PreconditionFailed("total_mass requires a bounded interval");
    double mass = 0.0;
    for (const Atom& a : m.atoms())
        if (a.t >= lo && a.t < hi) mass += a.w;
    for (const DensityPiece& p : m.pieces()) {
        const double x1 = std::max(p.lo, lo);
        const double x2 = std::min(p.hi, hi);
        if (!(x1 < x2)) continue;
        if (p.closed_form_mass()) {
            const double e1 = p.exp_lo + 1.0;
            mass += p.scale *
                    (std::pow(x2 - p.anchor, e1) - std::pow(x1 - p.anchor, e1)) / e1;
        } else {
            double e_end = (x1 == p.lo) ? p.exponent_at_lo() : 0.0;
            if (e_end < 0.0) {
                const double q = 1.0 / (1.0 + e_end);
                const double u_hi = std::pow(x2 - x1, 1.0 + e_end);
                const double base_off = x1 - p.anchor;
                auto f_u = [&](double u) -> Complex {
                    const double dt = std::pow(u, q);
                    return q * p.density_from_offset(base_off + dt) * std::pow(dt, -e_end);
                };
                mass += integrate_adaptive(f_u, 0.0, u_hi, 1e-300, 1e-12,
                                           QuadConfig{}.max_intervals).value.real();
            } else {
                mass += integrate_adaptive(
                            [&](double t) -> Complex { return p.density(t); },
                            x1, x2, 1e-300, 1e-12, QuadConfig{}.max_intervals)
                            .value.real();
            }
        }
    }
    return mass;
}

double integrate_weight(const StieltjesMeasure& m, double lo, double hi,
                        const std::function<double(double)>& f,
                        const QuadConfig& cfg) {
    if (!(std::isfinite(lo) && std::isfinite(hi)))
        throw PreconditionFailed("integrate_weight requires a bounded interval");
    double total = 0.0;
    for (const Atom& a : m.atoms())
        if (a.t >= lo && a.t < hi) total += a.w * f(a.t);
    for (const DensityPiece& p : m.pieces()) {
        const double x1 = std::max(p.lo, lo);
        const double x2 = std::min(p.hi, hi);
        if (!(x1 < x2)) continue;
        double e_end = (x1 == p.lo) ? p.exponent_at_lo() : 0.0;
        if (e_end < 0.0) {
            const double q = 1.0 / (1.0 + e_end);
            const double u_hi = std::pow(x2 - x1, 1.0 + e_end);
            const double base_off = x1 - p.anchor;
            auto f_u = [&](double u) -> Complex {
                const double dt = std::pow(u, q);
                const double t = x1 + dt;
                return q * p.density_from_offset(base_off + dt) * f(t) * std::pow(dt, -e_end);
            };
            total += integrate_adaptive(f_u, 0.0, u_hi, 1e-300, cfg.rel_tol,
                                        cfg.max_intervals).value.real();
        } else {
            total += integrate_adaptive(
                         [&](double t) -> Complex { return p.density(t) * f(t); },
                         x1, x2, 1e-300, cfg.rel_tol, cfg.max_intervals)
                         .value.real();
        }
    }
    return total;
}

} // namespace nk
