#include "nkappa/nevfun.hpp"
#include "nkappa/errors.hpp"
#include "nkappa/witness.hpp"

#include <algorithm>
#include <cmath>

namespace nk {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double pole_guard(Complex z) { return 1e-13 * (1.0 + std::abs(z)); }

void check_pole_distance(Complex z, double location) {
    if (std::abs(z - Complex(location, 0.0)) < pole_guard(z))
        throw PoleOnSupport("evaluation point coincides with a pole");
}

} // namespace

double ExtReal::value() const {
    if (inf) throw DomainError("extended-real value is +inf");
    return v;
}

void PhiRep::validate() const {
    if (!(b >= 0.0) || !std::isfinite(b)) throw InvalidSpec("PhiRep: b must be >= 0");
    if (!std::isfinite(a)) throw InvalidSpec("PhiRep: a must be finite");
    for (const NegPole& p : poles) {
        if (!(p.lambda < 0.0)) throw InvalidSpec("PhiRep: pole locations must be negative");
        if (!(p.sigma > 0.0)) throw InvalidSpec("PhiRep: pole weights must be positive");
    }
    for (std::size_t i = 0; i < poles.size(); ++i)
        for (std::size_t j = i + 1; j < poles.size(); ++j)
            if (poles[i].lambda == poles[j].lambda)
                throw InvalidSpec("PhiRep: pole locations must be distinct");
    if (!measure.supported_in_nonnegative())
        throw InvalidSpec("PhiRep: measure support must lie in [0, inf)");
    if (integrability(measure, IntTest::DSigmaOver1PlusT2) == Finiteness::Infinite)
        throw InvalidSpec("PhiRep: measure violates int dsigma/(1+t^2) < inf");
}

std::vector<NegPole> PhiRep::poles_sorted() const {
    std::vector<NegPole> ps = poles;
    std::sort(ps.begin(), ps.end(),
              [](const NegPole& l, const NegPole& r) { return l.lambda > r.lambda; });
    return ps;
}

double PhiRep::nearest_negative_singularity() const {
    double d = kInf;
    for (const NegPole& p : poles) d = std::min(d, -p.lambda);
    return d;
}

std::size_t KappaForm::kappa() const {
    return poles.size() + (kase == KappaCase::A ? 0 : 1);
}

void KappaForm::validate() const {
    if (!(s0 >= 0.0)) throw InvalidSpec("KappaForm: s0 must be >= 0");
    for (const FormPole& p : poles) {
        if (!(p.alpha < 0.0)) throw InvalidSpec("KappaForm: alpha_j must be negative");
        if (!(p.gamma < 0.0)) throw InvalidSpec("KappaForm: gamma_j must be negative");
    }
    for (std::size_t i = 0; i < poles.size(); ++i)
        for (std::size_t j = i + 1; j < poles.size(); ++j)
            if (poles[i].alpha == poles[j].alpha)
                throw InvalidSpec("KappaForm: pole locations must be distinct");
    if (!mes.supported_in_nonnegative())
        throw InvalidSpec("KappaForm: measure support must lie in [0, inf)");
    switch (kase) {
    case KappaCase::A:
        if (s1 != 0.0 || s2 != 0.0)
            throw InvalidSpec("KappaForm A: s1, s2 are absent");
        if (integrability(mes, IntTest::DNuOver1PlusT) == Finiteness::Infinite)
            throw InvalidSpec("KappaForm A: int dnu/(1+t) must be finite");
        break;
    case KappaCase::B:
        if (!(s2 >= 0.0)) throw InvalidSpec("KappaForm B: s2 must be >= 0");
        if (!(std::max(s1, s2) > 0.0))
            throw InvalidSpec("KappaForm B: max{s1, s2} must be positive");
        if (mes.has_atom_at(0.0))
            throw InvalidSpec("KappaForm B: nu(+0) = 0 forbids an atom at 0");
        if (integrability(mes, IntTest::DNuOver1PlusT) == Finiteness::Infinite)
            throw InvalidSpec("KappaForm B: int dnu/(1+t) must be finite");
        break;
    case KappaCase::C:
        if (!(s2 >= 0.0)) throw InvalidSpec("KappaForm C: s2 must be >= 0");
        if (mes.has_atom_at(0.0))
            throw InvalidSpec("KappaForm C: sigma(0+) = 0 forbids an atom at 0");
        if (integrability(mes, IntTest::DSigmaOverTNear0) == Finiteness::Finite)
            throw InvalidSpec("KappaForm C: requires int_0^1 dsigma/t = inf");
        if (integrability(mes, IntTest::DSigmaOver1PlusT2) == Finiteness::Infinite)
            throw InvalidSpec("KappaForm C: int dsigma/(1+t^2) must be finite");
        break;
    }
}

FunctionHandle FunctionHandle::phi_from_rep(PhiRep r) {
    r.validate();
    FunctionHandle h;
    h.kind_ = Kind::PhiOverZ;
    h.rep_ = std::move(r);
    return h;
}

FunctionHandle FunctionHandle::direct_from_rep(PhiRep r) {
    r.validate();
    FunctionHandle h;
    h.kind_ = Kind::PhiDirect;
    h.rep_ = std::move(r);
    return h;
}

FunctionHandle FunctionHandle::from_form(KappaForm f) {
    f.validate();
    FunctionHandle h;
    h.kind_ = Kind::Kappa;
    h.form_ = std::move(f);
    return h;
}

FunctionHandle FunctionHandle::psi() {
    FunctionHandle h;
    h.kind_ = Kind::Psi;
    return h;
}

std::vector<double> FunctionHandle::negative_poles() const {
    std::vector<double> out;
    if (rep_)
        for (const NegPole& p : rep_->poles) out.push_back(p.lambda);
    if (form_)
        for (const FormPole& p : form_->poles) out.push_back(p.alpha);
    std::sort(out.begin(), out.end(), std::greater<double>());
    return out;
}

double FunctionHandle::singular_distance(Complex z) const {
    double d = kInf;
    switch (kind_) {
    case Kind::PhiOverZ:
        d = std::min(d, std::abs(z));
        [[fallthrough]];
    case Kind::PhiDirect:
        for (const NegPole& p : rep_->poles)
            d = std::min(d, std::abs(z - Complex(p.lambda, 0.0)));
        d = std::min(d, rep_->measure.support_distance(z));
        break;
    case Kind::Kappa: {
        const KappaForm& f = *form_;
        if (f.kase != KappaCase::A || f.mes.has_atom_at(0.0))
            d = std::min(d, std::abs(z));
        for (const FormPole& p : f.poles)
            d = std::min(d, std::abs(z - Complex(p.alpha, 0.0)));
        d = std::min(d, f.mes.support_distance(z));
        break;
    }
    case Kind::Psi: {
        d = std::min(d, std::abs(z));
        const double r = std::abs(z);
        // poles z = k^2 pi^2
        const long k_big = std::lround(std::sqrt(std::max(r, 0.0)) / kPi);
        for (long k = std::max(1L, k_big - 1); k <= k_big + 1; ++k)
            d = std::min(d, std::abs(z - Complex(double(k) * double(k) * kPi * kPi, 0.0)));
        // poles z = 1/(k^2 pi^2), accumulating at the origin
        if (r > 0.0) {
            const long k_small = std::lround(1.0 / (kPi * std::sqrt(r)));
            for (long k = std::max(1L, k_small - 1); k <= k_small + 2; ++k)
                d = std::min(d, std::abs(z - Complex(1.0 / (double(k) * double(k) * kPi * kPi), 0.0)));
        }
        break;
    }
    }
    return d;
}

Complex eval_Phi(const PhiRep& rep, Complex z, const QuadConfig& cfg) {
    for (const NegPole& p : rep.poles) check_pole_distance(z, p.lambda);
    Complex s = rep.b * z + rep.a;
    for (const NegPole& p : rep.poles) s += p.sigma / (Complex(p.lambda, 0.0) - z);
    if (!rep.measure.empty()) s += integrate(rep.measure, Kernel::Herglotz, z, cfg);
    return s;
}

double eval_Phi_prime(const PhiRep& rep, double x, const QuadConfig& cfg) {
    const Complex z(x, 0.0);
    for (const NegPole& p : rep.poles) check_pole_distance(z, p.lambda);
    double s = rep.b;
    for (const NegPole& p : rep.poles) {
        const double d = p.lambda - x;
        s += p.sigma / (d * d);
    }
    if (!rep.measure.empty()) s += integrate(rep.measure, Kernel::CauchySq, z, cfg).real();
    return s;
}

namespace {

void check_origin(Complex z) {
    if (std::abs(z) < 1e-13)
        throw OriginSingularity("evaluation point at the origin");
}

Complex eval_form(const KappaForm& f, Complex z, const QuadConfig& cfg) {
    for (const FormPole& p : f.poles) check_pole_distance(z, p.alpha);
    Complex s = f.s0;
    for (const FormPole& p : f.poles) s += p.gamma / (Complex(p.alpha, 0.0) - z);
    switch (f.kase) {
    case KappaCase::A:
        if (!f.mes.empty()) s += integrate(f.mes, Kernel::Cauchy, z, cfg);
        break;
    case KappaCase::B:
        check_origin(z);
        s += f.s1 / z - f.s2 / (z * z);
        if (!f.mes.empty()) s += integrate(f.mes, Kernel::Cauchy, z, cfg);
        break;
    case KappaCase::C:
        check_origin(z);
        s += f.s1 / z - f.s2 / (z * z);
        if (!f.mes.empty()) s += integrate(f.mes, Kernel::Herglotz, z, cfg) / z;
        break;
    }
    return s;
}

Complex eval_form_prime(const KappaForm& f, Complex z, const QuadConfig& cfg) {
    for (const FormPole& p : f.poles) check_pole_distance(z, p.alpha);
    Complex s = 0.0;
    for (const FormPole& p : f.poles) {
        const Complex d = Complex(p.alpha, 0.0) - z;
        s += p.gamma / (d * d);
    }
    switch (f.kase) {
    case KappaCase::A:
        if (!f.mes.empty()) s += integrate(f.mes, Kernel::CauchySq, z, cfg);
        break;
    case KappaCase::B:
        check_origin(z);
        s += -f.s1 / (z * z) + 2.0 * f.s2 / (z * z * z);
        if (!f.mes.empty()) s += integrate(f.mes, Kernel::CauchySq, z, cfg);
        break;
    case KappaCase::C: {
        check_origin(z);
        s += -f.s1 / (z * z) + 2.0 * f.s2 / (z * z * z);
        if (!f.mes.empty()) {
            const Complex i0 = integrate(f.mes, Kernel::Herglotz, z, cfg);
            const Complex i1 = integrate(f.mes, Kernel::CauchySq, z, cfg);
            s += i1 / z - i0 / (z * z);
        }
        break;
    }
    }
    return s;
}

} // namespace

Complex eval_phi(const FunctionHandle& fun, Complex z, const QuadConfig& cfg) {
    switch (fun.kind()) {
    case FunctionHandle::Kind::PhiOverZ:
        check_origin(z);
        return eval_Phi(*fun.rep(), z, cfg) / z;
    case FunctionHandle::Kind::PhiDirect:
        return eval_Phi(*fun.rep(), z, cfg);
    case FunctionHandle::Kind::Kappa:
        return eval_form(*fun.form(), z, cfg);
    case FunctionHandle::Kind::Psi:
        return eval_counterexample_psi(z);
    }
    return 0.0;
}

double eval_phi_prime(const FunctionHandle& fun, double x, const QuadConfig& cfg) {
    const Complex z(x, 0.0);
    switch (fun.kind()) {
    case FunctionHandle::Kind::PhiOverZ: {
        check_origin(z);
        const double phi = eval_Phi(*fun.rep(), z, cfg).real();
        const double phip = eval_Phi_prime(*fun.rep(), x, cfg);
        return (phip * x - phi) / (x * x);
    }
    case FunctionHandle::Kind::PhiDirect:
        return eval_Phi_prime(*fun.rep(), x, cfg);
    case FunctionHandle::Kind::Kappa:
        return eval_form_prime(*fun.form(), z, cfg).real();
    case FunctionHandle::Kind::Psi:
        return eval_counterexample_psi_prime(z).real();
    }
    return 0.0;
}

ExtReal phi_limit_at_zero_minus(const PhiRep& rep, const QuadConfig& cfg) {
    if (integrability(rep.measure, IntTest::ZeroMoment) == Finiteness::Infinite)
        return ExtReal::infinite();
    double v = rep.a;
    for (const NegPole& p : rep.poles) v += p.sigma / p.lambda;
    if (!rep.measure.empty()) v += integrate(rep.measure, Kernel::ZeroMoment, 0.0, cfg).real();
    return ExtReal::finite(v);
}

std::vector<FunctionHandle> split_local(const PhiRep& rep,
                                        const std::vector<double>& lambdas) {
    rep.validate();
    if (lambdas.empty()) return {FunctionHandle::phi_from_rep(rep)};
    const double delta = delta_gap(lambdas);

    // every window centre must be a pole of the representation
    for (double l : lambdas) {
        const bool found = std::any_of(rep.poles.begin(), rep.poles.end(),
                                       [&](const NegPole& p) { return p.lambda == l; });
        if (!found)
            throw PreconditionFailed("window centre is not a pole of the representation");
    }

    std::vector<FunctionHandle> parts;
    PhiRep remainder;
    remainder.b = rep.b;
    remainder.a = rep.a;
    remainder.measure = rep.measure;

    std::vector<char> taken(rep.poles.size(), 0);
    for (double l : lambdas) {
        KappaForm local;
        local.kase = KappaCase::A;
        for (std::size_t i = 0; i < rep.poles.size(); ++i) {
            const NegPole& p = rep.poles[i];
            if (!taken[i] && p.lambda > l - delta && p.lambda < l + delta) {
                // (1/z) sigma/(lambda-z) = (sigma/lambda)/(lambda-z) + sigma/(lambda z)
                local.poles.push_back({p.lambda, p.sigma / p.lambda});
                remainder.a += p.sigma / p.lambda;
                taken[i] = 1;
            }
        }
        parts.push_back(FunctionHandle::from_form(std::move(local)));
    }
    for (std::size_t i = 0; i < rep.poles.size(); ++i)
        if (!taken[i]) remainder.poles.push_back(rep.poles[i]);

    std::vector<FunctionHandle> out;
    out.push_back(FunctionHandle::phi_from_rep(std::move(remainder)));
    for (FunctionHandle& h : parts) out.push_back(std::move(h));
    return out;
}

PhiRep regularize_eps(const PhiRep& rep, double eps, const QuadConfig& cfg) {
    rep.validate();
    if (!(eps > 0.0)) throw PreconditionFailed("regularize_eps: eps must be positive");
    if (eps >= rep.nearest_negative_singularity())
        throw PreconditionFailed("regularize_eps: eps must stay below the nearest pole");

    const double phi_at = eval_Phi(rep, Complex(-eps, 0.0), cfg).real();
    if (!(phi_at > 0.0))
        throw PreconditionFailed("regularize_eps: requires Phi(-eps) > 0");

    PhiRep out;
    out.b = rep.b;
    out.poles.push_back({-eps, eps * phi_at});

    double a_new = phi_at;
    for (const NegPole& p : rep.poles) {
        const double w = p.sigma * p.lambda / (p.lambda + eps); // > 0 since eps < |lambda|
        out.poles.push_back({p.lambda, w});
        a_new -= w / p.lambda;
    }
    if (!rep.measure.empty()) {
        // int dsigma / ((t+eps)(1+t^2)), exponent-decidably finite
        StieltjesMeasure damped = rep.measure;
        {
            std::vector<Atom> as;
            for (const Atom& at : damped.atoms()) as.push_back({at.t, at.w / (at.t + eps)});
            std::vector<DensityPiece> ps = damped.pieces();
            for (DensityPiece& p : ps) p.divisors.push_back(eps);
            damped = StieltjesMeasure(std::move(as), std::move(ps));
        }
        a_new -= integrate(damped, Kernel::InvQuad, 0.0, cfg).real();
        out.measure = rep.measure.reweighted_t_over_t_plus(eps);
    }
    out.a = a_new;
    out.validate();
    return out;
}

Complex complex_cot(Complex w) {
    if (w.imag() < 0.0) return std::conj(complex_cot(std::conj(w)));
    if (w.imag() > 20.0) {
        // cot w = i (q+1)/(q-1), q = e^{2iw}; |q| << 1 here
        const Complex q = std::exp(Complex(0.0, 2.0) * w);
        return Complex(0.0, 1.0) * (q + 1.0) / (q - 1.0);
    }
    return std::cos(w) / std::sin(w);
}

namespace {

void check_psi_singularities(Complex z, Complex w_small, Complex w_big) {
    if (std::abs(z) < 1e-18)
        throw OriginSingularity("psi is singular at the origin");
    for (Complex w : {w_small, w_big}) {
        const long k = std::lround(w.real() / kPi);
        if (k >= 0 && std::abs(w - Complex(double(k) * kPi, 0.0)) < 1e-10)
            throw NearSingularity("psi evaluated within 1e-10 of a cotangent pole");
    }
}

} // namespace

Complex eval_counterexample_psi(Complex z) {
    const Complex s = std::sqrt(z); // principal branch; psi is even in sqrt(z)
    const Complex w1 = 1.0 / s;
    const Complex w2 = s;
    check_psi_singularities(z, w2, w1);
    return (w1 * complex_cot(w1) - w2 * complex_cot(w2)) / z;
}

Complex eval_counterexample_psi_prime(Complex z) {
    const Complex s = std::sqrt(z);
    const Complex w1 = 1.0 / s;
    const Complex w2 = s;
    check_psi_singularities(z, w2, w1);
    const Complex c1 = complex_cot(w1);
    const Complex c2 = complex_cot(w2);
    // d/dw (w cot w) = cot w - w (1 + cot^2 w)
    const Complex g1p = c1 - w1 * (1.0 + c1 * c1);
    const Complex g2p = c2 - w2 * (1.0 + c2 * c2);
    const Complex t = w1 * c1 - w2 * c2; // z psi(z)
    const Complex tp = g1p * (-0.5) / (z * s) + g2p * 0.5 / s;
    return tp / z - t / (z * z);
}

} // namespace nk
