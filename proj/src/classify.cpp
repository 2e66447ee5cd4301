#include "nkappa/classify.hpp"
#include "nkappa/errors.hpp"

#include <cmath>

namespace nk {

namespace {

StieltjesMeasure without_zero_atom(const StieltjesMeasure& m, double* w0 = nullptr) {
    std::vector<Atom> as;
    double w = 0.0;
    for (const Atom& a : m.atoms()) {
        if (a.t == 0.0)
            w += a.w;
        else
            as.push_back(a);
    }
    if (w0) *w0 = w;
    return StieltjesMeasure(std::move(as), m.pieces());
}

StieltjesMeasure with_zero_atom(const StieltjesMeasure& m, double w) {
    std::vector<Atom> as = m.atoms();
    if (w > 0.0) as.push_back({0.0, w});
    return StieltjesMeasure(std::move(as), m.pieces());
}

// zero band for the Phi(0-) sign decision; the limit value 0 itself is
// produced exactly by regularization up to quadrature noise
double sign_band(const PhiRep& rep, const ExtReal& limit) {
    double scale = 1.0 + std::fabs(rep.a);
    for (const NegPole& p : rep.poles) scale += std::fabs(p.sigma / p.lambda);
    if (!limit.inf) {
        double zm = limit.v - rep.a;
        for (const NegPole& p : rep.poles) zm -= p.sigma / p.lambda;
        scale += std::max(0.0, zm);
    }
    return 1e-9 * scale;
}

} // namespace

Classification classify(const PhiRep& rep, const QuadConfig& cfg) {
    rep.validate();
    Classification c;
    c.phi_zero_minus = phi_limit_at_zero_minus(rep, cfg);
    const std::size_t p = rep.poles.size();

    const bool positive_limit =
        c.phi_zero_minus.inf || c.phi_zero_minus.v > sign_band(rep, c.phi_zero_minus);

    if (!positive_limit) {
        c.kappa = p;
        c.theorem_form = TheoremForm::Form2;
        c.case_label = KappaCase::A;
        c.certificate = WitnessKind::Interior;
        return c;
    }

    c.kappa = p + 1;
    c.theorem_form = TheoremForm::Form1;
    c.certificate = WitnessKind::Boundary;
    // the atom at 0 (if any) moves to the s2 coefficient; the case label is
    // decided by the 1/t-integrability of what remains
    const StieltjesMeasure stripped = without_zero_atom(rep.measure);
    c.case_label =
        (integrability(stripped, IntTest::DSigmaOverTNear0) == Finiteness::Infinite)
            ? KappaCase::C
            : KappaCase::B;
    return c;
}

PhiRep to_theorem_form(const KappaForm& form, const QuadConfig& cfg) {
    form.validate();
    PhiRep rep;
    rep.b = form.s0;

    double a = 0.0;
    for (const FormPole& p : form.poles) {
        a -= p.gamma;
        rep.poles.push_back({p.alpha, p.gamma * p.alpha});
    }

    switch (form.kase) {
    case KappaCase::A:
    case KappaCase::B: {
        // z/(t-z) = t/(t-z) - 1 recentred against the Herglotz kernel:
        // int z dnu/(t-z) = int herglotz d(t nu) - int dnu/(1+t^2)
        if (!form.mes.empty()) {
            a -= integrate(form.mes, Kernel::InvQuad, 0.0, cfg).real();
            rep.measure = form.mes.multiplied_by_t();
        }
        if (form.kase == KappaCase::B) {
            a += form.s1;
            rep.measure = with_zero_atom(rep.measure, form.s2);
        }
        break;
    }
    case KappaCase::C: {
        a += form.s1;
        rep.measure = with_zero_atom(form.mes, form.s2);
        break;
    }
    }
    rep.a = a;

    if (integrability(rep.measure, IntTest::DSigmaOver1PlusT2) == Finiteness::Infinite)
        throw NonIntegrableTail("converted measure violates int dsigma/(1+t^2) < inf");
    rep.validate();
    return rep;
}

namespace {

void check_round_trip(const PhiRep& rep, const KappaForm& form, const QuadConfig& cfg) {
    const FunctionHandle h = FunctionHandle::from_form(form);
    for (Complex z : {Complex(0.3, 0.9), Complex(-1.13, 1.7), Complex(2.2, 0.6)}) {
        const Complex lhs = eval_Phi(rep, z, cfg) / z;
        const Complex rhs = eval_phi(h, z, cfg);
        if (std::abs(lhs - rhs) > 1e-9 * (1.0 + std::abs(lhs)))
            throw InternalInconsistency("from_theorem_form round-trip mismatch");
    }
}

} // namespace

KappaForm from_theorem_form(const PhiRep& rep, const Classification& cls,
                            const QuadConfig& cfg) {
    rep.validate();
    KappaForm form;
    form.kase = cls.case_label;
    form.s0 = rep.b;
    for (const NegPole& p : rep.poles)
        form.poles.push_back({p.lambda, p.sigma / p.lambda});

    double w0 = 0.0;
    const StieltjesMeasure stripped = without_zero_atom(rep.measure, &w0);

    switch (cls.case_label) {
    case KappaCase::A: {
        // phi = b + Phi(0-)/z + sum (sigma/lambda)/(lambda-z) + int dsigma~/(t-z)
        const double limit = cls.phi_zero_minus.value(); // <= 0 in case A
        StieltjesMeasure nu =
            rep.measure.empty() ? StieltjesMeasure() : rep.measure.divided_by_t();
        form.mes = with_zero_atom(nu, -limit);
        break;
    }
    case KappaCase::B: {
        form.s2 = w0;
        double s1 = rep.a;
        for (const NegPole& p : rep.poles) s1 += p.sigma / p.lambda;
        if (!stripped.empty())
            s1 += integrate(stripped, Kernel::ZeroMoment, 0.0, cfg).real();
        form.s1 = s1;
        form.mes = stripped.empty() ? StieltjesMeasure() : stripped.divided_by_t();
        break;
    }
    case KappaCase::C: {
        form.s2 = w0;
        double s1 = rep.a;
        for (const NegPole& p : rep.poles) s1 += p.sigma / p.lambda;
        form.s1 = s1;
        form.mes = stripped;
        break;
    }
    }
    form.validate();
    check_round_trip(rep, form, cfg);
    return form;
}

PhiRep theorem_rep_of(const FunctionHandle& fun, const QuadConfig& cfg) {
    switch (fun.kind()) {
    case FunctionHandle::Kind::PhiOverZ:
        return *fun.rep();
    case FunctionHandle::Kind::Kappa:
        return to_theorem_form(*fun.form(), cfg);
    case FunctionHandle::Kind::Psi:
        throw PreconditionFailed("psi has no finite representation data");
    case FunctionHandle::Kind::PhiDirect:
        throw PreconditionFailed("direct Phi handles are not phi-type functions");
    }
    throw PreconditionFailed("unreachable handle kind");
}

Classification classify_handle(const FunctionHandle& fun, const QuadConfig& cfg) {
    if (fun.kind() == FunctionHandle::Kind::Psi) {
        Classification c;
        c.kappa = 1;
        c.theorem_form = TheoremForm::Form1;
        c.case_label = KappaCase::C;
        c.phi_zero_minus = ExtReal::infinite();
        c.certificate = WitnessKind::Boundary;
        return c;
    }
    return classify(theorem_rep_of(fun, cfg), cfg);
}

} // namespace nk
