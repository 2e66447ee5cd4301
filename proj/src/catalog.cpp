#include "nkappa/catalog.hpp"

namespace nk {

namespace {

std::vector<CatalogEntry> build_catalog() {
    std::vector<CatalogEntry> out;

    {
        CatalogEntry e;
        e.name = "psi";
        e.description = "(1/z)((1/sqrt z) cot(1/sqrt z) - sqrt z cot(sqrt z))";
        e.handle = FunctionHandle::psi();
        e.kappa = 1;
        e.form = TheoremForm::Form1;
        e.case_label = KappaCase::C;
        e.phi_zero_minus = ExtReal::infinite();
        out.push_back(std::move(e));
    }
    {
        CatalogEntry e;
        e.name = "one_pole";
        e.description = "Phi(z) = 1 + 2/(-1-z), one negative pole";
        PhiRep rep;
        rep.a = 1.0;
        rep.poles.push_back({-1.0, 2.0});
        e.handle = FunctionHandle::phi_from_rep(std::move(rep));
        e.kappa = 1;
        e.form = TheoremForm::Form2;
        e.case_label = KappaCase::A;
        e.phi_zero_minus = ExtReal::finite(-1.0);
        out.push_back(std::move(e));
    }
    {
        CatalogEntry e;
        e.name = "two_pole";
        e.description = "Phi(z) = 1/(-1-z) + 3/(-3-z), two negative poles";
        PhiRep rep;
        rep.poles.push_back({-1.0, 1.0});
        rep.poles.push_back({-3.0, 3.0});
        e.handle = FunctionHandle::phi_from_rep(std::move(rep));
        e.kappa = 2;
        e.form = TheoremForm::Form2;
        e.case_label = KappaCase::A;
        e.phi_zero_minus = ExtReal::finite(-2.0);
        out.push_back(std::move(e));
    }
    {
        CatalogEntry e;
        e.name = "inv_z";
        e.description = "phi(z) = 1/z  (Phi identically 1)";
        PhiRep rep;
        rep.a = 1.0;
        e.handle = FunctionHandle::phi_from_rep(std::move(rep));
        e.kappa = 1;
        e.form = TheoremForm::Form1;
        e.case_label = KappaCase::B;
        e.phi_zero_minus = ExtReal::finite(1.0);
        out.push_back(std::move(e));
    }
    {
        CatalogEntry e;
        e.name = "sqrt_divergent";
        e.description = "Phi from the density t^{-1/2} on (0,1); int_0^1 dsigma/t = inf";
        PhiRep rep;
        DensityPiece p;
        p.lo = 0.0;
        p.hi = 1.0;
        p.scale = 1.0;
        p.exp_lo = -0.5;
        rep.measure = StieltjesMeasure({}, {p});
        e.handle = FunctionHandle::phi_from_rep(std::move(rep));
        e.kappa = 1;
        e.form = TheoremForm::Form1;
        e.case_label = KappaCase::C;
        e.phi_zero_minus = ExtReal::infinite();
        out.push_back(std::move(e));
    }
    {
        CatalogEntry e;
        e.name = "stieltjes_atom";
        e.description = "phi(z) = 1/(1-z), Stieltjes-class control with kappa = 0";
        KappaForm f;
        f.kase = KappaCase::A;
        f.mes = StieltjesMeasure({{1.0, 1.0}}, {});
        e.handle = FunctionHandle::from_form(std::move(f));
        e.kappa = 0;
        e.form = TheoremForm::Form2;
        e.case_label = KappaCase::A;
        e.phi_zero_minus = ExtReal::finite(0.0);
        out.push_back(std::move(e));
    }
    return out;
}

} // namespace

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = build_catalog();
    return entries;
}

const CatalogEntry* catalog_find(const std::string& name) {
    for (const CatalogEntry& e : catalog())
        if (e.name == name) return &e;
    return nullptr;
}

} // namespace nk
