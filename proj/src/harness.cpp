#include "nkappa/harness.hpp"
#include "nkappa/errors.hpp"
#include "nkappa/json_io.hpp"
#include "nkappa/witness.hpp"

#include <cmath>

namespace nk {

void GenConfig::validate() const {
    if (!(im_min > 0.0) || !(im_max > im_min))
        throw InvalidSpec("GenConfig: point box must lie strictly in C+");
    if (!(re_max > 0.0) || trials == 0)
        throw InvalidSpec("GenConfig: caps must be positive");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double uni(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::size_t uni_int(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(std::mt19937_64& rng, double p) { return uni(rng, 0.0, 1.0) < p; }

} // namespace

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(trial + 0x51ed2701)));
}

StieltjesMeasure gen_measure(std::mt19937_64& rng, const GenConfig& cfg,
                             bool nu_tail, bool finite_zero_moment) {
    std::vector<Atom> atoms;
    const std::size_t n_atoms = uni_int(rng, 0, static_cast<std::size_t>(cfg.max_atoms));
    for (std::size_t i = 0; i < n_atoms; ++i)
        atoms.push_back({uni(rng, 0.05, 10.0), uni(rng, 0.05, 10.0)});

    std::vector<DensityPiece> pieces;
    const std::size_t n_pieces = uni_int(rng, 0, static_cast<std::size_t>(cfg.max_pieces));
    double cursor = 0.0;
    for (std::size_t i = 0; i < n_pieces; ++i) {
        DensityPiece p;
        p.lo = (i == 0 && coin(rng, 0.35)) ? 0.0 : cursor + uni(rng, 0.05, 2.0);
        p.anchor = p.lo;
        p.scale = uni(rng, 0.05, 10.0);
        const bool at_zero = (p.lo == 0.0);
        p.exp_lo = (at_zero && finite_zero_moment) ? uni(rng, 0.1, 2.0)
                                                   : uni(rng, -0.85, 2.0);
        if (i + 1 == n_pieces && coin(rng, 0.3)) {
            p.hi = kInf;
            p.has_tail = true;
            p.exp_inf = nu_tail ? uni(rng, -1.9, -0.15) : uni(rng, -1.9, 0.85);
            pieces.push_back(std::move(p));
            break;
        }
        p.hi = p.lo + uni(rng, 0.2, 4.0);
        cursor = p.hi;
        pieces.push_back(std::move(p));
    }
    return StieltjesMeasure(std::move(atoms), std::move(pieces));
}

PhiRep gen_phi_rep(std::mt19937_64& rng, const GenConfig& cfg) {
    PhiRep rep;
    rep.b = coin(rng, 0.5) ? 0.0 : uni(rng, 0.0, 2.0);
    rep.a = uni(rng, -5.0, 5.0);
    const std::size_t n_poles = uni_int(rng, 0, static_cast<std::size_t>(cfg.max_poles));
    for (std::size_t i = 0; i < n_poles; ++i) {
        double lam = 0.0;
        for (int tries = 0; tries < 100; ++tries) {
            lam = uni(rng, -10.0, -0.1);
            bool clear = true;
            for (const NegPole& p : rep.poles)
                if (std::fabs(p.lambda - lam) < 0.05) clear = false;
            if (clear) break;
        }
        rep.poles.push_back({lam, uni(rng, 0.05, 10.0)});
    }
    rep.measure = gen_measure(rng, cfg, false, false);
    if (rep.b == 0.0 && rep.poles.empty() && rep.measure.empty()) rep.b = 1.0;
    rep.validate();
    return rep;
}

KappaForm gen_case_a_form(std::mt19937_64& rng, const GenConfig& cfg) {
    KappaForm f;
    f.kase = KappaCase::A;
    f.s0 = coin(rng, 0.5) ? 0.0 : uni(rng, 0.0, 3.0);
    const std::size_t n_poles = uni_int(rng, 0, static_cast<std::size_t>(cfg.max_poles));
    for (std::size_t i = 0; i < n_poles; ++i) {
        double alpha = 0.0;
        for (int tries = 0; tries < 100; ++tries) {
            alpha = uni(rng, -10.0, -0.1);
            bool clear = true;
            for (const FormPole& p : f.poles)
                if (std::fabs(p.alpha - alpha) < 0.05) clear = false;
            if (clear) break;
        }
        f.poles.push_back({alpha, -uni(rng, 0.05, 10.0)});
    }
    StieltjesMeasure nu = gen_measure(rng, cfg, true, false);
    if (coin(rng, 0.15)) {
        std::vector<Atom> as = nu.atoms();
        as.push_back({0.0, uni(rng, 0.1, 2.0)});
        nu = StieltjesMeasure(std::move(as), nu.pieces());
    }
    f.mes = std::move(nu);
    f.validate();
    return f;
}

PointSet gen_points(std::mt19937_64& rng, const FunctionHandle& fun,
                    std::size_t count, const GenConfig& cfg) {
    PointSet pts;
    for (std::size_t i = 0; i < count; ++i) {
        bool placed = false;
        for (int tries = 0; tries < 2000 && !placed; ++tries) {
            const Complex z(uni(rng, -cfg.re_max, cfg.re_max),
                            uni(rng, cfg.im_min, cfg.im_max));
            if (fun.singular_distance(z) < 1e-3) continue;
            bool clear = true;
            for (const Complex& w : pts.points)
                if (std::abs(z - w) < 1e-3) clear = false;
            if (!clear) continue;
            pts.points.push_back(z);
            placed = true;
        }
        if (!placed)
            throw InternalInconsistency("point sampler failed to place a point");
    }
    return pts;
}

namespace {

std::string replay_blob(const FunctionHandle& fun, const PointSet* pts) {
    ojson j = ojson::object();
    j["function"] = function_to_json(fun);
    if (pts) j["points"] = points_to_json(*pts);
    return dump_json(j, 0);
}

std::size_t kappa_of(const FunctionHandle& fun, const QuadConfig& qc) {
    if (fun.kind() == FunctionHandle::Kind::PhiDirect)
        return 0; // an N-function: nonnegative Pick forms
    return classify_handle(fun, qc).kappa;
}

PhiRep rep_of(const FunctionHandle& fun, const QuadConfig& qc) {
    return theorem_rep_of(fun, qc);
}

void run_upper_bound(const GenConfig& cfg, const FunctionHandle* fixed, Report& rep) {
    const QuadConfig qc;
    std::optional<std::size_t> fixed_kappa;
    if (fixed) fixed_kappa = kappa_of(*fixed, qc);

    for (std::size_t t = 0; t < cfg.trials; ++t) {
        auto rng = trial_rng(cfg.seed, t);
        FunctionHandle fun = fixed ? *fixed
                                   : FunctionHandle::phi_from_rep(gen_phi_rep(rng, cfg));
        const std::size_t kappa = fixed ? *fixed_kappa : classify(*fun.rep(), qc).kappa;
        const std::size_t k = uni_int(rng, 1, kappa + 4);
        const PointSet pts = gen_points(rng, fun, k, cfg);
        const int n_minus = negative_squares(fun, pts, {}, qc);
        if (n_minus <= static_cast<int>(kappa)) {
            ++rep.passes;
        } else {
            rep.failures.push_back(
                {t,
                 "n_minus = " + std::to_string(n_minus) + " exceeds kappa = " +
                     std::to_string(kappa),
                 replay_blob(fun, &pts)});
        }
    }
}

void run_exactness(const GenConfig& cfg, const FunctionHandle* fixed, Report& rep) {
    const QuadConfig qc;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        auto rng = trial_rng(cfg.seed, t);
        FunctionHandle fun = fixed ? *fixed
                                   : FunctionHandle::phi_from_rep(gen_phi_rep(rng, cfg));
        try {
            std::size_t kappa = 0;
            WitnessResult res;
            if (fun.kind() == FunctionHandle::Kind::Psi) {
                kappa = 1;
                res = witness_boundary(fun, kappa, qc);
            } else {
                const PhiRep r = rep_of(fun, qc);
                const Classification cls = classify(r, qc);
                kappa = cls.kappa;
                res = (cls.certificate == WitnessKind::Interior)
                          ? witness_interior(r, kappa, qc)
                          : witness_boundary(r, kappa, qc);
            }
            if (res.inertia_result.n_minus == static_cast<int>(kappa)) {
                ++rep.passes;
            } else {
                rep.failures.push_back(
                    {t, "witness returned n_minus != kappa", replay_blob(fun, nullptr)});
            }
        } catch (const DomainError& e) {
            rep.failures.push_back(
                {t, std::string("witness failed: ") + e.what(), replay_blob(fun, nullptr)});
        }
    }
}

void run_monotone(const GenConfig& cfg, const FunctionHandle* fixed, Report& rep) {
    const QuadConfig qc;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        auto rng = trial_rng(cfg.seed, t);
        const PhiRep r = fixed ? rep_of(*fixed, qc) : gen_phi_rep(rng, cfg);
        const FunctionHandle fun = FunctionHandle::phi_from_rep(r);

        // gap intervals of the negative axis plus a window right of the support
        std::vector<std::pair<double, double>> gaps;
        std::vector<double> lams;
        for (const NegPole& p : r.poles_sorted()) lams.push_back(p.lambda);
        if (lams.empty()) {
            gaps.push_back({-10.0, 0.0});
        } else {
            gaps.push_back({lams.front(), 0.0});
            for (std::size_t i = 0; i + 1 < lams.size(); ++i)
                gaps.push_back({lams[i + 1], lams[i]});
            gaps.push_back({lams.back() - 10.0, lams.back()});
        }
        const double smax = r.measure.support_supremum();
        if (smax < kInf) {
            const double base = std::max(smax, 0.0);
            gaps.push_back({base + 0.1, base + 10.0});
        }

        bool good = true;
        std::string detail;
        for (const auto& [glo, ghi] : gaps) {
            const double len = ghi - glo;
            const double margin = 0.02 * len;
            const double minsep = len / 50.0;
            for (int s = 0; s < 20 && good; ++s) {
                const double x1 = uni(rng, glo + margin, ghi - margin - minsep);
                const double x2 = uni(rng, x1 + minsep, ghi - margin);
                const double f1 = eval_Phi(r, Complex(x1, 0.0), qc).real();
                const double f2 = eval_Phi(r, Complex(x2, 0.0), qc).real();
                if (!(f1 < f2)) {
                    good = false;
                    detail = "Phi not increasing on (" + std::to_string(glo) + ", " +
                             std::to_string(ghi) + ")";
                }
                const double d1 = eval_Phi_prime(r, x1, qc);
                if (d1 < -1e-12) {
                    good = false;
                    detail = "Phi' negative at x = " + std::to_string(x1);
                }
            }
            if (!good) break;
        }
        if (good)
            ++rep.passes;
        else
            rep.failures.push_back({t, detail, replay_blob(fun, nullptr)});
    }
}

void run_round_trip(const GenConfig& cfg, const FunctionHandle* fixed, Report& rep) {
    const QuadConfig qc;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        auto rng = trial_rng(cfg.seed, t);
        bool good = true;
        std::string detail;
        FunctionHandle shown = fixed ? *fixed : FunctionHandle::psi();

        try {
            // direction 1: case-A form -> Phi data
            const KappaForm formA =
                (fixed && fixed->form()) ? *fixed->form() : gen_case_a_form(rng, cfg);
            const PhiRep imageA = to_theorem_form(formA, qc);
            const FunctionHandle hA = FunctionHandle::from_form(formA);
            shown = hA;
            const PointSet ptsA = gen_points(rng, hA, 100, cfg);
            for (const Complex& z : ptsA.points) {
                const Complex lhs = eval_phi(hA, z, qc);
                const Complex rhs = eval_Phi(imageA, z, qc) / z;
                if (std::abs(lhs - rhs) > 1e-9 * (1.0 + std::abs(lhs))) {
                    good = false;
                    detail = "form -> rep mismatch";
                    break;
                }
            }

            // direction 2: Phi data -> its (A)/(B)/(C) presentation
            if (good) {
                const PhiRep r = (fixed && fixed->rep()) ? *fixed->rep()
                                                         : gen_phi_rep(rng, cfg);
                const Classification cls = classify(r, qc);
                const KappaForm back = from_theorem_form(r, cls, qc);
                const FunctionHandle hB = FunctionHandle::from_form(back);
                shown = FunctionHandle::phi_from_rep(r);
                const PointSet ptsB = gen_points(rng, shown, 100, cfg);
                for (const Complex& z : ptsB.points) {
                    const Complex lhs = eval_phi(hB, z, qc);
                    const Complex rhs = eval_Phi(r, z, qc) / z;
                    if (std::abs(lhs - rhs) > 1e-9 * (1.0 + std::abs(lhs))) {
                        good = false;
                        detail = "rep -> form mismatch (case " +
                                 std::string(case_name(cls.case_label)) + ")";
                        break;
                    }
                }
            }
        } catch (const DomainError& e) {
            good = false;
            detail = std::string("conversion failed: ") + e.what();
        }

        if (good)
            ++rep.passes;
        else
            rep.failures.push_back({t, detail, replay_blob(shown, nullptr)});
    }
}

void run_regularize(const GenConfig& cfg, const FunctionHandle* fixed, Report& rep) {
    const QuadConfig qc;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        auto rng = trial_rng(cfg.seed, t);
        PhiRep r;
        if (fixed) {
            r = rep_of(*fixed, qc);
        } else {
            // a FORM_1 rep with a finite positive limit, built by solving for a
            r = gen_phi_rep(rng, cfg);
            std::vector<Atom> as;
            for (const Atom& a : r.measure.atoms())
                if (a.t != 0.0) as.push_back(a);
            std::vector<DensityPiece> ps;
            for (const DensityPiece& p : r.measure.pieces()) {
                DensityPiece q = p;
                if (q.lo == 0.0 && q.exponent_at_lo() <= 0.0) q.exp_lo = 0.5;
                ps.push_back(q);
            }
            r.measure = StieltjesMeasure(std::move(as), std::move(ps));
            double base = 0.0;
            for (const NegPole& p : r.poles) base += p.sigma / p.lambda;
            if (!r.measure.empty())
                base += integrate(r.measure, Kernel::ZeroMoment, 0.0, qc).real();
            r.a = uni(rng, 0.1, 3.0) - base;
            r.validate();
        }
        const FunctionHandle shown = FunctionHandle::phi_from_rep(r);

        try {
            const Classification cls = classify(r, qc);
            if (cls.theorem_form != TheoremForm::Form1 || cls.phi_zero_minus.inf)
                throw PreconditionFailed("suite requires a finite FORM_1 input");

            // largest eps with Phi(-eps) > 0, found on the last gap interval
            double hi = std::min(1.0, 0.9 * r.nearest_negative_singularity());
            double eps0 = hi;
            if (!(eval_Phi(r, Complex(-hi, 0.0), qc).real() > 0.0)) {
                double lo = 1e-12;
                for (int i = 0; i < 80; ++i) {
                    const double mid = 0.5 * (lo + hi);
                    if (eval_Phi(r, Complex(-mid, 0.0), qc).real() > 0.0)
                        lo = mid;
                    else
                        hi = mid;
                }
                eps0 = lo;
            }
            const PhiRep reg = regularize_eps(r, 0.5 * eps0, qc);
            const ExtReal lim = phi_limit_at_zero_minus(reg, qc);
            const Classification cls2 = classify(reg, qc);
            const bool ok = !lim.inf && lim.v <= 1e-9 &&
                            cls2.theorem_form == TheoremForm::Form2 &&
                            cls2.kappa == cls.kappa;
            if (ok) {
                ++rep.passes;
            } else {
                rep.failures.push_back(
                    {t, "regularized rep missed the FORM_2/kappa contract",
                     replay_blob(shown, nullptr)});
            }
        } catch (const DomainError& e) {
            rep.failures.push_back(
                {t, std::string("regularization failed: ") + e.what(),
                 replay_blob(shown, nullptr)});
        }
    }
}

} // namespace

Report run_suite(const GenConfig& cfg, SuiteId suite, const FunctionHandle* fixed) {
    cfg.validate();
    Report rep;
    rep.suite = suite;
    rep.seed = cfg.seed;
    rep.trials = cfg.trials;
    switch (suite) {
    case SuiteId::UpperBound: run_upper_bound(cfg, fixed, rep); break;
    case SuiteId::Exactness: run_exactness(cfg, fixed, rep); break;
    case SuiteId::Monotone: run_monotone(cfg, fixed, rep); break;
    case SuiteId::RoundTrip: run_round_trip(cfg, fixed, rep); break;
    case SuiteId::Regularize: run_regularize(cfg, fixed, rep); break;
    }
    return rep;
}

const char* suite_name(SuiteId s) {
    switch (s) {
    case SuiteId::UpperBound: return "upper_bound";
    case SuiteId::Exactness: return "exactness";
    case SuiteId::Monotone: return "monotone";
    case SuiteId::RoundTrip: return "roundtrip";
    case SuiteId::Regularize: return "regularize";
    }
    return "?";
}

std::optional<SuiteId> suite_from_name(const std::string& name) {
    for (SuiteId s : {SuiteId::UpperBound, SuiteId::Exactness, SuiteId::Monotone,
                      SuiteId::RoundTrip, SuiteId::Regularize})
        if (name == suite_name(s)) return s;
    return std::nullopt;
}

} // namespace nk
