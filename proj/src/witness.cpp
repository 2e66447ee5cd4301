#include "nkappa/witness.hpp"
#include "nkappa/classify.hpp"
#include "nkappa/errors.hpp"

#include <cmath>

namespace nk {

double delta_gap(const std::vector<double>& lambdas) {
    if (lambdas.empty())
        throw InvalidWindows("window plan requires at least one point");
    double m = -lambdas.front();
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (!(lambdas[i] < 0.0))
            throw InvalidWindows("window centres must be negative");
        if (i + 1 < lambdas.size()) {
            const double gap = lambdas[i] - lambdas[i + 1];
            if (!(gap > 0.0))
                throw InvalidWindows("window centres must be strictly decreasing");
            m = std::min(m, gap);
        }
    }
    const double delta = m / 3.0;
    if (!(delta > 0.0)) throw InvalidWindows("window separation is not positive");
    return delta;
}

WindowPlan make_window_plan(const std::vector<double>& lambdas) {
    return {lambdas, delta_gap(lambdas)};
}

double rho_sq(const PhiRep& rep, std::size_t n, double eta, const WindowPlan& plan,
              const QuadConfig& cfg) {
    if (n < 1 || n > plan.lambdas.size())
        throw PreconditionFailed("rho_sq window index out of range");
    if (!(eta > 0.0)) throw PreconditionFailed("rho_sq requires eta > 0");
    const double lam = plan.lambdas[n - 1];
    const double lo = lam - plan.delta;
    const double hi = lam + plan.delta;

    double total = 0.0;
    for (const NegPole& p : rep.poles) {
        if (p.lambda > lo && p.lambda < hi) {
            const double dx = p.lambda - lam;
            total += (p.sigma / std::fabs(p.lambda)) / (dx * dx + eta * eta);
        }
    }
    if (!rep.measure.empty()) {
        total += integrate_weight(
            rep.measure, lo, hi,
            [&](double t) {
                const double dx = t - lam;
                return 1.0 / (std::fabs(t) * (dx * dx + eta * eta));
            },
            cfg);
    }
    if (total == 0.0) throw EmptyWindow("window carries no mass");
    return total;
}

WitnessResult witness_interior(const PhiRep& rep, std::size_t kappa,
                               const QuadConfig& cfg) {
    rep.validate();
    WitnessResult res;
    if (kappa == 0) {
        res.inertia_result.tolerance_used = 1e-8;
        return res;
    }
    const std::vector<NegPole> sorted = rep.poles_sorted();
    if (sorted.size() < kappa)
        throw PreconditionFailed("interior witness needs >= kappa negative poles");

    std::vector<double> lambdas;
    for (std::size_t i = 0; i < kappa; ++i) lambdas.push_back(sorted[i].lambda);
    const WindowPlan plan = make_window_plan(lambdas);
    const FunctionHandle handle = FunctionHandle::phi_from_rep(rep);

    for (int j = 0; j <= 60; ++j) {
        const double eta = plan.delta * std::ldexp(1.0, -j);
        PointSet pts;
        for (double lam : lambdas) pts.points.push_back(Complex(lam, eta));

        const PickMatrix p = pick_matrix(handle, pts, cfg);
        const double tol = default_inertia_tol(p.entries);
        const Eigen::VectorXd ev = pick_eigenvalues(p.entries);

        Inertia in;
        in.tolerance_used = tol;
        for (Eigen::Index i = 0; i < ev.size(); ++i) {
            if (ev(i) < -tol)
                ++in.n_minus;
            else if (ev(i) > tol)
                ++in.n_plus;
            else
                ++in.n_zero;
        }

        if (in.n_minus == static_cast<int>(kappa) && ev(0) <= -10.0 * tol) {
            res.points = pts;
            res.eta = eta;
            res.inertia_result = in;
            CoefficientVector xi;
            for (std::size_t n = 1; n <= kappa; ++n) {
                const double r = std::sqrt(rho_sq(rep, n, eta, plan, cfg));
                res.rho.push_back(r);
                xi.xi.push_back(Complex(1.0 / r, 0.0));
            }
            res.scaled_form = form_value(p, xi);
            return res;
        }
    }
    throw WitnessNotFound("eta grid exhausted without kappa negative squares");
}

namespace {

ExtReal boundary_limit(const FunctionHandle& fun, const QuadConfig& cfg) {
    switch (fun.kind()) {
    case FunctionHandle::Kind::PhiOverZ:
        return phi_limit_at_zero_minus(*fun.rep(), cfg);
    case FunctionHandle::Kind::Kappa:
        return phi_limit_at_zero_minus(to_theorem_form(*fun.form(), cfg), cfg);
    case FunctionHandle::Kind::Psi:
        return ExtReal::infinite();
    case FunctionHandle::Kind::PhiDirect:
        throw PreconditionFailed("boundary witness requires a phi-type handle");
    }
    return ExtReal::finite(0.0);
}

double nearest_negative_singularity(const FunctionHandle& fun) {
    double d = kInf;
    for (double lam : fun.negative_poles()) d = std::min(d, -lam);
    return d;
}

} // namespace

WitnessResult witness_boundary(const FunctionHandle& fun, std::size_t kappa,
                               const QuadConfig& cfg) {
    if (kappa == 0)
        throw PreconditionFailed("boundary witness requires kappa >= 1");
    const std::vector<double> lambdas = fun.negative_poles();
    if (lambdas.size() != kappa - 1)
        throw PreconditionFailed("boundary witness requires kappa-1 negative poles");
    if (!boundary_limit(fun, cfg).positive())
        throw PreconditionFailed("boundary witness requires Phi(0-) > 0");

    const double eps = std::min(1.0, 0.5 * nearest_negative_singularity(fun));
    double eta0 = eps * eps;
    std::optional<WindowPlan> plan;
    if (!lambdas.empty()) {
        plan = make_window_plan(lambdas);
        eta0 = std::min(eta0, plan->delta * plan->delta);
    }

    for (int j = 1; j <= 60; ++j) {
        const double eta = eta0 * std::ldexp(1.0, -j);
        const double x = -std::sqrt(eta);

        std::optional<double> phip;
        try {
            phip = eval_phi_prime(fun, x, cfg);
        } catch (const DomainError&) {
            phip.reset();
        }

        for (int l = 1; l <= 40; ++l) {
            const double mu = std::sqrt(eta) * std::ldexp(1.0, -l);
            PointSet pts;
            pts.points.push_back(Complex(x, mu));
            for (double lam : lambdas) pts.points.push_back(Complex(lam, eta));

            PickMatrix p;
            try {
                p = pick_matrix(fun, pts, cfg);
            } catch (const NearSingularity&) {
                continue;
            }
            const Inertia in = inertia(p);
            if (in.n_minus != static_cast<int>(kappa)) continue;

            WitnessResult res;
            res.points = pts;
            res.eta = eta;
            res.mu = mu;
            res.inertia_result = in;
            // finite difference at z_0 equals the diagonal Pick entry
            const double fd = p.entries(0, 0).real();
            res.rho.push_back(std::sqrt(std::max(0.0, -fd)));
            if (plan && fun.rep()) {
                for (std::size_t n = 1; n <= lambdas.size(); ++n)
                    res.rho.push_back(std::sqrt(rho_sq(*fun.rep(), n, eta, *plan, cfg)));
            }
            if (phip && *phip != 0.0)
                res.mu_check = std::fabs(fd - *phip) / std::fabs(*phip);
            return res;
        }
    }
    throw WitnessNotFound("eta/mu grid exhausted without kappa negative squares");
}

WitnessResult witness_boundary(const PhiRep& rep, std::size_t kappa,
                               const QuadConfig& cfg) {
    return witness_boundary(FunctionHandle::phi_from_rep(rep), kappa, cfg);
}

} // namespace nk
