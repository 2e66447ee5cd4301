#pragma once

#include "nkappa/pick.hpp"

#include <optional>

namespace nk {

// Disjoint windows U_n = (lambda_n - delta, lambda_n + delta) around a
// strictly decreasing set of negative points of increase.
struct WindowPlan {
    std::vector<double> lambdas; // lambda_1 > ... > lambda_kappa, all < 0
    double delta = 0.0;
};

struct WitnessResult {
    PointSet points;
    double eta = 0.0;
    std::optional<double> mu;            // boundary construction only
    Inertia inertia_result;
    std::vector<double> rho;             // rho_n(eta) diagnostics
    std::optional<double> scaled_form;   // h at zeta = (1,...,1)/rho
    std::optional<double> mu_check;      // |finite diff - phi'(x)| / |phi'(x)|
};

// delta = (1/3) min{ -lambda_1, min_n (lambda_n - lambda_{n+1}) }
double delta_gap(const std::vector<double>& lambdas);
WindowPlan make_window_plan(const std::vector<double>& lambdas);

// rho_n^2(eta) = int_{U_n} dsigma~(t)/|t - z_n|^2 with dsigma~ = dsigma/|t|
// and z_n = lambda_n + i eta; n is 1-based.
double rho_sq(const PhiRep& rep, std::size_t n, double eta, const WindowPlan& plan,
              const QuadConfig& cfg = {});

// Interior configuration z_n = lambda_n + i eta at the kappa pole locations;
// scans eta = delta * 2^-j until the Pick matrix shows exactly kappa negative
// squares with a safely negative bottom eigenvalue.
WitnessResult witness_interior(const PhiRep& rep, std::size_t kappa,
                               const QuadConfig& cfg = {});

// Boundary configuration with the extra point z_0 = -sqrt(eta) + i mu;
// requires Phi(0-) > 0 and kappa-1 negative poles.
WitnessResult witness_boundary(const FunctionHandle& fun, std::size_t kappa,
                               const QuadConfig& cfg = {});
WitnessResult witness_boundary(const PhiRep& rep, std::size_t kappa,
                               const QuadConfig& cfg = {});

} // namespace nk
