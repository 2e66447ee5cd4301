#pragma once

#include "nkappa/measure.hpp"

#include <optional>
#include <vector>

namespace nk {

// A simple negative pole of Phi: sigma/(lambda - z) with lambda < 0, sigma > 0.
struct NegPole {
    double lambda = 0.0;
    double sigma = 0.0;
};

// Representation data of an N-function
//
//     Phi(z) = b z + a + sum_n sigma_n/(lambda_n - z)
//              + int_0^inf (1/(t-z) - t/(1+t^2)) dm(t)
//
// with the measure supported in [0, inf) and the negative point spectrum kept
// as an explicit pole list.
struct PhiRep {
    double b = 0.0;
    double a = 0.0;
    std::vector<NegPole> poles;
    StieltjesMeasure measure;

    void validate() const;
    // poles sorted by descending lambda (closest to the origin first)
    std::vector<NegPole> poles_sorted() const;
    double nearest_negative_singularity() const; // +inf when none
};

enum class KappaCase { A, B, C };

struct FormPole {
    double alpha = 0.0; // < 0
    double gamma = 0.0; // < 0
};

// The three presentations of phi:
//   A:  s0 + sum gamma_j/(alpha_j - z) + int dnu(t)/(t - z)
//   B:  A-form + s1/z - s2/z^2            (max{s1,s2} > 0, nu(+0) = 0)
//   C:  s0 + s1/z - s2/z^2 + sum gamma_j/(alpha_j - z)
//       + (1/z) int (1/(t-z) - t/(1+t^2)) dsigma(t),   int_0^1 dsigma/t = inf
struct KappaForm {
    KappaCase kase = KappaCase::A;
    double s0 = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    std::vector<FormPole> poles;
    StieltjesMeasure mes; // nu (cases A/B) or sigma (case C)

    void validate() const;
    std::size_t kappa() const; // declared index: poles + 1 for B/C
};

// Extended real line value for Phi(0-): finite or +inf, never an overflow.
struct ExtReal {
    double v = 0.0;
    bool inf = false;

    static ExtReal infinite() { return {0.0, true}; }
    static ExtReal finite(double x) { return {x, false}; }
    bool positive() const { return inf || v > 0.0; }
    double value() const; // throws on +inf
};

// Evaluation handle: phi given by Phi(z)/z, by a KappaForm, by Phi directly,
// or by the catalog function psi.
class FunctionHandle {
public:
    enum class Kind { PhiOverZ, PhiDirect, Kappa, Psi };

    static FunctionHandle phi_from_rep(PhiRep r);
    static FunctionHandle direct_from_rep(PhiRep r);
    static FunctionHandle from_form(KappaForm f);
    static FunctionHandle psi();

    Kind kind() const { return kind_; }
    const PhiRep* rep() const { return rep_ ? &*rep_ : nullptr; }
    const KappaForm* form() const { return form_ ? &*form_ : nullptr; }

    // negative real poles (lambda / alpha locations), sorted descending
    std::vector<double> negative_poles() const;
    // distance from z to the singular set (used by samplers)
    double singular_distance(Complex z) const;

private:
    Kind kind_ = Kind::Psi;
    std::optional<PhiRep> rep_;
    std::optional<KappaForm> form_;
};

Complex eval_Phi(const PhiRep& rep, Complex z, const QuadConfig& cfg = {});
double eval_Phi_prime(const PhiRep& rep, double x, const QuadConfig& cfg = {});

Complex eval_phi(const FunctionHandle& fun, Complex z, const QuadConfig& cfg = {});
double eval_phi_prime(const FunctionHandle& fun, double x, const QuadConfig& cfg = {});

// Phi(0-) = a + sum sigma_n/lambda_n + int_0^inf dsigma/(t+t^3); +inf exactly
// when the zero-moment integral diverges (decided from exponents).
ExtReal phi_limit_at_zero_minus(const PhiRep& rep, const QuadConfig& cfg = {});

// Local splitting phi = phi_0 + sum_n phi_n with phi_n supported on the
// window around lambdas[n-1]; parts sum back to eval_phi.
std::vector<FunctionHandle> split_local(const PhiRep& rep,
                                        const std::vector<double>& lambdas);

// Phi_eps(z) = z * (Phi(z)/(z+eps)): new pole at -eps with weight
// eps*Phi(-eps), reweighted poles and measure; Phi_eps(0-) = 0.
PhiRep regularize_eps(const PhiRep& rep, double eps, const QuadConfig& cfg = {});

// psi(z) = (1/z)((1/sqrt z) cot(1/sqrt z) - sqrt z cot sqrt z), principal
// square root.  Singular set: {0} u {k^2 pi^2} u {1/(k^2 pi^2)}, k >= 1.
Complex eval_counterexample_psi(Complex z);
Complex eval_counterexample_psi_prime(Complex z);

// complex cotangent, stable for large |Im w|
Complex complex_cot(Complex w);

} // namespace nk
