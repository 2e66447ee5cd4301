#pragma once

#include "nkappa/quadrature.hpp"

#include <complex>
#include <limits>
#include <optional>
#include <vector>

namespace nk {

using Complex = std::complex<double>;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Integration kernels used against Stieltjes measures.  CauchySq is the
// z-derivative of Cauchy and backs the analytic differentiation path.
enum class Kernel {
    Cauchy,         // 1/(t - z)
    Herglotz,       // 1/(t - z) - t/(1 + t^2)  ==  (1 + t z)/((t - z)(1 + t^2))
    WeightedCauchy, // 1/(t (t - z))
    InvQuad,        // 1/(1 + t^2)
    ZeroMoment,     // 1/(t + t^3)
    CauchySq        // 1/(t - z)^2
};

// Exact (exponent-decided) integrability tests.
enum class IntTest {
    DSigmaOverTNear0, // int_0^1 dsigma/t
    DSigmaOver1PlusT2,// int dsigma/(1+t^2)
    DNuOver1PlusT,    // int_0^inf dnu/(1+t)
    ZeroMoment        // int_0^inf dsigma/(t+t^3)
};

enum class Finiteness { Finite, Infinite };

struct Atom {
    double t = 0.0;
    double w = 0.0; // > 0
};

// One absolutely continuous piece of the measure on [lo, hi), hi possibly
// +inf.  The base density is
//
//     scale * (t - anchor)^exp_lo                        for bounded pieces
//     scale * (t - anchor)^exp_lo * (1+t-anchor)^(exp_inf-exp_lo)   unbounded
//
// so that the local behaviour near the anchor is (t-anchor)^exp_lo and the
// tail behaviour is t^exp_inf.  On top of the base density, conversions
// between representation forms multiply by exact rational factors
// t^t_power / prod_i (t + divisors[i]); keeping these symbolic keeps every
// integrability decision exponent-exact.  restrict() clips [lo, hi) and
// keeps the anchor, so clipping never changes density values.
struct DensityPiece {
    double lo = 0.0;
    double hi = 0.0;          // +inf allowed
    double scale = 1.0;       // > 0
    double exp_lo = 0.0;      // > -1 effective
    double exp_inf = 0.0;     // meaningful iff has_tail
    bool has_tail = false;    // true iff the base piece was unbounded
    double anchor = 0.0;      // original lo; <= lo
    int t_power = 0;          // multiply density by t^t_power
    std::vector<double> divisors; // multiply density by 1/(t+d), each d > 0

    bool unbounded() const { return hi == kInf; }

    // density exponent at the left endpoint (t - lo)^e as t -> lo+
    double exponent_at_lo() const;
    // density exponent near t = 0+ (only meaningful when lo <= 0 <= hi)
    double exponent_at_zero() const;
    // density exponent as t -> +inf
    double exponent_at_inf() const;

    // density evaluated from the offset t - anchor (exact near the anchor)
    double density_from_offset(double dt) const;
    double density(double t) const { return density_from_offset(t - anchor); }

    // true when mass over a subinterval has an elementary antiderivative
    bool closed_form_mass() const {
        return !has_tail && t_power == 0 && divisors.empty();
    }
};

struct QuadConfig {
    double rel_tol = 1e-10;
    std::size_t max_intervals = 1000000;
};

class StieltjesMeasure {
public:
    StieltjesMeasure() = default;
    StieltjesMeasure(std::vector<Atom> atoms, std::vector<DensityPiece> pieces);

    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::vector<DensityPiece>& pieces() const { return pieces_; }

    bool empty() const { return atoms_.empty() && pieces_.empty(); }
    bool has_atom_at(double t) const;
    double atom_weight_at(double t) const;

    // distance from a complex point to the closed support
    double support_distance(Complex z) const;
    double support_infimum() const;  // +inf when empty
    double support_supremum() const; // -inf when empty; +inf when unbounded
    bool supported_in_nonnegative() const { return support_infimum() >= 0.0; }

    // multiply all weights and scales by c > 0
    StieltjesMeasure scaled(double c) const;

    // exact measure transforms (atoms reweighted, pieces get symbolic factors);
    // all require support in [0, inf)
    StieltjesMeasure multiplied_by_t() const;            // t * dm
    StieltjesMeasure divided_by_t() const;               // dm / t   (no atom at 0)
    StieltjesMeasure reweighted_t_over_t_plus(double eps) const; // t/(t+eps) * dm

private:
    std::vector<Atom> atoms_;        // sorted by location
    std::vector<DensityPiece> pieces_; // sorted by lo, disjoint interiors
    friend StieltjesMeasure restrict_measure(const StieltjesMeasure&, double, double);
};

// int kernel(t, z) dm(t); atoms summed exactly, pieces by adaptive quadrature
// with endpoint-singularity substitution and analytic tail truncation.
// Throws PoleOnSupport / DivergentIntegral / QuadratureFailure.
Complex integrate(const StieltjesMeasure& m, Kernel k, Complex z = 0.0,
                  const QuadConfig& cfg = {});

// exponent-exact finiteness of the named test integral; never uses quadrature
Finiteness integrability(const StieltjesMeasure& m, IntTest test);

// clip to [lo, hi), left-closed right-open
StieltjesMeasure restrict_measure(const StieltjesMeasure& m, double lo, double hi);

// mass of [lo, hi); exact for atoms, closed-form power integral when
// available, tight quadrature otherwise.  Requires a bounded interval.
double total_mass(const StieltjesMeasure& m, double lo, double hi);

// int_{[lo,hi)} f(t) dm(t) for a caller-supplied smooth nonnegative weight;
// used by the rho diagnostics.
double integrate_weight(const StieltjesMeasure& m, double lo, double hi,
                        const std::function<double(double)>& f,
                        const QuadConfig& cfg = {});

} // namespace nk
