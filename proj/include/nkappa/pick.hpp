#pragma once

#include "nkappa/nevfun.hpp"

#include <Eigen/Dense>

#include <optional>

namespace nk {

struct PointSet {
    std::vector<Complex> points;

    // pairwise distinct (1e-10 guard) and strictly non-real
    void validate() const;
};

// Signature of a Hermitian matrix under the declared zero band.
struct Inertia {
    int n_minus = 0;
    int n_zero = 0;
    int n_plus = 0;
    double tolerance_used = 0.0;
};

// P[m][n] = (phi(z_m) - conj(phi(z_n))) / (z_m - conj(z_n)), Hermitian by
// construction (upper triangle computed, lower triangle mirror-conjugated,
// diagonal Im phi / Im z stored exactly real).
struct PickMatrix {
    Eigen::MatrixXcd entries;
    PointSet points;
};

struct CoefficientVector {
    std::vector<Complex> xi;
};

PickMatrix pick_matrix(const FunctionHandle& fun, const PointSet& pts,
                       const QuadConfig& cfg = {});

// default zero band: 1e-8 * max(1, max-row-sum norm)
double default_inertia_tol(const Eigen::MatrixXcd& p);

// eigenvalue-count inertia (Hermitian eigensolver)
Inertia inertia(const Eigen::MatrixXcd& p, std::optional<double> tol = {});
Inertia inertia(const PickMatrix& p, std::optional<double> tol = {});

// independent second path: Bunch-Kaufman symmetric factorization with
// diagonal pivoting; agrees with the eigenvalue path whenever the spectral
// gap clears the zero band
Inertia inertia_ldl(const Eigen::MatrixXcd& p, std::optional<double> tol = {});

int negative_squares(const FunctionHandle& fun, const PointSet& pts,
                     std::optional<double> tol = {}, const QuadConfig& cfg = {});

// sum_{m,n} P[m][n] xi_m conj(xi_n); asserts the imaginary residue vanishes
double form_value(const PickMatrix& p, const CoefficientVector& xi);

// eigenvalues sorted ascending
Eigen::VectorXd pick_eigenvalues(const Eigen::MatrixXcd& p);

} // namespace nk
