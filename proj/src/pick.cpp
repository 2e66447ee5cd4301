#include "nkappa/pick.hpp"
#include "nkappa/errors.hpp"

#include <cmath>

namespace nk {

void PointSet::validate() const {
    for (const Complex& z : points)
        if (z.imag() == 0.0)
            throw InvalidSpec("points must be non-real");
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (std::abs(points[i] - points[j]) < 1e-10)
                throw CoincidentPoints("points closer than the 1e-10 guard");
}

PickMatrix pick_matrix(const FunctionHandle& fun, const PointSet& pts,
                       const QuadConfig& cfg) {
    pts.validate();
    const std::size_t k = pts.points.size();

    // one evaluation per point; quadrature dominates the cost
    std::vector<Complex> vals(k);
    for (std::size_t m = 0; m < k; ++m) vals[m] = eval_phi(fun, pts.points[m], cfg);

    Eigen::MatrixXcd p(k, k);
    for (std::size_t m = 0; m < k; ++m) {
        const Complex zm = pts.points[m];
        p(m, m) = Complex(vals[m].imag() / zm.imag(), 0.0);
        for (std::size_t n = m + 1; n < k; ++n) {
            const Complex e = (vals[m] - std::conj(vals[n])) / (zm - std::conj(pts.points[n]));
            p(m, n) = e;
            p(n, m) = std::conj(e);
        }
    }
    return {std::move(p), pts};
}

double default_inertia_tol(const Eigen::MatrixXcd& p) {
    double row_max = 0.0;
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        double s = 0.0;
        for (Eigen::Index j = 0; j < p.cols(); ++j) s += std::abs(p(i, j));
        row_max = std::max(row_max, s);
    }
    return 1e-8 * std::max(1.0, row_max);
}

namespace {

void check_hermitian(const Eigen::MatrixXcd& p) {
    if (p.rows() != p.cols())
        throw NonHermitianInput("inertia requires a square matrix");
    double scale = std::max(1.0, p.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < p.rows(); ++i)
        for (Eigen::Index j = i; j < p.cols(); ++j)
            if (std::abs(p(i, j) - std::conj(p(j, i))) > 1e-12 * scale)
                throw NonHermitianInput("matrix asymmetry beyond 1e-12");
}

} // namespace

Inertia inertia(const Eigen::MatrixXcd& p, std::optional<double> tol) {
    check_hermitian(p);
    const double band = tol ? *tol : default_inertia_tol(p);
    if (!(band > 0.0)) throw InvalidSpec("inertia tolerance must be positive");

    Inertia out;
    out.tolerance_used = band;
    if (p.rows() == 0) return out;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(p, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) < -band)
            ++out.n_minus;
        else if (ev(i) > band)
            ++out.n_plus;
        else
            ++out.n_zero;
    }
    return out;
}

Inertia inertia(const PickMatrix& p, std::optional<double> tol) {
    return inertia(p.entries, tol);
}

Inertia inertia_ldl(const Eigen::MatrixXcd& p, std::optional<double> tol) {
    check_hermitian(p);
    const double band = tol ? *tol : default_inertia_tol(p);
    if (!(band > 0.0)) throw InvalidSpec("inertia tolerance must be positive");

    Eigen::MatrixXcd a = 0.5 * (p + p.adjoint()); // exact Hermitian copy
    Eigen::Index n = a.rows();
    for (Eigen::Index i = 0; i < n; ++i) a(i, i) = Complex(a(i, i).real(), 0.0);

    Inertia out;
    out.tolerance_used = band;

    const double alpha = (1.0 + std::sqrt(17.0)) / 8.0;
    Eigen::Index n_act = n;
    Eigen::Index k = 0;

    auto swap_rc = [&](Eigen::Index i, Eigen::Index j) {
        if (i == j) return;
        a.row(i).swap(a.row(j));
        a.col(i).swap(a.col(j));
    };

    while (k < n_act) {
        // largest off-diagonal magnitude in column k of the active block
        Eigen::Index r = k;
        double lam = 0.0;
        for (Eigen::Index i = k + 1; i < n_act; ++i) {
            const double v = std::abs(a(i, k));
            if (v > lam) {
                lam = v;
                r = i;
            }
        }
        const double akk = std::abs(a(k, k).real());

        if (std::max(akk, lam) <= band) {
            // negligible column: one zero eigenvalue, retire the row/column
            swap_rc(k, n_act - 1);
            --n_act;
            ++out.n_zero;
            continue;
        }

        bool pivot_2x2 = false;
        if (akk < alpha * lam) {
            double sigma = 0.0;
            for (Eigen::Index i = k; i < n_act; ++i) {
                if (i == r) continue;
                sigma = std::max(sigma, std::abs(a(i, r)));
            }
            if (akk * sigma >= alpha * lam * lam) {
                // keep the 1x1 pivot at k
            } else if (std::abs(a(r, r).real()) >= alpha * sigma) {
                swap_rc(k, r);
            } else {
                swap_rc(k + 1, r);
                pivot_2x2 = true;
            }
        }

        if (!pivot_2x2) {
            const double d = a(k, k).real();
            if (std::fabs(d) <= band) {
                swap_rc(k, n_act - 1);
                --n_act;
                ++out.n_zero;
                continue;
            }
            (d > 0.0 ? out.n_plus : out.n_minus)++;
            for (Eigen::Index i = k + 1; i < n_act; ++i) {
                const Complex lik = a(i, k) / d;
                for (Eigen::Index j = k + 1; j < n_act; ++j)
                    a(i, j) -= lik * std::conj(a(j, k));
            }
            ++k;
        } else {
            // 2x2 pivot is indefinite by construction: det = ab - |c|^2 < 0
            const double da = a(k, k).real();
            const double db = a(k + 1, k + 1).real();
            const Complex c = a(k + 1, k);
            const double det = da * db - std::norm(c);
            ++out.n_plus;
            ++out.n_minus;
            for (Eigen::Index i = k + 2; i < n_act; ++i) {
                const Complex v0 = a(i, k);
                const Complex v1 = a(i, k + 1);
                // (v0, v1) * inv([[da, conj(c)], [c, db]])
                const Complex w0 = (v0 * db - v1 * c) / det;
                const Complex w1 = (v1 * da - v0 * std::conj(c)) / det;
                for (Eigen::Index j = k + 2; j < n_act; ++j)
                    a(i, j) -= w0 * std::conj(a(j, k)) + w1 * std::conj(a(j, k + 1));
            }
            k += 2;
        }
    }
    out.n_zero += static_cast<int>(n - (out.n_minus + out.n_plus + out.n_zero));
    return out;
}

int negative_squares(const FunctionHandle& fun, const PointSet& pts,
                     std::optional<double> tol, const QuadConfig& cfg) {
    return inertia(pick_matrix(fun, pts, cfg), tol).n_minus;
}

double form_value(const PickMatrix& p, const CoefficientVector& xi) {
    const Eigen::Index k = p.entries.rows();
    if (static_cast<Eigen::Index>(xi.xi.size()) != k)
        throw DimensionMismatch("coefficient vector length mismatch");
    Complex sum = 0.0;
    double mag = 0.0;
    for (Eigen::Index m = 0; m < k; ++m)
        for (Eigen::Index n = 0; n < k; ++n) {
            const Complex term = p.entries(m, n) * xi.xi[m] * std::conj(xi.xi[n]);
            sum += term;
            mag += std::abs(term);
        }
    if (std::fabs(sum.imag()) > std::max(1e-10 * std::abs(sum), 1e-13 * mag))
        throw NonHermitianInput("quadratic form value has a nonzero imaginary part");
    return sum.real();
}

Eigen::VectorXd pick_eigenvalues(const Eigen::MatrixXcd& p) {
    if (p.rows() == 0) return Eigen::VectorXd(0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(p, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

} // namespace nk
