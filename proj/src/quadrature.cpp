#include "nkappa/quadrature.hpp"
#include "nkappa/errors.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace nk {

namespace {

// 15-point Kronrod nodes (positive half) and weights, with the embedded
// 7-point Gauss weights on the odd-indexed nodes.  Standard QUADPACK values.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Segment {
    double a, b;
    std::complex<double> value;
    double err;
    std::size_t order; // insertion index, tie-breaker for determinism
};

struct SegmentWorse {
    bool operator()(const Segment& l, const Segment& r) const {
        if (l.err != r.err) return l.err < r.err;
        return l.order > r.order;
    }
};

} // namespace

std::complex<double> gk15_panel(const std::function<std::complex<double>(double)>& f,
                                double a, double b, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);

    const std::complex<double> fc = f(c);
    std::complex<double> k15 = kWgk[7] * fc;
    std::complex<double> g7 = kWg[3] * fc;

    for (int i = 0; i < 7; ++i) {
        const double dx = h * kXgk[i];
        const std::complex<double> fs = f(c - dx) + f(c + dx);
        k15 += kWgk[i] * fs;
        if (i % 2 == 1) g7 += kWg[i / 2] * fs;
    }
    k15 *= h;
    g7 *= h;
    err = std::abs(k15 - g7);
    return k15;
}

QuadResult integrate_adaptive(const std::function<std::complex<double>(double)>& f,
                              double a, double b,
                              double abs_tol, double rel_tol,
                              std::size_t max_intervals) {
    if (!(a < b)) return {0.0, 0.0, 0};

    std::priority_queue<Segment, std::vector<Segment>, SegmentWorse> heap;
    std::size_t order = 0;

    auto push_panel = [&](double lo, double hi) {
        double e = 0.0;
        const std::complex<double> v = gk15_panel(f, lo, hi, e);
        heap.push(Segment{lo, hi, v, e, order++});
        return std::pair<std::complex<double>, double>(v, e);
    };

    // Seed with dyadic panels when the range is wide; a single K15 panel over
    // a many-decade interval gives a useless first estimate.
    std::complex<double> total = 0.0;
    double toterr = 0.0;
    double totabs = 0.0; // sum of |segment values|, floor for cancelling integrands
    {
        std::vector<double> cuts;
        cuts.push_back(a);
        const double width = b - a;
        if (width > 8.0) {
            double step = 1.0;
            double x = a + step;
            while (x < b && cuts.size() < 64) {
                cuts.push_back(x);
                step *= 2.0;
                x = a + step;
            }
        }
        cuts.push_back(b);
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            auto [v, e] = push_panel(cuts[i], cuts[i + 1]);
            total += v;
            toterr += e;
            totabs += std::abs(v);
        }
    }

    auto target = [&]() {
        return std::max(abs_tol, rel_tol * std::max(std::abs(total), 0.01 * totabs));
    };

    while (toterr > target()) {
        if (heap.size() >= max_intervals)
            throw QuadratureFailure("adaptive quadrature exceeded subdivision cap");
        Segment worst = heap.top();
        heap.pop();
        total -= worst.value;
        toterr -= worst.err;
        totabs -= std::abs(worst.value);
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // interval at rounding resolution; keep its estimate and stop
            // refining it by re-inserting with zero error
            heap.push(Segment{worst.a, worst.b, worst.value, 0.0, order++});
            total += worst.value;
            totabs += std::abs(worst.value);
            continue;
        }
        auto [v1, e1] = push_panel(worst.a, mid);
        auto [v2, e2] = push_panel(mid, worst.b);
        total += v1 + v2;
        toterr += e1 + e2;
        totabs += std::abs(v1) + std::abs(v2);
    }

    // Deterministic final sum: left-to-right over segments.
    std::vector<Segment> segs;
    segs.reserve(heap.size());
    while (!heap.empty()) {
        segs.push_back(heap.top());
        heap.pop();
    }
    std::sort(segs.begin(), segs.end(),
              [](const Segment& l, const Segment& r) { return l.a < r.a; });
    std::complex<double> value = 0.0;
    double err = 0.0;
    for (const Segment& s : segs) {
        value += s.value;
        err += s.err;
    }
    return {value, err, segs.size()};
}

} // namespace nk
