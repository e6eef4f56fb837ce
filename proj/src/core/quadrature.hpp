#pragma once

#include "core/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <queue>
#include <vector>

namespace diagarcs {

struct AdaptiveResult {
    std::complex<double> value;
    double abs_error;
    std::uint64_t evaluations;
};

namespace gk15 {
// Kronrod abscissae on [-1, 1] (positive half); every odd index is also a Gauss node.
inline constexpr std::array<double, 8> xk{0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                          0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                          0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                          0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> wk{0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                          0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                          0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                          0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> wg{0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
}  // namespace gk15

struct Segment {
    double a, b;
    std::complex<double> value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error || (error == o.error && a > o.a); }
};

template <class Fn>
Segment gk15_segment(Fn& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    std::complex<double> fc = f(c);
    std::complex<double> kron = fc * gk15::wk[7];
    std::complex<double> gauss = fc * gk15::wg[3];
    for (int i = 0; i < 7; ++i) {
        const double dx = h * gk15::xk[std::size_t(i)];
        std::complex<double> pair = f(c - dx) + f(c + dx);
        kron += pair * gk15::wk[std::size_t(i)];
        if (i % 2 == 1) gauss += pair * gk15::wg[std::size_t(i / 2)];
    }
    return Segment{a, b, kron * h, std::abs((kron - gauss) * h)};
}

// Adaptive Gauss-Kronrod (7,15) on [a, b]: the interval is first cut into
// `panels` equal pieces (callers pass one piece per period of the fastest
// oscillation), then the worst piece is bisected until the summed error
// estimate meets tol.
template <class Fn>
AdaptiveResult integrate_adaptive(Fn&& f, double a, double b, std::size_t panels, double tol, std::uint64_t max_evals) {
    panels = std::max<std::size_t>(panels, 1);
    if (std::uint64_t(panels) * 15 > max_evals)
        throw Error(ErrorKind::budget, "quadrature needs more evaluations than the budget allows");
    std::priority_queue<Segment> heap;
    std::vector<Segment> done;
    double err = 0.0;
    std::uint64_t evals = 0;
    const double width = (b - a) / double(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double lo = a + width * double(p);
        const double hi = p + 1 == panels ? b : a + width * double(p + 1);
        Segment s = gk15_segment(f, lo, hi);
        evals += 15;
        err += s.error;
        heap.push(s);
    }
    while (err > tol && !heap.empty()) {
        Segment worst = heap.top();
        if (evals + 30 > max_evals || worst.b - worst.a < 1e-13 * std::max(1.0, std::abs(worst.a))) break;
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        Segment l = gk15_segment(f, worst.a, mid), r = gk15_segment(f, mid, worst.b);
        evals += 30;
        err += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
    }
    // recompute the error from scratch to shed drift from the running update
    while (!heap.empty()) {
        done.push_back(heap.top());
        heap.pop();
    }
    std::sort(done.begin(), done.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
    std::complex<double> total = 0.0;
    double total_err = 0.0;
    for (const auto& s : done) {
        total += s.value;
        total_err += s.error;
    }
    if (total_err > tol)
        throw ConvergenceError("adaptive quadrature did not reach tolerance", total.real(), total.imag(), total_err);
    return {total, total_err, evals};
}

}  // namespace diagarcs
