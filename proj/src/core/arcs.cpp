#include "core/arcs.hpp"

#include "core/errors.hpp"
#include "core/parallel.hpp"
#include "core/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace diagarcs {

namespace mp = boost::multiprecision;

namespace {

BigInt big_pow(std::int64_t b, unsigned e) { return mp::pow(BigInt(b), e); }

BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

BigInt floor_of(const Rational& r) { return floor_div(mp::numerator(r), mp::denominator(r)); }

Rational abs_r(const Rational& r) { return r < 0 ? Rational(-r) : r; }

// |q alpha - a| <= Q / X^k, decided in long double when clear and exactly otherwise
bool within_arc(long double alpha_l, const Rational& alpha, std::int64_t q, std::int64_t a, std::int64_t Q,
                std::int64_t X, int k) {
    const long double d = std::fabs(alpha_l * q - a);
    const long double r = (long double)Q / std::pow((long double)X, k);
    const long double slack = 1e-15L * (1 + std::fabs(alpha_l * q)) + 1e-12L * r;
    if (d < r - slack) return true;
    if (d > r + slack) return false;
    return abs_r(alpha * q - a) * big_pow(X, unsigned(k)) <= Q;
}

void check_box(const ArcParams& p, std::span<const double> alpha) {
    const double lo = 1.0 / double(p.Q0);
    for (double v : alpha) {
        const Rational a = exact_rational(v);
        if (a < Rational(1, p.Q0) || a > 1 + Rational(1, p.Q0))
            fail(ErrorKind::input, "alpha coordinate " + std::to_string(v) + " lies outside [" + std::to_string(lo) +
                                       ", 1 + " + std::to_string(lo) + "]");
    }
}

std::int64_t content_with(std::span<const std::int64_t> a, std::int64_t q) {
    std::int64_t g = q;
    for (auto v : a) g = gcd64(g, v);
    return g;
}

}  // namespace

Rational exact_rational(double x) {
    if (!std::isfinite(x)) fail(ErrorKind::input, "value is not finite");
    if (x == 0) return 0;
    int e = 0;
    const double f = std::frexp(x, &e);
    const std::int64_t m = std::int64_t(std::ldexp(f, 53));
    int shift = 53 - e;
    Rational r(m);
    if (shift > 0)
        r /= Rational(BigInt(1) << shift);
    else
        r *= Rational(BigInt(1) << -shift);
    return r;
}

std::int64_t floor_root_power(std::int64_t X, Fraction tau) {
    if (X < 1) fail(ErrorKind::input, "X must be >= 1");
    if (tau.den <= 0 || tau.num < 0) fail(ErrorKind::input, "tau must be a nonnegative fraction");
    const BigInt target = big_pow(X, unsigned(tau.num));
    std::int64_t g = std::int64_t(std::floor(std::pow(double(X), tau.value())));
    g = std::max<std::int64_t>(g, 0);
    while (big_pow(g + 1, unsigned(tau.den)) <= target) ++g;
    while (g > 0 && big_pow(g, unsigned(tau.den)) > target) --g;
    return g;
}

ArcParams make_arc_params(std::int64_t X, Fraction tau, const ExponentTuple& k) {
    if (X < 1) fail(ErrorKind::input, "X must be >= 1");
    if (tau.den <= 0 || tau.num <= 0) fail(ErrorKind::input, "tau must be a positive fraction");
    const i128 lhs = i128(tau.num) * i128(k.size()) * k.top();
    if (lhs < tau.den || tau.num > tau.den)
        fail(ErrorKind::input, "tau = " + std::to_string(tau.num) + "/" + std::to_string(tau.den) +
                                   " outside [1/(n k_n), 1]");
    const std::int64_t Q = floor_root_power(X, tau);
    if (Q < 1) fail(ErrorKind::input, "Q = floor(X^tau) is zero");
    return {X, tau, Q, 2 * Q};
}

ArcLabel classify(const ArcParams& params, const ExponentTuple& k, std::span<const double> alpha) {
    const std::size_t n = k.size();
    if (alpha.size() != n) fail(ErrorKind::input, "alpha has the wrong length");
    check_box(params, alpha);
    std::vector<Rational> A;
    for (double v : alpha) A.push_back(exact_rational(v));
    std::vector<std::vector<std::int64_t>> cand(n);
    std::vector<std::size_t> pick(n);
    std::vector<std::int64_t> a(n);
    for (std::int64_t q = 1; q <= params.Q; ++q) {
        bool empty = false;
        for (std::size_t i = 0; i < n && !empty; ++i) {
            cand[i].clear();
            const long double c = (long double)alpha[i] * q;
            const long double r = (long double)params.Q / std::pow((long double)params.X, k[i]);
            const std::int64_t lo = std::max<std::int64_t>(1, std::int64_t(std::floor(c - r)) - 1);
            const std::int64_t hi = std::min<std::int64_t>(q, std::int64_t(std::ceil(c + r)) + 1);
            for (std::int64_t v = lo; v <= hi; ++v)
                if (within_arc(alpha[i], A[i], q, v, params.Q, params.X, k[i])) cand[i].push_back(v);
            empty = cand[i].empty();
        }
        if (empty) continue;
        std::fill(pick.begin(), pick.end(), 0);
        for (;;) {
            for (std::size_t i = 0; i < n; ++i) a[i] = cand[i][pick[i]];
            if (content_with(a, q) == 1) return {true, q, a};
            std::size_t i = n;
            while (i > 0) {
                if (++pick[i - 1] < cand[i - 1].size()) break;
                pick[i - 1] = 0;
                --i;
            }
            if (i == 0) break;
        }
    }
    return {false, 0, {}};
}

ArcLabel classify_brute(const ArcParams& params, const ExponentTuple& k, std::span<const double> alpha) {
    const std::size_t n = k.size();
    if (alpha.size() != n) fail(ErrorKind::input, "alpha has the wrong length");
    check_box(params, alpha);
    std::vector<Rational> A;
    for (double v : alpha) A.push_back(exact_rational(v));
    std::vector<std::int64_t> a(n);
    std::optional<ArcLabel> found;
    for (std::int64_t q = 1; q <= params.Q && !found; ++q) {
        auto rec = [&](auto& self, std::size_t i) -> void {
            if (found) return;
            if (i == n) {
                if (content_with(a, q) == 1) found = ArcLabel{true, q, a};
                return;
            }
            for (std::int64_t v = 1; v <= q && !found; ++v) {
                if (!within_arc(alpha[i], A[i], q, v, params.Q, params.X, k[i])) continue;
                a[i] = v;
                self(self, i + 1);
            }
        };
        rec(rec, 0);
    }
    return found ? *found : ArcLabel{false, 0, {}};
}

std::vector<Arc> major_arcs(const ArcParams& params, const ExponentTuple& k) {
    const std::size_t n = k.size();
    std::vector<Arc> arcs;
    std::vector<std::int64_t> a(n);
    for (std::int64_t q = 1; q <= params.Q; ++q) {
        std::fill(a.begin(), a.end(), 1);
        for (;;) {
            if (content_with(a, q) == 1) arcs.push_back({q, a});
            std::size_t i = n;
            while (i > 0) {
                if (++a[i - 1] <= q) break;
                a[i - 1] = 1;
                --i;
            }
            if (i == 0) break;
        }
    }
    return arcs;
}

DisjointnessReport check_disjoint(const ArcParams& params, const ExponentTuple& k) {
    // distinct arcs differ in some coordinate by at least 1/(q q'), which beats
    // the two half-widths Q(q + q')/(q q' X^{k_i}) once X^{k_1} >= 2 Q^2
    if (big_pow(params.X, unsigned(k[0])) >= 2 * BigInt(params.Q) * params.Q) return {true, true, std::nullopt};
    auto arcs = major_arcs(params, k);
    const std::int64_t X = params.X, Q = params.Q;
    auto left = [&](const Arc& r) {
        return (long double)r.a[0] / r.q - (long double)Q / (r.q * std::pow((long double)X, k[0]));
    };
    auto right = [&](const Arc& r) {
        return (long double)r.a[0] / r.q + (long double)Q / (r.q * std::pow((long double)X, k[0]));
    };
    std::vector<std::size_t> order(arcs.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return left(arcs[x]) < left(arcs[y]); });
    auto overlap = [&](const Arc& r, const Arc& t) {
        for (std::size_t i = 0; i < k.size(); ++i) {
            const BigInt gap = mp::abs(BigInt(r.a[i]) * t.q - BigInt(t.a[i]) * r.q) * big_pow(X, unsigned(k[i]));
            if (gap >= BigInt(Q) * (r.q + t.q)) return false;
        }
        return true;
    };
    for (std::size_t x = 0; x < order.size(); ++x) {
        const Arc& r = arcs[order[x]];
        const long double rr = right(r);
        for (std::size_t y = x + 1; y < order.size(); ++y) {
            const Arc& t = arcs[order[y]];
            if (left(t) > rr + 1e-15L) break;
            if (overlap(r, t)) return {false, false, std::make_pair(r, t)};
        }
    }
    return {true, false, std::nullopt};
}

std::vector<RationalApprox> convergent_candidates(const Rational& theta, const BigInt& Q_max) {
    std::vector<RationalApprox> out;
    BigInt num = mp::numerator(theta), den = mp::denominator(theta);
    BigInt h2 = 0, h1 = 1, k2 = 1, k1 = 0;  // h_{-2}, h_{-1}, k_{-2}, k_{-1}
    for (;;) {
        const BigInt a = floor_div(num, den);
        // semiconvergents (t h1 + h2)/(t k1 + k2) for t = 1..a, the last being the convergent
        for (BigInt t = (k1 == 0 ? a : BigInt(1)); t <= a; ++t) {
            const BigInt kk = t * k1 + k2;
            if (kk > Q_max) break;
            if (kk >= 1) out.push_back({t * h1 + h2, kk});
        }
        const BigInt h = a * h1 + h2, kq = a * k1 + k2;
        if (kq > Q_max) break;
        h2 = h1;
        h1 = h;
        k2 = k1;
        k1 = kq;
        const BigInt rem = num - a * den;
        if (rem == 0) break;
        num = den;
        den = rem;
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.q < y.q; });
    return out;
}

RationalApprox best_rational_approx(const Rational& theta, std::int64_t Q_max) {
    if (Q_max < 1) fail(ErrorKind::input, "Q_max must be >= 1");
    BigInt num = mp::numerator(theta), den = mp::denominator(theta);
    BigInt h2 = 0, h1 = 1, k2 = 1, k1 = 0;
    RationalApprox best{floor_of(theta), 1};
    for (;;) {
        const BigInt a = floor_div(num, den);
        const BigInt h = a * h1 + h2, kq = a * k1 + k2;
        if (kq > Q_max) break;
        best = {h, kq};
        h2 = h1;
        h1 = h;
        k2 = k1;
        k1 = kq;
        const BigInt rem = num - a * den;
        if (rem == 0) break;
        num = den;
        den = rem;
    }
    return best;
}

RationalApprox best_rational_approx(double theta, std::int64_t Q_max) {
    return best_rational_approx(exact_rational(theta), Q_max);
}

BigInt h_of(const BigInt& q, std::span<const BigInt> a, std::span<const std::int64_t> w) {
    BigInt g = q;
    for (std::size_t i = 0; i < a.size(); ++i) g = mp::gcd(g, mp::abs(a[i] * w[i]));
    return q / g;
}

bool cond_beta_holds(const ExponentTuple& k, std::span<const double> gamma, double q_frak, double X) {
    if (gamma.size() != k.size()) fail(ErrorKind::input, "gamma has the wrong length");
    double sum = 0;
    std::size_t start = 0;
    if (k[0] == 1) {
        if (!(std::abs(gamma[0]) <= 1.0 / (2 * q_frak))) return false;
        start = 1;
    }
    for (std::size_t i = start; i < k.size(); ++i) sum += k[i] * std::abs(gamma[i]) * std::pow(X, k[i] - 1);
    return sum <= 1.0 / (4 * q_frak);
}

double xi(const ExponentTuple& k, std::span<const double> beta, double X) {
    if (beta.size() != k.size()) fail(ErrorKind::input, "beta has the wrong length");
    double r = 1;
    for (std::size_t i = 0; i < k.size(); ++i) r += std::abs(beta[i]) * std::pow(X, k[i]);
    return r;
}

CombineResult combine_approx(std::span<const std::int64_t> w, std::span<const CoordinateApprox> approx,
                             std::span<const Rational> alpha, const ExponentTuple& k, std::int64_t X,
                             std::span<const double> lambda) {
    const std::size_t n = k.size();
    if (w.size() != n || approx.size() != n || alpha.size() != n || lambda.size() != n)
        fail(ErrorKind::input, "combine_approx arguments must all have length n");
    if (X < 1) fail(ErrorKind::input, "X must be >= 1");
    long double sigma = 0, M0 = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (w[i] == 0) fail(ErrorKind::input, "w has a zero entry");
        if (!(lambda[i] > 0)) fail(ErrorKind::precondition, "lambda entries must be positive");
        sigma += lambda[i];
        M0 *= std::abs((long double)w[i]);
    }
    if (!(sigma < 1)) fail(ErrorKind::precondition, "sum of lambda must be below 1");
    const long double Xl = (long double)X;
    const long double tol = 1e-12L;
    CombineResult out{false, "", 0, {}, {}, 0};
    auto reject = [&](std::string why) {
        out.accepted = false;
        out.diagnostic = std::move(why);
        return out;
    };
    const bool linear = k[0] == 1;
    const std::size_t first = linear ? 1 : 0;
    // hypothesis on each supplied approximation
    for (std::size_t i = first; i < n; ++i) {
        const auto& ap = approx[i];
        if (ap.q < 1 || mp::gcd(mp::abs(ap.b), ap.q) != 1)
            fail(ErrorKind::precondition, "approximation " + std::to_string(i + 1) + " is not a reduced fraction");
        const long double bound_q = std::pow(Xl, (long double)lambda[i]);
        if (ap.q.convert_to<long double>() > bound_q * (1 + tol))
            fail(ErrorKind::precondition, "q_" + std::to_string(i + 1) + " exceeds X^lambda");
        const Rational dist = abs_r(Rational(w[i]) * alpha[i] - Rational(ap.b, ap.q));
        const long double rhs = bound_q / (ap.q.convert_to<long double>() * std::pow(Xl, k[i]));
        if (dist.convert_to<long double>() > rhs * (1 + tol))
            fail(ErrorKind::precondition, "approximation " + std::to_string(i + 1) + " is too far from w alpha");
        // two such fractions are at least X^{-2 lambda} apart; a unique one needs room
        if (!(std::pow(Xl, k[i]) > 2 * std::pow(Xl, 2 * (long double)lambda[i])))
            return reject("X too small: approximation " + std::to_string(i + 1) + " is not unique");
    }
    for (std::size_t i = 0; i < n; ++i)
        if (k[i] >= 2 && !(std::pow(Xl, k[i]) > 2 * M0 * M0 * std::pow(Xl, 2 * sigma)))
            return reject("X too small: reconstructed numerator " + std::to_string(i + 1) + " is not unique");
    // c_i / q' = b_i / q_i over a common denominator
    BigInt qp = 1;
    for (std::size_t i = first; i < n; ++i) qp = mp::lcm(qp, approx[i].q);
    std::vector<BigInt> c(n);
    for (std::size_t i = first; i < n; ++i) c[i] = approx[i].b * (qp / approx[i].q);
    if (linear) {
        // minimal c_1 with |w_1 alpha_1 - c_1/q'| <= 1/(2q')
        const Rational t = Rational(w[0]) * alpha[0] * qp - Rational(1, 2);
        BigInt c1 = floor_of(t);
        if (Rational(c1) < t) ++c1;
        c[0] = c1;
    }
    // a_i / q = c_i / (w_i q'), reduced jointly
    std::vector<Rational> frac(n);
    BigInt q = 1;
    for (std::size_t i = 0; i < n; ++i) {
        frac[i] = Rational(c[i], BigInt(w[i]) * qp);
        q = mp::lcm(q, mp::denominator(frac[i]));
    }
    std::vector<BigInt> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = mp::numerator(Rational(frac[i] * q));
    BigInt g = q;
    for (auto& v : a) g = mp::gcd(g, mp::abs(v));
    if (g != 1) fail(ErrorKind::numeric, "joint reduction left a common factor");
    const BigInt h = h_of(q, a, w);
    if (h != qp) return reject("h(q, a, w) differs from the common denominator q'");
    std::vector<Rational> beta(n);
    std::vector<double> gamma(n);
    for (std::size_t i = 0; i < n; ++i) {
        beta[i] = alpha[i] - Rational(a[i], q);
        gamma[i] = (Rational(w[i]) * beta[i]).convert_to<double>();
    }
    // postconditions
    const long double ql = q.convert_to<long double>(), hl = h.convert_to<long double>();
    const long double bigq = M0 * std::pow(Xl, sigma);
    if (ql > bigq * (1 + tol)) return reject("q exceeds M0 X^sigma");
    if (!(ql / M0 <= hl * (1 + tol) && hl <= ql)) return reject("h outside [q/M0, q]");
    for (std::size_t i = 0; i < n; ++i) {
        const long double b = abs_r(beta[i]).convert_to<long double>();
        const long double bound =
            (linear && i == 0) ? 1 / (2 * std::abs((long double)w[0]) * hl) : bigq / (ql * std::pow(Xl, k[i]));
        if (b > bound * (1 + tol)) return reject("beta_" + std::to_string(i + 1) + " exceeds its bound");
    }
    if (!cond_beta_holds(k, gamma, double(hl), double(X))) return reject("X too small: w beta fails the beta condition with h");
    out = {true, "", q, a, beta, h};
    return out;
}

MajorError weyl_major_error(int k, std::int64_t q, std::span<const std::int64_t> a, std::span<const double> beta,
                            std::int64_t X, double eps) {
    if (k < 1) fail(ErrorKind::input, "degree must be >= 1");
    if (q < 1) fail(ErrorKind::input, "q must be >= 1");
    if (a.size() != std::size_t(k) || beta.size() != std::size_t(k))
        fail(ErrorKind::input, "a and beta need one entry per degree");
    const ExponentTuple kk = ExponentTuple::consecutive(k);
    if (!cond_beta_holds(kk, beta, double(q), double(X)))
        fail(ErrorKind::precondition, "beta violates |beta_1| <= 1/(2q), sum j |beta_j| X^{j-1} <= 1/(4q)");
    const Complex actual = weyl_sum_split(kk, q, a, beta, X);
    const Complex S = complete_sum(kk, q, a);
    const Complex I = v_k(kk, beta, double(X)).value;
    const Complex main = (double(X) / double(q)) * S * I;
    const double red = double(q) / double(content_with(a, q));
    const double budget = std::pow(red, 1 - 1.0 / k + eps);
    const double err = std::abs(actual - main);
    return {main, actual, err, budget, err / budget};
}

MajorError system_major_error(const DiagonalSystem& F, std::int64_t q, std::span<const std::int64_t> a,
                              std::span<const double> beta, std::int64_t X, double eps) {
    const std::size_t n = F.n(), s = F.s();
    if (a.size() != n || beta.size() != n) fail(ErrorKind::input, "a and beta need n entries");
    if (!in_A_n({std::vector<std::int64_t>(a.begin(), a.end()), q}))
        fail(ErrorKind::precondition, "a is not in A_n(q)");
    std::vector<double> gamma(n);
    for (std::size_t i = 0; i < n; ++i) gamma[i] = double(F.sup_norm()) * beta[i];
    if (!cond_beta_holds(F.k(), gamma, double(q), double(X)))
        fail(ErrorKind::precondition, "||F|| beta violates the beta condition with q");
    Complex actual = 1.0;
    std::vector<std::int64_t> c(n);
    std::vector<double> g(n);
    for (std::size_t j = 0; j < s; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            c[i] = mul_mod(mod_floor(F.coeff(i, j), q), a[i], q);
            g[i] = double(F.coeff(i, j)) * beta[i];
        }
        actual *= weyl_sum_split(F.k(), q, c, g, X);
    }
    const Complex S = complete_sum_system(F, q, a);
    const Complex v = v_system(F, beta, double(X)).value;
    const Complex main = std::pow(double(X) / double(q), double(s)) * S * v;
    const double kn = F.k().top();
    const double qd = double(q), Xd = double(X), sd = double(s);
    const double budget = std::pow(Xd, sd - 1) * std::pow(qd, 1 - sd / kn + eps) *
                              std::pow(xi(F.k(), beta, Xd), -(sd - 1) / kn) +
                          std::pow(qd, sd - sd / kn + eps);
    const double err = std::abs(actual - main);
    return {main, actual, err, budget, err / budget};
}

MajorSweep weyl_major_sweep(std::span<const int> degrees, std::int64_t q_max, std::int64_t X_min, std::int64_t X_max,
                            int samples, std::uint64_t seed, double eps) {
    if (degrees.empty() || samples < 2 || q_max < 1 || X_min < 1 || X_max < X_min)
        fail(ErrorKind::input, "sweep needs degrees, q_max >= 1, 1 <= X_min <= X_max and >= 2 samples");
    std::vector<MajorSample> out(static_cast<std::size_t>(samples));
    parallel_for(out.size(), [&](std::size_t i) {
        BlockRng rng(seed, i);
        MajorSample& smp = out[i];
        smp.X = X_min + (X_max - X_min) * std::int64_t(i) / (samples - 1);
        smp.k = degrees[std::size_t(rng.integer(0, std::int64_t(degrees.size()) - 1))];
        smp.q = rng.integer(1, q_max);
        smp.a.resize(std::size_t(smp.k));
        for (auto& v : smp.a) v = rng.integer(0, smp.q - 1);
        smp.beta.assign(std::size_t(smp.k), 0.0);
        const double qd = double(smp.q);
        smp.beta[0] = rng.uniform(-1.0, 1.0) / (2 * qd);
        if (smp.k >= 2) {
            double weight = 0;
            for (int j = 2; j <= smp.k; ++j) {
                smp.beta[std::size_t(j - 1)] = rng.uniform(-1.0, 1.0);
                weight += j * std::abs(smp.beta[std::size_t(j - 1)]) * std::pow(double(smp.X), j - 1);
            }
            const double target = rng.uniform() / (4 * qd);
            if (weight > 0)
                for (int j = 2; j <= smp.k; ++j) smp.beta[std::size_t(j - 1)] *= target / weight * (1 - 1e-12);
        }
        smp.result = weyl_major_error(smp.k, smp.q, smp.a, smp.beta, smp.X, eps);
    });
    std::vector<std::int64_t> X;
    std::vector<double> ratios;
    for (const auto& smp : out) {
        X.push_back(smp.X);
        ratios.push_back(smp.result.ratio);
    }
    return {std::move(out), stability_of(std::move(X), std::move(ratios))};
}

namespace {

// Iterated adaptive quadrature over a box; tolerance split across levels.
struct BoxIntegral {
    std::function<Complex(std::span<const double>)> f;
    std::vector<double> lo, hi;
    std::vector<std::size_t> panels;
    std::vector<double> tol;
    std::vector<double> point;
    std::vector<double> max_error;
    std::uint64_t evaluations = 0;
    std::uint64_t max_evaluations;

    Complex level(std::size_t d) {
        auto g = [&](double x) -> Complex {
            point[d] = x;
            if (d + 1 == lo.size()) {
                if (++evaluations > max_evaluations)
                    fail(ErrorKind::budget, "major-arc quadrature exceeded its evaluation budget");
                return f(point);
            }
            return level(d + 1);
        };
        AdaptiveResult r = integrate_adaptive(g, lo[d], hi[d], panels[d], tol[d], max_evaluations);
        max_error[d] = std::max(max_error[d], r.abs_error);
        return r.value;
    }

    double total_error() const {
        double e = 0;
        for (std::size_t d = lo.size(); d-- > 0;) e = max_error[d] + (hi[d] - lo[d]) * e;
        return e;
    }
};

}  // namespace

MajorArcIntegral major_arc_integral(const DiagonalSystem& F, const ArcParams& params, bool allow_overlap,
                                    std::uint64_t max_evaluations) {
    const std::size_t n = F.n(), s = F.s();
    if (n > 3) fail(ErrorKind::precondition, "major-arc integral supports n <= 3");
    // the integral is also wanted below 1/(n k_n), so only 0 < tau <= 1 is enforced here
    if (params.tau.den <= 0 || params.tau.num <= 0 || params.tau.num > params.tau.den)
        fail(ErrorKind::input, "tau must lie in (0, 1]");
    if (params.Q != floor_root_power(params.X, params.tau) || params.Q < 1 || params.Q0 != 2 * params.Q)
        fail(ErrorKind::input, "ArcParams: Q must be floor(X^tau) >= 1 and Q0 = 2Q");
    const ArcParams& checked = params;
    const DisjointnessReport dis = check_disjoint(checked, F.k());
    if (!dis.disjoint && !allow_overlap) {
        const auto& [r, t] = *dis.overlap;
        std::string msg = "major arcs overlap: (q=" + std::to_string(r.q) + ", a=" + std::to_string(r.a[0]) +
                          ") and (q=" + std::to_string(t.q) + ", a=" + std::to_string(t.a[0]) + ")";
        fail(ErrorKind::precondition, msg);
    }
    const auto arcs = major_arcs(checked, F.k());
    const std::int64_t X = checked.X, Q = checked.Q;
    const double scale = std::pow(2.0 * double(X) + 1, double(s));
    std::vector<Complex> values(arcs.size());
    std::vector<double> errors(arcs.size());
    std::vector<std::uint64_t> evals(arcs.size());
    const std::uint64_t per_arc = std::max<std::uint64_t>(1, max_evaluations / std::max<std::size_t>(1, arcs.size()));
    parallel_for(arcs.size(), [&](std::size_t idx) {
        const Arc& arc = arcs[idx];
        std::vector<std::vector<std::int64_t>> c(s, std::vector<std::int64_t>(n));
        for (std::size_t j = 0; j < s; ++j)
            for (std::size_t i = 0; i < n; ++i) c[j][i] = mul_mod(mod_floor(F.coeff(i, j), arc.q), arc.a[i], arc.q);
        BoxIntegral box;
        std::vector<double> g(n);
        box.f = [&](std::span<const double> beta) {
            Complex prod = 1.0;
            for (std::size_t j = 0; j < s; ++j) {
                for (std::size_t i = 0; i < n; ++i) g[i] = double(F.coeff(i, j)) * beta[i];
                prod *= weyl_sum_split(F.k(), arc.q, c[j], g, X);
            }
            return prod;
        };
        double volume = 1;
        for (std::size_t i = 0; i < n; ++i) {
            const double half = double(Q) / (double(arc.q) * std::pow(double(X), F.k()[i]));
            box.lo.push_back(-half);
            box.hi.push_back(half);
            volume *= 2 * half;
            // half a period of the fastest phase x -> beta_i F_i(x) per panel
            const double periods = 2 * half * double(F.row_abs_sum(i)) * std::pow(double(X), F.k()[i]);
            box.panels.push_back(std::size_t(std::ceil(2 * periods)) + 1);
        }
        double t = 1e-9 * scale * volume;
        for (std::size_t d = 0; d < n; ++d) {
            box.tol.push_back(t);
            t /= 2 * (box.hi[d] - box.lo[d]);
        }
        box.point.assign(n, 0.0);
        box.max_error.assign(n, 0.0);
        box.max_evaluations = per_arc;
        values[idx] = box.level(0);
        errors[idx] = box.total_error();
        evals[idx] = box.evaluations;
    });
    MajorArcIntegral out{0.0, 0.0, arcs.size(), !dis.disjoint, 0};
    ComplexSum sum;
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        sum.add(values[i]);
        out.abs_error += errors[i];
        out.evaluations += evals[i];
    }
    out.value = sum.value();
    return out;
}

QuadratureResult singular_integral(const DiagonalSystem& F, const MainTermOptions& opt) {
    SingularIntegralRoute route = opt.route;
    if (route == SingularIntegralRoute::automatic)
        route = F.n() == 1 ? SingularIntegralRoute::truncated : SingularIntegralRoute::smoothed;
    if (route == SingularIntegralRoute::truncated) return singular_integral_truncated(F, opt.U, opt.tol);
    return singular_integral_smoothed(F, opt.T, opt.samples, opt.seed);
}

MainTerm main_term(const DiagonalSystem& F, std::int64_t X, const MainTermOptions& opt) {
    if (X < 1) fail(ErrorKind::input, "X must be >= 1");
    QuadratureResult J = singular_integral(F, opt);
    SeriesApproximation S = series_truncated(F, opt.Q_cut, opt.eps);
    const int exponent = int(F.s()) - F.k().sigma();
    const double Xp = std::pow(double(X), exponent);
    const double j = J.value.real(), ej = J.abs_error_estimate;
    const double sv = S.partial_sum, es = S.tail_report;
    const double value = j * sv * Xp;
    const double err = Xp * (std::abs(sv) * ej + std::abs(j) * es + ej * es);
    return {value, err, exponent, std::move(J), std::move(S)};
}

namespace {

constexpr std::array<int, 3> k135{1, 3, 5};
const Fraction kTau135{5, 8};

// theta reduced into [1/Q0, 1 + 1/Q0)
Rational reduce_box(const Rational& theta, std::int64_t Q0) {
    Rational t = theta - Rational(floor_of(theta));
    if (t < Rational(1, Q0)) t += 1;
    return t;
}

std::int64_t Q0_of(std::int64_t X) { return 2 * floor_root_power(X, kTau135); }

// |theta - b/q| <= X^{p/r} / (q X^e), exactly: (|q theta - b| X^e)^r <= X^p
bool near_exact(const Rational& theta, const BigInt& b, const BigInt& q, std::int64_t X, int e, int p, int r) {
    const Rational d = abs_r(theta * q - b) * Rational(big_pow(X, unsigned(e)));
    return mp::pow(mp::numerator(d), unsigned(r)) <= big_pow(X, unsigned(p)) * mp::pow(mp::denominator(d), unsigned(r));
}

// Largest q with (m q)^r <= X^p.
std::int64_t q_bound(std::int64_t X, std::int64_t m, int p, int r) {
    const BigInt target = big_pow(X, unsigned(p));
    std::int64_t q = 0;
    while (mp::pow(BigInt(m) * (q + 1), unsigned(r)) <= target) ++q;
    return q;
}

// Is there a coprime b/q, q <= bound, within X^{p/r}/(q X^e) of theta? Candidates from the CF expansion.
bool cf_hit(const Rational& theta, std::int64_t bound, std::int64_t X, int e, int p, int r) {
    if (bound < 1) return false;
    for (const auto& c : convergent_candidates(theta, BigInt(bound)))
        if (mp::gcd(mp::abs(c.b), c.q) == 1 && near_exact(theta, c.b, c.q, X, e, p, r)) return true;
    return false;
}

// Same question by scanning every q <= bound, b in A_1(q) read mod 1.
bool scan_hit(const Rational& theta, std::int64_t bound, std::int64_t X, int e, int p, int r) {
    const long double t = theta.convert_to<long double>();
    for (std::int64_t q = 1; q <= bound; ++q) {
        const std::int64_t base = std::int64_t(std::floor(t * q));
        for (std::int64_t b = base - 1; b <= base + 2; ++b) {
            const std::int64_t rep = mod_floor(b, q) == 0 ? q : mod_floor(b, q);
            if (gcd64(rep, q) != 1) continue;
            if (near_exact(theta, BigInt(b), BigInt(q), X, e, p, r)) return true;
        }
    }
    return false;
}

}  // namespace

bool in_m3(double theta, std::int64_t X) {
    const Rational t = reduce_box(exact_rational(theta), Q0_of(X));
    // 5 theta near b/q with q <= X^{1/8}/5 and distance <= X^{1/8}/(q X^5)
    return !cf_hit(Rational(5) * t, q_bound(X, 5, 1, 8), X, 5, 1, 8);
}

bool in_W3(double theta, std::int64_t X) {
    const Rational t = reduce_box(exact_rational(theta), Q0_of(X));
    return scan_hit(t, q_bound(X, 1, 1, 8), X, 5, 1, 8);
}

bool in_m2(double theta, std::int64_t X) {
    const Rational t = reduce_box(exact_rational(theta), Q0_of(X));
    return !cf_hit(t, q_bound(X, 1, 3, 4), X, 3, 3, 4);
}

bool in_W2(double theta, std::int64_t X) {
    const Rational t = reduce_box(exact_rational(theta), Q0_of(X));
    return scan_hit(t, q_bound(X, 1, 3, 4), X, 3, 3, 4);
}

namespace {

// Membership in the pruning set L, in long double.
bool in_L(const std::array<double, 3>& alpha, std::int64_t X, const std::array<std::int64_t, 3>& w) {
    const long double Xl = (long double)X;
    long double M0 = 1;
    for (auto v : w) M0 *= std::abs((long double)v);
    const std::int64_t qmax = std::int64_t(std::floor(M0 * std::pow(Xl, 7.0L / 8)));
    const long double w1 = std::abs((long double)w[0]);
    for (std::int64_t q = 1; q <= qmax; ++q) {
        const long double ql = (long double)q;
        const long double r2 = M0 * std::pow(Xl, 7.0L / 8) / (ql * std::pow(Xl, 3));
        const long double r3 = M0 * std::pow(Xl, 7.0L / 8) / (ql * std::pow(Xl, 5));
        const std::int64_t a2 = std::llround(alpha[1] * ql), a3 = std::llround(alpha[2] * ql);
        if (std::fabs(alpha[1] - (long double)a2 / ql) > r2 || std::fabs(alpha[2] - (long double)a3 / ql) > r3) continue;
        if (a2 < 1 || a2 > q || a3 < 1 || a3 > q) continue;
        // h >= q/M0, so a_1 lies within M0/(2|w_1|) of q alpha_1
        const long double span = M0 / (2 * w1) + 1;
        for (std::int64_t a1 = std::max<std::int64_t>(1, std::int64_t(std::floor(alpha[0] * ql - span)));
             a1 <= std::min<std::int64_t>(q, std::int64_t(std::ceil(alpha[0] * ql + span))); ++a1) {
            std::array<std::int64_t, 3> a{a1, a2, a3};
            if (content_with(a, q) != 1) continue;
            std::int64_t g = q;
            for (std::size_t i = 0; i < 3; ++i) g = gcd64(g, std::abs(a[i] * w[i]) % q);
            const long double h = (long double)(q / g);
            if (std::fabs(alpha[0] - (long double)a1 / ql) <= 1 / (2 * w1 * h)) return true;
        }
    }
    return false;
}

}  // namespace

RegionFlags region_135(const std::array<double, 3>& alpha, std::int64_t X, const std::array<std::int64_t, 3>& w) {
    for (auto v : w)
        if (v == 0) fail(ErrorKind::input, "w has a zero entry");
    const ExponentTuple k(std::vector<int>(k135.begin(), k135.end()));
    const ArcParams params = make_arc_params(X, kTau135, k);
    RegionFlags f{};
    f.in_major = classify(params, k, alpha).major;
    const Rational t2 = exact_rational(alpha[1]) * w[1], t3 = exact_rational(alpha[2]) * w[2];
    const std::int64_t Q0 = params.Q0;
    const Rational r2 = reduce_box(t2, Q0), r3 = reduce_box(t3, Q0);
    f.in_m3 = !cf_hit(Rational(5) * r3, q_bound(X, 5, 1, 8), X, 5, 1, 8);
    f.in_W3 = scan_hit(r3, q_bound(X, 1, 1, 8), X, 5, 1, 8);
    f.in_m2 = !cf_hit(r2, q_bound(X, 1, 3, 4), X, 3, 3, 4);
    f.in_W2 = scan_hit(r2, q_bound(X, 1, 3, 4), X, 3, 3, 4);
    f.in_L = in_L(alpha, X, w);
    const bool minor = !f.in_major;
    f.in_n1 = minor && f.in_W2 && f.in_W3;
    f.in_n2 = minor && f.in_m2 && f.in_W3;
    f.in_n3 = minor && f.in_m3;
    return f;
}

RegionSweep region_sweep(std::int64_t X, std::uint64_t points, const std::array<std::int64_t, 3>& w,
                         std::uint64_t seed) {
    const ExponentTuple k(std::vector<int>(k135.begin(), k135.end()));
    const ArcParams params = make_arc_params(X, kTau135, k);
    const double lo = 1.0 / double(params.Q0), hi = 1.0 + lo;
    const std::int64_t q2max = q_bound(X, 1, 3, 4), q3max = q_bound(X, 1, 1, 8);
    struct Tally {
        bool m3, m2, cover, minor, out2, out3;
    };
    std::vector<Tally> tally(points);
    parallel_for(std::size_t(points), [&](std::size_t i) {
        BlockRng rng(seed, i);
        std::array<double, 3> alpha{};
        for (auto& v : alpha) v = rng.uniform(lo, hi);
        // a third of the points sit next to low-height rationals, where the
        // windows of W2 / W3 and the arcs actually live
        auto near = [&](std::int64_t qmax, double width) {
            const std::int64_t q = rng.integer(1, std::max<std::int64_t>(1, qmax));
            const std::int64_t b = rng.integer(1, q);
            double v = double(b) / double(q) + rng.uniform(-2.0, 2.0) * width / double(q);
            if (v < lo) v += 1;
            if (v >= hi) v -= 1;
            return std::clamp(v, lo, hi);
        };
        auto wrap = [&](double v) {
            v -= std::floor(v);
            return v < lo ? v + 1 : v;
        };
        const double Xd = double(X);
        switch (i % 3) {
            case 1:
                alpha[1] = wrap(near(q2max, std::pow(Xd, 0.75) / std::pow(Xd, 3)) / double(w[1]));
                break;
            case 2:
                alpha[2] = wrap(near(q3max, std::pow(Xd, 0.125) / std::pow(Xd, 5)) / double(w[2]));
                alpha[0] = near(params.Q, double(params.Q) / Xd);
                break;
            default:
                break;
        }
        RegionFlags f = region_135(alpha, X, w);
        const bool minor = !f.in_major;
        tally[i] = {!f.in_m3 && !f.in_W3, !f.in_m2 && !f.in_W2, minor && !(f.in_n1 || f.in_n2 || f.in_n3), minor,
                    !f.in_m2, !f.in_m3};
    });
    RegionSweep out{X, points, 0, 0, 0, 0, 0, 0, q_bound(X, 5, 1, 8) < 1};
    for (const auto& t : tally) {
        out.m3_violations += t.m3;
        out.m2_violations += t.m2;
        out.cover_violations += t.cover;
        out.minor_points += t.minor;
        out.m2_outside += t.out2;
        out.m3_outside += t.out3;
    }
    return out;
}

}  // namespace diagarcs
