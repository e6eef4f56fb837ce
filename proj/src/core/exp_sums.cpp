#include "core/exp_sums.hpp"

#include "core/errors.hpp"
#include "core/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace diagarcs {

ExactReal::ExactReal(double alpha) : alpha_(alpha) {
    if (!std::isfinite(alpha)) fail(ErrorKind::input, "phase coefficient is not finite");
    if (alpha == 0.0) {
        integral_ = true;
        return;
    }
    int e = 0;
    double f = std::frexp(alpha, &e);
    mantissa_ = std::int64_t(std::ldexp(f, 53));
    shift_ = 53 - e;
    while (shift_ > 0 && (mantissa_ & 1) == 0) {
        mantissa_ /= 2;
        --shift_;
    }
    integral_ = shift_ <= 0;
}

double ExactReal::frac_times(i128 n) const {
    if (integral_ || n == 0) return 0.0;
    constexpr i128 kSafe = i128(1) << 73;
    long double r;
    if (n >= kSafe || n <= -kSafe) {
        BigInt P = BigInt(mantissa_) * to_big(n);
        BigInt modulus = BigInt(1) << shift_;
        BigInt rem = P % modulus;
        if (rem < 0) rem += modulus;
        r = std::ldexp(rem.convert_to<long double>(), -shift_);
    } else {
        const i128 P = i128(mantissa_) * n;
        if (shift_ >= 127) {
            long double v = std::ldexp((long double)P, -shift_);
            r = v - std::floor(v);
        } else {
            const u128 mask = (u128(1) << shift_) - 1;
            r = std::ldexp((long double)(u128(P) & mask), -shift_);
        }
    }
    double d = double(r);
    return d >= 1.0 ? 0.0 : d;
}

Complex unit_root(double t) {
    t -= std::nearbyint(t);
    const double a = 2.0 * std::numbers::pi * t;
    return {std::cos(a), std::sin(a)};
}

Complex unit_root(std::int64_t m, std::int64_t q) {
    std::int64_t r = mod_floor(m, q);
    if (2 * r > q) r -= q;
    return unit_root(double(r) / double(q));
}

void ComplexSum::add(Complex z) {
    auto step = [](double& s, double& c, double x) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    };
    step(re_, cre_, z.real());
    step(im_, cim_, z.imag());
}

namespace {

// sum_{|x|<=X} e(sum_i (a_i w_i x^{k_i} / q + beta_i w_i x^{k_i})); q = 0 means no rational part
Complex weighted_sum(const ExponentTuple& k, std::int64_t q, std::span<const std::int64_t> a,
                     std::span<const double> beta, std::span<const std::int64_t> w, std::int64_t lo, std::int64_t hi) {
    const std::size_t n = k.size();
    std::vector<ExactReal> br;
    for (double b : beta) br.emplace_back(b);
    std::vector<std::int64_t> aw(n, 0);
    if (q > 0)
        for (std::size_t i = 0; i < n; ++i) aw[i] = mul_mod(mod_floor(a[i], q), mod_floor(w[i], q), q);
    ComplexSum sum;
    for (std::int64_t x = lo; x <= hi; ++x) {
        double t = 0.0;
        std::int64_t m = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const i128 p = pow_checked(x, k[i]);
            if (q > 0) {
                const std::int64_t pm = std::int64_t(((p % q) + q) % q);
                m = (m + mul_mod(aw[i], pm, q)) % q;
            }
            if (!br.empty()) t += br[i].frac_times(mul_checked(p, w[i]));
        }
        if (q > 0) t += double(m) / double(q);
        sum.add(unit_root(t));
    }
    return sum.value();
}

void check_len(std::size_t got, std::size_t want, const char* what) {
    if (got != want)
        fail(ErrorKind::input, std::string(what) + " has length " + std::to_string(got) + ", expected " + std::to_string(want));
}

std::vector<std::int64_t> ones(std::size_t n) { return std::vector<std::int64_t>(n, 1); }

}  // namespace

Complex weyl_sum(const ExponentTuple& k, std::span<const double> alpha, std::int64_t X) {
    check_len(alpha.size(), k.size(), "alpha");
    return weighted_sum(k, 0, {}, alpha, ones(k.size()), -X, X);
}

Complex weyl_sum_split(const ExponentTuple& k, std::int64_t q, std::span<const std::int64_t> a,
                       std::span<const double> beta, std::int64_t X) {
    check_len(a.size(), k.size(), "a");
    check_len(beta.size(), k.size(), "beta");
    if (q < 1) fail(ErrorKind::input, "q must be >= 1");
    return weighted_sum(k, q, a, beta, ones(k.size()), -X, X);
}

PolyPhase PolyPhase::dense(std::span<const double> beta) {
    PolyPhase p;
    for (std::size_t j = 0; j < beta.size(); ++j) p.terms.emplace_back(int(j + 1), beta[j]);
    return p;
}

PolyPhase PolyPhase::sparse(std::vector<std::pair<int, double>> terms) {
    std::sort(terms.begin(), terms.end());
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (terms[i].first < 1) fail(ErrorKind::input, "phase exponents must be positive");
        if (i > 0 && terms[i].first == terms[i - 1].first) fail(ErrorKind::input, "phase exponents must be distinct");
    }
    return PolyPhase{std::move(terms)};
}

PolyPhase PolyPhase::missing_degree(int k, std::span<const double> alpha, double theta) {
    if (k < 3) fail(ErrorKind::input, "missing-degree phase needs k >= 3");
    check_len(alpha.size(), std::size_t(k - 2), "alpha");
    PolyPhase p;
    for (int j = 1; j <= k - 2; ++j) p.terms.emplace_back(j, alpha[std::size_t(j - 1)]);
    p.terms.emplace_back(k, theta);
    return p;
}

Complex poly_phase_sum(const PolyPhase& phase, std::int64_t lo, std::int64_t hi) {
    std::vector<ExactReal> coeff;
    for (const auto& t : phase.terms) coeff.emplace_back(t.second);
    ComplexSum sum;
    for (std::int64_t x = lo; x <= hi; ++x) {
        double t = 0.0;
        for (std::size_t i = 0; i < coeff.size(); ++i) t += coeff[i].frac_times(pow_checked(x, phase.terms[i].first));
        sum.add(unit_root(t));
    }
    return sum.value();
}

std::int64_t content(std::span<const std::int64_t> a, std::int64_t q) {
    std::int64_t g = std::abs(q);
    for (auto v : a) g = gcd64(g, v);
    return g;
}

bool in_A_n(const RationalPoint& p) {
    if (p.q < 1) return false;
    for (auto v : p.a)
        if (v < 1 || v > p.q) return false;
    return content(p.a, p.q) == 1;
}

CompleteSumTable::CompleteSumTable(const ExponentTuple& k, std::int64_t q) : q_(q), n_(k.size()) {
    if (q < 1) fail(ErrorKind::input, "q must be >= 1");
    powers_.resize(std::size_t(q) * n_);
    for (std::int64_t r = 0; r < q; ++r)
        for (std::size_t i = 0; i < n_; ++i) {
            std::int64_t p = 1 % q;
            for (int e = 0; e < k[i]; ++e) p = mul_mod(p, r, q);
            powers_[std::size_t(r) * n_ + i] = p;
        }
    roots_.resize(std::size_t(q));
    for (std::int64_t m = 0; m < q; ++m) roots_[std::size_t(m)] = unit_root(m, q);
}

Complex CompleteSumTable::operator()(std::span<const std::int64_t> c) const {
    ComplexSum sum;
    const std::int64_t* pw = powers_.data();
    for (std::int64_t r = 0; r < q_; ++r, pw += n_) {
        u128 m = 0;
        for (std::size_t i = 0; i < n_; ++i) m += u128(c[i]) * u128(pw[i]);
        sum.add(roots_[std::size_t(m % u128(q_))]);
    }
    return sum.value();
}

Complex complete_sum(const ExponentTuple& k, std::int64_t q, std::span<const std::int64_t> a) {
    check_len(a.size(), k.size(), "a");
    CompleteSumTable table(k, q);
    std::vector<std::int64_t> c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = mod_floor(a[i], q);
    return table(c);
}

Complex complete_sum_system(const DiagonalSystem& F, std::int64_t q, std::span<const std::int64_t> a) {
    check_len(a.size(), F.n(), "a");
    CompleteSumTable table(F.k(), q);
    std::map<std::vector<std::int64_t>, Complex> memo;
    Complex prod = 1.0;
    for (std::size_t j = 0; j < F.s(); ++j) {
        std::vector<std::int64_t> c(F.n());
        for (std::size_t i = 0; i < F.n(); ++i) c[i] = mul_mod(mod_floor(F.coeff(i, j), q), mod_floor(a[i], q), q);
        auto it = memo.find(c);
        if (it == memo.end()) it = memo.emplace(c, table(c)).first;
        prod *= it->second;
    }
    return prod;
}

Complex complete_sum_system_direct(const DiagonalSystem& F, std::int64_t q, std::span<const std::int64_t> a) {
    check_len(a.size(), F.n(), "a");
    if (q < 1) fail(ErrorKind::input, "q must be >= 1");
    if (sat_pow(std::uint64_t(q), F.s()) > 1'000'000)
        fail(ErrorKind::precondition, "direct complete-sum enumeration needs q^s <= 10^6");
    const std::size_t s = F.s();
    // contrib[j][r] = sum_i a_i u_{ij} r^{k_i} mod q
    std::vector<std::vector<std::int64_t>> contrib(s, std::vector<std::int64_t>(std::size_t(q)));
    for (std::size_t j = 0; j < s; ++j)
        for (std::int64_t r = 0; r < q; ++r) {
            std::int64_t m = 0;
            for (std::size_t i = 0; i < F.n(); ++i) {
                std::int64_t p = 1 % q;
                for (int e = 0; e < F.k()[i]; ++e) p = mul_mod(p, r, q);
                m = (m + mul_mod(mul_mod(mod_floor(a[i], q), mod_floor(F.coeff(i, j), q), q), p, q)) % q;
            }
            contrib[j][std::size_t(r)] = m;
        }
    ComplexSum sum;
    std::vector<std::int64_t> r(s, 0);
    for (;;) {
        std::int64_t m = 0;
        for (std::size_t j = 0; j < s; ++j) m = (m + contrib[j][std::size_t(r[j])]) % q;
        sum.add(unit_root(m, q));
        std::size_t j = s;
        while (j > 0) {
            if (++r[j - 1] < q) break;
            r[j - 1] = 0;
            --j;
        }
        if (j == 0) break;
    }
    return sum.value();
}

Complex system_weyl_sum(const DiagonalSystem& F, std::span<const double> alpha, std::int64_t X) {
    check_len(alpha.size(), F.n(), "alpha");
    std::map<std::vector<std::int64_t>, Complex> memo;
    Complex prod = 1.0;
    for (std::size_t j = 0; j < F.s(); ++j) {
        auto w = F.column(j);
        auto it = memo.find(w);
        if (it == memo.end()) it = memo.emplace(w, weighted_sum(F.k(), 0, {}, alpha, w, -X, X)).first;
        prod *= it->second;
    }
    return prod;
}

Complex system_weyl_sum_direct(const DiagonalSystem& F, std::span<const double> alpha, std::int64_t X) {
    check_len(alpha.size(), F.n(), "alpha");
    if (sat_pow(std::uint64_t(2 * X + 1), F.s()) > 1'000'000)
        fail(ErrorKind::precondition, "direct Weyl-sum enumeration needs (2X+1)^s <= 10^6");
    std::vector<ExactReal> ar;
    for (double v : alpha) ar.emplace_back(v);
    std::vector<std::int64_t> x(F.s(), -X);
    ComplexSum sum;
    for (;;) {
        auto val = evaluate_forms(F, x);
        double t = 0.0;
        for (std::size_t i = 0; i < F.n(); ++i) t += ar[i].frac_times(val[i]);
        sum.add(unit_root(t));
        std::size_t j = F.s();
        while (j > 0) {
            if (++x[j - 1] <= X) break;
            x[j - 1] = -X;
            --j;
        }
        if (j == 0) break;
    }
    return sum.value();
}

double complete_sum_ratio(const ExponentTuple& k, std::int64_t q, std::span<const std::int64_t> a, double eps) {
    const double kt = k.top();
    const double S = std::abs(complete_sum(k, q, a));
    return S / (std::pow(double(content(a, q)), 1.0 / kt) * std::pow(double(q), 1.0 - 1.0 / kt + eps));
}

BoundReport complete_sum_bound_check(const ExponentTuple& k, std::span<const std::int64_t> q_list, int trials, double eps,
                                     std::uint64_t seed, bool weighted) {
    if (q_list.empty()) fail(ErrorKind::precondition, "complete_sum_bound_check needs a nonempty q list");
    if (eps <= 0) fail(ErrorKind::precondition, "eps must be positive");
    if (trials < 1) fail(ErrorKind::precondition, "trials must be >= 1");
    const std::size_t n = k.size();
    const double kt = k.top();
    std::vector<std::vector<BoundSample>> per_q(q_list.size());
    parallel_for(q_list.size(), [&](std::size_t qi) {
        const std::int64_t q = q_list[qi];
        if (q < 1) fail(ErrorKind::input, "q must be >= 1");
        BlockRng rng(seed, qi);
        for (int t = 0; t < trials; ++t) {
            BoundSample smp{q, std::vector<std::int64_t>(n), {}, 0.0, 0.0};
            if (!weighted) {
                for (auto& v : smp.a) v = rng.integer(1, q);
                smp.abs_sum = std::abs(complete_sum(k, q, smp.a));
                smp.ratio = complete_sum_ratio(k, q, smp.a, eps);
            } else {
                do
                    for (auto& v : smp.a) v = rng.integer(1, q);
                while (content(smp.a, q) != 1);
                smp.w.resize(n);
                double wprod = 1.0;
                std::vector<std::int64_t> aw(n);
                for (std::size_t i = 0; i < n; ++i) {
                    std::int64_t w;
                    do w = rng.integer(-6, 6);
                    while (w == 0);
                    smp.w[i] = w;
                    wprod *= double(std::abs(w));
                    aw[i] = smp.a[i] * w;
                }
                smp.abs_sum = std::abs(complete_sum(k, q, aw));
                smp.ratio = smp.abs_sum / (std::pow(wprod, 1.0 / kt) * std::pow(double(q), 1.0 - 1.0 / kt + eps));
            }
            per_q[qi].push_back(std::move(smp));
        }
    });
    BoundReport rep{{}, 0.0, 0.0, 0.0, true};
    for (auto& v : per_q)
        for (auto& smp : v) {
            double& slot = smp.q <= 20 ? rep.fitted_constant : rep.max_ratio_large;
            slot = std::max(slot, smp.ratio);
            rep.max_ratio = std::max(rep.max_ratio, smp.ratio);
            rep.samples.push_back(std::move(smp));
        }
    rep.holds = std::isfinite(rep.max_ratio) && rep.max_ratio_large <= 2.0 * rep.fitted_constant;
    return rep;
}

double psi_k(int k_top, double theta, double mu, std::int64_t X) {
    if (X < 1) fail(ErrorKind::input, "X must be >= 1");
    const double cap = std::pow(double(X), k_top - 1);
    ExactReal th(theta);
    const double mu_frac = mu - std::floor(mu);
    long double total = 0;
    for (std::int64_t y = 1; y <= X; ++y) {
        double t = th.frac_times(i128(k_top) * y) + mu_frac;
        double dist = std::abs(t - std::nearbyint(t));
        total += dist == 0.0 ? cap : std::min(cap, 1.0 / dist);
    }
    return double(total / X);
}

PsiStar psi_star(int k_top, double theta, std::int64_t X, std::int64_t grid_size) {
    if (grid_size < 1) fail(ErrorKind::precondition, "grid_size must be >= 1");
    std::vector<double> vals(static_cast<std::size_t>(grid_size));
    parallel_for(vals.size(), [&](std::size_t j) { vals[j] = psi_k(k_top, theta, double(j) / double(grid_size), X); });
    auto it = std::max_element(vals.begin(), vals.end());
    return PsiStar{*it, double(it - vals.begin()) / double(grid_size), true};
}

double vdc_ratio(const std::array<double, 3>& alpha, std::int64_t X) {
    if (X < 1) fail(ErrorKind::input, "X must be >= 1");
    const double threshold = std::pow(double(X), -10.0 / 3.0);
    if (std::abs(alpha[2]) > threshold * (1 + 1e-12))
        fail(ErrorKind::precondition, "|alpha_3| must be <= X^(-10/3) = " + std::to_string(threshold));
    static const ExponentTuple k135({1, 3, 5});
    const double f = std::abs(weyl_sum(k135, alpha, X));
    return f * std::pow(1.0 + std::pow(double(X), 5) * std::abs(alpha[2]), 0.1) / double(X);
}

StabilitySweep stability_of(std::vector<std::int64_t> X, std::vector<double> ratios) {
    StabilitySweep out{std::move(X), std::move(ratios), 0.0, 0.0, false};
    const std::size_t half = out.ratios.size() / 2;
    bool finite = true;
    for (std::size_t i = 0; i < out.ratios.size(); ++i) {
        finite = finite && std::isfinite(out.ratios[i]);
        double& slot = i < half ? out.first_half_max : out.second_half_max;
        slot = std::max(slot, out.ratios[i]);
    }
    out.stable = finite && out.second_half_max <= 2.0 * out.first_half_max;
    return out;
}

StabilitySweep vdc_sweep(int samples, std::int64_t X_min, std::int64_t X_max, std::uint64_t seed) {
    if (samples < 2) fail(ErrorKind::precondition, "vdc sweep needs at least 2 samples");
    if (X_min < 1 || X_max < X_min) fail(ErrorKind::input, "vdc sweep needs 1 <= X_min <= X_max");
    std::vector<std::int64_t> X(static_cast<std::size_t>(samples));
    std::vector<double> r(X.size());
    parallel_for(X.size(), [&](std::size_t i) {
        X[i] = X_min + (X_max - X_min) * std::int64_t(i) / (samples - 1);
        BlockRng rng(seed, i);
        const double thr = std::pow(double(X[i]), -10.0 / 3.0);
        std::array<double, 3> a{rng.uniform(), rng.uniform(), rng.uniform(-thr, thr)};
        r[i] = vdc_ratio(a, X[i]);
    });
    return stability_of(std::move(X), std::move(r));
}

}  // namespace diagarcs
