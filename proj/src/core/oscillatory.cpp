#include "core/oscillatory.hpp"

#include "core/errors.hpp"
#include "core/parallel.hpp"
#include "core/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <map>
#include <string>

namespace diagarcs {

const char* to_string(IntegralRoute r) {
    return r == IntegralRoute::truncated_iterated ? "truncated_iterated" : "smoothed_mc";
}

QuadratureResult v_k(const ExponentTuple& k, std::span<const double> beta, double X) {
    if (beta.size() != k.size())
        fail(ErrorKind::input, "beta has " + std::to_string(beta.size()) + " entries, expected " + std::to_string(k.size()));
    if (!(X > 0) || !std::isfinite(X)) fail(ErrorKind::input, "X must be positive");
    // the largest |d/dt| of the phase on [-1, 1] fixes the panel width; half a
    // period per panel lets the 15-point rule meet 1e-10 without bisecting
    double D = 0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (!std::isfinite(beta[i])) fail(ErrorKind::input, "beta is not finite");
        D += std::abs(beta[i]) * k[i] * std::pow(X, k[i]);
    }
    if (D == 0) return {2.0, 0.0, 0, IntegralRoute::truncated_iterated};
    const double panels = std::ceil(4 * D);
    if (panels * 15 > double(kMaxEvaluations))
        fail(ErrorKind::budget, "v_k needs about " + std::to_string(panels * 15) + " evaluations");
    auto f = [&](double t) {
        const double y = X * t;
        double p = 0, pw = 1;
        int deg = 0;
        for (std::size_t i = 0; i < k.size(); ++i) {
            for (; deg < k[i]; ++deg) pw *= y;
            p += beta[i] * pw;
        }
        return unit_root(p);
    };
    AdaptiveResult r = integrate_adaptive(f, -1.0, 1.0, std::size_t(panels), kOscillatoryTol, kMaxEvaluations);
    return {r.value, r.abs_error, r.evaluations, IntegralRoute::truncated_iterated};
}

QuadratureResult v_system(const DiagonalSystem& F, std::span<const double> beta, double X) {
    const std::size_t n = F.n(), s = F.s();
    if (beta.size() != n)
        fail(ErrorKind::input, "beta has " + std::to_string(beta.size()) + " entries, expected " + std::to_string(n));
    std::map<std::vector<std::int64_t>, QuadratureResult> memo;
    Complex value = 1.0;
    double upper = 1.0;  // prod (|v_j| + err_j)
    double exact = 1.0;  // prod |v_j|
    std::uint64_t evals = 0;
    std::vector<double> gamma(n);
    for (std::size_t j = 0; j < s; ++j) {
        std::vector<std::int64_t> col = F.column(j);
        std::vector<std::int64_t> neg(col);
        for (auto& c : neg) c = -c;
        QuadratureResult r;
        if (auto it = memo.find(col); it != memo.end()) {
            r = it->second;
        } else if (auto jt = memo.find(neg); jt != memo.end()) {
            // gamma(-u) = -gamma(u) exactly, and v_k(-gamma) is the conjugate
            r = jt->second;
            r.value = std::conj(r.value);
        } else {
            for (std::size_t i = 0; i < n; ++i) gamma[i] = double(col[i]) * beta[i];
            r = v_k(F.k(), gamma, X);
            evals += r.evaluations;
            memo.emplace(col, r);
        }
        value *= r.value;
        upper *= std::abs(r.value) + r.abs_error_estimate;
        exact *= std::abs(r.value);
    }
    return {value, std::max(0.0, upper - exact), evals, IntegralRoute::truncated_iterated};
}

DecayReport decay_check(const ExponentTuple& k, int sample_count, std::uint64_t seed) {
    if (sample_count < 2) fail(ErrorKind::input, "decay_check needs at least 2 samples");
    const std::size_t n = k.size();
    std::vector<DecaySample> samples(static_cast<std::size_t>(sample_count));
    parallel_for(samples.size(), [&](std::size_t i) {
        BlockRng rng(seed, i);
        const double l1 = std::pow(10.0, 6.0 * rng.uniform());
        std::vector<double> dir(n);
        double norm = 0;
        for (auto& d : dir) {
            d = rng.uniform(-1.0, 1.0);
            norm += std::abs(d);
        }
        if (norm == 0) dir[0] = norm = 1;
        std::vector<double> beta(n);
        for (std::size_t j = 0; j < n; ++j) beta[j] = l1 * dir[j] / norm;
        const double v = std::abs(v_k(k, beta, 1.0).value);
        samples[i] = {beta, l1, v, v * std::pow(1 + l1, 1.0 / k.top())};
    });
    std::stable_sort(samples.begin(), samples.end(), [](const auto& a, const auto& b) { return a.l1 < b.l1; });
    DecayReport rep{std::move(samples), 0, 0, 0, false};
    const std::size_t half = rep.samples.size() / 2;
    for (std::size_t i = 0; i < rep.samples.size(); ++i) {
        double& slot = i < half ? rep.first_half_max : rep.second_half_max;
        slot = std::max(slot, rep.samples[i].statistic);
    }
    rep.max_statistic = std::max(rep.first_half_max, rep.second_half_max);
    rep.stable = rep.second_half_max <= 2 * rep.first_half_max;
    return rep;
}

namespace {

void check_convergent(const DiagonalSystem& F) {
    const std::size_t bound = F.n() * std::size_t(F.k().top());
    if (F.s() <= bound)
        fail(ErrorKind::precondition, "singular integral diverges: s = " + std::to_string(F.s()) +
                                          " must exceed n k_n = " + std::to_string(bound));
}

// Iterated adaptive quadrature of v[F](beta; 1) over the first coordinate in
// [0, U] and the rest in [-U, U]; the conjugate symmetry in beta supplies the
// other half of the first coordinate.
struct Iterated {
    const DiagonalSystem& F;
    double U;
    std::vector<double> beta;
    std::vector<double> tol;        // per level
    std::vector<double> max_error;  // per level, largest adaptive error seen
    double leaf_error = 0;
    std::uint64_t evaluations = 0;

    double length(std::size_t d) const { return d == 0 ? U : 2 * U; }

    Complex level(std::size_t d) {
        const double lo = d == 0 ? 0.0 : -U;
        // one panel per period of beta_d -> e(beta_d F_d(t)), |F_d| <= row sum
        const double per = double(F.row_abs_sum(d));
        const std::size_t panels = std::size_t(std::ceil(length(d) * per));
        auto f = [&](double b) -> Complex {
            beta[d] = b;
            if (d + 1 == F.n()) {
                QuadratureResult r = v_system(F, beta, 1.0);
                evaluations += r.evaluations;
                leaf_error = std::max(leaf_error, r.abs_error_estimate);
                return r.value;
            }
            return level(d + 1);
        };
        AdaptiveResult r = integrate_adaptive(f, lo, U, panels, tol[d], kMaxEvaluations);
        max_error[d] = std::max(max_error[d], r.abs_error);
        return r.value;
    }

    double total_error() const {
        double e = leaf_error;
        for (std::size_t d = F.n(); d-- > 0;) e = max_error[d] + length(d) * e;
        return 2 * e;
    }
};

QuadratureResult iterated_integral(const DiagonalSystem& F, double U, double tol) {
    Iterated it{F, U, std::vector<double>(F.n(), 0.0), std::vector<double>(F.n()), std::vector<double>(F.n(), 0.0)};
    double t = tol / 4;
    for (std::size_t d = 0; d < F.n(); ++d) {
        it.tol[d] = t;
        t /= 2 * it.length(d);
    }
    Complex half = it.level(0);
    return {2 * half.real(), it.total_error(), it.evaluations, IntegralRoute::truncated_iterated};
}

}  // namespace

QuadratureResult singular_integral_truncated(const DiagonalSystem& F, double U, double tol) {
    check_convergent(F);
    if (F.n() > 3) fail(ErrorKind::precondition, "iterated outer quadrature supports n <= 3");
    if (!(U > 0) || !(tol > 0)) fail(ErrorKind::input, "U and tol must be positive");
    QuadratureResult full = iterated_integral(F, U, tol);
    QuadratureResult half = iterated_integral(F, U / 2, tol);
    // the tail beyond U decays like U^{n - s/k_n}, so the last doubling
    // predicts everything past U by a geometric sum
    const double decay = double(F.s()) / F.k().top() - double(F.n());
    const double tail = std::abs(full.value.real() - half.value.real()) / (std::pow(2.0, decay) - 1);
    full.tail_bound = tail;
    full.abs_error_estimate += tail;
    full.evaluations += half.evaluations;
    return full;
}

QuadratureResult singular_integral_smoothed(const DiagonalSystem& F, double T, std::uint64_t samples, std::uint64_t seed) {
    if (samples == 0) fail(ErrorKind::input, "samples must be positive");
    if (!(T >= 1) || !std::isfinite(T)) fail(ErrorKind::precondition, "T must be at least 1");
    const std::size_t n = F.n(), s = F.s();
    constexpr std::uint64_t kBlock = 1 << 16;
    const std::uint64_t blocks = (samples + kBlock - 1) / kBlock;
    struct Sums {
        long double w = 0, w2 = 0, h = 0, g = 0;  // widths 1/T, 2/T, 4/T on the same points
    };
    std::vector<Sums> partial(blocks);
    std::vector<double> u(n * s);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < s; ++j) u[i * s + j] = double(F.coeff(i, j));
    const double Th = T / 2, Tg = T / 4;
    const double scale = std::pow(T, double(n)), scale_h = std::pow(Th, double(n)), scale_g = std::pow(Tg, double(n));
    parallel_for(std::size_t(blocks), [&](std::size_t b) {
        BlockRng rng(seed, b);
        const std::uint64_t count = std::min<std::uint64_t>(kBlock, samples - b * kBlock);
        std::vector<double> t(s), val(n);
        Sums acc;
        for (std::uint64_t m = 0; m < count; ++m) {
            for (auto& x : t) x = rng.uniform(-1.0, 1.0);
            std::fill(val.begin(), val.end(), 0.0);
            for (std::size_t j = 0; j < s; ++j) {
                double pw = 1;
                int deg = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    for (; deg < F.k()[i]; ++deg) pw *= t[j];
                    val[i] += u[i * s + j] * pw;
                }
            }
            double w = scale, h = scale_h, g = scale_g;
            for (std::size_t i = 0; i < n; ++i) {
                w *= std::max(0.0, 1 - T * std::abs(val[i]));
                h *= std::max(0.0, 1 - Th * std::abs(val[i]));
                g *= std::max(0.0, 1 - Tg * std::abs(val[i]));
            }
            acc.w += w;
            acc.w2 += (long double)w * w;
            acc.h += h;
            acc.g += g;
        }
        partial[b] = acc;
    });
    Sums tot;
    for (const auto& p : partial) {
        tot.w += p.w;
        tot.w2 += p.w2;
        tot.h += p.h;
        tot.g += p.g;
    }
    const long double N = (long double)samples;
    const double vol = std::ldexp(1.0, int(s));
    const double mean = double(tot.w / N);
    const double var = samples > 1 ? double(std::max((long double)0, (tot.w2 - tot.w * tot.w / N) / (N - 1))) : 0.0;
    QuadratureResult r;
    r.value = vol * mean;
    r.standard_error = vol * std::sqrt(var / double(samples));
    // Smoothing error ~ C T^{-p}; the ratio of successive differences estimates 2^p.
    // p = 1 for a density with a corner, 1/2 for a square-root cusp. At T/4 the
    // differences are often not yet in that regime and overstate p, so the
    // rate is never taken faster than the square-root one.
    const double d1 = vol * double((tot.w - tot.h) / N), d2 = vol * double((tot.h - tot.g) / N);
    const double ratio = std::clamp(d1 != 0 ? d2 / d1 : std::numbers::sqrt2, 1.25, std::numbers::sqrt2);
    r.bias_estimate = std::abs(d1) / (ratio - 1);
    r.abs_error_estimate = 3 * r.standard_error + r.bias_estimate;
    r.evaluations = samples;
    r.route = IntegralRoute::smoothed_mc;
    return r;
}

namespace {

// Forms and Jacobian with each row scaled by its coefficient l1 norm.
struct Scaled {
    const DiagonalSystem& F;
    std::vector<double> row_scale;

    explicit Scaled(const DiagonalSystem& F) : F(F) {
        for (std::size_t i = 0; i < F.n(); ++i) row_scale.push_back(1.0 / double(F.row_abs_sum(i)));
    }

    void eval(const Eigen::VectorXd& x, Eigen::VectorXd& val, Eigen::MatrixXd* J) const {
        const std::size_t n = F.n(), s = F.s();
        val.setZero(Eigen::Index(n));
        if (J) J->setZero(Eigen::Index(n), Eigen::Index(s));
        for (std::size_t i = 0; i < n; ++i) {
            const int k = F.k()[i];
            for (std::size_t j = 0; j < s; ++j) {
                const double c = double(F.coeff(i, j)) * row_scale[i];
                const double d = std::pow(x[Eigen::Index(j)], k - 1);
                val[Eigen::Index(i)] += c * d * x[Eigen::Index(j)];
                if (J) (*J)(Eigen::Index(i), Eigen::Index(j)) = c * k * d;
            }
        }
    }
};

std::vector<std::size_t> pivot_columns(const Eigen::MatrixXd& J) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(J);
    std::vector<std::size_t> cols;
    for (Eigen::Index c = 0; c < J.rows(); ++c) cols.push_back(std::size_t(qr.colsPermutation().indices()[c]));
    return cols;
}

Eigen::MatrixXd minor_of(const Eigen::MatrixXd& J, const std::vector<std::size_t>& cols) {
    Eigen::MatrixXd M(J.rows(), Eigen::Index(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) M.col(Eigen::Index(c)) = J.col(Eigen::Index(cols[c]));
    return M;
}

void normalize(Eigen::VectorXd& x) {
    const double m = x.cwiseAbs().maxCoeff();
    if (m > 0) x /= m;
}

// Damped Newton on the pivot minor; returns the final sup residual.
double newton(const Scaled& sys, Eigen::VectorXd& x, int iterations) {
    Eigen::VectorXd val, trial_val;
    Eigen::MatrixXd J;
    sys.eval(x, val, &J);
    double res = val.cwiseAbs().maxCoeff();
    for (int it = 0; it < iterations && res > 1e-15; ++it) {
        const auto cols = pivot_columns(J);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(minor_of(J, cols));
        if (!lu.isInvertible()) break;
        Eigen::VectorXd step = lu.solve(-val);
        bool accepted = false;
        for (double lambda = 1.0; lambda > 1e-6; lambda /= 2) {
            Eigen::VectorXd trial = x;
            for (std::size_t c = 0; c < cols.size(); ++c) trial[Eigen::Index(cols[c])] += lambda * step[Eigen::Index(c)];
            sys.eval(trial, trial_val, nullptr);
            const double r = trial_val.cwiseAbs().maxCoeff();
            if (r < res) {
                x = trial;
                res = r;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
        // zeros of homogeneous forms scale; keep the iterate on the unit sup-sphere
        const double m = x.cwiseAbs().maxCoeff();
        if (m > 2 || m < 0.5) {
            normalize(x);
        }
        sys.eval(x, val, &J);
        res = val.cwiseAbs().maxCoeff();
    }
    return res;
}

}  // namespace

std::optional<RealCertificate> real_nonsingular_search(const DiagonalSystem& F, int attempts, std::uint64_t seed) {
    if (F.s() < F.n()) fail(ErrorKind::precondition, "real search needs s >= n");
    const Scaled sys(F);
    const std::size_t s = F.s();
    for (int a = 0; a < attempts; ++a) {
        BlockRng rng(seed, std::uint64_t(a));
        Eigen::VectorXd x(static_cast<Eigen::Index>(s));
        for (std::size_t j = 0; j < s; ++j) x[Eigen::Index(j)] = rng.uniform(-1.0, 1.0);
        newton(sys, x, 200);
        normalize(x);
        newton(sys, x, 20);
        normalize(x);
        Eigen::VectorXd val;
        Eigen::MatrixXd J;
        sys.eval(x, val, &J);
        const double residual = val.cwiseAbs().maxCoeff();
        if (!(residual <= 1e-8)) continue;
        const auto cols = pivot_columns(J);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(minor_of(J, cols));
        const double sigma = svd.singularValues().minCoeff();
        if (!(sigma > 1e-6)) continue;
        RealCertificate cert{std::vector<double>(x.data(), x.data() + x.size()), residual, sigma, cols};
        return cert;
    }
    return std::nullopt;
}

}  // namespace diagarcs
