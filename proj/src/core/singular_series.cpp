#include "core/singular_series.hpp"

#include "core/errors.hpp"
#include "core/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <string>

namespace diagarcs {

namespace {

std::int64_t ipow(std::int64_t b, int e) {
    i128 r = pow_checked(b, e);
    if (r > INT64_MAX) fail(ErrorKind::overflow, "prime power exceeds 64 bits");
    return std::int64_t(r);
}

// Distinct residue vectors (c_i r^{k_i} mod q)_i over r in Z/q, with multiplicity.
std::vector<std::pair<std::vector<std::int64_t>, std::uint64_t>> residue_values(const ExponentTuple& k,
                                                                                 std::span<const std::int64_t> c,
                                                                                 std::int64_t q) {
    std::map<std::vector<std::int64_t>, std::uint64_t> seen;
    std::vector<std::int64_t> v(k.size());
    for (std::int64_t r = 0; r < q; ++r) {
        for (std::size_t i = 0; i < k.size(); ++i) {
            std::int64_t p = 1 % q;
            for (int e = 0; e < k[i]; ++e) p = mul_mod(p, r, q);
            v[i] = mul_mod(mod_floor(c[i], q), p, q);
        }
        ++seen[v];
    }
    return {seen.begin(), seen.end()};
}

// S(q; c) for every c in (Z/q)^n, flattened with c_1 most significant.
std::vector<Complex> dense_complete_sums(const ExponentTuple& k, std::int64_t q, std::size_t cells) {
    const std::size_t n = k.size();
    std::vector<std::int64_t> ones(n, 1);
    auto powers = residue_values(k, ones, q);
    std::vector<Complex> roots(static_cast<std::size_t>(q));
    for (std::int64_t m = 0; m < q; ++m) roots[std::size_t(m)] = unit_root(m, q);
    std::vector<Complex> table(cells, 0.0);
    std::vector<std::int64_t> c(n), phase(n + 1);
    for (const auto& [P, mult] : powers) {
        const double w = double(mult);
        std::fill(c.begin(), c.end(), 0);
        std::fill(phase.begin(), phase.end(), 0);  // phase[i] = sum_{i' < i} c_i' P_i' mod q
        for (std::size_t idx = 0; idx < cells; ++idx) {
            std::int64_t tot = phase[n - 1] + mul_mod(c[n - 1], P[n - 1], q);
            if (tot >= q) tot -= q;
            table[idx] += w * roots[std::size_t(tot)];
            // odometer step, last coordinate fastest
            std::size_t i = n;
            while (i > 0) {
                if (++c[i - 1] < q) break;
                c[i - 1] = 0;
                --i;
            }
            if (i == 0) break;
            for (std::size_t t = i - 1; t + 1 < n; ++t) {
                std::int64_t nx = phase[t] + mul_mod(c[t], P[t], q);
                phase[t + 1] = nx >= q ? nx - q : nx;
            }
        }
    }
    return table;
}

void check_q(std::int64_t q, std::size_t n) {
    if (q < 1) fail(ErrorKind::input, "q must be >= 1");
    if (sat_pow(std::uint64_t(q), n) > kMaxResidueTuples)
        fail(ErrorKind::budget, "q^n = " + std::to_string(q) + "^" + std::to_string(n) + " exceeds the residue budget");
}

}  // namespace

Complex T_q_complex(const DiagonalSystem& F, std::int64_t q) {
    const std::size_t n = F.n(), s = F.s();
    check_q(q, n);
    if (q == 1) return 1.0;
    const std::size_t cells = std::size_t(sat_pow(std::uint64_t(q), n));
    constexpr std::size_t kDenseCells = 4'000'000;
    std::vector<Complex> dense;
    std::unique_ptr<CompleteSumTable> table;
    if (cells <= kDenseCells)
        dense = dense_complete_sums(F.k(), q, cells);
    else
        table = std::make_unique<CompleteSumTable>(F.k(), q);
    std::vector<std::int64_t> umod(n * s);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < s; ++j) umod[i * s + j] = mod_floor(F.coeff(i, j), q);
    ComplexSum sum;
    std::vector<std::int64_t> a(n, 1), g(n + 1), c(n);
    std::map<std::vector<std::int64_t>, Complex> memo;
    for (;;) {
        // content of (a_1..a_n, q) by prefix gcds
        g[0] = q;
        for (std::size_t i = 0; i < n; ++i) g[i + 1] = gcd64(g[i], a[i]);
        if (g[n] == 1) {
            Complex prod = 1.0;
            for (std::size_t j = 0; j < s; ++j) {
                std::size_t idx = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    c[i] = mul_mod(umod[i * s + j], a[i] % q, q);
                    idx = idx * std::size_t(q) + std::size_t(c[i]);
                }
                if (!dense.empty()) {
                    prod *= dense[idx];
                } else {
                    auto it = memo.find(c);
                    if (it == memo.end()) it = memo.emplace(c, (*table)(c)).first;
                    prod *= it->second;
                }
            }
            sum.add(prod);
        }
        std::size_t i = n;
        while (i > 0) {
            if (++a[i - 1] <= q) break;
            a[i - 1] = 1;
            --i;
        }
        if (i == 0) break;
        if (memo.size() > 1'000'000) memo.clear();
    }
    return sum.value() * std::pow(double(q), -double(s));
}

double T_q(const DiagonalSystem& F, std::int64_t q) {
    Complex t = T_q_complex(F, q);
    const double limit = 1e-9 * std::pow(double(q), double(F.n()));
    if (std::abs(t.imag()) > limit)
        fail(ErrorKind::numeric, "T(" + std::to_string(q) + ") has imaginary part " + std::to_string(t.imag()));
    return t.real();
}

SeriesApproximation series_truncated(const DiagonalSystem& F, std::int64_t Q_cut, double eps) {
    const std::size_t n = F.n(), s = F.s();
    const int kn = F.k().top();
    if (s <= (n + 1) * std::size_t(kn))
        fail(ErrorKind::precondition, "singular series diverges: s = " + std::to_string(s) + " must exceed (n+1) k_n = " +
                                          std::to_string((n + 1) * std::size_t(kn)));
    if (Q_cut < 1) fail(ErrorKind::input, "Q_cut must be >= 1");
    if (!(eps > 0)) fail(ErrorKind::input, "eps must be positive");
    std::vector<double> terms(static_cast<std::size_t>(Q_cut));
    // largest q first so the expensive terms spread across workers
    parallel_for(terms.size(), [&](std::size_t i) {
        const std::int64_t q = Q_cut - std::int64_t(i);
        terms[std::size_t(q - 1)] = T_q(F, q);
    });
    SeriesApproximation out{0, Q_cut, eps, 0, 0, {}};
    long double total = 0;
    for (std::int64_t q = 1; q <= Q_cut; ++q) {
        const double t = terms[std::size_t(q - 1)];
        total += t;
        out.per_q_terms.emplace_back(q, t);
    }
    out.partial_sum = double(total);
    const double e = double(n) - double(s) / kn + eps;
    for (std::int64_t q = std::max<std::int64_t>(1, Q_cut / 2); q <= Q_cut; ++q)
        out.fitted_constant = std::max(out.fitted_constant, std::abs(terms[std::size_t(q - 1)]) / std::pow(double(q), e));
    out.tail_report = e + 1 < 0 ? out.fitted_constant * std::pow(double(Q_cut), e + 1) / -(e + 1)
                                : std::numeric_limits<double>::infinity();
    return out;
}

BigInt count_mod(const DiagonalSystem& F, std::int64_t q, const Budget& budget) {
    const std::size_t n = F.n(), s = F.s();
    if (q < 1) fail(ErrorKind::input, "q must be >= 1");
    if (q == 1) return 1;
    if (double(s) * std::log2(double(q)) >= 126)
        fail(ErrorKind::overflow, "q^s exceeds the 128-bit residue counters");
    const std::uint64_t cells = sat_pow(std::uint64_t(q), n);
    if (sat_mul(cells, 2 * sizeof(u128)) > budget.max_bytes)
        fail(ErrorKind::budget, "residue distribution needs more memory than the budget allows");
    if (cells > budget.max_tuples) fail(ErrorKind::budget, "q^n exceeds the tuple budget");
    // D[c] = number of prefixes x_1..x_j with partial form values c mod q
    std::vector<u128> D(cells, 0), next(cells);
    D[0] = 1;
    std::vector<std::int64_t> col(n), c(n);
    std::vector<std::size_t> stride(n);
    for (std::size_t i = n; i-- > 0;) stride[i] = i + 1 == n ? 1 : stride[i + 1] * std::size_t(q);
    for (std::size_t j = 0; j < s; ++j) {
        for (std::size_t i = 0; i < n; ++i) col[i] = F.coeff(i, j);
        auto values = residue_values(F.k(), col, q);
        std::fill(next.begin(), next.end(), 0);
        std::fill(c.begin(), c.end(), 0);
        for (std::size_t idx = 0; idx < cells; ++idx) {
            if (D[idx] != 0) {
                for (const auto& [v, mult] : values) {
                    std::size_t target = 0;
                    for (std::size_t i = 0; i < n; ++i) {
                        std::int64_t t = c[i] + v[i];
                        if (t >= q) t -= q;
                        target += std::size_t(t) * stride[i];
                    }
                    next[target] += D[idx] * mult;
                }
            }
            for (std::size_t i = n; i-- > 0;) {
                if (++c[i] < q) break;
                c[i] = 0;
            }
        }
        D.swap(next);
    }
    return to_big(D[0]);
}

BigInt count_mod_direct(const DiagonalSystem& F, std::int64_t q) {
    const std::size_t n = F.n(), s = F.s();
    if (q < 1) fail(ErrorKind::input, "q must be >= 1");
    if (sat_pow(std::uint64_t(q), s) > 1'000'000'000ULL)
        fail(ErrorKind::budget, "direct residue enumeration needs q^s <= 10^9");
    // contrib[j][x][i] = u_ij x^{k_i} mod q
    std::vector<std::int64_t> contrib(s * std::size_t(q) * n);
    for (std::size_t j = 0; j < s; ++j)
        for (std::int64_t x = 0; x < q; ++x)
            for (std::size_t i = 0; i < n; ++i) {
                std::int64_t p = 1 % q;
                for (int e = 0; e < F.k()[i]; ++e) p = mul_mod(p, x, q);
                contrib[(j * std::size_t(q) + std::size_t(x)) * n + i] = mul_mod(mod_floor(F.coeff(i, j), q), p, q);
            }
    std::uint64_t count = 0;
    std::vector<std::int64_t> partial((s + 1) * n, 0);
    auto rec = [&](auto& self, std::size_t j) -> void {
        const std::int64_t* base = &partial[j * n];
        std::int64_t* out = &partial[(j + 1) * n];
        for (std::int64_t x = 0; x < q; ++x) {
            const std::int64_t* add = &contrib[(j * std::size_t(q) + std::size_t(x)) * n];
            bool zero = true;
            for (std::size_t i = 0; i < n; ++i) {
                out[i] = (base[i] + add[i]) % q;
                zero = zero && out[i] == 0;
            }
            if (j + 1 == s)
                count += zero;
            else
                self(self, j + 1);
        }
    };
    rec(rec, 0);
    return BigInt(count);
}

EulerCheck euler_identity_check(const DiagonalSystem& F, std::int64_t p, int H, const Budget& budget) {
    if (!is_prime(p)) fail(ErrorKind::input, std::to_string(p) + " is not prime");
    if (H < 1) fail(ErrorKind::input, "H must be >= 1");
    long double lhs = 0;
    for (int h = 0; h <= H; ++h) lhs += T_q(F, ipow(p, h));
    const BigInt M = count_mod(F, ipow(p, H), budget);
    const long double scale = std::pow((long double)p, (long double)H * ((long double)F.n() - (long double)F.s()));
    const long double rhs = M.convert_to<long double>() * scale;
    const long double diff = std::fabs(lhs - rhs);
    const bool holds = diff <= 1e-8L * std::max(std::fabs(lhs), std::fabs(rhs)) || diff < 1e-300L;
    return {double(lhs), double(rhs), holds};
}

bool is_prime(std::int64_t p) {
    if (p < 2) return false;
    for (std::int64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

int p_valuation(const BigInt& x, std::int64_t p) {
    if (x == 0) fail(ErrorKind::input, "valuation of zero");
    BigInt y = x;
    int v = 0;
    while (y % p == 0) {
        y /= p;
        ++v;
    }
    return v;
}

namespace {

using Matrix = std::vector<std::vector<BigInt>>;

// Fraction-free Gaussian elimination.
BigInt bareiss(Matrix m) {
    const std::size_t n = m.size();
    if (n == 0) return 1;
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t r = k + 1;
            while (r < n && m[r][k] == 0) ++r;
            if (r == n) return 0;
            std::swap(m[k], m[r]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

Matrix jacobian_minor(const DiagonalSystem& F, std::span<const BigInt> x, std::span<const std::size_t> cols) {
    const std::size_t n = F.n();
    Matrix J(n, std::vector<BigInt>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < n; ++c) {
            const int k = F.k()[i];
            J[i][c] = BigInt(F.coeff(i, cols[c])) * k * boost::multiprecision::pow(x[cols[c]], unsigned(k - 1));
        }
    return J;
}

std::vector<BigInt> forms_at(const DiagonalSystem& F, std::span<const BigInt> x) {
    std::vector<BigInt> out(F.n());
    for (std::size_t i = 0; i < F.n(); ++i)
        for (std::size_t j = 0; j < F.s(); ++j)
            out[i] += BigInt(F.coeff(i, j)) * boost::multiprecision::pow(x[j], unsigned(F.k()[i]));
    return out;
}

BigInt mod_pos(const BigInt& a, const BigInt& m) {
    BigInt r = a % m;
    return r < 0 ? r + m : r;
}

BigInt inverse_mod(const BigInt& a, const BigInt& m) {
    BigInt r0 = mod_pos(a, m), r1 = m, s0 = 1, s1 = 0;
    while (r1 != 0) {
        BigInt t = r0 / r1;
        r0 -= t * r1;
        std::swap(r0, r1);
        s0 -= t * s1;
        std::swap(s0, s1);
    }
    if (r0 != 1) fail(ErrorKind::numeric, "unit is not invertible");
    return mod_pos(s0, m);
}

bool all_divisible(std::span<const BigInt> v, const BigInt& m) {
    return std::all_of(v.begin(), v.end(), [&](const BigInt& e) { return e % m == 0; });
}

void check_columns(const DiagonalSystem& F, std::span<const std::size_t> cols) {
    if (cols.size() != F.n())
        fail(ErrorKind::input, "minor needs " + std::to_string(F.n()) + " columns, got " + std::to_string(cols.size()));
    std::vector<std::size_t> sorted(cols.begin(), cols.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) fail(ErrorKind::input, "minor columns repeat");
    if (!sorted.empty() && sorted.back() >= F.s()) fail(ErrorKind::input, "minor column out of range");
}

}  // namespace

BigInt minor_determinant(const DiagonalSystem& F, std::span<const BigInt> x, std::span<const std::size_t> columns) {
    check_columns(F, columns);
    return bareiss(jacobian_minor(F, x, columns));
}

std::vector<BigInt> hensel_lift(const DiagonalSystem& F, std::int64_t p, std::span<const BigInt> seed,
                                std::span<const std::size_t> minor_columns, int H) {
    const std::size_t n = F.n();
    if (!is_prime(p)) fail(ErrorKind::input, std::to_string(p) + " is not prime");
    if (seed.size() != F.s()) fail(ErrorKind::input, "seed has the wrong length");
    if (H < 1) fail(ErrorKind::input, "H must be >= 1");
    check_columns(F, minor_columns);
    const BigInt det0 = bareiss(jacobian_minor(F, seed, minor_columns));
    if (det0 == 0) fail(ErrorKind::precondition, "singular minor at the seed");
    const int v = p_valuation(det0, p);
    const int u = 2 * v + 1;
    const BigInt pu = boost::multiprecision::pow(BigInt(p), unsigned(u));
    if (!all_divisible(forms_at(F, seed), pu))
        fail(ErrorKind::precondition, "seed is not a zero mod p^" + std::to_string(u) + " (minor valuation " +
                                          std::to_string(v) + ")");
    const BigInt pH = boost::multiprecision::pow(BigInt(p), unsigned(H));
    const BigInt pv = boost::multiprecision::pow(BigInt(p), unsigned(v));
    const BigInt PN = boost::multiprecision::pow(BigInt(p), unsigned(H + v + 1));
    std::vector<BigInt> x(seed.begin(), seed.end());
    for (auto& e : x) e = mod_pos(e, PN);
    for (int iter = 0;; ++iter) {
        const std::vector<BigInt> Fx = forms_at(F, x);
        if (all_divisible(Fx, pH)) break;
        if (iter > 4 * H + 64) fail(ErrorKind::convergence, "Hensel iteration did not converge");
        Matrix J = jacobian_minor(F, x, minor_columns);
        const BigInt det = bareiss(J);
        if (det == 0 || p_valuation(det, p) != v) fail(ErrorKind::numeric, "minor valuation drifted during lifting");
        const BigInt winv = inverse_mod(det / pv, PN);
        // delta = adj(J) F / det, with det = p^v w
        for (std::size_t c = 0; c < n; ++c) {
            BigInt acc = 0;
            for (std::size_t i = 0; i < n; ++i) {
                Matrix M;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == i) continue;
                    std::vector<BigInt> row;
                    for (std::size_t cc = 0; cc < n; ++cc)
                        if (cc != c) row.push_back(J[r][cc]);
                    M.push_back(std::move(row));
                }
                const BigInt cof = ((i + c) % 2 ? -1 : 1) * bareiss(std::move(M));
                acc += cof * Fx[i];
            }
            if (acc % pv != 0) fail(ErrorKind::numeric, "Newton correction not divisible by p^v");
            const BigInt delta = mod_pos((acc / pv) * winv, PN);
            x[minor_columns[c]] = mod_pos(x[minor_columns[c]] - delta, PN);
        }
    }
    for (auto& e : x) e = mod_pos(e, pH);
    // postconditions, evaluated afresh
    if (!all_divisible(forms_at(F, x), pH)) fail(ErrorKind::numeric, "lift is not a zero mod p^H");
    const BigInt check = boost::multiprecision::pow(BigInt(p), unsigned(std::min(v + 1, H)));
    for (std::size_t j = 0; j < x.size(); ++j)
        if (mod_pos(x[j] - seed[j], check) != 0) fail(ErrorKind::numeric, "lift left the seed class");
    return x;
}

namespace {

// Determinant mod m by cofactor expansion; n is small.
std::int64_t det_mod(std::vector<std::int64_t>& a, std::size_t n, std::int64_t m) {
    if (n == 1) return mod_floor(a[0], m);
    std::int64_t total = 0;
    std::vector<std::int64_t> sub((n - 1) * (n - 1));
    for (std::size_t c = 0; c < n; ++c) {
        if (a[c] == 0) continue;
        for (std::size_t r = 1; r < n; ++r)
            for (std::size_t cc = 0, k = 0; cc < n; ++cc)
                if (cc != c) sub[(r - 1) * (n - 1) + k++] = a[r * n + cc];
        std::int64_t term = mul_mod(a[c], det_mod(sub, n - 1, m), m);
        total = mod_floor(c % 2 ? total - term : total + term, m);
    }
    return total;
}

struct MinorChoice {
    int v = -1;  // -1: every minor vanishes mod p^u
    std::vector<std::size_t> cols;
};

MinorChoice best_minor(const DiagonalSystem& F, std::span<const std::int64_t> x, std::int64_t p, std::int64_t pu) {
    const std::size_t n = F.n(), s = F.s();
    MinorChoice best;
    std::vector<std::size_t> cols(n);
    for (std::size_t i = 0; i < n; ++i) cols[i] = i;
    std::vector<std::int64_t> a(n * n);
    for (;;) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t c = 0; c < n; ++c) {
                const int k = F.k()[i];
                std::int64_t pw = 1 % pu;
                for (int e = 0; e < k - 1; ++e) pw = mul_mod(pw, x[cols[c]], pu);
                a[i * n + c] = mul_mod(mul_mod(mod_floor(F.coeff(i, cols[c]), pu), k % pu, pu), pw, pu);
            }
        std::int64_t d = det_mod(a, n, pu);
        if (d != 0) {
            int v = 0;
            while (d % p == 0) {
                d /= p;
                ++v;
            }
            if (best.v < 0 || v < best.v) best = {v, cols};
            if (v == 0) return best;
        }
        // next combination in lexicographic order
        std::size_t i = n;
        while (i > 0 && cols[i - 1] == s - n + i - 1) --i;
        if (i == 0) return best;
        ++cols[i - 1];
        for (std::size_t t = i; t < n; ++t) cols[t] = cols[t - 1] + 1;
    }
}

bool is_zero_mod(const DiagonalSystem& F, std::span<const std::int64_t> x, std::int64_t m) {
    for (std::size_t i = 0; i < F.n(); ++i) {
        std::int64_t acc = 0;
        for (std::size_t j = 0; j < F.s(); ++j) {
            std::int64_t pw = 1 % m;
            for (int e = 0; e < F.k()[i]; ++e) pw = mul_mod(pw, x[j], m);
            acc = (acc + mul_mod(mod_floor(F.coeff(i, j), m), pw, m)) % m;
        }
        if (acc != 0) return false;
    }
    return true;
}

}  // namespace

PadicSearch padic_search(const DiagonalSystem& F, std::int64_t p, std::uint64_t max_points, std::uint64_t seed) {
    if (!is_prime(p)) fail(ErrorKind::input, std::to_string(p) + " is not prime");
    const std::size_t s = F.s();
    PadicSearch out{std::nullopt, 0, true, 0};
    std::vector<std::int64_t> x(s);
    auto try_point = [&](int u, std::int64_t pu) -> bool {
        ++out.points;
        if (!is_zero_mod(F, x, pu)) return false;
        MinorChoice mc = best_minor(F, x, p, pu);
        if (mc.v < 0 || 2 * mc.v + 1 > u) return false;
        PadicCertificate cert;
        cert.p = p;
        cert.v_p = mc.v;
        cert.u_p = 2 * mc.v + 1;
        cert.minor_columns = mc.cols;
        const BigInt mod = boost::multiprecision::pow(BigInt(p), unsigned(cert.u_p));
        for (auto e : x) cert.solution.push_back(BigInt(e) % mod);
        const int H = cert.u_p + 3;
        cert.lifted = hensel_lift(F, p, cert.solution, cert.minor_columns, H);
        const BigInt pH = boost::multiprecision::pow(BigInt(p), unsigned(H));
        cert.lifted_check = all_divisible(forms_at(F, cert.lifted), pH);
        out.certificate = std::move(cert);
        return true;
    };
    for (int u = 1; u <= 15; u += 2) {
        if (out.points >= max_points) break;
        const i128 pu128 = pow_checked(p, u);
        if (pu128 > (i128(1) << 40)) break;
        const std::int64_t pu = std::int64_t(pu128);
        const std::uint64_t remaining = max_points - out.points;
        const std::uint64_t total = sat_pow(std::uint64_t(pu), s);
        out.max_level = u;
        if (total <= remaining) {
            std::fill(x.begin(), x.end(), 0);
            for (;;) {
                if (try_point(u, pu)) return out;
                std::size_t i = s;
                while (i > 0) {
                    if (++x[i - 1] < pu) break;
                    x[i - 1] = 0;
                    --i;
                }
                if (i == 0) break;
            }
        } else {
            out.exhaustive = false;
            BlockRng rng(seed, std::uint64_t(u));
            for (std::uint64_t m = 0; m < remaining; ++m) {
                for (auto& e : x) e = rng.integer(0, pu - 1);
                if (try_point(u, pu)) return out;
            }
            break;
        }
    }
    return out;
}

}  // namespace diagarcs
