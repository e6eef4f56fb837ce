// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include "core/arcs.hpp"
#include "core/errors.hpp"
#include "core/exact_count.hpp"
#include "core/exp_sums.hpp"
#include "core/oscillatory.hpp"
#include "core/parallel.hpp"
#include "core/singular_series.hpp"
#include "support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace diagarcs;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_s > 0 && t > limit_s) {
        o.pass = false;
        o.detail += "; over the " + std::to_string(int(limit_s)) + " s limit";
    }
    if (!o.pass) ++failures;
    std::printf("%s %2d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), t);
    std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::map<std::string, DiagonalSystem> corpus() {
    std::map<std::string, DiagonalSystem> out;
    for (const auto& e : std::filesystem::directory_iterator(CORPUS_DIR))
        if (e.path().extension() == ".json") {
            auto F = load_system(e.path());
            out.emplace(e.path().stem().string(), std::move(F));
        }
    return out;
}

DiagonalSystem random_system(BlockRng& rng, int max_n, std::size_t max_s) {
    const int n = int(rng.integer(1, max_n));
    const std::size_t s = std::size_t(rng.integer(std::int64_t(n) + 1, std::int64_t(max_s)));
    std::vector<int> k{int(rng.integer(1, 3))};
    if (n == 2) k.push_back(k[0] + int(rng.integer(1, 2)));
    std::vector<std::vector<std::int64_t>> u(std::size_t(n), std::vector<std::int64_t>(s, 0));
    for (auto& row : u)
        for (auto& v : row) {
            v = rng.integer(-5, 5);
            if (v == 0) v = -1;
        }
    return oracle::sys(k, u);
}

BigInt pow_big(std::int64_t p, int e) {
    BigInt r = 1;
    for (int i = 0; i < e; ++i) r *= p;
    return r;
}

bool zero_mod(const DiagonalSystem& F, const std::vector<BigInt>& x, const BigInt& m) {
    for (std::size_t i = 0; i < F.n(); ++i) {
        BigInt v = 0;
        for (std::size_t j = 0; j < F.s(); ++j) {
            BigInt t = 1;
            for (int e = 0; e < F.k()[i]; ++e) t *= x[j];
            v += F.coeff(i, j) * t;
        }
        if (v % m != 0) return false;
    }
    return true;
}

bool congruent(const std::vector<BigInt>& x, const std::vector<BigInt>& y, const BigInt& m) {
    for (std::size_t j = 0; j < x.size(); ++j)
        if ((x[j] - y[j]) % m != 0) return false;
    return true;
}

std::vector<std::int64_t> primes_to(std::int64_t m) {
    std::vector<std::int64_t> p;
    for (std::int64_t v = 2; v <= m; ++v)
        if (is_prime(v)) p.push_back(v);
    return p;
}

std::string capture(const std::string& cmd, int& code) {
    FILE* p = ::popen(cmd.c_str(), "r");
    if (!p) {
        code = -1;
        return {};
    }
    std::string out;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, got);
    const int st = ::pclose(p);
    code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return out;
}

}  // namespace

int main() {
    const auto systems = corpus();

    criterion(1, "exact counts, brute force against meet in the middle", 120, [] {
        BlockRng rng(101, 0);
        int systems = 0, mismatches = 0;
        for (int t = 0; t < 60; ++t) {
            auto F = random_system(rng, 2, 4);
            const std::int64_t X = rng.integer(0, 20);
            const BigInt b = count_zeros_brute(F, X).count;
            if (count_zeros_mim(F, X).count != b) ++mismatches;
            // a second, shuffled split
            std::vector<std::size_t> idx(F.s());
            for (std::size_t j = 0; j < idx.size(); ++j) idx[j] = j;
            for (std::size_t j = idx.size(); j > 1; --j) std::swap(idx[j - 1], idx[std::size_t(rng.integer(0, std::int64_t(j) - 1))]);
            const std::size_t cut = std::size_t(rng.integer(1, std::int64_t(F.s()) - 1));
            Split sp{{idx.begin(), idx.begin() + std::ptrdiff_t(cut)}, {idx.begin() + std::ptrdiff_t(cut), idx.end()}};
            if (count_zeros_mim(F, X, sp).count != b) ++mismatches;
            ++systems;
        }
        return Outcome{mismatches == 0, fmt("%d systems, 2 splits each, %d mismatches", systems, mismatches)};
    });

    criterion(2, "moment counts equal Vinogradov counts", 300, [] {
        int cases = 0, bad = 0;
        for (int b = 1; b <= 3; ++b)
            for (int k = 1; k <= 3; ++k)
                for (std::int64_t X : {1, 2, 3, 5, 8, 13, 20, 30}) {
                    const MomentSpec spec{b, ExponentTuple::consecutive(k), Box::positive};
                    if (moment_count(spec, X) != vinogradov_count(b, k, X)) ++bad;
                    ++cases;
                }
        return Outcome{bad == 0, fmt("%d (b, k, X) cases, %d mismatches", cases, bad)};
    });

    criterion(3, "closed-form anchors", 0, [] {
        int bad = 0, cases = 0;
        for (int k = 1; k <= 4; ++k)
            for (std::int64_t X = 1; X <= 50; X += 7) {
                bad += vinogradov_count(1, k, X) != X;
                ++cases;
            }
        bad += vinogradov_count(2, 1, 3) != 19;
        ++cases;
        auto F = oracle::sys({2}, {{1, -1}});
        for (std::int64_t X = 0; X <= 50; ++X) {
            bad += count_zeros_brute(F, X).count != 4 * X + 1;
            bad += count_zeros_mim(F, X).count != 4 * X + 1;
            cases += 2;
        }
        return Outcome{bad == 0, fmt("%d exact values, %d wrong", cases, bad)};
    });

    criterion(4, "finite Euler identity at p = 2, 3, 5, 7 and H <= 3", 300, [&] {
        int checks = 0, bad = 0, skipped = 0;
        double worst = 0;
        for (const auto& [name, F] : systems)
            for (std::int64_t p : {2, 3, 5, 7})
                for (int H = 1; H <= 3; ++H) {
                    // T(p^H) enumerates p^{Hn} residue vectors
                    if (std::pow(double(p), double(H * int(F.n()))) > 4e6) {
                        ++skipped;
                        continue;
                    }
                    const auto e = euler_identity_check(F, p, H);
                    worst = std::max(worst, std::abs(e.lhs - e.rhs) / std::max(1.0, std::abs(e.rhs)));
                    bad += !e.holds;
                    ++checks;
                }
        return Outcome{bad == 0 && checks > 0,
                       fmt("%d (system, p, H) checks over %zu systems, %d failed, worst relative gap %.2e, %d skipped "
                           "(p^{Hn} > 4e6)",
                           checks, systems.size(), bad, worst, skipped)};
    });

    criterion(5, "multiplicativity of T(q)", 120, [&] {
        std::vector<const DiagonalSystem*> pool;
        for (const auto& [name, F] : systems)
            if (F.n() <= 2) pool.push_back(&F);
        BlockRng rng(105, 0);
        std::vector<DiagonalSystem> extra;
        for (int i = 0; i < 10; ++i) extra.push_back(random_system(rng, 2, 6));
        for (const auto& F : extra) pool.push_back(&F);
        int pairs = 0, bad = 0;
        double worst = 0;
        while (pairs < 100) {
            const std::int64_t q1 = rng.integer(2, 40), q2 = rng.integer(2, 40);
            if (q1 * q2 > 500 || gcd64(q1, q2) != 1) continue;
            const auto& F = *pool[std::size_t(rng.integer(0, std::int64_t(pool.size()) - 1))];
            const double prod = T_q(F, q1) * T_q(F, q2);
            const double gap = std::abs(T_q(F, q1 * q2) - prod) / std::max(1.0, std::abs(prod));
            worst = std::max(worst, gap);
            bad += gap > 1e-9;
            ++pairs;
        }
        return Outcome{bad == 0, fmt("%d coprime pairs on %zu systems, worst scaled gap %.2e", pairs, pool.size(), worst)};
    });

    criterion(6, "Hensel postconditions on every corpus certificate", 0, [&] {
        int certs = 0, bad = 0, missing = 0;
        for (const auto& [name, F] : systems)
            for (std::int64_t p : {2, 3, 5, 7}) {
                const auto r = padic_search(F, p, 400'000);
                if (!r.certificate) {
                    ++missing;
                    continue;
                }
                const auto& c = *r.certificate;
                ++certs;
                const BigInt mu = pow_big(p, c.u_p), mv = pow_big(p, c.v_p + 1);
                bool ok = c.u_p == 2 * c.v_p + 1 && zero_mod(F, c.solution, mu);
                std::vector<BigInt> sol(c.solution.begin(), c.solution.end());
                ok = ok && p_valuation(minor_determinant(F, sol, c.minor_columns), p) == c.v_p;
                ok = ok && c.lifted_check && zero_mod(F, c.lifted, pow_big(p, c.u_p + 3)) && congruent(c.lifted, sol, mv);
                for (int H : {c.u_p + 1, c.u_p + 6}) {
                    const auto x = hensel_lift(F, p, sol, c.minor_columns, H);
                    ok = ok && zero_mod(F, x, pow_big(p, H)) && congruent(x, sol, mv);
                }
                bad += !ok;
            }
        return Outcome{bad == 0 && certs > 0,
                       fmt("%d certificates, %d failed verification, %d (system, p) without a certificate", certs, bad,
                           missing)};
    });

    criterion(7, "singular integral, truncated against smoothed", 600, [&] {
        // (name, U, tol); the iterated route costs grow fast with n and s
        const std::vector<std::tuple<std::string, double, double>> plan{
            {"linear_s3", 200, 1e-6},   {"squares_s3", 200, 1e-6}, {"squares_s4", 200, 1e-6},
            {"cubes_s5", 60, 1e-6},     {"k12_s5", 5, 1e-4},       {"k12_s6", 5, 1e-4},
        };
        std::string detail;
        bool ok = true;
        for (const auto& [name, U, tol] : plan) {
            const auto& F = systems.at(name);
            const auto a = singular_integral_truncated(F, U, tol);
            const auto b = singular_integral_smoothed(F, 20, 4'000'000, 7);
            const double gap = std::abs(a.value.real() - b.value.real());
            const bool agree = gap <= a.abs_error_estimate + b.abs_error_estimate;
            ok = ok && agree;
            detail += fmt("%s %.4f+-%.3f vs %.4f+-%.3f%s; ", name.c_str(), a.value.real(), a.abs_error_estimate,
                          b.value.real(), b.abs_error_estimate, agree ? "" : " DISAGREE");
        }
        const auto& L = systems.at("linear_difference");
        const auto anchor = singular_integral_truncated(L, 1000, 1e-8);
        const auto sm = singular_integral_smoothed(L, 20, 4'000'000, 7);
        const bool anchor_ok = std::abs(anchor.value.real() - 2) <= 1e-3;
        const bool pair_ok = std::abs(anchor.value.real() - sm.value.real()) <= anchor.abs_error_estimate + sm.abs_error_estimate;
        ok = ok && anchor_ok && pair_ok;
        detail += fmt("x1-x2 at U=1000: %.6f (|J-2| = %.1e), smoothed %.4f+-%.3f", anchor.value.real(),
                      std::abs(anchor.value.real() - 2), sm.value.real(), sm.abs_error_estimate);
        return Outcome{ok, detail};
    });

    criterion(8, "toy system k=(1,2), s=7: N/(J S X^4) in [0.8, 1.2] at X = 16, 24", 1800, [&] {
        const auto& F = systems.at("toy_k12_s7");
        const auto real = real_nonsingular_search(F, 64, 0);
        int padic_missing = 0;
        const auto ps = primes_to(100);
        for (auto p : ps)
            if (!padic_search(F, p, 400'000).certificate) ++padic_missing;
        const auto J = singular_integral_smoothed(F, 20, 40'000'000, 11);
        const auto S = series_truncated(F, 64, 0.1);
        std::string detail = fmt("real certificate %s, p-adic certificates %zu/%zu, J = %.4f+-%.3f, S = %.5f (tail %.1e)",
                                 real ? "found" : "missing", ps.size() - std::size_t(padic_missing), ps.size(),
                                 J.value.real(), J.abs_error_estimate, S.partial_sum, S.tail_report);
        bool ok = real.has_value() && padic_missing == 0;
        for (std::int64_t X : {16, 24}) {
            const auto t0 = std::chrono::steady_clock::now();
            const auto N = count_zeros_mim(F, X).count;
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            const double ratio = N.convert_to<double>() / (J.value.real() * S.partial_sum * std::pow(double(X), 4));
            ok = ok && ratio >= 0.8 && ratio <= 1.2 && secs < 900;
            detail += fmt("; X=%lld N=%s ratio %.4f (%.0f s)", (long long)X, N.str().c_str(), ratio, secs);
        }
        return Outcome{ok, detail};
    });

    criterion(9, "major-arc approximation error, two-half stability", 600, [] {
        const int degrees[] = {2, 3};
        const auto sw = weyl_major_sweep(degrees, 100, 100, 1000, 200, 0, 0.1);
        double mx = 0;
        for (const auto& s : sw.samples) mx = std::max(mx, s.result.ratio);
        const bool ok = sw.stability.stable && std::isfinite(mx);
        return Outcome{ok, fmt("%zu samples, max error/budget %.3f, first half %.3f, second half %.3f", sw.samples.size(),
                               mx, sw.stability.first_half_max, sw.stability.second_half_max)};
    });

    criterion(10, "van der Corput ratio sweep, two-half stability", 300, [] {
        const auto sw = vdc_sweep(1000, 100, 2000, 0);
        bool finite = true;
        for (double r : sw.ratios) finite = finite && std::isfinite(r);
        return Outcome{finite && sw.stable, fmt("%zu samples, first half %.3f, second half %.3f", sw.ratios.size(),
                                                sw.first_half_max, sw.second_half_max)};
    });

    criterion(11, "pruning regions for k=(1,3,5)", 0, [] {
        std::string detail;
        bool ok = true;
        for (std::int64_t X : {256, 1024})
            for (const auto& w : {std::array<std::int64_t, 3>{1, 1, 1}, std::array<std::int64_t, 3>{1, 2, 3}}) {
                const auto r = region_sweep(X, 10'000, w, 0);
                const std::uint64_t v = r.m3_violations + r.m2_violations + r.cover_violations;
                ok = ok && v == 0 && r.points == 10'000;
                detail += fmt("X=%lld w=(%lld,%lld,%lld): %llu violations, %llu minor, %llu outside m2, m3 %s; ",
                              (long long)X, (long long)w[0], (long long)w[1], (long long)w[2], (unsigned long long)v,
                              (unsigned long long)r.minor_points, (unsigned long long)r.m2_outside,
                              r.m3_vacuous ? "vacuous" : "tested");
            }
        return Outcome{ok, detail};
    });

    criterion(12, "reports identical across 1, 4 and 8 threads", 0, [] {
        const std::string bin = DIAG_ARCS_BIN, dir = CORPUS_DIR;
        const std::vector<std::string> runs{
            "count --system " + dir + "/toy_k12_s7.json --X 6,9 --method mim",
            "count --system " + dir + "/k12_s6.json --X 8",
            "sint --system " + dir + "/squares_s4.json --route smoothed --samples 300000 --seed 5",
            "predict --system " + dir + "/toy_k12_s7.json --X 16 --route smoothed --samples 200000 --Q 16 --primes 2,3",
            "series --system " + dir + "/toy_k12_s7.json --Q 24",
            "weyl --error-sweep --q-max 20 --X-max 300 --samples 30 --seed 2",
            "weyl --vdc-sweep --samples 100 --X-min 10 --X-max 300",
            "arcs --regions --X 256 --points 2000 --seed 3",
            "vmvt --b 2,3 --k 2 --X 5,8,11 --moments",
        };
        int identical = 0, differ = 0, errors = 0;
        for (const auto& args : runs)
            for (const char* fmtflag : {"csv", "json"}) {
                std::vector<std::string> outs;
                for (int t : {1, 4, 8}) {
                    int code = 0;
                    outs.push_back(capture(bin + " --no-timing --format " + fmtflag + " --threads " + std::to_string(t) +
                                               " " + args + " 2>/dev/null",
                                           code));
                    errors += code != 0;
                }
                (outs[0] == outs[1] && outs[1] == outs[2] && !outs[0].empty()) ? ++identical : ++differ;
            }
        return Outcome{differ == 0 && errors == 0,
                       fmt("%d reports byte-identical, %d differ, %d runs failed", identical, differ, errors)};
    });

    std::printf("%d of 12 criteria failed\n", failures);
    return failures ? 1 : 0;
}
