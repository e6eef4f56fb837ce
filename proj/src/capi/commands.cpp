#include "capi/commands.hpp"

#include "core/arcs.hpp"
#include "core/errors.hpp"
#include "core/exact_count.hpp"
#include "core/parallel.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace diagarcs {

namespace {

using nlohmann::json;

class Config {
public:
    explicit Config(json j) : j_(std::move(j)) {
        if (!j_.is_object()) fail(ErrorKind::input, "config must be a JSON object");
    }

    bool has(const std::string& key) {
        used_.insert(key);
        return j_.contains(key) && !j_[key].is_null();
    }

    // the CLI sends list-capable flags as arrays; a one-element array reads as a scalar
    const json& single(const std::string& key) {
        const json& v = j_[key];
        return v.is_array() && v.size() == 1 ? v[0] : v;
    }

    std::int64_t integer(const std::string& key, std::optional<std::int64_t> def = {}) {
        if (!has(key)) return required(key, def);
        const json& v = single(key);
        if (!v.is_number_integer()) fail(ErrorKind::input, "option '" + key + "' must be an integer");
        return v.get<std::int64_t>();
    }

    double real(const std::string& key, std::optional<double> def = {}) {
        if (!has(key)) return required(key, def);
        const json& v = single(key);
        if (!v.is_number()) fail(ErrorKind::input, "option '" + key + "' must be a number");
        return v.get<double>();
    }

    std::string text(const std::string& key, std::optional<std::string> def = {}) {
        if (!has(key)) return required(key, def);
        const json& v = j_[key];
        if (!v.is_string()) fail(ErrorKind::input, "option '" + key + "' must be a string");
        return v.get<std::string>();
    }

    bool flag(const std::string& key, bool def) {
        if (!has(key)) return def;
        const json& v = j_[key];
        if (!v.is_boolean()) fail(ErrorKind::input, "option '" + key + "' must be true or false");
        return v.get<bool>();
    }

    std::vector<std::int64_t> integers(const std::string& key, std::optional<std::vector<std::int64_t>> def = {}) {
        if (!has(key)) return required(key, def);
        std::vector<std::int64_t> out;
        for (const json& v : as_array(j_[key])) {
            if (!v.is_number_integer()) fail(ErrorKind::input, "option '" + key + "' must hold integers");
            out.push_back(v.get<std::int64_t>());
        }
        return out;
    }

    std::vector<double> reals(const std::string& key, std::optional<std::vector<double>> def = {}) {
        if (!has(key)) return required(key, def);
        std::vector<double> out;
        for (const json& v : as_array(j_[key])) {
            if (!v.is_number()) fail(ErrorKind::input, "option '" + key + "' must hold numbers");
            out.push_back(v.get<double>());
        }
        return out;
    }

    // "5/8" or a decimal with an exact small-denominator reading
    Fraction fraction(const std::string& key, std::optional<Fraction> def = {}) {
        if (!has(key)) return required(key, def);
        const json& v = j_[key];
        if (v.is_string()) {
            const std::string s = v.get<std::string>();
            const auto slash = s.find('/');
            try {
                if (slash == std::string::npos) return from_decimal(key, std::stod(s));
                return reduce({std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1))});
            } catch (const std::logic_error&) {
                fail(ErrorKind::input, "option '" + key + "' is not a fraction: " + s);
            }
        }
        if (!v.is_number()) fail(ErrorKind::input, "option '" + key + "' must be a fraction");
        return from_decimal(key, v.get<double>());
    }

    void finish() const {
        for (const auto& item : j_.items())
            if (!used_.count(item.key())) fail(ErrorKind::input, "unknown option '" + item.key() + "'");
    }

private:
    template <class T>
    static T required(const std::string& key, const std::optional<T>& def) {
        if (!def) fail(ErrorKind::input, "missing option '" + key + "'");
        return *def;
    }

    static json as_array(const json& v) { return v.is_array() ? v : json::array({v}); }

    static Fraction reduce(Fraction f) {
        if (f.den == 0) fail(ErrorKind::input, "fraction with zero denominator");
        if (f.den < 0) f = {-f.num, -f.den};
        const std::int64_t g = std::max<std::int64_t>(1, gcd64(std::abs(f.num), f.den));
        return {f.num / g, f.den / g};
    }

    static Fraction from_decimal(const std::string& key, double x) {
        const RationalApprox r = best_rational_approx(x, 10000);
        const Fraction f{r.b.convert_to<std::int64_t>(), r.q.convert_to<std::int64_t>()};
        if (std::abs(f.value() - x) > 1e-12)
            fail(ErrorKind::input, "option '" + key + "' has no fraction reading with denominator <= 10000");
        return f;
    }

    json j_;
    std::set<std::string> used_;
};

struct Common {
    Budget budget;
    std::uint64_t seed;
    bool timing;
};

class Stopwatch {
public:
    double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

private:
    std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

std::string join(std::span<const std::int64_t> v, const char* sep = " ") {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + std::to_string(v[i]);
    return out;
}

std::string join(std::span<const double> v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + format_double(v[i]);
    return out;
}

std::string join(std::span<const BigInt> v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + v[i].str();
    return out;
}

std::string fraction_text(Fraction f) { return std::to_string(f.num) + "/" + std::to_string(f.den); }

Common read_common(Config& cfg, Report& r, std::string_view command) {
    Common c;
    c.seed = std::uint64_t(cfg.integer("seed", 0));
    c.budget.max_tuples = std::uint64_t(cfg.integer("budget_tuples", std::int64_t(Budget{}.max_tuples)));
    c.budget.max_bytes = std::uint64_t(cfg.integer("budget_bytes", std::int64_t(Budget{}.max_bytes)));
    c.timing = cfg.flag("timing", true);
    r.note("command", std::string(command));
    r.note("seed", std::to_string(c.seed));
    r.note("budget_tuples", std::to_string(c.budget.max_tuples));
    r.note("budget_bytes", std::to_string(c.budget.max_bytes));
    if (c.timing) r.note("threads", std::to_string(thread_count()));
    return c;
}

DiagonalSystem read_system(Config& cfg, Report& r) {
    const std::string path = cfg.text("system");
    DiagonalSystem F = load_system(path);
    r.note("system", path);
    r.note("system_name", F.name());
    r.note("k", join(std::vector<std::int64_t>(F.k().values().begin(), F.k().values().end())));
    r.note("n", std::to_string(F.n()));
    r.note("s", std::to_string(F.s()));
    return F;
}

void add_time_column(Report& r, const Common& c) {
    if (c.timing) r.columns.push_back("time_s");
}

void push_time(std::vector<Cell>& row, const Common& c, const Stopwatch& w) {
    if (c.timing) row.push_back(w.seconds());
}

std::vector<std::int64_t> primes_up_to(std::int64_t m) {
    std::vector<std::int64_t> out;
    for (std::int64_t p = 2; p <= m; ++p)
        if (is_prime(p)) out.push_back(p);
    return out;
}

// Shared by predict and compare.
struct Prediction {
    std::optional<QuadratureResult> J;
    std::optional<SeriesApproximation> S;
    int exponent;
};

MainTermOptions read_main_options(Config& cfg, const Common& c) {
    MainTermOptions o;
    const std::string route = cfg.text("route", "auto");
    if (route == "auto")
        o.route = SingularIntegralRoute::automatic;
    else if (route == "truncated")
        o.route = SingularIntegralRoute::truncated;
    else if (route == "smoothed")
        o.route = SingularIntegralRoute::smoothed;
    else
        fail(ErrorKind::input, "route must be auto, truncated or smoothed");
    o.U = cfg.real("U", o.U);
    o.tol = cfg.real("tol", o.tol);
    o.T = cfg.real("T", o.T);
    o.samples = std::uint64_t(cfg.integer("samples", std::int64_t(o.samples)));
    o.Q_cut = cfg.integer("Q", o.Q_cut);
    o.eps = cfg.real("eps", o.eps);
    o.seed = c.seed;
    return o;
}

Prediction predict(const DiagonalSystem& F, const MainTermOptions& o, Report& r) {
    Prediction p;
    const std::size_t n = F.n(), s = F.s();
    const int kn = F.k().top();
    p.exponent = int(s) - F.k().sigma();
    r.note("sigma", std::to_string(F.k().sigma()));
    r.note("route", o.route == SingularIntegralRoute::automatic ? "auto"
                    : o.route == SingularIntegralRoute::truncated ? "truncated"
                                                                 : "smoothed");
    r.note("U", format_double(o.U));
    r.note("tol", format_double(o.tol));
    r.note("T", format_double(o.T));
    r.note("samples", std::to_string(o.samples));
    r.note("Q", std::to_string(o.Q_cut));
    r.note("eps", format_double(o.eps));
    if (s > n * std::size_t(kn)) {
        p.J = singular_integral(F, o);
        r.note("J_route", to_string(p.J->route));
    } else {
        r.warnings.push_back("singular integral unavailable: s = " + std::to_string(s) + " does not exceed n k_n = " +
                             std::to_string(n * std::size_t(kn)));
    }
    if (s > (n + 1) * std::size_t(kn))
        p.S = series_truncated(F, o.Q_cut, o.eps);
    else
        r.warnings.push_back("singular series unavailable: s = " + std::to_string(s) +
                             " does not exceed (n+1) k_n = " + std::to_string((n + 1) * std::size_t(kn)));
    return p;
}

struct MainValue {
    Cell value, error;
    std::optional<double> v;
};

MainValue main_value(const Prediction& p, std::int64_t X) {
    if (!p.J || !p.S) return {std::monostate{}, std::monostate{}, std::nullopt};
    const double Xp = std::pow(double(X), p.exponent);
    const double j = p.J->value.real(), ej = p.J->abs_error_estimate;
    const double sv = p.S->partial_sum, es = p.S->tail_report;
    const double v = j * sv * Xp;
    return {v, Xp * (std::abs(sv) * ej + std::abs(j) * es + ej * es), v};
}

Report cmd_count(Config& cfg) {
    Report r;
    const Common c = read_common(cfg, r, "count");
    const DiagonalSystem F = read_system(cfg, r);
    const auto Xs = cfg.integers("X");
    const std::string method = cfg.text("method", "auto");
    if (method != "auto" && method != "brute" && method != "mim")
        fail(ErrorKind::input, "method must be auto, brute or mim");
    cfg.finish();
    r.note("method", method);
    r.columns = {"X", "count", "method"};
    add_time_column(r, c);
    for (auto X : Xs) {
        Stopwatch w;
        CountReport cr = method == "brute" ? count_zeros_brute(F, X, c.budget)
                         : method == "mim" ? count_zeros_mim(F, X, c.budget)
                                           : count_zeros(F, X, c.budget);
        std::vector<Cell> row{X, cr.count, std::string(to_string(cr.method))};
        push_time(row, c, w);
        r.add_row(std::move(row));
    }
    return r;
}

Report cmd_predict(Config& cfg) {
    Report r;
    const Common c = read_common(cfg, r, "predict");
    const DiagonalSystem F = read_system(cfg, r);
    const auto Xs = cfg.integers("X");
    const MainTermOptions o = read_main_options(cfg, c);
    const auto primes = cfg.integers("primes", std::vector<std::int64_t>{2, 3, 5, 7});
    const int attempts = int(cfg.integer("real_attempts", 64));
    const std::uint64_t points = std::uint64_t(cfg.integer("padic_points", 4'000'000));
    cfg.finish();
    Stopwatch w;
    const Prediction p = predict(F, o, r);
    if (auto cert = real_nonsingular_search(F, attempts, c.seed))
        r.note("real_certificate", "found residual=" + format_double(cert->residual) +
                                       " sigma_min=" + format_double(cert->jacobian_sigma_min) +
                                       " eta=" + join(cert->eta));
    else
        r.note("real_certificate", "not found after " + std::to_string(attempts) + " attempts");
    for (auto q : primes) {
        if (!is_prime(q)) fail(ErrorKind::input, std::to_string(q) + " is not prime");
        const PadicSearch ps = padic_search(F, q, points, c.seed);
        std::string v;
        if (ps.certificate)
            v = "found u=" + std::to_string(ps.certificate->u_p) + " v=" + std::to_string(ps.certificate->v_p) +
                " x=" + join(ps.certificate->solution) +
                " lifted=" + (ps.certificate->lifted_check ? "verified" : "unverified");
        else
            v = std::string("not found up to u=") + std::to_string(ps.max_level) +
                (ps.exhaustive ? " (exhaustive)" : " (sampled)");
        r.note("padic_" + std::to_string(q), v);
    }
    if (c.timing) r.note("factors_time_s", format_double(w.seconds()));
    r.columns = {"X", "main_term", "main_abs_error", "J", "J_abs_error", "S", "S_tail", "exponent"};
    for (auto X : Xs) {
        const MainValue m = main_value(p, X);
        r.add_row({X, m.value, m.error, p.J ? Cell(p.J->value.real()) : Cell(), p.J ? Cell(p.J->abs_error_estimate) : Cell(),
                   p.S ? Cell(p.S->partial_sum) : Cell(), p.S ? Cell(p.S->tail_report) : Cell(),
                   std::int64_t(p.exponent)});
    }
    return r;
}

Report cmd_compare(Config& cfg) {
    Report r;
    const Common c = read_common(cfg, r, "compare");
    const DiagonalSystem F = read_system(cfg, r);
    const auto Xs = cfg.integers("X");
    const MainTermOptions o = read_main_options(cfg, c);
    const Fraction tau = cfg.fraction("tau", Fraction{1, std::int64_t(F.n()) * F.k().top()});
    const bool major = cfg.flag("major", false);
    const bool allow_overlap = cfg.flag("allow_overlap", false);
    cfg.finish();
    if (tau.num <= 0 || tau.num > tau.den) fail(ErrorKind::input, "tau must lie in (0, 1]");
    r.note("tau", fraction_text(tau));
    const Prediction p = predict(F, o, r);
    if (major && F.n() > 3) {
        r.warnings.push_back("major-arc integral skipped: n > 3");
    }
    r.columns = {"X", "count", "method", "main_term", "main_abs_error", "ratio", "tau", "Q", "major_arc", "major_arc_abs_error"};
    add_time_column(r, c);
    for (auto X : Xs) {
        Stopwatch w;
        const CountReport cr = count_zeros(F, X, c.budget);
        const MainValue m = main_value(p, X);
        const std::int64_t Q = X >= 1 ? floor_root_power(X, tau) : 0;
        Cell ratio, ma, ma_err;
        if (m.v) ratio = cr.count.convert_to<double>() / *m.v;
        if (major && F.n() <= 3 && Q >= 1) {
            try {
                const MajorArcIntegral mi = major_arc_integral(F, {X, tau, Q, 2 * Q}, allow_overlap);
                ma = mi.value.real();
                ma_err = mi.abs_error;
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::precondition) throw;
                r.warnings.push_back("X = " + std::to_string(X) + ": " + e.what());
            }
        }
        std::vector<Cell> row{X, cr.count, std::string(to_string(cr.method)), m.value, m.error, ratio,
                              fraction_text(tau), Q, ma, ma_err};
        push_time(row, c, w);
        r.add_row(std::move(row));
    }
    return r;
}

Report cmd_vmvt(Config& cfg) {
    Report r;
    const Common c = read_common(cfg, r, "vmvt");
    const auto bs = cfg.integers("b");
    const auto ks = cfg.integers("k");
    const auto Xs = cfg.integers("X");
    const std::string box = cfg.text("box", "positive");
    const bool moments = cfg.flag("moments", false);
    const bool translate = cfg.has("translate");
    const std::int64_t shift = translate ? cfg.integer("translate") : 0;
    cfg.finish();
    if (box != "positive" && box != "symmetric") fail(ErrorKind::input, "box must be positive or symmetric");
    r.note("box", box);
    r.columns = {"b", "k_max", "X", "J", "moment", "bound", "ratio", "slope", "translation_invariant", "status"};
    add_time_column(r, c);
    for (auto b : bs) {
        for (auto k : ks) {
            if (b < 1 || k < 1) fail(ErrorKind::input, "b and k must be >= 1");
            const int sigma = int(k * (k + 1) / 2);
            std::vector<std::vector<Cell>> group;
            std::vector<double> lx, ly;
            for (auto X : Xs) {
                Stopwatch w;
                Cell J, mom, bound, ratio, trans;
                std::string status = "ok";
                try {
                    const BigInt j = vinogradov_count(int(b), int(k), X, c.budget);
                    J = j;
                    if (moments) {
                        const MomentSpec spec{int(b), ExponentTuple::consecutive(int(k)),
                                              box == "positive" ? Box::positive : Box::symmetric};
                        mom = moment_count(spec, X, c.budget);
                    }
                    if (X >= 1) {
                        const double ref = std::pow(double(X), double(b)) + std::pow(double(X), double(2 * b - sigma));
                        bound = ref;
                        ratio = j.convert_to<double>() / ref;
                        lx.push_back(std::log(double(X)));
                        ly.push_back(std::log(j.convert_to<double>()));
                    }
                    if (translate)
                        trans = std::string(translation_invariance_check(int(b), int(k), X, shift, c.budget) ? "yes"
                                                                                                              : "no");
                } catch (const Error& e) {
                    if (e.kind() != ErrorKind::budget) throw;
                    status = "budget";
                }
                std::vector<Cell> row{b, k, X, J, mom, bound, ratio, Cell(), trans, status};
                push_time(row, c, w);
                group.push_back(std::move(row));
            }
            if (lx.size() >= 3) {
                // least squares slope of log J against log X
                const double N = double(lx.size());
                const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / N;
                const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / N;
                double sxy = 0, sxx = 0;
                for (std::size_t i = 0; i < lx.size(); ++i) {
                    sxy += (lx[i] - mx) * (ly[i] - my);
                    sxx += (lx[i] - mx) * (lx[i] - mx);
                }
                if (sxx > 0)
                    for (auto& row : group) row[7] = sxy / sxx;
            }
            for (auto& row : group) r.add_row(std::move(row));
        }
    }
    return r;
}

ExponentTuple read_k(Config& cfg, std::size_t n_default) {
    if (cfg.has("k")) {
        std::vector<int> k;
        for (auto v : cfg.integers("k")) k.push_back(int(v));
        return ExponentTuple(std::move(k));
    }
    if (cfg.has("system")) return load_system(cfg.text("system")).k();
    return ExponentTuple::consecutive(int(n_default));
}

Report cmd_arcs(Config& cfg) {
    Report r;
    const Common c = read_common(cfg, r, "arcs");
    const std::string mode = cfg.text("mode", "classify");
    r.note("mode", mode);
    if (mode == "classify") {
        const auto alpha = cfg.reals("alpha");
        const ExponentTuple k = read_k(cfg, alpha.size());
        const std::int64_t X = cfg.integer("X");
        const Fraction tau = cfg.fraction("tau");
        cfg.finish();
        const ArcParams P = make_arc_params(X, tau, k);
        const ArcLabel label = classify(P, k, alpha);
        r.columns = {"X", "tau", "Q", "Q0", "alpha", "verdict", "q", "a"};
        r.add_row({X, fraction_text(tau), P.Q, P.Q0, join(alpha), std::string(label.major ? "major" : "minor"),
                   label.major ? Cell(label.q) : Cell(), label.major ? Cell(join(label.a)) : Cell()});
    } else if (mode == "disjoint") {
        const ExponentTuple k = read_k(cfg, 1);
        const auto Xs = cfg.integers("X");
        const Fraction tau = cfg.fraction("tau");
        cfg.finish();
        r.columns = {"X", "tau", "Q", "arcs", "disjoint", "by_criterion", "overlap"};
        for (auto X : Xs) {
            const ArcParams P = make_arc_params(X, tau, k);
            const DisjointnessReport d = check_disjoint(P, k);
            Cell overlap;
            if (d.overlap)
                overlap = "q=" + std::to_string(d.overlap->first.q) + " a=" + join(d.overlap->first.a) +
                          " | q=" + std::to_string(d.overlap->second.q) + " a=" + join(d.overlap->second.a);
            r.add_row({X, fraction_text(tau), P.Q, std::int64_t(major_arcs(P, k).size()),
                       std::string(d.disjoint ? "yes" : "no"), std::string(d.by_criterion ? "yes" : "no"), overlap});
        }
    } else if (mode == "regions") {
        const auto Xs = cfg.integers("X", std::vector<std::int64_t>{256, 1024});
        const std::uint64_t points = std::uint64_t(cfg.integer("points", 10000));
        const auto wv = cfg.integers("w", std::vector<std::int64_t>{1, 1, 1});
        cfg.finish();
        if (wv.size() != 3) fail(ErrorKind::input, "w needs three entries");
        const std::array<std::int64_t, 3> w{wv[0], wv[1], wv[2]};
        r.note("w", join(wv));
        r.note("points", std::to_string(points));
        r.columns = {"X", "points", "m3_violations", "m2_violations", "cover_violations", "minor_points",
                     "m2_outside", "m3_outside", "m3_vacuous"};
        add_time_column(r, c);
        for (auto X : Xs) {
            Stopwatch sw;
            const RegionSweep s = region_sweep(X, points, w, c.seed);
            std::vector<Cell> row{X, std::int64_t(s.points), std::int64_t(s.m3_violations),
                                  std::int64_t(s.m2_violations), std::int64_t(s.cover_violations),
                                  std::int64_t(s.minor_points), std::int64_t(s.m2_outside),
                                  std::int64_t(s.m3_outside), std::string(s.m3_vacuous ? "yes" : "no")};
            push_time(row, c, sw);
            r.add_row(std::move(row));
        }
    } else {
        fail(ErrorKind::input, "arcs mode must be classify, disjoint or regions");
    }
    return r;
}

void note_stability(Report& r, double first, double second, bool stable) {
    r.note("first_half_max", format_double(first));
    r.note("second_half_max", format_double(second));
    r.note("stable", stable ? "yes" : "no");
}

Report cmd_weyl(Config& cfg) {
    Report r;
    const Common c = read_common(cfg, r, "weyl");
    const std::string mode = cfg.text("mode", "eval");
    r.note("mode", mode);
    if (mode == "error-sweep") {
        const auto kv = cfg.integers("k", std::vector<std::int64_t>{2, 3});
        const std::int64_t q_max = cfg.integer("q_max", 100);
        const std::int64_t X_min = cfg.integer("X_min", 100), X_max = cfg.integer("X_max", 1000);
        const int samples = int(cfg.integer("samples", 200));
        const double eps = cfg.real("eps", 0.1);
        cfg.finish();
        std::vector<int> degrees(kv.begin(), kv.end());
        r.note("eps", format_double(eps));
        const MajorSweep sw = weyl_major_sweep(degrees, q_max, X_min, X_max, samples, c.seed, eps);
        note_stability(r, sw.stability.first_half_max, sw.stability.second_half_max, sw.stability.stable);
        r.columns = {"X", "k", "q", "a", "beta", "main_re", "main_im", "actual_re", "actual_im", "error", "budget", "ratio"};
        for (const auto& s : sw.samples)
            r.add_row({s.X, std::int64_t(s.k), s.q, join(s.a), join(s.beta), s.result.main_term.real(),
                       s.result.main_term.imag(), s.result.actual.real(), s.result.actual.imag(), s.result.error,
                       s.result.budget, s.result.ratio});
    } else if (mode == "vdc-sweep") {
        const int samples = int(cfg.integer("samples", 1000));
        const std::int64_t X_min = cfg.integer("X_min", 100), X_max = cfg.integer("X_max", 2000);
        cfg.finish();
        const StabilitySweep sw = vdc_sweep(samples, X_min, X_max, c.seed);
        note_stability(r, sw.first_half_max, sw.second_half_max, sw.stable);
        r.columns = {"X", "ratio"};
        for (std::size_t i = 0; i < sw.X.size(); ++i) r.add_row({sw.X[i], sw.ratios[i]});
    } else if (mode == "eval") {
        const auto alpha = cfg.reals("alpha");
        const ExponentTuple k = read_k(cfg, alpha.size());
        const auto Xs = cfg.integers("X");
        cfg.finish();
        r.columns = {"X", "alpha", "re", "im", "abs"};
        for (auto X : Xs) {
            const Complex v = weyl_sum(k, alpha, X);
            r.add_row({X, join(alpha), v.real(), v.imag(), std::abs(v)});
        }
    } else {
        fail(ErrorKind::input, "weyl mode must be eval, error-sweep or vdc-sweep");
    }
    return r;
}

Report cmd_series(Config& cfg) {
    Report r;
    const Common c = read_common(cfg, r, "series");
    const DiagonalSystem F = read_system(cfg, r);
    const std::string mode = cfg.text("mode", "terms");
    r.note("mode", mode);
    if (mode == "terms") {
        const std::int64_t Q = cfg.integer("Q", 64);
        const double eps = cfg.real("eps", 0.1);
        cfg.finish();
        const SeriesApproximation S = series_truncated(F, Q, eps);
        r.note("Q", std::to_string(Q));
        r.note("eps", format_double(eps));
        r.note("partial_sum", format_double(S.partial_sum));
        r.note("fitted_constant", format_double(S.fitted_constant));
        r.note("tail", format_double(S.tail_report));
        r.columns = {"q", "T", "partial_sum"};
        double acc = 0;
        for (const auto& [q, t] : S.per_q_terms) {
            acc += t;
            r.add_row({q, t, acc});
        }
    } else if (mode == "euler") {
        const auto primes = cfg.integers("primes", std::vector<std::int64_t>{2, 3, 5, 7});
        const int H = int(cfg.integer("H", 3));
        cfg.finish();
        r.columns = {"p", "H", "lhs", "rhs", "holds"};
        for (auto p : primes)
            for (int h = 1; h <= H; ++h) {
                const EulerCheck e = euler_identity_check(F, p, h, c.budget);
                r.add_row({p, std::int64_t(h), e.lhs, e.rhs, std::string(e.holds ? "yes" : "no")});
            }
    } else if (mode == "padic") {
        const auto primes = cfg.has("primes") ? cfg.integers("primes") : primes_up_to(cfg.integer("p_max", 100));
        const std::uint64_t points = std::uint64_t(cfg.integer("points", 4'000'000));
        cfg.finish();
        r.columns = {"p", "found", "u_p", "v_p", "solution", "minor", "lifted_check", "max_level", "exhaustive", "points"};
        for (auto p : primes) {
            if (!is_prime(p)) fail(ErrorKind::input, std::to_string(p) + " is not prime");
            const PadicSearch ps = padic_search(F, p, points, c.seed);
            Cell u, v, x, minor, lifted;
            if (ps.certificate) {
                const auto& cert = *ps.certificate;
                u = std::int64_t(cert.u_p);
                v = std::int64_t(cert.v_p);
                x = join(cert.solution);
                std::vector<std::int64_t> cols;
                for (auto j : cert.minor_columns) cols.push_back(std::int64_t(j) + 1);
                minor = join(cols);
                lifted = std::string(cert.lifted_check ? "yes" : "no");
            }
            r.add_row({p, std::string(ps.certificate ? "yes" : "no"), u, v, x, minor, lifted,
                       std::int64_t(ps.max_level), std::string(ps.exhaustive ? "yes" : "no"),
                       std::int64_t(ps.points)});
        }
    } else if (mode == "count-mod") {
        const auto qs = cfg.integers("q");
        cfg.finish();
        r.columns = {"q", "M", "T"};
        for (auto q : qs) r.add_row({q, count_mod(F, q, c.budget), T_q(F, q)});
    } else {
        fail(ErrorKind::input, "series mode must be terms, euler, padic or count-mod");
    }
    return r;
}

Report cmd_sint(Config& cfg) {
    Report r;
    const Common c = read_common(cfg, r, "sint");
    const std::string mode = cfg.text("mode", "integral");
    r.note("mode", mode);
    if (mode == "integral") {
        const DiagonalSystem F = read_system(cfg, r);
        const MainTermOptions o = read_main_options(cfg, c);
        cfg.finish();
        Stopwatch w;
        const QuadratureResult J = singular_integral(F, o);
        r.columns = {"route", "value", "abs_error", "standard_error", "bias", "tail", "evaluations"};
        add_time_column(r, c);
        std::vector<Cell> row{std::string(to_string(J.route)), J.value.real(), J.abs_error_estimate, J.standard_error,
                              J.bias_estimate, J.tail_bound, std::int64_t(J.evaluations)};
        push_time(row, c, w);
        r.add_row(std::move(row));
    } else if (mode == "real") {
        const DiagonalSystem F = read_system(cfg, r);
        const int attempts = int(cfg.integer("attempts", 64));
        cfg.finish();
        r.columns = {"found", "eta", "residual", "sigma_min", "minor"};
        if (auto cert = real_nonsingular_search(F, attempts, c.seed)) {
            std::vector<std::int64_t> cols;
            for (auto j : cert->minor_columns) cols.push_back(std::int64_t(j) + 1);
            r.add_row({std::string("yes"), join(cert->eta), cert->residual, cert->jacobian_sigma_min, join(cols)});
        } else {
            r.add_row({std::string("no"), Cell(), Cell(), Cell(), Cell()});
        }
    } else if (mode == "decay") {
        const ExponentTuple k = read_k(cfg, 1);
        const int samples = int(cfg.integer("samples", 40));
        cfg.finish();
        const DecayReport d = decay_check(k, samples, c.seed);
        note_stability(r, d.first_half_max, d.second_half_max, d.stable);
        r.columns = {"l1", "beta", "abs_value", "statistic"};
        for (const auto& s : d.samples) r.add_row({s.l1, join(s.beta), s.abs_value, s.statistic});
    } else {
        fail(ErrorKind::input, "sint mode must be integral, real or decay");
    }
    return r;
}

}  // namespace

Report run_command(std::string_view command, std::string_view config_json) {
    json j;
    try {
        j = json::parse(config_json.empty() ? std::string_view("{}") : config_json);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::input, std::string("config is not valid JSON: ") + e.what());
    }
    Config cfg(std::move(j));
    static const std::map<std::string, std::function<Report(Config&)>, std::less<>> table = {
        {"count", cmd_count}, {"predict", cmd_predict}, {"compare", cmd_compare}, {"vmvt", cmd_vmvt},
        {"arcs", cmd_arcs},   {"weyl", cmd_weyl},       {"series", cmd_series},   {"sint", cmd_sint},
    };
    const auto it = table.find(command);
    if (it == table.end()) fail(ErrorKind::input, "unknown command '" + std::string(command) + "'");
    return it->second(cfg);
}

}  // namespace diagarcs
