// diag-arcs: batch front end over the diagarcs C API.
#include "diagarcs/diagarcs.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

// Options given on the command line are copied into the command's JSON config;
// anything left out falls back to the library default.
class Options {
public:
    explicit Options(CLI::App* app) : app_(app) {}

    template <class T>
    Options& value(const std::string& flag, const std::string& key, const std::string& help) {
        auto store = std::make_shared<T>();
        CLI::Option* opt = app_->add_option(flag, *store, help);
        emit_.push_back([=](json& j) {
            if (opt->count()) j[key] = *store;
        });
        return *this;
    }

    template <class T>
    Options& list(const std::string& flag, const std::string& key, const std::string& help) {
        auto store = std::make_shared<std::vector<T>>();
        CLI::Option* opt = app_->add_option(flag, *store, help)->delimiter(',');
        emit_.push_back([=](json& j) {
            if (opt->count()) j[key] = *store;
        });
        return *this;
    }

    Options& flag(const std::string& flag, const std::string& key, const std::string& help) {
        CLI::Option* opt = app_->add_flag(flag, help);
        emit_.push_back([=](json& j) {
            if (opt->count()) j[key] = true;
        });
        return *this;
    }

    // --classify and friends select the command's mode
    Options& mode(const std::string& flag, const std::string& name, const std::string& help) {
        CLI::Option* opt = app_->add_flag(flag, help);
        modes_.push_back(opt);
        emit_.push_back([=](json& j) {
            if (opt->count()) j["mode"] = name;
        });
        return *this;
    }

    Options& main_term() {
        value<std::string>("--route", "route", "auto, truncated or smoothed");
        value<double>("--U", "U", "truncation radius of the iterated route");
        value<double>("--tol", "tol", "quadrature tolerance of the iterated route");
        value<double>("--T", "T", "scale of the smoothed route");
        value<std::int64_t>("--samples", "samples", "Monte Carlo samples of the smoothed route");
        value<std::int64_t>("--Q", "Q", "singular-series cutoff");
        value<double>("--eps", "eps", "exponent slack of the tail fit");
        return *this;
    }

    CLI::App* app() const { return app_; }

    json config() const {
        if (modes_.size() > 1) {
            int given = 0;
            for (auto* m : modes_) given += m->count() ? 1 : 0;
            if (given > 1) throw CLI::ValidationError("choose a single mode flag");
        }
        json j = json::object();
        for (const auto& e : emit_) e(j);
        return j;
    }

private:
    CLI::App* app_;
    std::vector<std::function<void(json&)>> emit_;
    std::vector<CLI::Option*> modes_;
};

int exit_code(diag_status s) { return s == DIAG_ERR_BUDGET ? 2 : 1; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact counts, major-arc diagnostics and main-term predictions for diagonal systems"};
    app.require_subcommand(1);
    app.fallthrough();

    unsigned threads = 0;
    std::string format = "csv";
    bool no_timing = false;
    std::uint64_t seed = 0;
    std::uint64_t budget_tuples = 0, budget_bytes = 0;
    app.add_option("--threads", threads, "worker threads (default: all cores)");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_flag("--no-timing", no_timing, "omit wall-clock fields so reports compare byte for byte");
    app.add_option("--seed", seed, "seed of every random stream");
    auto* bt = app.add_option("--budget-tuples", budget_tuples, "enumeration budget (overrides DIAG_ARCS_BUDGET_TUPLES)");
    auto* bb = app.add_option("--budget-bytes", budget_bytes, "memory budget (overrides DIAG_ARCS_BUDGET_BYTES)");

    std::map<std::string, std::unique_ptr<Options>> commands;
    auto sub = [&](const std::string& name, const std::string& help) -> Options& {
        auto* s = app.add_subcommand(name, help);
        return *(commands[name] = std::make_unique<Options>(s));
    };

    sub("count", "exact zero counts N_F(X)")
        .value<std::string>("--system", "system", "system JSON file")
        .list<std::int64_t>("--X", "X", "box sizes")
        .value<std::string>("--method", "method", "auto, brute or mim");
    sub("predict", "singular integral, singular series and main term")
        .value<std::string>("--system", "system", "system JSON file")
        .list<std::int64_t>("--X", "X", "box sizes")
        .main_term()
        .list<std::int64_t>("--primes", "primes", "primes for the p-adic certificate sweep")
        .value<std::int64_t>("--real-attempts", "real_attempts", "starts of the real-solution search")
        .value<std::int64_t>("--padic-points", "padic_points", "residue tuples per prime");
    sub("compare", "exact counts against the predicted main term")
        .value<std::string>("--system", "system", "system JSON file")
        .list<std::int64_t>("--X", "X", "box sizes")
        .main_term()
        .value<std::string>("--tau", "tau", "major-arc exponent, e.g. 1/2")
        .flag("--major", "major", "add the major-arc integral (n <= 3)")
        .flag("--allow-overlap", "allow_overlap", "integrate even when arcs overlap");
    sub("vmvt", "Vinogradov mean values")
        .list<std::int64_t>("--b", "b", "moment halves")
        .list<std::int64_t>("--k", "k", "top degrees")
        .list<std::int64_t>("--X", "X", "box sizes")
        .value<std::string>("--box", "box", "positive or symmetric")
        .flag("--moments", "moments", "also count through the moment route")
        .value<std::int64_t>("--translate", "translate", "shift for the translation check");
    sub("arcs", "major/minor arc geometry")
        .mode("--classify", "classify", "classify one point (default)")
        .mode("--disjoint", "disjoint", "check that the major arcs are disjoint")
        .mode("--regions", "regions", "sweep the pruning regions for k = (1, 3, 5)")
        .value<std::string>("--system", "system", "take k from a system file")
        .list<double>("--alpha", "alpha", "point of the box")
        .list<std::int64_t>("--k", "k", "exponent tuple")
        .list<std::int64_t>("--X", "X", "box size(s)")
        .value<std::string>("--tau", "tau", "major-arc exponent")
        .value<std::int64_t>("--points", "points", "sample points per X")
        .list<std::int64_t>("--w", "w", "weights w_1,w_2,w_3");
    sub("weyl", "Weyl sums and their major-arc approximation")
        .mode("--eval", "eval", "evaluate one sum (default)")
        .mode("--error-sweep", "error-sweep", "error against the major-arc approximation")
        .mode("--vdc-sweep", "vdc-sweep", "van der Corput ratio sweep")
        .list<std::int64_t>("--k", "k", "degrees")
        .list<double>("--alpha", "alpha", "phase coefficients")
        .list<std::int64_t>("--X", "X", "lengths")
        .value<std::int64_t>("--q-max", "q_max", "largest denominator")
        .value<std::int64_t>("--X-min", "X_min", "smallest length")
        .value<std::int64_t>("--X-max", "X_max", "largest length")
        .value<std::int64_t>("--samples", "samples", "sample count")
        .value<double>("--eps", "eps", "exponent slack");
    sub("series", "singular series and local densities")
        .value<std::string>("--system", "system", "system JSON file")
        .mode("--terms", "terms", "T(q) for q <= Q (default)")
        .mode("--euler", "euler", "finite Euler identity at prime powers")
        .mode("--padic", "padic", "p-adic nonsingular solutions")
        .mode("--count-mod", "count-mod", "solution counts mod q")
        .value<std::int64_t>("--Q", "Q", "cutoff")
        .value<double>("--eps", "eps", "exponent slack of the tail fit")
        .list<std::int64_t>("--primes", "primes", "primes")
        .value<std::int64_t>("--H", "H", "largest prime-power exponent")
        .value<std::int64_t>("--p-max", "p_max", "all primes up to this bound")
        .value<std::int64_t>("--points", "points", "residue tuples per prime")
        .list<std::int64_t>("--q", "q", "moduli");
    sub("sint", "singular integral and real solutions")
        .value<std::string>("--system", "system", "system JSON file")
        .mode("--integral", "integral", "the singular integral (default)")
        .mode("--real", "real", "nonsingular real solution search")
        .mode("--decay", "decay", "decay of the oscillatory integral")
        .main_term()
        .value<std::int64_t>("--attempts", "attempts", "starts of the real search")
        .list<std::int64_t>("--k", "k", "exponent tuple for --decay");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    diag_budget budget;
    if (diag_budget_from_env(&budget) != DIAG_OK) {
        std::fprintf(stderr, "error: %s\n", diag_last_error());
        return 1;
    }
    if (bt->count()) budget.max_tuples = budget_tuples;
    if (bb->count()) budget.max_bytes = budget_bytes;
    diag_set_threads(threads);

    std::string name;
    json config;
    for (const auto& [cmd, opts] : commands) {
        if (!opts->app()->parsed()) continue;
        name = cmd;
        try {
            config = opts->config();
        } catch (const CLI::Error& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            return 1;
        }
    }
    config["seed"] = seed;
    config["budget_tuples"] = budget.max_tuples;
    config["budget_bytes"] = budget.max_bytes;
    config["timing"] = !no_timing;

    diag_report* report = nullptr;
    diag_status st = diag_run(name.c_str(), config.dump().c_str(), &report);
    if (st != DIAG_OK) {
        std::fprintf(stderr, "error (%s): %s\n", diag_status_name(st), diag_last_error());
        return exit_code(st);
    }
    for (size_t i = 0; i < diag_report_warning_count(report); ++i)
        std::fprintf(stderr, "warning: %s\n", diag_report_warning(report, i));
    char* text = nullptr;
    st = diag_report_render(report, format == "json" ? DIAG_FORMAT_JSON : DIAG_FORMAT_CSV, &text);
    diag_report_free(report);
    if (st != DIAG_OK) {
        std::fprintf(stderr, "error (%s): %s\n", diag_status_name(st), diag_last_error());
        return exit_code(st);
    }
    std::fputs(text, stdout);
    diag_string_free(text);
    return 0;
}
