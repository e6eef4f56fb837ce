#include "diagarcs/diagarcs.h"

#include "capi/commands.hpp"
#include "core/arcs.hpp"
#include "core/errors.hpp"
#include "core/exact_count.hpp"
#include "core/parallel.hpp"

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

struct diag_system {
    diagarcs::DiagonalSystem F;
};

struct diag_report {
    diagarcs::Report r;
};

namespace {

thread_local std::string last_error;

diag_status code_of(diagarcs::ErrorKind k) {
    using diagarcs::ErrorKind;
    switch (k) {
        case ErrorKind::input: return DIAG_ERR_INPUT;
        case ErrorKind::budget: return DIAG_ERR_BUDGET;
        case ErrorKind::overflow: return DIAG_ERR_OVERFLOW;
        case ErrorKind::precondition: return DIAG_ERR_PRECONDITION;
        case ErrorKind::convergence: return DIAG_ERR_CONVERGENCE;
        case ErrorKind::numeric: return DIAG_ERR_NUMERIC;
    }
    return DIAG_ERR_INTERNAL;
}

template <class Fn>
diag_status guarded(Fn&& fn) {
    try {
        fn();
        last_error.clear();
        return DIAG_OK;
    } catch (const diagarcs::Error& e) {
        last_error = e.what();
        return code_of(e.kind());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return DIAG_ERR_BUDGET;
    } catch (const std::exception& e) {
        last_error = e.what();
        return DIAG_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown failure";
        return DIAG_ERR_INTERNAL;
    }
}

char* dup(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

void need(const void* p, const char* what) {
    if (!p) diagarcs::fail(diagarcs::ErrorKind::input, std::string(what) + " is NULL");
}

std::uint64_t env_u64(const char* name, std::uint64_t def) {
    const char* v = std::getenv(name);
    if (!v || !*v) return def;
    char* end = nullptr;
    errno = 0;
    const unsigned long long x = std::strtoull(v, &end, 10);
    if (errno || *end || v[0] == '-')
        diagarcs::fail(diagarcs::ErrorKind::input, std::string(name) + " is not a nonnegative integer: " + v);
    return x;
}

}  // namespace

extern "C" {

const char* diag_last_error(void) { return last_error.c_str(); }

const char* diag_status_name(diag_status status) {
    switch (status) {
        case DIAG_OK: return "ok";
        case DIAG_ERR_INPUT: return "input";
        case DIAG_ERR_BUDGET: return "budget";
        case DIAG_ERR_OVERFLOW: return "overflow";
        case DIAG_ERR_PRECONDITION: return "precondition";
        case DIAG_ERR_CONVERGENCE: return "convergence";
        case DIAG_ERR_NUMERIC: return "numeric";
        case DIAG_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

void diag_set_threads(unsigned n) { diagarcs::set_thread_count(n); }
unsigned diag_threads(void) { return diagarcs::thread_count(); }

diag_status diag_budget_from_env(diag_budget* out) {
    return guarded([&] {
        need(out, "out");
        const diagarcs::Budget def;
        out->max_tuples = env_u64("DIAG_ARCS_BUDGET_TUPLES", def.max_tuples);
        out->max_bytes = env_u64("DIAG_ARCS_BUDGET_BYTES", def.max_bytes);
    });
}

void diag_string_free(char* s) { std::free(s); }

diag_status diag_system_load(const char* path, diag_system** out) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = new diag_system{diagarcs::load_system(path)};
    });
}

diag_status diag_system_parse(const char* json, diag_system** out) {
    return guarded([&] {
        need(json, "json");
        need(out, "out");
        *out = new diag_system{diagarcs::parse_system_json(json)};
    });
}

void diag_system_free(diag_system* sys) { delete sys; }
size_t diag_system_n(const diag_system* sys) { return sys ? sys->F.n() : 0; }
size_t diag_system_s(const diag_system* sys) { return sys ? sys->F.s() : 0; }

diag_status diag_system_json(const diag_system* sys, char** out) {
    return guarded([&] {
        need(sys, "system");
        need(out, "out");
        *out = dup(diagarcs::system_to_json(sys->F));
    });
}

diag_status diag_count(const diag_system* sys, int64_t X, int method, const diag_budget* budget, char** count) {
    return guarded([&] {
        need(sys, "system");
        need(count, "count");
        diagarcs::Budget b;
        if (budget) b = {budget->max_tuples, budget->max_bytes};
        diagarcs::CountReport r;
        switch (method) {
            case 0: r = diagarcs::count_zeros(sys->F, X, b); break;
            case 1: r = diagarcs::count_zeros_brute(sys->F, X, b); break;
            case 2: r = diagarcs::count_zeros_mim(sys->F, X, b); break;
            default: diagarcs::fail(diagarcs::ErrorKind::input, "method must be 0, 1 or 2");
        }
        *count = dup(r.count.str());
    });
}

diag_status diag_T_q(const diag_system* sys, int64_t q, double* out) {
    return guarded([&] {
        need(sys, "system");
        need(out, "out");
        *out = diagarcs::T_q(sys->F, q);
    });
}

diag_status diag_weyl_sum(const int* k, size_t n, const double* alpha, int64_t X, double* re, double* im) {
    return guarded([&] {
        need(k, "k");
        need(alpha, "alpha");
        need(re, "re");
        need(im, "im");
        const diagarcs::ExponentTuple kk(std::vector<int>(k, k + n));
        const auto v = diagarcs::weyl_sum(kk, std::span<const double>(alpha, n), X);
        *re = v.real();
        *im = v.imag();
    });
}

diag_status diag_classify(const int* k, size_t n, const double* alpha, int64_t X, int64_t tau_num, int64_t tau_den,
                          int* major, int64_t* q, int64_t* a) {
    return guarded([&] {
        need(k, "k");
        need(alpha, "alpha");
        need(major, "major");
        need(q, "q");
        need(a, "a");
        const diagarcs::ExponentTuple kk(std::vector<int>(k, k + n));
        const auto P = diagarcs::make_arc_params(X, {tau_num, tau_den}, kk);
        const auto label = diagarcs::classify(P, kk, std::span<const double>(alpha, n));
        *major = label.major ? 1 : 0;
        *q = label.q;
        for (size_t i = 0; i < label.a.size(); ++i) a[i] = label.a[i];
    });
}

diag_status diag_run(const char* command, const char* config_json, diag_report** out) {
    return guarded([&] {
        need(command, "command");
        need(out, "out");
        *out = new diag_report{diagarcs::run_command(command, config_json ? config_json : "{}")};
    });
}

diag_status diag_report_render(const diag_report* report, diag_format format, char** out) {
    return guarded([&] {
        need(report, "report");
        need(out, "out");
        if (format != DIAG_FORMAT_CSV && format != DIAG_FORMAT_JSON)
            diagarcs::fail(diagarcs::ErrorKind::input, "unknown format");
        *out = dup(format == DIAG_FORMAT_CSV ? diagarcs::to_csv(report->r) : diagarcs::to_json(report->r));
    });
}

size_t diag_report_warning_count(const diag_report* report) { return report ? report->r.warnings.size() : 0; }

const char* diag_report_warning(const diag_report* report, size_t i) {
    if (!report || i >= report->r.warnings.size()) return nullptr;
    return report->r.warnings[i].c_str();
}

void diag_report_free(diag_report* report) { delete report; }

}  // extern "C"
