// ordsel: success probabilities, bounds and sample-size inversion for the
// offline multiple noisy secretary problem under bivariate copula models.
//
// Subcommands: psuccess | bound | invert | table | sweep
// stdout carries data (JSON-lines by default, CSV/markdown on request);
// stderr carries diagnostics, including timing. Exit codes:
//   0 ok, 2 usage, 3 unsupported method/family combination,
//   4 certification failure, 5 infeasible inversion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ordsel/copula.hpp"
#include "ordsel/gbound.hpp"
#include "ordsel/selection.hpp"

using nlohmann::json;
using namespace ordsel;
namespace gb = ordsel::gbound;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitUnsupported = 3;
constexpr int kExitCertification = 4;
constexpr int kExitInfeasible = 5;

int env_threads() {
    const char* raw = std::getenv("ORDSEL_THREADS");
    if (!raw) return 0;
    char* end = nullptr;
    const long v = std::strtol(raw, &end, 10);
    if (end == raw || *end != '\0' || v < 1) return 0;
    return static_cast<int>(v);
}

std::string fmt12(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// "8.144e47007"-style rendering from a base-10 logarithm.
std::string fmt_pow10(double log10_n) {
    const double e = std::floor(log10_n);
    const double mant = std::pow(10.0, log10_n - e);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3fe%.0f", mant, e);
    return buf;
}

class Stopwatch {
public:
    explicit Stopwatch(std::string label) : label_(std::move(label)), t0_(clock::now()) {}
    ~Stopwatch() {
        const double ms = std::chrono::duration<double, std::milli>(clock::now() - t0_).count();
        std::fprintf(stderr, "ordsel: %s completed in %.3f ms\n", label_.c_str(), ms);
    }

private:
    using clock = std::chrono::steady_clock;
    std::string label_;
    clock::time_point t0_;
};

void emit_json(const json& inputs, const json& result, const std::string& method) {
    const json record = {{"inputs", inputs}, {"result", result}, {"method", method}};
    std::printf("%s\n", record.dump().c_str());
}

json estimate_to_json(const ProbabilityEstimate& est) {
    json r = {{"value", est.value}};
    if (est.std_error) r["std_error"] = *est.std_error;
    if (est.replications) r["replications"] = *est.replications;
    return r;
}

struct PsuccessArgs {
    std::string copula;
    double param = 0.0;
    bool param_set = false;
    std::int64_t n = 0, m = 0;
    double alpha = 0.0;
    std::string method = "quad";
    std::int64_t reps = 100000;
    std::uint64_t seed = 0;
    double tol = 1e-10;
    int grid = 400;
    std::string format = "json";
};

int run_psuccess(const PsuccessArgs& a) {
    const bool needs_param = a.copula == "gaussian" || a.copula == "clayton" || a.copula == "frank";
    if (needs_param && !a.param_set) {
        std::fprintf(stderr, "ordsel: --param is required for the %s family\n", a.copula.c_str());
        return kExitUsage;
    }
    const CopulaModel model = CopulaModel::from_name(a.copula, a.param);
    const SelectionProblem prob{a.n, a.m, a.alpha};
    prob.validate();

    if (a.method == "brute" && a.m > 3) {
        std::fprintf(stderr, "ordsel: method brute supports m <= 3 only\n");
        return kExitUnsupported;
    }

    ProbabilityEstimate est;
    {
        Stopwatch sw("psuccess");
        if (a.method == "quad") {
            est = success_quadrature(model, prob, a.tol);
        } else if (a.method == "brute") {
            est = success_bruteforce(model, prob, a.grid);
        } else if (a.method == "mc") {
            est = success_montecarlo(model, prob, a.reps, RandomStream(a.seed), env_threads());
        } else {
            std::fprintf(stderr, "ordsel: unknown method %s\n", a.method.c_str());
            return kExitUsage;
        }
    }
    if (est.note) std::fprintf(stderr, "ordsel: warning: %s\n", est.note->c_str());

    if (a.format == "csv") {
        std::printf("copula,param,n,m,alpha,method,value,std_error,replications\n");
        std::printf("%s,%s,%lld,%lld,%s,%s,%s,%s,%s\n", a.copula.c_str(),
                    needs_param ? fmt12(a.param).c_str() : "", static_cast<long long>(a.n),
                    static_cast<long long>(a.m), fmt12(a.alpha).c_str(), a.method.c_str(),
                    fmt12(est.value).c_str(),
                    est.std_error ? fmt12(*est.std_error).c_str() : "",
                    est.replications ? std::to_string(*est.replications).c_str() : "");
    } else {
        json inputs = {{"copula", a.copula}, {"n", a.n}, {"m", a.m},
                       {"alpha", a.alpha},   {"method", a.method}};
        if (needs_param) inputs["param"] = a.param;
        if (a.method == "mc") {
            inputs["reps"] = a.reps;
            inputs["seed"] = a.seed;
        }
        if (a.method == "quad") inputs["tol"] = a.tol;
        if (a.method == "brute") inputs["grid"] = a.grid;
        emit_json(inputs, estimate_to_json(est), a.method);
    }
    return kExitOk;
}

json certificate_to_json(const gb::OmegaCertificate& cert) {
    return {{"omega", cert.omega},       {"c1", cert.c1},
            {"c2", cert.c2},             {"mu_n", cert.mu_n},
            {"sigma_n2", cert.sigma_n2}, {"n", cert.n},
            {"certified", cert.certified}};
}

struct BoundArgs {
    std::int64_t n = 0;
    double alpha = 0.0, rho = 0.0;
    std::optional<double> omega;
    std::string format = "json";
};

int run_bound(const BoundArgs& a) {
    double bound = 0.0, omega = 0.0;
    gb::OmegaCertificate cert;
    {
        Stopwatch sw("bound");
        if (a.omega) {
            omega = *a.omega;
            cert = gb::certify(a.n, omega);
            bound = cert.certified ? gb::lower_bound(a.n, a.alpha, a.rho, omega) : 0.0;
        } else {
            const auto opt = gb::optimized_lower_bound(a.n, a.alpha, a.rho);
            bound = opt.bound;
            omega = opt.omega_star;
            cert = std::isnan(omega) ? gb::OmegaCertificate{} : gb::certify(a.n, omega);
        }
    }

    if (a.format == "csv") {
        std::printf("n,alpha,rho,omega,c1,c2,mu_n,sigma_n2,certified,bound\n");
        std::printf("%lld,%s,%s,%s,%s,%s,%s,%s,%d,%s\n", static_cast<long long>(a.n),
                    fmt12(a.alpha).c_str(), fmt12(a.rho).c_str(), fmt12(omega).c_str(),
                    fmt12(cert.c1).c_str(), fmt12(cert.c2).c_str(), fmt12(cert.mu_n).c_str(),
                    fmt12(cert.sigma_n2).c_str(), cert.certified ? 1 : 0, fmt12(bound).c_str());
    } else {
        json inputs = {{"n", a.n}, {"alpha", a.alpha}, {"rho", a.rho}};
        if (a.omega) inputs["omega"] = *a.omega;
        const json result = {{"bound", bound},
                             {"omega", std::isnan(omega) ? json() : json(omega)},
                             {"certificate", certificate_to_json(cert)}};
        emit_json(inputs, result, a.omega ? "bound" : "bound_optimized");
    }

    if (!cert.certified) {
        std::fprintf(stderr, "ordsel: certification failed (n*c1 <= 1 or dominance checks)\n");
        return kExitCertification;
    }
    return kExitOk;
}

struct InvertCell {
    double log10_n = 0.0;
    std::optional<std::int64_t> exact_n;
    std::optional<double> omega_star;
    double bound_at_n = 0.0;
    bool infeasible = false;
    std::string method = "invert";
};

InvertCell invert_cell(double alpha, double rho, double delta) {
    InvertCell cell;
    if (rho >= 1.0) {
        // Perfect correlation: the copula is comonotonic and the success
        // probability is exactly 1-(1-alpha)^n; invert that directly.
        cell.method = "invert_comonotonic";
        std::int64_t n = 1;
        if (alpha < 1.0 && delta < 1.0) {
            n = static_cast<std::int64_t>(
                std::ceil(std::log(delta) / std::log1p(-alpha) - 1e-12));
            n = std::max<std::int64_t>(n, 1);
        }
        cell.exact_n = n;
        cell.log10_n = std::log10(static_cast<double>(n));
        cell.bound_at_n = -std::expm1(static_cast<double>(n) * std::log1p(-alpha));
        return cell;
    }
    const auto res = gb::n_star_optimized({alpha, rho, delta});
    if (!res) {
        cell.infeasible = true;
        return cell;
    }
    cell.log10_n = res->size.log10_n;
    cell.exact_n = res->size.exact_n;
    if (!std::isnan(res->omega_star)) cell.omega_star = res->omega_star;
    cell.bound_at_n = res->bound_at_n;
    return cell;
}

json invert_cell_to_json(const InvertCell& cell) {
    if (cell.infeasible) return {{"infeasible", true}};
    json r = {{"log10_n", cell.log10_n}, {"bound_at_n", cell.bound_at_n}};
    r["exact_n"] = cell.exact_n ? json(*cell.exact_n) : json();
    r["omega_star"] = cell.omega_star ? json(*cell.omega_star) : json();
    return r;
}

void invert_cell_csv_row(double alpha, double rho, double delta, const InvertCell& cell) {
    if (cell.infeasible) {
        std::printf("%s,%s,%s,inf,,,\n", fmt12(alpha).c_str(), fmt12(rho).c_str(),
                    fmt12(delta).c_str());
        return;
    }
    std::printf("%s,%s,%s,%s,%s,%s,%s\n", fmt12(alpha).c_str(), fmt12(rho).c_str(),
                fmt12(delta).c_str(), fmt12(cell.log10_n).c_str(),
                cell.exact_n ? std::to_string(*cell.exact_n).c_str() : "",
                cell.omega_star ? fmt12(*cell.omega_star).c_str() : "",
                fmt12(cell.bound_at_n).c_str());
}

struct InvertArgs {
    double alpha = 0.0;
    std::optional<double> rho;
    std::optional<double> xi2;
    double delta = 0.0;
    std::string format = "json";
};

int run_invert(const InvertArgs& a) {
    const double rho = a.xi2 ? gb::rho_from_noise(*a.xi2) : *a.rho;
    InvertCell cell;
    {
        Stopwatch sw("invert");
        cell = invert_cell(a.alpha, rho, a.delta);
    }

    if (a.format == "csv") {
        std::printf("alpha,rho,delta,log10_n,exact_n,omega_star,bound_at_n\n");
        invert_cell_csv_row(a.alpha, rho, a.delta, cell);
    } else {
        json inputs = {{"alpha", a.alpha}, {"rho", rho}, {"delta", a.delta}};
        if (a.xi2) inputs["xi2"] = *a.xi2;
        emit_json(inputs, invert_cell_to_json(cell), cell.method);
    }
    if (cell.infeasible) {
        std::fprintf(stderr, "ordsel: no finite certified sample size found\n");
        return kExitInfeasible;
    }
    return kExitOk;
}

struct TableArgs {
    double alpha = 0.01;
    std::vector<double> rhos{0.01, 0.3, 0.6, 0.9, 0.99};
    std::vector<double> deltas{0.01, 0.05, 0.1};
    std::string format = "json";
};

int run_table(const TableArgs& a) {
    Stopwatch sw("table");
    std::vector<std::vector<InvertCell>> cells(a.rhos.size());
    for (std::size_t i = 0; i < a.rhos.size(); ++i) {
        for (double delta : a.deltas) cells[i].push_back(invert_cell(a.alpha, a.rhos[i], delta));
    }

    if (a.format == "csv") {
        std::printf("alpha,rho,delta,log10_n,exact_n,omega_star,bound_at_n\n");
        for (std::size_t i = 0; i < a.rhos.size(); ++i) {
            for (std::size_t j = 0; j < a.deltas.size(); ++j) {
                invert_cell_csv_row(a.alpha, a.rhos[i], a.deltas[j], cells[i][j]);
            }
        }
    } else if (a.format == "markdown") {
        std::printf("| rho \\ delta |");
        for (double d : a.deltas) std::printf(" %s |", fmt12(d).c_str());
        std::printf("\n|---|");
        for (std::size_t j = 0; j < a.deltas.size(); ++j) std::printf("---|");
        std::printf("\n");
        for (std::size_t i = 0; i < a.rhos.size(); ++i) {
            std::printf("| %s |", fmt12(a.rhos[i]).c_str());
            for (const auto& cell : cells[i]) {
                if (cell.infeasible) {
                    std::printf(" inf |");
                } else if (cell.exact_n) {
                    std::printf(" %lld |", static_cast<long long>(*cell.exact_n));
                } else {
                    std::printf(" %s |", fmt_pow10(cell.log10_n).c_str());
                }
            }
            std::printf("\n");
        }
    } else {
        for (std::size_t i = 0; i < a.rhos.size(); ++i) {
            for (std::size_t j = 0; j < a.deltas.size(); ++j) {
                const json inputs = {{"alpha", a.alpha}, {"rho", a.rhos[i]}, {"delta", a.deltas[j]}};
                emit_json(inputs, invert_cell_to_json(cells[i][j]), cells[i][j].method);
            }
        }
    }
    return kExitOk;
}

struct SweepArgs {
    std::string vary;
    double from = 0.0, to = 0.0;
    int points = 0;
    bool log_axis = false;
    std::int64_t n = 100, m = 1;
    double alpha = 0.05, rho = 0.4;
    std::int64_t reps = 20000;
    std::uint64_t seed = 1;
    double tol = 1e-10;
};

int run_sweep(const SweepArgs& a) {
    if (!(a.points >= 2) || !(a.to > a.from) || (a.log_axis && !(a.from > 0.0))) {
        std::fprintf(stderr, "ordsel: malformed sweep range\n");
        return kExitUsage;
    }
    Stopwatch sw("sweep");
    std::printf("x,p_quadrature,p_mc,mc_stderr,lower_bound\n");
    const int threads = env_threads();
    for (int i = 0; i < a.points; ++i) {
        const double frac = static_cast<double>(i) / (a.points - 1);
        double x = a.log_axis ? a.from * std::pow(a.to / a.from, frac)
                              : a.from + (a.to - a.from) * frac;
        std::int64_t n = a.n;
        double alpha = a.alpha, rho = a.rho;
        if (a.vary == "n") {
            n = static_cast<std::int64_t>(std::llround(x));
            n = std::max<std::int64_t>(n, a.m);
            x = static_cast<double>(n);
        } else if (a.vary == "rho") {
            rho = x;
        } else if (a.vary == "alpha") {
            alpha = x;
        } else {
            std::fprintf(stderr, "ordsel: --vary must be one of n|rho|alpha\n");
            return kExitUsage;
        }
        const CopulaModel model = CopulaModel::gaussian(rho);
        const SelectionProblem prob{n, a.m, alpha};
        const auto quad = success_quadrature(model, prob, a.tol);
        const auto mc = success_montecarlo(model, prob, a.reps,
                                           RandomStream(a.seed, static_cast<std::uint64_t>(i)),
                                           threads);
        const auto lb = gb::optimized_lower_bound(n, alpha, rho);
        std::printf("%s,%s,%s,%s,%s\n", fmt12(x).c_str(), fmt12(quad.value).c_str(),
                    fmt12(mc.value).c_str(), fmt12(*mc.std_error).c_str(),
                    fmt12(lb.bound).c_str());
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"success probability toolkit for offline noisy ordinal selection"};
    app.require_subcommand(1);

    PsuccessArgs ps;
    auto* psuccess = app.add_subcommand("psuccess", "evaluate the success probability");
    psuccess->add_option("--copula", ps.copula, "copula family")
        ->required()
        ->check(CLI::IsMember({"gaussian", "clayton", "frank", "independence", "comonotonic"}));
    auto* param_opt = psuccess->add_option("--param", ps.param, "copula parameter");
    psuccess->add_option("--n", ps.n, "sample size")->required();
    psuccess->add_option("--m", ps.m, "selection size")->required();
    psuccess->add_option("--alpha", ps.alpha, "goal-softening percentile")->required();
    psuccess->add_option("--method", ps.method, "quad|brute|mc")
        ->check(CLI::IsMember({"quad", "brute", "mc"}));
    psuccess->add_option("--reps", ps.reps, "Monte Carlo replications");
    psuccess->add_option("--seed", ps.seed, "Monte Carlo seed");
    psuccess->add_option("--tol", ps.tol, "quadrature absolute tolerance");
    psuccess->add_option("--grid", ps.grid, "brute-force grid");
    psuccess->add_option("--format", ps.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));

    BoundArgs ba;
    double omega_in = 0.0;
    auto* bound = app.add_subcommand("bound", "analytic Gaussian-copula lower bound");
    bound->add_option("--n", ba.n, "sample size")->required();
    bound->add_option("--alpha", ba.alpha, "goal-softening percentile")->required();
    bound->add_option("--rho", ba.rho, "Gaussian copula correlation")->required();
    auto* omega_opt = bound->add_option("--omega", omega_in, "fix omega (omit to optimise)");
    bound->add_option("--format", ba.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));

    InvertArgs ia;
    double rho_in = 0.0, xi2_in = 0.0;
    auto* invert = app.add_subcommand("invert", "smallest certified n with p >= 1-delta");
    invert->add_option("--alpha", ia.alpha, "goal-softening percentile")->required();
    auto* rho_opt = invert->add_option("--rho", rho_in, "Gaussian copula correlation");
    auto* xi2_opt = invert->add_option("--xi2", xi2_in, "noise-to-signal ratio (implies rho)");
    rho_opt->excludes(xi2_opt);
    invert->add_option("--delta", ia.delta, "failure budget")->required();
    invert->add_option("--format", ia.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));

    TableArgs ta;
    auto* table = app.add_subcommand("table", "grid of inversions over rho x delta");
    table->add_option("--alpha", ta.alpha, "goal-softening percentile");
    table->add_option("--rhos", ta.rhos, "rho values")->delimiter(',');
    table->add_option("--deltas", ta.deltas, "delta values")->delimiter(',');
    table->add_option("--format", ta.format, "csv|json|markdown")
        ->check(CLI::IsMember({"csv", "json", "markdown"}));

    SweepArgs sa;
    auto* sweep = app.add_subcommand("sweep", "curve data: quadrature vs MC vs bound");
    sweep->add_option("--vary", sa.vary, "n|rho|alpha")->required();
    sweep->add_option("--from", sa.from, "range start")->required();
    sweep->add_option("--to", sa.to, "range end")->required();
    sweep->add_option("--points", sa.points, "number of points")->required();
    sweep->add_flag("--log-axis", sa.log_axis, "geometric spacing");
    sweep->add_option("--n", sa.n, "baseline n");
    sweep->add_option("--m", sa.m, "baseline m");
    sweep->add_option("--alpha", sa.alpha, "baseline alpha");
    sweep->add_option("--rho", sa.rho, "baseline rho");
    sweep->add_option("--reps", sa.reps, "MC replications per point");
    sweep->add_option("--seed", sa.seed, "MC seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (psuccess->parsed()) {
            ps.param_set = param_opt->count() > 0;
            return run_psuccess(ps);
        }
        if (bound->parsed()) {
            if (omega_opt->count() > 0) ba.omega = omega_in;
            return run_bound(ba);
        }
        if (invert->parsed()) {
            if (rho_opt->count() > 0) ia.rho = rho_in;
            if (xi2_opt->count() > 0) ia.xi2 = xi2_in;
            if (!ia.rho && !ia.xi2) {
                std::fprintf(stderr, "ordsel: one of --rho / --xi2 is required\n");
                return kExitUsage;
            }
            return run_invert(ia);
        }
        if (table->parsed()) return run_table(ta);
        if (sweep->parsed()) return run_sweep(sa);
    } catch (const unsupported_family_error& e) {
        std::fprintf(stderr, "ordsel: %s\n", e.what());
        return kExitUnsupported;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "ordsel: %s\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}
