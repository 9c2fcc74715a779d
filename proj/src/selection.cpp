#include "ordsel/selection.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <thread>
#include <vector>

#include "ordsel/quadrature.hpp"

namespace ordsel {

void SelectionProblem::validate() const {
    if (n < 1) throw std::domain_error("selection problem: n must be >= 1");
    if (m < 1 || m > n) throw std::domain_error("selection problem: m must satisfy 1 <= m <= n");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::domain_error("selection problem: alpha must lie in (0,1]");
}

const char* method_name(EstimateMethod m) {
    switch (m) {
        case EstimateMethod::Quadrature: return "quadrature";
        case EstimateMethod::BruteForce: return "bruteforce";
        case EstimateMethod::MonteCarlo: return "montecarlo";
        case EstimateMethod::ClosedForm: return "closedform";
    }
    return "?";
}

namespace {

double clamp_prob(double p) { return std::clamp(p, 0.0, 1.0); }

// 1 - C_{X|Z}(alpha | z), guarded at the open endpoints of z.
struct Survival {
    const CopulaModel& model;
    double alpha;
    double operator()(double z) const {
        const double zc = std::clamp(z, 1e-300, 1.0 - 1e-16);
        return 1.0 - model.conditional_cdf(alpha, zc);
    }
};

}  // namespace

ProbabilityEstimate success_quadrature(const CopulaModel& model, const SelectionProblem& prob,
                                       double tol) {
    prob.validate();
    if (!(tol > 0.0)) throw std::domain_error("success_quadrature: tol must be > 0");
    if (model.family() == CopulaFamily::Comonotonic) {
        throw unsupported_family_error(
            "success_quadrature: comonotonic copula has no conditional density; "
            "use the closed form 1-(1-alpha)^n");
    }

    const double n = static_cast<double>(prob.n);
    const double m = static_cast<double>(prob.m);
    const Survival g{model, prob.alpha};
    const double log_coef = std::lgamma(n + 1.0) - std::lgamma(n - m + 1.0) - std::lgamma(m);

    // Rescale by n once the order-statistic density concentrates near zero.
    const bool rescale = prob.n >= 10000 && m <= n / 2.0;
    const double s_max = rescale ? std::min(n, 50.0 + 10.0 * m) : 1.0;
    const double t_max = rescale ? s_max / n : 1.0;

    // G(t) enters only through G^(m-1)
    std::optional<quad::Antiderivative> big_g;
    if (prob.m > 1) big_g.emplace(g, t_max, std::min(tol, 1e-12));

    const auto integrand = [&](double s) {
        const double t = rescale ? s / n : s;
        const double gv = g(t);
        if (gv <= 0.0) return 0.0;
        double lg = log_coef;
        if (prob.m != prob.n) lg += (n - m) * std::log1p(-t);
        if (prob.m > 1) {
            const double G = (*big_g)(t);
            if (G <= 0.0) return 0.0;
            lg += (m - 1.0) * std::log(G);
        }
        if (rescale) lg -= std::log(n);
        return gv * std::exp(lg);
    };

    // Seed the subdivision around the bulk of the order-statistic weight
    // (roughly Beta(m, n-m+1)), so no initial panel steps over the peak, and
    // ladder geometrically into the decaying tail: a panel stretching from
    // the peak to 1 would read zero at every node and never get refined.
    std::vector<double> seeds;
    const double mean = m / (n + 1.0);
    const double sd = std::sqrt(m * (n - m + 1.0) / ((n + 1.0) * (n + 1.0) * (n + 2.0)));
    for (double k : {-6.0, -3.0, 0.0, 3.0, 6.0}) {
        const double t = mean + k * sd;
        if (t > 0.0 && t < t_max) seeds.push_back(rescale ? t * n : t);
    }
    const double tail_end = std::min(t_max, (50.0 + 10.0 * m) / n);
    for (double t = 2.0 * mean; t < tail_end; t *= 2.0) {
        seeds.push_back(rescale ? t * n : t);
    }
    if (tail_end < t_max) seeds.push_back(rescale ? tail_end * n : tail_end);

    const auto res = quad::integrate(integrand, 0.0, rescale ? s_max : 1.0, tol, seeds);

    ProbabilityEstimate est;
    est.value = clamp_prob(1.0 - res.value);
    est.method = EstimateMethod::Quadrature;
    if (prob.n > 1000000) est.note = "n exceeds 1e6: order-statistic density is near-degenerate, accuracy may degrade";
    return est;
}

ProbabilityEstimate success_bruteforce(const CopulaModel& model, const SelectionProblem& prob,
                                       int grid) {
    prob.validate();
    if (prob.m > 3) throw std::invalid_argument("success_bruteforce: m must be <= 3");
    if (grid < 50) throw std::invalid_argument("success_bruteforce: grid must be >= 50");
    if (model.family() == CopulaFamily::Comonotonic) {
        throw unsupported_family_error("success_bruteforce: comonotonic copula unsupported");
    }

    const double n = static_cast<double>(prob.n);
    const int m = static_cast<int>(prob.m);
    const double h = 1.0 / grid;

    // Midpoint rule over the ordered simplex. Cells with tied indices get the
    // simplex fraction of the cube: 1/2 for one tie, 1/6 for a triple tie.
    std::vector<double> c(grid), z(grid);
    for (int i = 0; i < grid; ++i) {
        z[i] = (i + 0.5) * h;
        c[i] = model.conditional_cdf(prob.alpha, z[i]);
    }

    const double coef = std::exp(std::lgamma(n + 1.0) - std::lgamma(n - m + 1.0));
    double total = 0.0;
    if (m == 1) {
        for (int i = 0; i < grid; ++i) total += c[i] * std::pow(1.0 - z[i], n - 1.0) * h;
    } else if (m == 2) {
        for (int j = 0; j < grid; ++j) {
            double inner = 0.0;
            for (int i = 0; i <= j; ++i) {
                const double w = (i == j) ? 0.5 : 1.0;
                inner += w * (1.0 - (1.0 - c[i]) * (1.0 - c[j]));
            }
            total += inner * std::pow(1.0 - z[j], n - 2.0) * h * h;
        }
    } else {
        for (int k = 0; k < grid; ++k) {
            double inner = 0.0;
            for (int j = 0; j <= k; ++j) {
                const double pj = (1.0 - c[j]) * (1.0 - c[k]);
                for (int i = 0; i <= j; ++i) {
                    double w = 1.0;
                    if (i == j && j == k) w = 1.0 / 6.0;
                    else if (i == j || j == k) w = 0.5;
                    inner += w * (1.0 - (1.0 - c[i]) * pj);
                }
            }
            total += inner * std::pow(1.0 - z[k], n - 3.0) * h * h * h;
        }
    }

    ProbabilityEstimate est;
    est.value = clamp_prob(coef * total);
    est.method = EstimateMethod::BruteForce;
    return est;
}

namespace {

// One replication of the selection mechanism; returns the success indicator.
bool run_replication(const CopulaModel& model, const SelectionProblem& prob, RandomStream rng) {
    const std::int64_t n = prob.n;
    const std::int64_t m = prob.m;
    if (m == 1) {
        double best_u = 2.0, best_v = 2.0;
        for (std::int64_t i = 0; i < n; ++i) {
            const auto [u, v] = model.sample_pair(rng);
            if (u < best_u) {
                best_u = u;
                best_v = v;
            }
        }
        return best_v <= prob.alpha;
    }
    if (m == n) {
        for (std::int64_t i = 0; i < n; ++i) {
            if (model.sample_pair(rng).second <= prob.alpha) return true;
        }
        return false;
    }
    // Keep the m smallest u with attached v: max-of-kept at the heap root.
    std::vector<std::pair<double, double>> heap;
    heap.reserve(static_cast<std::size_t>(m));
    for (std::int64_t i = 0; i < n; ++i) {
        const auto uv = model.sample_pair(rng);
        if (std::ssize(heap) < m) {
            heap.push_back(uv);
            std::push_heap(heap.begin(), heap.end());
        } else if (uv.first < heap.front().first) {
            std::pop_heap(heap.begin(), heap.end());
            heap.back() = uv;
            std::push_heap(heap.begin(), heap.end());
        }
    }
    for (const auto& [u, v] : heap) {
        if (v <= prob.alpha) return true;
    }
    return false;
}

}  // namespace

ProbabilityEstimate success_montecarlo(const CopulaModel& model, const SelectionProblem& prob,
                                       std::int64_t reps, const RandomStream& stream,
                                       int max_threads) {
    prob.validate();
    if (reps < 1) throw std::domain_error("success_montecarlo: reps must be >= 1");

    int threads = max_threads > 0 ? max_threads
                                  : static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    threads = static_cast<int>(std::min<std::int64_t>(threads, reps));

    // Replication r always uses stream.derived(r); the thread partition only
    // decides who runs it, so the tally is independent of the thread count.
    std::vector<std::int64_t> counts(static_cast<std::size_t>(threads), 0);
    const auto worker = [&](int w) {
        std::int64_t local = 0;
        for (std::int64_t r = w; r < reps; r += threads) {
            if (run_replication(model, prob, stream.derived(static_cast<std::uint64_t>(r)))) ++local;
        }
        counts[static_cast<std::size_t>(w)] = local;
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int w = 0; w < threads; ++w) pool.emplace_back(worker, w);
        for (auto& t : pool) t.join();
    }

    std::int64_t successes = 0;
    for (auto cnt : counts) successes += cnt;

    const double p = static_cast<double>(successes) / static_cast<double>(reps);
    ProbabilityEstimate est;
    est.value = p;
    est.method = EstimateMethod::MonteCarlo;
    est.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(reps));
    est.replications = reps;
    return est;
}

ProbabilityEstimate success_randomized_threshold(const CopulaModel& model,
                                                 const SelectionProblem& prob) {
    prob.validate();
    const double c = model.joint_cdf(static_cast<double>(prob.m) / static_cast<double>(prob.n),
                                     prob.alpha);
    ProbabilityEstimate est;
    est.value = clamp_prob(-std::expm1(static_cast<double>(prob.n) * std::log1p(-c)));
    est.method = EstimateMethod::ClosedForm;
    return est;
}

double randomized_limit(const CopulaModel& model, std::int64_t m, double alpha) {
    if (m < 1) throw std::domain_error("randomized_limit: m must be >= 1");
    const double b = model.boundary_conditional_cdf(alpha);
    return -std::expm1(-static_cast<double>(m) * b);
}

double fixed_limit(const CopulaModel& model, std::int64_t m, double alpha) {
    if (m < 1) throw std::domain_error("fixed_limit: m must be >= 1");
    const double b = model.boundary_conditional_cdf(alpha);
    if (b >= 1.0) return 1.0;
    return -std::expm1(static_cast<double>(m) * std::log1p(-b));
}

GeneralBounds general_bounds(const SelectionProblem& prob) {
    prob.validate();
    const double lower = -std::expm1(static_cast<double>(prob.m) * std::log1p(-prob.alpha));
    const double upper = -std::expm1(static_cast<double>(prob.n) * std::log1p(-prob.alpha));
    return {clamp_prob(lower), clamp_prob(upper)};
}

}  // namespace ordsel
