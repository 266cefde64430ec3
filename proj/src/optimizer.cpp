#include "wpcn/optimizer.hpp"

#include "wpcn/golden.hpp"
#include "wpcn/kernels.hpp"
#include "wpcn/lambert.hpp"
#include "wpcn/throughput.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace wpcn {

namespace {

constexpr double kInvLn2 = 1.4426950408889634073599246810018921;
constexpr double kInvE = 0.36787944117144232159552377016146087;

inline double log2_1p(double x) { return std::log1p(x) * kInvLn2; }

// Uplink/downlink balance at fixed t_e. g is strictly decreasing in t_d with
// g(0+) > 0 and g((1-t_e)-) < 0, so the equalizing t_d is the unique root.
struct RateBalance {
    double A;       // theta*eta*rho*P0*H_T^2*t_e / sigma^2
    double T;       // 1 - t_e
    double log2y2;  // downlink spectral efficiency

    double g(double td) const {
        const double u = T - td;
        return u * log2_1p(A / u) - td * log2y2;
    }
    double gprime(double td) const {
        const double u = T - td;
        const double snr = A / u;
        return -(std::log1p(snr) - snr / (1.0 + snr)) * kInvLn2 - log2y2;
    }
};

// Closed-form equalizing t_d (the W_-1 expression), then a safeguarded
// Newton polish of the balance. The closed form alone drifts above 1e-9
// relative when Y1*ln(Y2) is extreme; the polish restores the equalization
// contract, and a bisection fallback covers the underflow corner where the
// W argument rounds to -0.
double optimal_td_core(double y1c, double L, double te) {
    const double T = 1.0 - te;
    const double log2y2 = L * kInvLn2;
    const double y1 = y1c * T / te;
    const double b = y1 * L;
    const double arg = -b * std::exp(-b - L);

    double td = std::numeric_limits<double>::quiet_NaN();
    if (arg < 0.0) {
        const double w = lambert_wm1(arg);
        td = T * (1.0 + L / (w + b));
    }

    const RateBalance bal{te / y1c, T, log2y2};
    if (!(td > 0.0 && td < T)) {
        double lo = 0.0, hi = T;
        while (hi - lo > 1e-16 * T) {
            const double mid = 0.5 * (lo + hi);
            (bal.g(mid) > 0.0 ? lo : hi) = mid;
        }
        td = 0.5 * (lo + hi);
    }

    double lo = 0.0, hi = T;
    for (int i = 0; i < 8; ++i) {
        const double g = bal.g(td);
        if (std::abs(g) <= 1e-13 * std::fmax(td * log2y2, 1e-300)) break;
        (g > 0.0 ? lo : hi) = td;
        double next = td - g / bal.gprime(td);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == td) break;
        td = next;
    }
    return td;
}

// Per-pair constants reused across many t_e evaluations.
struct PairCtx {
    double y1c;
    double L;       // ln(Y2)
    double log2y2;  // L / ln2
    double y3;

    static PairCtx from(const PairLink& l, const SystemParams& p) {
        PairCtx c;
        c.y1c = y1_coeff(l, p);
        c.L = std::log1p(p.p0 * l.phi_r * l.h_r / p.sigma2);
        c.log2y2 = c.L * kInvLn2;
        c.y3 = y3_factor(l, p);
        return c;
    }
    double tau_d2d(double te) const {
        if (te == 0.0 || te == 1.0) return 0.0;
        const double u = 1.0 - te;
        return u * log2_1p(y3 * te / u);
    }
    double tau_cellular_opt(double te) const {
        return optimal_td_core(y1c, L, te) * log2y2;
    }
};

void require_nonempty(std::span<const PairLink> links) {
    if (links.empty()) throw std::invalid_argument("at least one pair is required");
}

void validate_inputs(std::span<const PairLink> links, const SystemParams& params) {
    require_nonempty(links);
    validate(params);
    for (const auto& l : links) validate(l);
}

std::vector<PairCtx> make_ctx(std::span<const PairLink> links, const SystemParams& params) {
    std::vector<PairCtx> ctx;
    ctx.reserve(links.size());
    for (const auto& l : links) ctx.push_back(PairCtx::from(l, params));
    return ctx;
}

// Hull of the per-pair D2D maximizers: the pair with the weakest compound
// link eta*H_T*G wants the longest energy-transfer time and vice versa.
std::pair<double, double> d2d_hull(std::span<const PairLink> links,
                                   const std::vector<double>& te_stars) {
    std::size_t k1 = 0, k2 = 0;
    double worst = std::numeric_limits<double>::infinity();
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < links.size(); ++i) {
        const double q = links[i].eta_t * links[i].h_t * links[i].g;
        if (q < worst) { worst = q; k1 = i; }
        if (q > best) { best = q; k2 = i; }
    }
    return {te_stars[k2], te_stars[k1]};  // (lb, ub)
}

// Modes, splits and throughputs at one t_e, deciding each pair by comparing
// its D2D throughput with its optimal cellular rate (ties go to D2D).
OptimizationResult decide_at(std::span<const PairLink> links, const SystemParams& params,
                             const std::vector<PairCtx>& ctx, double te) {
    OptimizationResult r;
    r.te_star = te;
    const auto np = links.size();
    r.modes.resize(np);
    r.td_star.resize(np);
    r.per_pair_tau.resize(np);
    double sum = 0.0;
    for (std::size_t i = 0; i < np; ++i) {
        const double tau_d = d2d_throughput(links[i], params, te);
        const double td = optimal_td_core(ctx[i].y1c, ctx[i].L, te);
        const double tau_c = td * ctx[i].log2y2;
        if (tau_d >= tau_c) {
            r.modes[i] = 1;
            r.td_star[i] = 0.0;
            r.per_pair_tau[i] = tau_d;
        } else {
            r.modes[i] = 0;
            r.td_star[i] = td;
            r.per_pair_tau[i] = cellular_throughput(links[i], params, te, td);
        }
        sum += r.per_pair_tau[i];
    }
    r.tau_s = sum;
    return r;
}

}  // namespace

double optimal_td(const PairLink& link, const SystemParams& params, double t_e) {
    if (!(t_e > 0.0 && t_e < 1.0))
        throw std::domain_error("optimal_td: t_e must be strictly inside (0, 1)");
    const auto c = PairCtx::from(link, params);
    return optimal_td_core(c.y1c, c.L, t_e);
}

double optimal_cellular_rate(const PairLink& link, const SystemParams& params, double t_e) {
    if (!(t_e > 0.0 && t_e < 1.0))
        throw std::domain_error("optimal_cellular_rate: t_e must be strictly inside (0, 1)");
    const auto c = PairCtx::from(link, params);
    return optimal_td_core(c.y1c, c.L, t_e) * c.log2y2;
}

double frac_f(const PairLink& link, const SystemParams& params, double t_e) {
    return optimal_td(link, params, t_e) / (1.0 - t_e);
}

double optimal_te_from_y3(double y3, const SystemParams& params) {
    if (!(y3 > 0.0)) throw std::invalid_argument("optimal_te_from_y3: y3 must be > 0");
    const double eps = params.eps;
    if (std::abs(y3 - 1.0) <= 1e-9) {
        // The closed form is 0/0 at y3 = 1 (removable); search instead.
        auto r = golden_section_max(
            [y3](double te) { return (1.0 - te) * log2_1p(y3 * te / (1.0 - te)); },
            eps, 1.0 - eps, 1e-9);
        return r.argmax;
    }
    const double z = lambert_w0((y3 - 1.0) * kInvE);
    const double te = 1.0 / (1.0 - y3 * z / (z - y3 + 1.0));
    return std::clamp(te, eps, 1.0 - eps);
}

double optimal_te_d2d(const PairLink& link, const SystemParams& params) {
    return optimal_te_from_y3(y3_factor(link, params), params);
}

PairAnalysis analyze_pair(const PairLink& link, const SystemParams& params) {
    validate(link);
    validate(params);
    PairAnalysis a;
    a.y1c = y1_coeff(link, params);
    a.y2 = y2_factor(link, params);
    a.y3 = y3_factor(link, params);
    a.te_d2d_star = optimal_te_from_y3(a.y3, params);

    const auto c = PairCtx::from(link, params);
    const auto diff = [&](double te) { return c.tau_d2d(te) - c.tau_cellular_opt(te); };
    const double eps = params.eps;
    const double lo = diff(eps);
    const double hi = diff(1.0 - eps);

    if (lo > 0.0 && hi > 0.0) {
        a.te_threshold = 0.0;  // D2D everywhere
        a.cellular_capable = false;
    } else if (lo < 0.0 && hi < 0.0) {
        a.te_threshold = 1.0;  // cellular everywhere
        a.cellular_capable = true;
    } else if (lo <= 0.0 && hi >= 0.0) {
        // Bisect to floating-point convergence; the crossing can sit where
        // the D2D throughput is steep, so an absolute t_e tolerance is not
        // enough to pin the rate residual.
        double tl = eps, tu = 1.0 - eps;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (tl + tu);
            if (mid == tl || mid == tu) break;
            (diff(mid) <= 0.0 ? tl : tu) = mid;
        }
        a.te_threshold = 0.5 * (tl + tu);
        a.cellular_capable = true;
    } else {
        throw numerical_error(
            "analyze_pair: no mode crossover despite mixed endpoint ordering "
            "(D2D ahead at t_e=eps but behind at t_e=1-eps)");
    }
    return a;
}

double all_d2d_objective(std::span<const PairLink> links, const SystemParams& params, double t_e) {
    double s = 0.0;
    for (const auto& l : links) s += d2d_throughput(l, params, t_e);
    return s;
}

double all_cellular_objective(std::span<const PairLink> links, const SystemParams& params, double t_e) {
    double s = 0.0;
    for (const auto& l : links) s += optimal_cellular_rate(l, params, t_e);
    return s;
}

TaSearchResult optimize_all_d2d(std::span<const PairLink> links, const SystemParams& params) {
    validate_inputs(links, params);
    std::vector<double> te_stars;
    te_stars.reserve(links.size());
    for (const auto& l : links) te_stars.push_back(optimal_te_d2d(l, params));
    auto [lb, ub] = d2d_hull(links, te_stars);

    const auto f = [&](double te) { return all_d2d_objective(links, params, te); };
    const double eps = params.eps;
    TaSearchResult r;
    if (ub - lb < 1e-15) {  // identical maximizers (e.g. a single pair)
        r.te = lb;
        r.value = f(lb);
        return r;
    }
    auto g = golden_section_max(f, lb, ub, params.xi);
    r.te = g.argmax;
    r.value = g.max;
    // The sum's maximizer provably lies inside the hull; an edge hit means
    // the hull collapsed numerically. Widen and keep the better result.
    if (g.argmax - lb <= params.xi || ub - g.argmax <= params.xi) {
        auto wide = golden_section_max(f, eps, 1.0 - eps, params.xi);
        if (wide.max > r.value) {
            r.te = wide.argmax;
            r.value = wide.max;
        }
        r.widened = true;
    }
    return r;
}

TaSearchResult optimize_all_cellular(std::span<const PairLink> links, const SystemParams& params) {
    validate_inputs(links, params);
    const auto f = [&](double te) { return all_cellular_objective(links, params, te); };
    auto g = golden_section_max(f, params.eps, 1.0 - params.eps, params.xi);
    return {g.argmax, g.max, false};
}

OptimizationResult joint_optimize(std::span<const PairLink> links, const SystemParams& params) {
    validate_inputs(links, params);
    const auto np = links.size();
    const auto ctx = make_ctx(links, params);

    std::vector<PairAnalysis> an(np);
    for (std::size_t i = 0; i < np; ++i) {
        try {
            an[i] = analyze_pair(links[i], params);
        } catch (const numerical_error& e) {
            throw numerical_error("pair " + std::to_string(i) + ": " + e.what());
        }
    }

    // Cellular-capable pairs ordered by descending threshold; subrange s
    // assigns the first s-1 of them to cellular and the rest to D2D.
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < np; ++i)
        if (an[i].cellular_capable) order.push_back(i);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (an[a].te_threshold != an[b].te_threshold)
            return an[a].te_threshold > an[b].te_threshold;
        return a < b;
    });

    const double eps = params.eps;
    const double xi = params.xi;
    std::vector<double> candidates;
    bool widened = false;

    std::vector<double> te_stars;
    te_stars.reserve(np);
    for (std::size_t i = 0; i < np; ++i) te_stars.push_back(an[i].te_d2d_star);
    const auto [lb_hull, ub_hull] = d2d_hull(links, te_stars);

    if (order.empty()) {
        auto r = optimize_all_d2d(links, params);
        candidates.push_back(r.te);
        widened |= r.widened;
    } else {
        const std::size_t m = order.size();
        std::vector<char> cellular(np, 0);
        const auto objective = [&](double te) {
            double s = 0.0;
            for (std::size_t i = 0; i < np; ++i)
                s += cellular[i] ? ctx[i].tau_cellular_opt(te) : ctx[i].tau_d2d(te);
            return s;
        };
        for (std::size_t s = 1; s <= m + 1; ++s) {
            double lb, ub;
            if (s == 1) {
                lb = an[order[0]].te_threshold;
                ub = std::max(ub_hull, lb);
            } else if (s <= m) {
                lb = an[order[s - 1]].te_threshold;
                ub = an[order[s - 2]].te_threshold;
            } else {
                lb = 0.0;
                ub = an[order[m - 1]].te_threshold;
            }
            lb = std::clamp(lb, eps, 1.0 - eps);
            ub = std::clamp(ub, eps, 1.0 - eps);
            if (ub - lb > xi)
                candidates.push_back(golden_section_max(objective, lb, ub, xi).argmax);
            else
                candidates.push_back(0.5 * (lb + ub));
            if (s <= m) cellular[order[s - 1]] = 1;
        }
        for (std::size_t i : order)
            candidates.push_back(std::clamp(an[i].te_threshold, eps, 1.0 - eps));
        auto rd = optimize_all_d2d(links, params);
        candidates.push_back(rd.te);
        widened |= rd.widened;
        candidates.push_back(optimize_all_cellular(links, params).te);
    }
    // Benchmark split points, so the joint answer dominates the fixed
    // schemes on every realization, not just in expectation.
    candidates.push_back(std::clamp(1.0 / 3.0, eps, 1.0 - eps));
    candidates.push_back(std::clamp(0.5, eps, 1.0 - eps));

    OptimizationResult best;
    best.tau_s = -std::numeric_limits<double>::infinity();
    for (const double te : candidates) {
        auto r = decide_at(links, params, ctx, te);
        if (r.tau_s > best.tau_s) best = std::move(r);
    }
    best.bounds_widened = widened;
    return best;
}

ApproxContext approx_te_d2d(std::span<const PairLink> links, const SystemParams& params) {
    validate_inputs(links, params);
    ApproxContext a;
    double sum = 0.0;
    for (const auto& l : links) sum += y3_factor(l, params);
    a.y4 = sum / static_cast<double>(links.size());
    a.te_hat = optimal_te_from_y3(a.y4, params);
    return a;
}

OptimizationResult exhaustive_oracle(std::span<const PairLink> links, const SystemParams& params,
                                     double grid_step) {
    validate_inputs(links, params);
    const auto np = links.size();
    if (np > 12) throw std::invalid_argument("exhaustive_oracle: refuses more than 12 pairs");
    if (!(grid_step > 0.0 && grid_step < 0.5))
        throw std::invalid_argument("exhaustive_oracle: bad grid step");
    const auto ctx = make_ctx(links, params);

    const double eps = params.eps;
    const auto npts = static_cast<std::size_t>(std::floor((1.0 - 2.0 * eps) / grid_step)) + 1;
    std::vector<double> grid(npts);
    for (std::size_t j = 0; j < npts; ++j)
        grid[j] = std::min(eps + static_cast<double>(j) * grid_step, 1.0 - eps);

    // Per-pair throughput columns over the grid, filled by the batch kernels.
    std::vector<std::vector<double>> tau_d(np, std::vector<double>(npts));
    std::vector<std::vector<double>> tau_c(np, std::vector<double>(npts));
    std::vector<double> td_buf(npts);
    for (std::size_t i = 0; i < np; ++i) {
        kernels::d2d_throughput_grid(ctx[i].y3, grid.data(), tau_d[i].data(), npts);
        kernels::optimal_td_grid(ctx[i].y1c, ctx[i].L, grid.data(), td_buf.data(), npts);
        for (std::size_t j = 0; j < npts; ++j) {
            double td = td_buf[j];
            if (!std::isfinite(td))  // W-argument underflow corner
                td = optimal_td_core(ctx[i].y1c, ctx[i].L, grid[j]);
            tau_c[i][j] = td * ctx[i].log2y2;
        }
    }

    double best_value = -std::numeric_limits<double>::infinity();
    unsigned best_mask = 0;
    std::size_t best_j = 0;
    std::vector<double> sum(npts);
    // Counting down from the all-D2D vector makes exact ties resolve to D2D.
    for (unsigned mask = (1u << np); mask-- > 0;) {
        std::fill(sum.begin(), sum.end(), 0.0);
        for (std::size_t i = 0; i < np; ++i) {
            const auto& col = (mask >> i & 1u) ? tau_d[i] : tau_c[i];
            for (std::size_t j = 0; j < npts; ++j) sum[j] += col[j];
        }
        for (std::size_t j = 0; j < npts; ++j) {
            if (sum[j] > best_value) {
                best_value = sum[j];
                best_mask = mask;
                best_j = j;
            }
        }
    }

    OptimizationResult r;
    r.te_star = grid[best_j];
    r.modes.resize(np);
    r.td_star.resize(np);
    r.per_pair_tau.resize(np);
    double total = 0.0;
    for (std::size_t i = 0; i < np; ++i) {
        r.modes[i] = (best_mask >> i) & 1u;
        if (r.modes[i]) {
            r.td_star[i] = 0.0;
            r.per_pair_tau[i] = d2d_throughput(links[i], params, r.te_star);
        } else {
            r.td_star[i] = optimal_td_core(ctx[i].y1c, ctx[i].L, r.te_star);
            r.per_pair_tau[i] = cellular_throughput(links[i], params, r.te_star, r.td_star[i]);
        }
        total += r.per_pair_tau[i];
    }
    r.tau_s = total;
    return r;
}

nlohmann::json to_json(const OptimizationResult& r) {
    return {
        {"te_star", r.te_star},
        {"modes", r.modes},
        {"td_star", r.td_star},
        {"per_pair_tau", r.per_pair_tau},
        {"tau_s", r.tau_s},
        {"bounds_widened", r.bounds_widened},
    };
}

}  // namespace wpcn
