#pragma once

#include "wpcn/params.hpp"
#include "wpcn/throughput.hpp"

#include <span>
#include <vector>

#include <json.hpp>

namespace wpcn {

/// Derived per-pair quantities: the dimensionless factors of the closed-form
/// time allocations, the pair's own best D2D energy-transfer time, and its
/// mode-crossover threshold.
struct PairAnalysis {
    double y1c = 0.0;  // Y1(t_e) = y1c * (1 - t_e) / t_e
    double y2 = 0.0;   // 1 + P0*phi*H_R/sigma^2
    double y3 = 0.0;   // theta*eta*P0*H_T*G/sigma^2
    double te_d2d_star = 0.0;
    // 0: D2D wins for every t_e. 1: cellular wins for every t_e. Otherwise
    // the unique t_e where the two modes tie; D2D wins above it.
    double te_threshold = 0.0;
    bool cellular_capable = false;  // pair can prefer cellular somewhere

    double y1(double t_e) const { return y1c * (1.0 - t_e) / t_e; }
};

/// Mean-gain approximation of the common D2D energy-transfer time.
struct ApproxContext {
    double y4 = 0.0;     // arithmetic mean of the pairs' y3
    double te_hat = 0.0; // closed form evaluated at y4
};

struct OptimizationResult {
    double te_star = 0.0;
    std::vector<int> modes;          // 1 = D2D, 0 = cellular
    std::vector<double> td_star;     // 0 for D2D pairs
    std::vector<double> per_pair_tau;
    double tau_s = 0.0;
    bool bounds_widened = false;  // a degenerate search interval was widened to [eps, 1-eps]

    TimeAllocation allocation(std::size_t pair) const { return {te_star, td_star.at(pair)}; }
};

/// Result of a fixed-mode common-t_e search.
struct TaSearchResult {
    double te = 0.0;
    double value = 0.0;
    bool widened = false;
};

/// Closed-form downlink time that equalizes the uplink and downlink legs at
/// the given t_e in (0, 1). The result lies strictly inside (0, 1 - t_e).
double optimal_td(const PairLink& link, const SystemParams& params, double t_e);

/// Cellular throughput at the equalizing split: t_d* times the downlink
/// spectral efficiency. Unimodal in t_e.
double optimal_cellular_rate(const PairLink& link, const SystemParams& params, double t_e);

/// Fraction of the IT phase spent on downlink, t_d*/(1 - t_e).
double frac_f(const PairLink& link, const SystemParams& params, double t_e);

/// Maximizer of the D2D throughput in t_e, clamped into [eps, 1-eps].
double optimal_te_d2d(const PairLink& link, const SystemParams& params);

/// Same closed form for a bare y3 factor (shared with the mean-gain
/// approximation; falls back to a golden-section search when y3 ~ 1, where
/// the formula is 0/0).
double optimal_te_from_y3(double y3, const SystemParams& params);

/// Endpoint classification and threshold root-find for one pair.
PairAnalysis analyze_pair(const PairLink& link, const SystemParams& params);

/// Sum of D2D throughputs at a common t_e (all pairs forced direct).
double all_d2d_objective(std::span<const PairLink> links, const SystemParams& params, double t_e);

/// Sum of optimal cellular rates at a common t_e (all pairs forced cellular).
double all_cellular_objective(std::span<const PairLink> links, const SystemParams& params, double t_e);

/// Golden-section search of the all-D2D sum over the hull of the per-pair
/// maximizers; widens to [eps, 1-eps] when the hull is degenerate or the
/// argmax lands on its edge.
TaSearchResult optimize_all_d2d(std::span<const PairLink> links, const SystemParams& params);

/// Golden-section search of the all-cellular sum over [eps, 1-eps].
TaSearchResult optimize_all_cellular(std::span<const PairLink> links, const SystemParams& params);

/// Joint mode selection and time allocation: per-pair threshold
/// classification, descending-threshold subranges with one golden-section
/// search each, and a final per-pair mode decision at the winning t_e.
OptimizationResult joint_optimize(std::span<const PairLink> links, const SystemParams& params);

/// Mean-gain approximation of the all-D2D time allocation.
ApproxContext approx_te_d2d(std::span<const PairLink> links, const SystemParams& params);

/// Brute-force reference: enumerates every mode vector and scans a t_e grid
/// for each. Refuses more than 12 pairs.
OptimizationResult exhaustive_oracle(std::span<const PairLink> links, const SystemParams& params,
                                     double grid_step);

nlohmann::json to_json(const OptimizationResult& r);

}  // namespace wpcn
