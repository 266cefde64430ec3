#pragma once

#include "wpcn/optimizer.hpp"
#include "wpcn/params.hpp"
#include "wpcn/scenario.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace wpcn {

enum class Scheme {
    joint_opt,
    all_d2d_opt_ta,
    all_cell_opt_ta,
    all_d2d_fixed_ta,     // t_e = 1/2
    all_cell_fixed_ta,    // t_e = t_d = 1/3
    all_cell_uniform_ta,  // same split; kept separate as the gain baseline
};

const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);
std::vector<Scheme> all_schemes();

/// One (n_nodes, path-loss exponent, field size) configuration cell.
struct CellSpec {
    int n_nodes = 20;
    double n_exp = 2.0;
    double field_size = 23.4;
};

struct CampaignConfig {
    int n_nodes = 20;
    std::vector<double> n_exponents = {2.0, 3.0, 4.0, 5.0};
    std::vector<double> field_sizes;  // empty: tabulated default per exponent
    int deployments = 20;
    int fading_per_deployment = 500;
    std::uint64_t seed = 1;
    std::vector<Scheme> schemes = all_schemes();
    SystemParams params{};
    FadingModel fading_model = FadingModel::unit_mean_exponential;
    int threads = 0;  // 0: hardware concurrency

    /// Explicit per-cell overrides; when set they replace the
    /// n_exponents/field_sizes expansion (used by the figure sweeps).
    std::vector<CellSpec> cells;

    int trials() const { return deployments * fading_per_deployment; }
    std::vector<CellSpec> resolved_cells() const;
};

struct Stat {
    double mean = 0.0;
    double stderr_mean = 0.0;
    int count = 0;
};

struct CellReport {
    CellSpec cell;
    int trials = 0;
    std::map<Scheme, Stat> tau_s;
    Stat d2d_fraction;                      // joint_opt
    Stat te_star_joint, te_star_all_d2d, te_star_all_cell;
    Stat uplink_it_joint, downlink_it_joint;        // cellular pairs under joint_opt
    Stat uplink_it_all_cell, downlink_it_all_cell;  // under all_cell_opt_ta
    Stat approx_loss;                       // relative loss of te_hat vs optimized all-D2D
    std::optional<double> gain_over_baseline_pct;  // joint vs uniform cellular
    int widened_count = 0;
};

struct CampaignReport {
    CampaignConfig config;
    std::vector<CellReport> cells;
};

/// Seeds of one (cell, trial) slot. Trial t belongs to deployment
/// t / fading_per_deployment and draws its own fading block.
struct TrialSeeds {
    std::uint64_t deployment;
    std::uint64_t fading;
};
TrialSeeds trial_seeds(const CampaignConfig& cfg, std::size_t cell_index, int trial_index);

/// Runs every configured scheme on every (deployment x fading) realization
/// of every cell. Deterministic under the seed regardless of thread count;
/// a failing trial aborts the whole campaign with its index in the message.
CampaignReport run_campaign(const CampaignConfig& cfg);

/// Average uplink and downlink IT times of cellular-mode pairs, per scheme.
/// Throws numerical_error when no pair ever selects cellular mode.
struct ItSplit {
    double mean_uplink_it = 0.0;
    double mean_downlink_it = 0.0;
};
std::map<Scheme, ItSplit> uplink_downlink_split(const CampaignConfig& cfg);

/// Fraction of pairs choosing D2D under joint optimization, per cell.
std::vector<std::pair<CellSpec, Stat>> d2d_selection_stats(const CampaignConfig& cfg);

nlohmann::json to_json(const CampaignConfig& cfg);
CampaignConfig campaign_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CampaignReport& report);

/// Long-format CSV: one row per scheme x cell x metric, with the resolved
/// config embedded in '#' header lines so any output can be replayed.
std::string report_to_csv(const CampaignReport& report);

/// Sweep data behind one of the named benchmark figures; see the README for
/// exact columns. Valid ids: fig3 fig4 fig5a fig5b fig6a fig7.
std::string figure_csv(const std::string& figure_id, const CampaignConfig& base);
std::vector<std::string> figure_ids();

}  // namespace wpcn
