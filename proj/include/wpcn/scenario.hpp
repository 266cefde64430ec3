#pragma once

#include "wpcn/params.hpp"

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include <json.hpp>

namespace wpcn {

/// Node layout for one run: N nodes on a square field with the hybrid
/// access point at the center, paired node i <-> node N-1-i (0-based).
struct Deployment {
    double field_size = 0.0;
    std::array<double, 2> hap_position{0.0, 0.0};
    std::vector<std::array<double, 2>> positions;
    std::vector<std::pair<int, int>> pairs;  // (transmitter, receiver) indices

    bool operator==(const Deployment&) const = default;
};

/// Per-block channel state: HAP-link gains per node, direct gains per pair,
/// and the underlying fading components they were assembled from.
struct ChannelRealization {
    std::vector<double> h;         // HAP <-> node power gain
    std::vector<double> fading_h;  // per node
    std::vector<double> g;         // direct transmitter -> receiver gain
    std::vector<double> fading_g;  // per pair

    bool operator==(const ChannelRealization&) const = default;
};

enum class FadingModel {
    unit_mean_exponential,  // Rayleigh-envelope power fading, mean 1
    deterministic_unity,    // all fading components exactly 1 (debugging)
};

/// Nodes i.i.d. uniform over [0, L]^2 (the fixed-N conditioning of a Poisson
/// deployment), HAP at the field center, pairing i <-> N-1-i. Positions that
/// land within 1e-9 m of the HAP or of their partner are re-drawn.
/// Deterministic under the seed. n_nodes must be even and >= 2.
Deployment deploy(int n_nodes, double field_size, std::uint64_t seed);

/// Fading drawn per the model and combined with path loss: gain =
/// p_coeff * fading / distance^n_exp, for HAP links and direct links alike.
ChannelRealization draw_channels(const Deployment& dep, const SystemParams& params,
                                 std::uint64_t seed,
                                 FadingModel model = FadingModel::unit_mean_exponential);

/// Gain assembly alone (pure in positions and fading; replays bit-exactly).
void assemble_gains(const Deployment& dep, const SystemParams& params,
                    ChannelRealization& ch);

/// Per-pair link records ready for the throughput formulas.
std::vector<PairLink> make_links(const Deployment& dep, const ChannelRealization& ch,
                                 const SystemParams& params);

/// Tabulated field-size defaults: 23.4 m at n = 2 down to 4.4 m at n = 5,
/// linear in n for intermediates. n outside [2, 5] requires an explicit L.
double field_size_for_exponent(double n_exp);

/// Field size from the receiver-sensitivity rule: the corner of the field
/// (distance L/sqrt(2) from the HAP) receives exactly the sensitivity power
/// on an average-fading link, so L = sqrt(2) * (p0 * p_coeff / P_sens)^(1/n).
/// This is the regime in which mode selection is actually contested; the
/// tabulated defaults above put every pair deep into D2D territory.
double field_size_for_sensitivity(double n_exp, const SystemParams& params,
                                  double sensitivity_dbm = -20.0);

nlohmann::json to_json(const Deployment& dep);
Deployment deployment_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ChannelRealization& ch);
ChannelRealization channels_from_json(const nlohmann::json& j);

}  // namespace wpcn
