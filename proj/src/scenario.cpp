#include "wpcn/scenario.hpp"

#include "wpcn/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wpcn {

namespace {

constexpr double kMinDistance = 1e-9;  // gain model is singular at zero range

double dist(const std::array<double, 2>& a, const std::array<double, 2>& b) {
    return std::hypot(a[0] - b[0], a[1] - b[1]);
}

}  // namespace

Deployment deploy(int n_nodes, double field_size, std::uint64_t seed) {
    if (n_nodes < 2 || n_nodes % 2 != 0)
        throw std::invalid_argument("deploy: n_nodes must be even and >= 2");
    if (!(field_size > 0))
        throw std::invalid_argument("deploy: field_size must be > 0");

    Deployment dep;
    dep.field_size = field_size;
    dep.hap_position = {field_size / 2.0, field_size / 2.0};
    dep.positions.resize(n_nodes);
    Rng rng(seed);
    for (auto& p : dep.positions)
        p = {rng.uniform(0.0, field_size), rng.uniform(0.0, field_size)};

    dep.pairs.reserve(n_nodes / 2);
    for (int i = 0; i < n_nodes / 2; ++i)
        dep.pairs.emplace_back(i, n_nodes - 1 - i);

    // Re-draw nodes that coincide with the HAP or with their partner.
    for (int pass = 0; pass < 64; ++pass) {
        bool clean = true;
        for (int i = 0; i < n_nodes; ++i) {
            const int partner = n_nodes - 1 - i;
            if (dist(dep.positions[i], dep.hap_position) < kMinDistance ||
                dist(dep.positions[i], dep.positions[partner]) < kMinDistance) {
                dep.positions[i] = {rng.uniform(0.0, field_size), rng.uniform(0.0, field_size)};
                clean = false;
            }
        }
        if (clean) return dep;
    }
    throw numerical_error("deploy: could not separate nodes after 64 re-draw passes");
}

void assemble_gains(const Deployment& dep, const SystemParams& params, ChannelRealization& ch) {
    const auto n_nodes = dep.positions.size();
    const auto n_pairs = dep.pairs.size();
    ch.h.resize(n_nodes);
    ch.g.resize(n_pairs);
    for (std::size_t i = 0; i < n_nodes; ++i) {
        const double d = dist(dep.positions[i], dep.hap_position);
        ch.h[i] = params.p_coeff * ch.fading_h[i] / std::pow(d, params.n_exp);
    }
    for (std::size_t k = 0; k < n_pairs; ++k) {
        const auto& [tx, rx] = dep.pairs[k];
        const double d = dist(dep.positions[tx], dep.positions[rx]);
        ch.g[k] = params.p_coeff * ch.fading_g[k] / std::pow(d, params.n_exp);
    }
}

ChannelRealization draw_channels(const Deployment& dep, const SystemParams& params,
                                 std::uint64_t seed, FadingModel model) {
    const auto n_nodes = dep.positions.size();
    if (n_nodes == 0 || dep.pairs.size() != n_nodes / 2)
        throw std::invalid_argument("draw_channels: malformed deployment");
    for (std::size_t i = 0; i < n_nodes; ++i)
        if (dist(dep.positions[i], dep.hap_position) < kMinDistance)
            throw std::invalid_argument("draw_channels: node within 1e-9 m of the HAP");
    for (const auto& [tx, rx] : dep.pairs)
        if (dist(dep.positions[tx], dep.positions[rx]) < kMinDistance)
            throw std::invalid_argument("draw_channels: paired nodes within 1e-9 m of each other");

    ChannelRealization ch;
    ch.fading_h.resize(n_nodes);
    ch.fading_g.resize(dep.pairs.size());
    Rng rng(seed);
    if (model == FadingModel::deterministic_unity) {
        std::fill(ch.fading_h.begin(), ch.fading_h.end(), 1.0);
        std::fill(ch.fading_g.begin(), ch.fading_g.end(), 1.0);
    } else {
        for (auto& f : ch.fading_h) f = rng.exponential_unit_mean();
        for (auto& f : ch.fading_g) f = rng.exponential_unit_mean();
    }
    assemble_gains(dep, params, ch);
    return ch;
}

std::vector<PairLink> make_links(const Deployment& dep, const ChannelRealization& ch,
                                 const SystemParams& params) {
    std::vector<PairLink> links;
    links.reserve(dep.pairs.size());
    for (std::size_t k = 0; k < dep.pairs.size(); ++k) {
        const auto& [tx, rx] = dep.pairs[k];
        links.push_back(PairLink{ch.h[tx], ch.h[rx], ch.g[k], params.eta, params.rho, params.phi});
    }
    return links;
}

double field_size_for_exponent(double n_exp) {
    if (n_exp < 2.0 || n_exp > 5.0)
        throw std::invalid_argument("field_size_for_exponent: defaults cover n in [2, 5] only");
    return 23.4 + (n_exp - 2.0) * (4.4 - 23.4) / 3.0;
}

double field_size_for_sensitivity(double n_exp, const SystemParams& params,
                                  double sensitivity_dbm) {
    const double sens_watts = dbm_to_watts(sensitivity_dbm);
    return std::sqrt(2.0) * std::pow(params.p0 * params.p_coeff / sens_watts, 1.0 / n_exp);
}

nlohmann::json to_json(const Deployment& dep) {
    return {
        {"field_size", dep.field_size},
        {"hap_position", dep.hap_position},
        {"positions", dep.positions},
        {"pairs", dep.pairs},
    };
}

Deployment deployment_from_json(const nlohmann::json& j) {
    Deployment dep;
    dep.field_size = j.at("field_size").get<double>();
    dep.hap_position = j.at("hap_position").get<std::array<double, 2>>();
    dep.positions = j.at("positions").get<std::vector<std::array<double, 2>>>();
    dep.pairs = j.at("pairs").get<std::vector<std::pair<int, int>>>();
    return dep;
}

nlohmann::json to_json(const ChannelRealization& ch) {
    return {
        {"h", ch.h},
        {"fading_h", ch.fading_h},
        {"g", ch.g},
        {"fading_g", ch.fading_g},
    };
}

ChannelRealization channels_from_json(const nlohmann::json& j) {
    ChannelRealization ch;
    ch.h = j.at("h").get<std::vector<double>>();
    ch.fading_h = j.at("fading_h").get<std::vector<double>>();
    ch.g = j.at("g").get<std::vector<double>>();
    ch.fading_g = j.at("fading_g").get<std::vector<double>>();
    return ch;
}

}  // namespace wpcn
