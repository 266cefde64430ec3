#pragma once

#include "wpcn/params.hpp"

namespace wpcn {

/// Split of the unit block: t_e for downlink energy transfer, then
/// information transfer. Cellular mode further splits IT into uplink
/// (1 - t_e - t_d) and downlink (t_d); D2D mode uses all of 1 - t_e.
struct TimeAllocation {
    double t_e = 0.0;
    double t_d = 0.0;
};

/// Energy harvested by the transmitter over the ET phase: eta * P0 * H_T * t_e.
double harvested_energy(const PairLink& link, const SystemParams& params, double t_e);

/// Uplink leg of cellular mode, in normalized bits over the block:
/// (1-t_e-t_d) * log2(1 + theta*eta*rho*P0*H_T^2*t_e / (sigma^2*(1-t_e-t_d))).
/// Zero at t_e = 0. Throws std::domain_error when t_e + t_d >= 1.
double uplink_rate(const PairLink& link, const SystemParams& params, double t_e, double t_d);

/// Downlink leg: t_d * log2(1 + P0*phi*H_R/sigma^2), linear in t_d.
double downlink_rate(const PairLink& link, const SystemParams& params, double t_d);

/// Decode-and-forward cellular throughput: min of the two legs.
double cellular_throughput(const PairLink& link, const SystemParams& params, double t_e, double t_d);

/// Direct-link throughput:
/// (1-t_e) * log2(1 + theta*eta*P0*H_T*G*t_e / (sigma^2*(1-t_e))).
/// Both boundaries t_e = 0 and t_e = 1 evaluate to their analytic limit 0.
double d2d_throughput(const PairLink& link, const SystemParams& params, double t_e);

// Dimensionless factors of the closed-form time allocations.
// y1 depends on t_e through y1_coeff * (1 - t_e) / t_e.
double y1_coeff(const PairLink& link, const SystemParams& params);
double y2_factor(const PairLink& link, const SystemParams& params);
double y3_factor(const PairLink& link, const SystemParams& params);

}  // namespace wpcn
