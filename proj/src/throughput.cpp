#include "wpcn/throughput.hpp"

#include <cmath>
#include <stdexcept>

namespace wpcn {

namespace {
constexpr double kInvLn2 = 1.4426950408889634073599246810018921;
// log2(1+x) through log1p so tiny far-field SNRs keep full precision.
inline double log2_1p(double x) { return std::log1p(x) * kInvLn2; }
}  // namespace

double harvested_energy(const PairLink& link, const SystemParams& params, double t_e) {
    if (!(t_e >= 0.0 && t_e <= 1.0))
        throw std::domain_error("harvested_energy: t_e must be in [0, 1]");
    return link.eta_t * params.p0 * link.h_t * t_e;
}

double uplink_rate(const PairLink& link, const SystemParams& params, double t_e, double t_d) {
    if (!(t_e >= 0.0) || !(t_d >= 0.0))
        throw std::domain_error("uplink_rate: times must be nonnegative");
    if (!(t_e + t_d < 1.0))
        throw std::domain_error("uplink_rate: t_e + t_d must be < 1");
    if (t_e == 0.0) return 0.0;
    const double u = 1.0 - t_e - t_d;
    const double snr = params.theta * link.eta_t * params.p0 * link.rho_t *
                       link.h_t * link.h_t * t_e / (params.sigma2 * u);
    return u * log2_1p(snr);
}

double downlink_rate(const PairLink& link, const SystemParams& params, double t_d) {
    if (!(t_d >= 0.0))
        throw std::domain_error("downlink_rate: t_d must be nonnegative");
    return t_d * log2_1p(params.p0 * link.phi_r * link.h_r / params.sigma2);
}

double cellular_throughput(const PairLink& link, const SystemParams& params, double t_e, double t_d) {
    return std::fmin(uplink_rate(link, params, t_e, t_d), downlink_rate(link, params, t_d));
}

double d2d_throughput(const PairLink& link, const SystemParams& params, double t_e) {
    if (t_e == 0.0 || t_e == 1.0) return 0.0;
    if (!(t_e > 0.0 && t_e < 1.0))
        throw std::domain_error("d2d_throughput: t_e must be in [0, 1]");
    const double u = 1.0 - t_e;
    const double snr = params.theta * link.eta_t * params.p0 * link.h_t * link.g * t_e /
                       (params.sigma2 * u);
    return u * log2_1p(snr);
}

double y1_coeff(const PairLink& link, const SystemParams& params) {
    return params.sigma2 /
           (link.eta_t * params.theta * params.p0 * link.rho_t * link.h_t * link.h_t);
}

double y2_factor(const PairLink& link, const SystemParams& params) {
    return 1.0 + params.p0 * link.phi_r * link.h_r / params.sigma2;
}

double y3_factor(const PairLink& link, const SystemParams& params) {
    return params.theta * link.eta_t * params.p0 * link.h_t * link.g / params.sigma2;
}

}  // namespace wpcn
