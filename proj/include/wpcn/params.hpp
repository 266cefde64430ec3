#pragma once

#include <stdexcept>
#include <cmath>

namespace wpcn {

/// Global physical constants of the hybrid-access-point system.
/// All powers are in watts; times are fractions of the unit block (T = 1 s).
struct SystemParams {
    double p0 = 4.0;        // HAP transmit power [W]
    double sigma2 = 1e-13;  // noise power [W] (-100 dBm)
    double theta = 0.8;     // usable fraction of harvested energy
    double eta = 0.5;       // RF-to-DC rectification efficiency
    double rho = 1.0;       // uplink/downlink channel asymmetry
    double phi = 1.0;       // downlink ET/IT characteristic factor
    double n_exp = 2.0;     // path-loss exponent
    double p_coeff = 1.0;   // path-loss coefficient
    double xi = 1e-3;       // golden-section tolerance
    double eps = 1e-6;      // endpoint-evaluation tolerance
};

/// Channel/state of one transmitter-receiver pair.
struct PairLink {
    double h_t;    // HAP<->transmitter power gain
    double h_r;    // HAP<->receiver power gain
    double g;      // direct transmitter->receiver power gain
    double eta_t;  // transmitter rectification efficiency
    double rho_t;  // uplink asymmetry for this transmitter
    double phi_r;  // downlink ET/IT factor for this receiver
};

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

inline void validate(const SystemParams& p) {
    auto bad = [](const char* msg) { throw std::invalid_argument(msg); };
    if (!(p.p0 > 0)) bad("p0 must be > 0");
    if (!(p.sigma2 > 0)) bad("sigma2 must be > 0");
    if (!(p.theta > 0 && p.theta <= 1)) bad("theta must be in (0, 1]");
    if (!(p.eta > 0 && p.eta <= 1)) bad("eta must be in (0, 1]");
    if (!(p.rho > 0)) bad("rho must be > 0");
    if (!(p.phi > 0)) bad("phi must be > 0");
    if (!(p.n_exp >= 2)) bad("n_exp must be >= 2");
    if (!(p.p_coeff > 0)) bad("p_coeff must be > 0");
    if (!(p.xi > 0 && p.xi < 1)) bad("xi must be in (0, 1)");
    if (!(p.eps > 0 && p.eps < 0.1)) bad("eps must be a small positive number");
}

inline void validate(const PairLink& l) {
    if (!(l.h_t > 0 && l.h_r > 0 && l.g > 0 && l.eta_t > 0 && l.rho_t > 0 && l.phi_r > 0))
        throw std::invalid_argument("pair link fields must all be strictly positive");
}

/// Numerical failure that is not a caller contract violation (e.g. a root
/// bracket that should exist analytically but was not found).
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace wpcn
