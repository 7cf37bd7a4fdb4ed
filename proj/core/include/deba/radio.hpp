#pragma once

// First-order radio energy accounting and fading-derived link loss.

#include "deba/model.hpp"
#include "deba/rng.hpp"

namespace deba {

struct Range {
    double min = 0.0;
    double max = 0.0;

    [[nodiscard]] bool contains(double v) const { return v >= min && v <= max; }
};

struct RadioParams {
    double e_tx = 16.7e-9;   // J/bit, electronics
    double e_rx = 36.1e-9;   // J/bit
    double e_amp = 1.97e-9;  // J/bit per (reference distance)^alpha
    Range alpha_intra{2.0, 3.2};
    Range alpha_inter{3.5, 4.0};
    double tx_power_mobile = 55e-9; // W
    double tx_power_static = 12e-9; // W
};

void validate(const RadioParams& p);

enum class FadingKind { RayleighIntra, LogNormalInter };

struct ChannelModel {
    FadingKind kind = FadingKind::RayleighIntra;
    double reference_distance = 1.0; // m
    double outage_scale = 0.1;       // kappa at the reference distance
    double shadowing_sigma_db = 0.0; // log-normal only
    double mobile_scale = 1.25;      // kappa multiplier for links with a moving endpoint

    static ChannelModel rayleigh_intra() { return {FadingKind::RayleighIntra, 1.0, 0.1, 0.0, 1.25}; }
    static ChannelModel lognormal_inter() { return {FadingKind::LogNormalInter, 100.0, 0.1, 8.0, 1.25}; }
};

void validate(const ChannelModel& m);

/// Energy to transmit `bits` over `distance` meters.
///
/// The amplifier term is e_amp * (distance / reference_distance)^alpha per bit,
/// so with the default 1 m reference it reduces to e_amp * d^alpha.
double tx_energy(double bits, double distance, const RadioParams& params, double alpha,
                 double reference_distance = 1.0);

double rx_energy(double bits, const RadioParams& params);

/// Mean outage probability 1 - exp(-kappa * (d/d0)^alpha).
double link_loss_probability(const ChannelModel& model, double distance, double alpha,
                             bool mobile = false);

/// Outage probability with one shadowing draw; Rayleigh links ignore `rng`.
///
/// The log-normal draw multiplies the exponent by 10^(X/10), X ~ N(0, sigma^2).
/// Exactly one normal is consumed per call for LogNormalInter so draw
/// sequences do not depend on link state.
double link_loss_probability(const ChannelModel& model, double distance, double alpha,
                             bool mobile, Rng& rng);

/// Outage probability for a known shadowing value in dB.
double link_loss_with_shadowing(const ChannelModel& model, double distance, double alpha,
                                bool mobile, double shadowing_db);

/// Removes `joules` from the battery, clamping at zero.
EnergyState drain(EnergyState state, double joules);

/// True when the battery can pay for `joules` in full.
bool can_afford(const EnergyState& state, double joules);

} // namespace deba
