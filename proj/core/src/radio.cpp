#include "deba/radio.hpp"

#include <algorithm>
#include <cmath>

namespace deba {

void validate(const RadioParams& p)
{
    if (!(p.e_tx > 0.0 && p.e_rx > 0.0 && p.e_amp > 0.0 && p.tx_power_mobile > 0.0 &&
          p.tx_power_static > 0.0)) {
        throw DomainError("radio parameters must be positive");
    }
    const Range intra{2.0, 3.2};
    const Range inter{3.5, 4.0};
    if (!(p.alpha_intra.min <= p.alpha_intra.max) || !intra.contains(p.alpha_intra.min) ||
        !intra.contains(p.alpha_intra.max)) {
        throw DomainError("radio: intra path-loss exponent must lie in [2, 3.2]");
    }
    if (!(p.alpha_inter.min <= p.alpha_inter.max) || !inter.contains(p.alpha_inter.min) ||
        !inter.contains(p.alpha_inter.max)) {
        throw DomainError("radio: inter path-loss exponent must lie in [3.5, 4]");
    }
}

void validate(const ChannelModel& m)
{
    if (!(m.reference_distance > 0.0) || !(m.outage_scale > 0.0) || !(m.shadowing_sigma_db >= 0.0) ||
        !(m.mobile_scale > 0.0)) {
        throw DomainError("channel model: reference distance and kappa must be positive, sigma >= 0");
    }
}

double tx_energy(double bits, double distance, const RadioParams& params, double alpha,
                 double reference_distance)
{
    return bits * (params.e_tx + params.e_amp * std::pow(distance / reference_distance, alpha));
}

double rx_energy(double bits, const RadioParams& params)
{
    return bits * params.e_rx;
}

double link_loss_with_shadowing(const ChannelModel& model, double distance, double alpha,
                                bool mobile, double shadowing_db)
{
    if (distance <= 0.0) {
        return 0.0;
    }
    const double kappa = model.outage_scale * (mobile ? model.mobile_scale : 1.0);
    const double exponent = kappa * std::pow(distance / model.reference_distance, alpha) *
                            std::pow(10.0, shadowing_db / 10.0);
    return std::clamp(1.0 - std::exp(-exponent), 0.0, 1.0);
}

double link_loss_probability(const ChannelModel& model, double distance, double alpha, bool mobile)
{
    return link_loss_with_shadowing(model, distance, alpha, mobile, 0.0);
}

double link_loss_probability(const ChannelModel& model, double distance, double alpha,
                             bool mobile, Rng& rng)
{
    double shadow = 0.0;
    if (model.kind == FadingKind::LogNormalInter) {
        shadow = model.shadowing_sigma_db * rng.normal();
    }
    return link_loss_with_shadowing(model, distance, alpha, mobile, shadow);
}

EnergyState drain(EnergyState state, double joules)
{
    if (joules < 0.0) {
        throw DomainError("drain: negative energy amount");
    }
    state.residual = std::max(0.0, state.residual - joules);
    if (state.residual == 0.0) {
        state.alive = false;
    }
    return state;
}

bool can_afford(const EnergyState& state, double joules)
{
    return state.alive && joules <= state.residual;
}

} // namespace deba
