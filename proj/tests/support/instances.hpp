#pragma once

// Random small planning instances for property and oracle tests.

#include "deba/optimizer.hpp"
#include "deba/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace deba::testing {

/// Relative error with an absolute floor for values near zero.
inline double rel_err(double got, double want)
{
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

/// A single-WBAN epoch with `n_sensors` sensors and one LMU.
///
/// Magnitudes follow the simulator: up to a few hundred kilobits per sensor,
/// per-bit energies of tens of nanojoules, losses up to 40%. The service
/// requirement is drawn close to what the WBAN can deliver, so binding
/// fractions sit well above the 0.01 oracle grid spacing.
inline EpochState random_instance(Rng& rng, std::size_t n_sensors, bool phase2)
{
    EpochState s;
    s.optimize_phase2 = phase2;
    s.energy_scaling = 1.0;
    s.c_units = 1e-9;

    LmuTerm m;
    m.backlog = rng.bernoulli(0.5) ? rng.uniform(0.0, 2e4) : 0.0;
    m.loss = rng.uniform(0.0, 0.4);
    m.tx_joules_per_bit = rng.uniform(17e-9, 60e-9);
    m.rx_joules_per_bit = 36.1e-9;
    m.energy_initial = 50.0;
    // Occasionally squeeze the battery so the energy row binds.
    m.energy_residual = rng.bernoulli(0.2) ? rng.uniform(2.5, 2.53) : rng.uniform(5.0, 50.0);
    m.service_rate = 2e6;
    m.intra_rate = 1e6;
    m.inter_rate = 2e6;
    m.propagation = rng.uniform(1e-7, 3e-6);
    m.critical = rng.bernoulli(0.5);
    s.lmus.push_back(m);

    double deliverable = m.backlog;
    for (std::size_t i = 0; i < n_sensors; ++i) {
        SensorTerm t;
        t.lmu = 0;
        const double arrivals = rng.uniform(1e3, 1e5);
        t.volume = arrivals + (rng.bernoulli(0.3) ? rng.uniform(0.0, 2e4) : 0.0);
        t.loss = rng.uniform(0.0, 0.05);
        t.traffic = (t.volume - arrivals) + arrivals * (1.0 - t.loss);
        t.tx_joules_per_bit = rng.uniform(16.7e-9, 20e-9);
        t.energy_initial = 0.5;
        // Near-floor sensors only on Phase I instances: an idle sensor inflates
        // the LMU capacity and pushes the Phase II fraction below grid resolution.
        const bool squeeze = rng.bernoulli(0.15) && !phase2;
        t.energy_residual = squeeze ? rng.uniform(0.02, 0.03) : rng.uniform(0.1, 0.5);
        t.alive = true;
        t.weights = {rng.uniform(0.3, 1.0), t.energy_residual / t.energy_initial, rng.uniform(0.5, 1.0), 1.0};
        // Sensors at or below the 5% energy floor must stay idle.
        if (t.energy_residual > 0.05 * t.energy_initial) {
            deliverable += t.volume * (1.0 - t.loss);
        }
        s.sensors.push_back(t);
    }
    s.lmus[0].required = deliverable * (1.0 - m.loss) * rng.uniform(0.85, 1.0);
    return s;
}

/// Constraint set drawn around values that make some rows bind.
inline Constraints random_constraints(Rng& rng)
{
    Constraints c;
    c.cost_budget = rng.bernoulli(0.2) ? rng.uniform(5e-4, 2e-3) : 1e3;
    c.delay_floor = rng.uniform(0.3, 0.7);
    c.energy_floor = 0.05;
    c.service_floor = rng.uniform(0.8, 0.95);
    return c;
}

} // namespace deba::testing
