#pragma once

// Reference-point group mobility for whole WBANs. Sensors ride the body
// frame, so only the WBAN origin moves.

#include "deba/model.hpp"
#include "deba/rng.hpp"

#include <vector>

namespace deba {

struct MobilityParams {
    double area_width = 3500.0;  // m
    double area_height = 3500.0; // m
    double v_min = 1.5;          // m/s
    double v_max = 2.5;          // m/s
    int group_count = 20;
    double group_radius = 10.0;  // m
    double update_interval = 1.0; // s
    double heading_persistence = 0.8;
};

void validate(const MobilityParams& p);

struct MobilityGroup {
    Vec2 reference;
    double heading = 0.0;   // rad
    double speed = 0.0;     // m/s used by the most recent step
    double travelled = 0.0; // path length of the most recent step, m
};

struct MobilityState {
    std::vector<MobilityGroup> groups;
    std::vector<int> group_of;   // per WBAN
    std::vector<Vec2> offset;    // per WBAN, relative to its group reference
    std::vector<Vec2> position;  // per WBAN, inside the area
    std::vector<Vec2> velocity;  // per WBAN, m/s over the last step
};

/// Round-robin group assignment, uniform references, members uniform in the group disk.
MobilityState init_positions(const MobilityParams& params, int n_wbans, Rng& rng);

/// Advances every group reference by one step of `dt` seconds.
MobilityState step(const MobilityParams& params, MobilityState state, double dt, Rng& rng);

/// Folds a coordinate back into [0, extent] by mirror reflection.
double reflect_into(double v, double extent);

} // namespace deba
