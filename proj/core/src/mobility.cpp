#include "deba/mobility.hpp"

#include <cmath>
#include <numbers>

namespace deba {

void validate(const MobilityParams& p)
{
    if (!(p.area_width > 0.0 && p.area_height > 0.0)) {
        throw DomainError("mobility: area must be positive");
    }
    if (!(p.v_min > 0.0 && p.v_min <= p.v_max)) {
        throw DomainError("mobility: require 0 < v_min <= v_max");
    }
    if (p.group_count < 1 || !(p.group_radius > 0.0) || !(p.update_interval > 0.0)) {
        throw DomainError("mobility: group count, group radius and update interval must be positive");
    }
    if (!(p.heading_persistence >= 0.0 && p.heading_persistence <= 1.0)) {
        throw DomainError("mobility: heading persistence must lie in [0, 1]");
    }
}

double reflect_into(double v, double extent)
{
    const double period = 2.0 * extent;
    double m = std::fmod(v, period);
    if (m < 0.0) {
        m += period;
    }
    return m <= extent ? m : period - m;
}

namespace {

Vec2 place(const MobilityParams& p, Vec2 v)
{
    return {reflect_into(v.x, p.area_width), reflect_into(v.y, p.area_height)};
}

Vec2 uniform_in_disk(Rng& rng, double radius)
{
    const double r = radius * std::sqrt(rng.uniform());
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    return {r * std::cos(theta), r * std::sin(theta)};
}

} // namespace

MobilityState init_positions(const MobilityParams& params, int n_wbans, Rng& rng)
{
    validate(params);
    if (n_wbans < 1) {
        throw DomainError("init_positions: need at least one WBAN");
    }
    MobilityState s;
    s.groups.resize(static_cast<std::size_t>(params.group_count));
    for (auto& g : s.groups) {
        g.reference = {rng.uniform(0.0, params.area_width), rng.uniform(0.0, params.area_height)};
        g.heading = rng.uniform(0.0, 2.0 * std::numbers::pi);
    }
    const auto n = static_cast<std::size_t>(n_wbans);
    s.group_of.resize(n);
    s.offset.resize(n);
    s.position.resize(n);
    s.velocity.assign(n, Vec2{});
    for (std::size_t w = 0; w < n; ++w) {
        s.group_of[w] = static_cast<int>(w % s.groups.size());
        s.offset[w] = uniform_in_disk(rng, params.group_radius);
        s.position[w] = place(params, s.groups[static_cast<std::size_t>(s.group_of[w])].reference + s.offset[w]);
    }
    return s;
}

MobilityState step(const MobilityParams& params, MobilityState state, double dt, Rng& rng)
{
    if (!(dt > 0.0)) {
        throw DomainError("mobility step: dt must be positive");
    }
    for (auto& g : state.groups) {
        // Three draws per group regardless of outcome keep the stream aligned.
        const bool keep = rng.uniform() < params.heading_persistence;
        const double fresh_heading = rng.uniform(0.0, 2.0 * std::numbers::pi);
        g.speed = rng.uniform(params.v_min, params.v_max);
        if (!keep) {
            g.heading = fresh_heading;
        }
        g.travelled = g.speed * dt;
        Vec2 next = g.reference + g.travelled * Vec2{std::cos(g.heading), std::sin(g.heading)};
        Vec2 dir{std::cos(g.heading), std::sin(g.heading)};
        if (next.x < 0.0 || next.x > params.area_width) {
            next.x = reflect_into(next.x, params.area_width);
            dir.x = -dir.x;
        }
        if (next.y < 0.0 || next.y > params.area_height) {
            next.y = reflect_into(next.y, params.area_height);
            dir.y = -dir.y;
        }
        g.heading = std::atan2(dir.y, dir.x);
        g.reference = next;
    }
    const double jitter = 0.1 * params.group_radius;
    for (std::size_t w = 0; w < state.position.size(); ++w) {
        Vec2 off = state.offset[w] + Vec2{rng.uniform(-jitter, jitter), rng.uniform(-jitter, jitter)};
        const double r = norm(off);
        if (r > params.group_radius) {
            off = (params.group_radius / r) * off;
        }
        state.offset[w] = off;
        const Vec2 prev = state.position[w];
        state.position[w] =
            place(params, state.groups[static_cast<std::size_t>(state.group_of[w])].reference + off);
        state.velocity[w] = (1.0 / dt) * (state.position[w] - prev);
    }
    return state;
}

} // namespace deba
