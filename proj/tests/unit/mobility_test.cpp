#include "deba/mobility.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace deba {
namespace {

bool inside(const MobilityParams& p, Vec2 v)
{
    return v.x >= 0.0 && v.x <= p.area_width && v.y >= 0.0 && v.y <= p.area_height;
}

TEST(InitPositions, RoundRobinGroups)
{
    Rng rng(1);
    const auto s = init_positions(MobilityParams{}, 400, rng);
    std::vector<int> members(20, 0);
    for (int g : s.group_of) {
        ++members[static_cast<std::size_t>(g)];
    }
    for (int m : members) {
        EXPECT_EQ(m, 20);
    }
}

TEST(InitPositions, SingleWbanNearItsReference)
{
    MobilityParams p;
    p.group_count = 1;
    Rng rng(2);
    const auto s = init_positions(p, 1, rng);
    ASSERT_EQ(s.position.size(), 1u);
    EXPECT_TRUE(inside(p, s.position[0]));
    EXPECT_LE(distance(s.position[0], s.groups[0].reference), p.group_radius + 1e-9);
}

TEST(InitPositions, SameSeedSamePositions)
{
    Rng a(3);
    Rng b(3);
    const auto sa = init_positions(MobilityParams{}, 50, a);
    const auto sb = init_positions(MobilityParams{}, 50, b);
    EXPECT_EQ(sa.position, sb.position);
    EXPECT_EQ(sa.group_of, sb.group_of);
}

TEST(InitPositions, RejectsEmptyNetwork)
{
    Rng rng(4);
    EXPECT_THROW(init_positions(MobilityParams{}, 0, rng), DomainError);
}

TEST(Step, FixedSpeedGivesExactDisplacement)
{
    MobilityParams p;
    p.v_min = 2.0;
    p.v_max = 2.0;
    p.group_count = 1;
    Rng rng(5);
    auto s = init_positions(p, 1, rng);
    s.groups[0].reference = {1750.0, 1750.0};
    const Vec2 before = s.groups[0].reference;
    s = step(p, s, 1.0, rng);
    EXPECT_NEAR(distance(before, s.groups[0].reference), 2.0, 1e-12);
}

TEST(Step, RejectsNonPositiveDt)
{
    Rng rng(6);
    auto s = init_positions(MobilityParams{}, 4, rng);
    EXPECT_THROW(step(MobilityParams{}, s, 0.0, rng), DomainError);
}

TEST(Step, ReflectsAtBoundary)
{
    MobilityParams p;
    p.group_count = 1;
    p.heading_persistence = 1.0;
    Rng rng(7);
    auto s = init_positions(p, 3, rng);
    s.groups[0].reference = {p.area_width - 0.5, 100.0};
    s.groups[0].heading = 0.0;
    s = step(p, s, 1.0, rng);
    EXPECT_TRUE(inside(p, s.groups[0].reference));
    EXPECT_LT(std::cos(s.groups[0].heading), 0.0);
    for (const auto& pos : s.position) {
        EXPECT_TRUE(inside(p, pos));
    }
}

TEST(ReflectInto, MirrorsBackInside)
{
    EXPECT_EQ(reflect_into(-1.0, 10.0), 1.0);
    EXPECT_EQ(reflect_into(12.0, 10.0), 8.0);
    EXPECT_EQ(reflect_into(5.0, 10.0), 5.0);
}

TEST(MobilityProperty, StaysInsideWithBoundedSteps)
{
    Rng gen(41);
    for (int run = 0; run < 20; ++run) {
        MobilityParams p;
        p.area_width = gen.uniform(20.0, 500.0);
        p.area_height = gen.uniform(20.0, 500.0);
        p.v_min = gen.uniform(0.5, 3.0);
        p.v_max = p.v_min + gen.uniform(0.0, 3.0);
        p.group_count = 1 + static_cast<int>(gen.next() % 6);
        p.group_radius = gen.uniform(1.0, 15.0);
        const double dt = gen.uniform(0.2, 5.0);
        Rng rng(gen.next());
        auto s = init_positions(p, 1 + static_cast<int>(gen.next() % 30), rng);
        for (int t = 0; t < 200; ++t) {
            const auto prev = s.groups;
            s = step(p, s, dt, rng);
            for (std::size_t g = 0; g < s.groups.size(); ++g) {
                const auto& grp = s.groups[g];
                EXPECT_GE(grp.travelled, p.v_min * dt * (1 - 1e-12));
                EXPECT_LE(grp.travelled, p.v_max * dt * (1 + 1e-12));
                // Reflection folds the path, so the chord can only be shorter.
                EXPECT_LE(distance(prev[g].reference, grp.reference), grp.travelled + 1e-9);
                EXPECT_TRUE(inside(p, grp.reference));
            }
            for (const auto& pos : s.position) {
                EXPECT_TRUE(inside(p, pos));
            }
        }
    }
}

TEST(MobilityProperty, TrajectoriesReproduce)
{
    const MobilityParams p;
    Rng a(42);
    Rng b(42);
    auto sa = init_positions(p, 40, a);
    auto sb = init_positions(p, 40, b);
    for (int t = 0; t < 100; ++t) {
        sa = step(p, sa, 1.0, a);
        sb = step(p, sb, 1.0, b);
        ASSERT_EQ(sa.position, sb.position);
    }
}

} // namespace
} // namespace deba
