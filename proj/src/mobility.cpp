#include "dynrgg/mobility.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dynrgg {

namespace {

void validate(const WorldConfig& c) {
    if (c.n < 1) throw std::invalid_argument("WorldConfig: n must be >= 1");
    if (!(c.r > 0.0)) throw std::invalid_argument("WorldConfig: r must be positive");
    if (!(c.s >= 0.0)) throw std::invalid_argument("WorldConfig: s must be >= 0");
    if (c.m < 1) throw std::invalid_argument("WorldConfig: m must be >= 1");
}

void refresh_headings(WorldState& world) {
    SplitMix64 rng(world.rng_state);
    for (AgentState& a : world.agents) a.heading = rng.next_double();
    world.rng_state = rng.state();
    world.last_refresh = world.t;
}

} // namespace

WorldState init_world(const WorldConfig& config) {
    validate(config);
    WorldState w;
    w.t = 0;
    w.config = config;
    w.agents.resize(static_cast<std::size_t>(config.n));
    SplitMix64 rng(config.seed);
    for (AgentState& a : w.agents) {
        a.position.x = rng.next_double();
        a.position.y = rng.next_double();
        a.heading = rng.next_double();
    }
    w.rng_state = rng.state();
    w.last_refresh = 0;
    return w;
}

void step_in_place(WorldState& world) {
    const std::int64_t m = world.config.m;
    if (world.t > 0 && world.t % m == 0 && world.last_refresh != world.t) {
        refresh_headings(world);
    }
    const double s = world.config.s;
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (AgentState& a : world.agents) {
        const double angle = two_pi * a.heading;
        a.position.x = wrap(a.position.x + s * std::cos(angle));
        a.position.y = wrap(a.position.y + s * std::sin(angle));
    }
    ++world.t;
}

WorldState step(const WorldState& world) {
    WorldState next = world;
    step_in_place(next);
    return next;
}

WorldState run(const WorldConfig& config, std::int64_t steps, const StepObserver& observer) {
    if (steps < 0) throw std::invalid_argument("run: steps must be >= 0");
    WorldState cur = init_world(config);
    WorldState prev;
    for (std::int64_t t = 0; t < steps; ++t) {
        prev = cur;
        step_in_place(cur);
        if (observer) observer(prev, cur);
    }
    return cur;
}

} // namespace dynrgg
