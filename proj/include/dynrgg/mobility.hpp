#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "dynrgg/geometry.hpp"
#include "dynrgg/rng.hpp"

namespace dynrgg {

/// Parameters of one random-walk world. n agents on the unit torus, each
/// moving distance s per step along its current heading; all headings are
/// redrawn simultaneously every m steps.
struct WorldConfig {
    std::int64_t n{1};
    double r{0.1};  // connection radius, carried along for observers
    double s{0.0};  // step length (may exceed 1; positions wrap)
    std::int64_t m{1};
    std::uint64_t seed{0};
};

/// Position plus normalized heading z in [0,1); the travel direction is the
/// angle 2*pi*z.
struct AgentState {
    Point position;
    double heading{0.0};
};

struct WorldState {
    std::int64_t t{0};
    std::vector<AgentState> agents;
    WorldConfig config;
    std::uint64_t rng_state{0};    // generator state for future heading draws
    std::int64_t last_refresh{0};  // step at which headings were last drawn
};

/// Scatter n agents i.i.d. uniformly and draw initial headings, all from the
/// stream of config.seed. Per-agent draw order: position-x, position-y,
/// heading. Deterministic function of the config.
/// Throws std::invalid_argument on an invalid config.
WorldState init_world(const WorldConfig& config);

/// Advance one step in place. The heading used for t -> t+1 is the one drawn
/// at the largest multiple of m that is <= t (drawn lazily on entry when t is
/// a positive multiple of m); then every agent moves by
/// (s*cos(2*pi*z), s*sin(2*pi*z)) with wrap, and t increments.
void step_in_place(WorldState& world);

/// Functional form of step_in_place.
WorldState step(const WorldState& world);

using StepObserver = std::function<void(const WorldState& before, const WorldState& after)>;

/// Apply `step` T times from a fresh init_world(config), invoking the
/// observer with each consecutive state pair. Observer exceptions propagate.
WorldState run(const WorldConfig& config, std::int64_t steps, const StepObserver& observer);

} // namespace dynrgg
