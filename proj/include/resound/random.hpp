#pragma once

// Seeded random nets for corpus generation.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "resound/errors.hpp"
#include "resound/net.hpp"

namespace resound {

struct RandomNetSpec {
    std::size_t min_places = 2;
    std::size_t max_places = 6;
    std::size_t min_transitions = 1;
    std::size_t max_transitions = 6;
    Count max_weight = 2;
    double arc_prob = 0.3;
    double reset_prob = 0.15; // per (place, transition); 0 for plain nets
};

namespace detail {
inline std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}
inline bool coin(std::mt19937_64& rng, double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; }
} // namespace detail

/// Every transition gets at least one input and one output place.
inline ResetNet random_reset_net(std::uint64_t seed, const RandomNetSpec& spec = {}) {
    std::mt19937_64 rng(seed);
    ResetNet net;
    const std::size_t np = detail::pick(rng, spec.min_places, spec.max_places);
    const std::size_t nt = detail::pick(rng, spec.min_transitions, spec.max_transitions);
    for (std::size_t p = 0; p < np; ++p) net.add_place("p" + std::to_string(p));
    for (std::size_t t = 0; t < nt; ++t) {
        Marking pre(np), post(np);
        std::vector<PlaceId> resets;
        for (std::size_t p = 0; p < np; ++p) {
            if (detail::coin(rng, spec.arc_prob)) pre[p] = detail::pick(rng, 1, spec.max_weight);
            if (detail::coin(rng, spec.arc_prob)) post[p] = detail::pick(rng, 1, spec.max_weight);
            if (detail::coin(rng, spec.reset_prob)) resets.push_back(PlaceId{static_cast<std::uint32_t>(p)});
        }
        if (pre.is_zero()) pre[detail::pick(rng, 0, np - 1)] = 1;
        if (post.is_zero()) post[detail::pick(rng, 0, np - 1)] = 1;
        net.add_transition("t" + std::to_string(t), std::move(pre), std::move(post), std::move(resets));
    }
    return net;
}

/// A random workflow net with i = p0 and f = the last place; retries with
/// derived seeds until the result validates.
inline WorkflowNet random_workflow_net(std::uint64_t seed, const RandomNetSpec& spec = {}, bool unit_weights = true) {
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 100000; ++attempt) {
        const std::size_t np = detail::pick(rng, std::max<std::size_t>(spec.min_places, 2), spec.max_places);
        const std::size_t nt = detail::pick(rng, spec.min_transitions, spec.max_transitions);
        const Count wmax = unit_weights ? 1 : spec.max_weight;
        ResetNet net;
        for (std::size_t p = 0; p < np; ++p) net.add_place(p == 0 ? "i" : p + 1 == np ? "f" : "p" + std::to_string(p));
        for (std::size_t t = 0; t < nt; ++t) {
            Marking pre(np), post(np);
            std::vector<PlaceId> resets;
            for (std::size_t p = 0; p + 1 < np; ++p)
                if (detail::coin(rng, spec.arc_prob)) pre[p] = detail::pick(rng, 1, wmax);
            for (std::size_t p = 1; p < np; ++p)
                if (detail::coin(rng, spec.arc_prob)) post[p] = detail::pick(rng, 1, wmax);
            for (std::size_t p = 0; p + 1 < np; ++p)
                if (detail::coin(rng, spec.reset_prob)) resets.push_back(PlaceId{static_cast<std::uint32_t>(p)});
            if (pre.is_zero()) pre[detail::pick(rng, 0, np - 2)] = 1;
            if (post.is_zero()) post[detail::pick(rng, 1, np - 1)] = 1;
            net.add_transition("t" + std::to_string(t), std::move(pre), std::move(post), std::move(resets));
        }
        PlaceId i{0}, f{static_cast<std::uint32_t>(np - 1)};
        if (validate_workflow(net, i, f).empty()) return WorkflowNet{std::move(net), i, f};
    }
    throw InputError("no valid random workflow net found for seed " + std::to_string(seed));
}

} // namespace resound
