#pragma once

// Deterministic forward breadth-first exploration shared by the analyses.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <unordered_map>
#include <vector>

#include "resound/budget.hpp"
#include "resound/net.hpp"

namespace resound {

inline constexpr std::size_t kNoNode = std::numeric_limits<std::size_t>::max();

/// Markings discovered so far with a spanning tree of first discovery.
struct StateGraph {
    std::vector<Marking> markings;
    std::vector<std::size_t> parent;
    std::vector<TransId> via;
    std::vector<std::vector<std::size_t>> succ; // filled only when edges are recorded
    std::unordered_map<Marking, std::size_t, MarkingHash> index;

    [[nodiscard]] std::size_t size() const { return markings.size(); }

    [[nodiscard]] Run run_to(std::size_t n) const {
        Run r;
        for (std::size_t cur = n; parent[cur] != kNoNode; cur = parent[cur]) r.push_back(via[cur]);
        std::reverse(r.begin(), r.end());
        return r;
    }
};

enum class ExploreStop { Finished, Stopped, Budget };

struct ExploreResult {
    ExploreStop stop = ExploreStop::Finished;
    std::size_t node = kNoNode; // the node at which the visitor stopped
    bool pruned = false;        // some successor was rejected by `keep`
};

struct ExploreOptions {
    bool record_edges = false;
};

namespace detail {
inline bool total_then_lex(const Marking& a, const Marking& b) {
    auto ta = a.total(), tb = b.total();
    return ta != tb ? ta < tb : a < b;
}
} // namespace detail

/// Layered BFS from m0. Each layer is visited sorted by total token count
/// then lexicographically; successors are generated in transition order.
/// `keep(m)` filters successors; `visit(node, marking)` returns true to
/// stop the search.
template <class Keep, class Visit>
ExploreResult explore(const ResetNet& net, const Marking& m0, StateGraph& g, BudgetMeter& meter, Keep keep,
                      Visit visit, ExploreOptions opt = {}) {
    detail::check_dim(net, m0);
    g = StateGraph{};
    ExploreResult res;
    auto add = [&](Marking m, std::size_t parent, TransId t) {
        g.markings.push_back(std::move(m));
        g.parent.push_back(parent);
        g.via.push_back(t);
        if (opt.record_edges) g.succ.emplace_back();
        g.index.emplace(g.markings.back(), g.markings.size() - 1);
        meter.charge();
        return g.markings.size() - 1;
    };
    std::vector<std::size_t> layer{add(m0, kNoNode, TransId{})};
    while (!layer.empty()) {
        std::sort(layer.begin(), layer.end(),
                  [&](std::size_t a, std::size_t b) { return detail::total_then_lex(g.markings[a], g.markings[b]); });
        for (std::size_t n : layer) {
            if (visit(n, g.markings[n])) {
                res.stop = ExploreStop::Stopped;
                res.node = n;
                return res;
            }
        }
        std::vector<std::size_t> next;
        for (std::size_t n : layer) {
            for (TransId t : net.transition_ids()) {
                auto m = fire(net, g.markings[n], t);
                if (!m) continue;
                if (!keep(*m)) {
                    res.pruned = true;
                    continue;
                }
                auto it = g.index.find(*m);
                std::size_t id;
                if (it != g.index.end()) {
                    id = it->second;
                } else {
                    if (meter.exhausted()) {
                        res.stop = ExploreStop::Budget;
                        return res;
                    }
                    id = add(std::move(*m), n, t);
                    next.push_back(id);
                }
                if (opt.record_edges) g.succ[n].push_back(id);
            }
        }
        layer = std::move(next);
    }
    return res;
}

/// Nodes of a fully explored graph (edges recorded) from which `goal` is
/// reachable.
inline std::vector<bool> can_reach(const StateGraph& g, std::size_t goal) {
    std::vector<std::vector<std::size_t>> pred(g.size());
    for (std::size_t n = 0; n < g.size(); ++n)
        for (std::size_t s : g.succ[n]) pred[s].push_back(n);
    std::vector<bool> ok(g.size(), false);
    if (goal == kNoNode) return ok;
    std::vector<std::size_t> stack{goal};
    ok[goal] = true;
    while (!stack.empty()) {
        std::size_t v = stack.back();
        stack.pop_back();
        for (std::size_t u : pred[v])
            if (!ok[u]) {
                ok[u] = true;
                stack.push_back(u);
            }
    }
    return ok;
}

} // namespace resound
