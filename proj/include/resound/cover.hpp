#pragma once

// Backward coverability for reset nets, covering-run extraction, and the
// Karp–Miller tree for plain nets.

#include <algorithm>
#include <cstddef>
#include <deque>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "resound/closed_sets.hpp"
#include "resound/errors.hpp"
#include "resound/net.hpp"

namespace resound {

/// One marking generated during the fixpoint. `next` is the earlier entry
/// it was generated from: fire(m, via) >= entries[next].m. Target elements
/// have neither.
struct CoverEntry {
    Marking m;
    std::optional<TransId> via;
    std::optional<std::size_t> next;
};

struct CoverBasis {
    UpSet target;
    UpSet basis;
    std::vector<CoverEntry> entries;      // append-only generation log
    std::vector<std::size_t> basis_entry; // basis.basis()[k] == entries[basis_entry[k]].m

    [[nodiscard]] bool contains(const Marking& m) const { return basis.contains(m); }
};

struct CoverOptions {
    std::size_t max_entries = 0; // 0 = unlimited
};

inline CoverBasis backward_cover(const ResetNet& net, const UpSet& target, CoverOptions opt = {}) {
    CoverBasis cb;
    cb.target = target;
    std::vector<bool> alive;
    std::deque<std::size_t> work;
    for (const Marking& b : target.basis()) {
        detail::check_dim(net, b);
        cb.entries.push_back(CoverEntry{b, std::nullopt, std::nullopt});
        alive.push_back(true);
        work.push_back(cb.entries.size() - 1);
    }
    std::vector<std::size_t> active(work.begin(), work.end());

    while (!work.empty()) {
        std::size_t e = work.front();
        work.pop_front();
        if (!alive[e]) continue;
        for (TransId t : net.transition_ids()) {
            if (!alive[e]) break;
            auto c = pred_one(net, t, cb.entries[e].m);
            if (!c) continue;
            bool covered = false;
            for (std::size_t a : active)
                if (leq(cb.entries[a].m, *c)) {
                    covered = true;
                    break;
                }
            if (covered) continue;
            if (opt.max_entries != 0 && cb.entries.size() >= opt.max_entries)
                throw BudgetExceeded("backward coverability exceeded " + std::to_string(opt.max_entries) + " entries");
            std::vector<std::size_t> still;
            for (std::size_t a : active) {
                if (leq(*c, cb.entries[a].m))
                    alive[a] = false;
                else
                    still.push_back(a);
            }
            cb.entries.push_back(CoverEntry{std::move(*c), t, e});
            alive.push_back(true);
            still.push_back(cb.entries.size() - 1);
            active = std::move(still);
            work.push_back(cb.entries.size() - 1);
        }
    }

    std::sort(active.begin(), active.end(),
              [&](std::size_t a, std::size_t b) { return cb.entries[a].m < cb.entries[b].m; });
    std::vector<Marking> ms;
    for (std::size_t a : active) ms.push_back(cb.entries[a].m);
    cb.basis = minimize(std::move(ms));
    cb.basis_entry = std::move(active);
    return cb;
}

inline CoverBasis backward_cover(const ResetNet& net, const Marking& target, CoverOptions opt = {}) {
    return backward_cover(net, upset_of(target), opt);
}

/// The run recorded by the provenance chain starting at `entry`.
inline Run provenance_run(const CoverBasis& cb, std::size_t entry) {
    Run run;
    std::optional<std::size_t> cur = entry;
    while (cur && cb.entries[*cur].via) {
        run.push_back(*cb.entries[*cur].via);
        cur = cb.entries[*cur].next;
    }
    return run;
}

/// A run from m whose end covers the target, or nullopt when m is outside
/// the basis. The run may overshoot the target.
inline std::optional<Run> extract_covering_run(const CoverBasis& cb, const ResetNet& net, const Marking& m) {
    detail::check_dim(net, m);
    auto k = cb.basis.witness(m);
    if (!k) return std::nullopt;
    Run run = provenance_run(cb, cb.basis_entry[*k]);
    Replay r = fire_run(net, m, run);
    if (!r || !cb.target.contains(r.marking))
        throw ConsistencyError("covering run extracted from provenance does not replay");
    return run;
}

// ---------------------------------------------------------------------------
// Karp–Miller

struct KMNode {
    OmegaMarking m;
    std::optional<std::size_t> parent;
    std::optional<TransId> via;
};

/// The first acceleration, concretely: m0 --prefix--> low --loop--> high
/// with low < high.
struct KMPump {
    Run prefix;
    Run loop;
    Marking low;
    Marking high;
};

struct KMTree {
    std::vector<KMNode> nodes;
    bool bounded = true;
    std::vector<Marking> reach_set; // sorted; exact when bounded
    std::optional<KMPump> pump;

    /// Transition labels on the path from the root to `n`.
    [[nodiscard]] Run path_to(std::size_t n) const {
        Run r;
        for (std::optional<std::size_t> cur = n; cur && nodes[*cur].via; cur = nodes[*cur].parent)
            r.push_back(*nodes[*cur].via);
        std::reverse(r.begin(), r.end());
        return r;
    }
};

struct KMOptions {
    std::size_t max_nodes = 1'000'000;
    bool stop_at_first_pump = false;
};

/// Nodes whose label already occurs elsewhere in the tree are not expanded.
inline KMTree karp_miller(const ResetNet& net, const Marking& m0, KMOptions opt = {}) {
    detail::check_dim(net, m0);
    if (net.has_resets()) throw PreconditionError("Karp–Miller requires a net without reset arcs");
    KMTree tree;
    std::unordered_set<std::vector<Count>, VectorCountHash> seen;
    tree.nodes.push_back(KMNode{OmegaMarking(m0), std::nullopt, std::nullopt});
    seen.insert(m0.counts());
    std::deque<std::size_t> work{0};
    const std::size_t np = net.num_places();

    while (!work.empty()) {
        std::size_t n = work.front();
        work.pop_front();
        for (TransId t : net.transition_ids()) {
            const OmegaMarking& cur = tree.nodes[n].m;
            const Transition& tr = net[t];
            bool en = true;
            for (std::size_t p = 0; p < np && en; ++p) en = tr.pre[p] <= cur[p];
            if (!en) continue;
            OmegaMarking next(np);
            for (std::size_t p = 0; p < np; ++p)
                next[p] = OmegaMarking::add(OmegaMarking::sub(cur[p], tr.pre[p]), tr.post[p]);

            OmegaMarking before = next;
            std::optional<std::size_t> first_anc;
            for (std::optional<std::size_t> a = n; a; a = tree.nodes[*a].parent) {
                const OmegaMarking& am = tree.nodes[*a].m;
                if (am != before && leq(am, before)) {
                    for (std::size_t p = 0; p < np; ++p)
                        if (am[p] < before[p]) next[p] = kOmega;
                    if (!first_anc) first_anc = a;
                }
            }
            if (tree.nodes.size() >= opt.max_nodes)
                throw BudgetExceeded("Karp–Miller tree exceeded " + std::to_string(opt.max_nodes) + " nodes");
            tree.nodes.push_back(KMNode{next, n, t});
            std::size_t id = tree.nodes.size() - 1;
            if (first_anc && tree.bounded) {
                tree.bounded = false;
                if (!before.has_omega() && !tree.nodes[*first_anc].m.has_omega()) {
                    Run full = tree.path_to(id);
                    Run pre = tree.path_to(*first_anc);
                    tree.pump = KMPump{pre, Run(full.begin() + static_cast<std::ptrdiff_t>(pre.size()), full.end()),
                                       to_marking(tree.nodes[*first_anc].m), to_marking(before)};
                }
                if (opt.stop_at_first_pump) return tree;
            }
            if (seen.insert(next.values()).second) work.push_back(id);
        }
    }
    if (tree.bounded) {
        for (const auto& v : seen) tree.reach_set.push_back(Marking(v));
        std::sort(tree.reach_set.begin(), tree.reach_set.end());
    }
    return tree;
}

} // namespace resound
