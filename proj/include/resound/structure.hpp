#pragma once

// Redundancy, resetable places, skeletons, the Res projection, run
// projection/lifting and siphon/trap checks.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "resound/closed_sets.hpp"
#include "resound/cover.hpp"
#include "resound/errors.hpp"
#include "resound/net.hpp"

namespace resound {

/// `k` tokens in i suffice; `run` from {i:k} covers the item's target
/// (p itself, or pre(t) for a transition).
struct RedundancyWitness {
    Count k = 0;
    Run run;
};

struct RedundancyInfo {
    std::vector<std::optional<RedundancyWitness>> places;      // nullopt = redundant
    std::vector<std::optional<RedundancyWitness>> transitions; // nullopt = redundant

    [[nodiscard]] bool nonredundant(PlaceId p) const { return places.at(p.index).has_value(); }
    [[nodiscard]] bool nonredundant(TransId t) const { return transitions.at(t.index).has_value(); }

    [[nodiscard]] PlaceSet redundant_places() const {
        PlaceSet s;
        for (std::uint32_t p = 0; p < places.size(); ++p)
            if (!places[p]) s.insert(PlaceId{p});
        return s;
    }
    [[nodiscard]] TransSet redundant_transitions() const {
        TransSet s;
        for (std::uint32_t t = 0; t < transitions.size(); ++t)
            if (!transitions[t]) s.insert(TransId{t});
        return s;
    }
    [[nodiscard]] std::vector<TransId> nonredundant_transitions() const {
        std::vector<TransId> v;
        for (std::uint32_t t = 0; t < transitions.size(); ++t)
            if (transitions[t]) v.push_back(TransId{t});
        return v;
    }
};

namespace detail {
inline std::optional<RedundancyWitness> initial_witness(const WorkflowNet& w, const Marking& target,
                                                        CoverOptions opt) {
    CoverBasis cb = backward_cover(w.net, target, opt);
    for (const Marking& b : cb.basis.basis()) {
        bool only_i = true;
        for (std::uint32_t p = 0; p < b.size() && only_i; ++p) only_i = b[p] == 0 || PlaceId{p} == w.initial;
        if (!only_i) continue;
        // The antichain holds at most one element supported on {i}.
        Count k = std::max<Count>(b[w.initial], 1);
        auto run = extract_covering_run(cb, w.net, w.initial_marking(k));
        return RedundancyWitness{k, std::move(*run)};
    }
    return std::nullopt;
}
} // namespace detail

inline RedundancyInfo redundancy_info(const WorkflowNet& w, CoverOptions opt = {}) {
    RedundancyInfo info;
    for (std::uint32_t p = 0; p < w.net.num_places(); ++p)
        info.places.push_back(detail::initial_witness(w, w.net.unit(PlaceId{p}), opt));
    for (TransId t : w.net.transition_ids())
        info.transitions.push_back(detail::initial_witness(w, w.net.pre(t), opt));
    return info;
}

inline PlaceSet resetable_places(const WorkflowNet& w, const RedundancyInfo& info) {
    PlaceSet s;
    for (TransId t : info.nonredundant_transitions())
        for (PlaceId p : w.net.reset_set(t)) s.insert(p);
    return s;
}

// ---------------------------------------------------------------------------

struct SkeletonResult {
    SubnetRemoval removal;
    PlaceSet resetable;
    std::optional<PlaceId> initial; // skeleton index
    std::optional<PlaceId> final;   // skeleton index
    std::vector<Violation> violations;

    [[nodiscard]] const ResetNet& net() const { return removal.net; }
    [[nodiscard]] bool workflow_ok() const { return violations.empty(); }

    [[nodiscard]] WorkflowNet workflow() const {
        if (!workflow_ok()) throw PreconditionError("the skeleton is not a workflow net");
        return WorkflowNet{removal.net, *initial, *final};
    }

    [[nodiscard]] bool in_skeleton(PlaceId p) const { return removal.place_map.at(p.index).has_value(); }
};

inline SkeletonResult skeleton(const WorkflowNet& w, const RedundancyInfo& info) {
    SkeletonResult s;
    s.resetable = resetable_places(w, info);
    PlaceSet Q = info.redundant_places();
    Q.insert(s.resetable.begin(), s.resetable.end());
    s.removal = remove_subnet(w.net, Q, info.redundant_transitions());
    if (s.removal.net.has_resets()) throw ConsistencyError("skeleton kept a reset arc");
    s.initial = s.removal.place_map[w.initial.index];
    s.final = s.removal.place_map[w.final.index];
    if (!s.initial)
        s.violations.push_back({Violation::Kind::InitialRemoved, w.net.place_name(w.initial),
                                "initial place " + w.net.place_name(w.initial) + " is not in the skeleton"});
    if (!s.final)
        s.violations.push_back({Violation::Kind::FinalRemoved, w.net.place_name(w.final),
                                "final place " + w.net.place_name(w.final) + " is not in the skeleton"});
    if (s.initial && s.final) s.violations = validate_workflow(s.removal.net, *s.initial, *s.final);
    return s;
}

/// Zeroes every place outside the skeleton; the result lives in W.
inline Marking res_project(const SkeletonResult& s, const Marking& m) {
    Marking out(m.size());
    for (PlaceId p : s.removal.kept_places) out[p] = m[p];
    return out;
}

/// A marking of W restricted to the skeleton's places.
inline Marking to_skeleton(const SkeletonResult& s, const Marking& m) { return restrict_marking(s.removal, m); }

/// A skeleton marking embedded into W (0 outside the skeleton).
inline Marking from_skeleton(const SkeletonResult& s, std::size_t dim, const Marking& ms) {
    return embed_marking(s.removal, dim, ms);
}

/// Maps a run of W from `start` to the skeleton, dropping transitions
/// without an image, and checks it replays between the projected markings.
inline Run project_run(const WorkflowNet& w, const SkeletonResult& s, const Marking& start, const Run& sigma) {
    Replay r = fire_run(w.net, start, sigma);
    if (!r)
        throw InputError("run is not enabled at step " + std::to_string(*r.disabled_at));
    Run out;
    for (TransId t : sigma)
        if (auto img = s.removal.trans_map[t.index]) out.push_back(*img);
    Replay rs = fire_run(s.net(), to_skeleton(s, start), out);
    if (!rs || rs.marking != to_skeleton(s, r.marking))
        throw ConsistencyError("projected run does not replay in the skeleton");
    return out;
}

// ---------------------------------------------------------------------------

/// {i:z} --zeta--> {f:z} firing every nonredundant transition, with a
/// checked completion of Res(m) for every proper prefix.
struct FullResetRun {
    Count z = 0;
    Run zeta;
    std::vector<Marking> markings;  // markings[j]: after the first j steps; size |zeta| + 1
    std::vector<Run> completions;   // completions[j]: Res(markings[j]) --> {f:z}, j < |zeta|
};

struct LiftedRun {
    Count k_prime = 0;
    Run run;
    Marking start; // {i : l + k'}
    Marking end;   // m_s + {f : k'}
};

/// Lifts a skeleton run {i:l} --pi_s--> m_s to W: each skeleton step t is
/// simulated by rho t' zeta xi where zeta = rho t' rho' splits at the first
/// occurrence of t' and xi completes Res(m) for that split.
inline LiftedRun lift_skeleton_run(const WorkflowNet& w, const SkeletonResult& s, const FullResetRun& frr, Count l,
                                   const Run& pi_s) {
    if (!s.initial || !s.final) throw PreconditionError("the skeleton has no initial/final place");
    const std::size_t np = w.net.num_places();
    Marking ms_start = s.net().unit(*s.initial, l);
    Replay sk = fire_run(s.net(), ms_start, pi_s);
    if (!sk) throw InputError("skeleton run is not enabled at step " + std::to_string(*sk.disabled_at));

    LiftedRun out;
    out.k_prime = 2 * frr.z * static_cast<Count>(pi_s.size());
    for (TransId ts : pi_s) {
        TransId t = s.removal.kept_transitions.at(ts.index);
        auto pos = std::find(frr.zeta.begin(), frr.zeta.end(), t);
        if (pos == frr.zeta.end()) throw ConsistencyError("full reset run misses transition " + w.net.transition_name(t));
        std::size_t j = static_cast<std::size_t>(pos - frr.zeta.begin());
        out.run.insert(out.run.end(), frr.zeta.begin(), pos);
        out.run.push_back(t);
        out.run.insert(out.run.end(), frr.zeta.begin(), frr.zeta.end());
        out.run.insert(out.run.end(), frr.completions[j].begin(), frr.completions[j].end());
    }
    out.start = w.initial_marking(l + out.k_prime);
    out.end = from_skeleton(s, np, sk.marking);
    out.end[w.final] += out.k_prime;
    Replay r = fire_run(w.net, out.start, out.run);
    if (!r || r.marking != out.end) throw ConsistencyError("lifted run does not replay to the expected marking");
    return out;
}

// ---------------------------------------------------------------------------

namespace detail {
inline bool touches(const Marking& v, const PlaceSet& S) {
    return std::any_of(S.begin(), S.end(), [&](PlaceId p) { return v[p] > 0; });
}
} // namespace detail

/// Every transition producing into S also consumes from S.
inline bool is_siphon(const ResetNet& net, const PlaceSet& S) {
    for (const auto& tr : net.transitions())
        if (detail::touches(tr.post, S) && !detail::touches(tr.pre, S)) return false;
    return true;
}

/// Every transition consuming from S also produces into S.
inline bool is_trap(const ResetNet& net, const PlaceSet& S) {
    for (const auto& tr : net.transitions())
        if (detail::touches(tr.pre, S) && !detail::touches(tr.post, S)) return false;
    return true;
}

} // namespace resound
