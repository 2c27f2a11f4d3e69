#pragma once

// Soundness deciders and the P_k pipeline for reset workflow nets.

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "resound/budget.hpp"
#include "resound/closed_sets.hpp"
#include "resound/cover.hpp"
#include "resound/errors.hpp"
#include "resound/net.hpp"
#include "resound/reach.hpp"
#include "resound/search.hpp"
#include "resound/structure.hpp"

namespace resound {

// ---------------------------------------------------------------------------
// Completion

struct Completion {
    enum class Kind { Completes, Overshoot, CannotCover };
    Kind kind = Kind::CannotCover;
    Run run;     // Completes / Overshoot
    Marking end; // Completes / Overshoot: where the run lands
};

inline const char* to_string(Completion::Kind k) {
    switch (k) {
    case Completion::Kind::Completes: return "completes";
    case Completion::Kind::Overshoot: return "overshoot";
    case Completion::Kind::CannotCover: return "cannot-cover";
    }
    return "?";
}

/// Decides, for markings of a workflow net, whether the extracted covering
/// run of {f:k} lands exactly on {f:k}. The cover basis is computed once.
class CompletionOracle {
public:
    CompletionOracle(const WorkflowNet& w, Count k, CoverOptions opt = {})
        : w_(&w), k_(k), goal_(w.final_marking(k)), cb_(backward_cover(w.net, goal_, opt)) {}

    [[nodiscard]] Completion classify(const Marking& m) const {
        auto run = extract_covering_run(cb_, w_->net, m);
        if (!run) return Completion{Completion::Kind::CannotCover, {}, {}};
        Marking end = fire_run(w_->net, m, *run).marking;
        auto kind = end == goal_ ? Completion::Kind::Completes : Completion::Kind::Overshoot;
        return Completion{kind, std::move(*run), std::move(end)};
    }

    [[nodiscard]] Count k() const { return k_; }
    [[nodiscard]] const CoverBasis& cover() const { return cb_; }

private:
    const WorkflowNet* w_;
    Count k_;
    Marking goal_;
    CoverBasis cb_;
};

inline Completion can_complete_or_witness(const WorkflowNet& w, const Marking& m, Count k) {
    return CompletionOracle(w, k).classify(m);
}

// ---------------------------------------------------------------------------
// Verdicts

/// A marking reachable from {i:k} by `run` that cannot reach {f:k}.
struct UnsoundWitness {
    Count k = 0;
    Run run;
    Marking marking;
};

struct Verdict {
    enum class Kind { Holds, Fails, Unknown };
    Kind kind = Kind::Unknown;
    std::string reason;
    std::optional<UnsoundWitness> witness; // set when Fails
    BudgetReport budget;
    std::size_t explored = 0;
};

inline const char* to_string(Verdict::Kind k) {
    switch (k) {
    case Verdict::Kind::Holds: return "holds";
    case Verdict::Kind::Fails: return "fails";
    case Verdict::Kind::Unknown: return "unknown";
    }
    return "?";
}

/// Turns a marking reached from {i:k} by `run` into a checked witness: the
/// marking itself when it cannot cover {f:k}, otherwise the overshooting end
/// of its covering run. nullopt when the marking completes.
inline std::optional<UnsoundWitness> checked_witness(const WorkflowNet& w, const CompletionOracle& oracle, Run run,
                                                     const Marking& m) {
    Replay r = fire_run(w.net, w.initial_marking(oracle.k()), run);
    if (!r || r.marking != m) throw ConsistencyError("witness run does not replay to the witness marking");
    Completion c = oracle.classify(m);
    switch (c.kind) {
    case Completion::Kind::Completes: return std::nullopt;
    case Completion::Kind::CannotCover: return UnsoundWitness{oracle.k(), std::move(run), m};
    case Completion::Kind::Overshoot:
        run.insert(run.end(), c.run.begin(), c.run.end());
        return UnsoundWitness{oracle.k(), std::move(run), std::move(c.end)};
    }
    return std::nullopt;
}

inline Verdict fails_with(UnsoundWitness wit, std::string reason) {
    Verdict v;
    v.kind = Verdict::Kind::Fails;
    v.reason = std::move(reason);
    v.witness = std::move(wit);
    return v;
}

// ---------------------------------------------------------------------------
// k-soundness

/// Forward exploration from {i:k}; every discovered marking is screened by
/// the completion oracle.
inline Verdict k_sound_semi(const WorkflowNet& w, Count k, Budget budget = {}) {
    if (k == 0) throw InputError("k must be at least 1");
    CompletionOracle oracle(w, k);
    BudgetMeter meter(budget);
    StateGraph g;
    std::optional<Completion> bad;
    auto res = explore(
        w.net, w.initial_marking(k), g, meter, [](const Marking&) { return true; },
        [&](std::size_t, const Marking& m) {
            Completion c = oracle.classify(m);
            if (c.kind == Completion::Kind::Completes) return false;
            bad = std::move(c);
            return true;
        });
    Verdict v;
    v.explored = g.size();
    if (res.stop == ExploreStop::Stopped) {
        auto wit = checked_witness(w, oracle, g.run_to(res.node), g.markings[res.node]);
        if (!wit) throw ConsistencyError("completion oracle is not deterministic");
        v = fails_with(std::move(*wit), std::string("marking ") + to_string(bad->kind));
        v.explored = g.size();
        v.budget = report_of(meter, false);
        return v;
    }
    if (res.stop == ExploreStop::Budget) {
        v.kind = Verdict::Kind::Unknown;
        v.reason = "search budget exhausted";
        v.budget = report_of(meter, true);
        return v;
    }
    v.kind = Verdict::Kind::Holds;
    v.reason = "all " + std::to_string(g.size()) + " reachable markings complete";
    v.budget = report_of(meter, false);
    return v;
}

/// Exact k-soundness for nets without reset arcs via the Karp–Miller tree.
inline Verdict k_sound_exact_plain(const WorkflowNet& w, Count k, KMOptions km = {}) {
    if (w.net.has_resets()) throw PreconditionError("exact k-soundness needs a net without reset arcs");
    if (k == 0) throw InputError("k must be at least 1");
    Verdict v;
    km.stop_at_first_pump = true;
    KMTree tree;
    try {
        tree = karp_miller(w.net, w.initial_marking(k), km);
    } catch (const BudgetExceeded& e) {
        v.kind = Verdict::Kind::Unknown;
        v.reason = e.what();
        return v;
    }
    CompletionOracle oracle(w, k);
    v.explored = tree.nodes.size();

    if (!tree.bounded) {
        const KMPump& pump = *tree.pump;
        Run to_high = concat(pump.prefix, pump.loop);
        // m0 -> low -> high -> pumped
        Run to_pumped = concat(to_high, pump.loop);
        Replay pumped = fire_run(w.net, w.initial_marking(k), to_pumped);
        if (!pumped) throw ConsistencyError("pumping loop is not re-enabled");
        if (auto wit = checked_witness(w, oracle, to_pumped, pumped.marking))
            return fails_with(std::move(*wit), "unbounded: pumped marking cannot complete");
        if (auto wit = checked_witness(w, oracle, pump.prefix, pump.low))
            return fails_with(std::move(*wit), "unbounded: smaller marking of the pump cannot complete");
        Completion c = oracle.classify(pump.low);
        Run over = concat(to_high, c.run);
        Replay r = fire_run(w.net, w.initial_marking(k), over);
        if (!r) throw ConsistencyError("completion of the smaller pump marking is not enabled from the larger");
        if (auto wit = checked_witness(w, oracle, over, r.marking))
            return fails_with(std::move(*wit), "unbounded: completion replayed from the larger marking overshoots");
        throw ConsistencyError("unbounded net without an unsoundness witness");
    }

    BudgetMeter meter(Budget{tree.nodes.size() + 1, 1e9});
    StateGraph g;
    explore(
        w.net, w.initial_marking(k), g, meter, [](const Marking&) { return true; },
        [](std::size_t, const Marking&) { return false; }, ExploreOptions{true});
    auto goal = g.index.find(w.final_marking(k));
    auto ok = can_reach(g, goal == g.index.end() ? kNoNode : goal->second);
    std::optional<std::size_t> first_bad, first_dead;
    for (std::size_t n = 0; n < g.size(); ++n) {
        if (ok[n]) continue;
        if (!first_bad) first_bad = n;
        if (!first_dead && g.succ[n].empty()) first_dead = n;
    }
    if (!first_bad) {
        v.kind = Verdict::Kind::Holds;
        v.reason = "bounded; all " + std::to_string(g.size()) + " reachable markings reach the final marking";
        return v;
    }
    std::size_t n = first_dead ? *first_dead : *first_bad;
    auto wit = checked_witness(w, oracle, g.run_to(n), g.markings[n]);
    if (!wit) throw ConsistencyError("marking classified as completing but cannot reach the final marking");
    return fails_with(std::move(*wit), first_dead ? "bounded: reachable deadlock" : "bounded: marking cannot complete");
}

/// j-soundness for j = 1..k via the semi-decision; the first failure wins.
inline Verdict up_to_k(const WorkflowNet& w, Count k, Budget budget = {}) {
    Verdict acc;
    acc.kind = Verdict::Kind::Holds;
    std::size_t explored = 0;
    for (Count j = 1; j <= k; ++j) {
        Verdict v = k_sound_semi(w, j, budget);
        explored += v.explored;
        acc.budget.states += v.budget.states;
        acc.budget.seconds += v.budget.seconds;
        if (v.kind == Verdict::Kind::Fails) {
            v.reason = "not " + std::to_string(j) + "-sound: " + v.reason;
            v.explored = explored;
            return v;
        }
        if (v.kind == Verdict::Kind::Unknown && acc.kind == Verdict::Kind::Holds) {
            acc.kind = Verdict::Kind::Unknown;
            acc.reason = std::to_string(j) + "-soundness undetermined: " + v.reason;
            acc.budget.exhausted = v.budget.exhausted;
        }
    }
    if (acc.kind == Verdict::Kind::Holds) acc.reason = "j-sound for every j <= " + std::to_string(k);
    acc.explored = explored;
    return acc;
}

// ---------------------------------------------------------------------------
// Coverability-clean

struct CleanResult {
    bool clean = true;
    std::optional<PlaceId> place;          // extra token that can be added to {f:k}
    std::optional<UnsoundWitness> witness; // the strict cover, when not clean
};

inline CleanResult coverability_clean_detail(const WorkflowNet& w, Count k) {
    Marking start = w.initial_marking(k);
    for (std::uint32_t p = 0; p < w.net.num_places(); ++p) {
        Marking target = w.final_marking(k);
        target[p] += 1;
        CoverBasis cb = backward_cover(w.net, target);
        auto run = extract_covering_run(cb, w.net, start);
        if (!run) continue;
        Marking end = fire_run(w.net, start, *run).marking;
        return CleanResult{false, PlaceId{p}, UnsoundWitness{k, std::move(*run), std::move(end)}};
    }
    return CleanResult{};
}

inline bool coverability_clean(const WorkflowNet& w, Count k) { return coverability_clean_detail(w, k).clean; }

// ---------------------------------------------------------------------------
// Full reset run

struct FullResetOutcome {
    std::optional<FullResetRun> run;
    std::string explanation;               // why not, when run is empty
    std::optional<UnsoundWitness> witness; // concrete evidence, when available
};

inline FullResetOutcome full_reset_run(const WorkflowNet& w, const RedundancyInfo& info, const SkeletonResult& s) {
    FullResetOutcome out;
    if (s.resetable.count(w.initial) != 0U) {
        out.explanation = "initial place is reset by a nonredundant transition";
        return out;
    }
    Count z = 0;
    Run delta;
    for (TransId t : info.nonredundant_transitions()) {
        const auto& wit = *info.transitions[t.index];
        z += wit.k;
        delta.insert(delta.end(), wit.run.begin(), wit.run.end());
        delta.push_back(t);
    }
    Marking start = w.initial_marking(z);
    Replay r = fire_run(w.net, start, delta);
    if (!r) throw ConsistencyError("concatenated redundancy witnesses do not replay");
    CompletionOracle oracle(w, z);
    Completion c = oracle.classify(r.marking);
    if (c.kind == Completion::Kind::CannotCover) {
        out.explanation = "the final marking cannot be covered after firing every nonredundant transition";
        out.witness = UnsoundWitness{z, delta, r.marking};
        return out;
    }
    if (c.kind == Completion::Kind::Overshoot) {
        out.explanation = "covering the final marking overshoots it";
        out.witness = UnsoundWitness{z, concat(delta, c.run), c.end};
        return out;
    }
    FullResetRun frr;
    frr.z = z;
    frr.zeta = concat(delta, c.run);
    frr.markings = trace_run(w.net, start, frr.zeta).markings;
    for (std::size_t j = 0; j < frr.zeta.size(); ++j) {
        Marking res = res_project(s, frr.markings[j]);
        Completion cj = oracle.classify(res);
        if (cj.kind != Completion::Kind::Completes) {
            out.explanation = "the projection of the marking after " + std::to_string(j) + " steps " +
                              (cj.kind == Completion::Kind::CannotCover ? "cannot cover" : "overshoots") +
                              " the final marking";
            return out;
        }
        frr.completions.push_back(std::move(cj.run));
    }
    out.run = std::move(frr);
    return out;
}

/// Replays all three defining conditions of a full reset run.
inline bool validate_full_reset_run(const WorkflowNet& w, const RedundancyInfo& info, const SkeletonResult& s,
                                    const FullResetRun& frr) {
    Replay r = fire_run(w.net, w.initial_marking(frr.z), frr.zeta);
    if (!r || r.marking != w.final_marking(frr.z)) return false;
    for (TransId t : info.nonredundant_transitions())
        if (std::find(frr.zeta.begin(), frr.zeta.end(), t) == frr.zeta.end()) return false;
    if (frr.completions.size() != frr.zeta.size() || frr.markings.size() != frr.zeta.size() + 1) return false;
    RunTrace tr{frr.zeta, frr.markings};
    if (tr.start() != w.initial_marking(frr.z) || !tr.consistent(w.net)) return false;
    for (std::size_t j = 0; j < frr.zeta.size(); ++j) {
        Replay c = fire_run(w.net, res_project(s, frr.markings[j]), frr.completions[j]);
        if (!c || c.marking != w.final_marking(frr.z)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Generalised soundness of the skeleton

struct GsVerdict {
    enum class Kind { NotGS, HoldsProved, BoundedOnly };
    Kind kind = Kind::BoundedOnly;
    Count k = 0;           // NotGS: the failing k; BoundedOnly: K_max
    Verdict failing;       // NotGS: the k_sound_exact_plain verdict
    std::string reason;
};

inline const char* to_string(GsVerdict::Kind k) {
    switch (k) {
    case GsVerdict::Kind::NotGS: return "not-generalised-sound";
    case GsVerdict::Kind::HoldsProved: return "holds-proved";
    case GsVerdict::Kind::BoundedOnly: return "bounded-only";
    }
    return "?";
}

/// Every transition has exactly one input and one output place, each with
/// weight 1.
inline bool is_state_machine(const ResetNet& net) {
    for (const auto& tr : net.transitions()) {
        if (tr.pre.total() != 1 || tr.post.total() != 1) return false;
    }
    return !net.has_resets();
}

inline GsVerdict skeleton_gs_check(const WorkflowNet& skel, Count k_max, KMOptions km = {}) {
    GsVerdict out;
    bool one_sound = false;
    bool all_known = true;
    for (Count k = 1; k <= k_max; ++k) {
        Verdict v = k_sound_exact_plain(skel, k, km);
        if (v.kind == Verdict::Kind::Fails) {
            out.kind = GsVerdict::Kind::NotGS;
            out.k = k;
            out.failing = std::move(v);
            out.reason = "not " + std::to_string(k) + "-sound";
            return out;
        }
        if (v.kind == Verdict::Kind::Unknown) all_known = false;
        if (k == 1) one_sound = v.kind == Verdict::Kind::Holds;
    }
    if (one_sound && is_state_machine(skel.net)) {
        out.kind = GsVerdict::Kind::HoldsProved;
        out.reason = "state machine and 1-sound";
        return out;
    }
    out.kind = GsVerdict::Kind::BoundedOnly;
    out.k = k_max;
    out.reason = all_known ? "k-sound for every k <= " + std::to_string(k_max)
                           : "no failure found up to k = " + std::to_string(k_max) + " (some k undetermined)";
    return out;
}

// ---------------------------------------------------------------------------
// Property (5)

/// The skeleton extended with an i-generator and a place tracking the
/// token sum over the skeleton's non-final places, plus the target.
struct Property5Query {
    ResetNet net;     // PN^s
    PlaceId p_all;
    TransId t_init;
    MixedTarget target;
    DownSet x_ideals; // X ∪ {0} over the places of W
};

inline std::string fresh_name(const ResetNet& net, std::string base, bool place) {
    while (place ? net.find_place(base).has_value() : net.find_transition(base).has_value()) base += "_";
    return base;
}

inline Property5Query property5_query(const WorkflowNet& w, const SkeletonResult& s) {
    if (!s.workflow_ok()) throw PreconditionError("property (5) needs a skeleton that is a workflow net");
    Property5Query q;
    CoverBasis marks_f = backward_cover(w.net, w.final_marking(1));
    q.x_ideals = complement_up_to_down(marks_f.basis, w.net.num_places());
    for (const auto& d : q.x_ideals.ideals())
        if (d[w.final] != 0) throw ConsistencyError("an ideal of X allows tokens in the final place");

    const ResetNet& sk = s.net();
    const PlaceId fs = *s.final;
    for (const auto& name : sk.place_names()) q.net.add_place(name);
    q.p_all = q.net.add_place(fresh_name(sk, "p_all", true));
    const std::size_t np = q.net.num_places();
    auto sum_nonfinal = [&](const Marking& v) {
        Count c = 0;
        for (std::uint32_t p = 0; p < sk.num_places(); ++p)
            if (PlaceId{p} != fs) c += v[p];
        return c;
    };
    for (const auto& tr : sk.transitions()) {
        Marking pre(np), post(np);
        for (std::size_t p = 0; p < sk.num_places(); ++p) {
            pre[p] = tr.pre[p];
            post[p] = tr.post[p];
        }
        pre[q.p_all] = sum_nonfinal(tr.pre);
        post[q.p_all] = sum_nonfinal(tr.post);
        q.net.add_transition(tr.name, std::move(pre), std::move(post));
    }
    Marking ti_post(np);
    ti_post[*s.initial] = 1;
    ti_post[q.p_all] = *s.initial == fs ? 0 : 1;
    q.t_init = q.net.add_transition(fresh_name(sk, "t_i", false), Marking(np), std::move(ti_post));

    std::vector<Atom> atoms;
    for (const auto& d : q.x_ideals.ideals()) {
        Atom a(np, Bound::any());
        bool some_room = false;
        for (std::uint32_t p = 0; p < sk.num_places(); ++p) {
            if (PlaceId{p} == fs) {
                a[p] = Bound::at_least(0);
                continue;
            }
            Count b = d[s.removal.kept_places[p]];
            a[p] = Bound::at_most(b);
            some_room = some_room || b > 0;
        }
        a[q.p_all.index] = Bound::at_least(1);
        // All non-final bounds 0 contradicts p_all >= 1.
        if (!some_room) continue;
        if (std::find(atoms.begin(), atoms.end(), a) == atoms.end()) atoms.push_back(std::move(a));
    }
    q.target.atoms = std::move(atoms);
    return q;
}

struct Property5Result {
    Verdict verdict;
    std::optional<ReachVerdict> reach;
    std::size_t atoms = 0;
    std::optional<Count> j; // Fails: the number of t_i firings
    Run skeleton_run;       // Fails: the skeleton run from {i:j}
};

inline Property5Result property5_check(const WorkflowNet& w, const SkeletonResult& s, const FullResetRun* frr,
                                       Budget budget = {}) {
    Property5Result out;
    Property5Query q = property5_query(w, s);
    out.atoms = q.target.atoms.size();
    if (q.target.atoms.empty()) {
        out.verdict.kind = Verdict::Kind::Holds;
        out.verdict.reason = "target is empty";
        return out;
    }
    ReachVerdict rv = decide_mixed_reach(q.net, q.net.zero(), q.target, budget);
    out.verdict.budget = rv.budget;
    switch (rv.kind) {
    case ReachVerdict::Kind::Unreachable:
        out.verdict.kind = Verdict::Kind::Holds;
        out.verdict.reason = "target unreachable";
        break;
    case ReachVerdict::Kind::Unknown:
        out.verdict.kind = Verdict::Kind::Unknown;
        out.verdict.reason = "reachability undetermined within budget";
        break;
    case ReachVerdict::Kind::Found: {
        Count j = 0;
        Run pi;
        for (TransId t : rv.run) {
            if (t == q.t_init)
                ++j;
            else
                pi.push_back(t);
        }
        out.j = j;
        out.skeleton_run = pi;
        out.verdict.kind = Verdict::Kind::Fails;
        out.verdict.reason = "skeleton reaches a marking that can never mark the final place";
        if (frr != nullptr && j > 0) {
            LiftedRun lifted = lift_skeleton_run(w, s, *frr, j, pi);
            CompletionOracle oracle(w, j + lifted.k_prime);
            auto wit = checked_witness(w, oracle, lifted.run, lifted.end);
            if (!wit) throw ConsistencyError("lifted property (5) witness completes");
            out.verdict.witness = std::move(*wit);
        }
        break;
    }
    }
    out.reach = std::move(rv);
    return out;
}

// ---------------------------------------------------------------------------
// P_k

struct PropertyRecord {
    enum class Status { Holds, Fails, Unknown, Skipped };
    Status status = Status::Skipped;
    std::string evidence;
    std::optional<UnsoundWitness> witness;
};

inline const char* to_string(PropertyRecord::Status s) {
    switch (s) {
    case PropertyRecord::Status::Holds: return "holds";
    case PropertyRecord::Status::Fails: return "fails";
    case PropertyRecord::Status::Unknown: return "unknown";
    case PropertyRecord::Status::Skipped: return "skipped";
    }
    return "?";
}

struct PkOptions {
    Budget budget;
    Count kmax_gs = 3;
    KMOptions km;
};

struct PkReport {
    enum class Overall { UpToKSound, NotGeneralisedSound, Unknown };
    Count k = 1;
    std::array<PropertyRecord, 5> properties;
    Overall overall = Overall::Unknown;
    std::optional<Count> k_hint;
    std::string justification;

    RedundancyInfo info;
    SkeletonResult skeleton;
    std::optional<FullResetRun> frr;
};

inline const char* to_string(PkReport::Overall o) {
    switch (o) {
    case PkReport::Overall::UpToKSound: return "UpToKSound";
    case PkReport::Overall::NotGeneralisedSound: return "NotGeneralisedSound";
    case PkReport::Overall::Unknown: return "Unknown";
    }
    return "?";
}

namespace detail {
inline std::string skeleton_violations(const SkeletonResult& s) {
    std::string msg = "skeleton is not a workflow net:";
    for (const auto& v : s.violations) msg += " " + v.message + ";";
    msg.pop_back();
    return msg;
}

/// A nonredundant transition resetting i loses tokens; try the two
/// candidate witnesses from the argument for why that breaks soundness.
inline std::optional<UnsoundWitness> reset_initial_witness(const WorkflowNet& w, const RedundancyInfo& info) {
    for (TransId t : info.nonredundant_transitions()) {
        if (!w.net.resets(t, w.initial)) continue;
        const auto& wit = *info.transitions[t.index];
        Run run = concat(wit.run, {t});
        for (Count k : {wit.k, wit.k + 1}) {
            Replay r = fire_run(w.net, w.initial_marking(k), run);
            if (!r) continue;
            CompletionOracle oracle(w, k);
            if (auto u = checked_witness(w, oracle, run, r.marking)) return u;
        }
    }
    return std::nullopt;
}
} // namespace detail

/// Evaluates P1..P5 in order. A definite failure fixes the overall verdict;
/// the skeleton's workflow check is still recorded for P3.
inline PkReport pk_check(const WorkflowNet& w, Count k, const PkOptions& opt = {}) {
    using S = PropertyRecord::Status;
    if (k == 0) throw InputError("k must be at least 1");
    PkReport rep;
    rep.k = k;
    rep.info = redundancy_info(w);
    rep.skeleton = skeleton(w, rep.info);
    auto& P = rep.properties;
    bool unknown = false;

    auto fail = [&](std::size_t idx, std::string evidence, std::optional<UnsoundWitness> wit, std::string why) {
        P[idx].status = S::Fails;
        P[idx].evidence = std::move(evidence);
        P[idx].witness = std::move(wit);
        if (P[idx].witness) rep.k_hint = P[idx].witness->k;
        rep.overall = PkReport::Overall::NotGeneralisedSound;
        rep.justification = std::move(why);
        if (idx != 2 && P[2].status == S::Skipped && !rep.skeleton.workflow_ok()) {
            P[2].status = S::Fails;
            P[2].evidence = detail::skeleton_violations(rep.skeleton);
        }
        return rep;
    };

    // (1)
    for (PlaceId p : {w.initial, w.final}) {
        if (rep.skeleton.resetable.count(p) != 0U)
            return fail(0, "place " + w.net.place_name(p) + " is reset by a nonredundant transition",
                        detail::reset_initial_witness(w, rep.info),
                        "P1: a nonredundant transition resets the initial or final place");
    }
    P[0] = {S::Holds, "initial and final places are not resetable", std::nullopt};

    // (2)
    FullResetOutcome fr = full_reset_run(w, rep.info, rep.skeleton);
    if (!fr.run)
        return fail(1, fr.explanation, fr.witness, "P2: no full reset run, so the net is not generalised sound");
    if (!validate_full_reset_run(w, rep.info, rep.skeleton, *fr.run))
        throw ConsistencyError("full reset run failed its own validation");
    rep.frr = fr.run;
    P[1] = {S::Holds, "full reset run with z = " + std::to_string(fr.run->z) + " of length " +
                          std::to_string(fr.run->zeta.size()),
            std::nullopt};

    // (3)
    if (!rep.skeleton.workflow_ok())
        return fail(2, detail::skeleton_violations(rep.skeleton), std::nullopt,
                    "P3: the skeleton of a generalised sound net is a workflow net");
    WorkflowNet sk = rep.skeleton.workflow();
    GsVerdict gs = skeleton_gs_check(sk, opt.kmax_gs, opt.km);
    if (gs.kind == GsVerdict::Kind::NotGS) {
        std::optional<UnsoundWitness> lifted;
        const auto& sw = *gs.failing.witness;
        LiftedRun lr = lift_skeleton_run(w, rep.skeleton, *rep.frr, sw.k, sw.run);
        CompletionOracle oracle(w, sw.k + lr.k_prime);
        lifted = checked_witness(w, oracle, lr.run, lr.end);
        return fail(2, "skeleton is not " + std::to_string(gs.k) + "-sound", lifted,
                    "P3: the skeleton of a generalised sound net is generalised sound");
    }
    if (gs.kind == GsVerdict::Kind::HoldsProved) {
        P[2] = {S::Holds, "skeleton is generalised sound: " + gs.reason, std::nullopt};
    } else {
        P[2] = {S::Unknown, "skeleton generalised soundness not proved: " + gs.reason, std::nullopt};
        unknown = true;
    }

    // (4)
    for (Count j = 1; j <= k; ++j) {
        CleanResult c = coverability_clean_detail(w, j);
        if (!c.clean)
            return fail(3, "not coverability-clean for k = " + std::to_string(j), c.witness,
                        "P4: a strict cover of the final marking witnesses " + std::to_string(j) + "-unsoundness");
    }
    P[3] = {S::Holds, "coverability-clean for every j <= " + std::to_string(k), std::nullopt};

    // (5)
    Property5Result p5 = property5_check(w, rep.skeleton, &*rep.frr, opt.budget);
    if (p5.verdict.kind == Verdict::Kind::Fails)
        return fail(4, p5.verdict.reason, p5.verdict.witness,
                    "P5: the skeleton reaches a marking that lifts to a witness of unsoundness");
    if (p5.verdict.kind == Verdict::Kind::Unknown) {
        P[4] = {S::Unknown, p5.verdict.reason, std::nullopt};
        unknown = true;
    } else {
        P[4] = {S::Holds, p5.verdict.reason + " (" + std::to_string(p5.atoms) + " atoms)", std::nullopt};
    }

    if (unknown) {
        rep.overall = PkReport::Overall::Unknown;
        rep.justification = "some property could not be decided";
    } else {
        rep.overall = PkReport::Overall::UpToKSound;
        rep.justification = "P1-P5 hold";
    }
    return rep;
}

} // namespace resound
