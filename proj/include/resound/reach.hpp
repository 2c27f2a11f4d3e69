#pragma once

// Reachability of mixed up/down-closed targets in plain nets: witness
// search with growing token caps plus state-equation certificates.

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "resound/budget.hpp"
#include "resound/closed_sets.hpp"
#include "resound/detail/ilp.hpp"
#include "resound/errors.hpp"
#include "resound/net.hpp"
#include "resound/search.hpp"

namespace resound {

/// Integer feasibility of the marking equation m = m0 + C·x for some m in
/// `atom`. Infeasible proves the atom unreachable.
inline detail::IlpStatus state_equation(const ResetNet& net, const Marking& m0, const Atom& atom,
                                        std::size_t max_nodes = 2000) {
    using detail::Integer;
    if (net.has_resets()) throw PreconditionError("the state equation needs a net without reset arcs");
    detail::check_dim(net, m0);
    if (atom.size() != net.num_places()) throw InputError("atom has the wrong dimension");
    const std::size_t nt = net.num_transitions();
    std::vector<detail::LinearRow> rows;
    for (std::uint32_t p = 0; p < net.num_places(); ++p) {
        std::vector<Integer> eff(nt);
        for (std::size_t t = 0; t < nt; ++t)
            eff[t] = Integer(net.transitions()[t].post[p]) - Integer(net.transitions()[t].pre[p]);
        const Bound& b = atom[p];
        Integer lo = b.kind == Bound::Kind::AtLeast ? Integer(b.value) : Integer(0);
        // -(C x)_p <= m0(p) - lo
        detail::LinearRow low{eff, Integer(m0[p]) - lo};
        for (auto& c : low.coeffs) c = -c;
        rows.push_back(std::move(low));
        if (b.kind == Bound::Kind::AtMost && b.value != kOmega)
            rows.push_back(detail::LinearRow{eff, Integer(b.value) - Integer(m0[p])});
    }
    return detail::ilp_feasible(rows, nt, max_nodes).status;
}

/// False only when the atom is certainly unreachable.
inline bool state_equation_feasible(const ResetNet& net, const Marking& m0, const Atom& atom) {
    return state_equation(net, m0, atom) != detail::IlpStatus::Infeasible;
}

struct AtomCertificate {
    enum class Kind { StateEquation, Exhausted };
    std::size_t atom = 0;
    Kind kind = Kind::StateEquation;
};

inline const char* to_string(AtomCertificate::Kind k) {
    return k == AtomCertificate::Kind::StateEquation ? "state-equation" : "exhausted";
}

struct ReachVerdict {
    enum class Kind { Found, Unreachable, Unknown };
    Kind kind = Kind::Unknown;
    Run run;        // Found
    Marking reached; // Found
    std::vector<AtomCertificate> certificates; // Unreachable
    BudgetReport budget;
};

inline const char* to_string(ReachVerdict::Kind k) {
    switch (k) {
    case ReachVerdict::Kind::Found: return "found";
    case ReachVerdict::Kind::Unreachable: return "unreachable";
    case ReachVerdict::Kind::Unknown: return "unknown";
    }
    return "?";
}

inline ReachVerdict decide_mixed_reach(const ResetNet& net, const Marking& m0, const MixedTarget& tgt,
                                       Budget budget = {}) {
    if (budget.max_states == 0 || budget.max_seconds <= 0) throw InputError("budget must be positive");
    if (net.has_resets()) throw PreconditionError("mixed reachability needs a net without reset arcs");
    detail::check_dim(net, m0);
    for (const auto& a : tgt.atoms)
        if (a.size() != net.num_places()) throw InputError("target atom has the wrong dimension");

    BudgetMeter meter(budget);
    ReachVerdict v;
    auto found = [&](Run run, Marking end) {
        Replay r = fire_run(net, m0, run);
        if (!r || r.marking != end || !mixed_contains(tgt, end))
            throw ConsistencyError("reachability witness does not replay into the target");
        v.kind = ReachVerdict::Kind::Found;
        v.run = std::move(run);
        v.reached = std::move(end);
        v.budget = report_of(meter, false);
        return v;
    };
    if (mixed_contains(tgt, m0)) return found({}, m0);

    std::vector<std::size_t> open;
    for (std::size_t a = 0; a < tgt.atoms.size(); ++a) {
        if (state_equation(net, m0, tgt.atoms[a]) == detail::IlpStatus::Infeasible)
            v.certificates.push_back({a, AtomCertificate::Kind::StateEquation});
        else
            open.push_back(a);
    }
    if (open.empty()) {
        v.kind = ReachVerdict::Kind::Unreachable;
        v.budget = report_of(meter, false);
        return v;
    }
    MixedTarget live;
    for (std::size_t a : open) live.atoms.push_back(tgt.atoms[a]);

    const std::size_t np = net.num_places();
    std::vector<Count> cap(np, 1);
    for (std::size_t p = 0; p < np; ++p) {
        cap[p] = std::max<Count>(cap[p], m0[p]);
        for (const auto& a : live.atoms)
            if (a[p].value != kOmega) cap[p] = std::max(cap[p], a[p].value);
    }
    for (;;) {
        StateGraph g;
        auto keep = [&](const Marking& m) {
            for (std::size_t p = 0; p < np; ++p)
                if (m[p] > cap[p]) return false;
            return true;
        };
        auto res = explore(net, m0, g, meter, keep, [&](std::size_t, const Marking& m) { return mixed_contains(live, m); });
        if (res.stop == ExploreStop::Stopped) return found(g.run_to(res.node), g.markings[res.node]);
        if (res.stop == ExploreStop::Budget) {
            v.kind = ReachVerdict::Kind::Unknown;
            v.certificates.clear();
            v.budget = report_of(meter, true);
            return v;
        }
        if (!res.pruned) {
            for (std::size_t a : open) v.certificates.push_back({a, AtomCertificate::Kind::Exhausted});
            std::sort(v.certificates.begin(), v.certificates.end(),
                      [](const AtomCertificate& x, const AtomCertificate& y) { return x.atom < y.atom; });
            v.kind = ReachVerdict::Kind::Unreachable;
            v.budget = report_of(meter, false);
            return v;
        }
        for (auto& c : cap) c = c > kOmega / 2 ? kOmega : c * 2;
    }
}

} // namespace resound
