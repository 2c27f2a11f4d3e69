#pragma once

// Two-counter Minsky machines, their bounded reachability, and the
// reduction to reset workflow nets.

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "resound/errors.hpp"
#include "resound/net.hpp"

namespace resound {

struct MinskyOp {
    enum class Kind { Inc, Dec, Zero };
    Kind kind = Kind::Inc;
    int counter = 1; // 1 or 2

    friend bool operator==(const MinskyOp&, const MinskyOp&) = default;
    friend auto operator<=>(const MinskyOp&, const MinskyOp&) = default;
};

inline std::string to_string(MinskyOp op) {
    const char* k = op.kind == MinskyOp::Kind::Inc ? "inc" : op.kind == MinskyOp::Kind::Dec ? "dec" : "zrt";
    return k + std::to_string(op.counter);
}

inline MinskyOp parse_minsky_op(const std::string& s) {
    static const std::map<std::string, MinskyOp> ops{
        {"inc1", {MinskyOp::Kind::Inc, 1}}, {"dec1", {MinskyOp::Kind::Dec, 1}}, {"zrt1", {MinskyOp::Kind::Zero, 1}},
        {"inc2", {MinskyOp::Kind::Inc, 2}}, {"dec2", {MinskyOp::Kind::Dec, 2}}, {"zrt2", {MinskyOp::Kind::Zero, 2}},
    };
    auto it = ops.find(s);
    if (it == ops.end()) throw InputError("unknown machine operation '" + s + "'");
    return it->second;
}

struct MinskyTransition {
    std::string from;
    MinskyOp op;
    std::string to;

    friend bool operator==(const MinskyTransition&, const MinskyTransition&) = default;
    friend auto operator<=>(const MinskyTransition&, const MinskyTransition&) = default;
};

struct MinskyMachine {
    std::vector<std::string> states;
    std::vector<MinskyTransition> transitions;
    std::string source;
    std::string target;

    [[nodiscard]] bool has_state(const std::string& s) const {
        return std::find(states.begin(), states.end(), s) != states.end();
    }

    void validate() const {
        std::set<std::string> seen;
        for (const auto& s : states) {
            if (s.empty()) throw InputError("machine state names must not be empty");
            if (!seen.insert(s).second) throw InputError("duplicate machine state '" + s + "'");
        }
        if (!has_state(source)) throw InputError("source state '" + source + "' is not declared");
        if (!has_state(target)) throw InputError("target state '" + target + "' is not declared");
        if (source == target) throw InputError("source and target states coincide");
        std::set<MinskyTransition> ts;
        for (const auto& t : transitions) {
            if (!has_state(t.from) || !has_state(t.to))
                throw InputError("transition " + t.from + " " + to_string(t.op) + " " + t.to + " uses an undeclared state");
            if (t.op.counter != 1 && t.op.counter != 2) throw InputError("counter index must be 1 or 2");
            if (!ts.insert(t).second)
                throw InputError("duplicate transition " + t.from + " " + to_string(t.op) + " " + t.to);
        }
    }
};

struct MinskyConfig {
    std::string state;
    Count c1 = 0;
    Count c2 = 0;

    friend bool operator==(const MinskyConfig&, const MinskyConfig&) = default;
    friend auto operator<=>(const MinskyConfig&, const MinskyConfig&) = default;
};

/// One-step successors in transition order. With `bound`, successors whose
/// counters exceed it are dropped.
inline std::vector<MinskyConfig> minsky_step(const MinskyMachine& m, const MinskyConfig& c,
                                             std::optional<Count> bound = std::nullopt) {
    std::vector<MinskyConfig> out;
    for (const auto& t : m.transitions) {
        if (t.from != c.state) continue;
        MinskyConfig n{t.to, c.c1, c.c2};
        Count& v = t.op.counter == 1 ? n.c1 : n.c2;
        switch (t.op.kind) {
        case MinskyOp::Kind::Inc: ++v; break;
        case MinskyOp::Kind::Dec:
            if (v == 0) continue;
            --v;
            break;
        case MinskyOp::Kind::Zero:
            if (v != 0) continue;
            break;
        }
        if (bound && (n.c1 > *bound || n.c2 > *bound)) continue;
        out.push_back(std::move(n));
    }
    return out;
}

/// Whether source(0,0) reaches target(0,0) with both counters kept in [0..k].
inline bool minsky_reach_bounded(const MinskyMachine& m, Count k) {
    MinskyConfig start{m.source, 0, 0};
    MinskyConfig goal{m.target, 0, 0};
    std::set<MinskyConfig> seen{start};
    std::deque<MinskyConfig> work{start};
    while (!work.empty()) {
        MinskyConfig c = work.front();
        work.pop_front();
        if (c == goal) return true;
        for (auto& n : minsky_step(m, c, k))
            if (seen.insert(n).second) work.push_back(std::move(n));
    }
    return false;
}

namespace detail {
inline std::string fresh_state(const MinskyMachine& m, std::string base) {
    while (m.has_state(base)) base += "'";
    return base;
}
} // namespace detail

/// Prunes states off every source-to-target path of the state graph and
/// adds a new source with free counter loops followed by two zero tests.
inline MinskyMachine preprocess(const MinskyMachine& m) {
    m.validate();
    auto sweep = [&](const std::string& from, bool forward) {
        std::set<std::string> seen{from};
        std::vector<std::string> stack{from};
        while (!stack.empty()) {
            std::string s = stack.back();
            stack.pop_back();
            for (const auto& t : m.transitions) {
                const std::string& a = forward ? t.from : t.to;
                const std::string& b = forward ? t.to : t.from;
                if (a == s && seen.insert(b).second) stack.push_back(b);
            }
        }
        return seen;
    };
    auto fwd = sweep(m.source, true);
    auto bwd = sweep(m.target, false);
    if (fwd.count(m.target) == 0U)
        throw InputError("target state '" + m.target + "' is not reachable from '" + m.source + "' in the state graph");
    MinskyMachine out;
    for (const auto& s : m.states)
        if (fwd.count(s) != 0U && bwd.count(s) != 0U) out.states.push_back(s);
    for (const auto& t : m.transitions)
        if (out.has_state(t.from) && out.has_state(t.to)) out.transitions.push_back(t);
    std::string src2 = detail::fresh_state(out, m.source + "'");
    out.states.push_back(src2);
    std::string r = detail::fresh_state(out, "r");
    out.states.push_back(r);
    using K = MinskyOp::Kind;
    for (MinskyOp op : {MinskyOp{K::Inc, 1}, MinskyOp{K::Dec, 1}, MinskyOp{K::Inc, 2}, MinskyOp{K::Dec, 2}})
        out.transitions.push_back({src2, op, src2});
    out.transitions.push_back({src2, {K::Zero, 1}, r});
    out.transitions.push_back({r, {K::Zero, 2}, m.source});
    out.source = src2;
    out.target = m.target;
    return out;
}

inline std::string minsky_place(const std::string& state) { return "q." + state; }

/// Places q.<state> for every state, then x1, x2, xb1, xb2 (xb = budget).
inline ResetNet minsky_to_reset_pn(const MinskyMachine& m) {
    m.validate();
    ResetNet net;
    for (const auto& s : m.states) net.add_place(minsky_place(s));
    for (const char* p : {"x1", "x2", "xb1", "xb2"}) net.add_place(p);
    for (const auto& t : m.transitions) {
        std::string x = "x" + std::to_string(t.op.counter);
        std::string xb = "xb" + std::to_string(t.op.counter);
        ResetNet::Arcs pre{{minsky_place(t.from), 1}}, post{{minsky_place(t.to), 1}};
        std::vector<std::string> resets;
        switch (t.op.kind) {
        case MinskyOp::Kind::Inc:
            pre.push_back({xb, 1});
            post.push_back({x, 1});
            break;
        case MinskyOp::Kind::Dec:
            pre.push_back({x, 1});
            post.push_back({xb, 1});
            break;
        case MinskyOp::Kind::Zero: resets.push_back(x); break;
        }
        net.add_transition(t.from + "." + to_string(t.op) + "." + t.to, pre, post, resets);
    }
    return net;
}

/// Wraps the preprocessed machine's net between places i, r and f.
inline WorkflowNet minsky_to_rwf(const MinskyMachine& m) {
    MinskyMachine pm = preprocess(m);
    ResetNet pn = minsky_to_reset_pn(pm);
    ResetNet net;
    net.add_place("i");
    for (const auto& p : pn.place_names()) net.add_place(p);
    net.add_place("r");
    net.add_place("f");

    std::vector<std::string> all_pn = pn.place_names();
    std::vector<std::string> t1_resets;
    for (const auto& p : all_pn)
        if (p != "xb1" && p != "xb2") t1_resets.push_back(p);
    net.add_transition("t1", {{"i", 1}}, {{"r", 1}, {minsky_place(pm.source), 1}, {"xb1", 1}, {"xb2", 1}}, t1_resets);
    for (const auto& tr : pn.transitions()) {
        std::vector<std::string> resets;
        for (PlaceId p : tr.resets) resets.push_back(pn.place_name(p));
        ResetNet::Arcs pre, post;
        for (std::uint32_t p = 0; p < pn.num_places(); ++p) {
            if (tr.pre[p] > 0) pre.push_back({pn.place_name(PlaceId{p}), tr.pre[p]});
            if (tr.post[p] > 0) post.push_back({pn.place_name(PlaceId{p}), tr.post[p]});
        }
        net.add_transition(tr.name, pre, post, resets);
    }
    net.add_transition("t2", {{"r", 1}}, {{"f", 1}}, all_pn);
    std::string tgt = minsky_place(pm.target);
    net.add_transition("t3", {{"r", 1}, {"xb1", 1}, {"xb2", 1}, {tgt, 1}}, {{"f", 1}, {tgt, 1}}, {"x1", "x2"});
    PlaceId i = net.place("i"), f = net.place("f");
    return make_workflow(std::move(net), i, f);
}

} // namespace resound
