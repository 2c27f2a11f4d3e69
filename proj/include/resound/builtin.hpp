#pragma once

// Named example nets.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "resound/errors.hpp"
#include "resound/net.hpp"

namespace resound {

/// A builtin is either a workflow net or a plain reset net (fig1).
struct BuiltinNet {
    ResetNet net;
    std::optional<PlaceId> initial;
    std::optional<PlaceId> final;

    [[nodiscard]] bool is_workflow() const { return initial.has_value(); }
    [[nodiscard]] WorkflowNet workflow() const {
        if (!initial) throw PreconditionError("this builtin is not a workflow net");
        return WorkflowNet{net, *initial, *final};
    }
};

inline std::vector<std::string> builtin_names() {
    return {"fig1", "fig2", "chain", "pump", "reset-diamond", "mutex-reset", "merge2", "stuck-skeleton"};
}

inline BuiltinNet builtin_net(std::string_view name) {
    ResetNet n;
    auto wf = [&](const char* i, const char* f) {
        PlaceId pi = n.place(i), pf = n.place(f);
        WorkflowNet w = make_workflow(std::move(n), pi, pf);
        return BuiltinNet{std::move(w.net), w.initial, w.final};
    };
    if (name == "fig1") {
        n.add_places({"p1", "p2", "p3", "p4"});
        n.add_transition("t1", {{"p1", 1}}, {{"p2", 1}, {"p3", 1}});
        n.add_transition("t2", {{"p2", 1}}, {{"p1", 1}});
        n.add_transition("t3", {{"p2", 1}}, {{"p4", 1}}, {"p3"});
        return BuiltinNet{std::move(n), std::nullopt, std::nullopt};
    }
    if (name == "fig2") {
        n.add_places({"i", "p1", "p2", "q1", "q2", "q3", "f"});
        n.add_transition("s", {{"i", 1}}, {{"p1", 1}, {"p2", 1}});
        n.add_transition("t1", {{"p1", 1}}, {{"q1", 1}});
        n.add_transition("t2", {{"p2", 1}}, {{"q2", 1}, {"q3", 1}});
        n.add_transition("u1", {{"q1", 1}, {"q3", 1}}, {{"f", 1}}, {"q2"});
        n.add_transition("u2", {{"q2", 1}}, {{"f", 1}}, {"p1", "p2", "q1", "q2", "q3"});
        return wf("i", "f");
    }
    if (name == "chain") {
        n.add_places({"i", "f"});
        n.add_transition("t", {{"i", 1}}, {{"f", 1}});
        return wf("i", "f");
    }
    if (name == "pump") {
        n.add_places({"i", "p", "q", "f"});
        n.add_transition("t1", {{"i", 1}}, {{"p", 1}});
        n.add_transition("t2", {{"p", 1}}, {{"p", 1}, {"q", 1}});
        n.add_transition("t3", {{"q", 1}}, {{"f", 1}});
        n.add_transition("t4", {{"p", 1}}, {{"f", 1}});
        return wf("i", "f");
    }
    if (name == "reset-diamond") {
        // v gives q an outgoing arc so that q lies on a path to f.
        n.add_places({"i", "p", "q", "f"});
        n.add_transition("s", {{"i", 1}}, {{"p", 1}, {"q", 1}});
        n.add_transition("u", {{"p", 1}}, {{"f", 1}}, {"q"});
        n.add_transition("v", {{"p", 1}, {"q", 1}}, {{"f", 1}});
        return wf("i", "f");
    }
    if (name == "mutex-reset") {
        n.add_places({"i", "c1", "c2", "a", "f"});
        n.add_transition("d1", {{"i", 1}}, {{"c1", 1}}, {"c2"});
        n.add_transition("d2", {{"i", 1}}, {{"c2", 1}}, {"c1"});
        n.add_transition("e1", {{"c1", 1}}, {{"f", 1}});
        n.add_transition("e2", {{"c2", 1}}, {{"f", 1}});
        n.add_transition("g", {{"c1", 1}, {"c2", 1}}, {{"a", 1}});
        n.add_transition("h", {{"a", 1}}, {{"f", 1}});
        return wf("i", "f");
    }
    if (name == "merge2") {
        // 1-sound, but two tokens in p may merge into one final token.
        n.add_places({"i", "p", "f"});
        n.add_transition("s", {{"i", 1}}, {{"p", 1}});
        n.add_transition("u", {{"p", 1}}, {{"f", 1}});
        n.add_transition("g", {{"p", 2}}, {{"f", 1}});
        return wf("i", "f");
    }
    if (name == "stuck-skeleton") {
        // The skeleton drops q, so it reaches {c:1}; in the net itself c
        // then needs a q or an a to move on.
        n.add_places({"i", "a", "c", "q", "f"});
        n.add_transition("s", {{"i", 1}}, {{"a", 1}, {"q", 1}});
        n.add_transition("x", {{"a", 1}}, {{"c", 1}});
        n.add_transition("y", {{"c", 1}, {"q", 1}}, {{"f", 1}});
        n.add_transition("y2", {{"c", 1}, {"a", 1}}, {{"a", 1}, {"f", 1}});
        n.add_transition("u", {{"a", 1}}, {{"f", 1}}, {"q"});
        return wf("i", "f");
    }
    throw InputError("unknown builtin '" + std::string(name) + "'");
}

inline WorkflowNet builtin(std::string_view name) { return builtin_net(name).workflow(); }

} // namespace resound
