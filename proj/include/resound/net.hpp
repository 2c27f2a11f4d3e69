#pragma once

// Reset Petri nets, workflow nets and their firing semantics.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "resound/errors.hpp"

namespace resound {

using Count = std::uint64_t;

struct PlaceId {
    std::uint32_t index = 0;
    friend auto operator<=>(PlaceId, PlaceId) = default;
};

struct TransId {
    std::uint32_t index = 0;
    friend auto operator<=>(TransId, TransId) = default;
};

using PlaceSet = std::set<PlaceId>;
using TransSet = std::set<TransId>;
using Run = std::vector<TransId>;

/// Token counts indexed by place. Ordered lexicographically by `<=>` (used
/// for canonical storage); the pointwise order is `leq`.
class Marking {
public:
    Marking() = default;
    explicit Marking(std::size_t dim) : counts_(dim, 0) {}
    explicit Marking(std::vector<Count> counts) : counts_(std::move(counts)) {}
    Marking(std::initializer_list<Count> counts) : counts_(counts) {}

    [[nodiscard]] std::size_t size() const { return counts_.size(); }
    Count operator[](std::size_t p) const { return counts_[p]; }
    Count& operator[](std::size_t p) { return counts_[p]; }
    Count operator[](PlaceId p) const { return counts_[p.index]; }
    Count& operator[](PlaceId p) { return counts_[p.index]; }

    [[nodiscard]] auto begin() const { return counts_.begin(); }
    [[nodiscard]] auto end() const { return counts_.end(); }
    [[nodiscard]] const std::vector<Count>& counts() const { return counts_; }

    [[nodiscard]] Count total() const { return std::accumulate(counts_.begin(), counts_.end(), Count{0}); }
    [[nodiscard]] bool is_zero() const {
        return std::all_of(counts_.begin(), counts_.end(), [](Count c) { return c == 0; });
    }

    Marking& operator+=(const Marking& o) {
        for (std::size_t p = 0; p < counts_.size(); ++p) counts_[p] += o.counts_[p];
        return *this;
    }
    friend Marking operator+(Marking a, const Marking& b) { return a += b; }

    /// Pointwise difference; requires `o <= *this`.
    friend Marking operator-(Marking a, const Marking& b) {
        for (std::size_t p = 0; p < a.counts_.size(); ++p) a.counts_[p] -= b.counts_[p];
        return a;
    }

    friend bool operator==(const Marking&, const Marking&) = default;
    friend auto operator<=>(const Marking&, const Marking&) = default;

private:
    std::vector<Count> counts_;
};

/// Pointwise a <= b.
inline bool leq(const Marking& a, const Marking& b) {
    for (std::size_t p = 0; p < a.size(); ++p)
        if (a[p] > b[p]) return false;
    return true;
}

/// Pointwise a <= b and a != b.
inline bool strictly_less(const Marking& a, const Marking& b) { return a != b && leq(a, b); }

struct VectorCountHash {
    std::size_t operator()(const std::vector<Count>& v) const noexcept {
        std::size_t h = 0xcbf29ce484222325ULL;
        for (Count c : v) h ^= std::hash<Count>{}(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

struct MarkingHash {
    std::size_t operator()(const Marking& m) const noexcept { return VectorCountHash{}(m.counts()); }
};

struct Transition {
    std::string name;
    Marking pre;
    Marking post;
    std::vector<PlaceId> resets; // sorted, unique
};

/// A reset Petri net with N-weighted pre/post arcs. Transition order is
/// declaration order and every algorithm iterates in that order.
class ResetNet {
public:
    using Arcs = std::vector<std::pair<std::string, Count>>;

    PlaceId add_place(std::string name) {
        if (name.empty()) throw InputError("place name must not be empty");
        if (place_index_.count(name) != 0U) throw InputError("duplicate place '" + name + "'");
        PlaceId id{static_cast<std::uint32_t>(places_.size())};
        place_index_.emplace(name, id);
        places_.push_back(std::move(name));
        for (auto& t : transitions_) {
            t.pre = extend(t.pre);
            t.post = extend(t.post);
        }
        return id;
    }

    void add_places(std::initializer_list<std::string_view> names) {
        for (auto n : names) add_place(std::string(n));
    }

    TransId add_transition(std::string name, Marking pre, Marking post, std::vector<PlaceId> resets = {}) {
        if (name.empty()) throw InputError("transition name must not be empty");
        if (trans_index_.count(name) != 0U) throw InputError("duplicate transition '" + name + "'");
        if (pre.size() != places_.size() || post.size() != places_.size())
            throw InputError("transition '" + name + "': arc vectors must have one entry per place");
        std::sort(resets.begin(), resets.end());
        resets.erase(std::unique(resets.begin(), resets.end()), resets.end());
        for (PlaceId p : resets)
            if (p.index >= places_.size())
                throw InputError("transition '" + name + "' resets an unknown place");
        TransId id{static_cast<std::uint32_t>(transitions_.size())};
        trans_index_.emplace(name, id);
        transitions_.push_back(Transition{std::move(name), std::move(pre), std::move(post), std::move(resets)});
        return id;
    }

    /// Name-based convenience overload.
    TransId add_transition(std::string name, const Arcs& pre, const Arcs& post,
                           const std::vector<std::string>& resets = {}) {
        std::vector<PlaceId> r;
        for (const auto& n : resets) r.push_back(place(n));
        return add_transition(std::move(name), marking(pre), marking(post), std::move(r));
    }

    [[nodiscard]] std::size_t num_places() const { return places_.size(); }
    [[nodiscard]] std::size_t num_transitions() const { return transitions_.size(); }

    [[nodiscard]] const std::string& place_name(PlaceId p) const { return places_.at(p.index); }
    [[nodiscard]] const std::string& transition_name(TransId t) const { return transitions_.at(t.index).name; }
    [[nodiscard]] const std::vector<std::string>& place_names() const { return places_; }

    [[nodiscard]] std::optional<PlaceId> find_place(std::string_view name) const {
        auto it = place_index_.find(std::string(name));
        if (it == place_index_.end()) return std::nullopt;
        return it->second;
    }
    [[nodiscard]] std::optional<TransId> find_transition(std::string_view name) const {
        auto it = trans_index_.find(std::string(name));
        if (it == trans_index_.end()) return std::nullopt;
        return it->second;
    }
    [[nodiscard]] PlaceId place(std::string_view name) const {
        if (auto p = find_place(name)) return *p;
        throw InputError("unknown place '" + std::string(name) + "'");
    }
    [[nodiscard]] TransId transition(std::string_view name) const {
        if (auto t = find_transition(name)) return *t;
        throw InputError("unknown transition '" + std::string(name) + "'");
    }

    [[nodiscard]] const Transition& operator[](TransId t) const { return transitions_.at(t.index); }
    [[nodiscard]] const std::vector<Transition>& transitions() const { return transitions_; }

    [[nodiscard]] const Marking& pre(TransId t) const { return transitions_.at(t.index).pre; }
    [[nodiscard]] const Marking& post(TransId t) const { return transitions_.at(t.index).post; }
    [[nodiscard]] const std::vector<PlaceId>& reset_set(TransId t) const { return transitions_.at(t.index).resets; }
    [[nodiscard]] bool resets(TransId t, PlaceId p) const {
        const auto& r = reset_set(t);
        return std::binary_search(r.begin(), r.end(), p);
    }
    [[nodiscard]] bool has_resets() const {
        return std::any_of(transitions_.begin(), transitions_.end(), [](const Transition& t) { return !t.resets.empty(); });
    }

    [[nodiscard]] Marking zero() const { return Marking(places_.size()); }

    /// Marking from (name, count) pairs; omitted places are 0.
    [[nodiscard]] Marking marking(const Arcs& entries) const {
        Marking m(places_.size());
        for (const auto& [name, c] : entries) m[place(name)] += c;
        return m;
    }

    [[nodiscard]] Marking unit(PlaceId p, Count c = 1) const {
        Marking m(places_.size());
        m[p] = c;
        return m;
    }

    [[nodiscard]] std::vector<TransId> transition_ids() const {
        std::vector<TransId> ids;
        for (std::uint32_t t = 0; t < transitions_.size(); ++t) ids.push_back(TransId{t});
        return ids;
    }

    friend bool operator==(const ResetNet& a, const ResetNet& b) {
        if (a.places_ != b.places_ || a.transitions_.size() != b.transitions_.size()) return false;
        for (std::size_t t = 0; t < a.transitions_.size(); ++t) {
            const auto& x = a.transitions_[t];
            const auto& y = b.transitions_[t];
            if (x.name != y.name || x.pre != y.pre || x.post != y.post || x.resets != y.resets) return false;
        }
        return true;
    }

private:
    Marking extend(const Marking& m) const {
        std::vector<Count> c = m.counts();
        c.resize(places_.size(), 0);
        return Marking(std::move(c));
    }

    std::vector<std::string> places_;
    std::vector<Transition> transitions_;
    std::map<std::string, PlaceId, std::less<>> place_index_;
    std::map<std::string, TransId, std::less<>> trans_index_;
};

struct WorkflowNet {
    ResetNet net;
    PlaceId initial;
    PlaceId final;

    [[nodiscard]] Marking initial_marking(Count k) const { return net.unit(initial, k); }
    [[nodiscard]] Marking final_marking(Count k) const { return net.unit(final, k); }
};

namespace detail {
inline void check_dim(const ResetNet& net, const Marking& m) {
    if (m.size() != net.num_places())
        throw InputError("marking has " + std::to_string(m.size()) + " entries but the net has " +
                         std::to_string(net.num_places()) + " places");
}
} // namespace detail

[[nodiscard]] inline bool enabled(const ResetNet& net, const Marking& m, TransId t) {
    return leq(net.pre(t), m);
}

/// Firing semantics: consume pre(t), then empty the reset places, then
/// produce post(t). Returns nullopt when t is disabled in m.
[[nodiscard]] inline std::optional<Marking> fire(const ResetNet& net, const Marking& m, TransId t) {
    detail::check_dim(net, m);
    if (t.index >= net.num_transitions()) throw InputError("unknown transition index");
    const Transition& tr = net[t];
    if (!leq(tr.pre, m)) return std::nullopt;
    Marking out = m - tr.pre;
    for (PlaceId p : tr.resets) out[p] = 0;
    out += tr.post;
    return out;
}

/// Result of replaying a run. On failure `marking` is the marking in which
/// step `disabled_at` was not enabled.
struct Replay {
    Marking marking;
    std::optional<std::size_t> disabled_at;

    explicit operator bool() const { return !disabled_at.has_value(); }
};

[[nodiscard]] inline Replay fire_run(const ResetNet& net, const Marking& m, const Run& run) {
    detail::check_dim(net, m);
    Marking cur = m;
    for (std::size_t i = 0; i < run.size(); ++i) {
        auto next = fire(net, cur, run[i]);
        if (!next) return Replay{std::move(cur), i};
        cur = std::move(*next);
    }
    return Replay{std::move(cur), std::nullopt};
}

/// A run together with every intermediate marking.
struct RunTrace {
    Run steps;
    std::vector<Marking> markings; // markings.front() is the start, size() == steps.size() + 1

    [[nodiscard]] const Marking& start() const { return markings.front(); }
    [[nodiscard]] const Marking& end() const { return markings.back(); }

    /// markings[i + 1] == fire(markings[i], steps[i]) for every i.
    [[nodiscard]] bool consistent(const ResetNet& net) const {
        if (markings.size() != steps.size() + 1) return false;
        for (std::size_t i = 0; i < steps.size(); ++i) {
            auto next = fire(net, markings[i], steps[i]);
            if (!next || *next != markings[i + 1]) return false;
        }
        return true;
    }
};

/// Replays `run` from `m` keeping all intermediate markings; throws
/// InputError naming the first disabled step.
[[nodiscard]] inline RunTrace trace_run(const ResetNet& net, const Marking& m, const Run& run) {
    detail::check_dim(net, m);
    RunTrace tr{run, {m}};
    for (std::size_t i = 0; i < run.size(); ++i) {
        auto next = fire(net, tr.markings.back(), run[i]);
        if (!next)
            throw InputError("step " + std::to_string(i) + " (" + net.transition_name(run[i]) + ") is not enabled");
        tr.markings.push_back(std::move(*next));
    }
    return tr;
}

inline Run concat(Run a, const Run& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

// ---------------------------------------------------------------------------
// Workflow validation

struct Violation {
    enum class Kind {
        BadPlace,
        SameInitialFinal,
        InitialHasProducer,
        FinalHasConsumer,
        FinalReset,
        NotOnPath,
        NonUnitWeight,
        InitialRemoved,
        FinalRemoved,
    };
    Kind kind;
    std::string subject; // offending node name, when there is one
    std::string message;

    friend bool operator==(const Violation&, const Violation&) = default;
};

inline const char* to_string(Violation::Kind k) {
    switch (k) {
    case Violation::Kind::BadPlace: return "bad-place";
    case Violation::Kind::SameInitialFinal: return "initial-equals-final";
    case Violation::Kind::InitialHasProducer: return "initial-has-producer";
    case Violation::Kind::FinalHasConsumer: return "final-has-consumer";
    case Violation::Kind::FinalReset: return "final-reset";
    case Violation::Kind::NotOnPath: return "not-on-path";
    case Violation::Kind::NonUnitWeight: return "non-unit-weight";
    case Violation::Kind::InitialRemoved: return "initial-removed";
    case Violation::Kind::FinalRemoved: return "final-removed";
    }
    return "?";
}

/// Checks every workflow-net condition and returns all violations (empty
/// means valid). The path condition ignores reset arcs.
[[nodiscard]] inline std::vector<Violation> validate_workflow(const ResetNet& net, PlaceId i, PlaceId f,
                                                              bool strict = false) {
    using K = Violation::Kind;
    std::vector<Violation> out;
    const std::size_t np = net.num_places();
    const std::size_t nt = net.num_transitions();
    if (i.index >= np || f.index >= np) {
        out.push_back({K::BadPlace, "", "initial or final place does not exist"});
        return out;
    }
    const std::string& iname = net.place_name(i);
    const std::string& fname = net.place_name(f);
    if (i == f) out.push_back({K::SameInitialFinal, iname, "initial and final place coincide"});

    for (TransId t : net.transition_ids()) {
        const auto& tr = net[t];
        if (tr.post[i] > 0)
            out.push_back({K::InitialHasProducer, tr.name, "transition " + tr.name + " produces into initial place " + iname});
        if (tr.pre[f] > 0)
            out.push_back({K::FinalHasConsumer, tr.name, "transition " + tr.name + " consumes from final place " + fname});
        if (net.resets(t, f))
            out.push_back({K::FinalReset, tr.name, "transition " + tr.name + " resets final place " + fname});
        if (strict) {
            for (std::uint32_t p = 0; p < np; ++p) {
                if (tr.pre[p] > 1 || tr.post[p] > 1)
                    out.push_back({K::NonUnitWeight, tr.name,
                                   "arc between " + tr.name + " and " + net.place_name(PlaceId{p}) + " has weight > 1"});
            }
        }
    }

    // Nodes 0..np-1 are places, np..np+nt-1 transitions.
    const std::size_t nv = np + nt;
    std::vector<std::vector<std::size_t>> succ(nv), pred(nv);
    for (std::size_t t = 0; t < nt; ++t) {
        const auto& tr = net.transitions()[t];
        for (std::size_t p = 0; p < np; ++p) {
            if (tr.pre[p] > 0) {
                succ[p].push_back(np + t);
                pred[np + t].push_back(p);
            }
            if (tr.post[p] > 0) {
                succ[np + t].push_back(p);
                pred[p].push_back(np + t);
            }
        }
    }
    auto sweep = [&](std::size_t from, const std::vector<std::vector<std::size_t>>& adj) {
        std::vector<bool> seen(nv, false);
        std::vector<std::size_t> stack{from};
        seen[from] = true;
        while (!stack.empty()) {
            std::size_t v = stack.back();
            stack.pop_back();
            for (std::size_t w : adj[v])
                if (!seen[w]) {
                    seen[w] = true;
                    stack.push_back(w);
                }
        }
        return seen;
    };
    auto from_i = sweep(i.index, succ);
    auto to_f = sweep(f.index, pred);
    for (std::size_t v = 0; v < nv; ++v) {
        if (from_i[v] && to_f[v]) continue;
        const std::string& name = v < np ? net.place_name(PlaceId{static_cast<std::uint32_t>(v)})
                                         : net.transitions()[v - np].name;
        std::string why;
        if (!from_i[v]) why = "there is no path from " + iname + " to " + name;
        if (!to_f[v]) why += std::string(why.empty() ? "" : "; ") + "there is no path from " + name + " to " + fname;
        // i and f can both fail for the same missing i->f path; report it once.
        bool seen = std::any_of(out.begin(), out.end(), [&](const Violation& x) { return x.message == why; });
        if (!seen) out.push_back({K::NotOnPath, name, why});
    }
    return out;
}

inline std::vector<Violation> validate_workflow(const WorkflowNet& w, bool strict = false) {
    return validate_workflow(w.net, w.initial, w.final, strict);
}

/// Builds a WorkflowNet, throwing InputError listing all violations.
inline WorkflowNet make_workflow(ResetNet net, PlaceId i, PlaceId f, bool strict = false) {
    auto v = validate_workflow(net, i, f, strict);
    if (!v.empty()) {
        std::string msg = "not a workflow net:";
        for (const auto& x : v) msg += "\n  " + x.message;
        throw InputError(msg);
    }
    return WorkflowNet{std::move(net), i, f};
}

// ---------------------------------------------------------------------------
// Subnet removal

/// The net left after removing places Q and transitions S together with
/// any node left isolated, plus old->new index maps.
struct SubnetRemoval {
    ResetNet net;
    std::vector<std::optional<PlaceId>> place_map;
    std::vector<std::optional<TransId>> trans_map;
    std::vector<PlaceId> kept_places;      // new index -> old id
    std::vector<TransId> kept_transitions; // new index -> old id
};

[[nodiscard]] inline SubnetRemoval remove_subnet(const ResetNet& net, const PlaceSet& Q, const TransSet& S) {
    const std::size_t np = net.num_places();
    const std::size_t nt = net.num_transitions();
    // Neighbourhoods over F only; reset arcs are not arcs of F.
    auto place_neighbours_in_S = [&](std::uint32_t p) {
        for (std::uint32_t t = 0; t < nt; ++t) {
            const auto& tr = net.transitions()[t];
            if ((tr.pre[p] > 0 || tr.post[p] > 0) && S.count(TransId{t}) == 0U) return false;
        }
        return true;
    };
    auto trans_neighbours_in_Q = [&](std::uint32_t t) {
        const auto& tr = net.transitions()[t];
        for (std::uint32_t p = 0; p < np; ++p)
            if ((tr.pre[p] > 0 || tr.post[p] > 0) && Q.count(PlaceId{p}) == 0U) return false;
        return true;
    };

    SubnetRemoval r;
    r.place_map.assign(np, std::nullopt);
    r.trans_map.assign(nt, std::nullopt);
    for (std::uint32_t p = 0; p < np; ++p) {
        if (Q.count(PlaceId{p}) != 0U || place_neighbours_in_S(p)) continue;
        r.place_map[p] = r.net.add_place(net.place_name(PlaceId{p}));
        r.kept_places.push_back(PlaceId{p});
    }
    for (std::uint32_t t = 0; t < nt; ++t) {
        if (S.count(TransId{t}) != 0U || trans_neighbours_in_Q(t)) continue;
        const auto& tr = net.transitions()[t];
        Marking pre(r.kept_places.size()), post(r.kept_places.size());
        std::vector<PlaceId> resets;
        for (std::size_t q = 0; q < r.kept_places.size(); ++q) {
            PlaceId old = r.kept_places[q];
            pre[q] = tr.pre[old];
            post[q] = tr.post[old];
            if (net.resets(TransId{t}, old)) resets.push_back(PlaceId{static_cast<std::uint32_t>(q)});
        }
        r.trans_map[t] = r.net.add_transition(tr.name, std::move(pre), std::move(post), std::move(resets));
        r.kept_transitions.push_back(TransId{t});
    }
    return r;
}

/// Projects a marking of the original net onto the kept places.
[[nodiscard]] inline Marking restrict_marking(const SubnetRemoval& r, const Marking& m) {
    Marking out(r.kept_places.size());
    for (std::size_t q = 0; q < r.kept_places.size(); ++q) out[q] = m[r.kept_places[q]];
    return out;
}

/// Embeds a marking of the subnet into the original net (0 elsewhere).
[[nodiscard]] inline Marking embed_marking(const SubnetRemoval& r, std::size_t original_dim, const Marking& m) {
    Marking out(original_dim);
    for (std::size_t q = 0; q < r.kept_places.size(); ++q) out[r.kept_places[q]] = m[q];
    return out;
}

} // namespace resound
