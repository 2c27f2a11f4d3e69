#pragma once

// Upward-closed sets (antichain bases), downward-closed sets (ideal
// covers over N ∪ {ω}) and mixed per-place constraint targets.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "resound/errors.hpp"
#include "resound/net.hpp"

namespace resound {

inline constexpr Count kOmega = std::numeric_limits<Count>::max();

/// A vector over N ∪ {ω}. ω is stored as kOmega, so the plain integer
/// order already places it above every natural.
class OmegaMarking {
public:
    OmegaMarking() = default;
    explicit OmegaMarking(std::size_t dim, Count fill = 0) : v_(dim, fill) {}
    explicit OmegaMarking(std::vector<Count> v) : v_(std::move(v)) {}
    explicit OmegaMarking(const Marking& m) : v_(m.counts()) {}
    OmegaMarking(std::initializer_list<Count> v) : v_(v) {}

    static OmegaMarking top(std::size_t dim) { return OmegaMarking(dim, kOmega); }

    [[nodiscard]] std::size_t size() const { return v_.size(); }
    Count operator[](std::size_t p) const { return v_[p]; }
    Count& operator[](std::size_t p) { return v_[p]; }
    Count operator[](PlaceId p) const { return v_[p.index]; }
    [[nodiscard]] bool is_omega(std::size_t p) const { return v_[p] == kOmega; }
    [[nodiscard]] bool has_omega() const { return std::find(v_.begin(), v_.end(), kOmega) != v_.end(); }
    [[nodiscard]] const std::vector<Count>& values() const { return v_; }

    /// Saturating: ω + n = ω.
    static Count add(Count a, Count b) {
        if (a == kOmega || b == kOmega) return kOmega;
        if (a > kOmega - 1 - b) throw InputError("token count overflow");
        return a + b;
    }
    /// Saturating: ω - n = ω. Requires b <= a for finite a.
    static Count sub(Count a, Count b) { return a == kOmega ? kOmega : a - b; }

    friend bool operator==(const OmegaMarking&, const OmegaMarking&) = default;
    friend auto operator<=>(const OmegaMarking&, const OmegaMarking&) = default;

private:
    std::vector<Count> v_;
};

inline bool leq(const OmegaMarking& a, const OmegaMarking& b) {
    for (std::size_t p = 0; p < a.size(); ++p)
        if (a[p] > b[p]) return false;
    return true;
}

inline bool leq(const Marking& a, const OmegaMarking& b) {
    for (std::size_t p = 0; p < a.size(); ++p)
        if (a[p] > b[p]) return false;
    return true;
}

/// The finite marking equal to `o` on finite coordinates; throws on ω.
inline Marking to_marking(const OmegaMarking& o) {
    if (o.has_omega()) throw InputError("marking contains ω");
    return Marking(o.values());
}

// ---------------------------------------------------------------------------

/// Upward-closed set given by its minimal elements, stored sorted
/// lexicographically.
class UpSet {
public:
    UpSet() = default;

    [[nodiscard]] const std::vector<Marking>& basis() const { return basis_; }
    [[nodiscard]] bool empty() const { return basis_.empty(); }
    [[nodiscard]] std::size_t size() const { return basis_.size(); }

    [[nodiscard]] bool contains(const Marking& m) const {
        return std::any_of(basis_.begin(), basis_.end(), [&](const Marking& b) { return leq(b, m); });
    }

    /// First basis element (in stored order) below m.
    [[nodiscard]] std::optional<std::size_t> witness(const Marking& m) const {
        for (std::size_t k = 0; k < basis_.size(); ++k)
            if (leq(basis_[k], m)) return k;
        return std::nullopt;
    }

    friend bool operator==(const UpSet&, const UpSet&) = default;
    friend UpSet minimize(std::vector<Marking> ms);

private:
    std::vector<Marking> basis_;
};

/// ≤-minimal elements of ms, deduplicated and sorted.
inline UpSet minimize(std::vector<Marking> ms) {
    std::sort(ms.begin(), ms.end(), [](const Marking& a, const Marking& b) {
        auto ta = a.total(), tb = b.total();
        return ta != tb ? ta < tb : a < b;
    });
    ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
    // With ties broken by total, a dominating element always precedes the
    // elements it dominates.
    UpSet u;
    for (auto& m : ms) {
        bool dominated = std::any_of(u.basis_.begin(), u.basis_.end(), [&](const Marking& b) { return leq(b, m); });
        if (!dominated) u.basis_.push_back(std::move(m));
    }
    std::sort(u.basis_.begin(), u.basis_.end());
    return u;
}

inline UpSet upset_of(const Marking& m) { return minimize({m}); }

// ---------------------------------------------------------------------------

/// Downward-closed set given by maximal ideals, stored sorted.
class DownSet {
public:
    DownSet() = default;

    [[nodiscard]] const std::vector<OmegaMarking>& ideals() const { return ideals_; }
    [[nodiscard]] bool empty() const { return ideals_.empty(); }
    [[nodiscard]] std::size_t size() const { return ideals_.size(); }

    [[nodiscard]] bool contains(const Marking& m) const {
        return std::any_of(ideals_.begin(), ideals_.end(), [&](const OmegaMarking& d) { return leq(m, d); });
    }

    friend bool operator==(const DownSet&, const DownSet&) = default;
    friend DownSet maximize(std::vector<OmegaMarking> ds);

private:
    std::vector<OmegaMarking> ideals_;
};

/// ≤-maximal elements of ds, deduplicated and sorted.
inline DownSet maximize(std::vector<OmegaMarking> ds) {
    std::sort(ds.begin(), ds.end());
    ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
    DownSet d;
    for (std::size_t a = 0; a < ds.size(); ++a) {
        bool dominated = false;
        for (std::size_t b = 0; b < ds.size() && !dominated; ++b)
            dominated = a != b && leq(ds[a], ds[b]);
        if (!dominated) d.ideals_.push_back(ds[a]);
    }
    return d;
}

/// N^dim minus ↑u, as a finite union of ideals. Throws BudgetExceeded when
/// an intermediate cover exceeds `max_ideals`.
inline DownSet complement_up_to_down(const UpSet& u, std::size_t dim, std::size_t max_ideals = 100'000) {
    std::vector<OmegaMarking> cur{OmegaMarking::top(dim)};
    for (const Marking& b : u.basis()) {
        if (b.size() != dim) throw InputError("basis element has the wrong dimension");
        std::vector<OmegaMarking> next;
        for (const auto& d : cur) {
            if (!leq(b, d)) {
                // d and ↑b are disjoint already.
                next.push_back(d);
                continue;
            }
            for (std::size_t p = 0; p < dim; ++p) {
                if (b[p] == 0) continue;
                OmegaMarking e = d;
                e[p] = std::min(d[p], b[p] - 1);
                next.push_back(std::move(e));
            }
        }
        if (next.size() > max_ideals)
            throw BudgetExceeded("complement exceeds " + std::to_string(max_ideals) + " ideals");
        cur = maximize(std::move(next)).ideals();
    }
    return maximize(std::move(cur));
}

// ---------------------------------------------------------------------------

/// One per-place constraint of a mixed target atom.
struct Bound {
    enum class Kind { AtMost, AtLeast };
    Kind kind = Kind::AtMost;
    Count value = kOmega;

    static Bound at_most(Count b) { return {Kind::AtMost, b}; }
    static Bound at_least(Count l) { return {Kind::AtLeast, l}; }
    static Bound any() { return at_most(kOmega); }

    [[nodiscard]] bool holds(Count c) const { return kind == Kind::AtMost ? c <= value : c >= value; }

    friend bool operator==(const Bound&, const Bound&) = default;
};

/// Conjunction of one bound per place.
using Atom = std::vector<Bound>;

/// Union of atoms.
struct MixedTarget {
    std::vector<Atom> atoms;
};

inline bool atom_contains(const Atom& a, const Marking& m) {
    if (a.size() != m.size()) throw InputError("atom and marking dimensions differ");
    for (std::size_t p = 0; p < m.size(); ++p)
        if (!a[p].holds(m[p])) return false;
    return true;
}

inline bool mixed_contains(const MixedTarget& tgt, const Marking& m) {
    return std::any_of(tgt.atoms.begin(), tgt.atoms.end(), [&](const Atom& a) { return atom_contains(a, m); });
}

// ---------------------------------------------------------------------------

/// The least marking m with fire(m, t) >= b, or nullopt when no such m
/// exists because t resets a place that b needs more of than t produces.
inline std::optional<Marking> pred_one(const ResetNet& net, TransId t, const Marking& b) {
    const Transition& tr = net[t];
    for (PlaceId p : tr.resets)
        if (b[p] > tr.post[p]) return std::nullopt;
    Marking m(b.size());
    for (std::size_t p = 0; p < b.size(); ++p) {
        Count need = b[p] > tr.post[p] ? b[p] - tr.post[p] : 0;
        m[p] = tr.pre[p] + need;
    }
    for (PlaceId p : tr.resets) m[p] = tr.pre[p];
    return m;
}

inline UpSet pred_basis(const ResetNet& net, TransId t, const UpSet& u) {
    std::vector<Marking> out;
    for (const Marking& b : u.basis())
        if (auto m = pred_one(net, t, b)) out.push_back(std::move(*m));
    return minimize(std::move(out));
}

} // namespace resound
