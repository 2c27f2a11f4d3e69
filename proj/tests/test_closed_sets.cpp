#include <catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "resound/builtin.hpp"
#include "resound/closed_sets.hpp"

using namespace resound;

namespace {

bool in_up_brute(const std::vector<Marking>& ms, const Marking& m) {
    for (const auto& b : ms)
        if (oracle::geq(m, b)) return true;
    return false;
}

// Every marking with entries in [0, max].
std::vector<Marking> box(std::size_t dim, Count max) {
    std::vector<Marking> out{Marking(dim)};
    for (std::size_t p = 0; p < dim; ++p) {
        std::vector<Marking> next;
        for (const auto& m : out)
            for (Count c = 0; c <= max; ++c) {
                Marking n = m;
                n[p] = c;
                next.push_back(n);
            }
        out = std::move(next);
    }
    return out;
}

// Minimal elements, within a box, of markings that fire t to cover some b.
std::set<Marking> brute_pred(const ResetNet& net, TransId t, const UpSet& u, Count max) {
    std::vector<Marking> hits;
    for (const auto& m : box(net.num_places(), max)) {
        auto n = oracle::step(net, m, t);
        if (n && in_up_brute(u.basis(), *n)) hits.push_back(m);
    }
    std::set<Marking> minimal;
    for (const auto& a : hits) {
        bool dominated = false;
        for (const auto& b : hits) dominated = dominated || (a != b && oracle::geq(a, b));
        if (!dominated) minimal.insert(a);
    }
    return minimal;
}

std::set<Marking> within(const UpSet& u, Count max) {
    std::set<Marking> out;
    for (const auto& b : u.basis())
        if (std::all_of(b.begin(), b.end(), [&](Count c) { return c <= max; })) out.insert(b);
    return out;
}

} // namespace

TEST_CASE("minimize examples", "[closed]") {
    UpSet u = minimize({Marking{1, 0}, Marking{2, 0}, Marking{0, 1}});
    CHECK(u.basis() == std::vector<Marking>{Marking{0, 1}, Marking{1, 0}});
    UpSet e = minimize({});
    CHECK(e.empty());
    CHECK_FALSE(e.contains(Marking{0, 0}));
    CHECK(minimize(u.basis()).basis() == u.basis());
}

TEST_CASE("minimize agrees with pairwise comparison", "[closed][oracle]") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 20; ++round) {
        std::vector<Marking> ms;
        for (int k = 0; k < 100; ++k) ms.push_back(oracle::random_marking(rng, 3, 4));
        std::set<Marking> expect;
        for (const auto& a : ms) {
            bool dominated = false;
            for (const auto& b : ms) dominated = dominated || (a != b && oracle::geq(a, b));
            if (!dominated) expect.insert(a);
        }
        UpSet u = minimize(ms);
        CHECK(std::set<Marking>(u.basis().begin(), u.basis().end()) == expect);
        CHECK(std::is_sorted(u.basis().begin(), u.basis().end()));
        for (const auto& m : box(3, 5)) CHECK(u.contains(m) == in_up_brute(ms, m));
    }
}

TEST_CASE("omega arithmetic saturates", "[closed]") {
    CHECK(OmegaMarking::add(kOmega, 3) == kOmega);
    CHECK(OmegaMarking::sub(kOmega, 3) == kOmega);
    CHECK(OmegaMarking::add(2, 3) == 5);
    CHECK(leq(OmegaMarking{5, 0}, OmegaMarking{kOmega, 0}));
    CHECK_THROWS(to_marking(OmegaMarking{kOmega}));
}

TEST_CASE("complement examples", "[closed]") {
    DownSet d = complement_up_to_down(minimize({Marking{0, 1}}), 2);
    CHECK(d.ideals() == std::vector<OmegaMarking>{OmegaMarking{kOmega, 0}});

    DownSet d2 = complement_up_to_down(minimize({Marking{1, 1}}), 2);
    CHECK(d2.size() == 2);
    CHECK(std::count(d2.ideals().begin(), d2.ideals().end(), OmegaMarking{0, kOmega}) == 1);
    CHECK(std::count(d2.ideals().begin(), d2.ideals().end(), OmegaMarking{kOmega, 0}) == 1);

    UpSet u = minimize({Marking{2, 0}, Marking{0, 3}});
    DownSet d3 = complement_up_to_down(u, 2);
    for (const auto& m : box(2, 5)) CHECK(d3.contains(m) != u.contains(m));

    CHECK(complement_up_to_down(UpSet{}, 2).ideals() == std::vector<OmegaMarking>{OmegaMarking::top(2)});
    CHECK(complement_up_to_down(minimize({Marking{0, 0}}), 2).empty());
}

TEST_CASE("complement is exact on random upsets", "[closed][oracle]") {
    std::mt19937_64 rng(5);
    for (int round = 0; round < 60; ++round) {
        std::size_t dim = 2 + round % 2;
        std::vector<Marking> ms;
        int n = 1 + static_cast<int>(rng() % 4);
        for (int k = 0; k < n; ++k) ms.push_back(oracle::random_marking(rng, dim, 3));
        UpSet u = minimize(ms);
        DownSet d = complement_up_to_down(u, dim);
        for (std::size_t a = 0; a < d.size(); ++a)
            for (std::size_t b = 0; b < d.size(); ++b)
                if (a != b) CHECK_FALSE(leq(d.ideals()[a], d.ideals()[b]));
        for (const auto& m : box(dim, 5)) CHECK(d.contains(m) != in_up_brute(ms, m));
    }
}

TEST_CASE("pred_basis examples", "[closed]") {
    WorkflowNet w = builtin("fig2");
    const ResetNet& n2 = w.net;
    UpSet f1 = upset_of(w.final_marking(1));
    UpSet got = pred_basis(n2, n2.transition("u2"), f1);
    CHECK(got.basis() == std::vector<Marking>{n2.unit(n2.place("q2"))});
    CHECK(within(got, 2) == brute_pred(n2, n2.transition("u2"), f1, 2));

    ResetNet n1 = builtin_net("fig1").net;
    UpSet p4 = upset_of(n1.unit(n1.place("p4")));
    UpSet got1 = pred_basis(n1, n1.transition("t3"), p4);
    CHECK(got1.basis() == std::vector<Marking>{n1.unit(n1.place("p2"))});
    CHECK(within(got1, 2) == brute_pred(n1, n1.transition("t3"), p4, 2));

    ResetNet g;
    g.add_places({"a", "b"});
    TransId t = g.add_transition("gen", {}, {{"a", 2}});
    CHECK(pred_basis(g, t, upset_of(Marking{1, 0})).basis() == std::vector<Marking>{Marking{0, 0}});

    // A reset place needing more than the transition produces kills the element.
    TransId r = g.add_transition("r", {{"a", 1}}, {{"b", 1}}, {"b"});
    CHECK(pred_basis(g, r, upset_of(Marking{0, 2})).empty());
    CHECK(pred_basis(g, r, upset_of(Marking{3, 1})).basis() == std::vector<Marking>{Marking{4, 0}});
}

TEST_CASE("pred_basis is sound and minimal", "[closed][oracle]") {
    std::mt19937_64 rng(3);
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        RandomNetSpec spec;
        spec.max_places = 4;
        spec.reset_prob = 0.3;
        ResetNet net = random_reset_net(seed, spec);
        std::vector<Marking> ms;
        for (int k = 0; k < 2; ++k) ms.push_back(oracle::random_marking(rng, net.num_places(), 2));
        UpSet u = minimize(ms);
        for (TransId t : net.transition_ids()) {
            UpSet pb = pred_basis(net, t, u);
            for (const Marking& b : pb.basis()) {
                auto n = oracle::step(net, b, t);
                REQUIRE(n);
                CHECK(in_up_brute(ms, *n));
                for (std::size_t p = 0; p < b.size(); ++p) {
                    if (b[p] == 0) continue;
                    Marking d = b;
                    d[p] -= 1;
                    auto nd = oracle::step(net, d, t);
                    CHECK_FALSE((nd && in_up_brute(ms, *nd)));
                }
            }
            Count cap = net.num_places() <= 3 ? 4 : 3;
            CHECK(within(pb, cap) == brute_pred(net, t, u, cap));
        }
    }
}

TEST_CASE("mixed_contains", "[closed]") {
    // places f, p_all, q
    Atom a{Bound::at_least(1), Bound::at_least(1), Bound::at_most(0)};
    MixedTarget tgt{{a}};
    CHECK(mixed_contains(tgt, Marking{2, 1, 0}));
    CHECK_FALSE(mixed_contains(tgt, Marking{0, 3, 0}));
    CHECK_FALSE(mixed_contains(MixedTarget{}, Marking{0, 0, 0}));
    CHECK(mixed_contains(MixedTarget{{Atom{Bound::any(), Bound::any(), Bound::any()}}}, Marking{9, 9, 9}));
}

TEST_CASE("mixed_contains agrees with direct evaluation", "[closed][oracle]") {
    std::mt19937_64 rng(9);
    for (int round = 0; round < 300; ++round) {
        MixedTarget tgt;
        std::vector<std::vector<std::tuple<bool, Count>>> raw;
        int natoms = static_cast<int>(rng() % 3);
        for (int k = 0; k < natoms; ++k) {
            Atom a;
            std::vector<std::tuple<bool, Count>> r;
            for (int p = 0; p < 3; ++p) {
                bool most = (rng() & 1U) != 0U;
                Count v = rng() % 5 == 0 ? kOmega : rng() % 3;
                if (!most && v == kOmega) v = 2;
                a.push_back(most ? Bound::at_most(v) : Bound::at_least(v));
                r.emplace_back(most, v);
            }
            tgt.atoms.push_back(a);
            raw.push_back(r);
        }
        Marking m = oracle::random_marking(rng, 3, 3);
        bool expect = false;
        for (const auto& r : raw) {
            bool all = true;
            for (int p = 0; p < 3; ++p) {
                auto [most, v] = r[p];
                all = all && (most ? (v == kOmega || m[p] <= v) : m[p] >= v);
            }
            expect = expect || all;
        }
        CHECK(mixed_contains(tgt, m) == expect);
    }
}
