#include <catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "resound/builtin.hpp"
#include "resound/io.hpp"
#include "resound/soundness.hpp"

using namespace resound;

namespace {

using PS = PropertyRecord::Status;

// A witness is valid when it replays and the marking cannot reach {f:k}.
void check_witness(const WorkflowNet& w, const UnsoundWitness& wit) {
    Replay r = fire_run(w.net, w.initial_marking(wit.k), wit.run);
    REQUIRE(r);
    CHECK(r.marking == wit.marking);
    CHECK(can_complete_or_witness(w, wit.marking, wit.k).kind != Completion::Kind::Completes);
    auto rs = oracle::reach_set(w.net, wit.marking, 5000);
    if (rs) CHECK(rs->count(w.final_marking(wit.k)) == 0U);
}

WorkflowNet strip_resets(const WorkflowNet& w) {
    ResetNet n;
    for (const auto& p : w.net.place_names()) n.add_place(p);
    for (const auto& t : w.net.transitions()) n.add_transition(t.name, t.pre, t.post);
    return WorkflowNet{n, w.initial, w.final};
}

} // namespace

TEST_CASE("completion examples", "[soundness]") {
    WorkflowNet fig2 = builtin("fig2");
    Completion c = can_complete_or_witness(fig2, fig2.net.marking({{"q1", 1}, {"q2", 1}, {"q3", 1}}), 1);
    REQUIRE(c.kind == Completion::Kind::Completes);
    REQUIRE(c.run.size() == 1);
    std::string t = fig2.net.transition_name(c.run[0]);
    CHECK((t == "u1" || t == "u2"));
    CHECK(c.end == fig2.final_marking(1));

    CHECK(can_complete_or_witness(fig2, fig2.final_marking(1), 2).kind == Completion::Kind::CannotCover);

    WorkflowNet chain = builtin("chain");
    Marking over = chain.net.marking({{"f", 1}, {"i", 1}});
    Completion o = can_complete_or_witness(chain, over, 1);
    CHECK(o.kind == Completion::Kind::Overshoot);
    CHECK(o.run.empty());
    CHECK(o.end == over);
}

TEST_CASE("k_sound_semi", "[soundness]") {
    WorkflowNet fig2 = builtin("fig2");
    Verdict v1 = k_sound_semi(fig2, 1);
    CHECK(v1.kind == Verdict::Kind::Holds);
    CHECK(v1.explored == 6);

    Verdict v2 = k_sound_semi(fig2, 2);
    REQUIRE(v2.kind == Verdict::Kind::Fails);
    REQUIRE(v2.witness);
    CHECK(v2.witness->marking == fig2.final_marking(1));
    CHECK(io::format_run(fig2.net, v2.witness->run) == "s s t2 u2");
    check_witness(fig2, *v2.witness);

    WorkflowNet chain = builtin("chain");
    for (Count k = 1; k <= 5; ++k) CHECK(k_sound_semi(chain, k).kind == Verdict::Kind::Holds);

    WorkflowNet pump = builtin("pump");
    Verdict vp = k_sound_semi(pump, 1, Budget{1000, 5.0});
    CHECK(vp.kind != Verdict::Kind::Holds);
}

TEST_CASE("k_sound_exact_plain", "[soundness]") {
    WorkflowNet chain = builtin("chain");
    CHECK(k_sound_exact_plain(chain, 3).kind == Verdict::Kind::Holds);

    WorkflowNet pump = builtin("pump");
    Verdict vp = k_sound_exact_plain(pump, 1);
    REQUIRE(vp.kind == Verdict::Kind::Fails);
    REQUIRE(vp.witness);
    check_witness(pump, *vp.witness);

    WorkflowNet plain2 = strip_resets(builtin("fig2"));
    Verdict vf = k_sound_exact_plain(plain2, 1);
    REQUIRE(vf.kind == Verdict::Kind::Fails);
    check_witness(plain2, *vf.witness);
    CHECK(oracle::strict_cover(plain2, 1) == std::optional<bool>(true));

    CHECK_THROWS_AS(k_sound_exact_plain(builtin("fig2"), 1), PreconditionError);
}

TEST_CASE("k_sound_exact_plain agrees with the definition", "[soundness][oracle]") {
    int sound = 0, unsound = 0;
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        RandomNetSpec spec;
        spec.reset_prob = 0.0;
        spec.max_places = 5;
        spec.max_transitions = 5;
        WorkflowNet w = random_workflow_net(seed, spec);
        for (Count k = 1; k <= 2; ++k) {
            auto expect = oracle::k_sound(w, k, 5000);
            Verdict v = k_sound_exact_plain(w, k);
            INFO("seed " << seed << " k " << k);
            REQUIRE(v.kind != Verdict::Kind::Unknown);
            if (expect) CHECK((v.kind == Verdict::Kind::Holds) == *expect);
            else CHECK(v.kind == Verdict::Kind::Fails); // an unbounded net is never k-sound
            if (v.kind == Verdict::Kind::Fails) {
                ++unsound;
                check_witness(w, *v.witness);
            } else {
                ++sound;
            }
        }
    }
    CHECK(sound > 0);
    CHECK(unsound > 0);
}

TEST_CASE("coverability_clean", "[soundness]") {
    CHECK(coverability_clean(builtin("chain"), 1));
    ResetNet n;
    n.add_places({"i", "p", "f"});
    n.add_transition("t", {{"i", 1}}, {{"f", 1}, {"p", 1}});
    n.add_transition("u", {{"p", 1}}, {{"f", 1}});
    WorkflowNet w = make_workflow(n, n.place("i"), n.place("f"));
    CleanResult c = coverability_clean_detail(w, 1);
    CHECK_FALSE(c.clean);
    REQUIRE(c.witness);
    CHECK(strictly_less(w.final_marking(1), c.witness->marking));
    CHECK(coverability_clean(builtin("fig2"), 1));
}

TEST_CASE("coverability_clean agrees with strict-cover search", "[soundness][oracle]") {
    int clean = 0, dirty = 0;
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        WorkflowNet w = random_workflow_net(seed);
        for (Count k = 1; k <= 2; ++k) {
            auto sc = oracle::strict_cover(w, k, 5000);
            if (!sc) continue;
            INFO("seed " << seed << " k " << k);
            CHECK(coverability_clean(w, k) == !*sc);
            (*sc ? dirty : clean) += 1;
        }
    }
    CHECK(clean > 0);
    CHECK(dirty > 0);
}

TEST_CASE("full_reset_run", "[soundness]") {
    WorkflowNet rd = builtin("reset-diamond");
    RedundancyInfo info = redundancy_info(rd);
    SkeletonResult s = skeleton(rd, info);
    FullResetOutcome fr = full_reset_run(rd, info, s);
    REQUIRE(fr.run);
    Count z = 0;
    for (TransId t : info.nonredundant_transitions()) z += info.transitions[t.index]->k;
    CHECK(fr.run->z == z);
    CHECK(validate_full_reset_run(rd, info, s, *fr.run));
    CHECK(fire_run(rd.net, rd.initial_marking(fr.run->z), fr.run->zeta).marking == rd.final_marking(fr.run->z));
    for (const char* t : {"s", "u"})
        CHECK(std::count(fr.run->zeta.begin(), fr.run->zeta.end(), rd.net.transition(t)) >= 1);

    ResetNet n;
    n.add_places({"i", "p", "f"});
    n.add_transition("a", {{"i", 1}}, {{"p", 1}}, {"i"});
    n.add_transition("b", {{"p", 1}}, {{"f", 1}});
    WorkflowNet ri = make_workflow(n, n.place("i"), n.place("f"));
    RedundancyInfo ii = redundancy_info(ri);
    FullResetOutcome bad = full_reset_run(ri, ii, skeleton(ri, ii));
    CHECK_FALSE(bad.run);
    CHECK_FALSE(bad.explanation.empty());

    // Either branch must validate itself.
    WorkflowNet fig2 = builtin("fig2");
    RedundancyInfo fi = redundancy_info(fig2);
    SkeletonResult fs = skeleton(fig2, fi);
    FullResetOutcome ff = full_reset_run(fig2, fi, fs);
    if (ff.run)
        CHECK(validate_full_reset_run(fig2, fi, fs, *ff.run));
    else if (ff.witness)
        check_witness(fig2, *ff.witness);
}

TEST_CASE("skeleton_gs_check", "[soundness]") {
    CHECK(skeleton_gs_check(builtin("chain"), 5).kind == GsVerdict::Kind::HoldsProved);

    WorkflowNet rd = builtin("reset-diamond");
    SkeletonResult s = skeleton(rd, redundancy_info(rd));
    CHECK(skeleton_gs_check(s.workflow(), 3).kind == GsVerdict::Kind::HoldsProved);

    WorkflowNet m2 = builtin("merge2");
    CHECK(oracle::k_sound(m2, 1) == std::optional<bool>(true));
    CHECK(oracle::k_sound(m2, 2) == std::optional<bool>(false));
    GsVerdict g = skeleton_gs_check(m2, 3);
    REQUIRE(g.kind == GsVerdict::Kind::NotGS);
    CHECK(g.k == 2);
    REQUIRE(g.failing.witness);
    check_witness(m2, *g.failing.witness);
}

TEST_CASE("property (5)", "[soundness]") {
    WorkflowNet rd = builtin("reset-diamond");
    RedundancyInfo info = redundancy_info(rd);
    SkeletonResult s = skeleton(rd, info);
    Property5Query q = property5_query(rd, s);
    for (const auto& d : q.x_ideals.ideals()) CHECK(d[rd.final.index] == 0);
    Property5Result p = property5_check(rd, s, nullptr);
    CHECK(p.verdict.kind == Verdict::Kind::Holds);

    WorkflowNet st = builtin("stuck-skeleton");
    RedundancyInfo si = redundancy_info(st);
    SkeletonResult ss = skeleton(st, si);
    REQUIRE(ss.workflow_ok());
    FullResetOutcome fr = full_reset_run(st, si, ss);
    REQUIRE(fr.run);
    Property5Result ps = property5_check(st, ss, &*fr.run);
    REQUIRE(ps.verdict.kind == Verdict::Kind::Fails);
    REQUIRE(ps.j);
    Replay sk = fire_run(ss.net(), ss.net().unit(*ss.initial, *ps.j), ps.skeleton_run);
    REQUIRE(sk);
    CHECK(sk.marking[*ss.final] == 0);
    CHECK_FALSE(sk.marking.is_zero());
    REQUIRE(ps.verdict.witness);
    check_witness(st, *ps.verdict.witness);
}

TEST_CASE("pk_check examples", "[soundness]") {
    PkReport f2 = pk_check(builtin("fig2"), 1);
    CHECK(f2.overall == PkReport::Overall::NotGeneralisedSound);
    CHECK(f2.properties[2].status == PS::Fails);
    CHECK_FALSE(f2.skeleton.workflow_ok());

    PkReport rd = pk_check(builtin("reset-diamond"), 3);
    CHECK(rd.overall == PkReport::Overall::UpToKSound);
    for (const auto& p : rd.properties) CHECK(p.status == PS::Holds);
    CHECK(up_to_k(builtin("reset-diamond"), 3).kind == Verdict::Kind::Holds);

    CHECK(pk_check(builtin("chain"), 5).overall == PkReport::Overall::UpToKSound);

    PkReport st = pk_check(builtin("stuck-skeleton"), 1);
    CHECK(st.overall == PkReport::Overall::NotGeneralisedSound);
    CHECK(st.properties[4].status == PS::Fails);
    REQUIRE(st.properties[4].witness);
    check_witness(builtin("stuck-skeleton"), *st.properties[4].witness);

    CHECK_THROWS_AS(pk_check(builtin("chain"), 0), InputError);
}

TEST_CASE("failing properties carry valid witnesses", "[soundness]") {
    for (const auto& name : builtin_names()) {
        BuiltinNet b = builtin_net(name);
        if (!b.is_workflow()) continue;
        WorkflowNet w = b.workflow();
        PkReport r = pk_check(w, 2);
        INFO(name);
        for (const auto& p : r.properties)
            if (p.status == PS::Fails && p.witness) {
                if (p.witness->marking != w.final_marking(p.witness->k) &&
                    leq(w.final_marking(p.witness->k), p.witness->marking)) {
                    CHECK(fire_run(w.net, w.initial_marking(p.witness->k), p.witness->run).marking ==
                          p.witness->marking);
                } else {
                    check_witness(w, *p.witness);
                }
            }
    }
}

TEST_CASE("up_to_k", "[soundness]") {
    WorkflowNet fig2 = builtin("fig2");
    CHECK(up_to_k(fig2, 1).kind == Verdict::Kind::Holds);
    Verdict v = up_to_k(fig2, 2);
    REQUIRE(v.kind == Verdict::Kind::Fails);
    CHECK(v.witness->k == 2);
    CHECK(up_to_k(builtin("chain"), 4).kind == Verdict::Kind::Holds);
}

TEST_CASE("pk_check sits between up-to-k and generalised soundness", "[soundness][property]") {
    int agree = 0;
    for (std::uint64_t seed = 1; seed <= 80; ++seed) {
        RandomNetSpec spec;
        spec.max_places = 5;
        spec.max_transitions = 5;
        WorkflowNet w = random_workflow_net(seed, spec);
        const Count k = 2;
        Verdict u = up_to_k(w, k, Budget{20000, 5.0});
        PkReport p = pk_check(w, k, PkOptions{Budget{20000, 5.0}, 3, {}});
        INFO("seed " << seed);
        if (p.overall == PkReport::Overall::UpToKSound) CHECK(u.kind != Verdict::Kind::Fails);
        if (u.kind == Verdict::Kind::Fails) CHECK(p.overall != PkReport::Overall::UpToKSound);
        if (u.kind == Verdict::Kind::Holds)
            for (Count j = 1; j <= k; ++j) CHECK(coverability_clean(w, j));
        if (u.kind != Verdict::Kind::Unknown) ++agree;
    }
    CHECK(agree > 40);
}
