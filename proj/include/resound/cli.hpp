#pragma once

// The `resound` command line: argument handling, reports, exit codes.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "resound/builtin.hpp"
#include "resound/closed_sets.hpp"
#include "resound/cover.hpp"
#include "resound/errors.hpp"
#include "resound/io.hpp"
#include "resound/minsky.hpp"
#include "resound/net.hpp"
#include "resound/random.hpp"
#include "resound/reach.hpp"
#include "resound/soundness.hpp"
#include "resound/structure.hpp"

namespace resound::cli {

inline constexpr const char* kVersion = "0.1.0";

enum Exit : int { kHolds = 0, kFails = 1, kUnknown = 2, kInputError = 3 };

using io::Json;

struct Config {
    Count k = 1;
    std::size_t budget_states = 1'000'000;
    double budget_secs = 30;
    Count kmax_gs = 3;
    std::string format = "text";
    bool lenient = false;
    bool strict = false;
    std::uint64_t seed = 1;

    [[nodiscard]] Budget budget() const { return Budget{budget_states, budget_secs}; }
};

/// FNV-1a, 64 bit.
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline Json digest(const ResetNet& net, std::optional<PlaceId> i, std::optional<PlaceId> f) {
    std::ostringstream h;
    h << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(io::emit_net(net, i, f));
    return Json{{"places", net.num_places()}, {"transitions", net.num_transitions()}, {"fnv1a64", h.str()}};
}

namespace detail {

inline Json witness_json(const ResetNet& net, const UnsoundWitness& w) {
    return Json{{"k", w.k}, {"run", io::run_json(net, w.run)}, {"marking", io::format_marking(net, w.marking)}};
}

/// Replays a witness and confirms the end marking cannot reach {f:k}.
inline void verify_witness(const WorkflowNet& w, const UnsoundWitness& wit) {
    Replay r = fire_run(w.net, w.initial_marking(wit.k), wit.run);
    if (!r || r.marking != wit.marking) throw ConsistencyError("witness does not replay to its marking");
    if (can_complete_or_witness(w, wit.marking, wit.k).kind == Completion::Kind::Completes)
        throw ConsistencyError("witness marking can still complete");
}

/// A strict cover of {f:k}: replays and ends strictly above it.
inline void verify_strict_cover(const WorkflowNet& w, const UnsoundWitness& wit) {
    Replay r = fire_run(w.net, w.initial_marking(wit.k), wit.run);
    Marking goal = w.final_marking(wit.k);
    if (!r || r.marking != wit.marking || !strictly_less(goal, wit.marking))
        throw ConsistencyError("strict-cover witness does not replay");
}

inline Json budget_json(const BudgetReport& b) {
    Json j{{"states", b.states}, {"seconds", b.seconds}, {"exhausted", !b.exhausted.empty()}};
    if (!b.exhausted.empty()) j["reason"] = b.exhausted;
    return j;
}

inline Json verdict_json(const WorkflowNet& w, const Verdict& v) {
    Json j{{"verdict", to_string(v.kind)}, {"reason", v.reason}, {"explored", v.explored}};
    if (v.witness) {
        verify_witness(w, *v.witness);
        j["witness"] = witness_json(w.net, *v.witness);
    }
    j["budget"] = budget_json(v.budget);
    return j;
}

inline int exit_of(Verdict::Kind k) {
    switch (k) {
    case Verdict::Kind::Holds: return kHolds;
    case Verdict::Kind::Fails: return kFails;
    case Verdict::Kind::Unknown: return kUnknown;
    }
    return kUnknown;
}

inline Json violations_json(const std::vector<Violation>& vs) {
    Json a = Json::array();
    for (const auto& v : vs) a.push_back(Json{{"kind", to_string(v.kind)}, {"subject", v.subject}, {"message", v.message}});
    return a;
}

inline Json names(const ResetNet& net, const PlaceSet& s) {
    Json a = Json::array();
    for (PlaceId p : s) a.push_back(net.place_name(p));
    return a;
}

inline void render_text(std::ostream& out, const Json& j, int indent) {
    std::string pad(static_cast<std::size_t>(indent), ' ');
    for (const auto& [k, v] : j.items()) {
        if (v.is_object() && !v.empty()) {
            out << pad << k << ":\n";
            render_text(out, v, indent + 2);
        } else if (v.is_string()) {
            out << pad << k << ": " << v.get<std::string>() << "\n";
        } else if (v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_string(); })) {
            out << pad << k << ":";
            for (const auto& e : v) out << " " << e.get<std::string>();
            out << "\n";
        } else if (v.is_array() && !v.empty() && v.front().is_object()) {
            out << pad << k << ":\n";
            for (const auto& e : v) {
                out << pad << "  -\n";
                render_text(out, e, indent + 4);
            }
        } else {
            out << pad << k << ": " << v.dump() << "\n";
        }
    }
}

struct Context {
    Config cfg;
    std::vector<std::string> argv;
    std::ostream& out;
    std::ostream& err;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    std::optional<Json> net_digest;
};

inline void report(Context& cx, const std::string& command, const Json& payload) {
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - cx.t0).count();
    if (cx.cfg.format == "json") {
        Json r;
        r["command"] = command;
        r["argv"] = cx.argv;
        r["net"] = cx.net_digest ? *cx.net_digest : Json(nullptr);
        r["result"] = payload;
        r["timing"] = Json{{"seconds", secs}};
        r["version"] = kVersion;
        cx.out << r.dump(2) << "\n";
    } else {
        render_text(cx.out, payload, 0);
    }
}

inline io::LoadedNet load(Context& cx, const std::string& path) {
    io::LoadedNet n = io::load_net(path, io::ParseOptions{cx.cfg.lenient, cx.cfg.strict});
    cx.net_digest = digest(n.net, n.initial, n.final);
    return n;
}

inline WorkflowNet load_workflow(Context& cx, const std::string& path) {
    io::LoadedNet n = load(cx, path);
    if (!n.workflow) throw InputError(path + ": this command needs a workflow net (give 'initial' and 'final')");
    if (!n.violations.empty()) {
        std::string msg = path + ": not a workflow net:";
        for (const auto& v : n.violations) msg += "\n  " + v.message;
        throw InputError(msg);
    }
    return n.workflow_net();
}

// ---------------------------------------------------------------------------

inline int cmd_validate(Context& cx, const std::string& path) {
    io::LoadedNet n = load(cx, path);
    Json p{{"kind", n.workflow ? "workflow" : "petri"},
           {"places", n.net.num_places()},
           {"transitions", n.net.num_transitions()},
           {"valid", n.violations.empty()},
           {"violations", violations_json(n.violations)}};
    report(cx, "validate", p);
    return n.violations.empty() ? kHolds : kFails;
}

inline int cmd_simulate(Context& cx, const std::string& path, const std::string& from, const std::string& run_text,
                        bool trace, bool tuple) {
    io::LoadedNet n = load(cx, path);
    Marking start;
    if (!from.empty())
        start = io::parse_marking(n.net, from);
    else if (n.initial)
        start = n.net.unit(*n.initial, cx.cfg.k);
    else
        throw InputError("--from is required for nets without an initial place");
    Run run = io::parse_run(n.net, run_text);
    auto fmt = [&](const Marking& m) { return tuple ? io::format_tuple(m) : io::format_marking(n.net, m); };

    Replay r = fire_run(n.net, start, run);
    Json p;
    p["start"] = fmt(start);
    if (trace) {
        Json steps = Json::array();
        Marking cur = start;
        std::size_t upto = r ? run.size() : *r.disabled_at;
        for (std::size_t s = 0; s < upto; ++s) {
            cur = *fire(n.net, cur, run[s]);
            steps.push_back(Json{{"fire", n.net.transition_name(run[s])}, {"marking", fmt(cur)}});
        }
        p["trace"] = steps;
    }
    if (r) {
        p["end"] = fmt(r.marking);
    } else {
        p["disabled_at"] = *r.disabled_at;
        p["transition"] = n.net.transition_name(run[*r.disabled_at]);
        p["marking"] = fmt(r.marking);
    }

    if (cx.cfg.format == "text" && !trace) {
        if (r)
            cx.out << fmt(r.marking) << "\n";
        else
            cx.out << "disabled at step " << *r.disabled_at << " (" << n.net.transition_name(run[*r.disabled_at])
                   << ") in " << fmt(r.marking) << "\n";
    } else if (cx.cfg.format == "text") {
        cx.out << fmt(start) << "\n";
        for (const auto& s : p["trace"]) cx.out << "  --" << s["fire"].get<std::string>() << "--> " << s["marking"].get<std::string>() << "\n";
        if (!r) cx.out << "disabled at step " << *r.disabled_at << " (" << n.net.transition_name(run[*r.disabled_at]) << ")\n";
    } else {
        report(cx, "simulate", p);
    }
    return r ? kHolds : kFails;
}

inline int cmd_cover(Context& cx, const std::string& path, const std::string& target, const std::string& from) {
    io::LoadedNet n = load(cx, path);
    Marking tgt = io::parse_marking(n.net, target);
    CoverBasis cb = backward_cover(n.net, tgt);
    Json p{{"target", io::format_marking(n.net, tgt)}, {"basis", io::upset_json(n.net, cb.basis)}};
    int code = kHolds;
    if (!from.empty()) {
        Marking m = io::parse_marking(n.net, from);
        p["from"] = io::format_marking(n.net, m);
        auto run = extract_covering_run(cb, n.net, m);
        if (run) {
            Replay r = fire_run(n.net, m, *run);
            if (!r || !leq(tgt, r.marking)) throw ConsistencyError("covering run does not cover the target");
            p["run"] = io::run_json(n.net, *run);
            p["end"] = io::format_marking(n.net, r.marking);
        } else {
            p["run"] = nullptr;
            code = kFails;
        }
    }
    report(cx, "cover", p);
    return code;
}

inline int cmd_reach(Context& cx, const std::string& path, const std::string& target_file, const std::string& from) {
    io::LoadedNet n = load(cx, path);
    MixedTarget tgt = io::parse_target(io::Document(io::read_file(target_file), target_file), n.net);
    Marking m0;
    if (!from.empty())
        m0 = io::parse_marking(n.net, from);
    else if (n.initial)
        m0 = n.net.unit(*n.initial, cx.cfg.k);
    else
        throw InputError("--from is required for nets without an initial place");
    ReachVerdict v = decide_mixed_reach(n.net, m0, tgt, cx.cfg.budget());
    Json p{{"verdict", to_string(v.kind)}, {"from", io::format_marking(n.net, m0)}};
    if (v.kind == ReachVerdict::Kind::Found) {
        Replay r = fire_run(n.net, m0, v.run);
        if (!r || !mixed_contains(tgt, r.marking)) throw ConsistencyError("reachability witness does not replay");
        p["run"] = io::run_json(n.net, v.run);
        p["reached"] = io::format_marking(n.net, v.reached);
    }
    if (v.kind == ReachVerdict::Kind::Unreachable) {
        Json certs = Json::array();
        for (const auto& c : v.certificates)
            certs.push_back(Json{{"atom", c.atom}, {"certificate", to_string(c.kind)}});
        p["certificates"] = certs;
    }
    p["budget"] = budget_json(v.budget);
    report(cx, "reach", p);
    return v.kind == ReachVerdict::Kind::Found ? kHolds : v.kind == ReachVerdict::Kind::Unreachable ? kFails : kUnknown;
}

inline Json redundancy_json(const WorkflowNet& w, const RedundancyInfo& info) {
    Json places = Json::array(), trans = Json::array();
    for (std::uint32_t p = 0; p < info.places.size(); ++p) {
        Json e{{"name", w.net.place_name(PlaceId{p})}, {"redundant", !info.places[p]}};
        if (info.places[p]) {
            e["k"] = info.places[p]->k;
            e["run"] = io::run_json(w.net, info.places[p]->run);
        }
        places.push_back(e);
    }
    for (std::uint32_t t = 0; t < info.transitions.size(); ++t) {
        Json e{{"name", w.net.transition_name(TransId{t})}, {"redundant", !info.transitions[t]}};
        if (info.transitions[t]) {
            e["k"] = info.transitions[t]->k;
            e["run"] = io::run_json(w.net, info.transitions[t]->run);
        }
        trans.push_back(e);
    }
    return Json{{"places", places}, {"transitions", trans}};
}

inline int cmd_redundancy(Context& cx, const std::string& path) {
    WorkflowNet w = load_workflow(cx, path);
    RedundancyInfo info = redundancy_info(w);
    for (std::uint32_t p = 0; p < info.places.size(); ++p) {
        if (!info.places[p]) continue;
        Replay r = fire_run(w.net, w.initial_marking(info.places[p]->k), info.places[p]->run);
        if (!r || r.marking[p] == 0) throw ConsistencyError("redundancy witness does not mark its place");
    }
    report(cx, "redundancy", redundancy_json(w, info));
    return kHolds;
}

inline Json skeleton_json(const WorkflowNet& w, const SkeletonResult& s) {
    Json ts = Json::array();
    for (TransId t : s.removal.kept_transitions) ts.push_back(w.net.transition_name(t));
    Json ps = Json::array();
    for (PlaceId p : s.removal.kept_places) ps.push_back(w.net.place_name(p));
    Json j{{"places", ps}, {"transitions", ts}, {"resetable", names(w.net, s.resetable)}};
    j["workflow_status"] = s.workflow_ok() ? Json("ok") : Json("violations");
    j["violations"] = violations_json(s.violations);
    j["net"] = io::net_json(s.net(), s.initial && s.final ? s.initial : std::nullopt,
                            s.initial && s.final ? s.final : std::nullopt);
    return j;
}

inline int cmd_skeleton(Context& cx, const std::string& path) {
    WorkflowNet w = load_workflow(cx, path);
    RedundancyInfo info = redundancy_info(w);
    SkeletonResult s = skeleton(w, info);
    report(cx, "skeleton", skeleton_json(w, s));
    return s.workflow_ok() ? kHolds : kFails;
}

inline Json pk_json(const WorkflowNet& w, const PkReport& r) {
    Json props = Json::array();
    for (std::size_t k = 0; k < r.properties.size(); ++k) {
        const auto& p = r.properties[k];
        Json e{{"property", "P" + std::to_string(k + 1)}, {"status", to_string(p.status)}, {"evidence", p.evidence}};
        if (p.witness) {
            if (k == 3)
                verify_strict_cover(w, *p.witness);
            else
                verify_witness(w, *p.witness);
            e["witness"] = witness_json(w.net, *p.witness);
        }
        props.push_back(e);
    }
    Json j{{"overall", to_string(r.overall)}, {"k", r.k}, {"justification", r.justification}, {"properties", props}};
    if (r.k_hint) j["k_hint"] = *r.k_hint;
    if (r.frr)
        j["full_reset_run"] = Json{{"z", r.frr->z}, {"run", io::run_json(w.net, r.frr->zeta)}};
    return j;
}

inline int cmd_check(Context& cx, const std::string& path, const std::string& property) {
    WorkflowNet w = load_workflow(cx, path);
    const Count k = cx.cfg.k;
    if (property == "ksound" || property == "upto" || property == "exact") {
        Verdict v = property == "ksound" ? k_sound_semi(w, k, cx.cfg.budget())
                    : property == "upto" ? up_to_k(w, k, cx.cfg.budget())
                                         : k_sound_exact_plain(w, k, KMOptions{cx.cfg.budget_states, false});
        Json p{{"property", property}, {"k", k}};
        p.update(verdict_json(w, v));
        report(cx, "check", p);
        return exit_of(v.kind);
    }
    if (property == "clean") {
        CleanResult c = coverability_clean_detail(w, k);
        Json p{{"property", property}, {"k", k}, {"verdict", c.clean ? "holds" : "fails"}};
        if (!c.clean) {
            verify_strict_cover(w, *c.witness);
            p["extra_place"] = w.net.place_name(*c.place);
            p["witness"] = witness_json(w.net, *c.witness);
        }
        report(cx, "check", p);
        return c.clean ? kHolds : kFails;
    }
    if (property == "pk") {
        PkOptions opt;
        opt.budget = cx.cfg.budget();
        opt.kmax_gs = cx.cfg.kmax_gs;
        opt.km.max_nodes = cx.cfg.budget_states;
        PkReport r = pk_check(w, k, opt);
        Json p{{"property", property}};
        p.update(pk_json(w, r));
        report(cx, "check", p);
        switch (r.overall) {
        case PkReport::Overall::UpToKSound: return kHolds;
        case PkReport::Overall::NotGeneralisedSound: return kFails;
        case PkReport::Overall::Unknown: return kUnknown;
        }
    }
    throw InputError("unknown property '" + property + "' (expected ksound, upto, clean, pk or exact)");
}

inline int emit_generated(Context& cx, const std::string& what, const std::string& text, const std::string& out_path,
                          const ResetNet& net, std::optional<PlaceId> i, std::optional<PlaceId> f) {
    cx.net_digest = digest(net, i, f);
    if (out_path.empty()) {
        cx.out << text;
        return kHolds;
    }
    std::ofstream o(out_path, std::ios::binary);
    if (!o) throw InputError("cannot write '" + out_path + "'");
    o << text;
    report(cx, "generate", Json{{"generated", what}, {"output", out_path}});
    return kHolds;
}

} // namespace detail

/// Runs one command line (without the program name). Output goes to `out`,
/// diagnostics to `err`; returns the process exit code.
inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Soundness analysis for reset workflow nets", "resound"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", kVersion);

    Config cfg;
    if (const char* env = std::getenv("RESOUND_BUDGET_SECS")) {
        try {
            cfg.budget_secs = std::stod(env);
        } catch (const std::exception&) {
            err << "error: RESOUND_BUDGET_SECS is not a number\n";
            return kInputError;
        }
    }
    app.add_option("--k", cfg.k, "Token count k (>= 1)")->check(CLI::PositiveNumber);
    app.add_option("--budget,--budget-states", cfg.budget_states, "State budget for searches")
        ->check(CLI::PositiveNumber);
    app.add_option("--budget-secs", cfg.budget_secs, "Wall-clock budget in seconds per search")
        ->check(CLI::PositiveNumber);
    app.add_option("--kmax-gs", cfg.kmax_gs, "Largest k tried when checking the skeleton")->check(CLI::PositiveNumber);
    app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    app.add_flag("--lenient", cfg.lenient, "Accept workflow nets that violate the workflow conditions");
    app.add_flag("--strict", cfg.strict, "Require arc weights in {0,1} for workflow nets");
    app.add_option("--seed", cfg.seed, "Seed for random generation");

    std::string net, from, run, target, target_file, property, out_path, gen_arg;
    bool trace = false, tuple = false;

    auto* validate = app.add_subcommand("validate", "Check a net file and its workflow conditions");
    validate->add_option("net", net, "Net file")->required();

    auto* simulate = app.add_subcommand("simulate", "Replay a run");
    simulate->add_option("net", net, "Net file")->required();
    simulate->add_option("--from", from, "Start marking, e.g. '{i:2}'");
    simulate->add_option("--run", run, "Transition names separated by spaces or commas");
    simulate->add_flag("--trace", trace, "Print every intermediate marking");
    simulate->add_flag("--tuple", tuple, "Print markings as positional tuples");

    auto* cover = app.add_subcommand("cover", "Backward coverability basis");
    cover->add_option("net", net, "Net file")->required();
    cover->add_option("--target", target, "Marking to cover")->required();
    cover->add_option("--from", from, "Extract a covering run from this marking");

    auto* reach = app.add_subcommand("reach", "Reachability of a mixed target in a net without resets");
    reach->add_option("net", net, "Net file")->required();
    reach->add_option("--target-file", target_file, "Target atoms (JSON)")->required();
    reach->add_option("--from", from, "Start marking (default {i:k})");

    auto* redundancy = app.add_subcommand("redundancy", "Redundant places and transitions");
    redundancy->add_option("net", net, "Net file")->required();

    auto* skel = app.add_subcommand("skeleton", "Skeleton of a reset workflow net");
    skel->add_option("net", net, "Net file")->required();

    auto* check = app.add_subcommand("check", "Soundness checks");
    check->add_option("net", net, "Net file")->required();
    check->add_option("--property", property, "ksound | upto | clean | pk | exact")
        ->required()
        ->check(CLI::IsMember({"ksound", "upto", "clean", "pk", "exact"}));

    auto* generate = app.add_subcommand("generate", "Generate nets");
    generate->require_subcommand(1);
    generate->fallthrough();
    generate->add_option("-o,--output", out_path, "Write the net here instead of standard output");
    auto* g_minsky = generate->add_subcommand("minsky", "Reset workflow net from a two-counter machine");
    g_minsky->add_option("machine", gen_arg, "Machine file")->required();
    auto* g_builtin = generate->add_subcommand("builtin", "A named example net");
    g_builtin->add_option("name", gen_arg, "Builtin name")->required();
    auto* g_random = generate->add_subcommand("random", "A random workflow net (see --seed)");
    (void)g_random;

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kHolds;
    } catch (const CLI::CallForVersion& e) {
        out << kVersion << "\n";
        return kHolds;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kInputError;
    }

    detail::Context cx{cfg, args, out, err, std::chrono::steady_clock::now(), std::nullopt};
    try {
        if (*validate) return detail::cmd_validate(cx, net);
        if (*simulate) return detail::cmd_simulate(cx, net, from, run, trace, tuple);
        if (*cover) return detail::cmd_cover(cx, net, target, from);
        if (*reach) return detail::cmd_reach(cx, net, target_file, from);
        if (*redundancy) return detail::cmd_redundancy(cx, net);
        if (*skel) return detail::cmd_skeleton(cx, net);
        if (*check) return detail::cmd_check(cx, net, property);
        if (*generate) {
            if (*g_minsky) {
                MinskyMachine m = io::parse_machine(io::read_file(gen_arg), gen_arg);
                WorkflowNet w = minsky_to_rwf(m);
                return detail::emit_generated(cx, "minsky", io::emit_net(w), out_path, w.net, w.initial, w.final);
            }
            if (*g_builtin) {
                BuiltinNet b = builtin_net(gen_arg);
                return detail::emit_generated(cx, "builtin " + gen_arg, io::emit_net(b.net, b.initial, b.final),
                                              out_path, b.net, b.initial, b.final);
            }
            WorkflowNet w = random_workflow_net(cfg.seed);
            return detail::emit_generated(cx, "random seed " + std::to_string(cfg.seed), io::emit_net(w), out_path,
                                          w.net, w.initial, w.final);
        }
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const BudgetExceeded& e) {
        err << "budget exceeded: " << e.what() << "\n";
        return kUnknown;
    } catch (const ConsistencyError& e) {
        err << "internal consistency check failed: " << e.what() << "\n";
        return kUnknown;
    }
    return kInputError;
}

} // namespace resound::cli
