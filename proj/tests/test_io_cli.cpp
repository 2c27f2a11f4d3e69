#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "resound/builtin.hpp"
#include "resound/cli.hpp"
#include "resound/io.hpp"

using namespace resound;
namespace fs = std::filesystem;

namespace {

std::string nets_dir() {
    const char* d = std::getenv("RESOUND_NETS_DIR");
    return d != nullptr ? d : "nets";
}

std::string net(const std::string& name) { return nets_dir() + "/" + name; }

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

io::Json run_json(std::vector<std::string> args, int expect_code) {
    args.insert(args.begin(), {"--format", "json"});
    Outcome o = run(args);
    INFO(o.err);
    REQUIRE(o.code == expect_code);
    return io::Json::parse(o.out);
}

std::string temp_file(const std::string& name, const std::string& content) {
    fs::path p = fs::temp_directory_path() / ("resound-test-" + name);
    std::ofstream(p) << content;
    return p.string();
}

} // namespace

TEST_CASE("parse_net", "[io]") {
    io::LoadedNet fig2 = io::load_net(net("fig2.json"));
    REQUIRE(fig2.workflow);
    CHECK(fig2.net.num_places() == 7);
    CHECK(fig2.workflow_net().net == builtin("fig2").net);

    io::LoadedNet petri = io::parse_net(R"({"places": ["a", "b"], "transitions": [
        {"name": "t", "pre": {"a": 1}, "post": {"b": 2}, "reset": []}]})");
    CHECK_FALSE(petri.workflow);
    CHECK(petri.net.num_transitions() == 1);
}

TEST_CASE("parse_net diagnostics point at the offending token", "[io]") {
    const std::string dup = "{\n  \"places\": [\"a\", \"a\"],\n  \"transitions\": []\n}";
    try {
        io::parse_net(dup, "dup.json");
        FAIL("duplicate place accepted");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).rfind("dup.json:2:", 0) == 0);
        CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
    }
    const std::string unknown = "{\n  \"places\": [\"a\"],\n  \"bogus\": 1,\n  \"transitions\": []\n}";
    CHECK_THROWS_WITH(io::parse_net(unknown, "u.json"), Catch::Matchers::StartsWith("u.json:3:"));
    CHECK_THROWS_WITH(io::parse_net("{\"places\": [", "m.json"), Catch::Matchers::ContainsSubstring("malformed JSON"));
    CHECK_THROWS_AS(io::parse_net(R"({"places": ["a"], "transitions": [
        {"name": "t", "pre": {"zz": 1}, "post": {}, "reset": []}]})"),
                    InputError);
    CHECK_THROWS_AS(io::parse_net(R"({"places": ["a"], "transitions": [
        {"name": "t", "pre": {"a": -1}, "post": {}, "reset": []}]})"),
                    InputError);
}

TEST_CASE("workflow files are validated unless lenient", "[io]") {
    const std::string bad = R"({"kind": "workflow", "initial": "p1", "final": "p4",
        "places": ["p1", "p2", "p3", "p4"], "transitions": [
        {"name": "t1", "pre": {"p1": 1}, "post": {"p2": 1, "p3": 1}, "reset": []},
        {"name": "t2", "pre": {"p2": 1}, "post": {"p1": 1}, "reset": []},
        {"name": "t3", "pre": {"p2": 1}, "post": {"p4": 1}, "reset": ["p3"]}]})";
    CHECK_THROWS_AS(io::parse_net(bad), InputError);
    io::LoadedNet ok = io::parse_net(bad, "<input>", io::ParseOptions{true, false});
    CHECK(ok.violations.size() == 2);
}

TEST_CASE("emit_net round trip is byte identical", "[io]") {
    for (const auto& entry : fs::directory_iterator(nets_dir())) {
        std::string name = entry.path().filename().string();
        if (name.rfind("m0.json", 0) == 0 || name.rfind("m1.json", 0) == 0 || name.find(".target.") != std::string::npos)
            continue;
        std::string text = io::read_file(entry.path().string());
        io::LoadedNet n = io::parse_net(text, name);
        std::string again = io::emit_net(n.net, n.initial, n.final);
        INFO(name);
        CHECK(again == text);
    }
}

TEST_CASE("marking and run syntax", "[io]") {
    ResetNet n = builtin("fig2").net;
    Marking m = io::parse_marking(n, "{i:2, f:1}");
    CHECK(io::format_marking(n, m) == "{i:2, f:1}");
    CHECK(io::format_marking(n, n.zero()) == "{}");
    CHECK(io::format_tuple(Marking{1, 0, 0, 0}) == "(1, 0, 0, 0)");
    CHECK_THROWS_AS(io::parse_marking(n, "{zz:1}"), InputError);
    CHECK_THROWS_AS(io::parse_marking(n, "{i:1"), InputError);
    CHECK(io::format_run(n, io::parse_run(n, "s, s t2 u2")) == "s s t2 u2");
    CHECK_THROWS_AS(io::parse_run(n, "s nope"), InputError);
}

TEST_CASE("machine and target files", "[io]") {
    MinskyMachine m = io::parse_machine(io::read_file(net("m0.json")), "m0.json");
    CHECK(m.transitions.size() == 1);
    CHECK(io::machine_json(m)["source"] == "qsrc");
    ResetNet pump = builtin("pump").net;
    MixedTarget t = io::parse_target(io::Document(io::read_file(net("pump-q3.target.json")), "t"), pump);
    REQUIRE(t.atoms.size() == 1);
    CHECK(t.atoms[0][pump.place("q").index] == Bound::at_least(3));
    CHECK(t.atoms[0][pump.place("p").index] == Bound::at_most(kOmega));
    CHECK(t.atoms[0][pump.place("f").index] == Bound::any());
}

TEST_CASE("cli: simulate", "[cli]") {
    Outcome o = run({"simulate", "--from", "{i:2}", "--run", "s s t2 u2", net("fig2.json")});
    CHECK(o.code == cli::kHolds);
    CHECK(o.out == "{f:1}\n");

    Outcome t = run({"simulate", "--tuple", "--trace", "--from", "{p1:1}", "--run", "t1 t2 t1 t3", net("fig1.json")});
    CHECK(t.code == 0);
    CHECK(t.out.find("(0, 1, 2, 0)") != std::string::npos);

    CHECK(run({"simulate", "--from", "{i:1}", "--run", "u1", net("fig2.json")}).code == cli::kFails);
}

TEST_CASE("cli: check exit codes", "[cli]") {
    io::Json pk = run_json({"check", "--property", "pk", "--k", "1", net("fig2.json")}, cli::kFails);
    CHECK(pk["result"]["overall"] == "NotGeneralisedSound");
    CHECK(pk["command"] == "check");
    CHECK(pk["net"]["places"] == 7);
    CHECK(pk["version"] == cli::kVersion);

    CHECK(run({"check", "--property", "upto", "--k", "1", net("fig2.json")}).code == cli::kHolds);

    io::Json up2 = run_json({"check", "--property", "upto", "--k", "2", net("fig2.json")}, cli::kFails);
    CHECK(up2["result"]["witness"]["run"] == io::Json::array({"s", "s", "t2", "u2"}));

    CHECK(run({"check", "--property", "pk", "--k", "3", net("reset-diamond.json")}).code == cli::kHolds);
    CHECK(run({"check", "--property", "clean", "--k", "1", net("fig2.json")}).code == cli::kHolds);
    CHECK(run({"check", "--property", "ksound", "--k", "2", net("merge2.json")}).code == cli::kFails);
    CHECK(run({"check", "--property", "exact", "--k", "1", net("pump.json")}).code == cli::kFails);
    CHECK(run({"--budget", "50", "check", "--property", "ksound", "--k", "1", net("pump.json")}).code !=
          cli::kHolds);
}

TEST_CASE("cli: json output is deterministic apart from timing", "[cli]") {
    auto strip = [](io::Json j) {
        j.erase("timing");
        if (j["result"].contains("budget")) j["result"].erase("budget");
        return j.dump();
    };
    std::vector<std::string> args{"check", "--property", "pk", "--k", "2", net("stuck-skeleton.json")};
    CHECK(strip(run_json(args, cli::kFails)) == strip(run_json(args, cli::kFails)));
}

TEST_CASE("cli: other commands", "[cli]") {
    CHECK(run({"validate", net("fig2.json")}).code == cli::kHolds);
    io::Json cov = run_json({"cover", "--target", "{p4:1}", "--from", "{p1:1}", net("fig1.json")}, cli::kHolds);
    CHECK(cov["result"]["basis"].size() == 3);
    CHECK(cov["result"]["run"] == io::Json::array({"t1", "t3"}));
    CHECK(run({"cover", "--target", "{p4:1}", "--from", "{p3:5}", net("fig1.json")}).code == cli::kFails);

    io::Json reach = run_json({"reach", "--target-file", net("pump-q3.target.json"), net("pump.json")}, cli::kHolds);
    CHECK(reach["result"]["run"] == io::Json::array({"t1", "t2", "t2", "t2"}));

    CHECK(run({"redundancy", net("mutex-reset.json")}).code == cli::kHolds);
    CHECK(run({"skeleton", net("reset-diamond.json")}).code == cli::kHolds);
    CHECK(run({"skeleton", net("fig2.json")}).code == cli::kFails);

    Outcome gen = run({"generate", "builtin", "chain"});
    CHECK(gen.code == 0);
    CHECK(gen.out == io::read_file(net("chain.json")));
    Outcome mg = run({"generate", "minsky", net("m0.json")});
    CHECK(mg.code == 0);
    CHECK(mg.out == io::read_file(net("m0-net.json")));
    Outcome r1 = run({"--seed", "5", "generate", "random"});
    Outcome r2 = run({"--seed", "5", "generate", "random"});
    CHECK(r1.code == 0);
    CHECK(r1.out == r2.out);
    CHECK(io::parse_net(r1.out).workflow);
}

TEST_CASE("cli: input errors", "[cli]") {
    std::string dup = temp_file("dup.json", "{\"places\": [\"a\", \"a\"], \"transitions\": []}");
    Outcome d = run({"validate", dup});
    CHECK(d.code == cli::kInputError);
    CHECK(d.err.find("duplicate") != std::string::npos);
    CHECK(run({"validate", "/nonexistent/net.json"}).code == cli::kInputError);
    Outcome flag = run({"validate", "--no-such-flag", net("fig2.json")});
    CHECK(flag.code == cli::kInputError);
    CHECK_FALSE(flag.err.empty());
    CHECK(run({"--k", "0", "check", net("chain.json")}).code == cli::kInputError);
    CHECK(run({"check", "--property", "pk", net("fig1.json")}).code == cli::kInputError);
    CHECK(run({"--version"}).out.find(cli::kVersion) != std::string::npos);
}
