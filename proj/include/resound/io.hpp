#pragma once

// JSON and text formats: nets, markings, runs, targets, machines, closed sets.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "resound/closed_sets.hpp"
#include "resound/errors.hpp"
#include "resound/minsky.hpp"
#include "resound/net.hpp"

namespace resound::io {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Source positions

namespace detail {

/// Forward iterator over a buffer that publishes how far the parser has read.
class CountingIter {
public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = char;
    using difference_type = std::ptrdiff_t;
    using pointer = const char*;
    using reference = const char&;

    CountingIter() = default;
    CountingIter(const char* p, const char* base, std::size_t* pos) : p_(p), base_(base), pos_(pos) {}
    reference operator*() const { return *p_; }
    CountingIter& operator++() {
        ++p_;
        if (pos_ != nullptr) *pos_ = static_cast<std::size_t>(p_ - base_);
        return *this;
    }
    CountingIter operator++(int) {
        CountingIter t = *this;
        ++*this;
        return t;
    }
    friend bool operator==(const CountingIter& a, const CountingIter& b) { return a.p_ == b.p_; }

private:
    const char* p_ = nullptr;
    const char* base_ = nullptr;
    std::size_t* pos_ = nullptr;
};

inline std::string escape_pointer_token(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '~')
            out += "~0";
        else if (c == '/')
            out += "~1";
        else
            out += c;
    }
    return out;
}

/// SAX consumer recording the read offset at which each key or array
/// element starts, keyed by JSON pointer.
class PositionIndex : public nlohmann::json_sax<Json> {
public:
    explicit PositionIndex(const std::size_t* pos) : pos_(pos) {}

    std::map<std::string, std::size_t> offsets;

    bool null() override { return value(); }
    bool boolean(bool) override { return value(); }
    bool number_integer(number_integer_t) override { return value(); }
    bool number_unsigned(number_unsigned_t) override { return value(); }
    bool number_float(number_float_t, const string_t&) override { return value(); }
    bool string(string_t&) override { return value(); }
    bool binary(binary_t&) override { return value(); }
    bool start_object(std::size_t) override {
        begin();
        frames_.push_back({false, 0, {}});
        return true;
    }
    bool key(string_t& k) override {
        frames_.back().key = k;
        offsets.emplace(path(), *pos_);
        return true;
    }
    bool end_object() override {
        frames_.pop_back();
        return finish();
    }
    bool start_array(std::size_t) override {
        begin();
        frames_.push_back({true, 0, {}});
        return true;
    }
    bool end_array() override {
        frames_.pop_back();
        return finish();
    }
    bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception&) override { return false; }

private:
    struct Frame {
        bool array;
        std::size_t index;
        std::string key;
    };

    [[nodiscard]] std::string path() const {
        std::string p;
        for (const auto& f : frames_) p += "/" + (f.array ? std::to_string(f.index) : escape_pointer_token(f.key));
        return p;
    }
    void begin() {
        if (!frames_.empty() && frames_.back().array) offsets.emplace(path(), *pos_);
    }
    bool finish() {
        if (!frames_.empty() && frames_.back().array) ++frames_.back().index;
        return true;
    }
    bool value() {
        begin();
        return finish();
    }

    const std::size_t* pos_;
    std::vector<Frame> frames_;
};

} // namespace detail

/// Parsed JSON plus enough positional data to anchor diagnostics.
class Document {
public:
    Document(std::string text, std::string source) : text_(std::move(text)), source_(std::move(source)) {
        try {
            json_ = Json::parse(text_);
        } catch (const Json::parse_error& e) {
            std::string what = e.what();
            auto colon = what.find(": ", what.find("parse error"));
            std::string msg = colon == std::string::npos ? what : what.substr(colon + 2);
            throw InputError(where(e.byte == 0 ? 0 : e.byte - 1) + ": malformed JSON: " + msg);
        }
        std::size_t pos = 0;
        detail::PositionIndex idx(&pos);
        detail::CountingIter first(text_.data(), text_.data(), &pos);
        detail::CountingIter last(text_.data() + text_.size(), text_.data(), nullptr);
        Json::sax_parse(first, last, &idx);
        offsets_ = std::move(idx.offsets);
    }

    [[nodiscard]] const Json& json() const { return json_; }
    [[nodiscard]] const std::string& source() const { return source_; }

    /// "source:line:col" for a byte offset.
    [[nodiscard]] std::string where(std::size_t offset) const {
        std::size_t line = 1, col = 1;
        for (std::size_t k = 0; k < offset && k < text_.size(); ++k) {
            if (text_[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        return source_ + ":" + std::to_string(line) + ":" + std::to_string(col);
    }

    /// Position of the closest recorded ancestor of `pointer`.
    [[nodiscard]] std::string where(const std::string& pointer) const {
        std::string p = pointer;
        while (!p.empty()) {
            auto it = offsets_.find(p);
            if (it != offsets_.end()) return where(token_start(it->second));
            p.erase(p.rfind('/'));
        }
        return source_ + ":1:1";
    }

    [[noreturn]] void fail(const std::string& pointer, const std::string& msg) const {
        throw InputError(where(pointer) + ": " + msg + (pointer.empty() ? "" : " (at " + pointer + ")"));
    }

private:
    // The parser has read one character past the token that triggered the
    // event; walk back to the token's first character.
    [[nodiscard]] std::size_t token_start(std::size_t offset) const {
        if (text_.empty()) return 0;
        std::size_t p = std::min(offset, text_.size()) - (offset > 0 ? 1 : 0);
        auto skippable = [](char c) {
            return std::isspace(static_cast<unsigned char>(c)) != 0 || c == ':' || c == ',' || c == ']' || c == '}';
        };
        while (p > 0 && skippable(text_[p])) --p;
        if (text_[p] == '"') {
            while (p > 0) {
                --p;
                if (text_[p] == '"' && (p == 0 || text_[p - 1] != '\\')) break;
            }
        } else {
            while (p > 0 && (std::isalnum(static_cast<unsigned char>(text_[p - 1])) != 0 || text_[p - 1] == '.' ||
                             text_[p - 1] == '-' || text_[p - 1] == '+'))
                --p;
        }
        return p;
    }

    std::string text_;
    std::string source_;
    Json json_;
    std::map<std::string, std::size_t> offsets_;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------
// Nets

struct ParseOptions {
    bool lenient = false; // keep workflow violations instead of rejecting
    bool strict = false;  // require {0,1} arc weights for workflow nets
};

struct LoadedNet {
    ResetNet net;
    std::optional<PlaceId> initial;
    std::optional<PlaceId> final;
    bool workflow = false;
    std::vector<Violation> violations;

    [[nodiscard]] WorkflowNet workflow_net() const {
        if (!workflow) throw PreconditionError("this net is not a workflow net");
        if (!violations.empty()) throw PreconditionError("this net violates the workflow conditions");
        return WorkflowNet{net, *initial, *final};
    }
};

namespace detail {

inline void check_fields(const Document& doc, const Json& obj, const std::string& ptr,
                         std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) doc.fail(ptr, "expected an object");
    for (const auto& [k, v] : obj.items()) {
        bool ok = false;
        for (auto a : allowed) ok = ok || k == a;
        if (!ok) doc.fail(ptr + "/" + escape_pointer_token(k), "unknown field '" + k + "'");
    }
}

inline const std::string& as_name(const Document& doc, const Json& v, const std::string& ptr, const char* what) {
    if (!v.is_string()) doc.fail(ptr, std::string(what) + " must be a string");
    const auto& s = v.get_ref<const std::string&>();
    if (s.empty()) doc.fail(ptr, std::string(what) + " must not be empty");
    for (char c : s)
        if (std::isspace(static_cast<unsigned char>(c)) != 0)
            doc.fail(ptr, std::string(what) + " '" + s + "' contains whitespace");
    return s;
}

inline Marking arc_vector(const Document& doc, const ResetNet& net, const Json& v, const std::string& ptr) {
    if (!v.is_object()) doc.fail(ptr, "expected an object mapping places to weights");
    Marking m = net.zero();
    for (const auto& [k, w] : v.items()) {
        std::string p = ptr + "/" + escape_pointer_token(k);
        auto id = net.find_place(k);
        if (!id) doc.fail(p, "unknown place '" + k + "'");
        if (!w.is_number_unsigned()) doc.fail(p, "arc weight must be a non-negative integer");
        m[*id] = w.get<Count>();
    }
    return m;
}

} // namespace detail

inline LoadedNet parse_net(const Document& doc, ParseOptions opt = {}) {
    const Json& j = doc.json();
    detail::check_fields(doc, j, "", {"kind", "places", "transitions", "initial", "final"});
    LoadedNet out;

    std::string kind;
    if (j.contains("kind")) {
        if (!j["kind"].is_string()) doc.fail("/kind", "kind must be a string");
        kind = j["kind"].get<std::string>();
        if (kind != "workflow" && kind != "petri") doc.fail("/kind", "kind must be \"workflow\" or \"petri\"");
    }
    if (!j.contains("places")) doc.fail("", "missing field 'places'");
    if (!j.contains("transitions")) doc.fail("", "missing field 'transitions'");
    if (!j["places"].is_array()) doc.fail("/places", "places must be an array");
    for (std::size_t k = 0; k < j["places"].size(); ++k) {
        std::string ptr = "/places/" + std::to_string(k);
        const std::string& name = detail::as_name(doc, j["places"][k], ptr, "place name");
        if (out.net.find_place(name)) doc.fail(ptr, "duplicate place '" + name + "'");
        out.net.add_place(name);
    }
    if (!j["transitions"].is_array()) doc.fail("/transitions", "transitions must be an array");
    for (std::size_t k = 0; k < j["transitions"].size(); ++k) {
        std::string ptr = "/transitions/" + std::to_string(k);
        const Json& t = j["transitions"][k];
        detail::check_fields(doc, t, ptr, {"name", "pre", "post", "reset"});
        if (!t.contains("name")) doc.fail(ptr, "missing field 'name'");
        const std::string& name = detail::as_name(doc, t["name"], ptr + "/name", "transition name");
        if (out.net.find_transition(name)) doc.fail(ptr + "/name", "duplicate transition '" + name + "'");
        Marking pre = t.contains("pre") ? detail::arc_vector(doc, out.net, t["pre"], ptr + "/pre") : out.net.zero();
        Marking post = t.contains("post") ? detail::arc_vector(doc, out.net, t["post"], ptr + "/post") : out.net.zero();
        std::vector<PlaceId> resets;
        if (t.contains("reset")) {
            if (!t["reset"].is_array()) doc.fail(ptr + "/reset", "reset must be an array of place names");
            for (std::size_t r = 0; r < t["reset"].size(); ++r) {
                std::string rp = ptr + "/reset/" + std::to_string(r);
                const std::string& pn = detail::as_name(doc, t["reset"][r], rp, "reset place");
                auto id = out.net.find_place(pn);
                if (!id) doc.fail(rp, "unknown place '" + pn + "'");
                resets.push_back(*id);
            }
        }
        out.net.add_transition(name, std::move(pre), std::move(post), std::move(resets));
    }

    for (const char* key : {"initial", "final"}) {
        if (!j.contains(key)) continue;
        std::string ptr = std::string("/") + key;
        const std::string& name = detail::as_name(doc, j[key], ptr, "place name");
        auto id = out.net.find_place(name);
        if (!id) doc.fail(ptr, "unknown place '" + name + "'");
        (std::string_view(key) == "initial" ? out.initial : out.final) = *id;
    }
    if (kind.empty()) kind = out.initial || out.final ? "workflow" : "petri";
    if (kind == "workflow") {
        if (!out.initial) doc.fail("", "workflow net needs an 'initial' place");
        if (!out.final) doc.fail("", "workflow net needs a 'final' place");
        out.workflow = true;
        out.violations = validate_workflow(out.net, *out.initial, *out.final, opt.strict);
        if (!out.violations.empty() && !opt.lenient) {
            std::string msg = "not a workflow net:";
            for (const auto& v : out.violations) msg += "\n  " + v.message;
            doc.fail("", msg);
        }
    }
    return out;
}

inline LoadedNet parse_net(std::string text, const std::string& source = "<input>", ParseOptions opt = {}) {
    return parse_net(Document(std::move(text), source), opt);
}

inline LoadedNet load_net(const std::string& path, ParseOptions opt = {}) {
    return parse_net(read_file(path), path, opt);
}

inline Json arc_json(const ResetNet& net, const Marking& v) {
    Json o = Json::object();
    for (std::uint32_t p = 0; p < v.size(); ++p)
        if (v[p] > 0) o[net.place_name(PlaceId{p})] = v[p];
    return o;
}

inline Json net_json(const ResetNet& net, std::optional<PlaceId> initial = std::nullopt,
                     std::optional<PlaceId> final = std::nullopt) {
    Json j;
    j["kind"] = initial ? "workflow" : "petri";
    j["places"] = net.place_names();
    j["transitions"] = Json::array();
    for (const auto& t : net.transitions()) {
        Json r = Json::array();
        for (PlaceId p : t.resets) r.push_back(net.place_name(p));
        j["transitions"].push_back(Json{{"name", t.name}, {"pre", arc_json(net, t.pre)}, {"post", arc_json(net, t.post)},
                                        {"reset", std::move(r)}});
    }
    if (initial) j["initial"] = net.place_name(*initial);
    if (final) j["final"] = net.place_name(*final);
    return j;
}

inline Json net_json(const WorkflowNet& w) { return net_json(w.net, w.initial, w.final); }

/// Canonical text form: two-space indentation and a trailing newline.
inline std::string emit_net(const ResetNet& net, std::optional<PlaceId> initial = std::nullopt,
                            std::optional<PlaceId> final = std::nullopt) {
    return net_json(net, initial, final).dump(2) + "\n";
}

inline std::string emit_net(const WorkflowNet& w) { return emit_net(w.net, w.initial, w.final); }

// ---------------------------------------------------------------------------
// Markings and runs

/// `{p:1, q:3}`; omitted places are 0, repeated places add up.
inline Marking parse_marking(const ResetNet& net, std::string_view text) {
    auto bad = [&](const std::string& why) -> InputError {
        return InputError("bad marking '" + std::string(text) + "': " + why);
    };
    std::size_t k = 0;
    auto skip = [&] {
        while (k < text.size() && std::isspace(static_cast<unsigned char>(text[k])) != 0) ++k;
    };
    skip();
    if (k >= text.size() || text[k] != '{') throw bad("expected '{'");
    ++k;
    Marking m = net.zero();
    skip();
    if (k < text.size() && text[k] == '}') {
        ++k;
    } else {
        while (true) {
            skip();
            std::size_t s = k;
            while (k < text.size() && text[k] != ':' && text[k] != ',' && text[k] != '}' &&
                   std::isspace(static_cast<unsigned char>(text[k])) == 0)
                ++k;
            std::string name(text.substr(s, k - s));
            if (name.empty()) throw bad("expected a place name");
            auto p = net.find_place(name);
            if (!p) throw bad("unknown place '" + name + "'");
            skip();
            Count c = 1;
            if (k < text.size() && text[k] == ':') {
                ++k;
                skip();
                std::size_t d = k;
                while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k])) != 0) ++k;
                if (d == k) throw bad("expected a count after '" + name + ":'");
                try {
                    c = std::stoull(std::string(text.substr(d, k - d)));
                } catch (const std::out_of_range&) {
                    throw bad("count out of range");
                }
            }
            m[*p] += c;
            skip();
            if (k < text.size() && text[k] == ',') {
                ++k;
                continue;
            }
            if (k < text.size() && text[k] == '}') {
                ++k;
                break;
            }
            throw bad("expected ',' or '}'");
        }
    }
    skip();
    if (k != text.size()) throw bad("trailing characters");
    return m;
}

inline std::string format_marking(const ResetNet& net, const Marking& m) {
    std::string s = "{";
    for (std::uint32_t p = 0; p < m.size(); ++p) {
        if (m[p] == 0) continue;
        if (s.size() > 1) s += ", ";
        s += net.place_name(PlaceId{p}) + ":" + std::to_string(m[p]);
    }
    return s + "}";
}

/// Positional tuple over all places, e.g. `(1, 0, 0, 0)`.
inline std::string format_tuple(const Marking& m) {
    std::string s = "(";
    for (std::size_t p = 0; p < m.size(); ++p) s += (p > 0 ? ", " : "") + std::to_string(m[p]);
    return s + ")";
}

inline std::string format_omega(const ResetNet& net, const OmegaMarking& m) {
    std::string s = "{";
    for (std::uint32_t p = 0; p < m.size(); ++p) {
        if (m[p] == 0) continue;
        if (s.size() > 1) s += ", ";
        s += net.place_name(PlaceId{p}) + ":" + (m.is_omega(p) ? std::string("w") : std::to_string(m[p]));
    }
    return s + "}";
}

/// Transition names separated by whitespace and/or commas.
inline Run parse_run(const ResetNet& net, std::string_view text) {
    Run r;
    std::string cur;
    auto flush = [&] {
        if (cur.empty()) return;
        auto t = net.find_transition(cur);
        if (!t) throw InputError("unknown transition '" + cur + "' in run");
        r.push_back(*t);
        cur.clear();
    };
    for (char c : text) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c)) != 0)
            flush();
        else
            cur += c;
    }
    flush();
    return r;
}

inline std::string format_run(const ResetNet& net, const Run& r) {
    std::string s;
    for (TransId t : r) s += (s.empty() ? "" : " ") + net.transition_name(t);
    return s;
}

inline Json run_json(const ResetNet& net, const Run& r) {
    Json a = Json::array();
    for (TransId t : r) a.push_back(net.transition_name(t));
    return a;
}

inline Json marking_json(const ResetNet& net, const Marking& m) { return arc_json(net, m); }

inline Json omega_json(const ResetNet& net, const OmegaMarking& m) {
    Json o = Json::object();
    for (std::uint32_t p = 0; p < m.size(); ++p) {
        if (m[p] == 0) continue;
        if (m.is_omega(p))
            o[net.place_name(PlaceId{p})] = "w";
        else
            o[net.place_name(PlaceId{p})] = m[p];
    }
    return o;
}

inline Json upset_json(const ResetNet& net, const UpSet& u) {
    Json a = Json::array();
    for (const auto& b : u.basis()) a.push_back(marking_json(net, b));
    return a;
}

inline Json downset_json(const ResetNet& net, const DownSet& d) {
    Json a = Json::array();
    for (const auto& x : d.ideals()) a.push_back(omega_json(net, x));
    return a;
}

// ---------------------------------------------------------------------------
// Mixed targets: {"atoms": [{"q": {"at_least": 3}, "p": {"at_most": "w"}}]}

inline MixedTarget parse_target(const Document& doc, const ResetNet& net) {
    const Json& j = doc.json();
    detail::check_fields(doc, j, "", {"atoms"});
    if (!j.contains("atoms") || !j["atoms"].is_array()) doc.fail("/atoms", "expected an array 'atoms'");
    MixedTarget tgt;
    for (std::size_t a = 0; a < j["atoms"].size(); ++a) {
        std::string ptr = "/atoms/" + std::to_string(a);
        const Json& atom = j["atoms"][a];
        if (!atom.is_object()) doc.fail(ptr, "an atom must be an object mapping places to bounds");
        Atom out(net.num_places(), Bound::any());
        for (const auto& [place, bound] : atom.items()) {
            std::string bp = ptr + "/" + detail::escape_pointer_token(place);
            auto p = net.find_place(place);
            if (!p) doc.fail(bp, "unknown place '" + place + "'");
            detail::check_fields(doc, bound, bp, {"at_most", "at_least"});
            if (bound.size() != 1) doc.fail(bp, "give exactly one of 'at_most' or 'at_least'");
            if (bound.contains("at_least")) {
                if (!bound["at_least"].is_number_unsigned()) doc.fail(bp + "/at_least", "expected a non-negative integer");
                out[p->index] = Bound::at_least(bound["at_least"].get<Count>());
            } else {
                const Json& v = bound["at_most"];
                if (v.is_string() && v.get<std::string>() == "w")
                    out[p->index] = Bound::at_most(kOmega);
                else if (v.is_number_unsigned())
                    out[p->index] = Bound::at_most(v.get<Count>());
                else
                    doc.fail(bp + "/at_most", "expected a non-negative integer or \"w\"");
            }
        }
        tgt.atoms.push_back(std::move(out));
    }
    return tgt;
}

inline Json bound_json(const Bound& b) {
    if (b.kind == Bound::Kind::AtLeast) return Json{{"at_least", b.value}};
    if (b.value == kOmega) return Json{{"at_most", "w"}};
    return Json{{"at_most", b.value}};
}

inline Json atom_json(const ResetNet& net, const Atom& a) {
    Json o = Json::object();
    for (std::uint32_t p = 0; p < a.size(); ++p) {
        const Bound& b = a[p];
        if (b.kind == Bound::Kind::AtLeast && b.value == 0) continue;
        if (b.kind == Bound::Kind::AtMost && b.value == kOmega) continue;
        o[net.place_name(PlaceId{p})] = bound_json(b);
    }
    return o;
}

inline Json target_json(const ResetNet& net, const MixedTarget& t) {
    Json a = Json::array();
    for (const auto& atom : t.atoms) a.push_back(atom_json(net, atom));
    return Json{{"atoms", a}};
}

// ---------------------------------------------------------------------------
// Minsky machines: {"states": [...], "transitions": [[from, op, to]], "source", "target"}

inline MinskyMachine parse_machine(const Document& doc) {
    const Json& j = doc.json();
    detail::check_fields(doc, j, "", {"states", "transitions", "source", "target"});
    MinskyMachine m;
    if (!j.contains("states") || !j["states"].is_array()) doc.fail("/states", "expected an array 'states'");
    for (std::size_t k = 0; k < j["states"].size(); ++k)
        m.states.push_back(detail::as_name(doc, j["states"][k], "/states/" + std::to_string(k), "state name"));
    if (!j.contains("transitions") || !j["transitions"].is_array())
        doc.fail("/transitions", "expected an array 'transitions'");
    for (std::size_t k = 0; k < j["transitions"].size(); ++k) {
        std::string ptr = "/transitions/" + std::to_string(k);
        const Json& t = j["transitions"][k];
        if (!t.is_array() || t.size() != 3 || !t[0].is_string() || !t[1].is_string() || !t[2].is_string())
            doc.fail(ptr, "expected [from, op, to]");
        try {
            m.transitions.push_back({t[0].get<std::string>(), parse_minsky_op(t[1].get<std::string>()),
                                     t[2].get<std::string>()});
        } catch (const InputError& e) {
            doc.fail(ptr + "/1", e.what());
        }
    }
    for (const char* key : {"source", "target"}) {
        if (!j.contains(key)) doc.fail("", std::string("missing field '") + key + "'");
        (std::string_view(key) == "source" ? m.source : m.target) =
            detail::as_name(doc, j[key], std::string("/") + key, "state name");
    }
    try {
        m.validate();
    } catch (const InputError& e) {
        doc.fail("", e.what());
    }
    return m;
}

inline MinskyMachine parse_machine(std::string text, const std::string& source = "<input>") {
    return parse_machine(Document(std::move(text), source));
}

inline Json machine_json(const MinskyMachine& m) {
    Json ts = Json::array();
    for (const auto& t : m.transitions) ts.push_back(Json::array({t.from, to_string(t.op), t.to}));
    return Json{{"states", m.states}, {"transitions", ts}, {"source", m.source}, {"target", m.target}};
}

} // namespace resound::io
