#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sawends/cutset.hpp"
#include "sawends/graph_builders.hpp"
#include "sawends/group_presentations.hpp"
#include "sawends/surgery.hpp"

namespace sawends {

using json = nlohmann::json;

inline constexpr const char* kArtifactVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

/// A graph built from a spec, with everything the commands need to know
/// about it.
struct GraphHandle {
    std::string kind;
    json spec;
    GraphOracle oracle;
    std::vector<VertexKey> representatives;  // front() is the default start
    std::optional<FreeProduct> free_product;
    std::function<CutSet(const json&)> cayley_cutset;  // set for group-backed graphs
    bool vertex_transitive() const { return oracle.transitivity() == Transitivity::vertex_transitive; }
};

inline json read_json_file(const std::string& path) {
    if (!std::filesystem::exists(path)) throw SpecNotFound("spec file not found: " + path);
    std::ifstream in(path);
    if (!in) throw SpecNotFound("cannot open spec file: " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw SpecInvalid(path + ": " + e.what());
    }
}

namespace detail {

template <class T>
T field(const json& j, const char* name) {
    if (!j.contains(name)) throw SpecInvalid(std::string("missing field '") + name + "'");
    try {
        return j.at(name).get<T>();
    } catch (const json::exception& e) {
        throw SpecInvalid(std::string("field '") + name + "': " + e.what());
    }
}

template <class T>
T field_or(const json& j, const char* name, T fallback) {
    return j.contains(name) ? field<T>(j, name) : fallback;
}

inline FiniteGroup group_from(const json& j) {
    if (j.contains("cyclic")) return FiniteGroup::cyclic(field<int>(j, "cyclic"));
    if (j.contains("table")) return FiniteGroup(field<std::vector<std::vector<int>>>(j, "table"));
    throw SpecInvalid("group needs 'cyclic' or 'table'");
}

inline RootedGraph factor_from(const json& j) {
    auto type = field<std::string>(j, "type");
    if (type == "cycle") return cycle_factor(field<int>(j, "k"));
    if (type == "complete") return complete_factor(field<int>(j, "k"));
    if (type == "explicit")
        return explicit_factor(field<int>(j, "n"), field<std::vector<std::pair<int, int>>>(j, "edges"),
                               field_or<std::string>(j, "name", "explicit"));
    throw SpecInvalid("unknown factor type '" + type + "'");
}

inline std::vector<int> nonidentity(const FiniteGroup& g) {
    std::vector<int> out;
    for (int x = 0; x < g.order(); ++x)
        if (x != g.identity()) out.push_back(x);
    return out;
}

template <class Group>
std::function<CutSet(const json&)> cayley_cutset_maker(const CayleyGraph<Group>& cg) {
    return [cg](const json& j) {
        auto keys = [](const std::vector<std::string>& v) {
            std::vector<VertexKey> out;
            for (auto& s : v) out.emplace_back(s);
            return out;
        };
        std::optional<std::vector<VertexKey>> sp;
        if (j.contains("S_prime")) sp = keys(field<std::vector<std::string>>(j, "S_prime"));
        return cayley_cutset(cg, keys(field<std::vector<std::string>>(j, "S")), sp,
                             field_or<int>(j, "connectivity_radius", 4), field_or<std::string>(j, "name", "cayley-cut"));
    };
}

}  // namespace detail

/// Graph specs:
///   {"type":"square"} {"type":"hexagonal"} {"type":"cylinder","width":4}
///   {"type":"free_product","factors":[F1,F2]}, F = {"type":"cycle"|"complete","k":3}
///       or {"type":"explicit","n":4,"edges":[[0,1],...]}
///   {"type":"amalgam","h":G,"k":G,"c_in_h":[...],"c_in_k":[...],
///       "generators":{"H":[...],"K":[...]}}   (default: all non-identity elements)
///   {"type":"hnn","h":G,"c1":[...],"c2":[...],"phi":[...],
///       "generators":{"H":[...],"t":true}}
///   G = {"cyclic":n} or {"table":[[...]]}
/// Optional "start" (vertex key) and "representatives" (list of keys).
inline GraphHandle load_graph_spec(const json& j) {
    using namespace detail;
    if (!j.is_object()) throw SpecInvalid("graph spec must be an object");
    GraphHandle h;
    h.spec = j;
    h.kind = field<std::string>(j, "type");
    VertexKey start;
    try {
        if (h.kind == "square") {
            h.oracle = build_square_lattice();
            start = lattice_key(0, 0);
        } else if (h.kind == "hexagonal") {
            h.oracle = build_hexagonal_lattice();
            start = lattice_key(0, 0);
        } else if (h.kind == "cylinder") {
            h.oracle = build_cylinder(field<int>(j, "width"));
            start = lattice_key(0, 0);
        } else if (h.kind == "free_product") {
            auto f = field<std::vector<json>>(j, "factors");
            if (f.size() != 2) throw SpecInvalid("free product needs exactly two factors");
            h.free_product = build_free_product(factor_from(f[0]), factor_from(f[1]));
            h.oracle = h.free_product->oracle();
            start = FreeProductGraph::root();
        } else if (h.kind == "amalgam") {
            auto p = std::make_shared<const AmalgamPresentation>(
                group_from(field<json>(j, "h")), group_from(field<json>(j, "k")),
                field<std::vector<int>>(j, "c_in_h"), field<std::vector<int>>(j, "c_in_k"),
                field_or<std::string>(j, "name", "amalgam"));
            json gens = field_or<json>(j, "generators", json::object());
            FactorGenerators th{field_or<std::vector<int>>(gens, "H", nonidentity(p->group(Factor::H)))};
            FactorGenerators tk{field_or<std::vector<int>>(gens, "K", nonidentity(p->group(Factor::K)))};
            auto cg = glued_amalgam_graph(th, tk, p);
            h.oracle = cg.oracle();
            start = cg.group().identity().key();
            h.cayley_cutset = cayley_cutset_maker(cg);
        } else if (h.kind == "hnn") {
            auto p = std::make_shared<const HnnPresentation>(
                group_from(field<json>(j, "h")), field<std::vector<int>>(j, "c1"), field<std::vector<int>>(j, "c2"),
                field<std::vector<int>>(j, "phi"), field_or<std::string>(j, "name", "hnn"));
            json gens = field_or<json>(j, "generators", json::object());
            std::vector<std::vector<HnnLetter>> words;
            for (int x : field_or<std::vector<int>>(gens, "H", nonidentity(p->base()))) words.push_back({HnnLetter::h(x)});
            if (field_or<bool>(gens, "t", true)) {
                words.push_back({HnnLetter::t(1)});
                words.push_back({HnnLetter::t(-1)});
            }
            auto cg = cayley_oracle(HnnGroup(p), words, "hnn");
            h.oracle = cg.oracle();
            start = cg.group().identity().key();
            h.cayley_cutset = cayley_cutset_maker(cg);
        } else {
            throw SpecInvalid("unknown graph type '" + h.kind + "'");
        }
    } catch (const SpecInvalid&) {
        throw;
    } catch (const Error& e) {
        throw SpecInvalid(std::string(e.code()) + ": " + e.what());
    }
    if (j.contains("start")) start = VertexKey(field<std::string>(j, "start"));
    h.representatives = {start};
    if (j.contains("representatives")) {
        h.representatives.clear();
        for (auto& s : field<std::vector<std::string>>(j, "representatives")) h.representatives.emplace_back(s);
        if (h.representatives.empty()) throw SpecInvalid("empty representatives list");
    }
    try {
        for (auto& v : h.representatives) h.oracle.neighbors(v);
    } catch (const Error& e) {
        throw SpecInvalid(std::string("bad start vertex: ") + e.what());
    }
    return h;
}

/// Square-lattice cut set acted on by all translations.
inline CutSet square_lattice_cutset(std::vector<VertexKey> S, int connectivity_radius) {
    CutSet cs;
    cs.name = "square-translates";
    cs.S = std::move(S);
    cs.connectivity_radius = connectivity_radius;
    cs.action.name = "translation";
    cs.action.solve = [](const VertexKey& from, const VertexKey& to) -> std::vector<std::string> {
        auto [x1, y1] = parse_lattice_key(from);
        auto [x2, y2] = parse_lattice_key(to);
        return {lattice_key(x2 - x1, y2 - y1).bytes()};
    };
    cs.action.apply = [](const std::string& gamma, const VertexKey& v) {
        auto [dx, dy] = parse_lattice_key(VertexKey(gamma));
        auto [x, y] = parse_lattice_key(v);
        return lattice_key(x + dx, y + dy);
    };
    return cs;
}

/// Cut-set specs:
///   {"preset":"cylinder-column","stride":1}         (cylinder graphs)
///   {"preset":"free-product-root"}                   (free products of groups)
///   {"preset":"square","S":["0,0"],"connectivity_radius":2}
///   {"preset":"cayley","S":[...],"S_prime":[...],"connectivity_radius":r}
/// "connectivity_radius" overrides the preset's value.
inline CutSet load_cutset_spec(const json& j, const GraphHandle& g) {
    using namespace detail;
    if (!j.is_object()) throw SpecInvalid("cut-set spec must be an object");
    auto preset = field<std::string>(j, "preset");
    CutSet cs;
    try {
        if (preset == "cylinder-column") {
            if (g.kind != "cylinder") throw SpecInvalid("cylinder-column needs a cylinder graph");
            cs = cylinder_cutset(field<int>(g.spec, "width"), field_or<int>(j, "stride", 1));
        } else if (preset == "free-product-root") {
            if (!g.free_product) throw SpecInvalid("free-product-root needs a free-product graph");
            cs = free_product_root_cutset(*g.free_product);
        } else if (preset == "square") {
            if (g.kind != "square") throw SpecInvalid("square preset needs the square lattice");
            std::vector<VertexKey> S;
            for (auto& s : field<std::vector<std::string>>(j, "S")) S.emplace_back(s);
            cs = square_lattice_cutset(S, field_or<int>(j, "connectivity_radius", 2));
        } else if (preset == "cayley") {
            if (!g.cayley_cutset) throw SpecInvalid("cayley preset needs a group-backed graph");
            cs = g.cayley_cutset(j);
        } else {
            throw SpecInvalid("unknown cut-set preset '" + preset + "'");
        }
    } catch (const SpecInvalid&) {
        throw;
    } catch (const Error& e) {
        throw SpecInvalid(std::string(e.code()) + ": " + e.what());
    }
    if (j.contains("connectivity_radius")) cs.connectivity_radius = field<int>(j, "connectivity_radius");
    return cs;
}

inline json walk_to_json(const Walk& w) {
    json a = json::array();
    for (auto& v : w.vertices) a.push_back(v.bytes());
    return a;
}

inline Walk walk_from_json(const json& a) {
    Walk w;
    for (auto& s : a) w.vertices.emplace_back(s.get<std::string>());
    return w;
}

/// Plan spec: {"walk":[keys...], "delta":"1/10",
///             "steps":[{"copy":[keys...],"split":h,"variant":"connector"|"crossing"}]}
inline SurgeryPlan load_plan_spec(const json& j) {
    using namespace detail;
    SurgeryPlan p;
    p.base_walk = walk_from_json(field<json>(j, "walk"));
    if (p.base_walk.vertices.empty()) throw SpecInvalid("plan walk is empty");
    p.delta = parse_rational(field_or<std::string>(j, "delta", "0"));
    for (auto& s : field_or<std::vector<json>>(j, "steps", {})) {
        SurgeryStep st;
        st.cut_copy.translation = "spec";
        for (auto& k : field<std::vector<std::string>>(s, "copy")) st.cut_copy.vertices.emplace_back(k);
        std::sort(st.cut_copy.vertices.begin(), st.cut_copy.vertices.end());
        st.split_index = field<int>(s, "split");
        auto v = field_or<std::string>(s, "variant", "connector");
        if (v == "connector") st.variant = SurgeryVariant::Connector;
        else if (v == "crossing") st.variant = SurgeryVariant::Crossing;
        else throw SpecInvalid("unknown surgery variant '" + v + "'");
        p.steps.push_back(std::move(st));
    }
    return p;
}

}  // namespace sawends
