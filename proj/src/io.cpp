#include "conerisk/io.hpp"

#include <fstream>
#include <sstream>

namespace conerisk {

Json scalar_to_json(const Rational& x) { return format_rational(x); }

Json scalar_to_json(const Quad2& x)
{
    if (x.is_rational()) return format_rational(x.a());
    return Json{{"a", format_rational(x.a())}, {"b", format_rational(x.b())}};
}

namespace {

Rational rational_from_json(const Json& j)
{
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    throw InputError("expected a rational as \"p/q\", got " + j.dump());
}

}   // namespace

template <>
Rational scalar_from_json<Rational>(const Json& j)
{
    return rational_from_json(j);
}

template <>
Quad2 scalar_from_json<Quad2>(const Json& j)
{
    if (j.is_object()) {
        for (const auto& [k, _] : j.items())
            if (k != "a" && k != "b") throw InputError("unexpected key '" + k + "' in quad2 scalar");
        Rational a = j.contains("a") ? rational_from_json(j.at("a")) : Rational(0);
        Rational b = j.contains("b") ? rational_from_json(j.at("b")) : Rational(0);
        return Quad2(a, b);
    }
    return Quad2(rational_from_json(j));
}

template <typename F>
Json vec_to_json(const Vec<F>& v)
{
    Json out = Json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(scalar_to_json(v(i)));
    return out;
}

template <typename F>
Json rows_to_json(const Mat<F>& m)
{
    Json out = Json::array();
    for (Index i = 0; i < m.rows(); ++i) out.push_back(vec_to_json<F>(m.row(i).transpose()));
    return out;
}

template <typename F>
Vec<F> vec_from_json(const Json& j, Index len)
{
    if (!j.is_array()) throw InputError("expected an array of scalars, got " + j.dump());
    if (len >= 0 && static_cast<Index>(j.size()) != len)
        throw InputError("expected " + std::to_string(len) + " entries, got " + std::to_string(j.size()));
    Vec<F> v(static_cast<Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = scalar_from_json<F>(j[i]);
    return v;
}

namespace {

template <typename F>
Mat<F> rows_from_json(const Json& j, Index cols)
{
    if (!j.is_array()) throw InputError("expected a list of rows");
    std::vector<Vec<F>> rows;
    for (const auto& r : j) rows.push_back(vec_from_json<F>(r, cols));
    return stack_rows<F>(rows, cols);
}

void check_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where)
{
    if (!j.is_object()) throw InputError(where + ": expected an object");
    for (const auto& [k, _] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || k == a;
        if (!ok) throw InputError(where + ": unknown key '" + k + "'");
    }
}

const Json& need(const Json& j, const char* key, const std::string& where)
{
    if (!j.contains(key)) throw InputError(where + ": missing key '" + key + "'");
    return j.at(key);
}

template <typename F>
Scenario<F> scenario_body(const Json& j)
{
    const Json& sp = need(j, "space", "scenario");
    check_keys(sp, {"atoms", "probs", "filtration"}, "space");
    const Json& atoms_j = need(sp, "atoms", "space");
    if (!atoms_j.is_number_integer() || atoms_j.get<long long>() < 1) throw InputError("space.atoms must be a positive integer");
    const Index n = atoms_j.get<Index>();
    Vec<F> probs = vec_from_json<F>(need(sp, "probs", "space"), n);
    const Json& filt = need(sp, "filtration", "space");
    if (!filt.is_array() || filt.empty()) throw InputError("space.filtration must be a non-empty list of partitions");
    std::vector<Partition> parts;
    for (const auto& p : filt) {
        if (!p.is_array()) throw InputError("space.filtration: each partition is a list of blocks");
        std::vector<std::vector<Index>> blocks;
        for (const auto& b : p) {
            if (!b.is_array()) throw InputError("space.filtration: each block is a list of atoms");
            std::vector<Index> block;
            for (const auto& a : b) {
                if (!a.is_number_integer()) throw InputError("space.filtration: atom indices are integers");
                block.push_back(a.get<Index>());
            }
            blocks.push_back(block);
        }
        parts.push_back(Partition::from_blocks(n, blocks));
    }
    FilteredSpace<F> space(probs, parts);

    const Json& nv = need(j, "numeraires", "scenario");
    if (!nv.is_array() || nv.empty()) throw InputError("numeraires must be a non-empty list of atom-value arrays");
    Mat<F> v(n, static_cast<Index>(nv.size()));
    for (std::size_t i = 0; i < nv.size(); ++i) v.col(static_cast<Index>(i)) = vec_from_json<F>(nv[i], n);
    NumeraireVec<F> numeraires(v);

    const Json& rs = need(j, "representing_set", "scenario");
    check_keys(rs, {"type", "vertices", "ineqs", "c", "witnesses"}, "representing_set");
    const std::string type = need(rs, "type", "representing_set").get<std::string>();
    RepresentingSet<F> q;
    if (type == "polytope") {
        if (rs.contains("vertices")) q.vertices = rows_from_json<F>(rs.at("vertices"), n);
        if (rs.contains("ineqs")) q.ineqs = rows_from_json<F>(rs.at("ineqs"), n);
    } else if (type == "quad_ball") {
        std::vector<Vec<F>> w;
        for (const auto& x : need(rs, "witnesses", "representing_set")) w.push_back(vec_from_json<F>(x, n));
        q = RepresentingSet<F>::quad_ball(scalar_from_json<F>(need(rs, "c", "representing_set")), w);
    } else {
        throw InputError("representing_set.type must be polytope or quad_ball");
    }
    RiskMeasure<F> check(space, q);   // validates Q against the space

    std::map<std::string, bool> expected;
    if (j.contains("expected")) {
        for (const auto& [k, b] : j.at("expected").items()) {
            if (!b.is_boolean()) throw InputError("expected." + k + " must be a boolean");
            expected[k] = b.template get<bool>();
        }
    }
    return Scenario<F>{j.value("name", std::string("unnamed")), space, numeraires, q, expected};
}

}   // namespace

template <typename F>
Json scenario_to_json(const Scenario<F>& s)
{
    const auto& space = s.space;
    Json filt = Json::array();
    for (const auto& p : space.partitions()) {
        Json blocks = Json::array();
        for (const auto& b : p.blocks()) blocks.push_back(b);
        filt.push_back(blocks);
    }
    Json nv = Json::array();
    for (Index i = 0; i < s.numeraires.width(); ++i) nv.push_back(vec_to_json<F>(s.numeraires.column(i)));
    Json rs;
    if (s.q.kind == RepKind::quad_ball) {
        rs["type"] = "quad_ball";
        rs["c"] = scalar_to_json(s.q.radius);
        rs["witnesses"] = Json::array();
        for (const auto& w : s.q.witnesses) rs["witnesses"].push_back(vec_to_json<F>(w));
    } else {
        rs["type"] = "polytope";
        if (s.q.vertices) rs["vertices"] = rows_to_json<F>(*s.q.vertices);
        if (s.q.ineqs) rs["ineqs"] = rows_to_json<F>(*s.q.ineqs);
    }
    Json out;
    out["name"] = s.name;
    out["field"] = std::string(field_name<F>());
    out["space"] = Json{{"atoms", space.atoms()}, {"probs", vec_to_json<F>(space.probs())}, {"filtration", filt}};
    out["numeraires"] = nv;
    out["representing_set"] = rs;
    Json ex = Json::object();
    for (const auto& [k, b] : s.expected) ex[k] = b;
    out["expected"] = ex;
    return out;
}

AnyScenario scenario_from_json(const Json& j)
{
    try {
        check_keys(j, {"name", "field", "space", "numeraires", "representing_set", "expected"}, "scenario");
        const std::string field = j.value("field", std::string("rational"));
        if (field == "rational") return scenario_body<Rational>(j);
        if (field == "quad2") return scenario_body<Quad2>(j);
        throw InputError("field must be rational or quad2");
    } catch (const InputError&) {
        throw;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("scenario JSON: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    } catch (const ParseError& e) {
        throw InputError(e.what());
    }
}

AnyScenario load_scenario_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw InputError("cannot open scenario file '" + path + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InputError("'" + path + "' is not valid JSON: " + e.what());
    }
    return scenario_from_json(j);
}

#define CONERISK_INSTANTIATE(F)                               \
    template Json vec_to_json<F>(const Vec<F>&);              \
    template Json rows_to_json<F>(const Mat<F>&);             \
    template Vec<F> vec_from_json<F>(const Json&, Index);     \
    template Json scenario_to_json<F>(const Scenario<F>&);

CONERISK_INSTANTIATE(Rational)
CONERISK_INSTANTIATE(Quad2)

}   // namespace conerisk
