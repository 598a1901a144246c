#include "starq/json_io.hpp"

#include <fstream>

namespace starq {

namespace {

[[noreturn]] void bad(const std::string& what)
{
    throw std::invalid_argument("invalid input: " + what);
}

int int_field(const Json& j, const char* name)
{
    if (!j.contains(name) || !j[name].is_number_integer())
        bad(std::string("missing integer field \"") + name + "\"");
    return j[name].get<int>();
}

MultiIndex exp_from_json(const Json& j, int n)
{
    if (!j.is_array() || static_cast<int>(j.size()) != n)
        bad("\"exp\" must be an array of " + std::to_string(n) + " naturals");
    std::vector<int> comps;
    comps.reserve(n);
    for (const auto& v : j) {
        if (!v.is_number_integer() || v.get<int>() < 0)
            bad("\"exp\" entries must be nonnegative integers");
        comps.push_back(v.get<int>());
    }
    return MultiIndex(std::move(comps));
}

Rational coeff_from_json(const Json& j)
{
    if (j.is_string()) return rational_from_string(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    bad("\"coeff\" must be a rational string or an integer");
}

} // namespace

Json poly_to_json(const Poly& f)
{
    Json arr = Json::array();
    for (const auto& [e, q] : f.terms()) {
        Json term;
        term["exp"] = e.components();
        term["coeff"] = rational_to_string(q);
        arr.push_back(std::move(term));
    }
    return arr;
}

Poly poly_from_json(const Json& j, int n)
{
    if (j.is_string()) return parse_poly(j.get<std::string>(), n);
    if (!j.is_array()) bad("polynomial must be a monomial array or an expression string");
    Poly f(n);
    for (const auto& term : j) {
        if (!term.is_object() || !term.contains("exp") || !term.contains("coeff"))
            bad("monomial must be {\"exp\":[...],\"coeff\":...}");
        f.add_term(exp_from_json(term["exp"], n), coeff_from_json(term["coeff"]));
    }
    return f;
}

Json cochain_to_json(const Cochain& phi)
{
    Json out;
    out["arity"] = phi.arity();
    Json terms = Json::array();
    for (const auto& [key, val] : phi.terms()) {
        Json t;
        Json k = Json::array();
        for (const auto& a : key) k.push_back(a.components());
        t["key"] = std::move(k);
        t["poly"] = poly_to_json(val);
        terms.push_back(std::move(t));
    }
    out["terms"] = std::move(terms);
    return out;
}

Cochain cochain_from_json(const Json& j, int n, bool tilde)
{
    int p = int_field(j, "arity");
    if (p < 1) bad("\"arity\" must be >= 1");
    Cochain phi(p, n, tilde);
    if (!j.contains("terms") || !j["terms"].is_array()) bad("missing \"terms\" array");
    for (const auto& t : j["terms"]) {
        if (!t.is_object() || !t.contains("key") || !t.contains("poly"))
            bad("cochain term must be {\"key\":[...],\"poly\":...}");
        const Json& k = t["key"];
        if (!k.is_array() || static_cast<int>(k.size()) != p)
            bad("cochain key must list " + std::to_string(p) + " multi-indices");
        CochainKey key;
        key.reserve(p);
        for (const auto& a : k) key.push_back(exp_from_json(a, n));
        phi.add_term(key, poly_from_json(t["poly"], n));
    }
    return phi;
}

Json poisson_to_json(const PoissonStructure& ps)
{
    Json out;
    out["dimension"] = ps.n;
    Json omega = Json::array();
    for (const auto& [ij, w] : ps.upper) {
        Json entry;
        entry["i"] = ij.first + 1;
        entry["j"] = ij.second + 1;
        entry["poly"] = poly_to_json(w);
        omega.push_back(std::move(entry));
    }
    out["omega"] = std::move(omega);
    return out;
}

PoissonStructure poisson_from_json(const Json& j)
{
    if (!j.is_object()) bad("top level must be an object");
    int n = int_field(j, "dimension");
    if (n < 1) bad("\"dimension\" must be >= 1");
    PoissonStructure ps(n);
    if (!j.contains("omega") || !j["omega"].is_array()) bad("missing \"omega\" array");
    for (const auto& entry : j["omega"]) {
        int i = int_field(entry, "i");
        int jj = int_field(entry, "j");
        if (i < 1 || jj <= i || jj > n)
            bad("omega entry needs 1 <= i < j <= n, got i=" + std::to_string(i) +
                " j=" + std::to_string(jj));
        if (ps.upper.count({i - 1, jj - 1}))
            bad("duplicate omega entry (" + std::to_string(i) + "," + std::to_string(jj) +
                ")");
        if (!entry.contains("poly")) bad("omega entry is missing \"poly\"");
        ps.set(i - 1, jj - 1, poly_from_json(entry["poly"], n));
    }
    return ps;
}

Json star_to_json(const StarProduct& s)
{
    Json out;
    out["n"] = s.structure.n;
    out["omega"] = poisson_to_json(s.structure)["omega"];
    out["order"] = s.order;
    out["gauge"] = s.gauge;
    Json pis = Json::array();
    for (int k = 1; k <= s.order; ++k) {
        Json entry;
        entry["k"] = k;
        entry["terms"] = cochain_to_json(s.pis[k - 1])["terms"];
        pis.push_back(std::move(entry));
    }
    out["pi"] = std::move(pis);
    return out;
}

StarProduct star_from_json(const Json& j)
{
    if (!j.is_object()) bad("top level must be an object");
    int n = int_field(j, "n");
    if (n < 1) bad("\"n\" must be >= 1");
    Json ps_json;
    ps_json["dimension"] = n;
    ps_json["omega"] = j.contains("omega") ? j["omega"] : Json::array();

    StarProduct s;
    s.structure = poisson_from_json(ps_json);
    s.order = int_field(j, "order");
    if (s.order < 1) bad("\"order\" must be >= 1");
    s.gauge = j.contains("gauge") && j["gauge"].is_string() ? j["gauge"].get<std::string>()
                                                            : "zero";
    if (!j.contains("pi") || !j["pi"].is_array() ||
        static_cast<int>(j["pi"].size()) != s.order)
        bad("\"pi\" must list the orders 1.." + std::to_string(s.order));
    s.pis.assign(s.order, Cochain(2, n, true));
    std::vector<bool> seen(s.order, false);
    for (const auto& entry : j["pi"]) {
        int k = int_field(entry, "k");
        if (k < 1 || k > s.order) bad("pi order k out of range");
        if (seen[k - 1]) bad("duplicate pi order k=" + std::to_string(k));
        seen[k - 1] = true;
        Json c;
        c["arity"] = 2;
        c["terms"] = entry.contains("terms") ? entry["terms"] : Json::array();
        s.pis[k - 1] = cochain_from_json(c, n, true);
    }
    return s;
}

Json matrix_to_json(const BlockMatrix& m, int p, const MultiIndex& l, bool tilde)
{
    if (!m.row_basis || !m.col_basis)
        throw std::logic_error("matrix_to_json needs a matrix with basis tuples");
    auto tuple_list = [](const BlockBasis& b) {
        Json arr = Json::array();
        for (const auto& key : b.tuples) {
            Json t = Json::array();
            for (const auto& a : key) t.push_back(a.components());
            arr.push_back(std::move(t));
        }
        return arr;
    };
    Json out;
    out["p"] = p;
    out["l"] = l.components();
    out["tilde"] = tilde;
    out["rows"] = tuple_list(*m.row_basis);
    out["cols"] = tuple_list(*m.col_basis);
    Json entries = Json::array();
    for (const auto& [rc, q] : m.entries())
        entries.push_back(Json::array({rc.first, rc.second, rational_to_string(q)}));
    out["entries"] = std::move(entries);
    return out;
}

std::string dump_json(const Json& j)
{
    return j.dump(2) + "\n";
}

Json load_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open input file: " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("JSON parse error in " + path + ": " + e.what());
    }
}

} // namespace starq
