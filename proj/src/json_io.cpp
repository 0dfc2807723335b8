#include "rikit/json_io.hpp"

#include <fstream>
#include <set>

namespace rikit::io {

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& where) {
    if (!j.is_object()) throw ParseError(where + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ParseError(where + ": unknown key '" + it.key() + "'");
}

double number_at(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_number())
        throw ParseError(where + ": missing numeric field '" + key + "'");
    return j[key].get<double>();
}

const json& resolve(const json& j, const json* defs, const std::string& where) {
    if (j.is_object() && j.contains("ref")) {
        check_keys(j, {"ref"}, where);
        if (!defs || !defs->contains(j["ref"].get<std::string>()))
            throw ParseError(where + ": unresolved ref '" + j["ref"].get<std::string>() + "'");
        return (*defs)[j["ref"].get<std::string>()];
    }
    return j;
}

}  // namespace

double length_from_json(const json& j) {
    if (j.is_string() && j.get<std::string>() == "inf") return kInf;
    if (j.is_number()) {
        double L = j.get<double>();
        if (!(L > 0.0)) throw ParseError("L must be positive or \"inf\"");
        return L;
    }
    throw ParseError("L must be a number or \"inf\"");
}

json length_to_json(double L) {
    if (is_infinite_length(L)) return "inf";
    return L;
}

json to_json(const StepFunction& f) {
    json cells = json::array();
    for (int i = 0; i < f.cell_count(); ++i) {
        if (f.value(i) == 0.0) continue;
        cells.push_back({{"left", f.edge(i)}, {"right", f.edge(i + 1)}, {"value", f.value(i)}});
    }
    return cells;
}

StepFunction step_from_json(const json& j) {
    const json* cells = &j;
    double L = kInf;
    if (j.is_object()) {
        check_keys(j, {"L", "cells"}, "step function");
        if (j.contains("L")) L = length_from_json(j["L"]);
        if (!j.contains("cells")) throw ParseError("step function: missing 'cells'");
        cells = &j["cells"];
    }
    if (!cells->is_array()) throw ParseError("step function: expected an array of cells");
    std::vector<StepFunction::Cell> cs;
    int idx = 0;
    for (const json& c : *cells) {
        std::string where = "cell[" + std::to_string(idx++) + "]";
        check_keys(c, {"left", "right", "value"}, where);
        cs.push_back({number_at(c, "left", where), number_at(c, "right", where),
                      number_at(c, "value", where)});
    }
    try {
        return StepFunction::from_cells(std::move(cs), L);
    } catch (const DomainError& e) {
        throw ParseError(std::string("step function: ") + e.what());
    }
}

json to_json(const Weight& w) {
    if (auto pl = w.as_power_log()) {
        json j{{"kind", "powerlog"}, {"c", pl->c}, {"a", pl->a}};
        if (!pl->b.empty()) j["b"] = pl->b;
        return j;
    }
    throw ParseError("to_json(Weight): only power-log weights serialize losslessly");
}

Weight weight_from_json(const json& raw, const json* defs) {
    const json& j = resolve(raw, defs, "weight");
    if (!j.is_object() || !j.contains("kind"))
        throw ParseError("weight: missing 'kind'");
    std::string kind = j["kind"].get<std::string>();
    Weight w = Weight::one();
    if (kind == "powerlog") {
        check_keys(j, {"kind", "c", "a", "b", "monotonicity"}, "weight powerlog");
        PowerLogWeight pl;
        pl.c = j.contains("c") ? number_at(j, "c", "powerlog") : 1.0;
        pl.a = j.contains("a") ? number_at(j, "a", "powerlog") : 0.0;
        if (j.contains("b")) {
            if (!j["b"].is_array()) throw ParseError("powerlog: 'b' must be an array");
            for (const json& x : j["b"]) pl.b.push_back(x.get<double>());
        }
        w = Weight::power_log(pl);
    } else if (kind == "tabulated") {
        check_keys(j, {"kind", "cells", "L", "monotonicity"}, "weight tabulated");
        json sub = json::object();
        if (j.contains("L")) sub["L"] = j["L"];
        sub["cells"] = j.contains("cells") ? j["cells"] : json::array();
        w = Weight::tabulated(step_from_json(sub));
    } else if (kind == "reciprocal_primitive") {
        check_keys(j, {"kind", "xi", "nu", "monotonicity"}, "weight reciprocal_primitive");
        w = Weight::reciprocal_primitive(weight_from_json(j.at("xi"), defs),
                                         bijection_from_json(j.at("nu"), defs));
    } else if (kind == "product") {
        check_keys(j, {"kind", "lhs", "rhs", "monotonicity"}, "weight product");
        w = Weight::product(weight_from_json(j.at("lhs"), defs),
                            weight_from_json(j.at("rhs"), defs));
    } else {
        throw ParseError("weight: unknown kind '" + kind + "'");
    }
    if (j.contains("monotonicity")) {
        std::string m = j["monotonicity"].get<std::string>();
        Monotonicity mono = m == "nonincreasing"   ? Monotonicity::Nonincreasing
                            : m == "nondecreasing" ? Monotonicity::Nondecreasing
                            : m == "none"          ? Monotonicity::None
                                                   : throw ParseError(
                                                         "weight: bad monotonicity '" + m + "'");
        // declared flags are trusted on load; probe verification happens at
        // hypothesis-check time
        if (mono != w.monotonicity() && mono != Monotonicity::None)
            w = Weight::custom([w](double t) { return w(t); }, w.describe(), mono);
    }
    return w;
}

Bijection bijection_from_json(const json& raw, const json* defs) {
    const json& j = resolve(raw, defs, "bijection");
    if (!j.is_object() || !j.contains("kind"))
        throw ParseError("bijection: missing 'kind'");
    std::string kind = j["kind"].get<std::string>();
    if (kind == "power") {
        check_keys(j, {"kind", "alpha", "L"}, "bijection power");
        double L = j.contains("L") ? length_from_json(j["L"]) : kInf;
        return Bijection::power(number_at(j, "alpha", "bijection power"), L);
    }
    if (kind == "composite") {
        check_keys(j, {"kind", "outer", "inner"}, "bijection composite");
        return Bijection::composite(bijection_from_json(j.at("outer"), defs),
                                    bijection_from_json(j.at("inner"), defs));
    }
    throw ParseError("bijection: unknown kind '" + kind + "'");
}

SpaceSpec space_from_json(const json& raw, const json* defs) {
    const json& j = resolve(raw, defs, "space");
    if (!j.is_object() || !j.contains("kind"))
        throw ParseError("space: missing 'kind'");
    std::string kind = j["kind"].get<std::string>();
    if (kind == "lebesgue") {
        check_keys(j, {"kind", "p", "L"}, "space lebesgue");
        double p;
        if (j.contains("p") && j["p"].is_string() && j["p"].get<std::string>() == "inf")
            p = kInf;
        else
            p = number_at(j, "p", "space lebesgue");
        double L = j.contains("L") ? length_from_json(j["L"]) : kInf;
        return SpaceSpec::lebesgue(p, L);
    }
    if (kind == "lambda1") {
        check_keys(j, {"kind", "v", "L"}, "space lambda1");
        double L = j.contains("L") ? length_from_json(j["L"]) : kInf;
        return SpaceSpec::lambda1(weight_from_json(j.at("v"), defs), L);
    }
    if (kind == "marcinkiewicz") {
        check_keys(j, {"kind", "psi", "L"}, "space marcinkiewicz");
        double L = j.contains("L") ? length_from_json(j["L"]) : kInf;
        return SpaceSpec::marcinkiewicz(weight_from_json(j.at("psi"), defs), L);
    }
    if (kind == "intersection") {
        check_keys(j, {"kind", "lhs", "rhs"}, "space intersection");
        return SpaceSpec::intersection(space_from_json(j.at("lhs"), defs),
                                       space_from_json(j.at("rhs"), defs));
    }
    if (kind == "sum") {
        check_keys(j, {"kind", "lhs", "rhs"}, "space sum");
        return SpaceSpec::sum(space_from_json(j.at("lhs"), defs),
                              space_from_json(j.at("rhs"), defs));
    }
    throw ParseError("space: unknown kind '" + kind + "'");
}

OperatorSpec operator_from_json(const json& raw, const json* defs) {
    const json& j = resolve(raw, defs, "operator");
    if (!j.is_object() || !j.contains("kind"))
        throw ParseError("operator: missing 'kind'");
    std::string kind = j["kind"].get<std::string>();
    if (kind != "R" && kind != "H")
        throw ParseError("operator: kind must be R or H here");
    check_keys(j, {"kind", "u", "v", "nu", "L"}, "operator");
    double L = j.contains("L") ? length_from_json(j["L"]) : kInf;
    Weight u = weight_from_json(j.at("u"), defs);
    Weight v = weight_from_json(j.at("v"), defs);
    Bijection nu = j.contains("nu") ? bijection_from_json(j.at("nu"), defs)
                                    : Bijection::identity(L);
    return kind == "R" ? OperatorSpec::make_R(std::move(u), std::move(v), std::move(nu), L)
                       : OperatorSpec::make_H(std::move(u), std::move(v), std::move(nu), L);
}

json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void write_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace rikit::io
