#include "choicelab/json_io.hpp"

#include <cmath>

namespace choicelab::io {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError("document: " + what);
}

const json& field(const json& j, const char* key) {
    require(j.is_object(), std::string("expected object holding '") + key + "'");
    const auto it = j.find(key);
    require(it != j.end(), std::string("missing field '") + key + "'");
    return *it;
}

}  // namespace

json to_json(const Universe& u) { return json(u.labels()); }

Universe universe_from_json(const json& j) {
    require(j.is_array(), "universe must be an array of labels");
    std::vector<std::string> labels;
    for (const auto& l : j) {
        require(l.is_string(), "universe labels must be strings");
        labels.push_back(l.get<std::string>());
    }
    return make_universe(labels);
}

json to_json(const RiskProfile& p) { return json{{"values", p.rows()}}; }

RiskProfile profile_from_json(const json& j) {
    const json& v = j.contains("values") ? j["values"] : j;
    require(v.is_array() && !v.empty(), "profile values must be a nonempty array of rows");
    std::vector<std::vector<double>> rows;
    for (std::size_t e = 0; e < v.size(); ++e) {
        const auto& row = v[e];
        require(row.is_array(), "profile row " + std::to_string(e + 1) + " must be an array");
        std::vector<double> r;
        for (const auto& cell : row) {
            require(cell.is_number(),
                    "profile row " + std::to_string(e + 1) + " holds a non-numeric entry");
            r.push_back(cell.get<double>());
        }
        rows.push_back(std::move(r));
    }
    return RiskProfile::from_rows(rows);  // re-validates finiteness and shape
}

json to_json(const OrdinalProfile& p) { return json{{"ranks", p.rows()}}; }

OrdinalProfile ordinal_from_json(const json& j) {
    const json& v = field(j, "ranks");
    require(v.is_array() && !v.empty(), "ordinal ranks must be a nonempty array of rows");
    std::vector<std::vector<int>> rows;
    for (const auto& row : v) {
        require(row.is_array(), "ordinal rank rows must be arrays");
        std::vector<int> r;
        for (const auto& cell : row) {
            require(cell.is_number_integer(), "ordinal ranks must be integers");
            r.push_back(cell.get<int>());
        }
        rows.push_back(std::move(r));
    }
    return OrdinalProfile::from_ranks(rows);
}

json menu_to_json(const Menu& menu, const Universe& u) {
    json out = json::array();
    for (int h : menu) out.push_back(u.label(h));
    return out;
}

Menu menu_from_json(const json& j, const Universe& u) {
    require(j.is_array() && !j.empty(), "menu must be a nonempty array of labels");
    std::vector<int> ids;
    for (const auto& l : j) {
        require(l.is_string(), "menu members must be labels");
        const int h = u.index_of(l.get<std::string>());
        require(h >= 0, "menu member '" + l.get<std::string>() + "' is not in the universe");
        ids.push_back(h);
    }
    return Menu(ids);
}

json to_json(const ChoiceCorrespondence& cc, const Universe& u) {
    json out = json::array();
    for (const auto& [menu, chosen] : cc)
        out.push_back(json{{"menu", menu_to_json(menu, u)}, {"chosen", menu_to_json(chosen, u)}});
    return out;
}

ChoiceCorrespondence cc_from_json(const json& j, const Universe& u) {
    require(j.is_array(), "correspondence must be an array of {menu, chosen} entries");
    ChoiceCorrespondence cc;
    for (const auto& entry : j)
        cc.set(menu_from_json(field(entry, "menu"), u),
               menu_from_json(field(entry, "chosen"), u));
    return cc;
}

json profile_document(const RiskProfile& p, const Universe& u) {
    if (u.size() != p.hypotheses())
        throw ValidationError("profile document: universe and profile widths differ");
    return json{{"schema_version", kSchemaVersion},
                {"kind", "risk_profile"},
                {"universe", to_json(u)},
                {"values", p.rows()}};
}

std::pair<RiskProfile, Universe> profile_document_parse(const json& j) {
    require(field(j, "kind").get<std::string>() == "risk_profile",
            "expected kind 'risk_profile'");
    Universe u = universe_from_json(field(j, "universe"));
    RiskProfile p = profile_from_json(field(j, "values"));
    require(p.hypotheses() == u.size(), "universe and profile widths differ");
    return {std::move(p), std::move(u)};
}

namespace {

void validate_verdict(const json& v) {
    require(field(v, "axiom").is_string(), "verdict 'axiom' must be a string");
    require(field(v, "passed").is_boolean(), "verdict 'passed' must be a boolean");
    require(field(v, "checked_count").is_number_integer(),
            "verdict 'checked_count' must be an integer");
    if (v.contains("witness")) {
        const json& w = v["witness"];
        require(field(w, "menus").is_array(), "witness 'menus' must be an array");
        require(field(w, "profiles").is_array(), "witness 'profiles' must be an array");
        require(field(w, "choices").is_array(), "witness 'choices' must be an array");
        require(field(w, "note").is_string(), "witness 'note' must be a string");
    }
}

void validate_domain(const json& d) {
    require(field(d, "alternatives").is_number_integer(),
            "domain 'alternatives' must be an integer");
    require(field(d, "environments").is_number_integer(),
            "domain 'environments' must be an integer");
}

}  // namespace

void validate_report(const json& j) {
    require(j.is_object(), "report must be an object");
    require(field(j, "schema_version").is_number_integer() &&
                j["schema_version"].get<int>() == kSchemaVersion,
            "unsupported schema_version");
    const std::string kind = field(j, "kind").get<std::string>();
    if (kind == "risk_profile") {
        profile_document_parse(j);
        return;
    }
    if (kind == "axiom_report") {
        require(field(field(j, "rule"), "name").is_string(), "rule 'name' must be a string");
        validate_domain(field(j, "domain"));
        require(field(j, "seed").is_number_integer(), "'seed' must be an integer");
        require(field(j, "samples").is_number_integer(), "'samples' must be an integer");
        const json& axioms = field(j, "axioms");
        require(axioms.is_array() && !axioms.empty(), "'axioms' must be a nonempty array");
        for (const auto& v : axioms) validate_verdict(v);
        return;
    }
    if (kind == "survivor_report") {
        validate_domain(field(j, "domain"));
        require(field(j, "axioms").is_array(), "'axioms' must be an array");
        require(field(j, "survivor_count").is_number_integer(),
                "'survivor_count' must be an integer");
        require(field(j, "all_dictatorial").is_boolean(),
                "'all_dictatorial' must be a boolean");
        require(field(j, "survivors").is_array(), "'survivors' must be an array");
        require(field(j, "nodes_explored").is_number_integer(),
                "'nodes_explored' must be an integer");
        for (const auto& s : j["survivors"]) {
            require(field(s, "tables").is_array() && s["tables"].size() == 3,
                    "survivor 'tables' must list three pair tables");
        }
        return;
    }
    if (kind == "decisiveness_trace") {
        require(field(j, "environments").is_number_integer(),
                "'environments' must be an integer");
        require(field(j, "steps").is_array(), "'steps' must be an array");
        require(field(j, "terminal").is_array() && j["terminal"].size() == 1,
                "'terminal' must be a singleton set");
        for (const auto& s : j["steps"]) {
            require(field(s, "set").is_array(), "step 'set' must be an array");
            require(field(s, "branch").is_string(), "step 'branch' must be a string");
            require(field(s, "local_check").is_boolean(),
                    "step 'local_check' must be a boolean");
        }
        return;
    }
    throw ValidationError("document: unknown kind '" + kind + "'");
}

}  // namespace choicelab::io
