#include <quadlift/certificate.hpp>

#include <quadlift/errors.hpp>

#include <json.hpp>

namespace quadlift {

namespace {

using Json = nlohmann::ordered_json;

const char *status_name(SearchStatus s)
{
    switch (s) {
    case SearchStatus::Found:
        return "found";
    case SearchStatus::BudgetExceeded:
        return "budget-exceeded";
    case SearchStatus::NoneUpToOrder:
        return "none-up-to-order";
    }
    return "unknown";
}

} // namespace

std::string certificate_to_json(const CertificateInfo &info)
{
    if (info.original == nullptr || info.polynomial == nullptr) {
        throw std::invalid_argument("certificate_to_json: original and polynomial systems are required");
    }
    const PolySystem &base = *info.polynomial;
    const PolySystem &fin = info.quad != nullptr ? info.quad->system : base;
    const auto base_names = base.names();
    const auto names = fin.names();

    Json doc;
    doc["system"] = print_system(*info.original);

    Json lifting = Json::array();
    for (const auto &lv : fin.lifted) {
        Json e;
        e["name"] = lv.name;
        e["definition"] = to_string(lv.definition);
        e["provenance"] = lv.provenance;
        lifting.push_back(std::move(e));
    }
    doc["lifting"] = std::move(lifting);

    Json gens = Json::array();
    if (info.quad != nullptr) {
        for (const auto &g : info.quad->generators) {
            gens.push_back(render_monomial(g, base_names));
        }
    }
    doc["generators"] = std::move(gens);

    Json q1 = Json::object();
    Json q2 = Json::object();
    for (std::size_t i = 0; i < fin.dynamic_count(); ++i) {
        const std::string row = fin.rhs.at(i).to_string(names);
        if (fin.role(i) == VarRole::State) {
            q1[names[i]] = row;
        } else {
            q2[names[i]] = row;
        }
    }
    doc["q1"] = std::move(q1);
    doc["q2"] = std::move(q2);

    Json decs = Json::array();
    Json elims = Json::array();
    if (info.quad != nullptr) {
        for (const auto &d : info.quad->decompositions) {
            decs.push_back(Json{{"target", render_monomial(d.target, base_names)},
                                {"left", render_monomial(d.left, base_names)},
                                {"right", render_monomial(d.right, base_names)}});
        }
        for (const auto &e : info.quad->eliminations) {
            elims.push_back(Json{{"name", e.name}, {"replacement", e.replacement}});
        }
    }
    doc["decompositions"] = std::move(decs);
    doc["eliminations"] = std::move(elims);

    Json stats = Json::object();
    stats["order"] = fin.lifted.size();
    stats["polynomialization_order"] = base.lifted.size();
    if (info.search != nullptr) {
        const SearchStats &s = info.search->stats;
        stats["status"] = status_name(info.search->status);
        stats["nodes_expanded"] = s.nodes_expanded;
        stats["nodes_generated"] = s.nodes_generated;
        stats["lattice_size"] = s.lattice_size;
        stats["max_order"] = info.search->max_order;
        Json hist = Json::array();
        for (const auto &[nodes, order] : s.incumbent_history) {
            hist.push_back(Json::array({nodes, order}));
        }
        stats["incumbent_history"] = std::move(hist);
    }
    doc["stats"] = std::move(stats);
    doc["optimal"] = info.optimal;
    doc["mode"] = info.mode;

    if (info.report) {
        Json rep;
        rep["symbolic_ok"] = info.report->symbolic_ok;
        Json res = Json::object();
        for (const auto &r : info.report->residuals) {
            res[r.variable] = r.residual;
        }
        rep["residuals"] = std::move(res);
        if (!info.report->numeric_max_error.empty()) {
            Json num = Json::object();
            for (const auto &[n, e] : info.report->numeric_max_error) {
                num[n] = e;
            }
            rep["numeric_max_error"] = std::move(num);
        }
        doc["report"] = std::move(rep);
    }
    return doc.dump(2) + "\n";
}

Polynomial parse_row(std::string_view text, const PolySystem &sys)
{
    SymbolTable table;
    for (std::size_t i = 0; i < sys.nvars(); ++i) {
        table.symbols.emplace(sys.name(i), sys.symbol(i));
    }
    for (std::size_t j = 0; j < sys.inputs.size(); ++j) {
        table.derivative_symbols.emplace(sys.inputs[j], sys.symbol(sys.input_derivative_index(j)));
    }
    for (const auto &p : sys.parameters) {
        table.symbols.emplace(p, Expr::parameter(p));
    }
    const Expr e = parse_expression(text, table);
    auto res = to_polynomial(e, conversion_context(sys, true));
    if (auto *p = std::get_if<Polynomial>(&res)) {
        return *p;
    }
    throw Error("row is not polynomial: " + std::string(text));
}

LoadedCertificate certificate_from_json(std::string_view text)
{
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw Error(std::string("malformed certificate: ") + e.what());
    }
    for (const char *key : {"system", "lifting", "q1", "q2", "mode", "optimal"}) {
        if (!doc.contains(key)) {
            throw Error(std::string("certificate is missing the key '") + key + "'");
        }
    }
    LoadedCertificate out;
    try {
        out.original = parse_system(doc["system"].get<std::string>());
        out.mode = doc["mode"].get<std::string>();
        out.optimal = doc["optimal"].get<bool>();

        const SymbolTable table = symbol_table(out.original);
        PolySystem &sys = out.system;
        for (const auto &[name, row] : doc["q1"].items()) {
            sys.states.push_back(name);
        }
        for (const auto &e : doc["lifting"]) {
            LiftedVar lv;
            lv.name = e.at("name").get<std::string>();
            lv.definition = parse_expression(e.at("definition").get<std::string>(), table);
            lv.provenance = e.value("provenance", "");
            sys.lifted.push_back(std::move(lv));
        }
        sys.inputs = out.original.inputs;
        sys.parameters = out.original.parameters;
        sys.assumptions = out.original.assumptions;
        for (const auto &[name, row] : doc["q1"].items()) {
            sys.rhs.push_back(parse_row(row.get<std::string>(), sys));
        }
        for (const auto &lv : sys.lifted) {
            if (!doc["q2"].contains(lv.name)) {
                throw Error("certificate has no row for '" + lv.name + "'");
            }
            sys.rhs.push_back(parse_row(doc["q2"][lv.name].get<std::string>(), sys));
        }
    } catch (const nlohmann::json::exception &e) {
        throw Error(std::string("malformed certificate: ") + e.what());
    }
    return out;
}

} // namespace quadlift
