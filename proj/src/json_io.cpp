#include "diffinv/json_io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "diffinv/expr_io.hpp"

namespace diffinv {

namespace {

using json = nlohmann::ordered_json;

MIdx parse_midx(const std::string& key, int dim) {
    MIdx a;
    std::stringstream ss(key);
    std::string part;
    while (std::getline(ss, part, ','))
        a.push_back((unsigned)std::stoul(part));
    if ((int)a.size() != dim)
        throw std::invalid_argument("multi-index '" + key + "' does not match dim");
    return a;
}

} // namespace

OperatorDoc load_operator_text(const std::string& text) {
    json j = json::parse(text);
    OperatorDoc doc;
    doc.dim = j.at("dim").get<int>();
    if (doc.dim != 1 && doc.dim != 2)
        throw std::invalid_argument("dim must be 1 or 2");
    std::vector<std::string> vars = j.at("vars").get<std::vector<std::string>>();
    if ((int)vars.size() != doc.dim)
        throw std::invalid_argument("vars must list one name per dimension");
    doc.family = j.value("family", false);
    if (doc.family) vars.push_back("y");
    VarSet vs(vars);

    auto coeffs = j.at("coeffs");
    if (doc.family) {
        doc.fam = OperatorFamily{doc.dim, vs, (size_t)doc.dim, {}};
        for (auto it = coeffs.begin(); it != coeffs.end(); ++it)
            doc.fam.set_coeff(parse_midx(it.key(), doc.dim),
                              parse_expr(it.value().get<std::string>(), vs));
    } else {
        doc.op = LinDiffOp{doc.dim, vs, {}};
        for (auto it = coeffs.begin(); it != coeffs.end(); ++it)
            doc.op.set_coeff(parse_midx(it.key(), doc.dim),
                             parse_expr(it.value().get<std::string>(), vs));
    }
    return doc;
}

OperatorDoc load_operator_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open operator file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_operator_text(ss.str());
}

std::string operator_json_text(const OperatorDoc& doc) {
    json j;
    j["dim"] = doc.dim;
    const VarSet& vs = doc.family ? doc.fam.vars : doc.op.vars;
    std::vector<std::string> vars;
    for (int i = 0; i < doc.dim; ++i) vars.push_back(vs.name((size_t)i));
    j["vars"] = vars;
    json coeffs = json::object();
    if (doc.family) {
        for (const auto& [a, c] : doc.fam.coeffs) coeffs[midx_key(a)] = to_string(c);
    } else {
        for (const auto& [a, c] : doc.op.coeffs) coeffs[midx_key(a)] = to_string(c);
    }
    j["coeffs"] = coeffs;
    j["family"] = doc.family;
    return j.dump(2) + "\n";
}

void save_operator_file(const std::string& path, const OperatorDoc& doc) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write operator file: " + path);
    out << operator_json_text(doc);
}

OperatorDoc doc_of(const LinDiffOp& op) {
    OperatorDoc d;
    d.family = false;
    d.dim = op.dim;
    d.op = op;
    return d;
}

OperatorDoc doc_of(const OperatorFamily& fam) {
    OperatorDoc d;
    d.family = true;
    d.dim = fam.dim;
    d.fam = fam;
    return d;
}

} // namespace diffinv
