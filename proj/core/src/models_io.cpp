#include "gchain/models_io.hpp"

#include <stdexcept>

namespace gchain {

namespace {

using nlohmann::json;

const json& require(const json& j, const char* field)
{
    const auto it = j.find(field);
    if (it == j.end()) {
        throw std::invalid_argument(std::string("model schema: missing field '") + field
                                    + "'");
    }
    return *it;
}

double require_number(const json& j, const char* field)
{
    const json& v = require(j, field);
    if (!v.is_number()) {
        throw std::invalid_argument(std::string("model schema: field '") + field
                                    + "' must be a number");
    }
    return v.get<double>();
}

std::vector<double> number_list(const json& j, const char* field)
{
    const json& v = require(j, field);
    if (!v.is_array()) {
        throw std::invalid_argument(std::string("model schema: field '") + field
                                    + "' must be an array");
    }
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) {
        if (!x.is_number()) {
            throw std::invalid_argument(std::string("model schema: field '") + field
                                        + "' must contain numbers");
        }
        out.push_back(x.get<double>());
    }
    return out;
}

json psi_to_json(const PsiSpec& psi)
{
    json j;
    j["epsilon"] = psi.epsilon;
    switch (psi.kind) {
    case PsiSpec::Kind::step: j["kind"] = "step"; break;
    case PsiSpec::Kind::linear: j["kind"] = "linear"; break;
    case PsiSpec::Kind::table:
        j["kind"]  = "table";
        j["r"]     = psi.r_nodes;
        j["value"] = psi.values;
        break;
    }
    return j;
}

PsiSpec psi_from_json(const json& j)
{
    const std::string kind = require(j, "kind").get<std::string>();
    const double      eps  = require_number(j, "epsilon");
    if (kind == "step") { return PsiSpec::step(eps); }
    if (kind == "linear") { return PsiSpec::linear(eps); }
    if (kind == "table") {
        return PsiSpec::table(number_list(j, "r"), number_list(j, "value"), eps);
    }
    throw std::invalid_argument("model schema: field 'psi.kind' must be step|linear|table");
}

json phi_to_json(const PhiSpec& phi)
{
    json j;
    if (phi.kind == PhiSpec::Kind::logit) { j["kind"] = "logit"; }
    else {
        j["kind"]           = "table";
        j["r"]              = phi.r_nodes;
        j["value"]          = phi.values;
        j["lipschitzLower"] = phi.lip_lower;
        j["lipschitzUpper"] = phi.lip_upper;
    }
    return j;
}

PhiSpec phi_from_json(const json& j)
{
    const std::string kind = require(j, "kind").get<std::string>();
    if (kind == "logit") { return PhiSpec::logit(); }
    if (kind == "table") {
        return PhiSpec::table(number_list(j, "r"), number_list(j, "value"),
                              require_number(j, "lipschitzLower"),
                              require_number(j, "lipschitzUpper"));
    }
    throw std::invalid_argument("model schema: field 'phi.kind' must be logit|table");
}

json beta_to_json(const BetaSequence& beta)
{
    json j;
    j["prefix"] = beta.prefix();
    if (beta.tail().has_value()) {
        json t;
        t["c"]        = beta.tail()->c;
        t["exponent"] = beta.tail()->exponent;
        t["start"]    = beta.tail()->start;
        j["tail"]     = t;
    }
    return j;
}

BetaSequence beta_from_json(const json& j)
{
    std::vector<double>         prefix = number_list(j, "prefix");
    std::optional<PowerLawTail> tail;
    if (j.contains("tail") && !j["tail"].is_null()) {
        const json& t = j["tail"];
        PowerLawTail pt;
        pt.c        = require_number(t, "c");
        pt.exponent = require_number(t, "exponent");
        pt.start    = require(t, "start").get<std::int64_t>();
        tail        = pt;
    }
    return BetaSequence(std::move(prefix), tail);
}

} // namespace

std::string canonical_json(const BkfParams& p)
{
    json j;
    j["family"] = "bkf";
    j["m"]      = p.m;
    j["lambda"] = p.lambda;
    j["psi"]    = psi_to_json(p.psi);
    j["r0"]     = p.r0;
    return j.dump();
}

std::string canonical_json(const ArParams& p)
{
    json j;
    j["family"] = "ar";
    j["phi"]    = phi_to_json(p.phi);
    j["beta"]   = beta_to_json(p.beta);
    j["delta"]  = p.delta;
    return j.dump();
}

std::string canonical_json(const RenewalParams& p)
{
    json j;
    j["family"]  = "renewal";
    j["qPrefix"] = p.q_prefix;
    j["qInf"]    = p.q_inf;
    json t;
    switch (p.tail_kind) {
    case RenewalParams::TailKind::constant: t["kind"] = "constant"; break;
    case RenewalParams::TailKind::power:
        t["kind"]  = "power";
        t["a"]     = p.a;
        t["theta"] = p.theta;
        break;
    case RenewalParams::TailKind::geometric:
        t["kind"] = "geometric";
        t["a"]    = p.a;
        t["rho"]  = p.rho;
        break;
    }
    j["tail"] = t;
    return j.dump();
}

std::string canonical_json(const FiniteMemoryParams& p)
{
    json j;
    j["family"] = "finite-memory";
    j["order"]  = p.order;
    std::vector<std::string> symbols;
    for (int i = 0; i < p.alphabet.size(); ++i) { symbols.push_back(p.alphabet.label(i)); }
    j["symbols"] = symbols;
    if (p.alphabet.has_embedding()) {
        std::vector<double> emb;
        for (int i = 0; i < p.alphabet.size(); ++i) { emb.push_back(p.alphabet.embed(i)); }
        j["embedding"] = emb;
    }
    const auto B = static_cast<std::size_t>(p.alphabet.size());
    json       rows = json::array();
    for (std::size_t r = 0; r < p.row_count(); ++r) {
        json row = json::array();
        for (std::size_t a = 0; a < B; ++a) { row.push_back(p.table[r * B + a]); }
        rows.push_back(row);
    }
    j["table"] = rows;
    return j.dump();
}

std::shared_ptr<const Kernel> kernel_from_json(const json& j)
{
    const std::string family = require(j, "family").get<std::string>();

    if (family == "bkf") {
        BkfParams p;
        for (const auto& v : require(j, "m")) { p.m.push_back(v.get<std::int64_t>()); }
        p.lambda = number_list(j, "lambda");
        p.psi    = psi_from_json(require(j, "psi"));
        p.r0     = j.contains("r0") ? require_number(j, "r0") : 0.0;
        return make_bkf_kernel(std::move(p));
    }
    if (family == "ar") {
        ArParams p;
        p.phi   = phi_from_json(require(j, "phi"));
        p.beta  = beta_from_json(require(j, "beta"));
        p.delta = j.contains("delta") ? require_number(j, "delta") : 0.0;
        return make_ar_kernel(std::move(p));
    }
    if (family == "renewal") {
        RenewalParams p;
        p.q_prefix      = number_list(j, "qPrefix");
        p.q_inf         = require_number(j, "qInf");
        const json& t    = require(j, "tail");
        const std::string kind = require(t, "kind").get<std::string>();
        if (kind == "constant") { p.tail_kind = RenewalParams::TailKind::constant; }
        else if (kind == "power") {
            p.tail_kind = RenewalParams::TailKind::power;
            p.a         = require_number(t, "a");
            p.theta     = require_number(t, "theta");
        }
        else if (kind == "geometric") {
            p.tail_kind = RenewalParams::TailKind::geometric;
            p.a         = require_number(t, "a");
            p.rho       = require_number(t, "rho");
        }
        else {
            throw std::invalid_argument(
                "model schema: field 'tail.kind' must be constant|power|geometric");
        }
        return make_renewal_kernel(std::move(p));
    }
    if (family == "finite-memory") {
        FiniteMemoryParams p;
        p.order = require(j, "order").get<int>();
        std::vector<std::string> symbols;
        for (const auto& s : require(j, "symbols")) { symbols.push_back(s.get<std::string>()); }
        std::optional<std::vector<double>> embedding;
        if (j.contains("embedding") && !j["embedding"].is_null()) {
            embedding = number_list(j, "embedding");
        }
        p.alphabet = Alphabet(std::move(symbols), std::move(embedding));
        const json& rows = require(j, "table");
        if (!rows.is_array()) {
            throw std::invalid_argument("model schema: field 'table' must be an array of rows");
        }
        for (const auto& row : rows) {
            for (const auto& v : row) { p.table.push_back(v.get<double>()); }
        }
        return make_finite_memory_kernel(std::move(p));
    }
    if (family == "iid") {
        std::vector<double> probs = number_list(j, "probs");
        if (j.contains("symbols")) {
            std::vector<std::string> symbols;
            for (const auto& s : j["symbols"]) { symbols.push_back(s.get<std::string>()); }
            std::optional<std::vector<double>> embedding;
            if (j.contains("embedding") && !j["embedding"].is_null()) {
                embedding = number_list(j, "embedding");
            }
            return make_iid_kernel(std::move(probs),
                                   Alphabet(std::move(symbols), std::move(embedding)));
        }
        return make_iid_kernel(std::move(probs));
    }
    throw std::invalid_argument("model schema: field 'family' must be one of "
                                "bkf|ar|renewal|finite-memory|iid");
}

std::shared_ptr<const Kernel> kernel_from_json_text(const std::string& text)
{
    return kernel_from_json(json::parse(text));
}

nlohmann::json model_to_json(const Kernel& kernel)
{
    return json::parse(kernel.schema_json());
}

} // namespace gchain
