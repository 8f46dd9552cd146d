#include "rmlab/report.hpp"

#include <stdexcept>

namespace rmlab {

json padic_to_json(const PadicScalar& x) {
    json j;
    j["p"] = x.p();
    j["N"] = x.ctx()->N();
    if (x.is_zero()) {
        j["v"] = nullptr;
        j["abs_prec"] = x.abs_prec() >= PadicScalar::kExact ? json(nullptr) : json(x.abs_prec());
        j["unit"] = json::array({json::array(), json::array()});
        return j;
    }
    j["v"] = x.valuation();
    j["abs_prec"] = x.abs_prec();
    j["unit"] = json::array({x.digits(0), x.digits(1)});
    return j;
}

PadicScalar padic_from_json(const json& j, const PadicCtx& ctx) {
    if (j.at("p").get<long>() != ctx->p()) throw std::invalid_argument("p-adic value: prime mismatch");
    if (j.at("v").is_null()) {
        int ap = j.at("abs_prec").is_null() ? PadicScalar::kExact : j.at("abs_prec").get<int>();
        return PadicScalar::zero(ctx, ap);
    }
    int v = j.at("v").get<int>();
    int ap = j.at("abs_prec").get<int>();
    mpz_class coord[2];
    for (int c = 0; c < 2; ++c) {
        mpz_class pk = 1;
        for (long d : j.at("unit").at(static_cast<size_t>(c))) {
            coord[c] += pk * d;
            pk *= ctx->p();
        }
    }
    return PadicScalar::from_coords(ctx, coord[0], coord[1], v, ap);
}

json form_to_json(const QuadForm& f) { return json::array({f.A, f.B, f.C}); }

json poly_to_json(const IntPoly& f) {
    json a = json::array();
    for (const auto& c : f) a.push_back(c.get_str());
    return a;
}

json mpq_to_json(const mpq_class& q) { return q.get_str(); }

json Report::payload() const {
    json j;
    j["schema"] = kSchema;
    j["version"] = kCodeVersion;
    j["command"] = command;
    j["config"] = config;
    j["results"] = results;
    j["certificates"] = certificates;
    j["status"] = pass ? "pass" : "fail";
    j["notes"] = notes;
    return j;
}

Report Report::from_payload(const json& j) {
    if (j.value("schema", "") != kSchema) throw std::invalid_argument("report: unknown schema");
    Report r;
    r.command = j.at("command").get<std::string>();
    r.config = j.at("config");
    r.results = j.at("results");
    r.certificates = j.at("certificates");
    r.pass = j.at("status").get<std::string>() == "pass";
    r.notes = j.at("notes").get<std::vector<std::string>>();
    return r;
}

json Report::to_json() const {
    json j = payload();
    j["timings"] = timings;
    return j;
}

}  // namespace rmlab
