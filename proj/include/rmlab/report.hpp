#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "rmlab/lattice.hpp"
#include "rmlab/padic.hpp"
#include "rmlab/quadfield.hpp"

namespace rmlab {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "rmlab/1";
inline constexpr const char* kCodeVersion = "0.1.0";

// {p, N, v, abs_prec, unit: [digits_a, digits_b]} with base-p little-endian digit arrays; zero has v = null.
json padic_to_json(const PadicScalar& x);
PadicScalar padic_from_json(const json& j, const PadicCtx& ctx);
json form_to_json(const QuadForm& f);
json poly_to_json(const IntPoly& f);
json mpq_to_json(const mpq_class& q);  // "a/b" string

// Versioned machine-readable report. Numeric claims carry their comparison precision in `certificates`.
struct Report {
    std::string command;
    json config = json::object();
    json results = json::object();
    json certificates = json::object();
    json timings = json::object();
    bool pass = true;
    std::vector<std::string> notes;

    json to_json() const;
    // Same without timings (used to compare cached and fresh runs).
    json payload() const;
    // Inverse of payload(); throws std::invalid_argument on a foreign schema.
    static Report from_payload(const json& j);
};

}  // namespace rmlab
