#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <quadlift/parser.hpp>
#include <quadlift/poly.hpp>
#include <quadlift/quadratizer.hpp>
#include <quadlift/verifier.hpp>

namespace quadlift {

struct CertificateInfo {
    const SystemAST *original = nullptr;
    /// System after polynomialization (the base of the quadratization).
    const PolySystem *polynomial = nullptr;
    const QuadCertificate *quad = nullptr;
    const SearchResult *search = nullptr;
    /// "polynomial", "standard", "laurent", "inputs" or "input-free".
    std::string mode;
    bool optimal = false;
    std::optional<VerificationReport> report;
};

/// JSON document with top-level keys system, lifting, generators, q1, q2,
/// decompositions, eliminations, stats, optimal, mode and report. Output is
/// deterministic for identical inputs.
std::string certificate_to_json(const CertificateInfo &info);

struct LoadedCertificate {
    SystemAST original;
    /// Final system with definitions over the original variables.
    PolySystem system;
    std::string mode;
    bool optimal = false;
};

/// Reads a document produced by certificate_to_json. Throws Error on malformed input.
LoadedCertificate certificate_from_json(std::string_view text);

/// Parses row expressions over the variables of `sys` into a polynomial.
Polynomial parse_row(std::string_view text, const PolySystem &sys);

} // namespace quadlift
