#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "json.hpp"

#include "fhk/constants.hpp"
#include "fhk/error.hpp"
#include "fhk/verify.hpp"

// Table serialization for the command-line front end.  Two encodings with
// different contracts: CSV rows are printed with 12 significant digits and
// are byte-identical across runs for identical inputs; JSON documents keep
// doubles at full precision so a dump/parse round trip recovers every value
// bit-exactly.  (One encoding cannot honor both: 12 digits is not enough to
// round-trip a double, and 17 digits is not "12 significant digits".)

namespace fhk {

// %.12g: 12 significant digits, trailing zeros trimmed, fixed exponent
// style.  snprintf with an explicit format keeps the bytes independent of
// stream locale and flag state.
inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::string(buf);
}

inline std::string format_number(int v) { return std::to_string(v); }

namespace detail {

inline std::string join_csv(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += fields[i];
    }
    return out;
}

}  // namespace detail

// ---- constants table ----------------------------------------------------

inline constexpr const char* kConstantsHeader =
    "N,beta,alpha,K,A,boundedness_residual";

inline std::string csv_row(const SharpConstantReport& r) {
    return detail::join_csv({format_number(r.params.N),
                             format_number(r.params.beta),
                             format_number(r.alpha), format_number(r.K),
                             format_number(r.A),
                             format_number(r.boundedness_residual)});
}

inline void to_json(nlohmann::json& j, const SharpConstantReport& r) {
    j = nlohmann::json{{"N", r.params.N},
                       {"beta", r.params.beta},
                       {"alpha", r.alpha},
                       {"K", r.K},
                       {"A", r.A},
                       {"boundedness_residual", r.boundedness_residual}};
}

inline void from_json(const nlohmann::json& j, SharpConstantReport& r) {
    j.at("N").get_to(r.params.N);
    j.at("beta").get_to(r.params.beta);
    j.at("alpha").get_to(r.alpha);
    j.at("K").get_to(r.K);
    j.at("A").get_to(r.A);
    j.at("boundedness_residual").get_to(r.boundedness_residual);
}

// ---- inequality reports ---------------------------------------------------

inline void to_json(nlohmann::json& j, const InequalityReport& r) {
    j = nlohmann::json{{"lhs_boundary", r.lhs_boundary},
                       {"rhs_energy", r.rhs_energy},
                       {"hardy_term", r.hardy_term},
                       {"slack", r.slack},
                       {"error_estimate", r.error_estimate}};
}

inline void from_json(const nlohmann::json& j, InequalityReport& r) {
    j.at("lhs_boundary").get_to(r.lhs_boundary);
    j.at("rhs_energy").get_to(r.rhs_energy);
    j.at("hardy_term").get_to(r.hardy_term);
    j.at("slack").get_to(r.slack);
    j.at("error_estimate").get_to(r.error_estimate);
}

// One verification-sweep line: parameter point, test-function family and
// support window, and the report for that function.
struct VerifyRow {
    int N = 0;
    double beta = 0.0;
    double alpha = 0.0;
    TestFamily family = TestFamily::BUMP;
    double r_in = 0.0;
    double r_out = 0.0;
    InequalityReport report{};
};

inline constexpr const char* kVerifyHeader =
    "N,beta,alpha,family,r_in,r_out,lhs,energy,hardy,slack,err";

inline std::string csv_row(const VerifyRow& r) {
    return detail::join_csv(
        {format_number(r.N), format_number(r.beta), format_number(r.alpha),
         to_string(r.family), format_number(r.r_in), format_number(r.r_out),
         format_number(r.report.lhs_boundary),
         format_number(r.report.rhs_energy),
         format_number(r.report.hardy_term), format_number(r.report.slack),
         format_number(r.report.error_estimate)});
}

inline TestFamily family_from_string(const std::string& s) {
    for (TestFamily f :
         {TestFamily::BUMP, TestFamily::CUTOFF_EXTREMAL,
          TestFamily::GAUSSIAN_PRODUCT, TestFamily::CUSTOM}) {
        if (s == to_string(f)) return f;
    }
    throw Error(ErrorCode::OUT_OF_DOMAIN, "unknown test family: " + s);
}

inline void to_json(nlohmann::json& j, const VerifyRow& r) {
    j = nlohmann::json{{"N", r.N},
                       {"beta", r.beta},
                       {"alpha", r.alpha},
                       {"family", to_string(r.family)},
                       {"r_in", r.r_in},
                       {"r_out", r.r_out},
                       {"lhs", r.report.lhs_boundary},
                       {"energy", r.report.rhs_energy},
                       {"hardy", r.report.hardy_term},
                       {"slack", r.report.slack},
                       {"err", r.report.error_estimate}};
}

inline void from_json(const nlohmann::json& j, VerifyRow& r) {
    j.at("N").get_to(r.N);
    j.at("beta").get_to(r.beta);
    j.at("alpha").get_to(r.alpha);
    r.family = family_from_string(j.at("family").get<std::string>());
    j.at("r_in").get_to(r.r_in);
    j.at("r_out").get_to(r.r_out);
    j.at("lhs").get_to(r.report.lhs_boundary);
    j.at("energy").get_to(r.report.rhs_energy);
    j.at("hardy").get_to(r.report.hardy_term);
    j.at("slack").get_to(r.report.slack);
    j.at("err").get_to(r.report.error_estimate);
}

// ---- Rayleigh-quotient sweep ----------------------------------------------

struct RayleighRow {
    int j = 0;             // dyadic index: window (10^-j, 10^j)
    double r_in = 0.0;
    double r_out = 0.0;
    double quotient = 0.0;
    double quotient_over_K = 0.0;
};

inline constexpr const char* kRayleighHeader =
    "j,r_in,r_out,quotient,quotient_over_K";

inline std::string csv_row(const RayleighRow& r) {
    return detail::join_csv({format_number(r.j), format_number(r.r_in),
                             format_number(r.r_out),
                             format_number(r.quotient),
                             format_number(r.quotient_over_K)});
}

inline void to_json(nlohmann::json& j, const RayleighRow& r) {
    j = nlohmann::json{{"j", r.j},
                       {"r_in", r.r_in},
                       {"r_out", r.r_out},
                       {"quotient", r.quotient},
                       {"quotient_over_K", r.quotient_over_K}};
}

inline void from_json(const nlohmann::json& j, RayleighRow& r) {
    j.at("j").get_to(r.j);
    j.at("r_in").get_to(r.r_in);
    j.at("r_out").get_to(r.r_out);
    j.at("quotient").get_to(r.quotient);
    j.at("quotient_over_K").get_to(r.quotient_over_K);
}

// ---- residual sweep ---------------------------------------------------------

struct ResidualRow {
    double rho = 0.0;
    double theta = 0.0;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

inline constexpr const char* kResidualHeader =
    "rho,theta,residual,tolerance,pass";

inline std::string csv_row(const ResidualRow& r) {
    return detail::join_csv({format_number(r.rho), format_number(r.theta),
                             format_number(r.residual),
                             format_number(r.tolerance),
                             r.pass ? "1" : "0"});
}

inline void to_json(nlohmann::json& j, const ResidualRow& r) {
    j = nlohmann::json{{"rho", r.rho},
                       {"theta", r.theta},
                       {"residual", r.residual},
                       {"tolerance", r.tolerance},
                       {"pass", r.pass}};
}

inline void from_json(const nlohmann::json& j, ResidualRow& r) {
    j.at("rho").get_to(r.rho);
    j.at("theta").get_to(r.theta);
    j.at("residual").get_to(r.residual);
    j.at("tolerance").get_to(r.tolerance);
    j.at("pass").get_to(r.pass);
}

// ---- assembly ---------------------------------------------------------------

template <typename Row>
std::string csv_table(const char* header, const std::vector<Row>& rows) {
    std::string out(header);
    out.push_back('\n');
    for (const auto& r : rows) {
        out += csv_row(r);
        out.push_back('\n');
    }
    return out;
}

template <typename Row>
std::string json_table(const std::vector<Row>& rows) {
    return nlohmann::json(rows).dump(2) + "\n";
}

}  // namespace fhk
