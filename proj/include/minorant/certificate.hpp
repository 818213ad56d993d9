#ifndef MINORANT_CERTIFICATE_HPP
#define MINORANT_CERTIFICATE_HPP

#include <string>

#include <json.hpp>

#include "minorant/grid.hpp"

namespace minorant {

// The final lower-bound object. Heights are stored in natural-log form:
// honest cascade constants routinely fall below the smallest positive
// double, so the linear fields are derived conveniences.
struct Certificate {
    enum class Kind { Maxwellian, StretchedExp };

    Kind kind = Kind::Maxwellian;
    int dimension = 3;
    double tau = 0.0;
    double R0 = 0.0;

    // maxwellian: f >= rho' (2 pi theta')^{-N/2} exp(-|v|^2 / (2 theta'))
    double log_rho_prime = 0.0;
    double theta_prime = 0.0;

    // stretched exponential: f >= C1 exp(-C2 |v|^K)
    double log_C1 = 0.0;
    double C2 = 0.0;
    double K = 0.0;

    nlohmann::json provenance = nlohmann::json::object();

    void validate() const;  // throws ConfigError on malformed fields

    double log_value(const Vec& v) const;
    double value(const Vec& v) const;  // exp(log_value), 0 on underflow

    nlohmann::json to_json() const;
    static Certificate from_json(const nlohmann::json& j);
    void save(const std::string& path) const;
    static Certificate load(const std::string& path);
};

}  // namespace minorant

#endif
