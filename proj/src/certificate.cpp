#include "minorant/certificate.hpp"

#include <cmath>
#include <fstream>

#include "minorant/errors.hpp"

namespace minorant {

void Certificate::validate() const {
    if (dimension < 2) throw ConfigError("certificate dimension must be >= 2");
    if (!(tau > 0.0)) throw ConfigError("certificate tau must be positive");
    if (kind == Kind::Maxwellian) {
        if (!(theta_prime > 0.0) || !std::isfinite(theta_prime)) {
            throw ConfigError("maxwellian certificate needs theta' > 0");
        }
        if (!std::isfinite(log_rho_prime)) {
            throw ConfigError("maxwellian certificate needs finite log rho'");
        }
    } else {
        if (!(C2 > 0.0) || !std::isfinite(C2)) {
            throw ConfigError("stretched certificate needs C2 > 0");
        }
        if (!(K >= 2.0)) throw ConfigError("stretched certificate needs K >= 2");
        if (!std::isfinite(log_C1)) {
            throw ConfigError("stretched certificate needs finite log C1");
        }
    }
    if (provenance.empty()) {
        throw ConfigError("certificate provenance must not be empty");
    }
}

double Certificate::log_value(const Vec& v) const {
    if (kind == Kind::Maxwellian) {
        return log_rho_prime -
               0.5 * dimension * std::log(2.0 * M_PI * theta_prime) -
               v.norm2() / (2.0 * theta_prime);
    }
    return log_C1 - C2 * std::pow(v.norm(), K);
}

double Certificate::value(const Vec& v) const {
    const double lv = log_value(v);
    return lv < -745.0 ? 0.0 : std::exp(lv);
}

nlohmann::json Certificate::to_json() const {
    nlohmann::json j;
    j["format_version"] = 1;
    j["kind"] = kind == Kind::Maxwellian ? "maxwellian" : "stretched_exp";
    j["dimension"] = dimension;
    j["tau"] = tau;
    j["R0"] = R0;
    if (kind == Kind::Maxwellian) {
        j["log_rho_prime"] = log_rho_prime;
        j["rho_prime"] = log_rho_prime < -745.0 ? 0.0 : std::exp(log_rho_prime);
        j["theta_prime"] = theta_prime;
    } else {
        j["log_C1"] = log_C1;
        j["C1"] = log_C1 < -745.0 ? 0.0 : std::exp(log_C1);
        j["C2"] = C2;
        j["K"] = K;
    }
    j["provenance"] = provenance;
    return j;
}

Certificate Certificate::from_json(const nlohmann::json& j) {
    if (!j.contains("format_version") || j.at("format_version").get<int>() != 1) {
        throw IoError("unsupported certificate format_version");
    }
    Certificate c;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "maxwellian") {
        c.kind = Kind::Maxwellian;
        c.log_rho_prime = j.at("log_rho_prime").get<double>();
        c.theta_prime = j.at("theta_prime").get<double>();
    } else if (kind == "stretched_exp") {
        c.kind = Kind::StretchedExp;
        c.log_C1 = j.at("log_C1").get<double>();
        c.C2 = j.at("C2").get<double>();
        c.K = j.at("K").get<double>();
    } else {
        throw IoError("unknown certificate kind " + kind);
    }
    c.dimension = j.at("dimension").get<int>();
    c.tau = j.at("tau").get<double>();
    c.R0 = j.at("R0").get<double>();
    c.provenance = j.at("provenance");
    return c;
}

void Certificate::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write certificate " + path);
    out << to_json().dump(2) << "\n";
}

Certificate Certificate::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open certificate " + path);
    nlohmann::json j;
    in >> j;
    return from_json(j);
}

}  // namespace minorant
