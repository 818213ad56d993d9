#ifndef MINORANT_ERRORS_HPP
#define MINORANT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace minorant {

// Base error. `infeasible` distinguishes "the configuration asks for
// something the theory or the input data cannot provide" (CLI exit 2)
// from internal failures (CLI exit 1).
class Error : public std::runtime_error {
public:
    Error(const std::string& what, bool infeasible = false)
        : std::runtime_error(what), infeasible_(infeasible) {}
    bool infeasible() const { return infeasible_; }

private:
    bool infeasible_;
};

#define MINORANT_DEFINE_ERROR(Name, is_infeasible)                       \
    class Name : public Error {                                          \
    public:                                                              \
        explicit Name(const std::string& what)                           \
            : Error(std::string(#Name) + ": " + what, is_infeasible) {}  \
    }

MINORANT_DEFINE_ERROR(QuadratureFailure, false);
MINORANT_DEFINE_ERROR(NonIntegrableAngular, true);
MINORANT_DEFINE_ERROR(NonPositiveInfimum, true);
MINORANT_DEFINE_ERROR(InvalidEps, true);
MINORANT_DEFINE_ERROR(MissingLpBound, true);
MINORANT_DEFINE_ERROR(MissingWBound, true);
MINORANT_DEFINE_ERROR(InvalidGeometry, true);
MINORANT_DEFINE_ERROR(InsufficientSamples, false);
MINORANT_DEFINE_ERROR(DegenerateSample, true);
MINORANT_DEFINE_ERROR(InvalidBounds, true);
MINORANT_DEFINE_ERROR(NoAdmissibleEps, true);
MINORANT_DEFINE_ERROR(InvalidSchedule, true);
MINORANT_DEFINE_ERROR(InvalidKappa, true);
MINORANT_DEFINE_ERROR(DegenerateEnvelope, true);
MINORANT_DEFINE_ERROR(UnstableStep, false);
MINORANT_DEFINE_ERROR(InvalidS, true);
MINORANT_DEFINE_ERROR(ConfigError, true);
MINORANT_DEFINE_ERROR(IoError, false);

#undef MINORANT_DEFINE_ERROR

}  // namespace minorant

#endif
