#pragma once

#include <stdexcept>
#include <string>

namespace nullcurve {

struct SingularElement : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularOrbit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FrameDegenerate : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotNormalized : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotNull : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FlexPoint : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IntegrationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Blow-up along the flow; carries the last time reached before abort.
struct NonFiniteState : std::runtime_error {
    double t_reached;
    NonFiniteState(const std::string& msg, double t) : std::runtime_error(msg), t_reached(t) {}
};

struct DegenerateCubic : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NearPole : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct WrongBranch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotInIsotropy : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace nullcurve
