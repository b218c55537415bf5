// integrator.hpp — Explicit Runge-Kutta propagation of matrix-valued ODEs
//
// States are dense complex matrices (density matrices); the right-hand side
// writes dy/dt into a caller-owned buffer. Output happens on the fixed record
// grid t_k = k * dt * record_stride, k = 0 .. floor(t_end / (dt * record_stride)).

#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bosedeph/fock.hpp"

namespace bosedeph {

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Method {
    RK4,          // classic fixed-step fourth order
    RK45,         // Dormand-Prince 5(4), adaptive, lands exactly on record times
    Exponential,  // exact propagator e^{L dt*stride}; time-independent generators on small spaces only
};

std::string method_name(Method m);
Method parse_method(const std::string& s);

struct IntegratorConfig {
    double dt{0.01};
    Method method{Method::RK4};
    double t_end{10.0};
    double tolerance{1e-10};
    int record_stride{10};

    std::vector<std::string> violations() const;
    void validate() const;

    std::size_t record_count() const;
    double record_time(std::size_t k) const { return static_cast<double>(k) * dt * record_stride; }
    std::vector<double> record_grid() const;
};

using Rhs = std::function<void(double t, const Matrix& y, Matrix& dydt)>;

/// Called at every record time; return false to stop integrating.
using Observer = std::function<bool(std::size_t k, double t, const Matrix& y)>;

struct IntegrationStats {
    std::size_t rhs_evaluations{0};
    std::size_t accepted_steps{0};
    std::size_t rejected_steps{0};
    bool stopped_early{false};
};

/// `autonomous` must be true for Method::Exponential (the generator is sampled
/// once at t = 0 to build the superoperator).
IntegrationStats integrate(const Rhs& f, Matrix y, const IntegratorConfig& cfg, const Observer& observe,
                           bool autonomous = false);

}  // namespace bosedeph
