#ifndef MOYAL_STATES_HPP
#define MOYAL_STATES_HPP

#include "moyal/core_ops.hpp"

#include <string>
#include <variant>
#include <vector>

namespace moyal {

struct TwoPointOperator;

// Pure states of the truncated algebra, in the compact text grammar of the CLI:
//   eig:m | coh:m:k1,k2 | sph:m,n:x,y,z | vec:c0,c1,...
struct Eigenstate {
    int m = 0;
};
struct Coherent {
    int m = 0;
    Vec2 kappa = Vec2::Zero();
};
struct Sphere {
    int m = 0, n = 1;
    double x = 0, y = 0, z = 1;
};
struct VectorState {
    std::vector<Complex> coeffs;
};

struct StateSpec {
    std::variant<Eigenstate, Coherent, Sphere, VectorState> v;

    StateSpec(Eigenstate e) : v(e) { check(); }
    StateSpec(Coherent c) : v(c) { check(); }
    StateSpec(Sphere s) : v(s) { check(); }
    StateSpec(VectorState w) : v(std::move(w)) { check(); }

    void check() const;
    std::string text() const;

    /// Smallest truncation at which the spec is realizable at all.
    int min_dim() const;
};

StateSpec parse_state(const std::string& text);

/// Unit coefficient vector of the state at truncation n.
CVector realize(const StateSpec& spec, int n, double lambda_p, double tol = 1e-8);

/// One-point expectation <psi, A psi>.
Complex evaluate(const StateSpec& spec, const TruncatedOperator& op);

/// Separable two-point expectation <psi1 x psi2, B (psi1 x psi2)>.
Complex evaluate_pair(const StateSpec& s1, const StateSpec& s2, const TwoPointOperator& b);

/// Bloch-type coordinates of a two-component vector state, Sphere inverse map.
struct SphereCoords {
    int m = 0, n = 0;
    double x = 0, y = 0, z = 0;
};
SphereCoords sphere_coords(const StateSpec& spec);

}  // namespace moyal

#endif
