#pragma once

#include "torpid/types.hpp"

namespace torpid {

/// Binary entropy, base 2, with H(0) = H(1) = 0 by continuity.
double binary_entropy(double x);

/// The unique root of H(x) + x = 1 on (0, 1/2); the largest feasible
/// locality fraction for the whole analytic machinery.
double rho_star();

/// Largest a in [0, 1/2 - rho] with
///   2a + rho + H(a) + H(rho + a) <= (1 + rho + H(rho)) / 2.
/// The left side is strictly increasing on the interval, so bisection is
/// exact to ~1e-10. Requires H(rho) + rho < 1. Strictly positive.
double alpha_threshold(double rho);

/// Exact check of sum_{i<=floor(beta*M)} C(M,i) <= 2^(H(beta)*M), beta <= 1/2.
/// Big-integer left side against the entropy exponent; M <= 1000.
bool binomial_tail_entropy_bound(int m, const Rational& beta);

/// Exact check of the companion form <= 2^(2*beta*M*log2(1/beta)) for
/// beta <= 1/e.
bool binomial_tail_loglinear_bound(int m, const Rational& beta);

/// log2 of a positive big integer, to double precision.
double log2_bigint(const BigInt& value);

/// Inputs for the headline bound formulas. The named constants have no
/// prescribed values; they are caller-supplied knobs.
struct BoundParameters {
    double rho = 0.2;
    double delta = 0.0;   // bipartite expansion
    double ell = 0.0;     // locality
    int d = 2;            // degree
    double n_vertices = 0.0;
    double c1 = 1.0;
    double c1_prime = 1.0;
    double c2 = 1.0;
    double c_small = 1.0;
    double c_small_prime = 1.0;
    int d0 = 2;
};

/// The four bound formulas, returned as base-2 exponents (the values
/// themselves overflow everything), plus the hypothesis gates.
struct BoundExponents {
    double mixing_lower;     // C2 * N * delta / log2(d)
    double balanced_upper;   // (N/2) * (1 - C2 * delta / log2(d))
    double cube_mixing;      // C2 * 2^d / (sqrt(d) * log2(d))
    double cube_imbalance;   // -C2 * 2^d / (sqrt(d) * log2(d))
    bool delta_gate;         // delta >= max(C1 log2^3(d)/d, C1' log2(d)/ell)
    bool degree_gate;        // d >= d0
    bool rho_feasible;       // H(rho) + rho < 1
};

BoundExponents bound_exponents(const BoundParameters& params);

}  // namespace torpid
