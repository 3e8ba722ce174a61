#include "torpid/bounds.hpp"

#include <cmath>
#include <limits>

namespace torpid {

double binary_entropy(double x) {
    if (x < 0.0 || x > 1.0) throw InvalidInput("entropy argument outside [0,1]");
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double rho_star() {
    double lo = 0.0, hi = 0.5;
    for (int it = 0; it < 100; ++it) {
        double mid = (lo + hi) / 2;
        (binary_entropy(mid) + mid < 1.0 ? lo : hi) = mid;
    }
    return (lo + hi) / 2;
}

double alpha_threshold(double rho) {
    if (rho <= 0.0 || binary_entropy(rho) + rho >= 1.0)
        throw InvalidInput("alpha needs 0 < rho with H(rho) + rho < 1");
    double limit = 0.5 - rho;
    double rhs = (1.0 + rho + binary_entropy(rho)) / 2.0;
    auto lhs = [&](double a) {
        return 2.0 * a + rho + binary_entropy(a) + binary_entropy(rho + a);
    };
    if (lhs(limit) <= rhs) return limit;
    double lo = 0.0, hi = limit;
    while (hi - lo > 1e-10) {
        double mid = (lo + hi) / 2;
        (lhs(mid) <= rhs ? lo : hi) = mid;
    }
    return lo;
}

double log2_bigint(const BigInt& value) {
    if (value <= 0) throw InvalidInput("log2 of a non-positive integer");
    unsigned bits = boost::multiprecision::msb(value);
    if (bits <= 62)
        return std::log2(static_cast<double>(
            static_cast<unsigned long long>(value)));
    BigInt top = value >> (bits - 62);
    return std::log2(static_cast<double>(static_cast<unsigned long long>(top))) +
           static_cast<double>(bits - 62);
}

namespace {

// sum_{i=0}^{k} C(m, i), exact
BigInt binomial_prefix_sum(int m, int k) {
    BigInt sum = 0, binom = 1;
    for (int i = 0; i <= k && i <= m; ++i) {
        sum += binom;
        binom = binom * (m - i) / (i + 1);
    }
    return sum;
}

int floor_beta_m(int m, const Rational& beta) {
    BigInt k = numerator(beta) * m / denominator(beta);
    return static_cast<int>(k);
}

bool tail_bound(int m, const Rational& beta, double exponent) {
    if (m < 1 || m > 1000)
        throw GuardExceeded("binomial bound checked for 1 <= M <= 1000");
    BigInt lhs = binomial_prefix_sum(m, floor_beta_m(m, beta));
    // the comparison margin is far coarser than double precision here
    return log2_bigint(lhs) <= exponent + 1e-9;
}

}  // namespace

bool binomial_tail_entropy_bound(int m, const Rational& beta) {
    if (beta < 0 || beta > Rational(1, 2))
        throw InvalidInput("entropy form needs 0 <= beta <= 1/2");
    double b = static_cast<double>(beta);
    return tail_bound(m, beta, binary_entropy(b) * m);
}

bool binomial_tail_loglinear_bound(int m, const Rational& beta) {
    if (beta < 0 || static_cast<double>(beta) > std::exp(-1.0))
        throw InvalidInput("log-linear form needs 0 <= beta <= 1/e");
    if (beta == 0) return binomial_tail_entropy_bound(m, beta);
    double b = static_cast<double>(beta);
    return tail_bound(m, beta, 2.0 * b * m * std::log2(1.0 / b));
}

BoundExponents bound_exponents(const BoundParameters& params) {
    if (params.d < 2) throw InvalidInput("bound formulas need degree >= 2");
    double log_d = std::log2(static_cast<double>(params.d));
    double root_d = std::sqrt(static_cast<double>(params.d));
    double pow_d = std::pow(2.0, params.d);
    BoundExponents out{};
    out.mixing_lower = params.c2 * params.n_vertices * params.delta / log_d;
    out.balanced_upper =
        params.n_vertices / 2.0 * (1.0 - params.c2 * params.delta / log_d);
    out.cube_mixing = params.c2 * pow_d / (root_d * log_d);
    out.cube_imbalance = -out.cube_mixing;
    double gate1 = params.c1 * log_d * log_d * log_d / params.d;
    double gate2 = params.ell > 0.0
                       ? params.c1_prime * log_d / params.ell
                       : std::numeric_limits<double>::infinity();
    out.delta_gate = params.delta >= std::max(gate1, gate2);
    out.degree_gate = params.d >= params.d0;
    out.rho_feasible = binary_entropy(params.rho) + params.rho < 1.0;
    return out;
}

}  // namespace torpid
