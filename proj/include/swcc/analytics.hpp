#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "swcc/graph.hpp"

namespace swcc {

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;  // always > 0, gcd(|num|, den) == 1
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Rational&) const = default;
};

Rational make_rational(std::int64_t num, std::int64_t den);

// Critical exponents bounding the fast bands: alpha for the duplicate-free
// variant, beta for the independent one. Exact rationals.
Rational alpha_k(int k);  // 2(k^2+k+2) / (k(k+1))
Rational beta_k(int k);   // 2(k+1) / k

enum class Regime : std::uint8_t { Fast, Slow, Unknown };

struct RegimeVerdict {
    Regime regime = Regime::Unknown;
    std::string justification;
};

// Fast iff 2 <= gamma < alpha_k (variant W) or < beta_k (variant I);
// Unknown exactly at the critical exponent; Slow otherwise. k = 1 rests on
// prior diameter results: Fast on [0, 2), Unknown beyond. Comparisons use a
// 1e-12 tolerance so grid values like 2.2 hit exact rational breakpoints.
RegimeVerdict classify_regime(Variant variant, double gamma, int k);

struct BoundParams {
    int k = 2;
    double gamma = 2.5;
    double delta = 0.05;
    double ell = 0.0;     // nodes in the current square
    double lambda = 0.0;  // weak-tie normalization of the ambient graph
    double c = 1.0;
    double d = 1.0;
    double epsilon = 0.1;
    double zeta = 0.0;
};

struct P5Chain {
    double p1 = 0.0;        // one tie hits a fixed far cell: lambda / ell^(gamma/2)
    double p2 = 0.0;        // one tie hits the far subsquare: lambda ell^(1-delta-gamma/2)
    std::vector<double> q;  // per-stage probabilities, stage s at q[s-1]
    double p4 = 0.0;        // a fixed k-tuple becomes a new seed cluster
    double p5 = 0.0;        // some new seed cluster appears in B
    double subsquare_size = 0.0;  // |B| = ell^(1-delta)
};

// Closed-form lower bounds on the probability that a fully infected subsquare
// spawns a new k-seed cluster in a disjoint subsquare within k rounds.
// Parameter ranges are enforced; the thrown message names the violated
// constraint. W: q[s-1] = lambda^s ell^(s(1-delta-gamma/2)) / (2 s!),
// p4 = prod q, p5 = 1 - exp(-p4 |B| / 2), valid for 2 < gamma < alpha_k,
// 0 < delta < 1 - gamma/alpha_k.
P5Chain p5_lower_bound_W(const BoundParams& params);
// I: q[0] = lambda^k ell^(k(1-delta-gamma/2)), q[s-1] = (lambda/k^gamma)^k for
// s >= 2, p4 = lambda^(k^2) ell^(k(1-delta-gamma/2)) / k^(gamma k^2),
// p5 = 1 - exp(-p4 |B| / k), valid for 2 < gamma < beta_k,
// 0 < delta < 1 - gamma/beta_k.
P5Chain p5_lower_bound_I(const BoundParams& params);

// Base scale of the spreading recursion: r = (6d / lambda)^c.
double spreading_base_r(double lambda, double c, double d);

struct RecurrenceBound {
    double rounds = 0.0;          // exact numeric unrolling
    double alpha = 0.0;           // closed-form log exponent c/2 + log_{1/(1-delta)} 2
    double base_threshold = 0.0;  // (r ln^c n)^(1/(1-delta))
};

// T(ell) = k + 2 T(ell^(1-delta)) above the base threshold, sqrt(ell) at or
// below it; natural logarithms throughout.
RecurrenceBound recurrence_time_bound(double n, double delta, double c, int k, double r);

// k(k+1)/4 + 1.5, the polylog exponent at gamma = 2.
double gamma2_exponent(int k);

struct ZBounds {
    double z1_order = 0.0;  // expected annulus wide-bridge count, constants = 1
    double z2_order = 0.0;  // expected near-disk wide-bridge count, constants = 1
    double delta_max = 0.0; // admissible delta ceiling for both to vanish
    int z1_branch = 0;      // 0: gamma < 2/k, 1: gamma = 2/k, 2: gamma > 2/k
};

// Order-of-magnitude predictions for the wide-bridge censuses at gamma < 2.
// Directional use only: constants are not recoverable.
ZBounds z_expectation_bounds(double n, double gamma, int k, double delta, double eps);

struct HeavySubsetBound {
    double p1_order = 0.0;  // one long tie at a fixed node: n^(1-(1/2-eps)gamma)
    double p2_order = 0.0;  // p1^(k(k+1)/2)
    double p3_order = 0.0;  // heavy connected subset anywhere: n * p2 (log factors dropped)
    double zeta_lo = 0.0;   // 1 + (k(k+1)/2)(1 - gamma(1/2-eps))
    double zeta_hi = 0.0;   // 0
    bool zeta_nonempty = false;
};

// Order bounds behind the scarcity of heavy connected subsets. The zeta
// interval (zeta_lo, 0) is nonempty exactly when the decay wins, which at
// eps = (1 - alpha_k/gamma)/4 happens iff gamma > alpha_k.
HeavySubsetBound heavy_subset_probability_bound(double n, double gamma, int k, double eps, int m);

struct FitResult {
    double exponent = 0.0;
    double stderr_value = 0.0;
    double r_squared = 0.0;
};

// Least-squares slope of log T against log n. Throws on fewer than 3 samples,
// nonpositive T, or a degenerate n spread.
FitResult fit_scaling_exponent(const std::vector<std::pair<double, double>>& samples);

}  // namespace swcc
