#include "swcc/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace swcc {

namespace {

constexpr double kTol = 1e-12;

void require(bool ok, const char* constraint) {
    if (!ok) throw std::domain_error(std::string("constraint violated: ") + constraint);
}

}  // namespace

Rational make_rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    return {g ? num / g : num, g ? den / g : den};
}

Rational alpha_k(int k) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    const auto kk = static_cast<std::int64_t>(k);
    return make_rational(2 * (kk * kk + kk + 2), kk * (kk + 1));
}

Rational beta_k(int k) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    const auto kk = static_cast<std::int64_t>(k);
    return make_rational(2 * (kk + 1), kk);
}

RegimeVerdict classify_regime(Variant variant, double gamma, int k) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (gamma < 0.0) throw std::invalid_argument("gamma must be >= 0");
    if (k == 1) {
        if (gamma < 2.0 - kTol)
            return {Regime::Fast, "external: k=1 diameter bounds cover gamma in [0, 2)"};
        return {Regime::Unknown, "external: k=1 beyond [0, 2) not covered here"};
    }
    const double crit = (variant == Variant::W ? alpha_k(k) : beta_k(k)).value();
    const char* crit_name = variant == Variant::W ? "alpha_k" : "beta_k";
    if (std::abs(gamma - crit) < kTol)
        return {Regime::Unknown,
                std::string("gamma = ") + crit_name + ": critical point, direction open"};
    if (gamma >= 2.0 - kTol && gamma < crit)
        return {Regime::Fast,
                std::string("gamma in [2, ") + crit_name + "): recursive spreading is polylog"};
    if (gamma < 2.0)
        return {Regime::Slow, "gamma < 2: wide bridges into small disks are too rare"};
    return {Regime::Slow,
            std::string("gamma > ") + crit_name + ": heavy connected subsets are too rare"};
}

namespace {

double binom2(int k) {  // k(k+1)/2 as double
    return 0.5 * k * (k + 1);
}

}  // namespace

P5Chain p5_lower_bound_W(const BoundParams& p) {
    require(p.k >= 1, "k >= 1");
    const double alpha = alpha_k(p.k).value();
    require(p.gamma > 2.0, "gamma > 2");
    require(p.gamma < alpha, "gamma < alpha_k");
    require(p.delta > 0.0, "delta > 0");
    require(p.delta < 1.0 - p.gamma / alpha, "delta < 1 - gamma/alpha_k");
    require(p.ell >= 1.0, "ell >= 1");
    require(p.lambda > 0.0 && p.lambda <= 1.0, "lambda in (0, 1]");

    P5Chain chain;
    chain.p1 = p.lambda / std::pow(p.ell, p.gamma / 2.0);
    chain.p2 = p.lambda * std::pow(p.ell, 1.0 - p.delta - p.gamma / 2.0);
    chain.subsquare_size = std::pow(p.ell, 1.0 - p.delta);
    double p4 = 1.0;
    double factorial = 1.0;
    for (int s = 1; s <= p.k; ++s) {
        factorial *= s;
        const double qs = std::pow(p.lambda, s) *
                          std::pow(p.ell, s * (1.0 - p.delta - p.gamma / 2.0)) /
                          (2.0 * factorial);
        chain.q.push_back(qs);
        p4 *= qs;
    }
    chain.p4 = p4;
    chain.p5 = -std::expm1(-chain.p4 * chain.subsquare_size / 2.0);
    chain.p5 = std::clamp(chain.p5, 0.0, 1.0);
    return chain;
}

P5Chain p5_lower_bound_I(const BoundParams& p) {
    require(p.k >= 1, "k >= 1");
    const double beta = beta_k(p.k).value();
    require(p.gamma > 2.0, "gamma > 2");
    require(p.gamma < beta, "gamma < beta_k");
    require(p.delta > 0.0, "delta > 0");
    require(p.delta < 1.0 - p.gamma / beta, "delta < 1 - gamma/beta_k");
    require(p.ell >= 1.0, "ell >= 1");
    require(p.lambda > 0.0 && p.lambda <= 1.0, "lambda in (0, 1]");

    P5Chain chain;
    chain.p1 = p.lambda / std::pow(p.ell, p.gamma / 2.0);
    chain.p2 = p.lambda * std::pow(p.ell, 1.0 - p.delta - p.gamma / 2.0);
    chain.subsquare_size = std::pow(p.ell, 1.0 - p.delta);
    chain.q.push_back(std::pow(p.lambda, p.k) *
                      std::pow(p.ell, p.k * (1.0 - p.delta - p.gamma / 2.0)));
    const double q_later = std::pow(p.lambda / std::pow(p.k, p.gamma), p.k);
    for (int s = 2; s <= p.k; ++s) chain.q.push_back(q_later);
    chain.p4 = std::pow(p.lambda, static_cast<double>(p.k) * p.k) *
               std::pow(p.ell, p.k * (1.0 - p.delta - p.gamma / 2.0)) /
               std::pow(p.k, p.gamma * p.k * p.k);
    chain.p5 = -std::expm1(-chain.p4 * chain.subsquare_size / p.k);
    chain.p5 = std::clamp(chain.p5, 0.0, 1.0);
    return chain;
}

double spreading_base_r(double lambda, double c, double d) {
    require(lambda > 0.0, "lambda > 0");
    require(c > 0.0, "c > 0");
    require(d > 0.0, "d > 0");
    return std::pow(6.0 * d / lambda, c);
}

namespace {

// The ell <= 4 floor keeps the recursion finite when the caller passes a
// sub-constant threshold (ell^(1-delta) converges to 1, never crossing it).
double unroll_recurrence(double ell, double threshold, int k, double one_minus_delta) {
    if (ell <= threshold || ell <= 4.0) return std::sqrt(ell);
    return k + 2.0 * unroll_recurrence(std::pow(ell, one_minus_delta), threshold, k,
                                       one_minus_delta);
}

}  // namespace

RecurrenceBound recurrence_time_bound(double n, double delta, double c, int k, double r) {
    require(n >= 2.0, "n >= 2");
    require(delta > 0.0 && delta < 1.0, "delta in (0, 1)");
    require(c >= 0.0, "c >= 0");
    require(k >= 1, "k >= 1");
    require(r > 0.0, "r > 0");
    RecurrenceBound bound;
    bound.base_threshold = std::pow(r * std::pow(std::log(n), c), 1.0 / (1.0 - delta));
    bound.alpha = c / 2.0 + std::log(2.0) / std::log(1.0 / (1.0 - delta));
    bound.rounds = unroll_recurrence(n, bound.base_threshold, k, 1.0 - delta);
    return bound;
}

double gamma2_exponent(int k) {
    if (k < 2) throw std::invalid_argument("k must be >= 2");
    return static_cast<double>(k) * (k + 1) / 4.0 + 1.5;
}

ZBounds z_expectation_bounds(double n, double gamma, int k, double delta, double eps) {
    require(n >= 2.0, "n >= 2");
    require(gamma >= 0.0 && gamma < 2.0, "gamma in [0, 2)");
    require(k >= 1, "k >= 1");
    require(delta > 0.0 && delta < 0.5, "delta in (0, 1/2)");
    require(eps > 0.0 && eps < 1.0, "eps in (0, 1)");

    ZBounds out;
    const double cut = 2.0 / k;
    const double far_exp = k - 1.0 - 2.0 * k * delta;         // gamma below 2/k
    const double near_exp = k * (0.5 - delta) * (2.0 - gamma) - 2.0 * delta;
    if (gamma < cut - kTol) {
        out.z1_branch = 0;
        out.z1_order = std::pow(n, -far_exp);
    } else if (gamma < cut + kTol) {
        out.z1_branch = 1;
        out.z1_order = std::log(n) * std::pow(n, -far_exp);
    } else {
        out.z1_branch = 2;
        out.z1_order = std::pow(n, -near_exp);
    }
    out.z2_order = std::pow(n, -near_exp);
    out.delta_max = std::min((k - 2.0 + eps / 2.0) / (2.0 * k),
                             (k - gamma / 2.0 - 1.0 + eps) / (2.0 + 2.0 * k - k * gamma));
    return out;
}

HeavySubsetBound heavy_subset_probability_bound(double n, double gamma, int k, double eps,
                                                int m) {
    require(n >= 2.0, "n >= 2");
    require(gamma > 0.0, "gamma > 0");
    require(k >= 1, "k >= 1");
    require(eps > 0.0 && eps < 0.5, "eps in (0, 1/2)");
    require(m >= 1, "m >= 1");

    HeavySubsetBound out;
    const double choose = binom2(k);
    out.p1_order = std::pow(n, 1.0 - (0.5 - eps) * gamma);
    out.p2_order = std::pow(out.p1_order, choose);
    out.p3_order = n * out.p2_order;
    out.zeta_lo = 1.0 + choose * (1.0 - gamma * (0.5 - eps));
    out.zeta_hi = 0.0;
    out.zeta_nonempty = out.zeta_lo < -kTol;
    return out;
}

FitResult fit_scaling_exponent(const std::vector<std::pair<double, double>>& samples) {
    if (samples.size() < 3) throw std::invalid_argument("need at least 3 samples");
    const auto m = static_cast<double>(samples.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& [n, t] : samples) {
        if (n <= 0.0 || t <= 0.0) throw std::invalid_argument("samples must be positive");
        sx += std::log(n);
        sy += std::log(t);
    }
    const double mx = sx / m;
    const double my = sy / m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [n, t] : samples) {
        const double dx = std::log(n) - mx;
        const double dy = std::log(t) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0.0) throw std::invalid_argument("degenerate fit: n values do not vary");
    FitResult fit;
    fit.exponent = sxy / sxx;
    const double sse = std::max(0.0, syy - fit.exponent * sxy);
    fit.stderr_value = std::sqrt(sse / (m - 2.0) / sxx);
    fit.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    return fit;
}

}  // namespace swcc
