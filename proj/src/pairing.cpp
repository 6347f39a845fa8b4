#include "nnrw/pairing.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nnrw {

namespace {

void check_args(int p_units, int tau) {
    if (p_units < 2)
        throw std::invalid_argument("pairing: p_units must be >= 2, got " +
                                    std::to_string(p_units));
    if (tau < 1)
        throw std::invalid_argument("pairing: tau must be >= 1, got " +
                                    std::to_string(tau));
    if (tau >= p_units)
        throw std::invalid_argument("pairing: tau = " + std::to_string(tau) +
                                    " leaves no pairs for p_units = " +
                                    std::to_string(p_units));
}

} // namespace

PairingPlan build_pairing_plan(int p_units, int tau) {
    check_args(p_units, tau);
    PairingPlan plan;
    plan.p_units = p_units;
    plan.tau = tau;
    plan.pairs.reserve(static_cast<std::size_t>(pair_count(p_units, tau)));
    for (int stride = tau; stride <= p_units - 1; stride += tau)
        for (int i = 0; i + stride <= p_units - 1; ++i)
            plan.pairs.emplace_back(i, i + stride);
    return plan;
}

std::int64_t pair_count(int p_units, int tau) {
    check_args(p_units, tau);
    const std::int64_t p = p_units;
    const std::int64_t t = tau;
    const std::int64_t k_max = (p - 1) / t;
    return k_max * p - t * k_max * (k_max + 1) / 2;
}

std::int64_t max_pairs(int p_units) {
    if (p_units < 2)
        throw std::invalid_argument("max_pairs: p_units must be >= 2, got " +
                                    std::to_string(p_units));
    const std::int64_t p = p_units;
    return p * (p - 1) / 2;
}

int select_tau(std::int64_t target_m) {
    if (target_m < 1)
        throw std::invalid_argument("select_tau: target_m must be >= 1");
    const std::int64_t tau = target_m / 200;
    return tau < 1 ? 1 : static_cast<int>(tau);
}

int fit_p_for_target(std::int64_t target_m, int tau) {
    if (target_m < 1)
        throw std::invalid_argument("fit_p_for_target: target_m must be >= 1");
    if (tau < 1)
        throw std::invalid_argument("fit_p_for_target: tau must be >= 1");

    // pair_count is strictly increasing in p_units for fixed tau, so find
    // the smallest p with count >= target, then compare with its neighbor.
    int p = static_cast<int>(std::ceil(
        std::sqrt(2.0 * static_cast<double>(tau) * static_cast<double>(target_m))));
    if (p < tau + 1)
        p = tau + 1;
    while (p > tau + 1 && pair_count(p - 1, tau) >= target_m)
        --p;
    while (pair_count(p, tau) < target_m)
        ++p;

    if (p == tau + 1)
        return p;
    const std::int64_t over = pair_count(p, tau) - target_m;
    const std::int64_t under = target_m - pair_count(p - 1, tau);
    return under <= over ? p - 1 : p;
}

} // namespace nnrw
