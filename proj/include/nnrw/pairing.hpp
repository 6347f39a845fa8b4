#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace nnrw {

// Stride pairing over primary units. Every pair (i, j) has i < j and
// j - i equal to a positive multiple of tau. Unit indices are 0-based.
struct PairingPlan {
    std::vector<std::pair<int, int>> pairs;
    int p_units = 0;
    int tau = 0;

    int size() const { return static_cast<int>(pairs.size()); }
};

// Enumerates all (i, i + k*tau) with i + k*tau <= p_units - 1, ordered by
// stride multiple k ascending, then i ascending. The order is fixed so that
// plans and everything derived from them reproduce exactly.
PairingPlan build_pairing_plan(int p_units, int tau);

// Length of build_pairing_plan(p_units, tau) without materializing it:
// sum over k = 1 .. (p_units-1)/tau of (p_units - k*tau).
std::int64_t pair_count(int p_units, int tau);

// p_units * (p_units - 1) / 2, the tau = 1 count.
std::int64_t max_pairs(int p_units);

// Stride heuristic for a target hidden width: max(1, floor(target_m / 200)).
int select_tau(std::int64_t target_m);

// Smallest p_units >= 2 minimizing |pair_count(p_units, tau) - target_m|.
int fit_p_for_target(std::int64_t target_m, int tau);

} // namespace nnrw
