#pragma once

#include "osp/bae.hpp"

#include <map>
#include <tuple>

namespace osp::test {

// Solved Bethe states, cached per (k, N, u) within one test binary.
inline const BetheState& solved(int k, int N, double u = 0.05)
{
    static std::map<std::tuple<int, int, double>, BetheState> cache;
    const auto key = std::make_tuple(k, N, u);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, solve_state(k, ModelParams::from_u(N, u))).first;
    return it->second;
}

inline double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

} // namespace osp::test
