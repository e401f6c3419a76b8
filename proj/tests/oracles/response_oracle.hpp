#pragma once

// Monotone structural models over dichotomous X, Y, T, S written out
// unit by unit: each unit carries potential responses of T and S to Y and
// of Y to X. X is randomized, so observed cells are plain sums.

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <random>

namespace oracle {

// (value when parent is 0, value when parent is 1)
constexpr std::array<std::array<int, 2>, 4> kResponse{{{0, 0}, {0, 1}, {1, 0}, {1, 1}}};

struct ResponseModel {
    // weight[i][j][k]: probability of T-type i, S-type j, Y-type k
    std::array<std::array<std::array<mpq_class, 4>, 4>, 4> weight{};

    // P(T = t, S = s | X = x)
    mpq_class observed(int t, int s, int x) const {
        mpq_class total = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                for (int k = 0; k < 4; ++k) {
                    int y = kResponse[k][x];
                    if (kResponse[i][y] == t && kResponse[j][y] == s) total += weight[i][j][k];
                }
        return total;
    }

    // P(T = t | X = x), S summed out
    mpq_class observed_t(int t, int x) const { return observed(t, 0, x) + observed(t, 1, x); }
    mpq_class observed_s(int s, int x) const { return observed(0, s, x) + observed(1, s, x); }

    // P(Y_x = 1)
    mpq_class effect(int x) const {
        mpq_class total = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                for (int k = 0; k < 4; ++k)
                    if (kResponse[k][x] == 1) total += weight[i][j][k];
        return total;
    }
};

/// Random monotone model: no type reverses its parent. Roughly a third of
/// the 27 admissible types get zero weight.
inline ResponseModel random_monotone_model(std::mt19937_64& rng) {
    ResponseModel m;
    mpq_class total = 0;
    for (int i : {0, 1, 3})
        for (int j : {0, 1, 3})
            for (int k : {0, 1, 3}) {
                long w = static_cast<long>(rng() % 30);
                if (w < 10) w = 0;
                m.weight[i][j][k] = w;
                total += w;
            }
    if (total == 0) {
        m.weight[1][1][1] = 1;
        total = 1;
    }
    for (auto& a : m.weight)
        for (auto& b : a)
            for (auto& c : b) c /= total;
    return m;
}

}  // namespace oracle
