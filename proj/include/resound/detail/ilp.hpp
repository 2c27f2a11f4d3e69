#pragma once

// Exact integer feasibility of A·x <= b, x >= 0 by a rational phase-1
// simplex (Bland's rule) under depth-first branch and bound.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace resound::detail {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

struct LinearRow {
    std::vector<Integer> coeffs; // one per variable
    Integer rhs;                 // row reads coeffs·x <= rhs
};

/// A rational point with x >= 0 satisfying every row, or nullopt.
inline std::optional<std::vector<Rational>> lp_feasible(const std::vector<LinearRow>& rows, std::size_t nvars) {
    const std::size_t m = rows.size();
    // Columns: x (nvars), slacks (m), artificials (m), then rhs.
    const std::size_t ns = nvars, na = nvars + m, nc = nvars + 2 * m;
    std::vector<std::vector<Rational>> T(m + 1, std::vector<Rational>(nc + 1, 0));
    std::vector<std::size_t> basis(m);
    std::vector<bool> artificial_row(m, false);
    for (std::size_t i = 0; i < m; ++i) {
        const bool neg = rows[i].rhs < 0;
        const int sign = neg ? -1 : 1;
        for (std::size_t j = 0; j < nvars; ++j) T[i][j] = Rational(rows[i].coeffs[j]) * sign;
        T[i][ns + i] = sign;
        T[i][nc] = Rational(rows[i].rhs) * sign;
        if (neg) {
            T[i][na + i] = 1;
            basis[i] = na + i;
            artificial_row[i] = true;
        } else {
            basis[i] = ns + i;
        }
    }
    // Objective row: minimise the sum of artificials.
    auto& obj = T[m];
    for (std::size_t i = 0; i < m; ++i) {
        if (!artificial_row[i]) continue;
        for (std::size_t j = 0; j < na; ++j) obj[j] -= T[i][j];
        obj[nc] -= T[i][nc];
    }

    for (;;) {
        std::size_t enter = nc;
        for (std::size_t j = 0; j < nc; ++j)
            if (obj[j] < 0) {
                enter = j;
                break;
            }
        if (enter == nc) break;
        std::size_t leave = m;
        Rational best;
        for (std::size_t i = 0; i < m; ++i) {
            if (T[i][enter] <= 0) continue;
            Rational ratio = T[i][nc] / T[i][enter];
            if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave == m) break; // cannot happen in phase 1: objective bounded by 0
        Rational piv = T[leave][enter];
        for (auto& v : T[leave]) v /= piv;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == leave || T[i][enter] == 0) continue;
            Rational f = T[i][enter];
            for (std::size_t j = 0; j <= nc; ++j) T[i][j] -= f * T[leave][j];
        }
        basis[leave] = enter;
    }
    if (obj[nc] != 0) return std::nullopt;
    std::vector<Rational> x(nvars, 0);
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < nvars) x[basis[i]] = T[i][nc];
    return x;
}

enum class IlpStatus { Feasible, Infeasible, Undetermined };

struct IlpResult {
    IlpStatus status = IlpStatus::Undetermined;
    std::vector<Integer> x; // set when Feasible
    std::size_t nodes = 0;
};

inline IlpResult ilp_feasible(const std::vector<LinearRow>& rows, std::size_t nvars, std::size_t max_nodes = 2000) {
    struct Node {
        std::vector<std::optional<Integer>> lo, hi;
    };
    std::vector<Node> stack{Node{std::vector<std::optional<Integer>>(nvars), std::vector<std::optional<Integer>>(nvars)}};
    IlpResult res;
    while (!stack.empty()) {
        if (res.nodes >= max_nodes) {
            res.status = IlpStatus::Undetermined;
            return res;
        }
        ++res.nodes;
        Node node = std::move(stack.back());
        stack.pop_back();
        std::vector<LinearRow> all = rows;
        for (std::size_t j = 0; j < nvars; ++j) {
            if (node.lo[j]) {
                LinearRow r{std::vector<Integer>(nvars, 0), -*node.lo[j]};
                r.coeffs[j] = -1;
                all.push_back(std::move(r));
            }
            if (node.hi[j]) {
                LinearRow r{std::vector<Integer>(nvars, 0), *node.hi[j]};
                r.coeffs[j] = 1;
                all.push_back(std::move(r));
            }
        }
        auto x = lp_feasible(all, nvars);
        if (!x) continue;
        std::size_t frac = nvars;
        for (std::size_t j = 0; j < nvars; ++j)
            if (denominator((*x)[j]) != 1) {
                frac = j;
                break;
            }
        if (frac == nvars) {
            res.status = IlpStatus::Feasible;
            for (const auto& v : *x) res.x.push_back(numerator(v));
            return res;
        }
        Integer fl = numerator((*x)[frac]) / denominator((*x)[frac]); // x >= 0, so truncation is floor
        Node up = node;
        up.lo[frac] = fl + 1;
        node.hi[frac] = fl;
        stack.push_back(std::move(up));
        stack.push_back(std::move(node));
    }
    res.status = IlpStatus::Infeasible;
    return res;
}

} // namespace resound::detail
