#pragma once

#include <compare>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "qlin/qp.hpp"

namespace qlin {

// Pairwise score key ((i,j),(k,l)), 1-based, with i < k and j <= l.
struct PairKey {
    int i = 0;
    int j = 0;
    int k = 0;
    int l = 0;

    auto operator<=>(const PairKey&) const = default;
};

/*
 * A threading instance: m segments of fixed lengths placed on a sequence of
 * N characters. Relative position j of a segment ranges over 1..n with
 * n = N - sum(lengths) + 1; minimal inter-segment gaps are assumed folded
 * into the lengths, and gap scores folded into the linear scores.
 */
struct ThreadingInstance {
    int segment_count = 0;      // m
    long long sequence_length = 0;  // N
    std::vector<long long> lengths;
    std::vector<std::pair<int, int>> edges;  // (i,k), 1-based, i < k
    std::vector<std::vector<double>> linear_scores;  // m x n
    std::map<PairKey, double> pair_scores;
    std::optional<std::vector<long long>> max_gap;  // per adjacent pair, size m-1

    int positions() const;  // n
    void validate() const;

    bool operator==(const ThreadingInstance&) const = default;
};

// n = N - sum(lengths) + 1; throws InfeasibleError when no placement exists.
long long derive_positions(long long sequence_length, const std::vector<long long>& lengths);

struct Threading {
    std::vector<int> relative;        // j_i in 1..n, non-decreasing when feasible
    std::vector<long long> absolute;  // start positions t_i
    double value = 0.0;
};

// Fills absolute positions and the score from relative positions.
Threading make_threading(const ThreadingInstance& instance, std::vector<int> relative);

struct ThreadingIndexMap {
    int segments = 0;
    int positions = 0;

    int flat(int segment, int position) const;         // 1-based (i,j) -> 0-based index
    std::pair<int, int> unflat(int var) const;         // 0-based index -> 1-based (i,j)
};

struct ThreadingQP {
    ZeroOneQP qp;
    ThreadingIndexMap index_map;
};

/*
 * Reduction to the zero-one QP: one binary per (segment, position), linear
 * scores as c, pairwise scores one-sided in Q, assignment equalities and
 * ordering inequalities (plus optional max-gap rows) as X.
 */
ThreadingQP build_qp(const ThreadingInstance& instance);

Threading decode(const std::vector<int>& x, const ThreadingInstance& instance,
                 const ThreadingIndexMap& map);
bool check_threading_feasible(const ThreadingInstance& instance, const Threading& threading);
double score_threading(const ThreadingInstance& instance, const Threading& threading);

inline constexpr long long kDefaultThreadingEnumerationCap = 1'000'000;

struct EnumerationResult {
    long long count = 0;
    Threading best;  // minimum score, ties lexicographically smallest; valid when count > 0
};

EnumerationResult enumerate_threadings(const ThreadingInstance& instance,
                                       long long cap = kDefaultThreadingEnumerationCap);

// O(m n) shortest-path style dynamic program; only valid without pairwise
// scores (refuses otherwise). Ties take the smallest position at each
// backtrack step.
Threading solve_pairwise_free_dp(const ThreadingInstance& instance);

}
