#include "qlin/threading.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qlin {

namespace {

double pair_score_or_zero(const ThreadingInstance& inst, int i, int j, int k, int l) {
    const auto it = inst.pair_scores.find(PairKey{i, j, k, l});
    return it == inst.pair_scores.end() ? 0.0 : it->second;
}

// gap between segments i-1 and i equals j_i - j_{i-1}; bound for that pair,
// or -1 when unbounded
long long gap_bound(const ThreadingInstance& inst, int i) {
    if (!inst.max_gap) return -1;
    return (*inst.max_gap)[static_cast<std::size_t>(i) - 2];
}

}  // namespace

long long derive_positions(long long sequence_length, const std::vector<long long>& lengths) {
    if (lengths.empty()) throw InputError("lengths: must be non-empty");
    long long total = 0;
    for (std::size_t k = 0; k < lengths.size(); ++k) {
        if (lengths[k] <= 0) {
            throw InputError("lengths[" + std::to_string(k) + "]: must be positive");
        }
        total += lengths[k];
    }
    const long long n = sequence_length - total + 1;
    if (n < 1) {
        throw InfeasibleError("no feasible placement: segments cover " + std::to_string(total) +
                              " of " + std::to_string(sequence_length) + " characters");
    }
    return n;
}

int ThreadingInstance::positions() const {
    return static_cast<int>(derive_positions(sequence_length, lengths));
}

void ThreadingInstance::validate() const {
    if (segment_count < 1) throw InputError("m: must be at least 1");
    if (static_cast<int>(lengths.size()) != segment_count) {
        throw InputError("lengths: expected length " + std::to_string(segment_count) + ", got " +
                         std::to_string(lengths.size()));
    }
    const long long n_ll = derive_positions(sequence_length, lengths);
    if (n_ll > 1'000'000) throw InputError("N: instance admits too many placements per segment");
    const int n = static_cast<int>(n_ll);
    if (static_cast<int>(linear_scores.size()) != segment_count) {
        throw InputError("linear_scores: expected " + std::to_string(segment_count) +
                         " rows, got " + std::to_string(linear_scores.size()));
    }
    for (int i = 0; i < segment_count; ++i) {
        if (static_cast<int>(linear_scores[i].size()) != n) {
            throw InputError("linear_scores[" + std::to_string(i) + "]: expected length " +
                             std::to_string(n) + ", got " +
                             std::to_string(linear_scores[i].size()));
        }
        for (double v : linear_scores[i]) {
            if (!std::isfinite(v)) {
                throw InputError("linear_scores[" + std::to_string(i) + "]: non-finite score");
            }
        }
    }
    for (const auto& [i, k] : edges) {
        if (i < 1 || k <= i || k > segment_count) {
            throw InputError("edges: pair (" + std::to_string(i) + "," + std::to_string(k) +
                             ") must satisfy 1 <= i < k <= m");
        }
    }
    for (const auto& [key, value] : pair_scores) {
        const std::string what = "pair_scores[(" + std::to_string(key.i) + "," +
                                 std::to_string(key.j) + "),(" + std::to_string(key.k) + "," +
                                 std::to_string(key.l) + ")]";
        if (key.i < 1 || key.k <= key.i || key.k > segment_count) {
            throw InputError(what + ": requires 1 <= i < k <= m");
        }
        if (key.j < 1 || key.j > key.l || key.l > n) {
            throw InputError(what + ": requires 1 <= j <= l <= n");
        }
        if (std::find(edges.begin(), edges.end(), std::make_pair(key.i, key.k)) == edges.end()) {
            throw InputError(what + ": segment pair is not in E");
        }
        if (!std::isfinite(value)) throw InputError(what + ": non-finite score");
    }
    if (max_gap) {
        if (static_cast<int>(max_gap->size()) != segment_count - 1) {
            throw InputError("max_gap: expected length " + std::to_string(segment_count - 1) +
                             ", got " + std::to_string(max_gap->size()));
        }
        for (long long g : *max_gap) {
            if (g < 0) throw InputError("max_gap: bounds must be non-negative");
        }
    }
}

Threading make_threading(const ThreadingInstance& instance, std::vector<int> relative) {
    instance.validate();
    const int n = instance.positions();
    if (static_cast<int>(relative.size()) != instance.segment_count) {
        throw InputError("relative: expected length " + std::to_string(instance.segment_count));
    }
    for (int j : relative) {
        if (j < 1 || j > n) throw InputError("relative: positions must lie in 1.." +
                                             std::to_string(n));
    }
    Threading t;
    t.relative = std::move(relative);
    t.absolute.resize(instance.segment_count);
    long long prefix = 0;
    for (int i = 0; i < instance.segment_count; ++i) {
        t.absolute[i] = prefix + t.relative[i];
        prefix += instance.lengths[i];
    }
    t.value = score_threading(instance, t);
    return t;
}

int ThreadingIndexMap::flat(int segment, int position) const {
    if (segment < 1 || segment > segments || position < 1 || position > positions) {
        throw InputError("index map: (i,j)=(" + std::to_string(segment) + "," +
                         std::to_string(position) + ") out of range");
    }
    return (segment - 1) * positions + (position - 1);
}

std::pair<int, int> ThreadingIndexMap::unflat(int var) const {
    if (var < 0 || var >= segments * positions) {
        throw InputError("index map: variable " + std::to_string(var) + " out of range");
    }
    return {var / positions + 1, var % positions + 1};
}

ThreadingQP build_qp(const ThreadingInstance& instance) {
    instance.validate();
    const int m = instance.segment_count;
    const int n = instance.positions();
    const int nv = m * n;

    ThreadingQP out;
    out.index_map = ThreadingIndexMap{m, n};
    ZeroOneQP& qp = out.qp;
    qp.n = nv;
    qp.c.assign(nv, 0.0);
    qp.Q.assign(nv, std::vector<double>(nv, 0.0));
    for (int i = 1; i <= m; ++i) {
        for (int j = 1; j <= n; ++j) {
            qp.c[out.index_map.flat(i, j)] = instance.linear_scores[i - 1][j - 1];
        }
    }
    for (const auto& [key, value] : instance.pair_scores) {
        qp.Q[out.index_map.flat(key.i, key.j)][out.index_map.flat(key.k, key.l)] = value;
    }

    // assignment: each segment placed exactly once
    for (int i = 1; i <= m; ++i) {
        LinearConstraint con;
        con.coeffs.assign(nv, 0.0);
        for (int j = 1; j <= n; ++j) con.coeffs[out.index_map.flat(i, j)] = 1.0;
        con.sense = ConstraintSense::Equal;
        con.rhs = 1.0;
        qp.x_constraints.push_back(std::move(con));
    }
    // ordering: x_ij <= sum_{k<=j} x_{i-1,k}
    for (int i = 2; i <= m; ++i) {
        for (int j = 1; j <= n - 1; ++j) {
            LinearConstraint con;
            con.coeffs.assign(nv, 0.0);
            con.coeffs[out.index_map.flat(i, j)] = 1.0;
            for (int k = 1; k <= j; ++k) con.coeffs[out.index_map.flat(i - 1, k)] -= 1.0;
            con.sense = ConstraintSense::LessEqual;
            con.rhs = 0.0;
            qp.x_constraints.push_back(std::move(con));
        }
    }
    // optional max-gap windows; rows with a window touching position 1 are
    // already implied by the ordering rows
    if (instance.max_gap) {
        for (int i = 2; i <= m; ++i) {
            const long long bound = gap_bound(instance, i);
            for (int j = 1; j <= n; ++j) {
                const long long lo = j - bound;
                if (lo < 2) continue;
                LinearConstraint con;
                con.coeffs.assign(nv, 0.0);
                con.coeffs[out.index_map.flat(i, j)] = 1.0;
                for (int k = static_cast<int>(lo); k <= j; ++k) {
                    con.coeffs[out.index_map.flat(i - 1, k)] -= 1.0;
                }
                con.sense = ConstraintSense::LessEqual;
                con.rhs = 0.0;
                qp.x_constraints.push_back(std::move(con));
            }
        }
    }
    return out;
}

Threading decode(const std::vector<int>& x, const ThreadingInstance& instance,
                 const ThreadingIndexMap& map) {
    instance.validate();
    if (map.segments != instance.segment_count || map.positions != instance.positions()) {
        throw InputError("index map does not match the instance");
    }
    if (static_cast<int>(x.size()) != map.segments * map.positions) {
        throw InputError("x: expected length " + std::to_string(map.segments * map.positions) +
                         ", got " + std::to_string(x.size()));
    }
    std::vector<int> relative(instance.segment_count, 0);
    for (int i = 1; i <= map.segments; ++i) {
        int chosen = 0;
        for (int j = 1; j <= map.positions; ++j) {
            if (x[map.flat(i, j)] == 0) continue;
            if (chosen != 0) {
                throw InputError("decode: segment " + std::to_string(i) +
                                 " placed more than once");
            }
            chosen = j;
        }
        if (chosen == 0) {
            throw InputError("decode: segment " + std::to_string(i) + " not placed");
        }
        relative[i - 1] = chosen;
    }
    return make_threading(instance, std::move(relative));
}

bool check_threading_feasible(const ThreadingInstance& instance, const Threading& threading) {
    instance.validate();
    const int n = instance.positions();
    if (static_cast<int>(threading.relative.size()) != instance.segment_count) {
        throw InputError("threading: expected " + std::to_string(instance.segment_count) +
                         " positions");
    }
    for (int j : threading.relative) {
        if (j < 1 || j > n) {
            throw InputError("threading: positions must lie in 1.." + std::to_string(n));
        }
    }
    for (int i = 2; i <= instance.segment_count; ++i) {
        const int gap = threading.relative[i - 1] - threading.relative[i - 2];
        if (gap < 0) return false;
        const long long bound = gap_bound(instance, i);
        if (bound >= 0 && gap > bound) return false;
    }
    return true;
}

double score_threading(const ThreadingInstance& instance, const Threading& threading) {
    if (static_cast<int>(threading.relative.size()) != instance.segment_count) {
        throw InputError("threading: expected " + std::to_string(instance.segment_count) +
                         " positions");
    }
    double value = 0.0;
    for (int i = 1; i <= instance.segment_count; ++i) {
        const int j = threading.relative[i - 1];
        if (j < 1 || j > static_cast<int>(instance.linear_scores[i - 1].size())) {
            throw InputError("threading: position " + std::to_string(j) + " out of range");
        }
        value += instance.linear_scores[i - 1][j - 1];
    }
    for (const auto& [i, k] : instance.edges) {
        value += pair_score_or_zero(instance, i, threading.relative[i - 1], k,
                                    threading.relative[k - 1]);
    }
    return value;
}

EnumerationResult enumerate_threadings(const ThreadingInstance& instance, long long cap) {
    instance.validate();
    const int m = instance.segment_count;
    const int n = instance.positions();

    long long space = 1;
    for (int i = 0; i < m; ++i) {
        if (space > cap / n) {
            throw InputError("enumeration refused: n^m exceeds cap " + std::to_string(cap));
        }
        space *= n;
    }

    EnumerationResult out;
    std::vector<int> relative(m, 0);
    std::vector<int> best_relative;
    double best_value = 0.0;
    Threading probe;  // reused scratch for scoring
    // depth-first over monotone tuples, lexicographic order
    int depth = 0;
    relative[0] = 1;
    while (depth >= 0) {
        if (relative[depth] > n) {
            --depth;
            if (depth >= 0) ++relative[depth];
            continue;
        }
        if (depth > 0) {
            const long long bound = gap_bound(instance, depth + 1);
            const int gap = relative[depth] - relative[depth - 1];
            if (bound >= 0 && gap > bound) {
                // window exhausted for this prefix
                --depth;
                if (depth >= 0) ++relative[depth];
                continue;
            }
        }
        if (depth + 1 < m) {
            ++depth;
            relative[depth] = relative[depth - 1];
            continue;
        }
        // complete tuple
        probe.relative = relative;
        const double value = score_threading(instance, probe);
        ++out.count;
        if (out.count == 1 || value < best_value) {
            best_value = value;
            best_relative = relative;
        }
        ++relative[depth];
    }
    if (out.count > 0) out.best = make_threading(instance, std::move(best_relative));
    return out;
}

Threading solve_pairwise_free_dp(const ThreadingInstance& instance) {
    instance.validate();
    for (const auto& [key, value] : instance.pair_scores) {
        if (value != 0.0) {
            throw InputError("dynamic program refused: instance has pairwise scores");
        }
    }
    const int m = instance.segment_count;
    const int n = instance.positions();

    // best[i][j] = best score of segments 0..i with segment i at position j
    std::vector<std::vector<double>> best(m, std::vector<double>(n, 0.0));
    for (int j = 0; j < n; ++j) best[0][j] = instance.linear_scores[0][j];
    std::vector<double> prefix_min(n);
    for (int i = 1; i < m; ++i) {
        prefix_min[0] = best[i - 1][0];
        for (int j = 1; j < n; ++j) prefix_min[j] = std::min(prefix_min[j - 1], best[i - 1][j]);
        for (int j = 0; j < n; ++j) best[i][j] = instance.linear_scores[i][j] + prefix_min[j];
    }

    std::vector<int> relative(m, 1);
    int arg = 0;
    for (int j = 1; j < n; ++j) {
        if (best[m - 1][j] < best[m - 1][arg]) arg = j;
    }
    relative[m - 1] = arg + 1;
    for (int i = m - 2; i >= 0; --i) {
        int pick = 0;
        for (int j = 1; j <= relative[i + 1] - 1; ++j) {
            if (best[i][j] < best[i][pick]) pick = j;
        }
        relative[i] = pick + 1;
    }
    return make_threading(instance, std::move(relative));
}

}
