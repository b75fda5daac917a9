#pragma once

#include <optional>

#include "kronred/gramian.hpp"
#include "kronred/hinf.hpp"
#include "kronred/kron.hpp"

namespace kronred {

struct SweepOptions {
    Index k = 1;
    /// candidate nodes; empty means all unmeasured nodes
    IndexList removable;
    double cap = 1e6;
    /// worker threads; 0 means std::thread::hardware_concurrency()
    unsigned jobs = 0;
    HinfOptions hinf = [] {
        HinfOptions o;
        o.grid_points = 400;
        return o;
    }();
    OutputMode mode = OutputMode::Permissive;
    /// subset whose position in the sorted result is reported
    std::optional<IndexList> highlight;
    /// when set, each row also carries the multi-node bound
    std::optional<DiagonalGramians> gramians;
};

struct SweepRow {
    IndexList removed;
    double hinf = 0.0;
    std::optional<double> bound;
};

struct SweepResult {
    /// ascending by hinf, then lexicographic by subset
    std::vector<SweepRow> rows;
    /// 0-based position of the highlighted subset in rows
    std::optional<Index> highlight_position;
    Index candidates = 0;
};

/// Exact binomial coefficient as a double (saturates at +inf).
double binomial(Index n, Index k);

/// All k-subsets of `items` in lexicographic order.
std::vector<IndexList> k_subsets(const IndexList& items, Index k);

/// Evaluates the H-infinity error of every k-subset removal. Throws
/// InputError when the number of subsets exceeds opts.cap.
SweepResult sweep_subsets(const OpenLinearSystem& sys, const SweepOptions& opts);

}  // namespace kronred
