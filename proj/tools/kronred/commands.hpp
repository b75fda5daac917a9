#pragma once

#include <optional>
#include <string>
#include <vector>

#include <kronred/gramian.hpp>
#include <kronred/hinf.hpp>

#include "common.hpp"

namespace kronred::cli {

/// Exit code for a failed reproduction diff.
inline constexpr int kExitMismatch = 4;

struct PartitionArgs {
    std::string input;
    std::optional<std::string> remove;
    std::optional<std::string> keep;
};

struct BoundArgs {
    std::string input;
    std::optional<std::string> nodes;
    bool hinf = false;
};

struct RankArgs {
    std::string input;
    bool unmeasured_only = false;
    bool hinf = false;
};

struct SimulateArgs {
    PartitionArgs part;
    std::optional<double> t_final;
    double step = 1.0;
    bool mass_action = false;
    Index points = 201;
    std::optional<double> x0;
};

struct SweepArgs {
    std::string input;
    Index k = 1;
    double cap = 1e6;
    Index grid = 400;
    std::optional<std::string> removable;
    std::optional<Index> top;
};

struct ReproArgs {
    std::string example;
    std::optional<int> table;
    bool exhaustive = false;
};

int cmd_check(const Common& c, const std::string& input);
int cmd_reduce(const Common& c, const PartitionArgs& a);
int cmd_spectrum(const Common& c, const PartitionArgs& a);
int cmd_bound(const Common& c, const BoundArgs& a);
int cmd_rank(const Common& c, const RankArgs& a);
int cmd_simulate(const Common& c, const SimulateArgs& a);
int cmd_sweep(const Common& c, const SweepArgs& a);
int cmd_repro(const Common& c, const ReproArgs& a);

/// Bound record for every node in `nodes`, with bound_verified set from
/// detailed balance or the sup condition and, when `with_hinf`, the measured
/// one-step error.
std::vector<BoundRecord> one_step_table(const OpenLinearSystem& sys, const DiagonalGramians& g,
                                        const IndexList& nodes, bool with_hinf, const Tolerances& tol);

/// H-infinity error of removing `removed` (permissive output handling).
double removal_error(const FullResponseCache& cache, const IndexList& removed, const Tolerances& tol);

}  // namespace kronred::cli
