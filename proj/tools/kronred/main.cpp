#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace kronred;
using namespace kronred::cli;

namespace {

void add_common(CLI::App* sub, Common& c, std::vector<std::pair<const TolFlag*, double>>& tol_values)
{
    sub->add_flag("--json", c.json, "Emit a JSON report");
    sub->add_flag("--csv", c.csv, "Emit CSV where the report is tabular");
    sub->add_option("-o,--output", c.output_path, "Write the report to a file instead of stdout");
    sub->add_option("--manifest", c.manifest_path, "Write a run manifest (digests, tolerances, timestamp)");
    sub->add_option("--objective", c.objective, "Gramian objective: trace or leak-weighted")
        ->check(CLI::IsMember({"trace", "leak-weighted", "leak"}))
        ->each([&c](const std::string&) { c.objective_set = true; });
    sub->add_flag("--permissive", c.permissive, "Allow removal of measured complexes (output map corrected)");
    sub->add_option("-j,--jobs", c.jobs, "Worker threads (0 = logical cores)");
    for (const auto& f : tolerance_flags()) {
        tol_values.emplace_back(&f, -1.0);
        auto& slot = tol_values.back().second;
        sub->add_option(std::string("--tol-") + f.name, slot, "Tolerance override")->check(CLI::NonNegativeNumber);
    }
}

void add_partition(CLI::App* sub, PartitionArgs& p)
{
    sub->add_option("--remove", p.remove, "Comma-separated 0-based complex indices to eliminate")
        ->expected(0, 1)
        ->default_str("");
    sub->add_option("--keep", p.keep, "Comma-separated 0-based complex indices to keep");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Kron reduction of open mass-action chemical reaction networks"};
    app.set_version_flag("--version", KRONRED_VERSION);
    app.require_subcommand(1);

    Common c;
    for (int i = 0; i < argc; ++i) {
        c.argv.emplace_back(argv[i]);
    }
    std::vector<std::pair<const TolFlag*, double>> tol_values;
    tol_values.reserve(16 * tolerance_flags().size());

    std::string check_input;
    auto* check = app.add_subcommand("check", "Validate a network file and summarize its structure");
    check->add_option("input", check_input, "Network JSON file or builtin:<name>")->required();

    PartitionArgs reduce_args;
    auto* reduce = app.add_subcommand("reduce", "Kron-reduce a network and verify moment matching");
    reduce->add_option("input", reduce_args.input, "Network JSON file or builtin:<name>")->required();
    add_partition(reduce, reduce_args);

    PartitionArgs spectrum_args;
    auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues of L+R and the interlacing check");
    spectrum->add_option("input", spectrum_args.input, "Network JSON file or builtin:<name>")->required();
    add_partition(spectrum, spectrum_args);

    BoundArgs bound_args;
    auto* bound = app.add_subcommand("bound", "One-step error bounds from diagonal Gramians");
    bound->add_option("input", bound_args.input, "Network JSON file or builtin:<name>")->required();
    bound->add_option("--nodes", bound_args.nodes, "Comma-separated complex indices (default all)");
    bound->add_flag("--hinf", bound_args.hinf, "Also compute the measured H-infinity error per row");

    RankArgs rank_args;
    auto* rank = app.add_subcommand("rank", "Complexes sorted by one-step error bound");
    rank->add_option("input", rank_args.input, "Network JSON file or builtin:<name>")->required();
    rank->add_flag("--unmeasured", rank_args.unmeasured_only, "Rank only complexes not seen by the output");
    rank->add_flag("--hinf", rank_args.hinf, "Also compute the measured H-infinity error per row");

    SimulateArgs sim_args;
    auto* simulate = app.add_subcommand("simulate", "Step response of the full (and optionally reduced) model");
    simulate->add_option("input", sim_args.part.input, "Network JSON file or builtin:<name>")->required();
    add_partition(simulate, sim_args.part);
    simulate->add_option("--t-final", sim_args.t_final, "Horizon (default 10 / |slowest eigenvalue|)");
    simulate->add_option("--step", sim_args.step, "Step input magnitude on every channel");
    simulate->add_flag("--mass-action", sim_args.mass_action, "Integrate the nonlinear mass-action dynamics");
    simulate->add_option("--points", sim_args.points, "Number of output samples");
    simulate->add_option("--x0", sim_args.x0, "Initial value for every state (default 0, or 1 for mass action)");

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "H-infinity error of every k-subset removal");
    sweep->add_option("input", sweep_args.input, "Network JSON file or builtin:<name>")->required();
    sweep->add_option("-k", sweep_args.k, "Number of complexes to remove")->required();
    sweep->add_option("--cap", sweep_args.cap, "Refuse sweeps larger than this many subsets");
    sweep->add_option("--grid", sweep_args.grid, "Frequency grid points per evaluation");
    sweep->add_option("--removable", sweep_args.removable, "Candidate complexes (default all unmeasured)");
    sweep->add_option("--top", sweep_args.top, "Only print the first N rows");

    ReproArgs repro_args;
    auto* repro = app.add_subcommand("repro", "Rerun a bundled example and diff against expected values");
    repro->add_option("example", repro_args.example, "glycolysis, glycogen, asm1 or mckeithan")->required();
    repro->add_option("--table", repro_args.table, "Restrict to one result table (0 = values outside tables)");
    repro->add_flag("--exhaustive", repro_args.exhaustive, "Also sweep every 10- and 15-node removal");

    for (auto* sub : {check, reduce, spectrum, bound, rank, simulate, sweep, repro}) {
        add_common(sub, c, tol_values);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        apply_env_overrides(c.tol);
        for (const auto& [flag, value] : tol_values) {
            if (value >= 0.0) {
                c.tol.*(flag->field) = value;
            }
        }
        if (c.json && c.csv) {
            throw InputError("--json and --csv are mutually exclusive");
        }
        if (*check) {
            return cmd_check(c, check_input);
        }
        if (*reduce) {
            return cmd_reduce(c, reduce_args);
        }
        if (*spectrum) {
            return cmd_spectrum(c, spectrum_args);
        }
        if (*bound) {
            return cmd_bound(c, bound_args);
        }
        if (*rank) {
            return cmd_rank(c, rank_args);
        }
        if (*simulate) {
            return cmd_simulate(c, sim_args);
        }
        if (*sweep) {
            return cmd_sweep(c, sweep_args);
        }
        return cmd_repro(c, repro_args);
    } catch (const Error& e) {
        std::cerr << "kronred: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "kronred: " << e.what() << "\n";
        return 3;
    }
}
