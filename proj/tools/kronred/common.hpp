#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include <kronred/crn_model.hpp>
#include <kronred/gramian.hpp>
#include <kronred/kron.hpp>

namespace kronred::cli {

/// Options shared by every subcommand.
struct Common {
    bool json = false;
    bool csv = false;
    Tolerances tol;
    std::string objective = "trace";
    bool objective_set = false;
    bool per_stage_m = false;
    bool permissive = false;
    unsigned jobs = 0;
    std::string manifest_path;
    std::string output_path;
    std::vector<std::string> argv;
};

/// Tolerance flags as (flag suffix, field) pairs, e.g. --tol-lmi-residual.
struct TolFlag {
    const char* name;
    double Tolerances::*field;
};
const std::vector<TolFlag>& tolerance_flags();

/// Applies KRONRED_TOL_OVERRIDES (a JSON object) if set.
void apply_env_overrides(Tolerances& tol);

/// A network file path, or builtin:<name> for a bundled network.
struct LoadedNetwork {
    CrnNetwork net;
    std::string source;
};
LoadedNetwork load_input(const std::string& spec);

/// Parses "1,2,3" into indices; empty string gives an empty list.
IndexList parse_index_list(const std::string& text, const std::string& flag);

std::optional<Partition> partition_from_flags(Index c, const std::optional<std::string>& remove,
                                              const std::optional<std::string>& keep);

OutputMode output_mode(const Common& c);
GramianOptions gramian_options(const Common& c);

std::string fmt(double x, int sig = 6);
std::string fmt_fixed(double x, int decimals);

/// Writes text to opts.output_path if set, otherwise to stdout.
void emit(const Common& c, const std::string& text);

void write_manifest(const Common& c, const nlohmann::json& network_doc, const std::string& report_text);

}  // namespace kronred::cli
