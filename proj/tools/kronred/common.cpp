#include "common.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <kronred/builtin_networks.hpp>
#include <kronred/network_io.hpp>
#include <kronred/report_json.hpp>

namespace kronred::cli {

const std::vector<TolFlag>& tolerance_flags()
{
    static const std::vector<TolFlag> flags = {
        {"structural-zero", &Tolerances::structural_zero},
        {"balance-residual", &Tolerances::balance_residual},
        {"eigen-margin", &Tolerances::eigen_margin},
        {"invertibility", &Tolerances::invertibility},
        {"interlacing-slack", &Tolerances::interlacing_slack},
        {"moment-match", &Tolerances::moment_match},
        {"moment-floor", &Tolerances::moment_floor},
        {"lmi-residual", &Tolerances::lmi_residual},
    };
    return flags;
}

void apply_env_overrides(Tolerances& tol)
{
    const char* env = std::getenv("KRONRED_TOL_OVERRIDES");
    if (env == nullptr || *env == '\0') {
        return;
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(env);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("KRONRED_TOL_OVERRIDES: invalid JSON: ") + e.what());
    }
    apply_tolerance_overrides(tol, j);
}

LoadedNetwork load_input(const std::string& spec)
{
    const std::string prefix = "builtin:";
    if (spec.rfind(prefix, 0) == 0) {
        return {builtin::by_name(spec.substr(prefix.size())), spec};
    }
    return {load_network(spec), spec};
}

IndexList parse_index_list(const std::string& text, const std::string& flag)
{
    IndexList out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) {
            continue;
        }
        item = item.substr(b, e - b + 1);
        std::size_t pos = 0;
        long long v = -1;
        try {
            v = std::stoll(item, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != item.size() || v < 0) {
            throw InputError(flag + ": '" + item + "' is not a nonnegative integer index");
        }
        out.push_back(static_cast<Index>(v));
    }
    return out;
}

std::optional<Partition> partition_from_flags(Index c, const std::optional<std::string>& remove,
                                              const std::optional<std::string>& keep)
{
    if (remove && keep) {
        throw InputError("--remove and --keep are mutually exclusive");
    }
    if (remove) {
        return Partition::from_removed(c, parse_index_list(*remove, "--remove"));
    }
    if (keep) {
        return Partition::from_kept(c, parse_index_list(*keep, "--keep"));
    }
    return std::nullopt;
}

OutputMode output_mode(const Common& c)
{
    return c.permissive ? OutputMode::Permissive : OutputMode::MeasuredPreserving;
}

GramianOptions gramian_options(const Common& c)
{
    GramianOptions o;
    o.objective = gramian_objective_from_string(c.objective);
    return o;
}

std::string fmt(double x, int sig)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", sig, x);
    return buf;
}

std::string fmt_fixed(double x, int decimals)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
    return buf;
}

void emit(const Common& c, const std::string& text)
{
    if (c.output_path.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(c.output_path, std::ios::binary);
    if (!out) {
        throw InputError(c.output_path + ": cannot open for writing");
    }
    out << text;
}

}  // namespace kronred::cli
