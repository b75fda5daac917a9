#include "kronred/report_json.hpp"

#include <cmath>

namespace kronred {

using nlohmann::json;

namespace {

json number(double x)
{
    if (std::isfinite(x)) {
        return x;
    }
    if (std::isnan(x)) {
        return "nan";
    }
    return x > 0 ? "inf" : "-inf";
}

}  // namespace

json to_json(const Matrix& M)
{
    json rows = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            row.push_back(number(M(i, j)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

json to_json(const Vector& v)
{
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        a.push_back(number(v(i)));
    }
    return a;
}

json to_json(const Tolerances& t)
{
    return {{"structural_zero", t.structural_zero},     {"balance_residual", t.balance_residual},
            {"eigen_margin", t.eigen_margin},           {"invertibility", t.invertibility},
            {"interlacing_slack", t.interlacing_slack}, {"moment_match", t.moment_match},
            {"moment_floor", t.moment_floor},           {"lmi_residual", t.lmi_residual}};
}

void apply_tolerance_overrides(Tolerances& t, const json& overrides)
{
    if (!overrides.is_object()) {
        throw InputError("tolerance overrides: expected a JSON object");
    }
    for (const auto& [key, value] : overrides.items()) {
        if (!value.is_number()) {
            throw InputError("tolerance overrides." + key + ": expected a number");
        }
        const double v = value.get<double>();
        if (!(v >= 0.0)) {
            throw InputError("tolerance overrides." + key + ": must be nonnegative");
        }
        if (key == "structural_zero") {
            t.structural_zero = v;
        } else if (key == "balance_residual") {
            t.balance_residual = v;
        } else if (key == "eigen_margin") {
            t.eigen_margin = v;
        } else if (key == "invertibility") {
            t.invertibility = v;
        } else if (key == "interlacing_slack") {
            t.interlacing_slack = v;
        } else if (key == "moment_match") {
            t.moment_match = v;
        } else if (key == "moment_floor") {
            t.moment_floor = v;
        } else if (key == "lmi_residual") {
            t.lmi_residual = v;
        } else {
            throw InputError("tolerance overrides: unknown key '" + key + "'");
        }
    }
}

json to_json(const ReducedOpenCrn& red)
{
    return {{"convention", ReducedOpenCrn::convention},
            {"kept", red.kept},
            {"removed", red.removed},
            {"removed_species", red.removed_species},
            {"Z_hat", to_json(red.Z_hat)},
            {"L_hat", to_json(red.L_hat)},
            {"D_in_hat", to_json(red.D_in_hat)},
            {"C_hat", to_json(red.C_hat)}};
}

json to_json(const OpenLinearSystem& sys)
{
    return {{"A", to_json(sys.A)}, {"B", to_json(sys.B)}, {"C", to_json(sys.C)}};
}

json to_json(const SpectrumReport& rep)
{
    json v = json::array();
    for (const auto& x : rep.violations) {
        v.push_back({{"index", x.index}, {"lhs", number(x.lhs)}, {"rhs", number(x.rhs)}, {"relation", x.relation}});
    }
    return {{"full_eigs", to_json(rep.full_eigs)},
            {"reduced_eigs", to_json(rep.reduced_eigs)},
            {"interlaced", rep.interlaced},
            {"first_positive", rep.first_positive},
            {"hypothesis_met", rep.hypothesis_met},
            {"advisory", rep.advisory},
            {"violations", std::move(v)}};
}

json to_json(const ZeroMomentReport& rep)
{
    return {{"full_moment", to_json(rep.full_moment)},
            {"reduced_moment", to_json(rep.reduced_moment)},
            {"max_abs_diff", number(rep.max_abs_diff)},
            {"threshold", number(rep.threshold)},
            {"matched", rep.matched},
            {"advisory", rep.advisory},
            {"convention", rep.convention}};
}

json to_json(const DiagonalGramians& g)
{
    return {{"pi_c", to_json(g.pi_c)},
            {"pi_o", to_json(g.pi_o)},
            {"ctrl_residual_eig", number(g.ctrl_residual_eig)},
            {"obs_residual_eig", number(g.obs_residual_eig)},
            {"trace_p", number(g.trace_p)},
            {"trace_q", number(g.trace_q)},
            {"objective", to_string(g.objective)},
            {"converged", g.converged}};
}

json to_json(const BoundRecord& r)
{
    json j = {{"complex_index", r.complex_index},
              {"M_ii", number(r.M_ii)},
              {"pi_c", number(r.pi_c)},
              {"pi_o", number(r.pi_o)},
              {"bound", number(r.bound)},
              {"measured", r.measured}};
    j["hinf_error"] = r.hinf_error ? number(*r.hinf_error) : json(nullptr);
    j["bound_verified"] = r.bound_verified ? json(*r.bound_verified) : json(nullptr);
    return j;
}

json to_json(const ErrorNormReport& rep)
{
    return {{"hinf", number(rep.hinf)},
            {"peak_frequency", number(rep.peak_frequency)},
            {"method", rep.method},
            {"grid_refinement", rep.grid_refinement},
            {"grid_estimate", number(rep.grid_estimate)},
            {"lower", number(rep.lower)},
            {"upper", number(rep.upper)},
            {"iterations", rep.iterations},
            {"methods_agree", rep.methods_agree}};
}

json to_json(const SupCondition& sc)
{
    return {{"sup_delta", number(sc.sup_delta)},
            {"limit", number(sc.limit)},
            {"argmax_omega", number(sc.argmax_omega)},
            {"verified", sc.verified}};
}

json to_json(const SweepRow& row)
{
    json j = {{"removed", row.removed}, {"hinf", number(row.hinf)}};
    j["bound"] = row.bound ? number(*row.bound) : json(nullptr);
    return j;
}

std::string dump_canonical(const json& j)
{
    return j.dump(2) + "\n";
}

}  // namespace kronred
