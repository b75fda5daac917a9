#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <kronred/network_io.hpp>
#include <kronred/report_json.hpp>
#include <kronred/simulate.hpp>
#include <kronred/spectral.hpp>
#include <kronred/sweep.hpp>
#include <kronred/wegscheider.hpp>

namespace kronred::cli {

using nlohmann::json;

namespace {

void finish(const Common& c, const CrnNetwork& net, const std::string& text)
{
    emit(c, text);
    write_manifest(c, network_to_json(net), text);
}

std::string join(const IndexList& v, const char* sep = ",")
{
    std::string s;
    for (Index i : v) {
        s += (s.empty() ? "" : sep) + std::to_string(i);
    }
    return s;
}

std::string row_text(const Matrix& M, Eigen::Index i)
{
    std::string s = "  [";
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
        s += (j ? ", " : "") + fmt(M(i, j));
    }
    return s + "]\n";
}

std::string matrix_text(const std::string& name, const Matrix& M)
{
    std::string s = name + " (" + std::to_string(M.rows()) + "x" + std::to_string(M.cols()) + "):\n";
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        s += row_text(M, i);
    }
    return s;
}

Matrix leaky(const CrnNetwork& net)
{
    return build_laplacian(net) + net.outflow_matrix();
}

Partition require_partition(const CrnNetwork& net, const PartitionArgs& a)
{
    auto part = partition_from_flags(net.num_complexes(), a.remove, a.keep);
    if (!part) {
        throw InputError("one of --remove or --keep is required");
    }
    return *part;
}

OpenLinearSystem require_linear(const LoadedNetwork& in)
{
    if (!in.net.is_single_species()) {
        throw InputError(in.source + ": command requires a single-species single-substrate network");
    }
    return build_open_linear(in.net);
}

std::string verdict(const SpectrumReport& rep)
{
    std::string s = rep.interlaced ? "holds" : "violated";
    if (!rep.first_positive) {
        s += ", lambda_1(L+R) not positive";
    }
    s += rep.hypothesis_met ? " (symmetrizable, theorem applies)" : " (not symmetrizable, advisory)";
    return s;
}

std::string spectrum_text(const SpectrumReport& rep)
{
    std::ostringstream os;
    const Index c = static_cast<Index>(rep.full_eigs.size());
    const Index ch = static_cast<Index>(rep.reduced_eigs.size());
    os << "i  lambda_i(L+R)  lambda_i(L_hat)  lambda_{i+" << (c - ch) << "}(L+R)\n";
    for (Index i = 0; i < c; ++i) {
        os << (i + 1) << "  " << fmt(rep.full_eigs(static_cast<Eigen::Index>(i)));
        if (i < ch) {
            os << "  " << fmt(rep.reduced_eigs(static_cast<Eigen::Index>(i))) << "  "
               << fmt(rep.full_eigs(static_cast<Eigen::Index>(i + c - ch)));
        }
        os << "\n";
    }
    os << "interlacing: " << verdict(rep) << "\n";
    for (const auto& v : rep.violations) {
        os << "  violation at i=" << v.index << ": " << fmt(v.lhs, 10) << " " << v.relation << " " << fmt(v.rhs, 10)
           << "\n";
    }
    return os.str();
}

IndexList all_nodes(Index n)
{
    IndexList v(n);
    for (Index i = 0; i < n; ++i) {
        v[i] = i;
    }
    return v;
}

std::string bound_csv(const std::vector<BoundRecord>& rows, bool with_hinf)
{
    std::ostringstream os;
    os << "complex,M_ii,pi_c,pi_o,bound,measured,bound_verified" << (with_hinf ? ",hinf_error" : "") << "\n";
    for (const auto& r : rows) {
        os << r.complex_index << "," << fmt(r.M_ii, 17) << "," << fmt(r.pi_c, 17) << "," << fmt(r.pi_o, 17) << ","
           << fmt(r.bound, 17) << "," << (r.measured ? 1 : 0) << ","
           << (r.bound_verified ? (*r.bound_verified ? "1" : "0") : "");
        if (with_hinf) {
            os << "," << (r.hinf_error ? fmt(*r.hinf_error, 17) : "");
        }
        os << "\n";
    }
    return os.str();
}

std::string bound_text(const std::vector<BoundRecord>& rows, bool with_hinf, bool ranked)
{
    std::ostringstream os;
    os << (ranked ? "rank  " : "") << "complex  M_ii  pi_c  pi_o  bound  verified" << (with_hinf ? "  hinf_error" : "")
       << "\n";
    Index k = 0;
    for (const auto& r : rows) {
        if (ranked) {
            os << ++k << "  ";
        }
        os << r.complex_index << (r.measured ? "*" : "") << "  " << fmt(r.M_ii) << "  " << fmt(r.pi_c) << "  "
           << fmt(r.pi_o) << "  " << fmt(r.bound) << "  "
           << (r.bound_verified ? (*r.bound_verified ? "yes" : "no") : "-");
        if (with_hinf) {
            os << "  " << (r.hinf_error ? fmt(*r.hinf_error) : "-");
        }
        os << "\n";
    }
    os << "(* measured complex)\n";
    return os.str();
}

json bound_json(const LoadedNetwork& in, const DiagonalGramians& g, const std::vector<BoundRecord>& rows)
{
    json jr = json::array();
    for (const auto& r : rows) {
        jr.push_back(to_json(r));
    }
    return {{"input", in.source}, {"gramians", to_json(g)}, {"rows", std::move(jr)}};
}

std::string bound_output(const Common& c, const LoadedNetwork& in, const DiagonalGramians& g,
                         const std::vector<BoundRecord>& rows, bool with_hinf, bool ranked)
{
    if (c.json) {
        return dump_canonical(bound_json(in, g, rows));
    }
    if (c.csv) {
        return bound_csv(rows, with_hinf);
    }
    std::string s = "gramian objective: " + to_string(g.objective) + "\n";
    return s + bound_text(rows, with_hinf, ranked);
}

std::vector<double> linspace(double a, double b, Index n)
{
    std::vector<double> v(n);
    for (Index i = 0; i < n; ++i) {
        v[i] = n == 1 ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return v;
}

}  // namespace

std::vector<BoundRecord> one_step_table(const OpenLinearSystem& sys, const DiagonalGramians& g,
                                        const IndexList& nodes, bool with_hinf, const Tolerances& tol)
{
    auto rows = bound_table(sys, g, nodes);
    const bool detailed_balanced = symmetrizing_scaling(sys.A).has_value();
    std::optional<FullResponseCache> cache;
    if (with_hinf) {
        cache.emplace(sys, HinfOptions{});
    }
    for (auto& r : rows) {
        r.bound_verified = detailed_balanced || check_sup_condition(sys, r.complex_index).verified;
        if (cache) {
            r.hinf_error = removal_error(*cache, {r.complex_index}, tol);
        }
    }
    return rows;
}

double removal_error(const FullResponseCache& cache, const IndexList& removed, const Tolerances& tol)
{
    const auto& sys = cache.system();
    const auto red = kron_reduce_linear(sys, Partition::from_removed(sys.order(), removed), OutputMode::Permissive, tol);
    return hinf_error(cache, red).hinf;
}

int cmd_check(const Common& c, const std::string& input)
{
    const auto in = load_input(input);
    const auto& net = in.net;
    const Matrix LR = leaky(net);
    const Vector eigs = eig_real(LR);
    const bool hurwitz = is_hurwitz(-LR, c.tol.eigen_margin);
    const bool lap_ok = is_leaky_laplacian(LR, c.tol.structural_zero);
    const auto cycles = fundamental_cycles(net);
    const auto weg = wegscheider_check(net, c.tol.balance_residual);

    std::string text;
    if (c.json) {
        json res = json::array();
        for (double r : weg.residuals) {
            res.push_back(std::isfinite(r) ? json(r) : json("inf"));
        }
        json j = {{"input", in.source},
                  {"valid", true},
                  {"species", net.num_species()},
                  {"complexes", net.num_complexes()},
                  {"reactions", net.num_reactions()},
                  {"inputs", net.num_inputs()},
                  {"outputs", net.num_outputs()},
                  {"single_species", net.is_single_species()},
                  {"open", net.is_open()},
                  {"leaky_laplacian", lap_ok},
                  {"hurwitz", hurwitz},
                  {"leaky_laplacian_eigs", to_json(eigs)},
                  {"wegscheider", {{"cycles", cycles.size()}, {"residuals", res}, {"admissible", weg.admissible}}}};
        text = dump_canonical(j);
    } else {
        std::ostringstream os;
        os << in.source << ": valid\n"
           << "species " << net.num_species() << ", complexes " << net.num_complexes() << ", reactions "
           << net.num_reactions() << ", inputs " << net.num_inputs() << ", outputs " << net.num_outputs() << "\n"
           << "single-species: " << (net.is_single_species() ? "yes" : "no")
           << ", open: " << (net.is_open() ? "yes" : "no") << "\n"
           << "leaky Laplacian sign pattern: " << (lap_ok ? "ok" : "violated") << "\n"
           << "A = -(L+R) Hurwitz: " << (hurwitz ? "yes" : "no");
        if (eigs.size() > 0) {
            os << " (smallest eigenvalue of L+R " << fmt(eigs.minCoeff()) << ")";
        }
        os << "\n"
           << "Wegscheider cycles: " << cycles.size() << ", detailed-balance admissible: "
           << (weg.admissible ? "yes" : "no") << "\n";
        for (std::size_t i = 0; i < weg.residuals.size(); ++i) {
            os << "  cycle " << i << ": residual "
               << (std::isfinite(weg.residuals[i]) ? fmt(weg.residuals[i]) : std::string("inf (irreversible)")) << "\n";
        }
        text = os.str();
    }
    finish(c, net, text);
    return 0;
}

int cmd_reduce(const Common& c, const PartitionArgs& a)
{
    const auto in = load_input(a.input);
    const auto& net = in.net;
    const auto part = require_partition(net, a);
    const auto red = kron_reduce_open(net, part, output_mode(c), c.tol);
    const ZeroMomentReport mom = net.is_single_species()
                                     ? verify_moment_matching(build_open_linear(net), as_linear(red), c.tol)
                                     : verify_moment_matching(net, red, c.tol);
    const auto spec = check_interlacing(leaky(net), red.L_hat, c.tol.interlacing_slack);

    std::string text;
    if (c.json) {
        json j = {{"input", in.source},
                  {"reduction", to_json(red)},
                  {"zero_moment", to_json(mom)},
                  {"interlacing", to_json(spec)},
                  {"tolerances", to_json(c.tol)}};
        text = dump_canonical(j);
    } else {
        std::ostringstream os;
        os << "input: " << in.source << "\n"
           << "kept complexes: [" << join(red.kept) << "], removed: [" << join(red.removed) << "]\n"
           << "convention: " << ReducedOpenCrn::convention << "\n";
        if (!red.removed_species.empty()) {
            os << "species dropped from Z_hat: [" << join(red.removed_species) << "]\n";
        }
        os << matrix_text("L_hat", red.L_hat) << matrix_text("D_in_hat", red.D_in_hat) << matrix_text("C_hat", red.C_hat);
        os << "zero moment (" << mom.convention << "):\n"
           << matrix_text("  full", mom.full_moment) << matrix_text("  reduced", mom.reduced_moment)
           << "  max |diff| " << fmt(mom.max_abs_diff) << " (threshold " << fmt(mom.threshold) << "): "
           << (mom.matched ? "matched" : "NOT matched") << (mom.advisory ? " [advisory: Z column-rank deficient]" : "")
           << "\n";
        os << "interlacing: " << verdict(spec) << "\n";
        text = os.str();
    }
    finish(c, net, text);
    return 0;
}

int cmd_spectrum(const Common& c, const PartitionArgs& a)
{
    const auto in = load_input(a.input);
    const auto& net = in.net;
    const Matrix LR = leaky(net);
    const auto part = partition_from_flags(net.num_complexes(), a.remove, a.keep);
    std::string text;
    if (!part) {
        const Eigen::VectorXcd eigs = eig_spectrum(LR);
        if (c.json) {
            json re = json::array();
            json im = json::array();
            for (Eigen::Index i = 0; i < eigs.size(); ++i) {
                re.push_back(eigs(i).real());
                im.push_back(eigs(i).imag());
            }
            text = dump_canonical({{"input", in.source}, {"eigs_real", re}, {"eigs_imag", im}});
        } else {
            std::ostringstream os;
            os << "i  lambda_i(L+R)\n";
            for (Eigen::Index i = 0; i < eigs.size(); ++i) {
                os << (i + 1) << "  " << fmt(eigs(i).real());
                if (eigs(i).imag() != 0.0) {
                    os << (eigs(i).imag() > 0 ? " + " : " - ") << fmt(std::abs(eigs(i).imag())) << "j";
                }
                os << "\n";
            }
            text = os.str();
        }
    } else {
        const auto red = kron_reduce_open(net, *part, output_mode(c), c.tol);
        const auto rep = check_interlacing(LR, red.L_hat, c.tol.interlacing_slack);
        if (c.json) {
            text = dump_canonical({{"input", in.source}, {"removed", red.removed}, {"interlacing", to_json(rep)}});
        } else if (c.csv) {
            std::ostringstream os;
            os << "i,full,reduced\n";
            for (Eigen::Index i = 0; i < rep.full_eigs.size(); ++i) {
                os << (i + 1) << "," << fmt(rep.full_eigs(i), 17) << ","
                   << (i < rep.reduced_eigs.size() ? fmt(rep.reduced_eigs(i), 17) : "") << "\n";
            }
            text = os.str();
        } else {
            text = spectrum_text(rep);
        }
    }
    finish(c, net, text);
    return 0;
}

int cmd_bound(const Common& c, const BoundArgs& a)
{
    const auto in = load_input(a.input);
    const auto sys = require_linear(in);
    const auto g = compute_gramians(sys, gramian_options(c), c.tol);
    const IndexList nodes = a.nodes ? parse_index_list(*a.nodes, "--nodes") : all_nodes(sys.order());
    const auto rows = one_step_table(sys, g, nodes, a.hinf, c.tol);
    finish(c, in.net, bound_output(c, in, g, rows, a.hinf, false));
    return 0;
}

int cmd_rank(const Common& c, const RankArgs& a)
{
    const auto in = load_input(a.input);
    const auto sys = require_linear(in);
    const auto g = compute_gramians(sys, gramian_options(c), c.tol);
    const IndexList candidates = a.unmeasured_only ? unmeasured_nodes(sys) : all_nodes(sys.order());
    IndexList order;
    for (const auto& r : rank_nodes(sys, g, candidates)) {
        order.push_back(r.complex_index);
    }
    const auto rows = one_step_table(sys, g, order, a.hinf, c.tol);
    finish(c, in.net, bound_output(c, in, g, rows, a.hinf, true));
    return 0;
}

int cmd_simulate(const Common& c, const SimulateArgs& a)
{
    const auto in = load_input(a.part.input);
    const auto& net = in.net;
    const auto part = partition_from_flags(net.num_complexes(), a.part.remove, a.part.keep);
    if (a.points < 2) {
        throw InputError("--points must be at least 2");
    }
    const Matrix LR = leaky(net);
    const double t_final = a.t_final ? *a.t_final : default_horizon(-LR);
    if (!(t_final > 0.0) || !std::isfinite(t_final)) {
        throw InputError("cannot choose a horizon automatically (no decaying mode); pass --t-final");
    }
    const auto u = InputSignal::step(Vector::Constant(static_cast<Eigen::Index>(net.num_inputs()), a.step));
    OdeOptions opts;
    opts.output_times = linspace(0.0, t_final, a.points);

    Trajectory full;
    std::optional<Trajectory> reduced;
    if (a.mass_action) {
        const Vector x0 = Vector::Constant(static_cast<Eigen::Index>(net.num_species()), a.x0.value_or(1.0));
        full = simulate_mass_action(net, u, t_final, x0, opts);
        if (part) {
            const auto red = kron_reduce_open(net, *part, output_mode(c), c.tol);
            IndexList species;
            for (Index s = 0; s < net.num_species(); ++s) {
                if (!std::binary_search(red.removed_species.begin(), red.removed_species.end(), s)) {
                    species.push_back(s);
                }
            }
            const Matrix Zr = select_rows(red.Z_hat, species);
            const Matrix Lh = red.L_hat;
            const Matrix Dh = red.D_in_hat;
            const Vector xr0 = Vector::Constant(static_cast<Eigen::Index>(species.size()), a.x0.value_or(1.0));
            OdeOptions ro = opts;
            ro.positivity_guard = true;
            auto rhs = [&](double t, const Vector& x) -> Vector {
                return Zr * (-Lh * complex_monomials(Zr, x) + Dh * u.at(t));
            };
            Trajectory tr = integrate_dopri5(rhs, xr0, 0.0, t_final, ro);
            tr.outputs.clear();
            for (const auto& x : tr.states) {
                tr.outputs.push_back(red.C_hat * complex_monomials(Zr, x));
            }
            reduced = std::move(tr);
        }
    } else {
        const auto sys = require_linear(in);
        const Vector x0 = Vector::Constant(static_cast<Eigen::Index>(sys.order()), a.x0.value_or(0.0));
        full = simulate_linear(sys, u, t_final, x0, opts);
        if (part) {
            const auto red = kron_reduce_linear(sys, *part, output_mode(c), c.tol);
            reduced = simulate_linear(red, u, t_final, Vector(x0(Eigen::seqN(0, red.order()))), opts);
        }
    }

    std::ostringstream os;
    if (c.json) {
        json j = {{"input", in.source}, {"times", full.times}};
        json y = json::array();
        for (const auto& v : full.outputs) {
            y.push_back(to_json(v));
        }
        j["outputs"] = std::move(y);
        if (reduced) {
            json yr = json::array();
            for (const auto& v : reduced->outputs) {
                yr.push_back(to_json(v));
            }
            j["reduced_outputs"] = std::move(yr);
        }
        os << dump_canonical(j);
    } else {
        const Index q = net.num_outputs();
        os << "t";
        for (Index k = 0; k < q; ++k) {
            os << ",y" << k;
        }
        if (reduced) {
            for (Index k = 0; k < q; ++k) {
                os << ",yhat" << k;
            }
        }
        os << "\n";
        for (std::size_t i = 0; i < full.times.size(); ++i) {
            os << fmt(full.times[i], 17);
            for (Index k = 0; k < q; ++k) {
                os << "," << fmt(full.outputs[i](static_cast<Eigen::Index>(k)), 17);
            }
            if (reduced) {
                for (Index k = 0; k < q; ++k) {
                    os << "," << fmt(reduced->outputs[i](static_cast<Eigen::Index>(k)), 17);
                }
            }
            os << "\n";
        }
    }
    finish(c, net, os.str());
    return 0;
}

int cmd_sweep(const Common& c, const SweepArgs& a)
{
    const auto in = load_input(a.input);
    const auto sys = require_linear(in);
    SweepOptions opts;
    opts.k = a.k;
    opts.cap = a.cap;
    opts.jobs = c.jobs;
    opts.hinf.grid_points = a.grid;
    opts.mode = OutputMode::Permissive;
    opts.removable = a.removable ? parse_index_list(*a.removable, "--removable") : unmeasured_nodes(sys);
    if (a.k > opts.removable.size()) {
        throw InputError("-k exceeds the number of removable nodes");
    }
    const double count = binomial(opts.removable.size(), a.k);
    if (count > a.cap) {
        throw InputError("sweep would evaluate " + fmt(count, 17) + " subsets, above --cap " + fmt(a.cap, 17));
    }
    const auto g = compute_gramians(sys, gramian_options(c), c.tol);
    IndexList gram;
    for (const auto& r : rank_nodes(sys, g, opts.removable)) {
        if (gram.size() < a.k) {
            gram.push_back(r.complex_index);
        }
    }
    std::sort(gram.begin(), gram.end());
    opts.highlight = gram;
    opts.gramians = g;
    const auto res = sweep_subsets(sys, opts);
    if (res.rows.empty()) {
        throw InputError("sweep produced no subsets");
    }
    const auto& best = res.rows.front();
    const auto& worst = res.rows.back();
    std::optional<SweepRow> gram_row;
    if (res.highlight_position) {
        gram_row = res.rows[*res.highlight_position];
    }
    const Index shown = std::min<Index>(res.rows.size(), a.top.value_or(res.rows.size()));

    std::ostringstream os;
    if (c.json) {
        json rows = json::array();
        for (Index i = 0; i < shown; ++i) {
            rows.push_back(to_json(res.rows[i]));
        }
        json j = {{"input", in.source},
                  {"k", a.k},
                  {"candidates", res.candidates},
                  {"subsets", res.rows.size()},
                  {"best", to_json(best)},
                  {"worst", to_json(worst)},
                  {"rows", std::move(rows)}};
        j["gramian_selected"] = gram_row ? to_json(*gram_row) : json(nullptr);
        j["gramian_selected_position"] = res.highlight_position ? json(*res.highlight_position) : json(nullptr);
        os << dump_canonical(j);
    } else if (c.csv) {
        os << "rank,removed,hinf,bound\n";
        for (Index i = 0; i < shown; ++i) {
            const auto& r = res.rows[i];
            os << (i + 1) << "," << join(r.removed, " ") << "," << fmt(r.hinf, 17) << ","
               << (r.bound ? fmt(*r.bound, 17) : "") << "\n";
        }
    } else {
        os << "subsets evaluated: " << res.rows.size() << " (k = " << a.k << ", " << res.candidates
           << " candidates)\n"
           << "best:  [" << join(best.removed) << "] hinf " << fmt(best.hinf) << "\n"
           << "worst: [" << join(worst.removed) << "] hinf " << fmt(worst.hinf) << "\n";
        if (gram_row) {
            os << "gramian-selected: [" << join(gram_row->removed) << "] hinf " << fmt(gram_row->hinf) << ", rank "
               << (*res.highlight_position + 1) << " of " << res.rows.size() << "\n";
        }
        if (shown > 0 && a.top) {
            os << "rank  removed  hinf  bound\n";
            for (Index i = 0; i < shown; ++i) {
                const auto& r = res.rows[i];
                os << (i + 1) << "  [" << join(r.removed) << "]  " << fmt(r.hinf) << "  "
                   << (r.bound ? fmt(*r.bound) : "-") << "\n";
            }
        }
    }
    finish(c, in.net, os.str());
    return 0;
}

}  // namespace kronred::cli
