#include <algorithm>
#include <cmath>
#include <sstream>

#include <kronred/builtin_networks.hpp>
#include <kronred/network_io.hpp>
#include <kronred/report_json.hpp>
#include <kronred/simulate.hpp>
#include <kronred/spectral.hpp>
#include <kronred/sweep.hpp>

#include "commands.hpp"

namespace kronred::cli {

using nlohmann::json;

namespace {

constexpr double kAbsEigMoment = 1e-3;
constexpr double kRelBound = 0.05;
constexpr double kRelHinf = 0.01;

struct Item {
    std::string group;
    std::string label;
    std::string expected;
    std::string actual;
    std::string tolerance;
    bool pass = false;
};

class Checker {
public:
    void abs(const std::string& group, const std::string& label, double expected, double actual, double tol)
    {
        add(group, label, fmt(expected), fmt(actual), "abs " + fmt(tol), std::abs(actual - expected) <= tol);
    }

    void rel(const std::string& group, const std::string& label, double expected, double actual, double tol)
    {
        add(group, label, fmt(expected), fmt(actual), "rel " + fmt(tol),
            std::abs(actual - expected) <= tol * std::abs(expected));
    }

    void flag(const std::string& group, const std::string& label, bool actual)
    {
        add(group, label, "true", actual ? "true" : "false", "exact", actual);
    }

    void same(const std::string& group, const std::string& label, const std::string& expected,
              const std::string& actual)
    {
        add(group, label, expected, actual, "exact", expected == actual);
    }

    const std::vector<Item>& items() const noexcept { return items_; }
    bool all_pass() const
    {
        return std::all_of(items_.begin(), items_.end(), [](const Item& i) { return i.pass; });
    }

private:
    void add(const std::string& g, const std::string& l, std::string e, std::string a, std::string t, bool p)
    {
        items_.push_back({g, l, std::move(e), std::move(a), std::move(t), p});
    }
    std::vector<Item> items_;
};

bool wants(const ReproArgs& a, int table)
{
    return !a.table || *a.table == table;
}

std::string labels(const IndexList& idx)
{
    std::string s;
    for (Index i : idx) {
        s += (s.empty() ? "" : " ") + std::to_string(i + 1);
    }
    return s;
}

IndexList to_indices(const std::vector<int>& one_based)
{
    IndexList v;
    for (int n : one_based) {
        v.push_back(static_cast<Index>(n - 1));
    }
    std::sort(v.begin(), v.end());
    return v;
}

IndexList complement(Index n, const IndexList& keep)
{
    IndexList v;
    for (Index i = 0; i < n; ++i) {
        if (!std::binary_search(keep.begin(), keep.end(), i)) {
            v.push_back(i);
        }
    }
    return v;
}

IndexList order_of(const std::vector<BoundRecord>& rows)
{
    IndexList v;
    for (const auto& r : rows) {
        v.push_back(r.complex_index);
    }
    return v;
}

const BoundRecord& row_for(const std::vector<BoundRecord>& rows, Index i)
{
    return *std::find_if(rows.begin(), rows.end(), [i](const BoundRecord& r) { return r.complex_index == i; });
}

void glycolysis(const Common& c, const ReproArgs& a, Checker& ck)
{
    const auto net = builtin::glycolysis();
    const auto sys = build_open_linear(net);
    const Matrix LR = build_laplacian(net) + net.outflow_matrix();
    const auto part = Partition::from_removed(3, {1});

    if (wants(a, 0)) {
        const auto red = kron_reduce_open(net, part, OutputMode::MeasuredPreserving, c.tol);
        const double L_hat[2][2] = {{3.18, -3.18}, {-3.18, 10.82}};
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                ck.abs("reduction (remove complex 2)", "L_hat(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")",
                       L_hat[i][j], red.L_hat(i, j), 0.01);
            }
        }
        const auto mom = verify_moment_matching(sys, as_linear(red), c.tol);
        ck.abs("zero moment", "C A^-1 B (full)", -0.6283, mom.full_moment(0, 0), kAbsEigMoment);
        ck.abs("zero moment", "C_hat A_hat^-1 B_hat (reduced)", -0.6283, mom.reduced_moment(0, 0), kAbsEigMoment);
        ck.flag("zero moment", "matched within tolerance", mom.matched);

        const auto spec = check_interlacing(LR, red.L_hat, c.tol.interlacing_slack);
        const double full[3] = {1.8745, 11.8516, 80.4339};
        const double reduced[2] = {2.0281, 11.9645};
        for (int i = 0; i < 3; ++i) {
            ck.abs("eigenvalues", "lambda_" + std::to_string(i + 1) + "(L+R)", full[i], spec.full_eigs(i), kAbsEigMoment);
        }
        for (int i = 0; i < 2; ++i) {
            ck.abs("eigenvalues", "lambda_" + std::to_string(i + 1) + "(L_hat)", reduced[i], spec.reduced_eigs(i),
                   kAbsEigMoment);
        }
        ck.flag("eigenvalues", "interlacing chain holds", spec.interlaced);
    }

    if (wants(a, 1)) {
        Common cc = c;
        if (!c.objective_set) {
            cc.objective = "leak-weighted";
        }
        const auto g = compute_gramians(sys, gramian_options(cc), c.tol);
        const double P[3] = {6.1949, 0.6885, 2.1055};
        const double Q[3] = {2.7773, 16.3089, 10.0080};
        const std::string grp = "diagonal gramians (" + cc.objective + ")";
        for (int i = 0; i < 3; ++i) {
            ck.rel(grp, "P(" + std::to_string(i + 1) + ")", P[i], g.pi_c(i), kRelBound);
            ck.rel(grp, "Q(" + std::to_string(i + 1) + ")", Q[i], g.pi_o(i), kRelBound);
        }
        const auto rows = one_step_table(sys, g, {0, 1, 2}, true, c.tol);
        const double bound[3] = {3.6978, 0.3595, 1.2017};
        const double hinf[3] = {0.4075, 0.0335, 0.1016};
        for (Index i = 0; i < 3; ++i) {
            const std::string n = "node " + std::to_string(i + 1);
            ck.rel("glycolysis one-step table", n + " bound", bound[i], rows[i].bound, kRelBound);
            ck.rel("glycolysis one-step table", n + " H-inf error", hinf[i], *rows[i].hinf_error, kRelHinf);
            ck.flag("glycolysis one-step table", n + " bound >= error", rows[i].bound >= *rows[i].hinf_error);
        }
    }
}

void glycogen(const Common& c, const ReproArgs& a, Checker& ck)
{
    if (!wants(a, 0)) {
        return;
    }
    const auto net = builtin::glycogen();
    const auto red = kron_reduce_open(net, Partition::from_removed(5, {4}), OutputMode::MeasuredPreserving, c.tol);
    const double A_hat[4][4] = {
        {-7.64, 6, 0, 0}, {7.64, -8.4, 0, 19.11}, {0, 0, -332.11, 0}, {0, 2.4, 0, -19.11}};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            ck.abs("reduction (remove complex 5)", "A_hat(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")",
                   A_hat[i][j], -red.L_hat(i, j), 0.01);
        }
    }
    const auto mom = verify_moment_matching(net, red, c.tol);
    ck.rel("zero moment", "full network", 3.011e-4, mom.full_moment(0, 0), kRelHinf);
    ck.rel("zero moment", "reduced network", 3.011e-4, mom.reduced_moment(0, 0), kRelHinf);
    ck.flag("zero moment", "full and reduced agree", mom.matched);
}

void asm1(const Common& c, const ReproArgs& a, Checker& ck)
{
    const auto net = builtin::asm1();
    const auto sys = build_open_linear(net);
    if (wants(a, 2)) {
        const auto g = compute_gramians(sys, gramian_options(c), c.tol);
        const auto rows = one_step_table(sys, g, {0, 1, 2, 3, 4}, false, c.tol);
        const double bound[5] = {1.3517, 0.0701, 0.2235, 0.9275, 6.0011};
        for (Index i = 0; i < 5; ++i) {
            const std::string n = "x" + std::to_string(i + 1);
            ck.rel("asm1 one-step bounds", n + " bound", bound[i], rows[i].bound, kRelBound);
            ck.flag("asm1 one-step bounds", n + " sup condition verified", *rows[i].bound_verified);
        }
        ck.same("asm1 one-step bounds", "ranking by bound", "2 3 4 1 5", labels(order_of(rank_nodes(sys, g, {0, 1, 2, 3, 4}))));
    }
    if (wants(a, 0)) {
        const Vector u = Vector::Ones(sys.num_inputs());
        const double dc = (-(sys.C * sys.A.partialPivLu().solve(sys.B * u)))(0);
        const double horizon = default_horizon(sys.A);
        for (Index i = 0; i < 5; ++i) {
            const auto red = kron_reduce_linear(sys, Partition::from_removed(5, {i}), OutputMode::Permissive, c.tol);
            const auto tr = simulate_linear(red, InputSignal::step(u), 2.0 * horizon, Vector::Zero(red.order()));
            const double y_end = tr.outputs.back()(0);
            ck.rel("asm1 step responses", "remove x" + std::to_string(i + 1) + " final value vs full steady state", dc,
                   y_end, 1e-3);
        }
    }
}

void mckeithan(const Common& c, const ReproArgs& a, Checker& ck)
{
    const auto net = builtin::mckeithan();
    const auto sys = build_open_linear(net);
    const Index n = sys.order();
    const auto g = compute_gramians(sys, gramian_options(c), c.tol);

    if (wants(a, 3)) {
        struct Row {
            int node;
            double bound;
            double hinf_e3;
        };
        const Row expected[] = {
            {21, 0.2436, 0.4283}, {17, 0.5249, 1.1678}, {3, 0.9024, 2.1484},  {19, 0.9229, 1.9059},
            {4, 0.9486, 2.2514},  {5, 0.9636, 2.2874},  {18, 0.9811, 2.0534}, {6, 0.9830, 2.3325},
            {7, 1.0148, 2.4048},  {15, 1.0570, 2.4492}, {8, 1.0803, 2.5576}, {16, 1.2222, 2.7646},
            {9, 1.2377, 2.9387},  {14, 1.2641, 2.9795}, {2, 1.2892, 3.0969}, {12, 1.3359, 3.1595},
            {20, 1.3492, 2.2954}, {13, 1.3896, 3.2869}, {1, 1.5374, 3.7140}, {10, 1.5533, 3.7112},
            {11, 1.7753, 4.2513},
        };
        IndexList all(n);
        for (Index i = 0; i < n; ++i) {
            all[i] = i;
        }
        const IndexList order = order_of(rank_nodes(sys, g, all));
        const auto rows = one_step_table(sys, g, order, true, c.tol);
        std::string printed;
        for (const auto& e : expected) {
            const auto& r = row_for(rows, static_cast<Index>(e.node - 1));
            const std::string nm = "node " + std::to_string(e.node);
            ck.rel("mckeithan one-step table", nm + " bound", e.bound, r.bound, kRelBound);
            ck.rel("mckeithan one-step table", nm + " H-inf error (x1e-3)", e.hinf_e3, *r.hinf_error * 1e3, kRelHinf);
            printed += (printed.empty() ? "" : " ") + std::to_string(e.node);
        }
        ck.same("mckeithan one-step table", "ranking by bound", printed, labels(order));
    }

    if (wants(a, 4)) {
        const FullResponseCache cache(sys, HinfOptions{});
        const IndexList removable = unmeasured_nodes(sys);
        const std::string grp = "mckeithan subset comparison";

        auto sweep = [&](Index k) {
            SweepOptions so;
            so.k = k;
            so.removable = removable;
            so.jobs = c.jobs;
            return sweep_subsets(sys, so);
        };
        auto named = [&](const std::string& col, const std::string& which, const IndexList& removed, double expected) {
            ck.rel(grp, col + " " + which + " {" + labels(removed) + "}", expected, removal_error(cache, removed, c.tol),
                   kRelHinf);
        };

        // remove 5
        {
            const auto res = sweep(5);
            ck.rel(grp, "remove 5 optimal (exhaustive over " + std::to_string(res.rows.size()) + ")", 0.0102,
                   res.rows.front().hinf, kRelHinf);
            ck.rel(grp, "remove 5 worst (exhaustive)", 0.0221, res.rows.back().hinf, kRelHinf);
            named("remove 5", "gramian", to_indices({17, 3, 19, 4, 5}), 0.0105);
        }
        // remove 10
        named("remove 10", "gramian", to_indices({3, 4, 5, 6, 7, 8, 15, 17, 18, 19}), 0.0264);
        named("remove 10", "optimal", to_indices({3, 4, 5, 6, 7, 15, 17, 18, 19, 20}), 0.0258);
        named("remove 10", "worst", to_indices({1, 2, 8, 9, 10, 11, 12, 13, 14, 16}), 0.0452);
        // keep 6
        named("keep 6", "gramian", complement(n, to_indices({1, 10, 11, 13, 20, 21})), 0.0540);
        named("keep 6", "optimal", complement(n, to_indices({1, 10, 11, 12, 13, 21})), 0.0516);
        named("keep 6", "worst", complement(n, to_indices({3, 17, 18, 19, 20, 21})), 0.0731);
        if (a.exhaustive) {
            for (const auto& [k, best, worst] : {std::tuple{Index{10}, 0.0258, 0.0452}, std::tuple{Index{15}, 0.0516, 0.0731}}) {
                const auto res = sweep(k);
                const std::string col = "remove " + std::to_string(k);
                ck.rel(grp, col + " optimal (exhaustive over " + std::to_string(res.rows.size()) + ")", best,
                       res.rows.front().hinf, kRelHinf);
                ck.rel(grp, col + " worst (exhaustive)", worst, res.rows.back().hinf, kRelHinf);
            }
        }
    }
}

}  // namespace

int cmd_repro(const Common& c, const ReproArgs& a)
{
    const std::vector<std::pair<std::string, void (*)(const Common&, const ReproArgs&, Checker&)>> examples = {
        {"glycolysis", glycolysis}, {"glycogen", glycogen}, {"asm1", asm1}, {"mckeithan", mckeithan}};
    const auto it = std::find_if(examples.begin(), examples.end(), [&](const auto& e) { return e.first == a.example; });
    if (it == examples.end()) {
        throw InputError("repro: unknown example '" + a.example + "' (glycolysis, glycogen, asm1, mckeithan)");
    }
    Checker ck;
    it->second(c, a, ck);
    if (ck.items().empty()) {
        throw InputError("repro " + a.example + ": nothing to check for --table " + std::to_string(*a.table));
    }

    std::ostringstream os;
    const auto& items = ck.items();
    const auto failed = static_cast<std::size_t>(std::count_if(items.begin(), items.end(), [](const Item& i) { return !i.pass; }));
    if (c.json) {
        json arr = json::array();
        for (const auto& i : items) {
            arr.push_back({{"group", i.group},
                           {"label", i.label},
                           {"expected", i.expected},
                           {"actual", i.actual},
                           {"tolerance", i.tolerance},
                           {"pass", i.pass}});
        }
        os << dump_canonical({{"example", a.example}, {"checks", arr}, {"failed", failed}, {"passed", items.size() - failed}});
    } else {
        std::string group;
        for (const auto& i : items) {
            if (i.group != group) {
                group = i.group;
                os << "[" << group << "]\n";
            }
            os << "  " << (i.pass ? "ok  " : "FAIL") << "  " << i.label << ": expected " << i.expected << ", got "
               << i.actual << " (" << i.tolerance << ")\n";
        }
        os << a.example << ": " << (items.size() - failed) << "/" << items.size() << " checks passed\n";
        if (failed > 0) {
            os << "mismatches:\n";
            for (const auto& i : items) {
                if (!i.pass) {
                    os << "  [" << i.group << "] " << i.label << ": expected " << i.expected << ", got " << i.actual
                       << " (" << i.tolerance << ")\n";
                }
            }
        }
    }
    const auto net = builtin::by_name(a.example);
    emit(c, os.str());
    write_manifest(c, network_to_json(net), os.str());
    return ck.all_pass() ? 0 : kExitMismatch;
}

}  // namespace kronred::cli
