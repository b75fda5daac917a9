#include "kronred/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace kronred {

double binomial(Index n, Index k)
{
    if (k > n) {
        return 0.0;
    }
    k = std::min(k, n - k);
    double r = 1.0;
    for (Index i = 1; i <= k; ++i) {
        r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    }
    return std::round(r);
}

std::vector<IndexList> k_subsets(const IndexList& items, Index k)
{
    std::vector<IndexList> out;
    const Index n = items.size();
    if (k > n) {
        return out;
    }
    std::vector<Index> idx(k);
    for (Index i = 0; i < k; ++i) {
        idx[i] = i;
    }
    while (true) {
        IndexList s(k);
        for (Index i = 0; i < k; ++i) {
            s[i] = items[idx[i]];
        }
        out.push_back(std::move(s));
        Index i = k;
        while (i > 0 && idx[i - 1] == n - k + (i - 1)) {
            --i;
        }
        if (i == 0) {
            break;
        }
        ++idx[i - 1];
        for (Index j = i; j < k; ++j) {
            idx[j] = idx[j - 1] + 1;
        }
    }
    return out;
}

SweepResult sweep_subsets(const OpenLinearSystem& sys, const SweepOptions& opts)
{
    IndexList removable = opts.removable.empty() ? unmeasured_nodes(sys) : opts.removable;
    std::sort(removable.begin(), removable.end());
    if (std::adjacent_find(removable.begin(), removable.end()) != removable.end()) {
        throw InputError("sweep: removable set has duplicates");
    }
    for (Index i : removable) {
        if (i >= sys.order()) {
            throw InputError("sweep: removable node out of range");
        }
    }
    if (opts.k > removable.size()) {
        throw InputError("sweep: k exceeds the number of removable nodes");
    }
    const double count = binomial(removable.size(), opts.k);
    if (count > opts.cap) {
        std::ostringstream os;
        os << "sweep: " << static_cast<long long>(count) << " subsets exceed the cap of "
           << static_cast<long long>(opts.cap);
        throw InputError(os.str());
    }

    const std::vector<IndexList> subsets = k_subsets(removable, opts.k);
    SweepResult res;
    res.candidates = subsets.size();
    res.rows.resize(subsets.size());
    const FullResponseCache cache(sys, opts.hinf);

    unsigned jobs = opts.jobs ? opts.jobs : std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(1, subsets.size())));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= subsets.size()) {
                return;
            }
            try {
                const auto part = Partition::from_removed(sys.order(), subsets[i]);
                const OpenLinearSystem red = kron_reduce_linear(sys, part, opts.mode);
                SweepRow row;
                row.removed = subsets[i];
                row.hinf = hinf_error(cache, red).hinf;
                if (opts.gramians) {
                    row.bound = multi_node_bound(sys, *opts.gramians, subsets[i]).total;
                }
                res.rows[i] = std::move(row);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(subsets.size());
                return;
            }
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned j = 0; j < jobs; ++j) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    std::sort(res.rows.begin(), res.rows.end(), [](const SweepRow& a, const SweepRow& b) {
        return a.hinf != b.hinf ? a.hinf < b.hinf : a.removed < b.removed;
    });
    if (opts.highlight) {
        IndexList h = *opts.highlight;
        std::sort(h.begin(), h.end());
        for (Index i = 0; i < res.rows.size(); ++i) {
            if (res.rows[i].removed == h) {
                res.highlight_position = i;
                break;
            }
        }
    }
    return res;
}

}  // namespace kronred
