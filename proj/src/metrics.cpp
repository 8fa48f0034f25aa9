#include "lgelu/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace lgelu {

const char* to_string(MetricDirection direction) {
    return direction == MetricDirection::HigherBetter ? "higher_better" : "lower_better";
}

double drift_v_lambda(const RunRecord& run) {
    if (run.profiles.size() < 2) {
        throw std::invalid_argument("drift_v_lambda: need at least 2 epochs of profiles");
    }
    const std::size_t num_layers = run.profiles.front().lambdas.size();
    if (num_layers == 0) {
        throw std::invalid_argument("drift_v_lambda: empty profiles");
    }
    double total = 0.0;
    for (std::size_t e = 0; e + 1 < run.profiles.size(); ++e) {
        const auto& cur = run.profiles[e].lambdas;
        const auto& next = run.profiles[e + 1].lambdas;
        if (cur.size() != num_layers || next.size() != num_layers) {
            throw std::invalid_argument("drift_v_lambda: ragged profile widths");
        }
        for (std::size_t l = 0; l < num_layers; ++l) {
            total += std::fabs(next[l] - cur[l]);
        }
    }
    return total / static_cast<double>(num_layers);
}

double cell_average_drift(const std::vector<RunRecord>& runs) {
    if (runs.empty()) {
        throw std::invalid_argument("cell_average_drift: empty run list");
    }
    const double t = runs.front().t;
    const double c = runs.front().c;
    double sum = 0.0;
    for (const RunRecord& run : runs) {
        if (run.t != t || run.c != c) {
            throw std::invalid_argument("cell_average_drift: mixed (t, c) cells");
        }
        sum += drift_v_lambda(run);
    }
    return sum / static_cast<double>(runs.size());
}

BestValidation best_validation(const RunRecord& run) {
    if (run.val_curve.empty()) {
        throw std::invalid_argument("best_validation: empty validation curve");
    }
    BestValidation best;
    best.bvs = run.val_curve.front();
    best.epoch = 1;
    for (std::size_t e = 1; e < run.val_curve.size(); ++e) {
        const double v = run.val_curve[e];
        const bool better = run.metric_direction == MetricDirection::HigherBetter ? v > best.bvs
                                                                                  : v < best.bvs;
        if (better) {
            best.bvs = v;
            best.epoch = static_cast<int>(e) + 1;
        }
    }
    return best;
}

double delta_bvs(const std::vector<RunRecord>& cell_runs, const std::vector<RunRecord>& baseline_runs) {
    if (cell_runs.empty() || baseline_runs.empty()) {
        throw std::invalid_argument("delta_bvs: empty run lists");
    }
    auto mean_bvs = [](const std::vector<RunRecord>& runs) {
        double sum = 0.0;
        for (const RunRecord& run : runs) {
            sum += best_validation(run).bvs;
        }
        return sum / static_cast<double>(runs.size());
    };
    return mean_bvs(cell_runs) - mean_bvs(baseline_runs);
}

namespace {

// Average ranks (1-based); tied values share the mean of their rank range.
std::vector<double> average_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) {
            ++j;
        }
        const double shared = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (std::size_t k = i; k <= j; ++k) {
            ranks[order[k]] = shared;
        }
        i = j + 1;
    }
    return ranks;
}

}  // namespace

std::optional<double> spearman_rho(const HardnessProfile& a, const HardnessProfile& b) {
    if (a.lambdas.size() != b.lambdas.size()) {
        throw std::invalid_argument("spearman_rho: profile length mismatch");
    }
    const std::size_t n = a.lambdas.size();
    if (n < 2) {
        throw std::invalid_argument("spearman_rho: need at least 2 layers");
    }
    const std::vector<double> ra = average_ranks(a.lambdas);
    const std::vector<double> rb = average_ranks(b.lambdas);

    const double mean = 0.5 * (1.0 + static_cast<double>(n));  // mean rank of both vectors
    double cov = 0.0, var_a = 0.0, var_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = ra[i] - mean;
        const double db = rb[i] - mean;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if (var_a == 0.0 || var_b == 0.0) {
        return std::nullopt;
    }
    return cov / std::sqrt(var_a * var_b);
}

std::vector<ModePairRho> rho_s_across_modes(const std::vector<RunRecord>& runs, int epoch) {
    std::map<InitMode, std::map<std::uint64_t, const RunRecord*>> by_mode;
    for (const RunRecord& run : runs) {
        auto [it, inserted] = by_mode[run.init_mode].emplace(run.seed, &run);
        if (!inserted) {
            throw std::invalid_argument("rho_s_across_modes: duplicate (mode, seed) run");
        }
    }
    if (by_mode.size() < 2) {
        throw std::invalid_argument("rho_s_across_modes: need runs from at least 2 modes");
    }
    std::set<std::uint64_t> seeds;
    for (const auto& [mode, seed_map] : by_mode) {
        std::set<std::uint64_t> these;
        for (const auto& [seed, run] : seed_map) {
            these.insert(seed);
        }
        if (seeds.empty()) {
            seeds = these;
        } else if (these != seeds) {
            throw std::invalid_argument("rho_s_across_modes: modes cover different seed sets");
        }
    }

    auto profile_at = [&](const RunRecord& run) -> const HardnessProfile& {
        if (epoch < 1 || epoch > static_cast<int>(run.profiles.size())) {
            throw std::out_of_range("rho_s_across_modes: epoch " + std::to_string(epoch) +
                                    " outside recorded profiles");
        }
        return run.profiles[static_cast<std::size_t>(epoch) - 1];
    };

    std::vector<ModePairRho> result;
    for (auto it1 = by_mode.begin(); it1 != by_mode.end(); ++it1) {
        for (auto it2 = std::next(it1); it2 != by_mode.end(); ++it2) {
            ModePairRho pair;
            pair.first = it1->first;
            pair.second = it2->first;
            double sum = 0.0;
            bool defined = true;
            for (std::uint64_t seed : seeds) {
                const auto rho = spearman_rho(profile_at(*it1->second.at(seed)),
                                              profile_at(*it2->second.at(seed)));
                if (!rho) {
                    defined = false;
                    break;
                }
                sum += *rho;
            }
            if (defined) {
                pair.rho = sum / static_cast<double>(seeds.size());
            }
            result.push_back(pair);
        }
    }
    return result;
}

}  // namespace lgelu
