#include "qcnhc/ensemble.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace qcnhc {

Mode mode_from_string(const std::string& s) {
    if (s == "adiabatic") return Mode::adiabatic;
    if (s == "nonadiabatic") return Mode::nonadiabatic;
    throw std::invalid_argument("unknown mode '" + s +
                                "' (expected adiabatic|nonadiabatic)");
}

std::string to_string(Mode m) {
    return m == Mode::adiabatic ? "adiabatic" : "nonadiabatic";
}

void EnsembleConfig::validate() const {
    SpinBosonParams p = params;
    if (p.m_eta1 <= 0.0 || p.m_eta2 <= 0.0) p.apply_default_thermostat_masses(tau);
    p.validate();
    if (n_traj < 1) throw std::invalid_argument("n_traj must be >= 1");
    propagation().validate();
}

PropagationConfig EnsembleConfig::propagation() const {
    PropagationConfig pc;
    pc.integ = integ;
    pc.t_max = t_max;
    pc.n_output = n_output;
    pc.max_hops = max_hops;
    pc.adiabatic = (mode == Mode::adiabatic);
    return pc;
}

namespace {

constexpr long kBlockSize = 256;

struct BlockAccumulator {
    std::vector<double> sum_re, sum_re2, sum_im, sum_im2;
    std::vector<long> count;
    long aborted = 0;
    long capped = 0;
    double max_drift = 0.0;
    double max_hop_error = 0.0;

    explicit BlockAccumulator(std::size_t n_points)
        : sum_re(n_points, 0.0),
          sum_re2(n_points, 0.0),
          sum_im(n_points, 0.0),
          sum_im2(n_points, 0.0),
          count(n_points, 0) {}

    void add(const TrajectoryResult& r) {
        for (std::size_t k = 0; k < r.contrib.size(); ++k) {
            const double re = r.contrib[k].real();
            const double im = r.contrib[k].imag();
            sum_re[k] += re;
            sum_re2[k] += re * re;
            sum_im[k] += im;
            sum_im2[k] += im * im;
            count[k] += 1;
        }
        if (r.aborted) aborted += 1;
        if (r.capped) capped += 1;
        max_drift = std::max(max_drift, r.max_drift);
        max_hop_error = std::max(max_hop_error, r.max_hop_error);
    }
};

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("QCNHC_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace

ObservableSeries run_ensemble(const EnsembleConfig& cfg) {
    cfg.validate();
    SpinBosonParams params = cfg.params;
    if (params.m_eta1 <= 0.0 || params.m_eta2 <= 0.0)
        params.apply_default_thermostat_masses(cfg.tau);
    const BathSpec bath = build_ohmic_bath(params);
    const PropagationConfig pc = cfg.propagation();
    const bool populations_only = cfg.populations_only;

    const std::size_t n_points = (cfg.t_max == 0.0)
                                     ? 1
                                     : static_cast<std::size_t>(cfg.n_output) + 1;
    const long n_blocks = (cfg.n_traj + kBlockSize - 1) / kBlockSize;
    std::vector<BlockAccumulator> blocks(n_blocks, BlockAccumulator(n_points));

    auto run_block = [&](long b) {
        const long lo = b * kBlockSize;
        const long hi = std::min(lo + kBlockSize, cfg.n_traj);
        BlockAccumulator& acc = blocks[b];
        for (long i = lo; i < hi; ++i) {
            Rng rng(cfg.master_seed + static_cast<std::uint64_t>(i));
            const InitialSample init =
                draw_initial(bath, params, rng, populations_only);
            acc.add(propagate_trajectory(init, bath, params, pc, rng));
        }
    };

    const int n_workers = resolve_workers(cfg.n_workers);
    if (n_workers <= 1 || n_blocks == 1) {
        for (long b = 0; b < n_blocks; ++b) run_block(b);
    } else {
        std::atomic<long> next{0};
        std::vector<std::thread> pool;
        const int n_spawn = std::min<long>(n_workers, n_blocks);
        pool.reserve(n_spawn);
        for (int w = 0; w < n_spawn; ++w) {
            pool.emplace_back([&] {
                for (long b = next.fetch_add(1); b < n_blocks; b = next.fetch_add(1))
                    run_block(b);
            });
        }
        for (auto& t : pool) t.join();
    }

    // Deterministic merge in block order.
    BlockAccumulator total(n_points);
    for (const BlockAccumulator& b : blocks) {
        for (std::size_t k = 0; k < n_points; ++k) {
            total.sum_re[k] += b.sum_re[k];
            total.sum_re2[k] += b.sum_re2[k];
            total.sum_im[k] += b.sum_im[k];
            total.sum_im2[k] += b.sum_im2[k];
            total.count[k] += b.count[k];
        }
        total.aborted += b.aborted;
        total.capped += b.capped;
        total.max_drift = std::max(total.max_drift, b.max_drift);
        total.max_hop_error = std::max(total.max_hop_error, b.max_hop_error);
    }

    const int stride = pc.steps_per_output();
    ObservableSeries out;
    out.times.resize(n_points);
    out.mean.resize(n_points);
    out.stderror.resize(n_points);
    out.imag_mean.resize(n_points);
    out.imag_stderror.resize(n_points);
    out.n_effective.assign(total.count.begin(), total.count.end());
    for (std::size_t k = 0; k < n_points; ++k) {
        out.times[k] = static_cast<double>(k) * stride * cfg.integ.dt;
        const double n = static_cast<double>(total.count[k]);
        if (n < 1.0) continue;
        const double m_re = total.sum_re[k] / n;
        const double m_im = total.sum_im[k] / n;
        out.mean[k] = m_re;
        out.imag_mean[k] = m_im;
        if (n > 1.0) {
            const double var_re =
                std::max(0.0, total.sum_re2[k] / n - m_re * m_re) * n / (n - 1.0);
            const double var_im =
                std::max(0.0, total.sum_im2[k] / n - m_im * m_im) * n / (n - 1.0);
            out.stderror[k] = std::sqrt(var_re / n);
            out.imag_stderror[k] = std::sqrt(var_im / n);
        }
    }
    out.aborted_fraction = static_cast<double>(total.aborted) / cfg.n_traj;
    out.capped_fraction = static_cast<double>(total.capped) / cfg.n_traj;
    out.max_drift = total.max_drift;
    out.max_hop_error = total.max_hop_error;
    out.failed = out.aborted_fraction > 0.01;
    return out;
}

SeriesComparison compare_series(const ObservableSeries& a, const ObservableSeries& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("compare_series: time grids differ in length");
    SeriesComparison cmp;
    cmp.z_scores.resize(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (std::abs(a.times[k] - b.times[k]) > 1e-12)
            throw std::invalid_argument("compare_series: time grids differ");
        const double d = std::abs(a.mean[k] - b.mean[k]);
        cmp.sup_diff = std::max(cmp.sup_diff, d);
        const double s =
            std::hypot(a.stderror[k], b.stderror[k]);
        cmp.z_scores[k] = (s > 0.0) ? d / s : (d > 0.0 ? INFINITY : 0.0);
    }
    return cmp;
}

}  // namespace qcnhc
