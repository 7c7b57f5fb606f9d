#include "qlab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qlab::metrics {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
}

std::vector<double> log_grid(double lo, double hi, int per_decade) {
    if (!(lo > 0.0) || !(hi >= lo) || per_decade < 1)
        throw std::invalid_argument("log_grid: need 0 < lo <= hi, per_decade >= 1");
    std::vector<double> g;
    const double step = std::log10(hi / lo);
    const int n = static_cast<int>(std::floor(step * per_decade)) + 1;
    g.reserve(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i < n; ++i) g.push_back(lo * std::pow(10.0, static_cast<double>(i) / per_decade));
    if (g.back() < hi * (1.0 - 1e-12)) g.push_back(hi);
    return g;
}

SampleSet sojourn_samples(const SimOutput& out, double warmup_fraction) {
    if (warmup_fraction < 0.0 || warmup_fraction >= 1.0)
        throw std::invalid_argument("sojourn_samples: warmup_fraction in [0,1)");
    std::vector<std::uint32_t> order(out.jobs.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (out.jobs[a].departure != out.jobs[b].departure)
            return out.jobs[a].departure < out.jobs[b].departure;
        return out.jobs[a].id < out.jobs[b].id;
    });
    const std::size_t skip =
        static_cast<std::size_t>(warmup_fraction * static_cast<double>(order.size()));
    SampleSet s;
    s.value.reserve(order.size() - skip);
    s.cls.reserve(order.size() - skip);
    for (std::size_t i = skip; i < order.size(); ++i) {
        const JobRecord& j = out.jobs[order[i]];
        if (j.truncated) continue;
        s.value.push_back(j.departure - j.arrival);
        s.cls.push_back(static_cast<std::int16_t>(j.cls));
    }
    return s;
}

SampleSet workload_sample_set(std::span<const double> workload, double warmup_fraction) {
    if (warmup_fraction < 0.0 || warmup_fraction >= 1.0)
        throw std::invalid_argument("workload_sample_set: warmup_fraction in [0,1)");
    const std::size_t skip =
        static_cast<std::size_t>(warmup_fraction * static_cast<double>(workload.size()));
    SampleSet s;
    s.value.assign(workload.begin() + static_cast<std::ptrdiff_t>(skip), workload.end());
    s.cls.assign(s.value.size(), 0);
    return s;
}

TailCurve empirical_conditional_tail(const SampleSet& s, int m, int k,
                                     std::span<const double> grid, int batches) {
    if (k > m) throw std::invalid_argument("empirical_conditional_tail: k must not exceed m");
    if (batches < 2) throw std::invalid_argument("empirical_conditional_tail: need >= 2 batches");

    TailCurve curve;
    curve.x.assign(grid.begin(), grid.end());
    curve.n = s.population();
    const std::size_t n = s.value.size();
    const std::size_t g = grid.size();
    curve.survival.assign(g, 0.0);
    curve.count.assign(g, 0);
    curve.ci_half_width.assign(g, 0.0);
    if (n == 0) return curve;

    // Per-batch exceedance counts: sort each contiguous chunk's class-k
    // values once, then binary-search every grid point.
    const std::size_t nb = static_cast<std::size_t>(batches);
    std::vector<std::vector<double>> batch_means(g);
    for (auto& v : batch_means) v.reserve(nb);
    std::vector<double> chunk;
    for (std::size_t b = 0; b < nb; ++b) {
        const std::size_t lo = b * n / nb;
        const std::size_t hi = (b + 1) * n / nb;
        if (hi == lo) continue;
        chunk.clear();
        for (std::size_t i = lo; i < hi; ++i)
            if (k < 0 || s.cls[i] == k) chunk.push_back(s.value[i]);
        std::sort(chunk.begin(), chunk.end());
        for (std::size_t j = 0; j < g; ++j) {
            const auto it = std::upper_bound(chunk.begin(), chunk.end(), grid[j]);
            const std::uint64_t cnt = static_cast<std::uint64_t>(chunk.end() - it);
            curve.count[j] += cnt;
            batch_means[j].push_back(static_cast<double>(cnt) / static_cast<double>(hi - lo));
        }
    }
    for (std::size_t j = 0; j < g; ++j) {
        curve.survival[j] = static_cast<double>(curve.count[j]) / static_cast<double>(n);
        const auto& bm = batch_means[j];
        if (bm.size() >= 2) {
            const double mean_b = std::accumulate(bm.begin(), bm.end(), 0.0) / bm.size();
            double ss = 0.0;
            for (double v : bm) ss += (v - mean_b) * (v - mean_b);
            const double sd = std::sqrt(ss / static_cast<double>(bm.size() - 1));
            curve.ci_half_width[j] = 1.96 * sd / std::sqrt(static_cast<double>(bm.size()));
        }
    }
    return curve;
}

double theory_conditional_tail(const DistributionSpec& dist, double rho, int m, int k, double x,
                               SojournDiscipline disc) {
    if (!(rho < 1.0)) throw std::domain_error("theory_conditional_tail: rho must be < 1");
    if (m < 0 || k < 0 || k > m) throw std::invalid_argument("theory_conditional_tail: need 0 <= k <= m");
    const double kk = static_cast<double>(k + 1);
    const double arg = disc == SojournDiscipline::Srpt ? (1.0 - rho) * x : (1.0 - rho) * x / kk;
    return oracle::order_stat_prob_exact(m, k, tail(dist, arg));
}

TailCurve theory_conditional_curve(const DistributionSpec& dist, double rho, int m, int k,
                                   std::span<const double> grid, SojournDiscipline disc) {
    TailCurve c;
    c.x.assign(grid.begin(), grid.end());
    c.survival.reserve(grid.size());
    for (double x : grid) c.survival.push_back(theory_conditional_tail(dist, rho, m, k, x, disc));
    c.count.assign(grid.size(), 0);
    c.ci_half_width.assign(grid.size(), 0.0);
    return c;
}

double theory_workload_tail(const oracle::ClassLaw& law, double capacity,
                            double mean_interarrival, WorkloadMode mode,
                            std::span<const double> class_means, double x) {
    if (static_cast<int>(class_means.size()) != law.m() + 1)
        throw std::invalid_argument("theory_workload_tail: class_means must cover classes 0..m");
    double load = 0.0;
    if (mode == WorkloadMode::Isolation) {
        load = class_means[static_cast<std::size_t>(law.k())];
    } else {
        for (int i = law.k(); i <= law.m(); ++i) load += class_means[static_cast<std::size_t>(i)];
    }
    const double denom = capacity * mean_interarrival - load;
    if (!(denom > 0.0)) throw std::domain_error("theory_workload_tail: unstable (denominator <= 0)");
    return law.integrated_tail(x) / denom;
}

TailCurve theory_workload_curve(const oracle::ClassLaw& law, double capacity,
                                double mean_interarrival, WorkloadMode mode,
                                std::span<const double> class_means,
                                std::span<const double> grid) {
    TailCurve c;
    c.x.assign(grid.begin(), grid.end());
    c.survival.reserve(grid.size());
    for (double x : grid)
        c.survival.push_back(theory_workload_tail(law, capacity, mean_interarrival, mode, class_means, x));
    c.count.assign(grid.size(), 0);
    c.ci_half_width.assign(grid.size(), 0.0);
    return c;
}

SlopeFit loglog_slope(const TailCurve& curve, double x_lo, double x_hi,
                      std::uint64_t count_floor) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < curve.x.size(); ++i) {
        if (curve.x[i] < x_lo || curve.x[i] > x_hi) continue;
        if (!(curve.survival[i] > 0.0)) continue;
        if (count_floor > 0 && curve.count[i] < count_floor) continue;
        xs.push_back(std::log(curve.x[i]));
        ys.push_back(std::log(curve.survival[i]));
    }
    const std::size_t n = xs.size();
    if (n < 5) throw std::runtime_error("loglog_slope: insufficient points in range");

    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    SlopeFit fit;
    fit.points = static_cast<int>(n);
    fit.slope = sxy / sxx;
    const double resid = std::max(0.0, syy - fit.slope * sxy);
    fit.stderr_ = std::sqrt(resid / static_cast<double>(n - 2) / sxx);
    return fit;
}

double max_usable_x(const TailCurve& curve, std::uint64_t count_floor) {
    double best = 0.0;
    for (std::size_t i = 0; i < curve.x.size(); ++i)
        if (curve.survival[i] > 0.0 && curve.count[i] >= count_floor) best = std::max(best, curve.x[i]);
    return best;
}

TheoremReport compare(std::string theorem, const TailCurve& empirical,
                      const TailCurve& theoretical, const Tolerances& tol) {
    if (empirical.x.size() != theoretical.x.size())
        throw std::invalid_argument("compare: curves must share a grid");

    TheoremReport rep;
    rep.theorem = std::move(theorem);
    rep.empirical = empirical;
    rep.theoretical = theoretical;
    rep.ratio.assign(empirical.x.size(), kNan);

    bool ratios_ok = true;
    std::size_t usable = 0;
    for (std::size_t i = 0; i < empirical.x.size(); ++i) {
        if (empirical.count[i] < tol.count_floor) continue;
        if (!(theoretical.survival[i] > 0.0)) continue;
        rep.ratio[i] = empirical.survival[i] / theoretical.survival[i];
        ++usable;
        if (rep.ratio[i] < tol.ratio_lo || rep.ratio[i] > tol.ratio_hi) ratios_ok = false;
    }

    std::ostringstream detail;
    if (usable == 0) {
        rep.outcome = Outcome::Inconclusive;
        rep.detail = "no grid point meets the exceedance floor";
        return rep;
    }

    bool slope_ok = true;
    bool have_slopes = false;
    try {
        rep.slope_empirical = loglog_slope(empirical, empirical.x.front(), empirical.x.back(),
                                           tol.count_floor);
        // Fit the theory curve over the same usable x-range.
        TailCurve thy = theoretical;
        thy.count.assign(thy.x.size(), 0);
        double lo = 0.0, hi = 0.0;
        for (std::size_t i = 0; i < empirical.x.size(); ++i) {
            if (empirical.count[i] < tol.count_floor || !(empirical.survival[i] > 0.0)) continue;
            if (lo == 0.0) lo = empirical.x[i];
            hi = empirical.x[i];
        }
        const SlopeFit thy_fit = loglog_slope(thy, lo, hi, 0);
        rep.slope_theoretical = thy_fit.slope;
        have_slopes = true;
        slope_ok = std::abs(rep.slope_empirical.slope - rep.slope_theoretical) <=
                   tol.slope_slack * std::abs(rep.slope_theoretical);
        detail << "slope " << rep.slope_empirical.slope << " vs " << rep.slope_theoretical << "; ";
    } catch (const std::runtime_error&) {
        detail << "slope fit skipped (too few usable points); ";
    }

    detail << usable << " ratio points";
    rep.detail = detail.str();
    rep.outcome = (ratios_ok && (!have_slopes || slope_ok)) ? Outcome::Pass : Outcome::Fail;
    return rep;
}

const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Pass: return "pass";
        case Outcome::Fail: return "fail";
        case Outcome::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

}  // namespace qlab::metrics
