#include "qlab/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qlab/engine.hpp"
#include "qlab/quadrature.hpp"

namespace qlab::oracle {

double binomial(int m, int k) {
    if (k < 0 || k > m) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * static_cast<double>(m - k + i) / static_cast<double>(i);
    return r;
}

double order_stat_prob_exact(int m, int k, double p) {
    if (m < 0 || k < 0 || k > m) throw std::invalid_argument("order_stat_prob_exact: need 0 <= k <= m");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("order_stat_prob_exact: p must be in [0,1]");
    return binomial(m, k) / static_cast<double>(k + 1) * std::pow(p, k + 1);
}

McEstimate order_stat_prob_mc(const DistributionSpec& dist, int m, int k, double x,
                              std::uint64_t n_samples, RngStream& rng, OrderEvent event) {
    if (m < 0 || k < 0 || k > m) throw std::invalid_argument("order_stat_prob_mc: need 0 <= k <= m");
    std::uint64_t hits = 0;
    std::vector<double> draws(static_cast<std::size_t>(m));
    for (std::uint64_t trial = 0; trial < n_samples; ++trial) {
        const double x0 = sample_size(dist, rng);
        for (int i = 0; i < m; ++i) draws[static_cast<std::size_t>(i)] = sample_size(dist, rng);
        if (!(x0 > x)) continue;
        if (event == OrderEvent::ExactCount) {
            int greater = 0;
            for (int i = 0; i < m; ++i)
                if (draws[static_cast<std::size_t>(i)] > x0) ++greater;
            if (greater == k) ++hits;
        } else {
            bool below = true;
            for (int i = 0; i < k; ++i)
                if (x0 > draws[static_cast<std::size_t>(i)]) {
                    below = false;
                    break;
                }
            if (below) ++hits;
        }
    }
    const double scale = event == OrderEvent::BelowLabeledMin ? binomial(m, k) : 1.0;
    const double p_hat = static_cast<double>(hits) / static_cast<double>(n_samples);
    const double se = std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n_samples));
    return McEstimate{scale * p_hat, scale * se, n_samples};
}

double geometric_joint_tail_exact(double p, std::int64_t x) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("geometric_joint_tail_exact: p in (0,1)");
    if (x < 0) throw std::invalid_argument("geometric_joint_tail_exact: x must be a nonnegative integer");
    return p / (1.0 + p) * std::pow(p, 2.0 * (static_cast<double>(x) + 1.0));
}

ClassLaw::ClassLaw(DistributionSpec base, int m, int k)
    : base_(std::move(base)), m_(m), k_(k), binom_(binomial(m, k)) {
    if (m < 0 || k < 0 || k > m) throw std::invalid_argument("ClassLaw: need 0 <= k <= m");
    if (!is_continuous(base_))
        throw std::invalid_argument("ClassLaw: quadrature law requires a continuous base distribution");
    if (const auto* par = std::get_if<Pareto>(&base_)) {
        // E[B 1{A_k}] ~ integral of s^(k - 1/alpha): finite iff alpha(k+1) > 1.
        if (par->alpha * static_cast<double>(k + 1) <= 1.0)
            throw std::domain_error("ClassLaw: class mean diverges for alpha(k+1) <= 1");
    }
}

double ClassLaw::tail(double x) const {
    const double s0 = qlab::tail(base_, x);
    if (s0 <= 0.0) return 0.0;
    const int k = k_, mk = m_ - k_;
    return binom_ * integrate(
                        [k, mk](double s) {
                            return std::pow(s, k) * std::pow(1.0 - s, mk);
                        },
                        0.0, s0);
}

double ClassLaw::mean() const {
    const int k = k_, mk = m_ - k_;
    const auto& base = base_;
    return binom_ * integrate(
                        [k, mk, &base](double s) {
                            return quantile_from_survival(base, s) * std::pow(s, k) *
                                   std::pow(1.0 - s, mk);
                        },
                        0.0, 1.0);
}

double ClassLaw::integrated_tail(double x) const {
    const double s0 = qlab::tail(base_, x);
    if (s0 <= 0.0) return 0.0;
    const int k = k_, mk = m_ - k_;
    const auto& base = base_;
    return binom_ * integrate(
                        [k, mk, x, &base](double s) {
                            return (quantile_from_survival(base, s) - x) * std::pow(s, k) *
                                   std::pow(1.0 - s, mk);
                        },
                        0.0, s0);
}

DominanceResult srpt_dominance_trial(const ArrivalProcess& arrivals,
                                     const DistributionSpec& sizes, double capacity,
                                     int n_jobs, double mask_density, RngStream seq_rng,
                                     RngStream mask_rng) {
    if (n_jobs < 1) throw std::invalid_argument("srpt_dominance_trial: need n_jobs >= 1");
    if (mask_density < 0.0 || mask_density > 1.0)
        throw std::invalid_argument("srpt_dominance_trial: mask_density in [0,1]");

    std::vector<ArrivalEvent> full(static_cast<std::size_t>(n_jobs));
    double t = 0.0;
    for (auto& ev : full) {
        ev.time = t;
        ev.size = sample_size(sizes, seq_rng);
        t += next_interarrival(arrivals, seq_rng);
    }
    std::vector<ArrivalEvent> masked = full;
    for (std::size_t i = 1; i < masked.size(); ++i)
        if (mask_rng.next_double() < mask_density) masked[i].size = 0.0;

    const Discipline srpt{DisciplineKind::Srpt};
    VectorArrivalSource src_full(full), src_masked(masked);
    const SimOutput out_full = simulate_collect(src_full, srpt, capacity);
    const SimOutput out_masked = simulate_collect(src_masked, srpt, capacity);

    const double v_full = out_full.jobs.front().departure - out_full.jobs.front().arrival;
    const double v_masked = out_masked.jobs.front().departure - out_masked.jobs.front().arrival;
    return DominanceResult{v_masked, v_full, v_masked <= v_full + 1e-12 * (1.0 + v_full)};
}

}  // namespace qlab::oracle
