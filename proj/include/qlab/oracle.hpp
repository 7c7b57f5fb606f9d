#pragma once

#include <cstdint>

#include "qlab/arrival.hpp"
#include "qlab/distribution.hpp"
#include "qlab/rng.hpp"

namespace qlab::oracle {

double binomial(int m, int k);

// (1/(k+1)) * C(m,k) * p^(k+1). For continuous laws this is the exact
// probability that X0 exceeds the level and sits below min(X1..Xk) of a
// labeled k-subset, summed over subsets.
double order_stat_prob_exact(int m, int k, double p);

enum class OrderEvent {
    // {X0 > x and exactly k of X1..Xm are strictly greater than X0}:
    // the splitter event A_k^(m) joined with the tail.
    ExactCount,
    // C(m,k) * P[X0 > x, X0 <= min(X1..Xk)]: the one-sided identity that is
    // exact for continuous laws at every x.
    BelowLabeledMin,
};

struct McEstimate {
    double estimate;
    double stderr_;
    std::uint64_t n;
};

// Direct simulation with m+1 i.i.d. variates per trial; comparisons are
// strict/weak exactly as in the event definitions above.
McEstimate order_stat_prob_mc(const DistributionSpec& dist, int m, int k, double x,
                              std::uint64_t n_samples, RngStream& rng,
                              OrderEvent event = OrderEvent::ExactCount);

// P[X1 > X0 > x] for Geometric(p) at integer x: (p/(1+p)) * p^(2(x+1)).
// The continuous-law formula would give (1/2) * p^(2(x+1)), strictly larger.
double geometric_joint_tail_exact(double p, std::int64_t x);

// Exact law of the class-k quantity B^(k) = B * 1{A_k^(m)} for a continuous
// base law, evaluated by quadrature in probability space (s = survival), so
// heavy tails become Beta-like integrands on [0,1]. Independent of the
// splitter implementation.
class ClassLaw {
public:
    ClassLaw(DistributionSpec base, int m, int k);

    // P[B > x, A_k]; equals 1/(m+1) below the support minimum.
    double tail(double x) const;
    double mean() const;
    // int_x^inf P[B^(k) > u] du, as a single probability-space integral.
    double integrated_tail(double x) const;

    int m() const { return m_; }
    int k() const { return k_; }
    const DistributionSpec& base() const { return base_; }

private:
    DistributionSpec base_;
    int m_, k_;
    double binom_;
};

struct DominanceResult {
    double v0_masked;    // sojourn of the labeled job, thinned arrivals
    double v0_full;      // sojourn of the labeled job, full arrivals
    bool ok;             // v0_masked <= v0_full (within 1e-12 slack)
};

// Lemma-style coupling: one base sequence (T_i, B_i), i >= 0, with the
// labeled job at T_0 = 0 and both systems starting empty. The masked system
// zeroes each post-arrival size independently with probability mask_density
// and keeps B_0; both run under SRPT with the given capacity.
DominanceResult srpt_dominance_trial(const ArrivalProcess& arrivals,
                                     const DistributionSpec& sizes, double capacity,
                                     int n_jobs, double mask_density, RngStream seq_rng,
                                     RngStream mask_rng);

}  // namespace qlab::oracle
