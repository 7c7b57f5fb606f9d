#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qlab/distribution.hpp"
#include "qlab/engine.hpp"
#include "qlab/oracle.hpp"

namespace qlab::metrics {

// Log-spaced grid from lo to hi (inclusive ends) with per_decade points per
// factor of 10.
std::vector<double> log_grid(double lo, double hi, int per_decade);

// Completion-ordered samples with class labels. Warm-up and truncation
// filtering happen when the set is built; `population` is the estimator
// denominator (all retained jobs, every class).
struct SampleSet {
    std::vector<double> value;
    std::vector<std::int16_t> cls;
    std::uint64_t population() const { return value.size(); }
};

// Sojourn samples in completion order, minus the first warmup_fraction of
// completed jobs and all truncated jobs.
SampleSet sojourn_samples(const SimOutput& out, double warmup_fraction);

// Pre-arrival workload samples for one class column (arrival order), minus
// the first warmup_fraction.
SampleSet workload_sample_set(std::span<const double> workload, double warmup_fraction);

struct TailCurve {
    std::vector<double> x;
    std::vector<double> survival;       // joint probability estimates
    std::vector<std::uint64_t> count;   // exceedance counts
    std::vector<double> ci_half_width;  // 95% normal approx, batch means
    std::uint64_t n = 0;                // population behind the estimates
};

// Joint tail P-hat[V > x, class = k] with denominator = all retained jobs.
// k = -1 estimates the unconditional tail; k must not exceed m otherwise.
// CIs use batch means over `batches` contiguous chunks of the sample order.
TailCurve empirical_conditional_tail(const SampleSet& s, int m, int k,
                                     std::span<const double> grid, int batches = 20);

enum class SojournDiscipline { Ps, Fbps, Srpt };

// Right-hand side of the conditional sojourn-tail limits:
//   PS/FBPS: (1/(k+1)) C(m,k) P[B > (1-rho)x/(k+1)]^(k+1)
//   SRPT:    (1/(k+1)) C(m,k) P[B > (1-rho)x]^(k+1)
double theory_conditional_tail(const DistributionSpec& dist, double rho, int m, int k, double x,
                               SojournDiscipline disc);
TailCurve theory_conditional_curve(const DistributionSpec& dist, double rho, int m, int k,
                                   std::span<const double> grid, SojournDiscipline disc);

enum class WorkloadMode { Isolation, StaticPriority };

// Workload-tail right-hand sides: the integrated class-k tail over
//   isolation:        c_k E[T] - E[B^(k)]
//   static priority:  c E[T] - mu^(k),  mu^(k) = sum_{i>=k} E[B^(i)]
// class_means must hold the quadrature means for classes 0..m.
double theory_workload_tail(const oracle::ClassLaw& law, double capacity,
                            double mean_interarrival, WorkloadMode mode,
                            std::span<const double> class_means, double x);
TailCurve theory_workload_curve(const oracle::ClassLaw& law, double capacity,
                                double mean_interarrival, WorkloadMode mode,
                                std::span<const double> class_means,
                                std::span<const double> grid);

struct SlopeFit {
    double slope = 0.0;
    double stderr_ = 0.0;
    int points = 0;
};

// Least-squares slope of log survival vs log x over grid points inside
// [x_lo, x_hi] with count >= count_floor (theoretical curves pass floor 0).
// Throws std::runtime_error with fewer than 5 usable points.
SlopeFit loglog_slope(const TailCurve& curve, double x_lo, double x_hi,
                      std::uint64_t count_floor = 30);

// Largest grid x with count >= floor and survival > 0; 0 if none.
double max_usable_x(const TailCurve& curve, std::uint64_t count_floor = 30);

struct Tolerances {
    double ratio_lo = 0.5;
    double ratio_hi = 2.0;     // closed interval: boundary ratios pass
    double slope_slack = 0.2;  // relative slack on the slope match
    std::uint64_t count_floor = 30;
};

enum class Outcome { Pass, Fail, Inconclusive };

struct TheoremReport {
    std::string theorem;
    TailCurve empirical;
    TailCurve theoretical;
    std::vector<double> ratio;  // NaN where the count floor is not met
    SlopeFit slope_empirical;
    double slope_theoretical = 0.0;
    Outcome outcome = Outcome::Inconclusive;
    std::string detail;
};

// Pointwise ratios where counts suffice plus a slope comparison over the
// usable range. No usable overlap yields Inconclusive, distinct from Fail.
TheoremReport compare(std::string theorem, const TailCurve& empirical,
                      const TailCurve& theoretical, const Tolerances& tol);

const char* outcome_name(Outcome o);

}  // namespace qlab::metrics
