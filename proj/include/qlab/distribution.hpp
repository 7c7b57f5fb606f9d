#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qlab/rng.hpp"

namespace qlab {

// Job-size / interarrival laws. All tails use the strict convention
// P[B > x]; this matters for the lattice laws (Geometric, DiscreteFinite)
// and for the splitter's half-open intervals.

struct Pareto {
    double alpha;         // tail index > 0
    double x_min = 1.0;   // scale > 0; survival (x_min/x)^alpha on [x_min, inf)
};

struct BoundedPareto {
    double alpha;
    double x_min;
    double x_max;
};

struct Exponential {
    double rate;  // E[X] = 1/rate
};

// P[X = j] = p^j (1 - p), j = 0, 1, 2, ...
struct Geometric {
    double p;  // in (0,1)
};

// Finite support b_1 > b_2 > ... > b_v > 0 with probabilities p_1..p_v.
struct DiscreteFinite {
    std::vector<double> values;  // strictly decreasing
    std::vector<double> probs;   // nonnegative, sums to 1 within 1e-12
    std::vector<double> cum;     // cumulative q_k = sum_{i<=k} p_i (derived)
};

struct Deterministic {
    double value;  // > 0
};

using DistributionSpec =
    std::variant<Pareto, BoundedPareto, Exponential, Geometric, DiscreteFinite, Deterministic>;

// Validates parameters and fills the cumulative table for DiscreteFinite.
// Throws std::invalid_argument on any violated invariant.
DistributionSpec make_pareto(double alpha, double x_min = 1.0);
DistributionSpec make_bounded_pareto(double alpha, double x_min, double x_max);
DistributionSpec make_exponential(double rate);
DistributionSpec make_geometric(double p);
DistributionSpec make_discrete(std::vector<double> values, std::vector<double> probs);
DistributionSpec make_deterministic(double value);

// Strict survival P[B > x]; equals 1 below the support minimum.
double tail(const DistributionSpec& dist, double x);

// Generalized inverse of the survival function on s in (0,1]:
// the value x with P[B > x] "just below" s. Feeding a uniform draw through
// this is the sampling path, so one uniform consumes one stream step.
double quantile_from_survival(const DistributionSpec& dist, double s);

double sample_size(const DistributionSpec& dist, RngStream& rng);

// E[B^order]; std::nullopt marks a divergent moment (never returns inf).
std::optional<double> moment(const DistributionSpec& dist, double order);
std::optional<double> mean(const DistributionSpec& dist);

// Integrated tail E[(B - x)^+] = int_x^inf P[B > u] du.
// Throws std::domain_error when the mean (hence the integral) diverges.
double integrated_tail(const DistributionSpec& dist, double x);

double support_min(const DistributionSpec& dist);
bool is_continuous(const DistributionSpec& dist);
std::string describe(const DistributionSpec& dist);

}  // namespace qlab
