#include "qlab/distribution.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qlab {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

// E[X^r] for Geometric(p): sum j^r p^j (1-p). Geometric decay, so a plain
// series cut at relative tolerance is enough.
double geometric_moment(double p, double order) {
    double sum = 0.0;
    double pj = p;  // p^j for j = 1
    for (int j = 1; j < 1000000; ++j) {
        const double term = std::pow(static_cast<double>(j), order) * pj * (1.0 - p);
        sum += term;
        if (term < 1e-16 * (sum + 1e-300) && j > 8) break;
        pj *= p;
    }
    return sum;
}

}  // namespace

DistributionSpec make_pareto(double alpha, double x_min) {
    require(alpha > 0.0, "Pareto: alpha must be > 0");
    require(x_min > 0.0, "Pareto: x_min must be > 0");
    return Pareto{alpha, x_min};
}

DistributionSpec make_bounded_pareto(double alpha, double x_min, double x_max) {
    require(alpha > 0.0, "BoundedPareto: alpha must be > 0");
    require(x_min > 0.0 && x_max > x_min, "BoundedPareto: need 0 < x_min < x_max");
    return BoundedPareto{alpha, x_min, x_max};
}

DistributionSpec make_exponential(double rate) {
    require(rate > 0.0, "Exponential: rate must be > 0");
    return Exponential{rate};
}

DistributionSpec make_geometric(double p) {
    require(p > 0.0 && p < 1.0, "Geometric: p must be in (0,1)");
    return Geometric{p};
}

DistributionSpec make_discrete(std::vector<double> values, std::vector<double> probs) {
    require(!values.empty() && values.size() == probs.size(),
            "DiscreteFinite: values/probs must be nonempty and equal length");
    for (std::size_t i = 0; i < values.size(); ++i) {
        require(values[i] > 0.0, "DiscreteFinite: values must be positive");
        require(probs[i] >= 0.0, "DiscreteFinite: probs must be nonnegative");
        if (i > 0) require(values[i] < values[i - 1], "DiscreteFinite: values must be strictly decreasing");
    }
    const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
    require(std::abs(total - 1.0) <= 1e-12, "DiscreteFinite: probs must sum to 1 within 1e-12");
    DiscreteFinite d{std::move(values), std::move(probs), {}};
    d.cum.resize(d.probs.size());
    double q = 0.0;
    for (std::size_t i = 0; i < d.probs.size(); ++i) {
        q += d.probs[i];
        d.cum[i] = q;
    }
    d.cum.back() = 1.0;
    return d;
}

DistributionSpec make_deterministic(double value) {
    require(value > 0.0, "Deterministic: value must be > 0");
    return Deterministic{value};
}

double tail(const DistributionSpec& dist, double x) {
    return std::visit(
        [x](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Pareto>) {
                if (x <= d.x_min) return 1.0;
                return std::pow(d.x_min / x, d.alpha);
            } else if constexpr (std::is_same_v<T, BoundedPareto>) {
                if (x <= d.x_min) return 1.0;
                if (x >= d.x_max) return 0.0;
                const double r = std::pow(d.x_min / d.x_max, d.alpha);
                return (std::pow(d.x_min / x, d.alpha) - r) / (1.0 - r);
            } else if constexpr (std::is_same_v<T, Exponential>) {
                if (x <= 0.0) return 1.0;
                return std::exp(-d.rate * x);
            } else if constexpr (std::is_same_v<T, Geometric>) {
                if (x < 0.0) return 1.0;
                // P[X > x] = p^(floor(x)+1)
                return std::pow(d.p, std::floor(x) + 1.0);
            } else if constexpr (std::is_same_v<T, DiscreteFinite>) {
                double s = 0.0;
                for (std::size_t i = 0; i < d.values.size(); ++i)
                    if (d.values[i] > x) s += d.probs[i];
                return s;
            } else {
                return x < d.value ? 1.0 : 0.0;
            }
        },
        dist);
}

double quantile_from_survival(const DistributionSpec& dist, double s) {
    if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("quantile_from_survival: s must be in (0,1]");
    return std::visit(
        [s](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Pareto>) {
                return d.x_min * std::pow(s, -1.0 / d.alpha);
            } else if constexpr (std::is_same_v<T, BoundedPareto>) {
                const double r = std::pow(d.x_min / d.x_max, d.alpha);
                return d.x_min * std::pow(s * (1.0 - r) + r, -1.0 / d.alpha);
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return -std::log(s) / d.rate;
            } else if constexpr (std::is_same_v<T, Geometric>) {
                if (s >= 1.0) return 0.0;
                // X = j iff p^(j+1) < s <= p^j, i.e. j in (t-1, t] for
                // t = log s / log p; the unique integer there is floor(t).
                const double j = std::floor(std::log(s) / std::log(d.p));
                return j < 0.0 ? 0.0 : j;
            } else if constexpr (std::is_same_v<T, DiscreteFinite>) {
                // X = b_j where q_{j-1} < s <= q_j.
                for (std::size_t i = 0; i < d.cum.size(); ++i)
                    if (d.cum[i] >= s) return d.values[i];
                return d.values.back();
            } else {
                return d.value;
            }
        },
        dist);
}

double sample_size(const DistributionSpec& dist, RngStream& rng) {
    return quantile_from_survival(dist, rng.next_open01());
}

std::optional<double> moment(const DistributionSpec& dist, double order) {
    if (order < 0.0) throw std::invalid_argument("moment: order must be >= 0");
    if (order == 0.0) return 1.0;
    return std::visit(
        [order](const auto& d) -> std::optional<double> {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Pareto>) {
                if (order >= d.alpha) return std::nullopt;
                return d.alpha * std::pow(d.x_min, order) / (d.alpha - order);
            } else if constexpr (std::is_same_v<T, BoundedPareto>) {
                const double r = std::pow(d.x_min / d.x_max, d.alpha);
                const double a = d.alpha;
                if (order == a) {
                    return a * std::pow(d.x_min, a) / (1.0 - r) * std::log(d.x_max / d.x_min);
                }
                return a / (a - order) * std::pow(d.x_min, a) / (1.0 - r) *
                       (std::pow(d.x_min, order - a) - std::pow(d.x_max, order - a));
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return std::tgamma(order + 1.0) / std::pow(d.rate, order);
            } else if constexpr (std::is_same_v<T, Geometric>) {
                return geometric_moment(d.p, order);
            } else if constexpr (std::is_same_v<T, DiscreteFinite>) {
                double s = 0.0;
                for (std::size_t i = 0; i < d.values.size(); ++i)
                    s += d.probs[i] * std::pow(d.values[i], order);
                return s;
            } else {
                return std::pow(d.value, order);
            }
        },
        dist);
}

std::optional<double> mean(const DistributionSpec& dist) { return moment(dist, 1.0); }

double integrated_tail(const DistributionSpec& dist, double x) {
    const auto mu = mean(dist);
    if (!mu) throw std::domain_error("integrated_tail: distribution has infinite mean");
    const double lo = support_min(dist);
    // Tail is identically 1 below the support minimum.
    const double below = x < lo ? lo - x : 0.0;
    const double x_eff = std::max(x, lo);
    return below + std::visit(
        [x = x_eff](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Pareto>) {
                // alpha > 1 guaranteed by the finite-mean gate above.
                return std::pow(d.x_min, d.alpha) * std::pow(x, 1.0 - d.alpha) / (d.alpha - 1.0);
            } else if constexpr (std::is_same_v<T, BoundedPareto>) {
                if (x >= d.x_max) return 0.0;
                const double a = d.alpha;
                const double r = std::pow(d.x_min / d.x_max, a);
                double power_part;
                if (a == 1.0) {
                    power_part = d.x_min * std::log(d.x_max / x);
                } else {
                    power_part = std::pow(d.x_min, a) *
                                 (std::pow(x, 1.0 - a) - std::pow(d.x_max, 1.0 - a)) / (a - 1.0);
                }
                return (power_part - r * (d.x_max - x)) / (1.0 - r);
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return std::exp(-d.rate * x) / d.rate;
            } else if constexpr (std::is_same_v<T, Geometric>) {
                // E[(X - x)^+] = p^(n+1) (n + 1 - x + p/(1-p)), n = floor(x).
                const double n = std::floor(x);
                return std::pow(d.p, n + 1.0) * (n + 1.0 - x + d.p / (1.0 - d.p));
            } else if constexpr (std::is_same_v<T, DiscreteFinite>) {
                double s = 0.0;
                for (std::size_t i = 0; i < d.values.size(); ++i)
                    if (d.values[i] > x) s += d.probs[i] * (d.values[i] - x);
                return s;
            } else {
                return d.value > x ? d.value - x : 0.0;
            }
        },
        dist);
}

double support_min(const DistributionSpec& dist) {
    return std::visit(
        [](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Pareto>) return d.x_min;
            else if constexpr (std::is_same_v<T, BoundedPareto>) return d.x_min;
            else if constexpr (std::is_same_v<T, Exponential>) return 0.0;
            else if constexpr (std::is_same_v<T, Geometric>) return 0.0;
            else if constexpr (std::is_same_v<T, DiscreteFinite>) return d.values.back();
            else return d.value;
        },
        dist);
}

bool is_continuous(const DistributionSpec& dist) {
    return std::holds_alternative<Pareto>(dist) || std::holds_alternative<BoundedPareto>(dist) ||
           std::holds_alternative<Exponential>(dist);
}

std::string describe(const DistributionSpec& dist) {
    std::ostringstream os;
    std::visit(
        [&os](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Pareto>) os << "pareto(alpha=" << d.alpha << ", x_min=" << d.x_min << ")";
            else if constexpr (std::is_same_v<T, BoundedPareto>)
                os << "bounded_pareto(alpha=" << d.alpha << ", x_min=" << d.x_min << ", x_max=" << d.x_max << ")";
            else if constexpr (std::is_same_v<T, Exponential>) os << "exponential(rate=" << d.rate << ")";
            else if constexpr (std::is_same_v<T, Geometric>) os << "geometric(p=" << d.p << ")";
            else if constexpr (std::is_same_v<T, DiscreteFinite>) os << "discrete(" << d.values.size() << " values)";
            else os << "deterministic(" << d.value << ")";
        },
        dist);
    return os.str();
}

}  // namespace qlab
