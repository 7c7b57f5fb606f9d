#pragma once

#include <cmath>
#include <stdexcept>
#include <variant>

#include "qlab/distribution.hpp"

namespace qlab {

struct PoissonArrivals {
    double lambda;  // rate > 0
};

// Stationary renewal arrivals; the interarrival law must have finite mean.
struct RenewalArrivals {
    DistributionSpec interarrival;
};

using ArrivalProcess = std::variant<PoissonArrivals, RenewalArrivals>;

inline ArrivalProcess make_poisson(double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("Poisson: lambda must be > 0");
    return PoissonArrivals{lambda};
}

inline ArrivalProcess make_renewal(DistributionSpec interarrival) {
    const auto m = mean(interarrival);
    if (!m || !(*m > 0.0)) throw std::invalid_argument("Renewal: interarrival mean must be finite and positive");
    return RenewalArrivals{std::move(interarrival)};
}

inline double mean_interarrival(const ArrivalProcess& proc) {
    if (const auto* p = std::get_if<PoissonArrivals>(&proc)) return 1.0 / p->lambda;
    const auto& r = std::get<RenewalArrivals>(proc);
    return *mean(r.interarrival);
}

inline double next_interarrival(const ArrivalProcess& proc, RngStream& rng) {
    if (const auto* p = std::get_if<PoissonArrivals>(&proc)) {
        return -std::log(rng.next_open01()) / p->lambda;
    }
    return sample_size(std::get<RenewalArrivals>(proc).interarrival, rng);
}

// rho = E[B] / (c * E[T]). Throws when the service mean diverges.
inline double traffic_intensity(const ArrivalProcess& proc, const DistributionSpec& service,
                                double capacity) {
    if (!(capacity > 0.0)) throw std::invalid_argument("traffic_intensity: capacity must be > 0");
    const auto mb = mean(service);
    if (!mb) throw std::domain_error("traffic_intensity: service mean is infinite");
    return *mb / (capacity * mean_interarrival(proc));
}

}  // namespace qlab
