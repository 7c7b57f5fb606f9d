#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qlab/arrival.hpp"
#include "qlab/distribution.hpp"
#include "qlab/splitter.hpp"

namespace qlab {

struct ArrivalEvent {
    double time;
    double size;
};

// Pull-based arrival feed so multi-million-job runs never materialize the
// whole sequence.
class ArrivalSource {
public:
    virtual ~ArrivalSource() = default;
    virtual bool next(ArrivalEvent& out) = 0;
};

// Law-driven source: per job, one interarrival draw then one size draw from
// the same stream (in that order).
class RandomArrivalSource : public ArrivalSource {
public:
    RandomArrivalSource(const ArrivalProcess& arrivals, const DistributionSpec& service,
                        std::uint64_t n_jobs, RngStream rng)
        : arrivals_(arrivals), service_(service), remaining_(n_jobs), rng_(rng) {}

    bool next(ArrivalEvent& out) override {
        if (remaining_ == 0) return false;
        --remaining_;
        t_ += next_interarrival(arrivals_, rng_);
        out.time = t_;
        out.size = sample_size(service_, rng_);
        return true;
    }

private:
    const ArrivalProcess& arrivals_;
    const DistributionSpec& service_;
    std::uint64_t remaining_;
    RngStream rng_;
    double t_ = 0.0;
};

class VectorArrivalSource : public ArrivalSource {
public:
    explicit VectorArrivalSource(std::span<const ArrivalEvent> events) : events_(events) {}

    bool next(ArrivalEvent& out) override {
        if (pos_ >= events_.size()) return false;
        out = events_[pos_++];
        return true;
    }

private:
    std::span<const ArrivalEvent> events_;
    std::size_t pos_ = 0;
};

enum class DisciplineKind {
    Fifo,
    Ps,              // processor sharing: c/n to each of n present jobs
    Fbps,            // least attained service: minimal-attained cohort shares c
    Srpt,            // least remaining, preemptive; earlier arrival wins ties
    StaticPriority,  // preemptive-resume across classes, higher index first
};

struct Discipline {
    DisciplineKind kind = DisciplineKind::Fifo;
    // StaticPriority only: serve each class LIFO instead of FIFO. Class
    // workload paths are order-invariant; this knob exists so tests can
    // check that.
    bool sp_intra_lifo = false;
};

struct JobRecord {
    std::uint64_t id;  // arrival index, 0-based
    double arrival;
    double size;
    double departure;
    int cls;         // splitter class, 0 when m = 0
    bool truncated;  // departed after the final arrival epoch
};

// Departures arrive in departure-time order; pre-arrival samples in arrival
// order. Pre-arrival workloads are taken immediately before the job joins.
class SimObserver {
public:
    virtual ~SimObserver() = default;
    virtual void on_pre_arrival(std::uint64_t /*arrival_index*/, double /*time*/,
                                double /*size*/, int /*cls*/, double /*total_workload*/,
                                std::span<const double> /*class_workload*/) {}
    virtual void on_departure(const JobRecord&) {}
};

struct EngineStats {
    std::uint64_t arrivals = 0;
    std::uint64_t departures = 0;
    std::uint64_t events = 0;
    double busy_time = 0.0;
    double served_work = 0.0;
    double end_time = 0.0;
    double last_arrival_time = 0.0;
};

// Runs the queue to drain: arrivals stop when the source is exhausted and
// service continues until the system empties. Jobs still present after the
// final arrival epoch are flagged truncated. Zero-size jobs depart at their
// arrival instant and never enter the queues.
//
// When splitter.m > 0 every arrival is classified against the sizes of the
// preceding arrivals (before its own size is pushed); StaticPriority then
// schedules on those m+1 classes. `prefill` must hold m*l sizes when
// splitter.init == Prefill.
EngineStats simulate(ArrivalSource& source, const Discipline& discipline, double capacity,
                     const SplitterParams& splitter, std::span<const double> prefill,
                     SimObserver& observer);

// In-memory capture of a full run.
struct SimOutput {
    std::vector<JobRecord> jobs;  // sorted by id (= arrival order)
    std::vector<double> workload_total;              // one entry per arrival
    std::vector<std::vector<double>> workload_class; // [class][arrival]
    EngineStats stats;
};

SimOutput simulate_collect(ArrivalSource& source, const Discipline& discipline, double capacity,
                           const SplitterParams& splitter = {},
                           std::span<const double> prefill = {});

// FIFO service of one class stream (zero-size padding jobs retained as
// arrival points) with capacity c_k; used for isolation workload studies.
SimOutput run_class_in_isolation(std::span<const ArrivalEvent> class_stream, double c_k);

}  // namespace qlab
