#include "qlab/engine.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>

namespace qlab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Absolute tie window; internal events (departures) run before arrivals at
// equal timestamps.
constexpr double kTieEps = 1e-12;

struct Job {
    std::uint64_t id;
    double arrival;
    double size;
    double remaining;
    int cls;
};

struct Frame {
    double t = 0.0;
    double total_w = 0.0;
    std::vector<double> class_w;
    EngineStats stats;
    SimObserver* obs = nullptr;
    bool drain = false;
    double last_arrival = 0.0;
    std::uint64_t in_system = 0;

    void depart(const Job& j) {
        ++stats.departures;
        --in_system;
        obs->on_departure(JobRecord{j.id, j.arrival, j.size, t, j.cls,
                                    drain && t > last_arrival});
        if (in_system == 0) {
            // Exact reset between busy periods kills rounding drift.
            total_w = 0.0;
            std::fill(class_w.begin(), class_w.end(), 0.0);
        }
    }
};

struct FifoState {
    std::deque<Job> q;

    void admit(Frame&, Job j) { q.push_back(j); }

    double next_internal_time(const Frame& f, double c) const {
        return q.empty() ? kInf : f.t + q.front().remaining / c;
    }

    void advance(Frame& f, double dt, double c) {
        if (q.empty()) return;
        const double w = c * dt;
        q.front().remaining -= w;
        f.class_w[q.front().cls] -= w;
    }

    void process_due(Frame& f, double) {
        Job j = q.front();
        q.pop_front();
        f.class_w[j.cls] -= j.remaining;  // residual rounding only
        j.remaining = 0.0;
        f.depart(j);
    }
};

// Equal sharing with a lazy global offset: every present job has received
// d - d(arrival) work, so completion order is the static key size + d(arrival).
struct PsState {
    struct Entry {
        double key;
        Job job;
    };
    struct Cmp {
        bool operator()(const Entry& a, const Entry& b) const {
            if (a.key != b.key) return a.key > b.key;
            return a.job.id > b.job.id;
        }
    };

    std::priority_queue<Entry, std::vector<Entry>, Cmp> heap;
    std::vector<std::uint64_t> nk;  // present jobs per class
    double d = 0.0;

    explicit PsState(int num_classes) : nk(num_classes, 0) {}

    void admit(Frame&, Job j) {
        ++nk[j.cls];
        heap.push(Entry{d + j.size, j});
    }

    double next_internal_time(const Frame& f, double c) const {
        if (heap.empty()) return kInf;
        return f.t + (heap.top().key - d) * static_cast<double>(heap.size()) / c;
    }

    void advance(Frame& f, double dt, double c) {
        if (heap.empty()) return;
        const double per = c * dt / static_cast<double>(heap.size());
        d += per;
        for (std::size_t k = 0; k < nk.size(); ++k)
            f.class_w[k] -= per * static_cast<double>(nk[k]);
    }

    void process_due(Frame& f, double) {
        d = heap.top().key;  // snap, so analytic ties depart together
        while (!heap.empty() && heap.top().key <= d) {
            Job j = heap.top().job;
            heap.pop();
            --nk[j.cls];
            j.remaining = 0.0;
            f.depart(j);
        }
        if (heap.empty()) d = 0.0;
    }
};

struct SrptState {
    struct Cmp {
        bool operator()(const Job& a, const Job& b) const {
            if (a.remaining != b.remaining) return a.remaining > b.remaining;
            if (a.arrival != b.arrival) return a.arrival > b.arrival;
            return a.id > b.id;
        }
    };

    std::optional<Job> cur;
    std::priority_queue<Job, std::vector<Job>, Cmp> heap;

    void admit(Frame&, Job j) {
        if (!cur) {
            cur = j;
        } else if (j.remaining < cur->remaining) {
            // Strict inequality: earlier arrivals win remaining-time ties.
            heap.push(*cur);
            cur = j;
        } else {
            heap.push(j);
        }
    }

    double next_internal_time(const Frame& f, double c) const {
        return cur ? f.t + cur->remaining / c : kInf;
    }

    void advance(Frame& f, double dt, double c) {
        if (!cur) return;
        const double w = c * dt;
        cur->remaining -= w;
        f.class_w[cur->cls] -= w;
    }

    void process_due(Frame& f, double) {
        Job j = *cur;
        f.class_w[j.cls] -= j.remaining;
        j.remaining = 0.0;
        f.depart(j);
        if (!heap.empty()) {
            cur = heap.top();
            heap.pop();
        } else {
            cur.reset();
        }
    }
};

// Least attained service. Jobs tied at the minimal attained level form the
// cohort and share the server equally. Levels only merge: a level's attained
// value is shared storage, so analytic ties stay exact numerically.
struct FbpsState {
    struct Member {
        double size;
        std::uint64_t id;
        double arrival;
        int cls;
    };
    struct Cmp {
        bool operator()(const Member& a, const Member& b) const {
            if (a.size != b.size) return a.size > b.size;
            return a.id > b.id;
        }
    };
    using Heap = std::priority_queue<Member, std::vector<Member>, Cmp>;

    struct Level {
        double attained;
        Heap members;
        std::vector<std::uint64_t> nk;
    };

    std::deque<Level> levels;  // ascending attained; front is the cohort
    int num_classes;

    explicit FbpsState(int nc) : num_classes(nc) {}

    void admit(Frame&, Job j) {
        Member m{j.size, j.id, j.arrival, j.cls};
        if (!levels.empty() && levels.front().attained == 0.0) {
            levels.front().members.push(m);
            ++levels.front().nk[j.cls];
        } else {
            Level lv{0.0, Heap{}, std::vector<std::uint64_t>(num_classes, 0)};
            lv.members.push(m);
            ++lv.nk[j.cls];
            levels.push_front(std::move(lv));
        }
    }

    double next_internal_time(const Frame& f, double c) const {
        if (levels.empty()) return kInf;
        const Level& front = levels.front();
        double da = front.members.top().size - front.attained;
        if (levels.size() > 1) da = std::min(da, levels[1].attained - front.attained);
        return f.t + da * static_cast<double>(front.members.size()) / c;
    }

    void advance(Frame& f, double dt, double c) {
        if (levels.empty()) return;
        Level& front = levels.front();
        const double per = c * dt / static_cast<double>(front.members.size());
        front.attained += per;
        for (int k = 0; k < num_classes; ++k)
            f.class_w[k] -= per * static_cast<double>(front.nk[k]);
    }

    void process_due(Frame& f, double) {
        Level& front = levels.front();
        const double target_complete = front.members.top().size;
        const double target_catch = levels.size() > 1 ? levels[1].attained : kInf;
        const double target = std::min(target_complete, target_catch);
        front.attained = target;  // snap

        if (target == target_complete) {
            while (!front.members.empty() && front.members.top().size <= front.attained) {
                Member m = front.members.top();
                front.members.pop();
                --front.nk[m.cls];
                f.class_w[m.cls] -= m.size - front.attained;  // residual rounding only
                f.depart(Job{m.id, m.arrival, m.size, 0.0, m.cls});
            }
            if (front.members.empty()) {
                levels.pop_front();
                return;
            }
        }
        if (levels.size() > 1 && levels.front().attained >= levels[1].attained) merge_front();
    }

private:
    void merge_front() {
        Level& a = levels.front();
        Level& b = levels[1];
        if (a.members.size() > b.members.size()) {
            std::swap(a.members, b.members);
            std::swap(a.nk, b.nk);
        }
        while (!a.members.empty()) {
            b.members.push(a.members.top());
            a.members.pop();
        }
        for (int k = 0; k < num_classes; ++k) b.nk[k] += a.nk[k];
        levels.pop_front();
    }
};

// Preemptive-resume static priority: full rate to the head of the nonempty
// class with the largest index.
struct SpState {
    std::vector<std::deque<Job>> classes;
    int serving = -1;
    bool lifo;

    SpState(int num_classes, bool intra_lifo) : classes(num_classes), lifo(intra_lifo) {}

    void admit(Frame&, Job j) {
        auto& dq = classes[j.cls];
        if (lifo) dq.push_front(j);
        else dq.push_back(j);
        if (j.cls > serving) serving = j.cls;
    }

    double next_internal_time(const Frame& f, double c) const {
        return serving < 0 ? kInf : f.t + classes[serving].front().remaining / c;
    }

    void advance(Frame& f, double dt, double c) {
        if (serving < 0) return;
        const double w = c * dt;
        classes[serving].front().remaining -= w;
        f.class_w[serving] -= w;
    }

    void process_due(Frame& f, double) {
        Job j = classes[serving].front();
        classes[serving].pop_front();
        f.class_w[j.cls] -= j.remaining;
        j.remaining = 0.0;
        f.depart(j);
        while (serving >= 0 && classes[serving].empty()) --serving;
    }
};

template <class State>
EngineStats run_loop(State& st, ArrivalSource& src, double c, const SplitterParams& sp,
                     std::span<const double> prefill, SimObserver& obs) {
    const int num_classes = sp.m + 1;
    Frame f;
    f.class_w.assign(num_classes, 0.0);
    f.obs = &obs;

    ComparisonWindow window(sp.m > 0 ? static_cast<std::size_t>(sp.m) * sp.l : 0);
    if (sp.m > 0) {
        if (sp.init == WindowInit::Prefill) {
            if (prefill.size() != window.capacity())
                throw std::invalid_argument("simulate: prefill must hold m*l sizes");
            for (double v : prefill) window.push(v);
        } else {
            for (std::size_t i = 0; i < window.capacity(); ++i) window.push(0.0);
        }
    }

    ArrivalEvent ev{};
    bool have = src.next(ev);
    f.drain = !have;

    while (true) {
        const double t_int = st.next_internal_time(f, c);
        const bool internal_due = std::isfinite(t_int) && (!have || t_int <= ev.time + kTieEps);
        const double target = internal_due ? t_int : (have ? ev.time : kInf);
        if (!std::isfinite(target)) break;

        double dt = target - f.t;
        if (dt < 0.0) dt = 0.0;  // within the tie window
        if (f.in_system > 0 && dt > 0.0) {
            f.stats.busy_time += dt;
            st.advance(f, dt, c);
            f.total_w -= c * dt;
            f.stats.served_work += c * dt;
        }
        f.t = std::max(f.t, target);
        ++f.stats.events;

        if (internal_due) {
            st.process_due(f, c);
            continue;
        }

        if (std::isnan(ev.size) || ev.size < 0.0)
            throw std::invalid_argument("simulate: job size must be a nonnegative number");
        if (ev.time < f.last_arrival || ev.time < 0.0)
            throw std::invalid_argument("simulate: arrival times must be nondecreasing and >= 0");

        int cls = 0;
        if (sp.m > 0)
            cls = sp.l == 1 ? classify(window, ev.size)
                            : classify_refined(window, sp.m, sp.l, ev.size);
        obs.on_pre_arrival(f.stats.arrivals, ev.time, ev.size, cls, f.total_w, f.class_w);

        Job j{f.stats.arrivals, ev.time, ev.size, ev.size, cls};
        ++f.stats.arrivals;
        f.last_arrival = ev.time;
        ++f.in_system;
        f.total_w += ev.size;
        f.class_w[cls] += ev.size;
        if (ev.size == 0.0) {
            f.depart(j);  // padding jobs are arrival markers only
        } else {
            st.admit(f, j);
        }
        if (sp.m > 0) window.push(ev.size);
        have = src.next(ev);
        if (!have) f.drain = true;
    }

    f.stats.end_time = f.t;
    f.stats.last_arrival_time = f.last_arrival;
    return f.stats;
}

class CollectorObserver : public SimObserver {
public:
    explicit CollectorObserver(SimOutput& out, int num_classes) : out_(out) {
        out_.workload_class.assign(num_classes, {});
    }

    void on_pre_arrival(std::uint64_t, double, double, int, double total_w,
                        std::span<const double> class_w) override {
        out_.workload_total.push_back(total_w);
        for (std::size_t k = 0; k < class_w.size(); ++k)
            out_.workload_class[k].push_back(class_w[k]);
    }

    void on_departure(const JobRecord& rec) override { out_.jobs.push_back(rec); }

private:
    SimOutput& out_;
};

}  // namespace

EngineStats simulate(ArrivalSource& source, const Discipline& discipline, double capacity,
                     const SplitterParams& splitter, std::span<const double> prefill,
                     SimObserver& observer) {
    if (!(capacity > 0.0)) throw std::invalid_argument("simulate: capacity must be > 0");
    if (splitter.m < 0 || splitter.l < 1)
        throw std::invalid_argument("simulate: splitter needs m >= 0, l >= 1");

    switch (discipline.kind) {
        case DisciplineKind::Fifo: {
            FifoState st;
            return run_loop(st, source, capacity, splitter, prefill, observer);
        }
        case DisciplineKind::Ps: {
            PsState st(splitter.m + 1);
            return run_loop(st, source, capacity, splitter, prefill, observer);
        }
        case DisciplineKind::Fbps: {
            FbpsState st(splitter.m + 1);
            return run_loop(st, source, capacity, splitter, prefill, observer);
        }
        case DisciplineKind::Srpt: {
            SrptState st;
            return run_loop(st, source, capacity, splitter, prefill, observer);
        }
        case DisciplineKind::StaticPriority: {
            SpState st(splitter.m + 1, discipline.sp_intra_lifo);
            return run_loop(st, source, capacity, splitter, prefill, observer);
        }
    }
    throw std::logic_error("simulate: unknown discipline");
}

SimOutput simulate_collect(ArrivalSource& source, const Discipline& discipline, double capacity,
                           const SplitterParams& splitter, std::span<const double> prefill) {
    SimOutput out;
    CollectorObserver obs(out, splitter.m + 1);
    out.stats = simulate(source, discipline, capacity, splitter, prefill, obs);
    std::sort(out.jobs.begin(), out.jobs.end(),
              [](const JobRecord& a, const JobRecord& b) { return a.id < b.id; });
    return out;
}

SimOutput run_class_in_isolation(std::span<const ArrivalEvent> class_stream, double c_k) {
    VectorArrivalSource src(class_stream);
    return simulate_collect(src, Discipline{DisciplineKind::Fifo}, c_k);
}

}  // namespace qlab
