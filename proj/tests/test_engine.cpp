#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "qlab/engine.hpp"
#include "qlab/metrics.hpp"

using namespace qlab;

namespace {

SimOutput run_events(std::vector<ArrivalEvent> evs, DisciplineKind kind, double c = 1.0,
                     SplitterParams sp = {}) {
    VectorArrivalSource src(evs);
    return simulate_collect(src, Discipline{kind}, c, sp);
}

double sojourn(const SimOutput& out, std::uint64_t id) {
    return out.jobs[id].departure - out.jobs[id].arrival;
}

SimOutput run_random(DisciplineKind kind, double lambda, const DistributionSpec& service,
                     std::uint64_t n, std::uint64_t seed, SplitterParams sp = {},
                     double c = 1.0, bool lifo = false) {
    const auto arr = make_poisson(lambda);
    RandomArrivalSource src(arr, service, n, RngStream(seed, 0));
    Discipline d{kind};
    d.sp_intra_lifo = lifo;
    return simulate_collect(src, d, c, sp);
}

}  // namespace

TEST_SUITE("engine") {

TEST_CASE("single job in an empty system: sojourn = size/c") {
    for (auto kind : {DisciplineKind::Fifo, DisciplineKind::Ps, DisciplineKind::Fbps,
                      DisciplineKind::Srpt, DisciplineKind::StaticPriority}) {
        auto out = run_events({{1.0, 3.0}}, kind, 2.0);
        REQUIRE(out.jobs.size() == 1);
        CHECK(sojourn(out, 0) == doctest::Approx(1.5));
    }
}

TEST_CASE("ps: two equal jobs share the server") {
    auto out = run_events({{0.0, 2.0}, {0.0, 2.0}}, DisciplineKind::Ps);
    CHECK(out.jobs[0].departure == doctest::Approx(4.0));
    CHECK(out.jobs[1].departure == doctest::Approx(4.0));
}

TEST_CASE("srpt: the small job preempts") {
    auto out = run_events({{0.0, 3.0}, {1.0, 1.0}}, DisciplineKind::Srpt);
    CHECK(out.jobs[1].departure == doctest::Approx(2.0));
    CHECK(out.jobs[0].departure == doctest::Approx(4.0));
    CHECK(sojourn(out, 0) == doctest::Approx(4.0));
    CHECK(sojourn(out, 1) == doctest::Approx(1.0));
}

TEST_CASE("srpt: equal remaining is not preempted (earlier arrival first)") {
    auto out = run_events({{0.0, 2.0}, {1.0, 1.0}}, DisciplineKind::Srpt);
    // at t=1 both have remaining 1; the incumbent finishes first
    CHECK(out.jobs[0].departure == doctest::Approx(2.0));
    CHECK(out.jobs[1].departure == doctest::Approx(3.0));
}

TEST_CASE("fbps: least attained service wins") {
    auto out = run_events({{0.0, 3.0}, {1.0, 1.0}}, DisciplineKind::Fbps);
    CHECK(out.jobs[1].departure == doctest::Approx(2.0));
    CHECK(out.jobs[0].departure == doctest::Approx(4.0));
}

TEST_CASE("fbps: tied cohort shares equally") {
    // Two size-2 jobs arriving together behave like PS.
    auto out = run_events({{0.0, 2.0}, {0.0, 2.0}}, DisciplineKind::Fbps);
    CHECK(out.jobs[0].departure == doctest::Approx(4.0));
    CHECK(out.jobs[1].departure == doctest::Approx(4.0));
}

TEST_CASE("static priority preempts lower classes") {
    // Splitter m=1, zeros init: job0 (size 3) sees window (0) -> class 0;
    // job1 (size 1) sees window (3) -> class 1 (higher priority).
    SplitterParams sp{1, 1, WindowInit::Zeros};
    const std::vector<ArrivalEvent> evs{{0.0, 3.0}, {1.0, 1.0}};
    VectorArrivalSource src(evs);
    auto out = simulate_collect(src, Discipline{DisciplineKind::StaticPriority}, 1.0, sp);
    CHECK(out.jobs[0].cls == 0);
    CHECK(out.jobs[1].cls == 1);
    CHECK(out.jobs[1].departure == doctest::Approx(2.0));
    CHECK(out.jobs[0].departure == doctest::Approx(4.0));
}

TEST_CASE("pre-arrival workload samples") {
    auto out = run_events({{0.0, 3.0}, {1.0, 1.0}}, DisciplineKind::Srpt);
    REQUIRE(out.workload_total.size() == 2);
    CHECK(out.workload_total[0] == doctest::Approx(0.0));
    CHECK(out.workload_total[1] == doctest::Approx(2.0));  // 3 - 1 served
}

TEST_CASE("per-class workloads add to the total") {
    SplitterParams sp{3, 1, WindowInit::Zeros};
    auto out = run_random(DisciplineKind::StaticPriority, 0.7, make_pareto(2.0, 1.0), 5000, 11,
                          sp);
    for (std::size_t i = 0; i < out.workload_total.size(); ++i) {
        double sum = 0.0;
        for (const auto& col : out.workload_class) sum += col[i];
        CHECK(sum == doctest::Approx(out.workload_total[i]).epsilon(1e-9));
    }
}

TEST_CASE("zero-size jobs depart instantly and leave no trace in queues") {
    auto out = run_events({{0.0, 0.0}, {1.0, 2.0}, {1.5, 0.0}}, DisciplineKind::Fifo);
    CHECK(out.jobs[0].departure == 0.0);
    CHECK(out.jobs[2].departure == 1.5);
    CHECK(out.jobs[1].departure == doctest::Approx(3.0));
    CHECK(out.workload_total[2] == doctest::Approx(1.5));  // job1 half served
}

TEST_CASE("class stream isolation: deterministic feed drains every cycle") {
    std::vector<ArrivalEvent> evs;
    for (int i = 0; i < 50; ++i) evs.push_back({2.0 * i, 1.0});
    auto out = run_class_in_isolation(evs, 1.0);
    for (double w : out.workload_total) CHECK(w == 0.0);

    // all-zero stream: workload identically zero
    for (auto& e : evs) e.size = 0.0;
    auto zero = run_class_in_isolation(evs, 1.0);
    for (double w : zero.workload_total) CHECK(w == 0.0);
    CHECK(zero.stats.busy_time == 0.0);
}

TEST_CASE("work conservation and fifo sojourn identity") {
    for (auto kind : {DisciplineKind::Fifo, DisciplineKind::Ps, DisciplineKind::Fbps,
                      DisciplineKind::Srpt}) {
        auto out = run_random(kind, 0.6, make_pareto(2.0, 1.0), 20000, 5);
        double total_size = 0.0;
        for (const auto& j : out.jobs) total_size += j.size;
        CHECK(out.stats.served_work == doctest::Approx(total_size).epsilon(1e-9));
        CHECK(out.stats.busy_time == doctest::Approx(total_size).epsilon(1e-9));  // c = 1

        for (const auto& j : out.jobs)
            CHECK(j.departure - j.arrival >= j.size - 1e-9);

        if (kind == DisciplineKind::Fifo) {
            for (std::size_t i = 0; i < out.jobs.size(); ++i) {
                const auto& j = out.jobs[i];
                CHECK(j.departure - j.arrival ==
                      doctest::Approx(out.workload_total[i] + j.size).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("workload invariance across disciplines") {
    const auto arr = make_poisson(0.7);
    const auto svc = make_pareto(2.0, 1.0);
    std::vector<ArrivalEvent> evs;
    {
        RandomArrivalSource src(arr, svc, 20000, RngStream(17, 0));
        ArrivalEvent e{};
        while (src.next(e)) evs.push_back(e);
    }
    std::vector<std::vector<double>> paths;
    double max_w = 0.0;
    for (auto kind : {DisciplineKind::Fifo, DisciplineKind::Ps, DisciplineKind::Fbps,
                      DisciplineKind::Srpt, DisciplineKind::StaticPriority}) {
        VectorArrivalSource src(evs);
        SplitterParams sp = kind == DisciplineKind::StaticPriority
                                ? SplitterParams{3, 1, WindowInit::Zeros}
                                : SplitterParams{};
        auto out = simulate_collect(src, Discipline{kind}, 1.0, sp);
        for (double w : out.workload_total) max_w = std::max(max_w, w);
        paths.push_back(std::move(out.workload_total));
    }
    for (std::size_t d = 1; d < paths.size(); ++d)
        for (std::size_t i = 0; i < paths[0].size(); ++i)
            CHECK(std::abs(paths[d][i] - paths[0][i]) <= 1e-9 * (1.0 + max_w));
}

TEST_CASE("srpt minimizes number in system at every event") {
    const auto arr = make_poisson(0.7);
    const auto svc = make_pareto(2.0, 1.0);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        std::vector<ArrivalEvent> evs;
        RandomArrivalSource gen(arr, svc, 3000, RngStream(100 + seed, 0));
        ArrivalEvent e{};
        while (gen.next(e)) evs.push_back(e);

        auto count_path = [&evs](const SimOutput& out, const std::vector<double>& at) {
            std::vector<double> deps;
            deps.reserve(out.jobs.size());
            for (const auto& j : out.jobs) deps.push_back(j.departure);
            std::sort(deps.begin(), deps.end());
            std::vector<double> arrs;
            for (const auto& ev : evs) arrs.push_back(ev.time);
            std::vector<std::int64_t> n;
            for (double t : at) {
                const auto na = std::upper_bound(arrs.begin(), arrs.end(), t) - arrs.begin();
                const auto nd = std::upper_bound(deps.begin(), deps.end(), t) - deps.begin();
                n.push_back(na - nd);
            }
            return n;
        };

        VectorArrivalSource s1(evs);
        auto srpt = simulate_collect(s1, Discipline{DisciplineKind::Srpt}, 1.0);
        for (auto kind : {DisciplineKind::Fifo, DisciplineKind::Ps, DisciplineKind::Fbps}) {
            VectorArrivalSource s2(evs);
            auto other = simulate_collect(s2, Discipline{kind}, 1.0);
            // Midpoints between consecutive merged event times dodge boundary ties.
            std::vector<double> times;
            for (const auto& ev : evs) times.push_back(ev.time);
            for (const auto& j : srpt.jobs) times.push_back(j.departure);
            for (const auto& j : other.jobs) times.push_back(j.departure);
            std::sort(times.begin(), times.end());
            std::vector<double> probes;
            for (std::size_t i = 1; i < times.size(); ++i)
                if (times[i] > times[i - 1]) probes.push_back(0.5 * (times[i] + times[i - 1]));
            const auto ns = count_path(srpt, probes);
            const auto no = count_path(other, probes);
            for (std::size_t i = 0; i < probes.size(); ++i) CHECK(ns[i] <= no[i]);
        }
    }
}

TEST_CASE("static priority class workload path is intra-class order invariant") {
    SplitterParams sp{2, 1, WindowInit::Zeros};
    auto fifo = run_random(DisciplineKind::StaticPriority, 0.7, make_pareto(2.0, 1.0), 10000, 23,
                           sp, 1.0, false);
    auto lifo = run_random(DisciplineKind::StaticPriority, 0.7, make_pareto(2.0, 1.0), 10000, 23,
                           sp, 1.0, true);
    REQUIRE(fifo.workload_class.size() == lifo.workload_class.size());
    for (std::size_t k = 0; k < fifo.workload_class.size(); ++k)
        for (std::size_t i = 0; i < fifo.workload_class[k].size(); ++i)
            CHECK(std::abs(fifo.workload_class[k][i] - lifo.workload_class[k][i]) <= 1e-9);
}

TEST_CASE("determinism: identical scenario gives identical output") {
    auto a = run_random(DisciplineKind::Srpt, 0.6, make_pareto(2.0, 1.0), 5000, 99);
    auto b = run_random(DisciplineKind::Srpt, 0.6, make_pareto(2.0, 1.0), 5000, 99);
    REQUIRE(a.jobs.size() == b.jobs.size());
    for (std::size_t i = 0; i < a.jobs.size(); ++i) {
        CHECK(a.jobs[i].arrival == b.jobs[i].arrival);
        CHECK(a.jobs[i].size == b.jobs[i].size);
        CHECK(a.jobs[i].departure == b.jobs[i].departure);
    }
    CHECK(a.workload_total == b.workload_total);
}

TEST_CASE("truncation flags jobs in flight at the final arrival") {
    auto out = run_events({{0.0, 5.0}, {1.0, 1.0}}, DisciplineKind::Fifo);
    // job0 departs at 5 > last arrival (1): truncated, and so is job1
    CHECK(out.jobs[0].truncated);
    CHECK(out.jobs[1].truncated);

    auto out2 = run_events({{0.0, 1.0}, {5.0, 1.0}}, DisciplineKind::Fifo);
    CHECK(!out2.jobs[0].truncated);
    CHECK(out2.jobs[1].truncated);
}

TEST_CASE("engine validation errors") {
    VectorArrivalSource src(std::vector<ArrivalEvent>{{0.0, 1.0}});
    SimObserver obs;
    CHECK_THROWS_AS((void)simulate(src, Discipline{}, 0.0, {}, {}, obs), std::invalid_argument);

    VectorArrivalSource nan_src(std::vector<ArrivalEvent>{{0.0, std::nan("")}});
    CHECK_THROWS_AS((void)simulate(nan_src, Discipline{}, 1.0, {}, {}, obs),
                    std::invalid_argument);
}

}  // TEST_SUITE
