// Serial-vs-OpenMP comparison for the two data-parallel kernels: the
// Theorem-2 bound reduction over a long stream, and the replication fan-out
// of the experiment harness. The learner loop itself is sequential by nature
// and is timed once for scale.
//
// Run manually: build/bench/sms_bench [T] [replications]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sms/metrics.hpp"
#include "sms/mlms.hpp"
#include "sms/noise.hpp"
#include "sms/parallel.hpp"
#include "sms/simulator.hpp"
#include "sms/vec.hpp"

using namespace sms;

namespace {

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

void set_threads(int n) {
#ifdef _OPENMP
    omp_set_num_threads(n);
#else
    (void)n;
#endif
}

StreamSpec bench_spec(std::int64_t T) {
    StreamSpec s;
    s.m1 = 2;
    s.m2 = 1;
    s.T = T;
    s.seed = 42;
    s.lower = 1.0;
    s.upper = 120.0;
    s.z_probs = {0.5, 0.5};
    s.v_probs = {0.5};
    s.counts.rates = {0.8, 0.6, 0.5, 0.4};
    s.counts.cap = 3;
    s.a_value = 20.0;
    s.structural.b = 3.0;
    s.structural.c = 2.0;
    s.structural.d = 1.5;
    s.structural.e = 4.0;
    s.structural.eta = 0.05;
    s.structural.p = {0.3, 0.2};
    s.structural.q = {0.25};
    s.box_radius = 8.0;
    s.noise = GaussianNoiseModel(0.97);
    return s;
}

Hyperparams bench_hp() {
    Hyperparams hp;
    hp.mu = 0.5;
    hp.momentum = MomentumMode::constant;
    hp.beta = 0.5;
    hp.box_radius = 8.0;
    return hp;
}

void print_row(const char* kernel, double serial_ms, double parallel_ms, int threads,
               double check_delta) {
    std::printf("%-26s %10.1f %12.1f %8.2fx %8d   %.3g\n", kernel, serial_ms, parallel_ms,
                serial_ms / parallel_ms, threads, check_delta);
}

}  // namespace

int main(int argc, char** argv) {
    const std::int64_t T = argc > 1 ? std::atoll(argv[1]) : 400000;
    const int reps = argc > 2 ? std::atoi(argv[2]) : 8;
    const int max_threads = par::max_threads();

    std::printf("threads available: %d\n", max_threads);
    std::printf("%-26s %10s %12s %9s %8s   %s\n", "kernel", "serial_ms", "parallel_ms",
                "speedup", "threads", "|delta|");

    // kernel 1: bound reduction over a T-step stream
    {
        const StreamSpec spec = bench_spec(T);
        const auto stream = gen_case_stream(spec);
        const auto view = oracle_view(stream);
        const auto term = [&](std::size_t k) {
            const OracleStep& st = view[k];
            return sat_abs_deviation(dot(st.phi, st.theta), st.lower, st.upper, spec.noise) /
                   st.y;
        };
        set_threads(max_threads);
        (void)par::reduce_sum(view.size(), term);  // warm caches and the thread pool
        const double t0 = now_ms();
        const double serial = par::serial_sum(view.size(), term);
        const double t1 = now_ms();
        const double parallel = par::reduce_sum(view.size(), term);
        const double t2 = now_ms();
        print_row("theorem2 bound reduction", t1 - t0, t2 - t1, max_threads,
                  std::abs(serial - parallel));
    }

    // kernel 2: replication fan-out (independent seeded experiments)
    {
        StreamSpec spec = bench_spec(T / 8);
        const Hyperparams hp = bench_hp();
        set_threads(max_threads);
        (void)run_experiment(spec, hp, reps);  // warm-up pass
        set_threads(1);
        const double t0 = now_ms();
        const ExperimentSummary one = run_experiment(spec, hp, reps);
        const double t1 = now_ms();
        set_threads(max_threads);
        const ExperimentSummary many = run_experiment(spec, hp, reps);
        const double t2 = now_ms();
        print_row("replication fan-out", t1 - t0, t2 - t1, max_threads,
                  std::abs(one.ra_mlms.mean - many.ra_mlms.mean));
    }

    // scale reference: the sequential learner itself
    {
        const StreamSpec spec = bench_spec(T / 4);
        const auto stream = gen_case_stream(spec);
        std::vector<StreamElement> els;
        els.reserve(stream.size());
        for (const auto& s : stream) els.push_back({s.phi, s.rec.lower, s.rec.upper, *s.rec.y});
        const double t0 = now_ms();
        const RunReport rep = run_stream(els, spec.noise, bench_hp());
        const double t1 = now_ms();
        std::printf("%-26s %10.1f   (sequential; %.0f steps/ms, final |theta|=%.3f)\n",
                    "mlms online pass", t1 - t0, static_cast<double>(els.size()) / (t1 - t0),
                    rep.steps.back().theta_norm);
    }
    return 0;
}
