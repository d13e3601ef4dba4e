// Wall-clock comparison of the OpenMP kernels against their serial
// reference implementations: truth-table construction, Quine-McCluskey
// minimization, cause enumeration, and the verification fuzz loop.

#include "causatum/boolfun.hpp"
#include "causatum/cause.hpp"
#include "causatum/verify.hpp"

#include <omp.h>

#include <cstdio>
#include <random>
#include <string>
#include <vector>

using namespace causatum;

namespace {

struct sample {
  double serial_seconds;
  double parallel_seconds;
};

void report(const std::string& name, const sample& s) {
  std::printf("%-34s serial %8.3f s   parallel %8.3f s   speedup %.2fx\n",
              name.c_str(), s.serial_seconds, s.parallel_seconds,
              s.parallel_seconds > 0 ? s.serial_seconds / s.parallel_seconds
                                     : 0.0);
}

template <typename F>
double timed(F&& f) {
  double start = omp_get_wtime();
  f();
  return omp_get_wtime() - start;
}

sample bench_truth_table() {
  std::mt19937_64 rng(1);
  normal_form nf;
  nf.kind = normal_form::connective::dnf;
  nf.n = 16;
  for (int i = 0; i < 48; ++i) {
    std::uint32_t vars = static_cast<std::uint32_t>(rng()) & 0xffff;
    nf.clauses.push_back(clause{vars, static_cast<std::uint32_t>(rng()) & vars});
  }
  sample s{};
  char sink = 0;
  s.serial_seconds = timed([&] {
    for (int rep = 0; rep < 40; ++rep) sink ^= to_truth_table_serial(nf).bits[0];
  });
  s.parallel_seconds = timed([&] {
    for (int rep = 0; rep < 40; ++rep) sink ^= to_truth_table(nf).bits[0];
  });
  (void)sink;
  return s;
}

sample bench_quine_mccluskey() {
  std::mt19937_64 rng(2);
  std::vector<truth_table> tables;
  for (int i = 0; i < 6; ++i) {
    truth_table tt;
    tt.n = 11;
    tt.bits.resize(std::size_t{1} << tt.n);
    for (auto& b : tt.bits) b = rng() % 4 != 0 ? 1 : 0;  // dense: deep merges
    tables.push_back(std::move(tt));
  }
  sample s{};
  std::size_t sink = 0;
  s.serial_seconds = timed([&] {
    for (const auto& tt : tables) sink += quine_mccluskey_serial(tt).clauses.size();
  });
  s.parallel_seconds = timed([&] {
    for (const auto& tt : tables) sink += quine_mccluskey(tt).clauses.size();
  });
  (void)sink;
  return s;
}

sample bench_enumerate() {
  // A wide model: every subset check is an independent exhaustive search,
  // which is the data-parallel dimension.
  cause_query q = generate_random_model(3, 10, 10, 3);
  sample s{};
  std::size_t sink = 0;
  s.serial_seconds = timed([&] {
    sink += enumerate_causes(q, cause_kind::sufficient, false,
                             exec_mode::serial)
                .members.size();
    sink += enumerate_causes(q, cause_kind::actual, false, exec_mode::serial)
                .members.size();
  });
  s.parallel_seconds = timed([&] {
    sink += enumerate_causes(q, cause_kind::sufficient, false,
                             exec_mode::parallel)
                .members.size();
    sink += enumerate_causes(q, cause_kind::actual, false, exec_mode::parallel)
                .members.size();
  });
  (void)sink;
  return s;
}

sample bench_verify() {
  verify_options serial{42, 400, 6, exec_mode::serial};
  verify_options parallel{42, 400, 6, exec_mode::parallel};
  sample s{};
  int sink = 0;
  s.serial_seconds = timed([&] { sink += verify_random(serial).passed; });
  s.parallel_seconds = timed([&] { sink += verify_random(parallel).passed; });
  (void)sink;
  return s;
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());
  report("truth table (n=16, 40 reps)", bench_truth_table());
  report("quine-mccluskey (n=11, dense)", bench_quine_mccluskey());
  report("cause enumeration (10 endo)", bench_enumerate());
  report("verify fuzz loop (400 models)", bench_verify());
  return 0;
}
