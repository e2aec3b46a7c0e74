// Serial references against the OpenMP kernels: edge-order extraction (one intersection
// query per selector pair) and the bounded-tree enumeration behind validation.

#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "cssmin/minifier.hpp"

using namespace cssmin;

namespace {

std::string corpus(const std::string& name) {
  std::ifstream in(std::string(CSSMIN_TEST_DATA "/corpus/") + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Largest plain-rule segment of a corpus file.
std::vector<Rule> segment_of(const std::string& name) {
  std::vector<Rule> best;
  for (auto& seg : split_segments(parse_stylesheet(corpus(name), true)))
    if (!seg.passthrough && seg.rules.size() > best.size()) best = seg.rules;
  return best;
}

// Uncached, so every iteration pays for the queries.
bool intersect_uncached(const Selector& a, const Selector& b) {
  Selector x = normalize(a), y = normalize(b);
  if (x.pe != y.pe) return false;
  return check_nonempty_optimized(intersect(compile(x), compile(y)), {}).verdict != Emptiness::Empty;
}

const char* kFiles[] = {"skeleton.css", "pure-forms.css", "milligram.css"};

void BM_EdgeOrderSerial(benchmark::State& st) {
  auto [g, c] = build_graph(segment_of(kFiles[st.range(0)]));
  for (auto _ : st) benchmark::DoNotOptimize(extract_edge_order_serial(g, c, intersect_uncached));
  st.SetLabel(kFiles[st.range(0)]);
}

void BM_EdgeOrderParallel(benchmark::State& st) {
  auto [g, c] = build_graph(segment_of(kFiles[st.range(0)]));
  for (auto _ : st) benchmark::DoNotOptimize(extract_edge_order(g, c, intersect_uncached));
  st.SetLabel(kFiles[st.range(0)]);
}

// Validation of a file against itself visits every group.
void BM_ValidationSerial(benchmark::State& st) {
  auto ss = parse_stylesheet(corpus(kFiles[st.range(0)]), true);
  for (auto _ : st) benchmark::DoNotOptimize(compare_cascades_serial(ss, ss, ValidationBounds{}));
  st.SetLabel(kFiles[st.range(0)]);
}

void BM_ValidationParallel(benchmark::State& st) {
  auto ss = parse_stylesheet(corpus(kFiles[st.range(0)]), true);
  for (auto _ : st) benchmark::DoNotOptimize(compare_cascades(ss, ss, ValidationBounds{}));
  st.SetLabel(kFiles[st.range(0)]);
}

}  // namespace

BENCHMARK(BM_EdgeOrderSerial)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EdgeOrderParallel)->DenseRange(0, 2)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ValidationSerial)->DenseRange(0, 1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ValidationParallel)->DenseRange(0, 1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
