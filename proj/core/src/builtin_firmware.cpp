#include "cosim/builtin_firmware.hpp"

#include <algorithm>
#include <array>
#include <cstdint>

#include "cosim/congestion.hpp"
#include "cosim/dut/dma.hpp"
#include "cosim/dut/soc.hpp"
#include "cosim/dut/systolic.hpp"

namespace cosim::fw {

using namespace dut;

namespace {

constexpr unsigned kBeat = 16;

void put_u32(std::vector<std::uint8_t>& bytes, std::size_t at, std::uint32_t v) {
  for (unsigned k = 0; k < 4; ++k) bytes[at + k] = static_cast<std::uint8_t>(v >> (8 * k));
}

std::uint32_t get_u32(const std::vector<std::uint8_t>& bytes, std::size_t at) {
  std::uint32_t v = 0;
  for (unsigned k = 0; k < 4; ++k) v |= std::uint32_t{bytes[at + k]} << (8 * k);
  return v;
}

std::vector<std::uint8_t> pack_int8_rows(const std::vector<std::int8_t>& values, unsigned rows,
                                         unsigned cols) {
  std::vector<std::uint8_t> out(std::size_t{rows} * kBeat, 0);
  for (unsigned i = 0; i < rows; ++i) {
    for (unsigned j = 0; j < cols; ++j) {
      out[std::size_t{i} * kBeat + j] = static_cast<std::uint8_t>(values[std::size_t{i} * cols + j]);
    }
  }
  return out;
}

std::vector<std::uint8_t> pack_int32_rows(const std::vector<std::int32_t>& values, unsigned rows,
                                          unsigned cols) {
  const std::size_t row_bytes = std::size_t{row_beats(cols)} * kBeat;
  std::vector<std::uint8_t> out(rows * row_bytes, 0);
  for (unsigned i = 0; i < rows; ++i) {
    for (unsigned j = 0; j < cols; ++j) {
      put_u32(out, i * row_bytes + std::size_t{j} * 4,
              static_cast<std::uint32_t>(values[std::size_t{i} * cols + j]));
    }
  }
  return out;
}

std::vector<std::int32_t> unpack_int32_rows(const std::vector<std::uint8_t>& bytes, unsigned rows,
                                            unsigned cols) {
  const std::size_t row_bytes = std::size_t{row_beats(cols)} * kBeat;
  std::vector<std::int32_t> out(std::size_t{rows} * cols);
  for (unsigned i = 0; i < rows; ++i) {
    for (unsigned j = 0; j < cols; ++j) {
      out[std::size_t{i} * cols + j] =
          static_cast<std::int32_t>(get_u32(bytes, i * row_bytes + std::size_t{j} * 4));
    }
  }
  return out;
}

// The firmware's own reference product, computed on the host side.
std::vector<std::int32_t> reference_product(const MatmulProblem& pr) {
  std::vector<std::int32_t> out(std::size_t{pr.m} * pr.c);
  for (unsigned i = 0; i < pr.m; ++i) {
    for (unsigned j = 0; j < pr.c; ++j) {
      std::uint32_t acc = static_cast<std::uint32_t>(pr.p[std::size_t{i} * pr.c + j]);
      for (unsigned k = 0; k < pr.r; ++k) {
        acc += static_cast<std::uint32_t>(std::int32_t{pr.a[std::size_t{i} * pr.r + k]} *
                                          std::int32_t{pr.w[std::size_t{k} * pr.c + j]});
      }
      out[std::size_t{i} * pr.c + j] = static_cast<std::int32_t>(acc);
    }
  }
  return out;
}

MatmulProblem problem_from(const Params& params, unsigned default_m = 8) {
  const auto m = static_cast<unsigned>(param(params, "m", default_m, 1, 4096));
  const auto r = static_cast<unsigned>(param(params, "r", 8, 1, kMaxArrayDim));
  const auto c = static_cast<unsigned>(param(params, "c", 8, 1, kMaxArrayDim));
  const auto seed_default = param(params, "seed", 0, INT64_MIN, INT64_MAX);
  const auto seed = static_cast<std::uint64_t>(param(params, "data_seed", seed_default, INT64_MIN, INT64_MAX));
  return make_matmul_problem(m, r, c, seed);
}

int run_matmul(FirmwareContext& ctx, const Params& params) {
  const MatmulProblem problem = problem_from(params);
  const MatmulLayout layout;
  store_operands(ctx, problem, layout);
  start_matmul(ctx, problem, layout, result_bytes(problem.m, problem.c));
  const std::uint32_t status = wait_dma_done(ctx, soc_map::kOutputDma);
  if (status & dma_reg::kErr) return 2;
  const auto bytes = fb_mem_read(ctx, layout.output, result_bytes(problem.m, problem.c));
  return unpack_int32_rows(bytes, problem.m, problem.c) == reference_product(problem) ? 0 : 1;
}

int run_hang_reproducer(FirmwareContext& ctx, const Params& params) {
  const MatmulProblem problem = problem_from(params);
  const auto deficit = static_cast<std::uint64_t>(param(params, "deficit", 1, 1, 1 << 20));
  const MatmulLayout layout;
  store_operands(ctx, problem, layout);
  // Bug under study: the S2MM length counts beats the adder never produces.
  start_matmul(ctx, problem, layout, result_bytes(problem.m, problem.c) + deficit * kBeat);
  wait_dma_done(ctx, soc_map::kOutputDma);
  return 1;
}

std::int8_t requantize(std::int32_t v) {
  return static_cast<std::int8_t>(std::clamp(v >> 8, -128, 127));
}

int run_pingpong(FirmwareContext& ctx, const Params& params) {
  MatmulProblem problem = problem_from(params, 16);
  const auto layers = static_cast<unsigned>(param(params, "layers", 8, 1, 1024));
  const auto period = static_cast<Cycle>(param(params, "period", 1024, 1, 1 << 30));
  const std::array<Addr, 2> buffers = {static_cast<Addr>(param(params, "buffer0", 0x1000'0000, 0, INT64_MAX)),
                                       static_cast<Addr>(param(params, "buffer1", 0x1000'1000, 0, INT64_MAX))};
  MatmulLayout layout;
  layout.weights = 0x2000'0000;
  layout.psum = 0x2001'0000;
  layout.output = 0x2002'0000;

  if (problem.c < problem.r) {
    throw ConfigError("pingpong needs c >= r so each layer's output can feed the next layer");
  }
  int failures = 0;
  for (unsigned k = 0; k < layers; ++k) {
    const Cycle start = Cycle{k} * period;
    if (fb_cycle_count(ctx) < start) fb_wait_cycles(ctx, start - fb_cycle_count(ctx));
    layout.input = buffers[k % 2];
    store_operands(ctx, problem, layout);
    start_matmul(ctx, problem, layout, result_bytes(problem.m, problem.c));
    if (wait_dma_done(ctx, soc_map::kOutputDma) & dma_reg::kErr) return 2;
    const auto out = unpack_int32_rows(fb_mem_read(ctx, layout.output, result_bytes(problem.m, problem.c)),
                                       problem.m, problem.c);
    if (out != reference_product(problem)) ++failures;
    // Next layer's activations: first r output columns, requantized to int8.
    for (unsigned i = 0; i < problem.m; ++i) {
      for (unsigned j = 0; j < problem.r; ++j) {
        problem.a[std::size_t{i} * problem.r + j] = requantize(out[std::size_t{i} * problem.c + j]);
      }
    }
  }
  return failures == 0 ? 0 : 1;
}

int run_contention(FirmwareContext& ctx, const Params& params) {
  const auto bytes = static_cast<std::uint64_t>(param(params, "bytes", 16384, 16, 1 << 24));
  if (bytes % kBeat != 0) throw ConfigError("contention: bytes must be a multiple of 16");
  program_dma(ctx, soc_map::kInputDma, 0x1000'0000, bytes);
  program_dma(ctx, soc_map::kWeightsDma, 0x1100'0000, bytes);
  program_dma(ctx, soc_map::kPsumDma, 0x1200'0000, bytes);
  program_dma(ctx, soc_map::kOutputDma, 0x1300'0000, bytes);
  int errors = 0;
  for (Addr base : {soc_map::kInputDma, soc_map::kWeightsDma, soc_map::kPsumDma, soc_map::kOutputDma}) {
    if (wait_dma_done(ctx, base) & dma_reg::kErr) ++errors;
  }
  return errors;
}

int run_regfile_smoke(FirmwareContext& ctx, const Params& params) {
  const auto count = static_cast<unsigned>(param(params, "count", 16, 1, 1 << 16));
  const auto base = static_cast<Addr>(param(params, "base", static_cast<std::int64_t>(soc_map::kRegisterFile), 0, INT64_MAX));
  const auto seed = static_cast<std::uint64_t>(param(params, "seed", 0, INT64_MIN, INT64_MAX));
  SplitMix64 rng(seed);
  std::vector<std::uint32_t> values(count);
  int mismatches = 0;
  for (unsigned i = 0; i < count; ++i) {
    values[i] = static_cast<std::uint32_t>(rng.next());
    if (fb_write_32(ctx, base + 4 * i, values[i]) != FbStatus::Ok) ++mismatches;
  }
  for (unsigned i = 0; i < count; ++i) {
    if (fb_read_32(ctx, base + 4 * i) != values[i]) ++mismatches;
  }
  if (param(params, "probe_errors", 0, 0, 1)) {
    if (fb_read_32(ctx, 0xFFFF'0000) != kDecodeErrorValue ||
        ctx.last_status() != FbStatus::DecodeError) {
      ++mismatches;
    }
    if (fb_write_32(ctx, base + 2, 1) != FbStatus::Misaligned) ++mismatches;
  }
  return mismatches;
}

int run_wait(FirmwareContext& ctx, const Params& params) {
  fb_wait_cycles(ctx, static_cast<Cycle>(param(params, "cycles", 0, 0, INT64_MAX)));
  return 0;
}

}  // namespace

std::int64_t param(const Params& params, const std::string& key, std::int64_t fallback,
                   std::int64_t lo, std::int64_t hi) {
  auto it = params.find(key);
  const std::int64_t v = it == params.end() ? fallback : it->second;
  if (v < lo || v > hi) {
    throw ConfigError("firmware parameter '" + key + "' = " + std::to_string(v) + " out of range [" +
                      std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return v;
}

MatmulProblem make_matmul_problem(unsigned m, unsigned r, unsigned c, std::uint64_t seed) {
  MatmulProblem pr;
  pr.m = m;
  pr.r = r;
  pr.c = c;
  SplitMix64 rng(SplitMix64::mix(seed ^ 0x6d61746d756c0000ULL));
  auto i8 = [&rng] { return static_cast<std::int8_t>(static_cast<std::uint8_t>(rng.next())); };
  pr.a.resize(std::size_t{m} * r);
  pr.w.resize(std::size_t{r} * c);
  pr.p.resize(std::size_t{m} * c);
  for (auto& v : pr.w) v = i8();
  for (auto& v : pr.a) v = i8();
  for (auto& v : pr.p) v = static_cast<std::int32_t>(static_cast<std::uint32_t>(rng.next()));
  return pr;
}

std::uint64_t weights_bytes(unsigned r) { return std::uint64_t{r} * kBeat; }
std::uint64_t input_bytes(unsigned m) { return std::uint64_t{m} * kBeat; }
std::uint64_t result_bytes(unsigned m, unsigned c) {
  return std::uint64_t{m} * row_beats(c) * kBeat;
}

void store_operands(FirmwareContext& ctx, const MatmulProblem& pr, const MatmulLayout& layout) {
  fb_mem_write(ctx, layout.weights, pack_int8_rows(pr.w, pr.r, pr.c));
  fb_mem_write(ctx, layout.input, pack_int8_rows(pr.a, pr.m, pr.r));
  fb_mem_write(ctx, layout.psum, pack_int32_rows(pr.p, pr.m, pr.c));
}

std::vector<std::int32_t> load_result(const MemoryImage& memory, Addr base, unsigned m, unsigned c) {
  return unpack_int32_rows(memory.peek(base, result_bytes(m, c)), m, c);
}

void program_dma(FirmwareContext& ctx, Addr dma_base, Addr addr, std::uint64_t len) {
  fb_write_32(ctx, dma_base + dma_reg::kAddrLo, static_cast<std::uint32_t>(addr));
  fb_write_32(ctx, dma_base + dma_reg::kAddrHi, static_cast<std::uint32_t>(addr >> 32));
  fb_write_32(ctx, dma_base + dma_reg::kLen, static_cast<std::uint32_t>(len));
  fb_write_32(ctx, dma_base + dma_reg::kCtrl, dma_reg::kStart);
}

void start_matmul(FirmwareContext& ctx, const MatmulProblem& pr, const MatmulLayout& layout,
                  std::uint64_t output_len) {
  fb_write_32(ctx, soc_map::kController + ctrl_reg::kDimsRC, pr.r | (pr.c << 16));
  fb_write_32(ctx, soc_map::kController + ctrl_reg::kDimsM, pr.m);
  fb_write_32(ctx, soc_map::kController + ctrl_reg::kGo, 1);
  program_dma(ctx, soc_map::kOutputDma, layout.output, output_len);
  program_dma(ctx, soc_map::kWeightsDma, layout.weights, weights_bytes(pr.r));
  program_dma(ctx, soc_map::kInputDma, layout.input, input_bytes(pr.m));
  program_dma(ctx, soc_map::kPsumDma, layout.psum, result_bytes(pr.m, pr.c));
}

std::uint32_t wait_dma_done(FirmwareContext& ctx, Addr dma_base) {
  for (;;) {
    const std::uint32_t status = fb_read_32(ctx, dma_base + dma_reg::kStatus);
    if (status & dma_reg::kErr) return status;
    if (status & dma_reg::kDone) {
      fb_write_32(ctx, dma_base + dma_reg::kStatus, dma_reg::kDone);
      return status;
    }
  }
}

const std::vector<Builtin>& builtins() {
  static const std::vector<Builtin> list = {
      {"matmul", "systolic-soc", "one A*W+P job; checks DDR output against its own reference",
       {"m", "r", "c", "data_seed"}, run_matmul},
      {"hang_reproducer", "systolic-soc",
       "matmul with the output DMA length overstated by `deficit` beats",
       {"m", "r", "c", "data_seed", "deficit"}, run_hang_reproducer},
      {"pingpong", "systolic-soc",
       "layer chain alternating its input between two buffers, one layer per period",
       {"m", "r", "c", "data_seed", "layers", "period", "buffer0", "buffer1"}, run_pingpong},
      {"contention", "dma-rig", "all four DMAs moving `bytes` each at once", {"bytes"},
       run_contention},
      {"regfile_smoke", "register-file", "write/read-back of scratch registers",
       {"count", "base", "probe_errors"}, run_regfile_smoke},
      {"wait", "any", "waits `cycles` cycles and exits", {"cycles"}, run_wait},
  };
  return list;
}

const Builtin* find_builtin(const std::string& name) {
  for (const auto& b : builtins()) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

}  // namespace cosim::fw
