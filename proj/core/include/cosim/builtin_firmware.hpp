#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cosim/firmware.hpp"

namespace cosim::fw {

/// Integer parameters of a builtin firmware program.
using Params = std::map<std::string, std::int64_t>;

/// DDR placement of one matmul job. Rows are padded to whole 16-byte beats:
/// weights row r at weights + 16 r (C int8 lanes), input row m at
/// input + 16 m (R int8 lanes), partial-sum and output row m at
/// base + 16 ceil(C/4) m (C int32 lanes, little-endian).
struct MatmulLayout {
  Addr weights = 0x1000'0000;
  Addr input = 0x1001'0000;
  Addr psum = 0x1002'0000;
  Addr output = 0x1003'0000;
};

struct MatmulProblem {
  unsigned m = 0, r = 0, c = 0;
  std::vector<std::int8_t> a;   // m x r
  std::vector<std::int8_t> w;   // r x c
  std::vector<std::int32_t> p;  // m x c
};

/// Deterministic random operands: int8 lanes over the full range, int32 partial sums.
MatmulProblem make_matmul_problem(unsigned m, unsigned r, unsigned c, std::uint64_t seed);

std::uint64_t weights_bytes(unsigned r);
std::uint64_t input_bytes(unsigned m);
std::uint64_t result_bytes(unsigned m, unsigned c);

/// Places operands in DDR per the layout (direct firmware access).
void store_operands(FirmwareContext& ctx, const MatmulProblem& problem, const MatmulLayout& layout);
/// Reads the m x c int32 result from a memory image (no access events).
std::vector<std::int32_t> load_result(const MemoryImage& memory, Addr base, unsigned m, unsigned c);

/// Programs the controller and the four DMAs for one job and starts them.
/// `output_len` overrides the S2MM length (for misprogramming experiments).
void start_matmul(FirmwareContext& ctx, const MatmulProblem& problem, const MatmulLayout& layout,
                  std::uint64_t output_len);
/// Polls until DONE is set on the DMA at `dma_base`; clears it and returns STATUS.
std::uint32_t wait_dma_done(FirmwareContext& ctx, Addr dma_base);
void program_dma(FirmwareContext& ctx, Addr dma_base, Addr addr, std::uint64_t len);

struct Builtin {
  std::string name;
  std::string dut;  // DUT kind it drives
  std::string description;
  std::vector<std::string> params;
  std::function<int(FirmwareContext&, const Params&)> entry;
};

const std::vector<Builtin>& builtins();
const Builtin* find_builtin(const std::string& name);

/// Parameter with a default; throws ConfigError when outside [lo, hi].
std::int64_t param(const Params& params, const std::string& key, std::int64_t fallback,
                   std::int64_t lo, std::int64_t hi);

}  // namespace cosim::fw
