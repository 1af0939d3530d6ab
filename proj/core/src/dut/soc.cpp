#include "cosim/dut/soc.hpp"

namespace cosim::dut {

void Assembly::attach(MemoryBridge& memory, RegisterBridge& registers,
                      const CongestionFor& congestion) const {
  for (const auto& port : manager_ports) {
    memory.attach_manager_port(port, congestion ? congestion(port.name) : CongestionProfile{});
  }
  for (const auto& port : register_ports) registers.add_port(port);
}

namespace {

template <class T, class... Args>
T* own(Assembly& a, Args&&... args) {
  auto p = std::make_unique<T>(std::forward<Args>(args)...);
  T* raw = p.get();
  a.processes.push_back(std::move(p));
  return raw;
}

void add_dma(Assembly& a, DmaEngine* dma, Addr base) {
  a.manager_ports.push_back(dma->port());
  a.register_ports.push_back(dma->register_port(base));
}

}  // namespace

std::unique_ptr<SystolicSoc> build_systolic_soc(Kernel& kernel, unsigned max_rows,
                                                unsigned max_cols) {
  auto soc = std::make_unique<SystolicSoc>();
  auto& w_stream = make_stream(kernel, "weights.stream");
  auto& in_stream = make_stream(kernel, "input.stream");
  auto& p_stream = make_stream(kernel, "psum.stream");
  auto& arr_stream = make_stream(kernel, "array.stream");
  auto& out_stream = make_stream(kernel, "output.stream");

  soc->weights = own<Mm2sDma>(*soc, kernel, "weights", w_stream);
  soc->input = own<Mm2sDma>(*soc, kernel, "input", in_stream);
  soc->psum = own<Mm2sDma>(*soc, kernel, "psum", p_stream);
  soc->output = own<S2mmDma>(*soc, kernel, "output", out_stream);
  soc->array = own<SystolicArray>(*soc, kernel, "array", max_rows, max_cols, w_stream, in_stream,
                                  arr_stream);
  soc->adder = own<PsumAdder>(*soc, kernel, "adder", arr_stream, p_stream, out_stream);

  add_dma(*soc, soc->weights, soc_map::kWeightsDma);
  add_dma(*soc, soc->input, soc_map::kInputDma);
  add_dma(*soc, soc->psum, soc_map::kPsumDma);
  add_dma(*soc, soc->output, soc_map::kOutputDma);
  soc->register_ports.push_back(soc->array->register_port(soc_map::kController));
  return soc;
}

std::unique_ptr<RegisterFileDut> build_register_file_dut(Kernel& kernel, unsigned n_regs,
                                                         Addr base) {
  auto dut = std::make_unique<RegisterFileDut>();
  dut->regs = own<RegisterFile>(*dut, "regfile", n_regs);
  kernel.register_process(*dut->regs);
  dut->register_ports.push_back(dut->regs->register_port(base));
  return dut;
}

std::unique_ptr<DmaRig> build_dma_rig(Kernel& kernel, double sink_ready_prob, std::uint64_t seed) {
  auto rig = std::make_unique<DmaRig>();
  auto& w_stream = make_stream(kernel, "weights.stream");
  auto& in_stream = make_stream(kernel, "input.stream");
  auto& p_stream = make_stream(kernel, "psum.stream");
  auto& out_stream = make_stream(kernel, "output.stream");

  rig->weights = own<Mm2sDma>(*rig, kernel, "weights", w_stream);
  rig->input = own<Mm2sDma>(*rig, kernel, "input", in_stream);
  rig->psum = own<Mm2sDma>(*rig, kernel, "psum", p_stream);
  rig->output = own<S2mmDma>(*rig, kernel, "output", out_stream);
  rig->weights_sink = own<StreamSink>(*rig, kernel, "weights_sink", w_stream, sink_ready_prob, seed);
  rig->input_sink = own<StreamSink>(*rig, kernel, "input_sink", in_stream, sink_ready_prob, seed);
  rig->psum_sink = own<StreamSink>(*rig, kernel, "psum_sink", p_stream, sink_ready_prob, seed);
  rig->output_source = own<StreamSource>(*rig, kernel, "output_source", out_stream, std::nullopt, seed);

  add_dma(*rig, rig->weights, soc_map::kWeightsDma);
  add_dma(*rig, rig->input, soc_map::kInputDma);
  add_dma(*rig, rig->psum, soc_map::kPsumDma);
  add_dma(*rig, rig->output, soc_map::kOutputDma);
  return rig;
}

namespace {

RegisterBlockInfo dma_block(const std::string& name, Addr base, const std::string& dir) {
  return {name + " (" + dir + " DMA)",
          base,
          dma_reg::kWindow,
          dma_reg::kLatency,
          {{"CTRL", dma_reg::kCtrl, "w", "bit0 START; ignored while BUSY"},
           {"STATUS", dma_reg::kStatus, "r/w1c", "bit0 BUSY, bit1 DONE (write 1 to clear), bit2 ERR"},
           {"ADDR_LO", dma_reg::kAddrLo, "rw", "DDR address [31:0], bus-width aligned"},
           {"ADDR_HI", dma_reg::kAddrHi, "rw", "DDR address [63:32]"},
           {"LEN_BYTES", dma_reg::kLen, "rw", "transfer length, multiple of the bus width"}}};
}

}  // namespace

std::vector<DutInfo> dut_catalog() {
  DutInfo regfile{"register-file",
                  "32-bit scratch registers for smoke tests (default 16 registers)",
                  {},
                  {{"regfile",
                    soc_map::kRegisterFile,
                    16 * 4,
                    RegisterFile::kLatency,
                    {{"REG[n]", 0, "rw", "scratch word n at offset 4*n"}}}}};

  DutInfo soc{"systolic-soc",
              "int8 weight-stationary systolic array (R, C <= 16) fed by four AXI4 DMAs",
              {"weights", "input", "psum", "output"},
              {dma_block("weights", soc_map::kWeightsDma, "MM2S"),
               dma_block("input", soc_map::kInputDma, "MM2S"),
               dma_block("psum", soc_map::kPsumDma, "MM2S"),
               dma_block("output", soc_map::kOutputDma, "S2MM"),
               {"controller",
                soc_map::kController,
                ctrl_reg::kWindow,
                ctrl_reg::kLatency,
                {{"GO", ctrl_reg::kGo, "w", "bit0 starts a job; ignored while BUSY"},
                 {"DIMS_R_C", ctrl_reg::kDimsRC, "rw", "R in [15:0], C in [31:16]"},
                 {"DIMS_M", ctrl_reg::kDimsM, "rw", "input rows per job"},
                 {"STATUS", ctrl_reg::kStatus, "r/w1c",
                  "bit0 BUSY, bit1 DONE (write 1 to clear), bit2 ERR"}}}}};

  DutInfo rig{"dma-rig",
              "the SoC's four DMAs with synthetic stream endpoints, for contention studies",
              {"weights", "input", "psum", "output"},
              {dma_block("weights", soc_map::kWeightsDma, "MM2S"),
               dma_block("input", soc_map::kInputDma, "MM2S"),
               dma_block("psum", soc_map::kPsumDma, "MM2S"),
               dma_block("output", soc_map::kOutputDma, "S2MM")}};
  return {regfile, soc, rig};
}

}  // namespace cosim::dut
