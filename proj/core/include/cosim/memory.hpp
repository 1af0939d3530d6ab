#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cosim/types.hpp"

namespace cosim {

enum class AccessKind { Read, Write };
enum class WatchMode { Read, Write, Both };

/// Who performed a memory access: the firmware (direct pointer access) or a
/// bus port of the memory bridge.
struct Origin {
  bool firmware = true;
  std::string port;

  static Origin from_firmware() { return Origin{true, {}}; }
  static Origin from_port(std::string name) { return Origin{false, std::move(name)}; }
  std::string label() const { return firmware ? "firmware" : port; }
  friend bool operator==(const Origin&, const Origin&) = default;
};

struct WatchRegion {
  Addr base = 0;
  std::uint64_t length = 1;
  WatchMode mode = WatchMode::Both;
  std::string label;
  friend bool operator==(const WatchRegion&, const WatchRegion&) = default;
};

using WatchId = std::uint32_t;

/// One access that touched at least one watched region.
struct AccessEvent {
  Cycle cycle = 0;
  Origin origin;
  AccessKind kind = AccessKind::Read;
  Addr addr = 0;
  std::uint64_t length = 0;
  std::vector<WatchId> regions;
  friend bool operator==(const AccessEvent&, const AccessEvent&) = default;
};

/// Sparse byte-addressable DDR image with 4 KiB pages allocated on first write.
/// Never-written bytes read back as the fill byte.
class MemoryImage {
 public:
  static constexpr std::size_t kPageBytes = 4096;

  explicit MemoryImage(std::uint8_t fill = 0x00);

  void write_bytes(Addr addr, std::span<const std::uint8_t> data,
                   const Origin& origin = Origin::from_firmware());
  /// Writes only bytes whose `enable` entry is non-zero; one access event spans the whole range.
  void write_masked(Addr addr, std::span<const std::uint8_t> data,
                    std::span<const std::uint8_t> enable, const Origin& origin);
  std::vector<std::uint8_t> read_bytes(Addr addr, std::size_t length,
                                       const Origin& origin = Origin::from_firmware());
  void read_into(Addr addr, std::span<std::uint8_t> out, const Origin& origin);

  /// Side-effect-free read: no watch events, no counters.
  std::vector<std::uint8_t> peek(Addr addr, std::size_t length) const;
  void peek_into(Addr addr, std::span<std::uint8_t> out) const;

  WatchId add_watch(WatchRegion region);
  void remove_watch(WatchId id);
  std::vector<AccessEvent> take_access_log();

  /// Places a raw binary file at `base`; returns bytes loaded.
  std::size_t load_image(const std::filesystem::path& file, Addr base);
  void store_image(const std::filesystem::path& file, Addr base, std::size_t length) const;

  std::size_t page_count() const { return pages_.size(); }
  std::uint8_t fill() const { return fill_; }

  /// Time source for access events (defaults to cycle 0).
  void set_clock(std::function<Cycle()> clock) { clock_ = std::move(clock); }

  /// Bytes moved by bus origins (firmware access is not counted).
  std::uint64_t bus_bytes_read() const { return bus_read_; }
  std::uint64_t bus_bytes_written() const { return bus_written_; }

  /// Stable digest of every stored page, for equality checks between runs.
  std::uint64_t digest() const;

 private:
  using Page = std::array<std::uint8_t, kPageBytes>;

  Page& page_for_write(Addr page_index);
  const Page* page_for_read(Addr page_index) const;
  void log_access(AccessKind kind, Addr addr, std::uint64_t length, const Origin& origin);

  std::map<Addr, std::unique_ptr<Page>> pages_;
  std::map<WatchId, WatchRegion> watches_;
  std::vector<AccessEvent> log_;
  std::function<Cycle()> clock_;
  WatchId next_watch_ = 0;
  std::uint64_t bus_read_ = 0;
  std::uint64_t bus_written_ = 0;
  std::uint8_t fill_;
};

}  // namespace cosim
