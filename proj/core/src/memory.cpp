#include "cosim/memory.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>

namespace cosim {

namespace {

bool overlaps(Addr a, std::uint64_t alen, Addr b, std::uint64_t blen) {
  if (alen == 0 || blen == 0) return false;
  const Addr a_last = a + (alen - 1);
  const Addr b_last = b + (blen - 1);
  return a <= b_last && b <= a_last;
}

bool mode_matches(WatchMode mode, AccessKind kind) {
  return mode == WatchMode::Both || (mode == WatchMode::Read) == (kind == AccessKind::Read);
}

}  // namespace

MemoryImage::MemoryImage(std::uint8_t fill) : fill_(fill) {}

MemoryImage::Page& MemoryImage::page_for_write(Addr page_index) {
  auto& slot = pages_[page_index];
  if (!slot) {
    slot = std::make_unique<Page>();
    slot->fill(fill_);
  }
  return *slot;
}

const MemoryImage::Page* MemoryImage::page_for_read(Addr page_index) const {
  auto it = pages_.find(page_index);
  return it == pages_.end() ? nullptr : it->second.get();
}

void MemoryImage::log_access(AccessKind kind, Addr addr, std::uint64_t length,
                             const Origin& origin) {
  if (watches_.empty() || length == 0) return;
  std::vector<WatchId> hits;
  for (const auto& [id, region] : watches_) {
    if (mode_matches(region.mode, kind) && overlaps(addr, length, region.base, region.length)) {
      hits.push_back(id);
    }
  }
  if (hits.empty()) return;
  log_.push_back(AccessEvent{clock_ ? clock_() : 0, origin, kind, addr, length, std::move(hits)});
}

void MemoryImage::write_bytes(Addr addr, std::span<const std::uint8_t> data,
                              const Origin& origin) {
  std::size_t done = 0;
  while (done < data.size()) {
    const Addr a = addr + done;
    const std::size_t offset = a % kPageBytes;
    const std::size_t chunk = std::min(kPageBytes - offset, data.size() - done);
    Page& page = page_for_write(a / kPageBytes);
    std::copy_n(data.begin() + done, chunk, page.begin() + offset);
    done += chunk;
  }
  if (!origin.firmware) bus_written_ += data.size();
  log_access(AccessKind::Write, addr, data.size(), origin);
}

void MemoryImage::write_masked(Addr addr, std::span<const std::uint8_t> data,
                               std::span<const std::uint8_t> enable, const Origin& origin) {
  if (enable.size() != data.size()) throw Error("write_masked: mask length mismatch");
  std::uint64_t written = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!enable[i]) continue;
    const Addr a = addr + i;
    page_for_write(a / kPageBytes)[a % kPageBytes] = data[i];
    ++written;
  }
  if (!origin.firmware) bus_written_ += written;
  log_access(AccessKind::Write, addr, data.size(), origin);
}

void MemoryImage::peek_into(Addr addr, std::span<std::uint8_t> out) const {
  std::size_t done = 0;
  while (done < out.size()) {
    const Addr a = addr + done;
    const std::size_t offset = a % kPageBytes;
    const std::size_t chunk = std::min(kPageBytes - offset, out.size() - done);
    if (const Page* page = page_for_read(a / kPageBytes)) {
      std::copy_n(page->begin() + offset, chunk, out.begin() + done);
    } else {
      std::fill_n(out.begin() + done, chunk, fill_);
    }
    done += chunk;
  }
}

std::vector<std::uint8_t> MemoryImage::peek(Addr addr, std::size_t length) const {
  std::vector<std::uint8_t> out(length);
  peek_into(addr, out);
  return out;
}

void MemoryImage::read_into(Addr addr, std::span<std::uint8_t> out, const Origin& origin) {
  peek_into(addr, out);
  if (!origin.firmware) bus_read_ += out.size();
  log_access(AccessKind::Read, addr, out.size(), origin);
}

std::vector<std::uint8_t> MemoryImage::read_bytes(Addr addr, std::size_t length,
                                                  const Origin& origin) {
  std::vector<std::uint8_t> out(length);
  read_into(addr, out, origin);
  return out;
}

WatchId MemoryImage::add_watch(WatchRegion region) {
  if (region.length < 1) throw Error("watch region length must be >= 1");
  const WatchId id = next_watch_++;
  watches_.emplace(id, std::move(region));
  return id;
}

void MemoryImage::remove_watch(WatchId id) {
  if (watches_.erase(id) == 0) throw Error("unknown watch id " + std::to_string(id));
}

std::vector<AccessEvent> MemoryImage::take_access_log() {
  std::vector<AccessEvent> out;
  out.swap(log_);
  return out;
}

std::size_t MemoryImage::load_image(const std::filesystem::path& file, Addr base) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error("cannot read memory image '" + file.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw Error("I/O error reading memory image '" + file.string() + "'");
  if (!bytes.empty()) write_bytes(base, bytes, Origin::from_firmware());
  return bytes.size();
}

void MemoryImage::store_image(const std::filesystem::path& file, Addr base,
                              std::size_t length) const {
  const auto bytes = peek(base, length);
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write memory image '" + file.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("I/O error writing memory image '" + file.string() + "'");
}

std::uint64_t MemoryImage::digest() const {
  // FNV-1a over (page index, bytes) of pages that differ from the fill.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint8_t byte) {
    h ^= byte;
    h *= 0x100000001b3ULL;
  };
  for (const auto& [index, page] : pages_) {
    if (std::all_of(page->begin(), page->end(), [this](std::uint8_t b) { return b == fill_; })) {
      continue;
    }
    for (int i = 0; i < 8; ++i) mix(static_cast<std::uint8_t>(index >> (8 * i)));
    for (std::uint8_t b : *page) mix(b);
  }
  return h;
}

}  // namespace cosim
