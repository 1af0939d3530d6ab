#pragma once

#include <cstdint>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "cosim/bitvalue.hpp"

namespace cosim {

/// Anything holding a current/next pair that the kernel swaps at the clock edge.
class Committable {
 public:
  virtual ~Committable() = default;
  virtual void commit() = 0;
};

/// Registered signal. Readers see the value committed at the last clock edge;
/// writes land in the next-cycle slot and become visible after commit.
/// An unwritten wire holds its value.
template <class T>
class Wire final : public Committable {
 public:
  explicit Wire(T init = T{}) : cur_(init), next_(std::move(init)) {}

  const T& get() const { return cur_; }
  const T& pending() const { return next_; }
  void set(const T& value) { next_ = value; }
  void commit() override { cur_ = next_; }

 private:
  T cur_;
  T next_;
};

struct TraceField {
  std::string name;
  unsigned width = 1;
};

/// Per-payload tracing hooks; specialized next to each payload type.
///   static void describe(std::vector<TraceField>&, unsigned data_bytes);
///   static void sample(const P&, std::vector<BitValue>&, unsigned data_bytes);
template <class P>
struct PayloadTrace;

/// Plain integers trace as one `data` field of their natural width.
template <class P>
  requires(std::is_integral_v<P> && !std::is_same_v<P, bool>)
struct PayloadTrace<P> {
  static void describe(std::vector<TraceField>& out, unsigned) {
    out.push_back({"data", static_cast<unsigned>(sizeof(P) * 8)});
  }
  static void sample(const P& p, std::vector<BitValue>& out, unsigned) {
    out.emplace_back(static_cast<unsigned>(sizeof(P) * 8),
                     static_cast<std::uint64_t>(static_cast<std::make_unsigned_t<P>>(p)));
  }
};

/// Type-erased view of a valid/ready/payload channel.
class ChannelBase : public Committable {
 public:
  ChannelBase(std::string name, unsigned data_bytes)
      : name_(std::move(name)), data_bytes_(data_bytes) {}

  const std::string& name() const { return name_; }
  unsigned data_bytes() const { return data_bytes_; }

  virtual bool valid() const = 0;
  virtual bool ready() const = 0;
  bool fired() const { return valid() && ready(); }

  virtual void describe_payload(std::vector<TraceField>& out) const = 0;
  virtual void sample_payload(std::vector<BitValue>& out) const = 0;

 private:
  std::string name_;
  unsigned data_bytes_;
};

/// A valid/ready channel. The producer drives valid and payload, the consumer
/// drives ready; all three are registered.
template <class P>
class Channel final : public ChannelBase {
 public:
  using Payload = P;

  Channel(std::string name, unsigned data_bytes) : ChannelBase(std::move(name), data_bytes) {}

  bool valid() const override { return valid_.get(); }
  bool ready() const override { return ready_.get(); }
  const P& payload() const { return payload_.get(); }

  void set_valid(bool v) { valid_.set(v); }
  void set_ready(bool r) { ready_.set(r); }
  void set_payload(const P& p) { payload_.set(p); }
  void drive(bool v, const P& p) {
    valid_.set(v);
    if (v) payload_.set(p);
  }

  bool pending_valid() const { return valid_.pending(); }
  bool pending_ready() const { return ready_.pending(); }

  void commit() override {
    valid_.commit();
    ready_.commit();
    payload_.commit();
  }

  void describe_payload(std::vector<TraceField>& out) const override {
    PayloadTrace<P>::describe(out, data_bytes());
  }
  void sample_payload(std::vector<BitValue>& out) const override {
    PayloadTrace<P>::sample(payload(), out, data_bytes());
  }

 private:
  Wire<bool> valid_{false};
  Wire<bool> ready_{false};
  Wire<P> payload_{};
};

}  // namespace cosim
