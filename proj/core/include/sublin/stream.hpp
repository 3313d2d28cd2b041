#pragma once

// Restartable streams.
//
// A Stream owns no items. It owns a producer: a deterministic callable that
// re-derives the whole sequence from read-only inputs every time somebody
// scans it. Consumers that need an item twice scan twice; the meter records
// every scan as one pass of the producer, so the cost of recomputation shows
// up in the SpaceReport instead of being hidden behind a buffer.
//
// Producer contract: `producer(emit)` calls `emit(item)` for each item in
// order and stops as soon as `emit` returns false.

#include <type_traits>
#include <utility>

#include "sublin/space.hpp"

namespace sublin {

enum class StreamKind { clause, marker, vertex_level, function, assignment_bit, subformula };

template <class Item, class Producer>
class Stream {
 public:
  using item_type = Item;

  Stream(const char* label, StreamKind kind, Producer producer)
      : label_(label), kind_(kind), producer_(std::move(producer)) {}

  const char* label() const { return label_; }
  StreamKind kind() const { return kind_; }

  /// Re-executes the producer from the start. `visit(item)` may return
  /// false to stop early. Returns true if the scan ran to completion.
  template <class Visitor>
  bool scan(Visitor&& visit) const {
    meter::record_pass(label_);
    bool completed = true;
    producer_([&](const Item& item) -> bool {
      meter::tick();
      if constexpr (std::is_same_v<std::invoke_result_t<Visitor&, const Item&>, void>) {
        visit(item);
        return true;
      } else {
        if (!visit(item)) {
          completed = false;
          return false;
        }
        return true;
      }
    });
    return completed;
  }

 private:
  const char* label_;
  StreamKind kind_;
  Producer producer_;
};

template <class Item, class Producer>
Stream<Item, std::decay_t<Producer>> make_stream(const char* label, StreamKind kind,
                                                 Producer&& producer) {
  return Stream<Item, std::decay_t<Producer>>(label, kind, std::forward<Producer>(producer));
}

}  // namespace sublin
