#pragma once

// Auxiliary-space accounting.
//
// Algorithms treat the input Formula as read-only and exempt. Everything
// else they hold is charged, in machine words ("cells"), to the innermost
// active MeterScope on the calling thread: containers through AuxAllocator,
// scalar working state through ScopedCells. Scopes nest; a scope's peak is
// the maximum of the cells that were live above its entry level, so an
// outer scope sees the sum of its own state and whatever an inner scope
// held at the same time.

#include <array>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <new>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

namespace sublin {

inline constexpr std::size_t kCellBytes = sizeof(void*);
inline constexpr std::size_t kMaxProducerLabels = 24;

constexpr std::uint64_t cells_for_bytes(std::size_t bytes) {
  return (bytes + kCellBytes - 1) / kCellBytes;
}

struct PassCount {
  const char* label = nullptr;
  std::uint64_t passes = 0;
};

/// Measured resource usage of a metered computation.
struct SpaceReport {
  std::uint64_t peak_aux_cells = 0;
  std::array<PassCount, kMaxProducerLabels> pass_counts{};
  std::size_t producers = 0;
  std::uint64_t wall_ops = 0;

  /// Number of scans of the stream labelled `label` (0 if never scanned).
  std::uint64_t passes(std::string_view label) const;
};

namespace meter {

void charge(std::uint64_t cells) noexcept;
void release(std::uint64_t cells) noexcept;
void record_pass(const char* label) noexcept;
void tick(std::uint64_t ops = 1) noexcept;

/// Cells currently live on this thread, across all scopes.
std::int64_t live_cells() noexcept;

}  // namespace meter

/// RAII measurement scope. Must be destroyed in LIFO order on its thread.
class MeterScope {
 public:
  explicit MeterScope(const char* label) noexcept;
  ~MeterScope();
  MeterScope(const MeterScope&) = delete;
  MeterScope& operator=(const MeterScope&) = delete;

  const char* label() const { return label_; }
  SpaceReport report() const { return report_; }

 private:
  friend void meter::charge(std::uint64_t) noexcept;
  friend void meter::record_pass(const char*) noexcept;
  friend void meter::tick(std::uint64_t) noexcept;

  const char* label_;
  MeterScope* parent_;
  std::int64_t base_live_;
  SpaceReport report_;
};

/// Runs `body` inside a fresh MeterScope and returns its result together
/// with the scope's report.
template <class Body>
auto meter_scope(const char* label, Body&& body) {
  MeterScope scope(label);
  if constexpr (std::is_void_v<std::invoke_result_t<Body>>) {
    std::forward<Body>(body)();
    return scope.report();
  } else {
    auto result = std::forward<Body>(body)();
    return std::pair{std::move(result), scope.report()};
  }
}

/// Charges a fixed number of cells for the lifetime of the object; used for
/// scalar working state (counters, indices) that does not live in a container.
class ScopedCells {
 public:
  explicit ScopedCells(std::uint64_t cells) noexcept : cells_(cells) { meter::charge(cells_); }
  ~ScopedCells() { meter::release(cells_); }
  ScopedCells(const ScopedCells&) = delete;
  ScopedCells& operator=(const ScopedCells&) = delete;

 private:
  std::uint64_t cells_;
};

/// malloc-backed allocator charging the active meter.
template <class T>
struct AuxAllocator {
  using value_type = T;

  AuxAllocator() noexcept = default;
  template <class U>
  AuxAllocator(const AuxAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    void* p = std::malloc(n * sizeof(T));
    if (p == nullptr) throw std::bad_alloc();
    meter::charge(cells_for_bytes(n * sizeof(T)));
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t n) noexcept {
    meter::release(cells_for_bytes(n * sizeof(T)));
    std::free(p);
  }

  template <class U>
  bool operator==(const AuxAllocator<U>&) const noexcept { return true; }
};

/// malloc-backed allocator for algorithm output (never charged: output is a
/// write-only stream in the space model).
template <class T>
struct OutputAllocator {
  using value_type = T;

  OutputAllocator() noexcept = default;
  template <class U>
  OutputAllocator(const OutputAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    void* p = std::malloc(n * sizeof(T));
    if (p == nullptr) throw std::bad_alloc();
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t) noexcept { std::free(p); }

  template <class U>
  bool operator==(const OutputAllocator<U>&) const noexcept { return true; }
};

template <class T>
using aux_vector = std::vector<T, AuxAllocator<T>>;

}  // namespace sublin
