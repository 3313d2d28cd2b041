#include "sublin/space.hpp"

#include <algorithm>
#include <cstring>

namespace sublin {

namespace {

thread_local MeterScope* t_innermost = nullptr;
thread_local std::int64_t t_live = 0;

void bump_pass(SpaceReport& report, const char* label) {
  for (std::size_t i = 0; i < report.producers; ++i) {
    if (report.pass_counts[i].label == label ||
        std::strcmp(report.pass_counts[i].label, label) == 0) {
      ++report.pass_counts[i].passes;
      return;
    }
  }
  if (report.producers < report.pass_counts.size()) {
    report.pass_counts[report.producers++] = PassCount{label, 1};
    return;
  }
  // Table full: fold into the last slot.
  report.pass_counts.back().label = "other";
  ++report.pass_counts.back().passes;
}

}  // namespace

std::uint64_t SpaceReport::passes(std::string_view label) const {
  for (std::size_t i = 0; i < producers; ++i) {
    if (label == pass_counts[i].label) return pass_counts[i].passes;
  }
  return 0;
}

MeterScope::MeterScope(const char* label) noexcept
    : label_(label), parent_(t_innermost), base_live_(t_live) {
  t_innermost = this;
}

MeterScope::~MeterScope() { t_innermost = parent_; }

namespace meter {

void charge(std::uint64_t cells) noexcept {
  t_live += static_cast<std::int64_t>(cells);
  for (MeterScope* s = t_innermost; s != nullptr; s = s->parent_) {
    const std::int64_t above = t_live - s->base_live_;
    if (above > 0 && static_cast<std::uint64_t>(above) > s->report_.peak_aux_cells) {
      s->report_.peak_aux_cells = static_cast<std::uint64_t>(above);
    }
  }
}

void release(std::uint64_t cells) noexcept { t_live -= static_cast<std::int64_t>(cells); }

void record_pass(const char* label) noexcept {
  for (MeterScope* s = t_innermost; s != nullptr; s = s->parent_) bump_pass(s->report_, label);
}

void tick(std::uint64_t ops) noexcept {
  for (MeterScope* s = t_innermost; s != nullptr; s = s->parent_) s->report_.wall_ops += ops;
}

std::int64_t live_cells() noexcept { return t_live; }

}  // namespace meter

}  // namespace sublin
