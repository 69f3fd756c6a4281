#pragma once

#include <span>
#include <vector>

#include "miab/link_table.hpp"
#include "miab/radio.hpp"

namespace miab::kernels {

using channel::Exec;

/// One scheduled transmission: a contiguous RB range [rb_begin, rb_end).
struct Transmission {
  NodeId tx = kNoNode;
  NodeId rx = kNoNode;
  int rb_begin = 0;
  int rb_end = 0;
  double power_re_mw = 0.0;  // transmit power per resource element
  double signal_gain = 0.0;  // linear serving-link gain tx -> rx

  int num_rbs() const { return rb_end - rb_begin; }
};

inline int rb_overlap(const Transmission& a, const Transmission& b) {
  int lo = a.rb_begin > b.rb_begin ? a.rb_begin : b.rb_begin;
  int hi = a.rb_end < b.rb_end ? a.rb_end : b.rb_end;
  return hi > lo ? hi - lo : 0;
}

/// SINR of every transmission against all others in the slot. Interferers
/// couple through element patterns only and contribute over the RBs they
/// share with the victim.
std::vector<radio::SinrSample> evaluate_sinr(std::span<const Transmission> txs,
                                             const channel::LinkTable& links, Exec exec);

/// Straight double loop kept as the reference for the parallel kernel.
std::vector<radio::SinrSample> evaluate_sinr_reference(std::span<const Transmission> txs,
                                                       const channel::LinkTable& links);

}  // namespace miab::kernels
