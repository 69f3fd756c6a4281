#include "miab/kernels.hpp"

namespace miab::kernels {

namespace {

radio::SinrSample victim_sinr(std::size_t i, std::span<const Transmission> txs,
                              const channel::LinkTable& links) {
  const auto& v = txs[i];
  const int n_sc = v.num_rbs() * kSubcarriersPerRb;
  double interference = 0.0;
  for (std::size_t j = 0; j < txs.size(); ++j) {
    const auto& a = txs[j];
    if (j == i || a.tx == v.tx || a.tx == v.rx) continue;
    const int ov = rb_overlap(v, a);
    if (ov == 0) continue;
    interference += a.power_re_mw * links.coupling(a.tx, v.rx) * (ov * kSubcarriersPerRb);
  }
  const double signal = v.power_re_mw * v.signal_gain * n_sc;
  return radio::make_sinr(signal, interference, db_to_linear(radio::noise_dbm(n_sc)));
}

}  // namespace

std::vector<radio::SinrSample> evaluate_sinr(std::span<const Transmission> txs,
                                             const channel::LinkTable& links, Exec exec) {
  std::vector<radio::SinrSample> out(txs.size());
  const auto n = static_cast<std::ptrdiff_t>(txs.size());
  if (exec == Exec::Serial) {
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = victim_sinr(i, txs, links);
  } else {
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = victim_sinr(i, txs, links);
  }
  return out;
}

std::vector<radio::SinrSample> evaluate_sinr_reference(std::span<const Transmission> txs,
                                                       const channel::LinkTable& links) {
  std::vector<radio::SinrSample> out;
  out.reserve(txs.size());
  for (const auto& v : txs) {
    double interference = 0.0;
    for (const auto& a : txs) {
      if (&a == &v || a.tx == v.tx || a.tx == v.rx) continue;
      for (int rb = v.rb_begin; rb < v.rb_end; ++rb) {
        if (rb < a.rb_begin || rb >= a.rb_end) continue;
        interference += a.power_re_mw * links.coupling(a.tx, v.rx) * kSubcarriersPerRb;
      }
    }
    const int n_sc = v.num_rbs() * kSubcarriersPerRb;
    out.push_back(radio::make_sinr(v.power_re_mw * v.signal_gain * n_sc, interference,
                                   db_to_linear(radio::noise_dbm(n_sc))));
  }
  return out;
}

}  // namespace miab::kernels
