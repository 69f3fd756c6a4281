#pragma once

#include <string_view>

// Brute-force restatement of the 38.901 path-loss and LOS tables, kept apart
// from the channel module and written from the tables directly. Used only
// to cross-check the production code.
namespace miab::oracle {

/// scenario: "UMa", "UMi" or "InH". Distances in m, fc in GHz. No clamping.
double path_loss_db(std::string_view scenario, bool los, double d2d, double h_bs, double h_ut,
                    double fc_ghz);

double los_probability(std::string_view scenario, double d2d, double h_ut);

}  // namespace miab::oracle
