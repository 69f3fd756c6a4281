#include "miab/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace miab::oracle {

namespace {

double lg(double x) { return std::log(x) / std::log(10.0); }

struct LosRow {
  double a, b_d, c_f;  // a + b_d log10(d3D) + c_f log10(fc)
  double b_d2, c_bp;   // second segment: b_d2 log10(d3D) - c_bp log10(d'BP^2 + dh^2)
};

struct NlosRow {
  double a, b_d, c_f, h_coef;  // a + b_d log10(d3D) + c_f log10(fc) - h_coef (hUT - 1.5)
};

}  // namespace

double path_loss_db(std::string_view sc, bool los, double d2d, double h_bs, double h_ut,
                    double fc) {
  const double c = 299792458.0;
  const double dh = h_bs - h_ut;
  const double d3d = std::sqrt(d2d * d2d + dh * dh);
  if (sc == "InH") {
    const double los_pl = 32.4 + 17.3 * lg(d3d) + 20.0 * lg(fc);
    if (los) return los_pl;
    const double nlos_pl = 38.3 * lg(d3d) + 17.30 + 24.9 * lg(fc);
    return los_pl > nlos_pl ? los_pl : nlos_pl;
  }
  LosRow lr{};
  NlosRow nr{};
  if (sc == "UMa") {
    lr = {28.0, 22.0, 20.0, 40.0, 9.0};
    nr = {13.54, 39.08, 20.0, 0.6};
  } else if (sc == "UMi") {
    lr = {32.4, 21.0, 20.0, 40.0, 9.5};
    nr = {22.4, 35.3, 21.3, 0.3};
  } else {
    throw std::invalid_argument("unknown scenario " + std::string(sc));
  }
  const double h_e = 1.0;
  const double dbp = 4.0 * (h_bs - h_e) * (h_ut - h_e) * (fc * 1.0e9) / c;
  double pl_los;
  if (d2d <= dbp)
    pl_los = lr.a + lr.b_d * lg(d3d) + lr.c_f * lg(fc);
  else
    pl_los = lr.a + lr.b_d2 * lg(d3d) + lr.c_f * lg(fc) - lr.c_bp * lg(dbp * dbp + dh * dh);
  if (los) return pl_los;
  const double pl_nlos = nr.a + nr.b_d * lg(d3d) + nr.c_f * lg(fc) - nr.h_coef * (h_ut - 1.5);
  return pl_los > pl_nlos ? pl_los : pl_nlos;
}

double los_probability(std::string_view sc, double d, double h_ut) {
  if (sc == "UMi") {
    if (d <= 18.0) return 1.0;
    return 18.0 / d + std::exp(-d / 36.0) * (1.0 - 18.0 / d);
  }
  if (sc == "UMa") {
    if (d <= 18.0) return 1.0;
    double cp = 0.0;
    if (h_ut > 13.0) cp = std::pow((h_ut - 13.0) / 10.0, 1.5);
    double first = 18.0 / d + std::exp(-d / 63.0) * (1.0 - 18.0 / d);
    double second = 1.0 + cp * (5.0 / 4.0) * (d / 100.0) * (d / 100.0) * (d / 100.0) * std::exp(-d / 150.0);
    return first * second;
  }
  if (sc == "InH") {
    if (d <= 1.2) return 1.0;
    if (d >= 6.5) return std::exp(-(d - 6.5) / 32.6) * 0.32;
    return std::exp(-(d - 1.2) / 4.7);
  }
  throw std::invalid_argument("unknown scenario " + std::string(sc));
}

}  // namespace miab::oracle
