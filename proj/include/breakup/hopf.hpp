#pragma once

#include <optional>

#include "breakup/profile.hpp"

namespace breakup {

struct HopfSample {
  double x = 0.0;
  double t = 0.0;
  double u = 0.0;
  double ux = 0.0;
  double foot = 0.0;
};

/// Characteristic solver for u_t + 6 u u_x = 0, valid for 0 <= t <= t_c.
/// Keeps the last foot point as a warm start; one instance per scan.
class CharacteristicSolver {
 public:
  CharacteristicSolver(const InitialProfile& profile, const CatastrophePoint& point);
  HopfSample solve(double x, double t);

 private:
  const InitialProfile* profile_;
  CatastrophePoint point_;
  std::optional<double> last_foot_;
};

HopfSample solve_characteristic(const InitialProfile& profile,
                                const CatastrophePoint& point, double x, double t);

}  // namespace breakup
