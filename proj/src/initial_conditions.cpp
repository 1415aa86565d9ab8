#include "richards4/initial_conditions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace richards4 {

std::string to_string(InitialCondition::Kind kind) {
  switch (kind) {
    case InitialCondition::Kind::Zero: return "zero";
    case InitialCondition::Kind::GaussianLens: return "gaussian_lens";
    case InitialCondition::Kind::Infiltration: return "infiltration";
    case InitialCondition::Kind::RandomSmooth: return "random_smooth";
    case InitialCondition::Kind::Custom: return "custom";
  }
  return "unknown";
}

double clamped_window(double z, double length) {
  const double x = z / length;
  return 16.0 * x * x * (1.0 - x) * (1.0 - x);
}

namespace {

double interpolate_table(const std::vector<std::pair<double, double>>& table, double z) {
  if (table.empty()) return 0.0;
  if (z <= table.front().first) return table.front().second;
  if (z >= table.back().first) return table.back().second;
  const auto it = std::upper_bound(table.begin(), table.end(), z,
                                   [](double v, const auto& row) { return v < row.first; });
  const auto& [z1, u1] = *it;
  const auto& [z0, u0] = *(it - 1);
  return u0 + (u1 - u0) * (z - z0) / (z1 - z0);
}

}  // namespace

Field project_initial_condition(const InitialCondition& ic, const Column& column,
                                std::uint64_t seed) {
  const double L = column.length();
  using Kind = InitialCondition::Kind;
  switch (ic.kind) {
    case Kind::Zero:
      return Field(column);
    case Kind::GaussianLens:
      return Field::sample(column, [&](double z) {
        const double x = (z / L - ic.center) / ic.width;
        return -ic.depth * std::exp(-x * x) * clamped_window(z, L);
      });
    case Kind::Infiltration:
      return Field::sample(column, [&](double z) {
        const double a = z / (ic.width * L);
        const double b = (L - z) / (ic.width * L);
        return -ic.depth * (1.0 - std::exp(-a * a)) * (1.0 - std::exp(-b * b));
      });
    case Kind::RandomSmooth: {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> coef(-1.0, 1.0);
      double c[4];
      for (int k = 0; k < 4; ++k) c[k] = coef(rng) / ((k + 1) * (k + 1));
      c[0] = -std::abs(c[0]) - 0.5;  // keep a dominant unsaturated component
      auto shape = [&](double z) {
        double s = 0.0;
        for (int k = 0; k < 4; ++k) s += c[k] * std::sin((k + 1) * std::numbers::pi * z / L);
        return s * clamped_window(z, L);
      };
      double peak = 0.0;
      for (int i = 0; i <= 400; ++i) peak = std::max(peak, std::abs(shape(L * i / 400.0)));
      return Field::sample(column, [&](double z) { return ic.depth * shape(z) / peak; });
    }
    case Kind::Custom: {
      auto table = ic.table;
      std::sort(table.begin(), table.end());
      return Field::sample(column, [&](double z) { return interpolate_table(table, z); });
    }
  }
  return Field(column);
}

}  // namespace richards4
