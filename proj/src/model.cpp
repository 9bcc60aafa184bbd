#include "cavchain/model.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace cavchain {

std::string to_string(FermiSeaMode mode) {
  return mode == FermiSeaMode::ContinuumHalfFilled ? "continuum" : "discrete";
}

FermiSeaMode fermi_mode_from_string(const std::string& name) {
  if (name == "continuum") return FermiSeaMode::ContinuumHalfFilled;
  if (name == "discrete") return FermiSeaMode::DiscreteSet;
  throw std::invalid_argument("unknown fermi_mode '" + name + "' (expected 'continuum' or 'discrete')");
}

ModelParams::ModelParams(double omega0_, double t_h_, double g_, double k0_, int L_)
    : omega0(omega0_), t_h(t_h_), g(g_), k0(reduce_two_pi(k0_)), L(L_) {
  validate();
}

ModelParams ModelParams::with_g(double new_g) const {
  ModelParams p = *this;
  p.g = new_g;
  p.validate();
  return p;
}

ModelParams ModelParams::with_k0(double new_k0) const {
  ModelParams p = *this;
  p.k0 = reduce_two_pi(new_k0);
  p.validate();
  return p;
}

ModelParams ModelParams::with_L(int new_L) const {
  ModelParams p = *this;
  p.L = new_L;
  p.validate();
  return p;
}

void ModelParams::validate() const {
  if (!(omega0 > 0.0)) throw std::invalid_argument("omega0 must be positive");
  if (!(t_h >= 0.0)) throw std::invalid_argument("t_h must be nonnegative");
  if (!(g >= 0.0)) throw std::invalid_argument("g must be nonnegative");
  if (!std::isfinite(k0)) throw std::invalid_argument("k0 must be finite");
  if (L < 2) throw std::invalid_argument("L must be at least 2");
}

FermiSea fermi_coefficients(const ModelParams& params, FermiSeaMode mode) {
  params.validate();
  FermiSea sea;
  sea.mode = mode;
  sea.k0 = params.k0;
  const double Ld = static_cast<double>(params.L);

  if (mode == FermiSeaMode::ContinuumHalfFilled) {
    sea.C = Ld / M_PI * std::cos(params.k0);
    sea.S = Ld / M_PI * std::sin(params.k0);
    return sea;
  }

  // Lattice momenta 2*pi*j/L reduced to (-pi, pi].
  std::vector<double> momenta(params.L);
  for (int j = 0; j < params.L; ++j) {
    double k = kTwoPi * static_cast<double>(j) / Ld;
    if (k > M_PI) k -= kTwoPi;
    momenta[j] = k;
  }
  std::vector<int> order(params.L);
  std::iota(order.begin(), order.end(), 0);
  const double k0 = params.k0;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double da = std::fabs(reduce_pm_pi(momenta[a] - k0));
    const double db = std::fabs(reduce_pm_pi(momenta[b] - k0));
    if (da != db) return da < db;
    const double ca = std::cos(momenta[a] - k0);
    const double cb = std::cos(momenta[b] - k0);
    if (ca != cb) return ca > cb;
    return momenta[a] < momenta[b];
  });
  const int n_occ = params.L / 2;
  sea.occupied.reserve(n_occ);
  for (int i = 0; i < n_occ; ++i) sea.occupied.push_back(momenta[order[i]]);
  std::sort(sea.occupied.begin(), sea.occupied.end());
  sea.C = 0.0;
  sea.S = 0.0;
  for (double k : sea.occupied) {
    sea.C += std::cos(k);
    sea.S += std::sin(k);
  }
  return sea;
}

double landau_potential(double x, const ModelParams& params, const FermiSea& sea) {
  const double u = 2.0 * params.g / std::sqrt(static_cast<double>(params.L));
  const double ux = u * x;
  return params.omega0 * x * x -
         2.0 * params.t_h * (sea.C * std::cos(ux) - sea.S * std::sin(ux));
}

double landau_gradient(double x, const ModelParams& params, const FermiSea& sea) {
  const double u = 2.0 * params.g / std::sqrt(static_cast<double>(params.L));
  const double ux = u * x;
  return 2.0 * params.omega0 * x +
         2.0 * params.t_h * u * (sea.C * std::sin(ux) + sea.S * std::cos(ux));
}

double landau_curvature(double x, const ModelParams& params, const FermiSea& sea) {
  const double u = 2.0 * params.g / std::sqrt(static_cast<double>(params.L));
  const double ux = u * x;
  return 2.0 * params.omega0 +
         2.0 * params.t_h * u * u * (sea.C * std::cos(ux) - sea.S * std::sin(ux));
}

double mean_field_energy_surface(double X, double Y, const ModelParams& params,
                                 const FermiSea& sea) {
  const double c = params.quad_scale();
  const double cx = c * X;
  return 0.5 * params.omega0 * (X * X + Y * Y) -
         2.0 * params.t_h * (sea.C * std::cos(cx) - sea.S * std::sin(cx));
}

nlohmann::json params_to_json(const ModelParams& params, FermiSeaMode mode) {
  return nlohmann::json{{"omega0", params.omega0}, {"t_h", params.t_h},
                        {"g", params.g},           {"k0", params.k0},
                        {"L", params.L},           {"fermi_mode", to_string(mode)}};
}

std::pair<ModelParams, FermiSeaMode> params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("params must be a JSON object");
  static const std::vector<std::string> known = {"omega0", "t_h", "g", "k0", "L", "fermi_mode"};
  for (const auto& item : j.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      throw std::invalid_argument("unknown params key '" + item.key() + "'");
    }
  }
  ModelParams p;
  if (j.contains("omega0")) p.omega0 = j.at("omega0").get<double>();
  if (j.contains("t_h")) p.t_h = j.at("t_h").get<double>();
  if (j.contains("g")) p.g = j.at("g").get<double>();
  if (j.contains("k0")) p.k0 = reduce_two_pi(j.at("k0").get<double>());
  if (j.contains("L")) p.L = j.at("L").get<int>();
  p.validate();
  FermiSeaMode mode = FermiSeaMode::ContinuumHalfFilled;
  if (j.contains("fermi_mode")) mode = fermi_mode_from_string(j.at("fermi_mode").get<std::string>());
  return {p, mode};
}

}  // namespace cavchain
