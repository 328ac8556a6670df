#pragma once

#include <json.hpp>

#include "decmass/models.hpp"

namespace decmass {
namespace data {

using json = nlohmann::ordered_json;
using models::InitialDataSet;

// Built-in example families:
//   flat-trivial       (delta, 0)
//   schwarzschild      g = (1 + m/2r)^4 delta, h = 0           [mass]
//   bowen-york         g = delta, h = BY extrinsic data, n = 3 [momentum]
//   conformal-bump     g = (1 + phi) delta, h = 0              [amplitude,...]
//   hyperbolic-trivial g = b, h = 0
//   ads-schwarzschild  g = dr^2/(1+r^2-2m r^{2-n}) + r^2 h0    [mass]
//   gauge-perturbation g = b + L_zeta b, h = 0                 [gauge params]
//   custom-grid        trilinearly interpolated grid data (n = 3)

struct DatasetDescriptor {
  std::string example = "flat-trivial";
  int n = 3;
  models::Model model = models::Model::Flat;
  double r0 = 1.0;
  double decay_exponent = 1.0;
  uint64_t seed = 0;
  json params = json::object();
  std::string grid_file;

  double param(const std::string& key, double fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->get<double>();
  }
  Vec vec_param(const std::string& key, const Vec& fallback) const {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    Vec v(it->size());
    for (size_t i = 0; i < it->size(); ++i) v(i) = (*it)[i].get<double>();
    return v;
  }
};

/// Default descriptor for a named example (parameter ranges validated).
DatasetDescriptor default_descriptor(const std::string& example, int n = 3);

InitialDataSet build_dataset(const DatasetDescriptor& d);

json descriptor_to_json(const DatasetDescriptor& d);
DatasetDescriptor descriptor_from_json(const json& j);
void write_dataset(const std::string& path, const DatasetDescriptor& d);
DatasetDescriptor load_dataset(const std::string& path);

/// Write the custom-grid pair (header json + raw little-endian float64 file)
/// by sampling another dataset on a regular grid; returns the header path.
std::string write_grid_from(const InitialDataSet& src, const std::string& stem,
                            const std::array<int, 3>& dims, const Vec& origin,
                            const Vec& spacing);

// Seeded smooth test fields (sums of Gaussian bumps with analytic
// derivatives); used by the verification suites and the test oracles.
ScalarField random_bump_scalar(int n, uint64_t seed, double amplitude = 0.1);
VectorField random_bump_vector(int n, uint64_t seed, double amplitude = 0.1,
                               bool boundary_tangent = false);
SymTensorField random_bump_sym(int n, uint64_t seed, double amplitude = 0.1);

}  // namespace data
}  // namespace decmass
