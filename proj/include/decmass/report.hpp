#pragma once

#include "decmass/constraints.hpp"
#include "decmass/datasets.hpp"
#include "decmass/mass.hpp"

namespace decmass {
namespace report {

using json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

json to_json(const constraints::DecReport& r);
json to_json(const constraints::DecayAudit& a);
json to_json(const mass::Extrapolation& e);
json to_json(const mass::FlatMassReport& r);
json to_json(const mass::HypMassReport& r);
json to_json(const mass::EinsteinCrosscheck& r);
json to_json(const mass::InvarianceReport& r);
json to_json(const mass::MassInequalityReport& r);

/// Envelope: tool version, command, descriptor echo, payload, timing.
/// The payload subtree is deterministic for fixed descriptor and seeds;
/// timing lives outside it.
json envelope(const std::string& command, const json& descriptor,
              const json& payload, double wall_ms);

/// Convergence table as CSV: r, flux_E, flux_corner, flux_P_1..., extrapolant.
std::string mass_csv(const mass::FlatMassReport& r);
/// Hyperbolic analogue: indexed columns per basis element.
std::string mass_csv(const mass::HypMassReport& r);

}  // namespace report
}  // namespace decmass
