// decmass: constraint/DEC audits, energy-momentum computation and identity
// verification for initial data sets on half-space charts.
//
// Exit codes: 0 pass, 1 checked condition violated, 2 usage error,
// 3 numerical nonconvergence.

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>

#include "decmass/report.hpp"
#include "decmass/verify.hpp"

namespace dm = decmass;
using dm::data::json;

namespace {

double wall_ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    out << j.dump(2) << "\n";
  }
}

int cmd_generate(const std::string& example, int n, double r0, double decay,
                 uint64_t seed, const std::string& params_str,
                 const std::string& grid_source, const std::string& coords,
                 const std::string& out_path) {
  dm::data::DatasetDescriptor d = dm::data::default_descriptor(example, n);
  if (coords == "ball") {
    if (example != "hyperbolic-trivial")
      throw dm::InputError(
          "--model-coords ball applies to the hyperbolic-trivial example; "
          "built-in curved data lives in the polar chart");
    d.model = dm::models::Model::HyperbolicBall;
    d.r0 = 0.1;
  }
  if (r0 > 0) d.r0 = r0;
  if (decay > 0) d.decay_exponent = decay;
  d.seed = seed;
  if (!params_str.empty()) {
    const json overrides = json::parse(params_str);
    for (auto it = overrides.begin(); it != overrides.end(); ++it)
      d.params[it.key()] = it.value();
  }
  if (example == "custom-grid") {
    // sample a named source dataset onto a grid next to the output file
    std::string src_name = grid_source.empty() ? "flat-trivial" : grid_source;
    const auto src =
        dm::data::build_dataset(dm::data::default_descriptor(src_name, 3));
    dm::Vec origin(3), spacing(3);
    origin << -4.0, -4.0, 0.0;
    spacing << 0.5, 0.5, 0.5;
    const std::string stem =
        out_path.empty() ? "custom" : out_path.substr(0, out_path.rfind('.'));
    d.grid_file = dm::data::write_grid_from(src, stem, {17, 17, 9}, origin, spacing);
  }
  dm::data::build_dataset(d);  // validate parameters before writing
  dm::data::write_dataset(out_path.empty() ? example + ".json" : out_path, d);
  return 0;
}

int cmd_audit(const std::string& path, const std::string& box, int per_axis,
              double step, double tol, const std::string& out_path) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto desc = dm::data::load_dataset(path);
  const auto ds = dm::data::build_dataset(desc);
  const int n = ds.domain.n;
  dm::Vec lo, hi;
  if (!box.empty()) {
    const auto vals = parse_list(box);
    if (vals.size() != 2) throw dm::InputError("--box expects \"lo,hi\"");
    lo = dm::Vec::Constant(n, vals[0]);
    hi = dm::Vec::Constant(n, vals[1]);
  } else {
    const double w = ds.domain.model == dm::models::Model::HyperbolicBall
                         ? 0.5
                         : 3.0 * ds.domain.r0;
    lo = dm::Vec::Constant(n, -w);
    hi = dm::Vec::Constant(n, w);
  }
  lo(n - 1) = 0.0;
  std::vector<dm::Vec> interior, boundary;
  dm::constraints::box_samples(ds.domain, lo, hi, per_axis, &interior, &boundary);
  dm::FdOptions opt;
  opt.step = step;
  const auto dec = dm::constraints::check_dec(ds, interior, boundary, tol, opt);
  std::vector<double> radii;
  for (double r = 2.0 * ds.domain.r0 + 8.0; radii.size() < 4; r *= 2.0)
    radii.push_back(r);
  dm::constraints::DecayAudit audit;
  bool audit_ok = true;
  if (ds.domain.model != dm::models::Model::HyperbolicBall) {
    audit = dm::constraints::decay_audit(ds, radii, opt);
    audit_ok = audit.pass();
  }
  json payload;
  payload["dec"] = dm::report::to_json(dec);
  payload["decay"] = dm::report::to_json(audit);
  // truncated gravitational Hamiltonian over the sample box, lapse-shift
  // (1, 0); Riemann sum on the audit grid, interior + boundary parts
  {
    const auto V1 = dm::constant_scalar(1.0);
    const auto W0 = dm::zero_vector_field();
    double hin = 0, hbd = 0;
    double cell = 1.0, face = 1.0;
    for (int i = 0; i < n; ++i)
      cell *= (hi(i) - lo(i)) / std::max(per_axis - 1, 1);
    for (int i = 0; i < n - 1; ++i)
      face *= (hi(i) - lo(i)) / std::max(per_axis - 1, 1);
    for (const auto& p : interior)
      hin += dm::constraints::hamiltonian_density(ds, V1, W0, p, false, opt) * cell;
    for (const auto& p : boundary)
      hbd += dm::constraints::hamiltonian_density(ds, V1, W0, p, true, opt) * face;
    payload["truncated_hamiltonian"] = {
        {"interior", hin},
        {"boundary", hbd},
        {"half_total", hin + hbd},
        {"note",
         "Riemann sum over the sample box only; asymptotic completion is not "
         "included"}};
  }
  emit(dm::report::envelope("audit", dm::data::descriptor_to_json(desc), payload,
                            wall_ms_since(t0)),
       out_path);
  return dec.pass() && audit_ok ? 0 : 1;
}

int cmd_mass(const std::string& path, const std::string& radii_str,
             const std::string& orders_str, double power, double step,
             const std::string& format, const std::string& out_path,
             const std::string& coords) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto desc = dm::data::load_dataset(path);
  const auto ds = dm::data::build_dataset(desc);
  const int n = ds.domain.n;
  const double thresh = ds.domain.hyperbolic() ? 0.5 * n : 0.5 * (n - 2);
  if (ds.decay_exponent <= thresh)
    throw dm::InputError("decay exponent below the model threshold");
  if (coords == "ball")
    throw dm::InputError("mass quadrature runs in polar coordinates");
  dm::mass::MassOptions opt;
  if (!radii_str.empty()) opt.radii = parse_list(radii_str);
  if (!orders_str.empty()) {
    const auto o = parse_list(orders_str);
    if (o.size() != 2) throw dm::InputError("--orders expects \"polar,azimuth\"");
    opt.order_polar = static_cast<int>(o[0]);
    opt.order_azimuth = static_cast<int>(o[1]);
  }
  opt.extrap_power = power;
  opt.fd.step = step;
  json payload;
  std::string csv;
  if (ds.domain.model == dm::models::Model::Flat) {
    const auto rep = dm::mass::energy_momentum_flat(ds, opt);
    const auto ineq = dm::mass::mass_inequality_report(ds, opt);
    payload["mass"] = dm::report::to_json(rep);
    payload["inequality"] = dm::report::to_json(ineq);
    csv = dm::report::mass_csv(rep);
  } else {
    const auto rep = dm::mass::energy_momentum_pair(ds, opt);
    const auto ineq = dm::mass::mass_inequality_report(ds, opt);
    payload["mass"] = dm::report::to_json(rep);
    payload["inequality"] = dm::report::to_json(ineq);
    csv = dm::report::mass_csv(rep);
  }
  if (format == "csv") {
    if (out_path.empty())
      std::cout << csv;
    else {
      std::ofstream out(out_path);
      out << csv;
    }
  } else {
    emit(dm::report::envelope("mass", dm::data::descriptor_to_json(desc), payload,
                              wall_ms_since(t0)),
         out_path);
    if (!out_path.empty()) {
      std::ofstream out(out_path + ".csv");
      out << csv;
    }
  }
  return 0;
}

int cmd_verify(const std::string& suite, uint64_t seed, double step,
               const std::string& out_path) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto names = dm::verify::suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end()) {
    std::cerr << "unknown suite: " << suite << "\navailable:";
    for (const auto& s : names) std::cerr << " " << s;
    std::cerr << "\n";
    return 2;
  }
  const auto result = dm::verify::run_suite(suite, seed, step);
  json desc;
  desc["suite"] = suite;
  desc["seed"] = seed;
  desc["step"] = step;
  emit(dm::report::envelope("verify", desc, dm::verify::to_json(result),
                            wall_ms_since(t0)),
       out_path);
  return result.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "decmass: dominant-energy-condition audits and asymptotic "
      "energy-momentum for initial data with noncompact boundary"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "write a dataset file");
  std::string example = "flat-trivial", out_path, params_str, grid_source;
  int n = 3;
  double r0 = 0, decay = 0, step = 0, tol = 1e-9, power = 0;
  uint64_t seed = 0;
  gen->add_option("example", example, "example family")->required();
  gen->add_option("--n", n, "dimension");
  gen->add_option("--r0", r0, "inner radius of the asymptotic region");
  gen->add_option("--decay", decay, "decay exponent tau/kappa");
  gen->add_option("--seed", seed, "seed echoed into reports");
  gen->add_option("--params", params_str, "JSON object of parameters");
  gen->add_option("--grid-source", grid_source,
                  "custom-grid: example to sample onto the grid");
  std::string gen_coords = "polar";
  gen->add_option("--model-coords", gen_coords,
                  "hyperbolic chart for hyperbolic-trivial: polar|ball")
      ->check(CLI::IsMember({"polar", "ball"}));
  gen->add_option("-o,--out", out_path, "output file");

  // audit
  auto* audit = app.add_subcommand("audit", "DEC margins and decay audit");
  std::string dataset_path, box;
  int per_axis = 4;
  audit->add_option("dataset", dataset_path, "dataset JSON")->required();
  audit->add_option("--box", box, "sample box \"lo,hi\"");
  audit->add_option("--grid", per_axis, "samples per axis");
  audit->add_option("--step", step, "FD step (0 = auto)");
  audit->add_option("--tol", tol, "DEC pass tolerance");
  audit->add_option("-o,--out", out_path, "report file");

  // mass
  auto* massc = app.add_subcommand("mass", "energy-momentum computation");
  std::string radii_str, orders_str, format = "json", coords = "polar";
  massc->add_option("dataset", dataset_path, "dataset JSON")->required();
  massc->add_option("--radii", radii_str, "comma list of radii");
  massc->add_option("--orders", orders_str, "quadrature orders \"polar,azimuth\"");
  massc->add_option("--extrap-power", power, "extrapolation power (0 = default)");
  massc->add_option("--step", step, "FD step (0 = auto)");
  massc->add_option("--format", format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  massc->add_option("--model-coords", coords, "polar|ball")
      ->check(CLI::IsMember({"polar", "ball"}));
  massc->add_option("-o,--out", out_path, "report file");

  // verify
  auto* ver = app.add_subcommand("verify", "identity verification suites");
  std::string suite;
  double vstep = 1e-3;
  uint64_t vseed = 1;
  ver->add_option("suite", suite, "suite name")->required();
  ver->add_option("--seed", vseed, "random seed");
  ver->add_option("--step", vstep, "FD base step for order checks");
  ver->add_option("-o,--out", out_path, "report file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed())
      return cmd_generate(example, n, r0, decay, seed, params_str, grid_source,
                          gen_coords, out_path);
    if (audit->parsed())
      return cmd_audit(dataset_path, box, per_axis, step, tol, out_path);
    if (massc->parsed())
      return cmd_mass(dataset_path, radii_str, orders_str, power, step, format,
                      out_path, coords);
    if (ver->parsed()) return cmd_verify(suite, vseed, vstep, out_path);
  } catch (const dm::ConvergenceError& e) {
    std::cerr << "nonconvergence: " << e.what() << "\n";
    return 3;
  } catch (const dm::InputError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const dm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
