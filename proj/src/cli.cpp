#include "slabxrt/cli.hpp"

#include <cmath>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "slabxrt/io.hpp"

namespace slabxrt {

namespace {

struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

void emit(const RunConfig& config, const std::string& text, std::ostream& out) {
  if (config.out_path.empty()) {
    out << text;
  } else {
    write_file_atomic(config.out_path, text);
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

FourierTensorField load_field(const RunConfig& config) {
  if (config.field_path.empty()) throw PreconditionError("--field is required");
  return field_from_json(read_json_file(config.field_path));
}

std::vector<std::vector<double>> sample_directions(const RunConfig& config, int n) {
  if (!config.b.empty()) {
    if (static_cast<int>(config.b.size()) != n) {
      throw PreconditionError("--b has " + std::to_string(config.b.size()) + " entries, field has n = " + std::to_string(n));
    }
    return {config.b};
  }
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  std::vector<std::vector<double>> bs(32, std::vector<double>(n));
  for (auto& b : bs)
    for (double& c : b) c = unif(rng);
  return bs;
}

double sampled_max_abs(const FourierTensorField& f, const std::vector<std::vector<double>>& bs, int grid) {
  double worst = 0.0;
  for (const auto& b : bs) worst = std::max(worst, max_abs(xray_sinogram(f, b, grid)));
  return worst;
}

int cmd_forward(const RunConfig& config, std::ostream& out) {
  const FourierTensorField f = load_field(config);
  if (static_cast<int>(config.b.size()) != f.n()) {
    throw PreconditionError("--b has " + std::to_string(config.b.size()) + " entries, field has n = " + std::to_string(f.n()));
  }
  Sinogram s;
  if (config.method == "fourier") {
    s = xray_sinogram(f, config.b, config.a_grid);
  } else if (config.method == "quadrature") {
    const int nodes = config.quad_nodes > 0 ? config.quad_nodes : default_quadrature_nodes(f, config.b);
    s = quadrature_sinogram(f, config.b, config.a_grid, nodes);
  } else {
    throw PreconditionError("--method must be fourier or quadrature");
  }
  emit(config, sinogram_csv(s), out);
  if (!config.out_path.empty()) write_file_atomic(config.out_path + ".json", dump(sinogram_sidecar(s, f.m())));
  return kExitOk;
}

std::optional<CoveringSpec> load_covering(const RunConfig& config) {
  if (config.covering_path.empty()) return std::nullopt;
  return covering_from_json(read_json_file(config.covering_path));
}

int cmd_decompose(const RunConfig& config, std::ostream& out) {
  const FourierTensorField f = load_field(config);
  const auto covering = load_covering(config);
  const Decomposition d = covering ? decompose_twisted(f, *covering, config.tol) : decompose(f, config.tol);
  emit(config, dump(decomposition_to_json(d, stability_constant(f.n(), f.m()))), out);
  return kExitOk;
}

int cmd_verify(const RunConfig& config, std::ostream& out) {
  const FourierTensorField f = load_field(config);
  const auto covering = load_covering(config);
  const double scale = config.tol * sobolev_norm(f, 0.0);
  Decomposition d;
  bool in_kernel = false;
  if (covering) {
    d = decompose_twisted(f, *covering, config.tol);
    in_kernel = d.residual_norm() <= scale && d.boundary_defect <= scale;
  } else {
    KernelVerdict v = is_in_kernel(f, config.tol);
    d = std::move(v.certificate);
    in_kernel = v.in_kernel;
  }
  json report = {{"in_kernel", in_kernel},
                 {"residual_norm", d.residual_norm()},
                 {"boundary_defect", d.boundary_defect},
                 {"sampled_max_abs_If", sampled_max_abs(f, sample_directions(config, f.n()), config.a_grid)}};
  emit(config, dump(report), out);
  return kExitOk;
}

int cmd_mobius_demo(const RunConfig& config, std::ostream& out) {
  if (config.m < 0) throw PreconditionError("--m must be >= 0");
  if (config.band < 1) throw PreconditionError("--band must be >= 1");
  const CoveringSpec spec = mobius_spec();
  const KernelSample sample = random_kernel_element(1, config.m, config.band, config.band, config.seed);
  const FourierTensorField f = deck_average(sample.f, spec);
  const Decomposition d = decompose_twisted(f, spec, config.tol);
  const double scale = config.tol * sobolev_norm(f, 0.0);
  const bool in_kernel = d.residual_norm() <= scale && d.boundary_defect <= scale;

  // h(x; v, w) = h(1 - x; -v, w) on the cover.
  double symmetry_defect = 0.0;
  const std::vector<std::vector<double>> dirs = {{1.0, 0.0}, {0.0, 1.0}, {0.6, -0.8}};
  for (int i = 0; i <= 64; ++i) {
    const double x = i / 64.0;
    for (const auto& u : dirs) {
      const std::vector<double> flipped = {-u[0], u[1]};
      symmetry_defect = std::max(symmetry_defect, std::abs(d.h.eval(x, u) - d.h.eval(1.0 - x, flipped)));
    }
  }
  const int grid = std::max(config.a_grid, 2 * f.k_band() + 1);
  json report = {{"covering", covering_to_json(spec)},
                 {"field", field_to_json(f)},
                 {"in_kernel", in_kernel},
                 {"g_invariant", is_invariant(d.g, spec, 1e-9)},
                 {"h_symmetry_defect", symmetry_defect},
                 {"sampled_max_abs_If", sampled_max_abs(f, sample_directions(config, 1), grid)},
                 {"decomposition", decomposition_to_json(d, stability_constant(1, f.m()))}};
  emit(config, dump(report), out);
  return kExitOk;
}

int cmd_constants(const RunConfig& config, std::ostream& out) {
  if (config.n_lo < 0 || config.n_hi < config.n_lo || config.m_lo < 0 || config.m_hi < config.m_lo) {
    throw PreconditionError("--n and --m must be non-negative ranges lo[:hi]");
  }
  json rows = json::array();
  for (int n = config.n_lo; n <= config.n_hi; ++n) {
    for (int m = config.m_lo; m <= config.m_hi; ++m) {
      json row = {{"n", n}, {"m", m}, {"C_g", stability_constant(n, m)}};
      row["sigma_min"] = m >= 1 ? json(mu_min_singular(n, m)) : json(nullptr);
      rows.push_back(row);
    }
  }
  emit(config, dump({{"constants", rows}}), out);
  return kExitOk;
}

void check_config(const RunConfig& config) {
  if (!(config.tol > 0.0)) throw PreconditionError("--tol must be > 0");
  if (config.a_grid < 2) throw PreconditionError("--a-grid must be >= 2");
  if (config.quad_nodes != 0 && config.quad_nodes < 2) throw PreconditionError("--quad-nodes must be >= 2");
}

std::pair<int, int> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) {
      const int v = std::stoi(text);
      return {v, v};
    }
    return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw CLI::ValidationError("range", "expected an integer or lo:hi, got '" + text + "'");
  }
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    check_config(config);
    switch (config.subcommand) {
      case Subcommand::forward: return cmd_forward(config, out);
      case Subcommand::decompose: return cmd_decompose(config, out);
      case Subcommand::verify: return cmd_verify(config, out);
      case Subcommand::mobius_demo: return cmd_mobius_demo(config, out);
      case Subcommand::constants: return cmd_constants(config, out);
    }
  } catch (const ParseError& e) {
    err << "parse error at " << e.what() << "\n";
    return kExitParseError;
  } catch (const std::invalid_argument& e) {
    err << "precondition violated: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitPrecondition;
  }
  return kExitOk;
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"X-ray transform and kernel decomposition of tensor fields on periodic slabs"};
  app.require_subcommand(1);
  RunConfig config;
  std::string n_range = "1", m_range = "1";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol", config.tol, "Relative tolerance");
    sub->add_option("--seed", config.seed, "Random seed");
    sub->add_option("--out", config.out_path, "Output path (stdout if omitted)");
  };
  auto add_field = [&](CLI::App* sub) {
    sub->add_option("--field", config.field_path, "Field JSON file")->required();
    sub->add_option("--covering", config.covering_path, "Covering JSON file (twisted slab)");
  };
  auto add_sampling = [&](CLI::App* sub) {
    sub->add_option("--b", config.b, "Geodesic direction b (comma separated)")->delimiter(',');
    sub->add_option("--a-grid", config.a_grid, "Uniform a-grid size per dimension");
  };

  CLI::App* forward = app.add_subcommand("forward", "Sample I f(., b) on a uniform grid");
  add_field(forward);
  add_sampling(forward);
  add_common(forward);
  forward->add_option("--quad-nodes", config.quad_nodes, "Quadrature nodes (0 = automatic)");
  forward->add_option("--method", config.method, "fourier or quadrature");

  CLI::App* decompose_cmd = app.add_subcommand("decompose", "Write the kernel decomposition f = pi*h + dg + residual");
  add_field(decompose_cmd);
  add_common(decompose_cmd);

  CLI::App* verify = app.add_subcommand("verify", "Decide kernel membership and sample the transform");
  add_field(verify);
  add_sampling(verify);
  add_common(verify);

  CLI::App* mobius = app.add_subcommand("mobius-demo", "Random kernel element on the Moebius strip with certificate");
  add_sampling(mobius);
  add_common(mobius);
  mobius->add_option("--m", config.m, "Tensor order");
  mobius->add_option("--band", config.band, "Band limit J = K");

  CLI::App* constants = app.add_subcommand("constants", "Stability constants C_g(n, m)");
  constants->add_option("--n", n_range, "n or lo:hi");
  constants->add_option("--m", m_range, "m or lo:hi");
  add_common(constants);

  try {
    app.parse(argc, argv);
    if (constants->parsed()) {
      std::tie(config.n_lo, config.n_hi) = parse_range(n_range);
      std::tie(config.m_lo, config.m_hi) = parse_range(m_range);
    }
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitParseError;
  }

  if (forward->parsed()) config.subcommand = Subcommand::forward;
  else if (decompose_cmd->parsed()) config.subcommand = Subcommand::decompose;
  else if (verify->parsed()) config.subcommand = Subcommand::verify;
  else if (mobius->parsed()) config.subcommand = Subcommand::mobius_demo;
  else config.subcommand = Subcommand::constants;
  return run(config, out, err);
}

}  // namespace slabxrt
