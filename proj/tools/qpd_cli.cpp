// qpd: command-line front end for the phase-space distribution library.
//
// Subcommands cover the named distributions (husimi, wigner, glauber), the
// generic s-ordered transform (qpd, transform), the kernel axiom report
// (axioms), the joint-measurement distribution (naimark), Lindblad evolution
// with per-snapshot fields (dynamics), and single weak values (weakvalue).
// Exit codes are categorized; errors are emitted as JSON on stderr.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qpd/dynamics.hpp"
#include "qpd/io.hpp"
#include "qpd/naimark.hpp"
#include "qpd/states.hpp"

namespace {

using namespace qpd;

int exit_code_for(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::Config: return 2;
    case ErrorCategory::Dimension:
    case ErrorCategory::Domain: return 3;
    case ErrorCategory::Conditioning: return 4;
    case ErrorCategory::CutoffInadequacy: return 5;
    case ErrorCategory::Overflow: return 6;
    case ErrorCategory::OrthogonalSelection: return 7;
    case ErrorCategory::StepSize: return 8;
    case ErrorCategory::PositivityLoss: return 9;
    case ErrorCategory::Io: return 10;
  }
  return 1;
}

constexpr int kStrictWarningExit = 20;

struct JobConfig {
  std::string task;

  std::string backend = "ccr";  // ccr | spin
  int cutoff = 40;
  double j = 1.0;

  std::string state = "vacuum";
  std::string state_file;

  std::string grid_spec;     // "RxC"; empty = backend default
  double half_width = 5.0;   // planar grids
  double kappa = 6.0;        // planar band limit
  double s = 1.0;
  double s_from = 1.0, s_to = 0.0;

  std::string in_path, out_path, out_prefix, report_path;
  std::string spectrum_spec;  // transform: spin:J | ccr:N

  double probe_variance = 1.0;  // naimark

  double omega = 1.0, gamma = 0.2, dt = 1e-3;  // dynamics
  int steps = 1000, stride = 100;

  std::string observable = "jz";  // weakvalue
  std::string pre = "0.5,0.5", post = "1.0,1.0";

  bool strict = false;
};

std::pair<int, int> parse_grid_spec(const std::string& spec) {
  const auto x = spec.find('x');
  if (x == std::string::npos)
    throw Error(ErrorCategory::Config, "grid must be given as <rows>x<cols>");
  try {
    return {std::stoi(spec.substr(0, x)), std::stoi(spec.substr(x + 1))};
  } catch (const std::exception&) {
    throw Error(ErrorCategory::Config, "malformed grid '" + spec + "'");
  }
}

PhasePoint parse_point(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    throw Error(ErrorCategory::Config, "point must be given as a,b");
  try {
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw Error(ErrorCategory::Config, "malformed point '" + text + "'");
  }
}

bool is_spin(const JobConfig& config) { return config.backend == "spin"; }

HilbertSpec job_space(const JobConfig& config) {
  return is_spin(config) ? HilbertSpec::spin(config.j) : HilbertSpec::fock(config.cutoff);
}

std::string backend_tag(const JobConfig& config) {
  if (is_spin(config)) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "spin:%g", config.j);
    return buf;
  }
  return "ccr:" + std::to_string(config.cutoff);
}

DensityOperator load_state(const JobConfig& config) {
  if (!config.state_file.empty())
    return DensityOperator(Operator(job_space(config), read_matrix_csv(config.state_file)));
  return state_preset(job_space(config), config.state);
}

GridPtr make_grid(const JobConfig& config) {
  auto grid = std::make_shared<PhaseGrid>();
  if (is_spin(config)) {
    const SpinSystem sys(config.j);
    if (config.grid_spec.empty()) {
      *grid = sphere_quadrature(sys);
    } else {
      const auto [rows, cols] = parse_grid_spec(config.grid_spec);
      *grid = sphere_quadrature(sys, rows, cols);
    }
  } else {
    int m = 128;
    if (!config.grid_spec.empty()) {
      const auto [rows, cols] = parse_grid_spec(config.grid_spec);
      if (rows != cols) throw Error(ErrorCategory::Config, "planar grids are square");
      m = rows;
    }
    *grid = planar_grid(config.half_width, m);
  }
  return grid;
}

Operator load_observable(const JobConfig& config) {
  const std::string& name = config.observable;
  if (name.starts_with("file:"))
    return Operator(job_space(config), read_matrix_csv(name.substr(5)));
  if (is_spin(config)) {
    const SpinSystem sys(config.j);
    if (name == "jx") return spin_jx(sys);
    if (name == "jy") return spin_jy(sys);
    if (name == "jz") return spin_jz(sys);
  } else {
    const CcrSystem sys(config.cutoff);
    if (name == "q") return position(sys);
    if (name == "p") return momentum(sys);
    if (name == "n") return number_operator(sys);
  }
  throw Error(ErrorCategory::Config, "unknown observable '" + name + "'");
}

void write_field(const JobConfig& config, const QpdField& field, const std::string& path) {
  write_field_csv(path, field, backend_tag(config));
  std::cerr << "# mass=" << format_double(field.mass().real())
            << " min=" << format_double(field.values.real().minCoeff())
            << " s=" << format_double(field.s) << "\n";
}

int warning_exit(bool strict, const QpdField& field) {
  if (field.singular_warning) {
    std::cerr << "# warning: singular distribution (out-of-band energy fraction "
              << format_double(field.band_energy_fraction) << ")\n";
    if (strict) return kStrictWarningExit;
  }
  return 0;
}

int run_husimi(const JobConfig& config) {
  const DensityOperator rho = load_state(config);
  const GridPtr grid = make_grid(config);
  const QpdField field = is_spin(config) ? husimi_spin(rho, grid) : husimi_ccr(rho, grid);
  write_field(config, field, config.out_path);
  return 0;
}

int run_wigner(const JobConfig& config) {
  if (is_spin(config))
    throw Error(ErrorCategory::Config, "wigner task targets the ccr backend; use qpd --s 0 for spin");
  const QpdField field = wigner_ccr(load_state(config), make_grid(config));
  write_field(config, field, config.out_path);
  return 0;
}

int run_glauber(const JobConfig& config) {
  if (is_spin(config))
    throw Error(ErrorCategory::Config, "glauber task targets the ccr backend; use qpd --s -1 for spin");
  const QpdField field = glauber_sudarshan_ccr(load_state(config), make_grid(config), config.kappa);
  write_field(config, field, config.out_path);
  return warning_exit(config.strict, field);
}

int run_qpd(const JobConfig& config) {
  const DensityOperator rho = load_state(config);
  const GridPtr grid = make_grid(config);
  QpdField field;
  if (is_spin(config)) {
    const SpinSystem sys(config.j);
    const SpinBackend backend(sys);
    field = qpd_field(backend, *delta_spectrum(sys), grid, rho.op(), config.s);
  } else {
    const CcrBackend backend{CcrSystem(config.cutoff)};
    field = qpd_field(backend, *planar_spectrum(*grid, config.kappa), grid, rho.op(), config.s);
  }
  write_field(config, field, config.out_path);
  return warning_exit(config.strict, field);
}

int run_transform(const JobConfig& config) {
  const LoadedField loaded = read_field_csv(config.in_path);
  if (std::abs(loaded.field.s - config.s_from) > 1e-12)
    throw Error(ErrorCategory::Config, "stored field order " + format_double(loaded.field.s) +
                                           " does not match --from");
  QpdField input = loaded.field;

  SpectrumPtr spectrum;
  const std::string tag = config.spectrum_spec.empty() ? loaded.backend_tag : config.spectrum_spec;
  if (tag.starts_with("spin:")) {
    spectrum = delta_spectrum(SpinSystem(std::stod(tag.substr(5))));
  } else if (tag.starts_with("ccr")) {
    spectrum = planar_spectrum(*input.grid, config.kappa);
  } else {
    throw Error(ErrorCategory::Config, "unknown spectrum '" + tag + "'");
  }
  const QpdField out = qpd_transform_field(*spectrum, input, config.s_to);
  write_field_csv(config.out_path, out, loaded.backend_tag);
  std::cerr << "# mass=" << format_double(out.mass().real()) << " s=" << format_double(out.s)
            << "\n";
  return warning_exit(config.strict, out);
}

int run_axioms(const JobConfig& config) {
  const GridPtr grid = make_grid(config);
  std::optional<AxiomReport> report;
  if (is_spin(config)) {
    const SpinSystem sys(config.j);
    const SpinBackend backend(sys);
    const auto spectrum = delta_spectrum(sys);
    const SwKernelField plus = sw_kernel_field(backend, *spectrum, grid, config.s);
    const SwKernelField minus = sw_kernel_field(backend, *spectrum, grid, -config.s);
    report = axiom_report(backend, *spectrum, plus, minus, rotation_samples(sys, 12));
  } else {
    const CcrSystem sys(config.cutoff);
    const CcrBackend backend(sys);
    const auto spectrum = planar_spectrum(*grid, config.kappa);
    const SwKernelField plus = sw_kernel_field(backend, *spectrum, grid, config.s);
    const SwKernelField minus = sw_kernel_field(backend, *spectrum, grid, -config.s);
    std::vector<GroupElement> displacements;
    for (int i = 0; i < 12; ++i)
      displacements.push_back(displacement_element(sys, 0.6 * std::polar(1.0, kPi * i / 6.0)));
    report = axiom_report(backend, *spectrum, plus, minus, displacements);
  }
  write_report_json(config.report_path, *report);
  for (const auto& check : report->checks) {
    std::cout << check.name << " max_abs_deviation=" << format_double(check.max_abs_deviation)
              << " tolerance=" << format_double(check.tolerance)
              << (check.pass ? " pass" : " FAIL") << "\n";
  }
  return (!report->all_pass() && config.strict) ? kStrictWarningExit : 0;
}

int run_naimark(const JobConfig& config) {
  if (is_spin(config))
    throw Error(ErrorCategory::Config, "naimark task targets the ccr backend");
  const CcrSystem sys(config.cutoff);
  const DensityOperator rho = load_state(config);
  const GridPtr grid = make_grid(config);
  const QpdField field = joint_distribution(rho, gaussian_probe(sys, config.probe_variance), grid);
  write_field(config, field, config.out_path);
  if (!config.report_path.empty()) {
    const CompositePair pair = composite_pair(config.cutoff);
    nlohmann::ordered_json doc = {
        {"mass", field.mass().real()},
        {"min_value", field.values.real().minCoeff()},
        {"probe_variance", config.probe_variance},
        {"interior_commutator_norm", pair.interior_commutator_norm},
        {"full_commutator_norm", pair.full_commutator_norm},
    };
    std::ofstream out(config.report_path);
    if (!out) throw Error(ErrorCategory::Io, "cannot open report path");
    out << doc.dump(2) << "\n";
  }
  return 0;
}

int run_dynamics(const JobConfig& config) {
  if (is_spin(config))
    throw Error(ErrorCategory::Config, "dynamics task targets the ccr backend");
  const CcrSystem sys(config.cutoff);
  const CcrBackend backend(sys);

  LindbladSpec lindblad;
  lindblad.hamiltonian = Operator(sys.space(), (config.omega * number_operator(sys).matrix()).eval());
  if (config.gamma > 0.0) lindblad.jumps.emplace_back(annihilation(sys), config.gamma);

  const auto trajectory = evolve(load_state(config), lindblad, config.dt, config.steps,
                                 {.snapshot_stride = config.stride});
  const GridPtr grid = make_grid(config);
  const auto spectrum = planar_spectrum(*grid, config.kappa);
  const auto fields = qpd_trajectory(trajectory, config.s, backend, *spectrum, grid);

  nlohmann::ordered_json timeline = nlohmann::ordered_json::array();
  const Matrix a = annihilation(sys).matrix();
  for (size_t i = 0; i < trajectory.size(); ++i) {
    const double t = config.dt * config.stride * double(i);
    if (!config.out_prefix.empty()) {
      char suffix[32];
      std::snprintf(suffix, sizeof(suffix), "_%04zu.csv", i);
      write_field_csv(config.out_prefix + suffix, fields[i], backend_tag(config));
    }
    const Complex moment = (trajectory[i].matrix() * a).trace();
    timeline.push_back({{"t", t},
                        {"tr_rho_a_re", moment.real()},
                        {"tr_rho_a_im", moment.imag()},
                        {"trace_deviation", std::abs(trajectory[i].matrix().trace() - 1.0)},
                        {"field_mass", fields[i].mass().real()},
                        {"field_min", fields[i].values.real().minCoeff()}});
  }
  if (!config.report_path.empty()) {
    std::ofstream out(config.report_path);
    if (!out) throw Error(ErrorCategory::Io, "cannot open report path");
    out << nlohmann::ordered_json({{"snapshots", timeline}}).dump(2) << "\n";
  }
  return 0;
}

int run_weakvalue(const JobConfig& config) {
  const Operator obs = load_observable(config);
  Complex value;
  if (is_spin(config)) {
    const SpinBackend backend{SpinSystem(config.j)};
    value = weak_value(backend, obs, parse_point(config.pre), parse_point(config.post));
  } else {
    const CcrBackend backend{CcrSystem(config.cutoff)};
    value = weak_value(backend, obs, parse_point(config.pre), parse_point(config.post));
  }
  std::cout << format_double(value.real()) << "," << format_double(value.imag()) << "\n";
  return 0;
}

int run(const JobConfig& config) {
  if (config.task == "husimi") return run_husimi(config);
  if (config.task == "wigner") return run_wigner(config);
  if (config.task == "glauber") return run_glauber(config);
  if (config.task == "qpd") return run_qpd(config);
  if (config.task == "transform") return run_transform(config);
  if (config.task == "axioms") return run_axioms(config);
  if (config.task == "naimark") return run_naimark(config);
  if (config.task == "dynamics") return run_dynamics(config);
  if (config.task == "weakvalue") return run_weakvalue(config);
  throw Error(ErrorCategory::Config, "unknown task '" + config.task + "'");
}

void add_backend_options(CLI::App* cmd, JobConfig& config) {
  cmd->add_option("--backend", config.backend, "ccr | spin")
      ->check(CLI::IsMember({"ccr", "spin"}));
  cmd->add_option("--cutoff", config.cutoff, "Fock cutoff N (ccr)");
  cmd->add_option("--j", config.j, "spin quantum number (spin)");
  cmd->add_option("--grid", config.grid_spec, "grid size RxC");
  cmd->add_option("--half-width", config.half_width, "planar grid half-width L");
}

void add_state_options(CLI::App* cmd, JobConfig& config) {
  cmd->add_option("--state", config.state,
                  "vacuum | fock:n | coherent:re,im | thermal:nbar | jj | mixed");
  cmd->add_option("--state-file", config.state_file, "density matrix CSV (re,im interleaved)");
}

}  // namespace

int main(int argc, char** argv) {
#ifdef _OPENMP
  if (const char* threads = std::getenv("QPD_THREADS")) {
    const int n = std::atoi(threads);
    if (n > 0) omp_set_num_threads(n);
  }
#endif

  CLI::App app{"s-ordered phase-space distributions for CCR and spin systems"};
  app.require_subcommand(1);
  JobConfig config;
  app.add_flag("--strict", config.strict, "escalate warnings to a nonzero exit");

  auto* husimi = app.add_subcommand("husimi", "coherent-state expectation field");
  add_backend_options(husimi, config);
  add_state_options(husimi, config);
  husimi->add_option("--out", config.out_path)->required();

  auto* wigner = app.add_subcommand("wigner", "symmetric-order distribution (ccr)");
  add_backend_options(wigner, config);
  add_state_options(wigner, config);
  wigner->add_option("--out", config.out_path)->required();

  auto* glauber = app.add_subcommand("glauber", "anti-normal-order distribution, band-limited (ccr)");
  add_backend_options(glauber, config);
  add_state_options(glauber, config);
  glauber->add_option("--kappa", config.kappa, "Fourier band limit");
  glauber->add_option("--out", config.out_path)->required();

  auto* qpd_cmd = app.add_subcommand("qpd", "distribution of arbitrary order s");
  add_backend_options(qpd_cmd, config);
  add_state_options(qpd_cmd, config);
  qpd_cmd->add_option("--s", config.s, "distribution order")->required();
  qpd_cmd->add_option("--kappa", config.kappa, "planar band limit (ccr)");
  qpd_cmd->add_option("--out", config.out_path)->required();

  auto* transform = app.add_subcommand("transform", "re-order a stored field between s values");
  transform->add_option("--from", config.s_from)->required();
  transform->add_option("--to", config.s_to)->required();
  transform->add_option("--in", config.in_path)->required();
  transform->add_option("--spectrum", config.spectrum_spec, "spin:J | ccr:N (default: file header)");
  transform->add_option("--kappa", config.kappa, "planar band limit (ccr)");
  transform->add_option("--out", config.out_path)->required();

  auto* axioms = app.add_subcommand("axioms", "kernel axiom deviation report");
  add_backend_options(axioms, config);
  axioms->add_option("--s", config.s, "order of the kernel pair")->required();
  axioms->add_option("--kappa", config.kappa, "planar band limit (ccr)");
  axioms->add_option("--report", config.report_path)->required();

  auto* naimark = app.add_subcommand("naimark", "joint measurement distribution with a Gaussian probe");
  add_backend_options(naimark, config);
  add_state_options(naimark, config);
  naimark->add_option("--probe-d", config.probe_variance, "probe variance d");
  naimark->add_option("--out", config.out_path)->required();
  naimark->add_option("--report", config.report_path);

  auto* dynamics = app.add_subcommand("dynamics", "damped-oscillator evolution with field snapshots");
  add_backend_options(dynamics, config);
  add_state_options(dynamics, config);
  dynamics->add_option("--omega", config.omega, "oscillator frequency");
  dynamics->add_option("--gamma", config.gamma, "damping rate");
  dynamics->add_option("--dt", config.dt, "time step");
  dynamics->add_option("--steps", config.steps, "step count");
  dynamics->add_option("--stride", config.stride, "snapshot stride");
  dynamics->add_option("--s", config.s, "field order");
  dynamics->add_option("--kappa", config.kappa, "planar band limit");
  dynamics->add_option("--out-prefix", config.out_prefix, "snapshot CSV prefix");
  dynamics->add_option("--report", config.report_path, "moment timeline JSON");

  auto* weakvalue = app.add_subcommand("weakvalue", "pre/post-selected weak value of an observable");
  add_backend_options(weakvalue, config);
  weakvalue->add_option("--obs", config.observable, "jx|jy|jz (spin), q|p|n (ccr), file:PATH");
  weakvalue->add_option("--pre", config.pre, "pre-selection point a,b")->required();
  weakvalue->add_option("--post", config.post, "post-selection point a,b")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  config.task = app.get_subcommands().front()->get_name();

  try {
    return run(config);
  } catch (const Error& e) {
    nlohmann::ordered_json err = {
        {"error", {{"category", to_string(e.category())}, {"message", e.what()}}}};
    std::cerr << err.dump() << "\n";
    return exit_code_for(e.category());
  } catch (const std::exception& e) {
    nlohmann::ordered_json err = {{"error", {{"category", "internal"}, {"message", e.what()}}}};
    std::cerr << err.dump() << "\n";
    return 1;
  }
}
