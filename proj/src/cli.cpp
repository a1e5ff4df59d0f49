#include "curvq/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <future>
#include <numbers>
#include <ostream>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "curvq/geometry.hpp"
#include "curvq/inverse.hpp"
#include "curvq/io.hpp"
#include "curvq/potential.hpp"
#include "curvq/spectral.hpp"

namespace curvq::cli {
namespace {

using nlohmann::json;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Input validation failure: reported as a usage error (exit 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MqResult {
  Status status = Status::ok;
  std::string message;
  std::map<std::string, double> metrics;
  std::map<std::string, std::string> resolved;
  std::vector<std::pair<std::string, CsvTable>> tables;  // (file suffix, table)
  json strip;
};

// ---------------------------------------------------------------- inputs

SurfaceProfile build_profile(const Settings& s, double needed_rho_max) {
  if (s.surface == "gaussian") {
    return make_gaussian_bump(s.a0, s.sigma0, std::max(1e4 * s.sigma0, 64.0 * needed_rho_max));
  }
  if (!s.profile_csv) throw UsageError("--surface table requires --profile-csv");
  try {
    const auto samples = read_pairs(*s.profile_csv, "rho", "f");
    return make_tabulated_profile(samples);
  } catch (const DomainError& e) {
    throw UsageError(std::string("profile CSV: ") + e.what());
  }
}

double default_rho_max(const Settings& s, double sigmas, const SurfaceProfile* table) {
  if (s.rho_max) return *s.rho_max;
  if (s.surface == "gaussian") return sigmas * s.sigma0;
  return table ? std::min(table->rho_max(), sigmas) : sigmas;
}

PrescribedPotential build_potential(const Settings& s) {
  if (s.potential == "free") return PrescribedPotential::free();
  if (s.potential == "harmonic") return PrescribedPotential::harmonic(s.omega);
  if (!s.potential_csv) throw UsageError("--potential table requires --potential-csv");
  try {
    return PrescribedPotential::tabulated(read_pairs(*s.potential_csv, "rho", "U"));
  } catch (const DomainError& e) {
    throw UsageError(std::string("potential CSV: ") + e.what());
  }
}

std::vector<int> mq_list(const Settings& s) {
  if (!s.mq_range) return {s.mq};
  std::vector<int> v;
  for (int m = s.mq_range->first; m <= s.mq_range->second; ++m) v.push_back(m);
  return v;
}

// ---------------------------------------------------------------- workers

template <class F>
MqResult guarded(const std::string& stage, F&& body) {
  try {
    return body();
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    MqResult r;
    r.status = Status::error;
    r.message = "stage " + stage + ": " + e.what();
    return r;
  }
}

MqResult run_curvature(const Settings& s) {
  const SurfaceProfile probe = build_profile(s, s.rho_max.value_or(1.0));
  const double hi = s.surface == "gaussian" ? default_rho_max(s, 5.0, nullptr)
                                            : s.rho_max.value_or(probe.rho_max());
  const SurfaceProfile p = build_profile(s, hi);
  const std::size_t n = s.nodes.value_or(1000);
  return guarded("curvature", [&] {
    MqResult r;
    r.resolved["rho_max"] = num(hi);
    r.resolved["nodes"] = std::to_string(n);
    const auto grid = uniform_grid(p.rho_min(), hi, n);
    CsvTable t{{"rho", "k1", "k2", "mean", "gauss", "metric_det"}, {}};
    double vs_min = 0.0, rho_vs_min = grid.front();
    for (double rho : grid) {
      const CurvatureSample c = curvature_at(p, rho);
      t.rows.push_back({c.rho, c.k1, c.k2, c.mean, c.gauss, c.metric_det});
      const double vs = -0.25 * (c.k1 - c.k2) * (c.k1 - c.k2);
      if (vs < vs_min) {
        vs_min = vs;
        rho_vs_min = rho;
      }
    }
    const CurvatureSample c0 = curvature_at(p, grid.front());
    r.metrics["k1_axis"] = c0.k1;
    r.metrics["k2_axis"] = c0.k2;
    r.metrics["vs_min"] = vs_min;
    r.metrics["rho_vs_min"] = rho_vs_min;
    r.metrics["arc_length_end"] = arc_length(p, hi);
    r.tables.emplace_back("", std::move(t));
    return r;
  });
}

MqResult run_potential(const Settings& s, int mq) {
  const SurfaceProfile probe = build_profile(s, s.rho_max.value_or(1.0));
  const double hi = default_rho_max(s, 10.0, &probe);
  const SurfaceProfile p = build_profile(s, hi);
  const std::size_t n = s.nodes.value_or(1000);
  return guarded("potential", [&] {
    MqResult r;
    r.resolved["rho_max"] = num(hi);
    r.resolved["nodes"] = std::to_string(n);
    const auto grid = default_potential_grid(p, n, hi);
    const auto table = effective_potential_table(p, mq, grid);
    CsvTable t{{"x", "rho", "w"}, {}};
    double w_min = table.nodes.front().w;
    const PotentialNode* at = &table.nodes.front();
    double binding = 0.0;
    for (const auto& node : table.nodes) {
      t.rows.push_back({node.x, node.rho, node.w});
      if (node.w < w_min) {
        w_min = node.w;
        at = &node;
      }
      if (node.w < 0.0) binding += 1.0;
    }
    r.metrics["w_min"] = w_min;
    r.metrics["x_w_min"] = at->x;
    r.metrics["rho_w_min"] = at->rho;
    r.metrics["binding_nodes"] = binding;
    r.tables.emplace_back("", std::move(t));
    return r;
  });
}

CsvTable state_table(const SpectralSolution& sol, std::size_t i) {
  const DensityTable d = probability_density(sol, i);
  CsvTable t{{"x", "rho", "F", "psi", "density"}, {}};
  const auto& st = sol.states[i];
  for (std::size_t k = 0; k < sol.rho.size(); ++k) {
    t.rows.push_back({sol.x[k], sol.rho[k], st.F[k], st.psi[k], d.density[k]});
  }
  return t;
}

SpectralSolution solve_spectrum(const Settings& s, const SurfaceProfile& p, int mq, double rho_max,
                                MqResult& r) {
  const std::size_t n = s.nodes.value_or(8000);
  const std::size_t states = s.states.value_or(3);
  r.resolved["rho_max"] = num(rho_max);
  r.resolved["nodes"] = std::to_string(n);
  r.resolved["states"] = std::to_string(states);
  RhoSolverOptions o;
  o.expand_domain = !s.fixed_domain;
  return solve_bound_states_rho(p, mq, rho_max, n, states, o);
}

MqResult run_spectrum(const Settings& s, int mq) {
  const SurfaceProfile probe = build_profile(s, s.rho_max.value_or(1.0));
  const double rho_max = default_rho_max(s, 30.0, &probe);
  const SurfaceProfile p = build_profile(s, rho_max);
  return guarded("spectrum", [&] {
    MqResult r;
    const SpectralSolution sol = solve_spectrum(s, p, mq, rho_max, r);
    CsvTable t{{"index", "eigenvalue"}, {}};
    for (std::size_t i = 0; i < sol.size(); ++i) {
      t.rows.push_back({static_cast<double>(i), sol.eigenvalues[i]});
      r.metrics["E" + std::to_string(i)] = sol.eigenvalues[i];
    }
    r.metrics["bound_states"] = static_cast<double>(sol.size());
    r.metrics["rho_max_used"] = sol.boundary.outer_position;
    r.metrics["nodes_used"] = static_cast<double>(sol.nodes_used);
    r.metrics["expansions"] = sol.expansions;
    r.metrics["converged"] = sol.converged ? 1.0 : 0.0;
    double vs_min = 0.0;
    for (double rho : sol.rho) vs_min = std::min(vs_min, surface_potential(p, rho));
    r.metrics["vs_min"] = vs_min;
    if (p.gaussian()) {
      const double s2 = s.sigma0 * s.sigma0;
      r.metrics["continuum_threshold"] = -s.a0 * s.a0 / (s2 * s2);
    }
    r.tables.emplace_back("", std::move(t));
    for (std::size_t i = 0; i < sol.size(); ++i) {
      r.tables.emplace_back("_state" + std::to_string(i), state_table(sol, i));
    }
    if (sol.empty()) {
      r.status = Status::no_result;
      r.message = "no bound state for mq = " + std::to_string(mq);
    }
    return r;
  });
}

// Solved ground state or the analytic ansatz, as requested.
struct StateSource {
  SpectralSolution solution;
  std::optional<AnsatzWavefunction> ansatz;
};

std::optional<StateSource> state_source(const Settings& s, int mq, MqResult& r) {
  const SurfaceProfile probe = build_profile(s, s.rho_max.value_or(1.0));
  if (s.ansatz) {
    if (mq != 0) throw UsageError("--ansatz describes the mq = 0 state; drop --mq");
    const double x_max = s.rho_max.value_or(10.0 * s.sigma0);
    const SurfaceProfile p = build_profile(s, x_max);
    if (!p.gaussian()) throw UsageError("--ansatz requires --surface gaussian");
    const std::size_t n = s.nodes.value_or(2000);
    r.resolved["x_max"] = num(x_max);
    r.resolved["nodes"] = std::to_string(n);
    r.resolved["kprime"] = num(s.kprime);
    const auto grid = default_ansatz_grid(p, n, x_max);
    AnsatzWavefunction a = ansatz_wavefunction(p, s.kprime, 0.0, grid);
    r.metrics["norm2"] = a.norm2;
    r.metrics["energy"] = a.energy;
    r.metrics["norm_adaptive"] = ansatz_norm(p, s.kprime, grid.back(), a.norm2);
    StateSource src{to_solution(a), std::move(a)};
    return src;
  }
  const double rho_max = default_rho_max(s, 30.0, &probe);
  const SurfaceProfile p = build_profile(s, rho_max);
  SpectralSolution sol = solve_spectrum(s, p, mq, rho_max, r);
  if (sol.empty()) return std::nullopt;
  r.metrics["eigenvalue"] = sol.eigenvalues.front();
  return StateSource{std::move(sol), std::nullopt};
}

MqResult run_density(const Settings& s, int mq) {
  return guarded("density", [&] {
    MqResult r;
    auto src = state_source(s, mq, r);
    if (!src) {
      r.status = Status::no_result;
      r.message = "no bound state for mq = " + std::to_string(mq);
      return r;
    }
    CsvTable t{{"rho", "x", "density"}, {}};
    const DensityTable d = probability_density(src->solution, 0);
    double norm = 0.0;
    for (std::size_t i = 0; i < d.rho.size(); ++i) norm += 2.0 * std::numbers::pi * d.density[i] * d.weight[i];
    std::size_t peak = 0;
    if (src->ansatz) {
      const auto& a = *src->ansatz;
      for (std::size_t i = 0; i < a.x.size(); ++i) {
        t.rows.push_back({a.rho[i], a.x[i], a.density[i]});
        if (a.density[i] > a.density[peak]) peak = i;
      }
      r.metrics["rho_peak"] = a.rho[peak];
      r.metrics["density_peak"] = a.density[peak];
    } else {
      for (std::size_t i = 0; i < d.rho.size(); ++i) {
        t.rows.push_back({d.rho[i], src->solution.x[i], d.density[i]});
        if (d.density[i] > d.density[peak]) peak = i;
      }
      r.metrics["rho_peak"] = d.rho[peak];
      r.metrics["density_peak"] = d.density[peak];
    }
    r.metrics["norm"] = norm;
    r.tables.emplace_back("", std::move(t));
    return r;
  });
}

MqResult run_current(const Settings& s, int mq) {
  return guarded("current", [&] {
    MqResult r;
    auto src = state_source(s, mq, r);
    if (!src) {
      r.status = Status::no_result;
      r.message = "no bound state for mq = " + std::to_string(mq);
      return r;
    }
    const ProbabilityCurrent c = probability_current(src->solution, 0);
    CsvTable t{{"rho", "j_phi", "j_rho", "circulation"}, {}};
    double circ = 0.0, jr = 0.0;
    for (const auto& n : c.nodes) {
      t.rows.push_back({n.rho, n.j_phi, n.j_rho, n.circulation});
      circ = std::max(circ, n.circulation);
      jr = std::max(jr, std::abs(n.j_rho));
    }
    r.metrics["circulation_max"] = circ;
    r.metrics["j_rho_max_abs"] = jr;
    r.metrics["j_z"] = c.j_z;
    r.tables.emplace_back("", std::move(t));
    return r;
  });
}

json strip_json(const StripBounds& b, const PrescribedPotential& u) {
  json j;
  j["rho_lower"] = b.rho_lower;
  j["rho_upper"] = b.rho_upper;
  j["lower_criterion"] = to_string(b.lower_criterion);
  j["upper_criterion"] = to_string(b.upper_criterion);
  j["mq"] = b.mq;
  j["potential_kind"] = u.kind() == PotentialKind::custom ? "table" : to_string(b.potential_kind);
  j["rho_ref"] = b.rho_ref;
  j["branch"] = b.branch == StripBranch::primary ? "primary" : "secondary";
  j["length_unit"] = u.length_unit();
  if (b.estimate_upper) j["estimate_upper"] = *b.estimate_upper;
  return j;
}

void strip_metrics(const StripBounds& b, const PrescribedPotential& u, MqResult& r) {
  r.metrics["rho_lower"] = b.rho_lower;
  r.metrics["rho_upper"] = b.rho_upper;
  r.metrics["scaled_lower"] = b.rho_lower / u.length_unit();
  r.metrics["scaled_upper"] = b.rho_upper / u.length_unit();
  r.metrics["ratio"] = b.rho_upper / b.rho_lower;
  if (b.estimate_upper) r.metrics["estimate_upper"] = *b.estimate_upper;
}

MqResult run_strip(const Settings& s, int mq) {
  const PrescribedPotential u = build_potential(s);
  return guarded("strip", [&] {
    MqResult r;
    StripOptions o;
    o.rho_ref = s.rho_ref;
    o.branch = s.second_strip ? StripBranch::secondary : StripBranch::primary;
    const StripBounds b = strip_bounds(u, mq, o);
    strip_metrics(b, u, r);
    r.strip = strip_json(b, u);
    return r;
  });
}

MqResult run_inverse(const Settings& s, int mq, bool with_table) {
  const PrescribedPotential u = build_potential(s);
  const std::size_t n = s.nodes.value_or(2000);
  return guarded(with_table ? "inverse" : "roundtrip", [&] {
    MqResult r;
    r.resolved["nodes"] = std::to_string(n);
    DesignOptions o;
    o.rho_ref = s.rho_ref;
    const InverseDesign d = design_profile(u, mq, n, o);
    strip_metrics(d.strip, u, r);
    r.metrics["rho_cut"] = d.rho_cut;
    r.metrics["tail_bound"] = d.tail_bound;
    r.metrics["f_cut"] = d.f.back();
    r.metrics["round_trip_error"] = round_trip_error(d);
    r.strip = strip_json(d.strip, u);
    if (with_table) {
      CsvTable t{{"rho", "A", "f", "df"}, {}};
      for (std::size_t i = 0; i < d.rho.size(); ++i) {
        t.rows.push_back({d.rho[i], d.A[i], d.f[i], d.df[i]});
      }
      r.tables.emplace_back("", std::move(t));
    }
    return r;
  });
}

// ---------------------------------------------------------------- output

struct OutputPlan {
  std::filesystem::path stem;
  std::string ext;
};

OutputPlan output_plan(const std::string& out, const std::string& ext) {
  std::filesystem::path p(out);
  OutputPlan plan;
  plan.ext = ext;
  if (p.has_extension()) {
    plan.stem = p.parent_path() / p.stem();
    plan.ext = p.extension().string();
  } else {
    plan.stem = p;
  }
  return plan;
}

std::string build_path(const OutputPlan& plan, const std::string& part) {
  return plan.stem.string() + part + plan.ext;
}

}  // namespace

// ---------------------------------------------------------------- parse

ParseOutcome parse(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CommandInvocation inv;
  Settings& s = inv.settings;
  std::string mq_range;
  std::string rho_max_text;

  CLI::App app{"Quantum mechanics on curved surfaces of revolution", "curvq"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  const CLI::Validator finite(
      [](std::string& v) -> std::string {
        char* end = nullptr;
        const double d = std::strtod(v.c_str(), &end);
        if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(d)) {
          return "value '" + v + "' is not a finite number";
        }
        return {};
      },
      "FINITE");
  const CLI::Validator positive(
      [](std::string& v) -> std::string {
        if (!(std::strtod(v.c_str(), nullptr) > 0.0)) return "value '" + v + "' must be > 0";
        return {};
      },
      "POSITIVE");

  auto surface_opts = [&](CLI::App* sub) {
    sub->add_option("--surface", s.surface, "Surface kind")
        ->check(CLI::IsMember({"gaussian", "table"}));
    sub->add_option("--a0", s.a0, "Gaussian depth A0")->check(finite)->check(positive);
    sub->add_option("--sigma0", s.sigma0, "Gaussian dispersion sigma0")
        ->check(finite)
        ->check(positive);
    sub->add_option("--profile-csv", s.profile_csv, "Profile table (rho,f) for --surface table");
  };
  auto rho_max_opt = [&](CLI::App* sub, const std::string& what) {
    sub->add_option("--rho-max", s.rho_max, what)->check(finite)->check(positive);
  };
  auto mq_opt = [&](CLI::App* sub, bool range) {
    auto* m = sub->add_option("--mq", s.mq, "Angular quantum number")
                  ->check(CLI::NonNegativeNumber);
    if (range) {
      sub->add_option("--mq-range", mq_range, "Inclusive range a..b, solved concurrently")
          ->excludes(m);
    }
  };
  auto nodes_opt = [&](CLI::App* sub) {
    sub->add_option("--nodes", s.nodes, "Number of grid nodes")->check(CLI::PositiveNumber);
  };
  auto out_opts = [&](CLI::App* sub, bool format) {
    sub->add_option("--out", s.out, "Output path for data files (none written if absent)");
    if (format) {
      sub->add_option("--format", s.format, "Data file format")
          ->check(CLI::IsMember({"csv", "json"}));
    }
  };
  auto potential_opts = [&](CLI::App* sub) {
    sub->add_option("--potential", s.potential, "Prescribed potential U")
        ->required()
        ->check(CLI::IsMember({"free", "harmonic", "table"}));
    sub->add_option("--omega", s.omega, "Oscillator frequency")->check(finite)->check(positive);
    sub->add_option("--potential-csv", s.potential_csv, "Potential table (rho,U)");
    sub->add_option("--rho-ref", s.rho_ref, "Amplitude reference radius")
        ->check(finite)
        ->check(positive);
  };
  auto state_opts = [&](CLI::App* sub) {
    surface_opts(sub);
    mq_opt(sub, false);
    rho_max_opt(sub, "Outer radius (x_max for --ansatz)");
    nodes_opt(sub);
    sub->add_option("--states", s.states, "Eigenstates to compute")->check(CLI::PositiveNumber);
    sub->add_option("--kprime", s.kprime, "Ansatz decay constant k'")
        ->check(finite)
        ->check(positive);
    sub->add_flag("--ansatz", s.ansatz, "Use the analytic ansatz instead of a solved state");
    out_opts(sub, true);
  };

  auto* curvature = app.add_subcommand("curvature", "Principal curvatures and metric");
  surface_opts(curvature);
  rho_max_opt(curvature, "Outer radius");
  nodes_opt(curvature);
  out_opts(curvature, true);

  auto* potential = app.add_subcommand("potential", "Effective potential table W_mq(x)");
  surface_opts(potential);
  mq_opt(potential, true);
  rho_max_opt(potential, "Outer radius");
  nodes_opt(potential);
  out_opts(potential, true);

  auto* spectrum = app.add_subcommand("spectrum", "Bound states of the radial problem");
  surface_opts(spectrum);
  mq_opt(spectrum, true);
  rho_max_opt(spectrum, "Initial outer radius");
  nodes_opt(spectrum);
  spectrum->add_option("--states", s.states, "Maximum number of bound states")
      ->check(CLI::PositiveNumber);
  spectrum->add_flag("--fixed-domain", s.fixed_domain, "Do not enlarge rho_max");
  out_opts(spectrum, true);

  auto* density = app.add_subcommand("density", "Probability density of a state");
  state_opts(density);
  density->add_flag("--fixed-domain", s.fixed_domain, "Do not enlarge rho_max");

  auto* current = app.add_subcommand("current", "Probability current of a state");
  state_opts(current);
  current->add_flag("--fixed-domain", s.fixed_domain, "Do not enlarge rho_max");

  auto* inverse = app.add_subcommand("inverse", "Design a surface for a prescribed potential");
  potential_opts(inverse);
  mq_opt(inverse, false);
  nodes_opt(inverse);
  out_opts(inverse, true);

  auto* strip = app.add_subcommand("strip", "Admissible strip of an inverse design");
  potential_opts(strip);
  mq_opt(strip, true);
  strip->add_flag("--second-strip", s.second_strip, "Report the strip where A lies in (-1, 0)");
  out_opts(strip, false);

  auto* roundtrip = app.add_subcommand("roundtrip", "Validate W_mq = -U on a designed surface");
  potential_opts(roundtrip);
  mq_opt(roundtrip, true);
  nodes_opt(roundtrip);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    ParseOutcome r;
    r.exit_code = app.exit(e, out, err);
    if (r.exit_code != 0) r.exit_code = 2;
    return r;
  }

  CLI::App* sub = app.get_subcommands().front();
  inv.subcommand = sub->get_name();
  for (const CLI::Option* o : sub->get_options()) {
    if (o->count() == 0 || o->get_name() == "--help") continue;
    std::string v;
    for (const auto& x : o->results()) v += (v.empty() ? "" : " ") + x;
    inv.options[o->get_name()] = o->get_type_size() == 0 ? "true" : v;
  }
  if (!mq_range.empty()) {
    static const std::regex re(R"(^\s*(\d+)\s*\.\.\s*(\d+)\s*$)");
    std::smatch m;
    if (!std::regex_match(mq_range, m, re) || std::stoi(m[1]) > std::stoi(m[2]) ||
        std::stoi(m[2]) > 1000) {
      err << "--mq-range: expected a..b with 0 <= a <= b, got '" << mq_range << "'\n";
      return ParseOutcome{std::nullopt, 2};
    }
    s.mq_range = std::make_pair(std::stoi(m[1]), std::stoi(m[2]));
  }
  inv.output_path = s.out;
  return ParseOutcome{std::move(inv), 0};
}

// ---------------------------------------------------------------- run

RunSummary run(const CommandInvocation& invocation) {
  const Settings& s = invocation.settings;
  RunSummary summary;
  summary.subcommand = invocation.subcommand;
  summary.inputs = invocation.options;
  const std::vector<int> mqs = mq_list(s);

  std::function<MqResult(int)> worker;
  const std::string& cmd = invocation.subcommand;
  if (cmd == "curvature") worker = [&](int) { return run_curvature(s); };
  else if (cmd == "potential") worker = [&](int m) { return run_potential(s, m); };
  else if (cmd == "spectrum") worker = [&](int m) { return run_spectrum(s, m); };
  else if (cmd == "density") worker = [&](int m) { return run_density(s, m); };
  else if (cmd == "current") worker = [&](int m) { return run_current(s, m); };
  else if (cmd == "strip") worker = [&](int m) { return run_strip(s, m); };
  else if (cmd == "inverse") worker = [&](int m) { return run_inverse(s, m, true); };
  else if (cmd == "roundtrip") worker = [&](int m) { return run_inverse(s, m, false); };
  else {
    summary.status = Status::error;
    summary.message = "unknown subcommand '" + cmd + "'";
    return summary;
  }

  std::vector<MqResult> results;
  try {
    if (mqs.size() == 1) {
      results.push_back(worker(mqs.front()));
    } else {
      std::vector<std::future<MqResult>> futures;
      for (int m : mqs) futures.push_back(std::async(std::launch::async, worker, m));
      for (auto& f : futures) results.push_back(f.get());
    }
  } catch (const UsageError& e) {
    summary.status = Status::error;
    summary.message = std::string("usage: ") + e.what();
    summary.metrics["usage_error"] = 1.0;
    return summary;
  }

  const bool prefixed = s.mq_range.has_value();
  const bool json_format = s.format == "json";
  std::optional<OutputPlan> plan;
  if (s.out) plan = output_plan(*s.out, cmd == "strip" || json_format ? ".json" : ".csv");

  bool any_ok = false, any_error = false;
  json strips = json::array();
  std::string messages;
  for (std::size_t k = 0; k < results.size(); ++k) {
    MqResult& r = results[k];
    const std::string prefix = prefixed ? "mq_" + std::to_string(mqs[k]) + "." : "";
    if (r.status == Status::ok) any_ok = true;
    if (r.status == Status::error) any_error = true;
    if (!r.message.empty()) messages += (messages.empty() ? "" : "; ") + r.message;
    for (const auto& [key, v] : r.metrics) summary.metrics[prefix + key] = v;
    for (const auto& [key, v] : r.resolved) summary.inputs.emplace("resolved." + key, v);
    if (!r.strip.is_null()) strips.push_back(r.strip);
    if (plan && r.status != Status::error) {
      const std::string mq_part = prefixed ? "_mq" + std::to_string(mqs[k]) : "";
      try {
        for (const auto& [suffix, table] : r.tables) {
          const std::string path = build_path(*plan, mq_part + suffix);
          if (json_format) write_table_json(path, table);
          else write_csv(path, table);
          summary.outputs.push_back(path);
        }
        if (!r.strip.is_null()) {
          const std::string path =
              cmd == "strip" ? build_path(*plan, mq_part)
                             : plan->stem.string() + mq_part + "_strip.json";
          std::ofstream f(path, std::ios::binary);
          if (!f) throw DomainError("cannot open '" + path + "' for writing");
          f << r.strip.dump(2) << '\n';
          summary.outputs.push_back(path);
        }
      } catch (const std::exception& e) {
        any_error = true;
        messages += (messages.empty() ? "" : "; ") + std::string("stage output: ") + e.what();
      }
    }
  }
  summary.status = any_error ? Status::error : (any_ok ? Status::ok : Status::no_result);
  summary.message = messages;
  if (!strips.empty()) {
    json extra;
    if (prefixed) extra["strips"] = strips;
    else extra["strip"] = strips.front();
    summary.json_extra = extra.dump();
  }
  return summary;
}

std::string to_json(const RunSummary& summary) {
  json j;
  j["subcommand"] = summary.subcommand;
  j["status"] = summary.status == Status::ok          ? "ok"
                : summary.status == Status::no_result ? "no_result"
                                                      : "error";
  j["message"] = summary.message;
  j["inputs"] = summary.inputs;
  j["outputs"] = summary.outputs;
  j["metrics"] = json::object();
  for (const auto& [k, v] : summary.metrics) j["metrics"][k] = v;
  j["units"] = "hbar=1, 2m=1";
  if (!summary.json_extra.empty()) j.update(json::parse(summary.json_extra));
  return j.dump(2);
}

int exit_code(const RunSummary& summary) {
  switch (summary.status) {
    case Status::ok: return 0;
    case Status::no_result: return 1;
    case Status::error: return summary.metrics.count("usage_error") ? 2 : 3;
  }
  return 3;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  ParseOutcome p = parse(args, out, err);
  if (!p.invocation) return p.exit_code;
  const RunSummary summary = run(*p.invocation);
  out << to_json(summary) << '\n';
  if (summary.status == Status::error) err << "curvq: " << summary.message << '\n';
  return exit_code(summary);
}

}  // namespace curvq::cli
