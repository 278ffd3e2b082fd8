#include "fcs/cli.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fcs/io.hpp"
#include "fcs/models.hpp"
#include "fcs/transfer.hpp"

namespace fcs::cli {

namespace {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

Spin parse_spin(const std::string& text, const char* flag) {
  try {
    return Spin::parse(text);
  } catch (const std::exception&) {
    throw UsageError(std::string(flag) + ": '" + text + "' is not a nonnegative half-integer");
  }
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output.empty()) {
    out << text;
  } else {
    write_file_atomic(cfg.output, text);
  }
}

LocalHamiltonian resolve_hamiltonian(const RunConfig& cfg) {
  const bool named = !cfg.model.empty();
  const bool file = !cfg.import_hamiltonian.empty();
  if (named == file) throw UsageError("give exactly one of --model or --hamiltonian");
  if (file) return hamiltonian_from_json(read_json_file(cfg.import_hamiltonian));
  ModelSpec spec{cfg.model, cfg.lambda, cfg.s.value_or(Spin(2))};
  try {
    return model_zoo(spec);
  } catch (const ModelError& e) {
    throw UsageError(e.what());
  }
}

PopescuSystem resolve_system(const RunConfig& cfg) {
  const bool spins = cfg.s.has_value() || cfg.t.has_value();
  const bool file = !cfg.import_system.empty();
  if (spins == file) throw UsageError("give either --s and --t or --import");
  if (file) {
    try {
      return system_from_json(read_json_file(cfg.import_system));
    } catch (const ConsistencyError& e) {
      throw IoError(cfg.import_system + ": " + e.what());
    } catch (const DimensionError& e) {
      throw IoError(cfg.import_system + ": " + e.what());
    }
  }
  if (!cfg.s || !cfg.t) throw UsageError("both --s and --t are required");
  return build_covariant(*cfg.s, *cfg.t).base;
}

std::vector<CMatrix> parse_observables(const std::string& list, int d, std::vector<std::string>& names) {
  const Irrep rep = make_irrep(Spin(d - 1));
  std::vector<CMatrix> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "x" || item == "Sx") out.push_back(rep.sx);
    else if (item == "y" || item == "Sy") out.push_back(rep.sy);
    else if (item == "z" || item == "Sz") out.push_back(rep.sz);
    else throw UsageError("--observables: unknown observable '" + item + "' (use x, y, z)");
    names.push_back(item.substr(item.size() - 1));
  }
  if (out.empty()) throw UsageError("--observables: empty list");
  return out;
}

// ---------------------------------------------------------------------------

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.s) throw UsageError("sweep: --s is required");
  const LocalHamiltonian h = resolve_hamiltonian(cfg);
  const SweepResult result = variational_sweep(*cfg.s, h, cfg.t_max);
  emit(cfg, cfg.format == "csv" ? sweep_to_csv(result) : sweep_to_json(result).dump(2) + "\n", out);
  return kOk;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
  const PopescuSystem sys = resolve_system(cfg);
  emit(cfg, report_to_json(spectral_report(build_transfer(sys))).dump(2) + "\n", out);
  return kOk;
}

int cmd_check(const RunConfig& cfg, std::ostream& out) {
  const LocalHamiltonian h = resolve_hamiltonian(cfg);
  const SymmetryReport sym = detailed_balance_check(h);
  const double deviation = g_invariance_check(h, make_irrep(Spin(h.d() - 1)));
  const Json doc{{"model", h.label()},
                 {"lattice_symmetric", sym.lattice_symmetric},
                 {"real", sym.real},
                 {"detailed_balance", sym.detailed_balance},
                 {"g_invariance_deviation", deviation}};
  emit(cfg, doc.dump(2) + "\n", out);
  return kOk;
}

int cmd_correlate(const RunConfig& cfg, std::ostream& out) {
  if (cfg.k_max < 2) throw UsageError("correlate: --k-max must be at least 2");
  const PopescuSystem sys = resolve_system(cfg);
  std::vector<std::string> names;
  const auto observables = parse_observables(cfg.observables, sys.d(), names);
  const DecayCertificate cert = decay_certificate(sys, observables, cfg.k_max);

  std::string text = "k";
  for (const auto& pair : cert.pairs) {
    text += ",c_" + names[static_cast<std::size_t>(pair.first)] + names[static_cast<std::size_t>(pair.second)];
  }
  text += "\n";
  for (int k = 1; k <= cert.k_max; ++k) {
    text += std::to_string(k);
    // Connected correlators of Hermitian observables in a real state are
    // real; the imaginary part is dropped from the table.
    for (const auto& pair : cert.pairs) text += "," + format_double(pair.connected[static_cast<std::size_t>(k - 1)].real());
    text += "\n";
  }
  const double ln_alpha = cert.alpha > 0.0 ? std::log(cert.alpha) : -std::numeric_limits<double>::infinity();
  text += "# alpha," + format_double(cert.alpha) + "\n";
  text += "# ln_alpha," + format_double(ln_alpha) + "\n";
  text += "# fitted_rate," + format_double(cert.fitted_rate) + "\n";
  text += "# envelope," + format_double(cert.envelope) + "\n";
  text += "# max_violation," + format_double(cert.max_violation) + "\n";
  text += std::string("# degenerate,") + (cert.degenerate ? "true" : "false") + "\n";
  emit(cfg, text, out);
  return kOk;
}

int cmd_export(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.model.empty() || !cfg.import_hamiltonian.empty()) {
    emit(cfg, hamiltonian_to_json(resolve_hamiltonian(cfg)).dump(2) + "\n", out);
  } else {
    emit(cfg, system_to_json(resolve_system(cfg)).dump(2) + "\n", out);
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::string s_text, t_text, t_max_text = "4.5";

  CLI::App app{"Finitely correlated states on SU(2) spin chains", "fcs"};
  app.require_subcommand(1);

  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--model", cfg.model, "zoo model: ising, xy, majumdar_ghosh, xxx, aklt");
    sub->add_option("--lambda", cfg.lambda, "field strength for xy");
    sub->add_option("--hamiltonian", cfg.import_hamiltonian, "Hamiltonian JSON file");
  };
  auto add_system = [&](CLI::App* sub) {
    sub->add_option("--t", t_text, "auxiliary spin");
    sub->add_option("--import", cfg.import_system, "Popescu system JSON file");
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--s", s_text, "site spin (e.g. 1, 0.5, 3/2)");
    sub->add_option("-o,--output", cfg.output, "output file (default: stdout)");
  };

  CLI::App* sweep = app.add_subcommand("sweep", "mean energy over auxiliary spins t = 1/2 .. t_max");
  add_model(sweep);
  add_common(sweep);
  sweep->add_option("--t-max", t_max_text, "largest auxiliary spin (default 4.5)");
  sweep->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  CLI::App* spectrum = app.add_subcommand("spectrum", "transfer-operator spectral report");
  add_system(spectrum);
  add_common(spectrum);

  CLI::App* check = app.add_subcommand("check", "detailed-balance and SU(2)-invariance predicates");
  add_model(check);
  add_common(check);

  CLI::App* correlate = app.add_subcommand("correlate", "connected two-point correlators and decay fit");
  add_system(correlate);
  add_common(correlate);
  correlate->add_option("--k-max", cfg.k_max, "largest separation (>= 2)");
  correlate->add_option("--observables", cfg.observables, "comma-separated subset of x,y,z");

  CLI::App* exp = app.add_subcommand("export", "write a covariant system or zoo Hamiltonian as JSON");
  add_model(exp);
  add_system(exp);
  add_common(exp);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "fcs: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (!s_text.empty()) cfg.s = parse_spin(s_text, "--s");
    if (!t_text.empty()) cfg.t = parse_spin(t_text, "--t");
    cfg.t_max = parse_spin(t_max_text, "--t-max");
    cfg.command = app.get_subcommands().front()->get_name();

    if (cfg.command == "sweep") return cmd_sweep(cfg, out);
    if (cfg.command == "spectrum") return cmd_spectrum(cfg, out);
    if (cfg.command == "check") return cmd_check(cfg, out);
    if (cfg.command == "correlate") return cmd_correlate(cfg, out);
    return cmd_export(cfg, out);
  } catch (const UsageError& e) {
    err << "fcs: usage: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    err << "fcs: " << e.what() << "\n";
    return kIo;
  } catch (const FeasibilityError& e) {
    err << "fcs: infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const EmptySweepError& e) {
    err << "fcs: empty sweep: " << e.what() << "\n";
    return kInfeasible;
  } catch (const CertificateUnavailable& e) {
    err << "fcs: not mixing: " << e.what() << "\n";
    return kInfeasible;
  } catch (const DimensionError& e) {
    err << "fcs: " << e.what() << "\n";
    return kInfeasible;
  } catch (const std::exception& e) {
    err << "fcs: error: " << e.what() << "\n";
    return kIo;
  }
}

}  // namespace fcs::cli
