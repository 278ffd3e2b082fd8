#include "fcs/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fcs {

namespace {

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

int require_int(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer()) {
    throw IoError(std::string("missing or non-integer field \"") + key + "\"");
  }
  return j.at(key).get<int>();
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json matrix_to_json(const CMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index a = 0; a < m.rows(); ++a)
    for (Eigen::Index b = 0; b < m.cols(); ++b) out.push_back({m(a, b).real(), m(a, b).imag()});
  return out;
}

CMatrix matrix_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols) {
  if (!j.is_array()) throw IoError("matrix must be a flat list of [re, im] pairs");
  if (static_cast<Eigen::Index>(j.size()) != rows * cols) {
    std::ostringstream msg;
    msg << "matrix has " << j.size() << " entries, expected " << rows * cols;
    throw IoError(msg.str());
  }
  CMatrix out(rows, cols);
  for (Eigen::Index idx = 0; idx < rows * cols; ++idx) {
    const Json& entry = j.at(static_cast<std::size_t>(idx));
    double re = 0.0;
    double im = 0.0;
    if (entry.is_number()) {
      re = entry.get<double>();
    } else if (entry.is_array() && entry.size() == 2 && entry[0].is_number() && entry[1].is_number()) {
      re = entry[0].get<double>();
      im = entry[1].get<double>();
    } else {
      throw IoError("matrix entry must be a number or an [re, im] pair");
    }
    out(idx / cols, idx % cols) = Complex(re, im);
  }
  return out;
}

Json system_to_json(const PopescuSystem& sys) {
  Json v = Json::array();
  for (const auto& vk : sys.v()) v.push_back(matrix_to_json(vk));
  return Json{{"d", sys.d()}, {"n", sys.n()}, {"v", v}, {"rho", matrix_to_json(sys.rho())}};
}

PopescuSystem system_from_json(const Json& j) {
  if (!j.is_object()) throw IoError("system document must be a JSON object");
  const int d = require_int(j, "d");
  const int n = require_int(j, "n");
  if (d < 1 || n < 1) throw IoError("\"d\" and \"n\" must be positive");
  if (!j.contains("v") || !j.at("v").is_array() || static_cast<int>(j.at("v").size()) != d) {
    throw IoError("\"v\" must be a list of d matrices");
  }
  std::vector<CMatrix> v;
  for (const auto& entry : j.at("v")) v.push_back(matrix_from_json(entry, n, n));
  if (!j.contains("rho") || j.at("rho").is_null()) return PopescuSystem::with_invariant_state(std::move(v));
  return PopescuSystem(std::move(v), matrix_from_json(j.at("rho"), n, n));
}

Json hamiltonian_to_json(const LocalHamiltonian& h) {
  return Json{{"d", h.d()}, {"m", h.m()}, {"label", h.label()}, {"h0", matrix_to_json(h.h0())}};
}

LocalHamiltonian hamiltonian_from_json(const Json& j) {
  if (!j.is_object()) throw IoError("hamiltonian document must be a JSON object");
  const int d = require_int(j, "d");
  const int m = require_int(j, "m");
  if (d < 1 || m < 1 || m > 8) throw IoError("\"d\" and \"m\" must be positive (m <= 8)");
  Eigen::Index dim = 1;
  for (int k = 0; k < m; ++k) dim *= d;
  if (!j.contains("h0")) throw IoError("missing field \"h0\"");
  std::string label = j.value("label", std::string("imported"));
  return LocalHamiltonian(d, m, matrix_from_json(j.at("h0"), dim, dim), std::move(label));
}

Json report_to_json(const SpectralReport& report) {
  Json eig = Json::array();
  for (const auto& z : report.eigenvalues) eig.push_back({z.real(), z.imag()});
  return Json{{"eigenvalues", eig},
              {"alpha", report.alpha},
              {"xi", number_or_null(report.correlation_length)},
              {"ergodic", report.ergodic},
              {"strongly_mixing", report.strongly_mixing},
              {"detailed_balance", report.detailed_balance}};
}

Json sweep_to_json(const SweepResult& sweep) {
  Json rows = Json::array();
  for (const auto& row : sweep.rows) {
    rows.push_back(Json{{"t", row.t.value()},
                        {"feasible", row.feasible},
                        {"energy", number_or_null(row.energy)},
                        {"alpha", number_or_null(row.alpha)},
                        {"xi", number_or_null(row.xi)}});
  }
  return Json{{"model", sweep.model}, {"s", sweep.s.value()}, {"argmin_t", sweep.argmin_t.value()}, {"rows", rows}};
}

std::string sweep_to_csv(const SweepResult& sweep) {
  std::string out = "t,energy,alpha,xi,feasible\n";
  for (const auto& row : sweep.rows) {
    out += format_double(row.t.value()) + "," + format_double(row.energy) + "," + format_double(row.alpha) + "," +
           format_double(row.xi) + "," + (row.feasible ? "true" : "false") + "\n";
  }
  return out;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw IoError("cannot parse " + path.string() + ": " + e.what());
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << contents;
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

}  // namespace fcs
