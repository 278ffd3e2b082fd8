#pragma once

// JSON and CSV formats exchanged with the command-line tool.
//
// Complex numbers are [re, im] pairs; matrices are flat row-major lists.
//
//   system:      {"d": int, "n": int, "v": [[[re,im], ...] x d], "rho": [[re,im], ...]}
//   hamiltonian: {"d": int, "m": int, "h0": [[re,im], ...], "label": str?}
//   spectrum:    {"eigenvalues": [[re,im], ...], "alpha": r, "xi": r|null,
//                 "ergodic": b, "strongly_mixing": b, "detailed_balance": b}
//
// Doubles are written with 17 significant digits in the C locale.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "fcs/models.hpp"
#include "fcs/popescu.hpp"
#include "fcs/transfer.hpp"

namespace fcs {

using Json = nlohmann::json;

/// "%.17g"; non-finite values become "nan", "inf", "-inf".
std::string format_double(double x);

Json matrix_to_json(const CMatrix& m);
/// Throws IoError on a malformed list or wrong entry count.
CMatrix matrix_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols);

Json system_to_json(const PopescuSystem& sys);
/// A missing "rho" is replaced by the invariant state. Throws IoError on
/// schema problems; the PopescuSystem constructor may still reject values.
PopescuSystem system_from_json(const Json& j);

Json hamiltonian_to_json(const LocalHamiltonian& h);
LocalHamiltonian hamiltonian_from_json(const Json& j);

Json report_to_json(const SpectralReport& report);
Json sweep_to_json(const SweepResult& sweep);
std::string sweep_to_csv(const SweepResult& sweep);

/// Parses a file as JSON; throws IoError with a diagnostic.
Json read_json_file(const std::filesystem::path& path);

/// Writes via a temporary sibling file and rename. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace fcs
