#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "vortexforge/functionals.hpp"
#include "vortexforge/mountain_pass.hpp"
#include "vortexforge/report.hpp"
#include "vortexforge/verify.hpp"

namespace vortex {

/// Full-precision rendering (17 significant digits) used by every CSV
/// writer, so a written value parses back to the identical double.
std::string format_full(double v);

/// CSV with header `r,value`, one row per node, plus explicit boundary rows
/// at r = 0 and r = R carrying the implicit zeros.
void write_profile_csv(const std::filesystem::path& path, const Profile& A);

/// CSV with header `r,a1,a2`, boundary rows included as above.
void write_pair_csv(const std::filesystem::path& path, const VortexPair& pair);

/// Reads a pair CSV back, reconstructing the uniform grid from the rows.
/// params.R = 0 adopts the radius found in the file; a positive params.R
/// must agree with it.  Throws std::runtime_error on malformed input.
VortexPair read_pair_csv(const std::filesystem::path& path, PhysicsParams params);

/// Per-round path diagnostics: header `round,max_J,argmax_t,grad_norm`.
void write_mp_history_csv(const std::filesystem::path& path,
                          std::span<const MpHistoryRow> rows);

/// JSON report combining whichever sections are present (null pointers are
/// skipped): solver diagnostics, polish diagnostics, structural checks, and
/// the functional snapshot.
std::string report_json(const SolveReport* solve,
                        const SolveReport* polish,
                        const VerifyReport* verify,
                        const FunctionalValues* functionals);

void write_report_json(const std::filesystem::path& path,
                       const SolveReport* solve,
                       const SolveReport* polish,
                       const VerifyReport* verify,
                       const FunctionalValues* functionals);

} // namespace vortex
