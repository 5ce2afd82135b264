#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vbsge/aklt_mps.hpp"
#include "vbsge/entanglement.hpp"
#include "vbsge/exact_oracle.hpp"
#include "vbsge/output.hpp"

namespace vbs {

// Exit codes of the vbsge tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCapacity = 3;
inline constexpr int kExitVerification = 4;

OutputRecord cmd_table(unsigned l_max);
OutputRecord cmd_entanglement(unsigned block_length, Method method, std::size_t samples);
OutputRecord cmd_norm(unsigned n_sites, Boundary bc, int precision);
OutputRecord cmd_entropy(unsigned block_length, LogBase base, bool verbose);
OutputRecord cmd_correlator(unsigned l_max);
OutputRecord cmd_spectrum();

enum class SweepQuantity { geoment, entropy, correlator };
OutputRecord cmd_sweep(SweepQuantity quantity, unsigned l_max);

struct VerifyOptions {
  unsigned n_sites = 4;
  Boundary bc = Boundary::obc;
  unsigned block_length = 2;
  std::uint64_t seed = kDefaultSeed;
  unsigned restarts = 10;
};

/// Runs the oracle cross-checks; the record has one row per clause. Throws
/// CapacityError before allocating anything oversized.
OutputRecord cmd_verify(const VerifyOptions& options);
bool verify_passed(const OutputRecord& record);

/// Full command-line entry point; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vbs
