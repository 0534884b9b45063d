#ifndef TRACEGEN_CLI_HPP
#define TRACEGEN_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "tracegen/formats.hpp"

namespace tracegen {

// Exit codes shared by every subcommand.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitResource = 3;

struct CommonOptions {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> samples;
    std::optional<std::size_t> budget;
    std::optional<std::string> out_path;
};

// Prints the synchronization monoid, clique count, Moebius polynomial,
// smallest root, irreducibility and the structural dichotomy criterion.
int cmd_analyze(const RunConfig& config, std::ostream& os);

// Solves path/ring targets into local distributions and echoes the realized
// valuation; writes a loadable [dists] section.
int cmd_solve(const RunConfig& config, const CommonOptions& opts,
              const std::optional<std::string>& remove_letter, std::ostream& os);

// Runs psa/pfsa/naive generation per the [run] section and writes the trace
// in the trace text format plus a stats footer.
int cmd_generate(const RunConfig& config, const CommonOptions& opts,
                 const std::optional<std::string>& increments_path, std::ostream& os);

// Runs one named scenario, or every acceptance scenario.
int cmd_verify(const std::optional<std::string>& scenario, const CommonOptions& opts,
               std::ostream& os);

// Brute-force cross checks: enumeration vs growth series, both Moebius
// transform routes, solver closed forms vs recurrences.
int cmd_oracle(const RunConfig& config, const CommonOptions& opts, std::size_t depth,
               std::ostream& os);

} // namespace tracegen

#endif
