#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "efgame/automorphism.hpp"
#include "efgame/structures.hpp"

namespace efg {

/// Knobs of the verification grids.
struct VerifyBounds {
    unsigned support = 6;      // supports drawn from {0..support-1}
    std::uint64_t gamma = 3;   // levels below gamma in the star grid
    unsigned prules = 10;      // sampled p-rules besides N's
    unsigned nus = 50;         // sampled nu per p-rule
    unsigned converse = 4;     // census for b = 2..converse
    unsigned rigidity = 6;     // support bound of the rigidity probe
    std::uint64_t seed = 1;
    bool fault = false;        // corrupt one coset parity in one grid point
};

/// Parses "k=v,k=v" over the field names above. Throws ParseError.
VerifyBounds parse_bounds(std::string_view text);

struct VerifyOutcome {
    std::size_t grid_points = 0;
    std::size_t violations = 0;  // failing grid points

    bool pass() const noexcept { return violations == 0; }
};

/// Runs every grid and writes a report ending in
/// "VERDICT: PASS 0-violations" or "VERDICT: FAIL <n>-violations".
VerifyOutcome run_verify(const VerifyBounds& bounds, std::ostream& report);

/// Random p-rules and nu's of the shapes the star grid uses.
PDescriptor sample_p_rule(std::uint64_t seed);
NuDescriptor sample_finite_nu(std::uint64_t seed, std::uint64_t gamma, unsigned support);
/// A nu on [0, gamma) satisfying the star condition for p, searched among
/// supports below `support`; nullopt when the search fails.
std::optional<NuDescriptor> star_solution(const PDescriptor& p, std::uint64_t gamma, unsigned support,
                                          std::uint64_t seed);

}  // namespace efg
