#pragma once

#include "aamr/sets.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace aamr {

/// A parsed problem description: ambient dimension plus the constraint sets.
struct Problem {
    Index dim = 0;
    std::vector<SetPtr> sets;
};

/// Parses the JSON problem format
///
///   {"dim": n, "sets": [{"type": "ball", "center": [...], "radius": r},
///                       {"type": "subspace", "basis": [[...], ...]}, ...]}
///
/// Set types: ball, subspace, affine (offset + basis), halfspace (a, b),
/// hyperplane (a, b), box (lower, upper). A basis is an n x d matrix given
/// row-major, so it has exactly `dim` rows. Errors are ParseError with the
/// path of the offending field, e.g. "sets[1].radius: must be nonnegative".
Problem parse_problem(std::string_view text);
Problem load_problem(const std::filesystem::path& path);

/// Comma-separated reals ("2,1" or "0.5, -3e-2"), parsed without locale.
Vector parse_vector(std::string_view text);

/// Shortest round-trip decimal form of x, independent of the global locale.
std::string format_number(double x);
/// Fixed notation with the given number of decimals, independent of locale.
std::string format_fixed(double x, int decimals);

} // namespace aamr
