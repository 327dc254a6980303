#pragma once

#include "aamr/types.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace aamr::geometry {

/// Principal angles at or below this value (radians) count as shared directions.
inline constexpr double kZeroAngle = 1e-8;

/// Two subspaces with their intersection basis and Friedrichs angle.
struct SubspacePair {
    Matrix qu;          ///< n x d_U orthonormal basis of U
    Matrix qv;          ///< n x d_V orthonormal basis of V
    Matrix qi;          ///< orthonormal basis of U ∩ V (may have zero columns)
    double theta_f = 0; ///< Friedrichs angle in radians
};

/// Principal angles between span(qu) and span(qv), nondecreasing.
///
/// cos(theta_i) are the singular values of qu^T qv. Angles below pi/4 are
/// recovered from the sines, i.e. the singular values of (I - qu qu^T) qv, which
/// keeps near-zero angles accurate where acos loses half the digits.
/// Throws ParameterError if either basis is not orthonormal.
std::vector<double> principal_angles(const Matrix& qu, const Matrix& qv);

/// Orthonormal basis of U ∩ V from the principal vectors of V whose angle is
/// at most `zero_angle`. Empty (n x 0) for a trivial intersection.
Matrix subspace_intersection(const Matrix& qu, const Matrix& qv, double zero_angle = kZeroAngle);

/// First principal angle past the shared directions. Throws ParameterError
/// ("coincident subspaces") when one subspace contains the other.
double friedrichs_angle(const Matrix& qu, const Matrix& qv, double zero_angle = kZeroAngle);

SubspacePair make_subspace_pair(Matrix qu, Matrix qv, double zero_angle = kZeroAngle);

/// |z - Q Q^T z| for orthonormal Q.
double distance_to_span(const Matrix& q, const Vector& z);

struct RandomPairOptions {
    Index min_intersection_dim = 1;
    /// Closed interval the Friedrichs angle must fall in (rejection sampling).
    std::optional<std::pair<double, double>> target_angle;
    int max_draws = 10000;
};

/// Draws (d_U, d_V) uniformly from [ceil(n/4), min(ceil(3n/4), n-1)]^2 until
/// d_U + d_V - n >= min_intersection_dim, then orthonormalizes standard Gaussian
/// n x d matrices. Deterministic in `seed`.
SubspacePair random_subspace_pair(Index n, std::uint64_t seed, const RandomPairOptions& options = {});

/// Same dimension law as random_subspace_pair, but the principal angles outside
/// the intersection are prescribed: the smallest is `theta`, the rest are uniform
/// in [theta, pi/2]. Everything is then rotated by a random orthogonal matrix.
SubspacePair constructed_subspace_pair(Index n, std::uint64_t seed, double theta);

/// Random orthogonal n x n matrix (QR of a Gaussian matrix).
Matrix random_orthogonal(Index n, std::mt19937_64& rng);

/// Standard Gaussian vector rescaled to the given Euclidean norm.
Vector random_vector_with_norm(Index n, double norm, std::mt19937_64& rng);

} // namespace aamr::geometry
