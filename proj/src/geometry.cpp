#include "aamr/geometry.hpp"

#include "aamr/sets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace aamr::geometry {

namespace {

void require_orthonormal(const Matrix& q, const char* which)
{
    const double tol = 1e-10 * static_cast<double>(std::max<Index>(q.rows(), 1));
    if (!q.allFinite() || orthonormality_defect(q) > tol) {
        throw ParameterError(std::string(which) + " basis is not orthonormal");
    }
}

struct AngleData {
    std::vector<double> angles;   // nondecreasing, min(d_U, d_V) entries
    Eigen::VectorXd sines;        // singular values of (I - P_U) Q_V, descending
    Matrix sine_vectors;          // matching right singular vectors (d_V x d_V)
};

AngleData analyse(const Matrix& qu, const Matrix& qv)
{
    require_dim(qu.rows(), qv.rows(), "principal angles");
    require_orthonormal(qu, "first");
    require_orthonormal(qv, "second");

    AngleData out;
    const Index k = std::min(qu.cols(), qv.cols());
    if (k == 0) {
        out.sines = Eigen::VectorXd(0);
        out.sine_vectors = Matrix(qv.cols(), 0);
        return out;
    }

    const Matrix cross = qu.transpose() * qv;
    Eigen::JacobiSVD<Matrix> cos_svd(cross);
    const Eigen::VectorXd cosines = cos_svd.singularValues();

    const Matrix residual = qv - qu * cross;
    Eigen::JacobiSVD<Matrix> sin_svd(residual, Eigen::ComputeThinV);
    out.sines = sin_svd.singularValues();
    out.sine_vectors = sin_svd.matrixV();

    const Index ns = out.sines.size();
    out.angles.reserve(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i) {
        const double c = std::clamp(cosines(i), 0.0, 1.0);
        const double s = std::clamp(out.sines(ns - 1 - i), 0.0, 1.0);
        out.angles.push_back(c * c >= 0.5 ? std::asin(s) : std::acos(c));
    }
    std::sort(out.angles.begin(), out.angles.end());
    return out;
}

Index shared_count(const std::vector<double>& angles, double zero_angle)
{
    return static_cast<Index>(std::count_if(angles.begin(), angles.end(),
                                            [&](double a) { return a <= zero_angle; }));
}

Matrix gaussian_matrix(Index rows, Index cols, std::mt19937_64& rng)
{
    std::normal_distribution<double> normal;
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) {
            m(i, j) = normal(rng);
        }
    }
    return m;
}

std::pair<Index, Index> sample_dims(Index n, Index min_shared, std::mt19937_64& rng)
{
    const Index lo = (n + 3) / 4;
    const Index hi = std::min<Index>((3 * n + 3) / 4, n - 1);
    if (n < 3 || lo > hi) {
        throw ParameterError("random subspace pairs need ambient dimension n >= 3");
    }
    if (min_shared < 0 || 2 * hi - n < min_shared) {
        throw ParameterError("requested intersection dimension is not reachable for this n");
    }
    std::uniform_int_distribution<Index> pick(lo, hi);
    for (;;) {
        const Index du = pick(rng);
        const Index dv = pick(rng);
        if (du + dv - n >= std::max<Index>(min_shared, 1)) {
            return {du, dv};
        }
    }
}

} // namespace

std::vector<double> principal_angles(const Matrix& qu, const Matrix& qv) { return analyse(qu, qv).angles; }

Matrix subspace_intersection(const Matrix& qu, const Matrix& qv, double zero_angle)
{
    const AngleData data = analyse(qu, qv);
    const Index shared = shared_count(data.angles, zero_angle);
    if (shared == 0) {
        return Matrix(qu.rows(), 0);
    }
    // Smallest sines sit in the trailing columns of the SVD.
    return orthonormal_basis(qv * data.sine_vectors.rightCols(shared));
}

double friedrichs_angle(const Matrix& qu, const Matrix& qv, double zero_angle)
{
    const std::vector<double> angles = principal_angles(qu, qv);
    const auto shared = static_cast<std::size_t>(shared_count(angles, zero_angle));
    if (shared >= angles.size()) {
        throw ParameterError("coincident subspaces: one subspace contains the other");
    }
    return angles[shared];
}

SubspacePair make_subspace_pair(Matrix qu, Matrix qv, double zero_angle)
{
    SubspacePair pair;
    pair.theta_f = friedrichs_angle(qu, qv, zero_angle);
    pair.qi = subspace_intersection(qu, qv, zero_angle);
    pair.qu = std::move(qu);
    pair.qv = std::move(qv);
    return pair;
}

double distance_to_span(const Matrix& q, const Vector& z)
{
    if (q.cols() == 0) {
        return z.norm();
    }
    return (z - q * (q.transpose() * z)).norm();
}

Matrix random_orthogonal(Index n, std::mt19937_64& rng)
{
    Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(n, n, rng));
    return qr.householderQ() * Matrix::Identity(n, n);
}

Vector random_vector_with_norm(Index n, double norm, std::mt19937_64& rng)
{
    Vector v = gaussian_matrix(n, 1, rng).col(0);
    return v * (norm / v.norm());
}

SubspacePair random_subspace_pair(Index n, std::uint64_t seed, const RandomPairOptions& options)
{
    std::mt19937_64 rng(seed);
    const int draws = options.target_angle ? std::max(options.max_draws, 1) : 1;
    for (int attempt = 0; attempt < draws; ++attempt) {
        const auto [du, dv] = sample_dims(n, options.min_intersection_dim, rng);
        Matrix qu = orthonormal_basis(gaussian_matrix(n, du, rng));
        Matrix qv = orthonormal_basis(gaussian_matrix(n, dv, rng));
        SubspacePair pair = make_subspace_pair(std::move(qu), std::move(qv));
        if (!options.target_angle) {
            return pair;
        }
        const auto [lo, hi] = *options.target_angle;
        if (pair.theta_f >= lo && pair.theta_f <= hi) {
            return pair;
        }
    }
    throw ParameterError("no random subspace pair hit the target angle interval within " +
                         std::to_string(options.max_draws) + " draws");
}

SubspacePair constructed_subspace_pair(Index n, std::uint64_t seed, double theta)
{
    if (!(theta > kZeroAngle && theta <= std::numbers::pi / 2)) {
        throw ParameterError("target Friedrichs angle must lie in (0, pi/2]");
    }
    std::mt19937_64 rng(seed);
    const auto [du, dv] = sample_dims(n, 1, rng);
    const Index shared = du + dv - n;
    const Index small = std::min(du, dv) - shared; // paired directions, 2*small <= n - shared
    const Matrix rot = random_orthogonal(n, rng);

    std::uniform_real_distribution<double> spread(theta, std::numbers::pi / 2);
    Matrix narrow(n, shared + small);
    Matrix wide(n, std::max(du, dv));
    narrow.leftCols(shared) = rot.leftCols(shared);
    wide.leftCols(shared) = rot.leftCols(shared);
    for (Index i = 0; i < small; ++i) {
        const double phi = (i == 0 || theta >= std::numbers::pi / 2) ? theta : spread(rng);
        const auto e = rot.col(shared + i);
        const auto f = rot.col(shared + small + i);
        narrow.col(shared + i) = e;
        wide.col(shared + i) = std::cos(phi) * e + std::sin(phi) * f;
    }
    const Index rest = n - shared - 2 * small;
    wide.rightCols(rest) = rot.rightCols(rest);

    if (du <= dv) {
        return make_subspace_pair(std::move(narrow), std::move(wide));
    }
    return make_subspace_pair(std::move(wide), std::move(narrow));
}

} // namespace aamr::geometry
