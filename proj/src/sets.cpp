#include "aamr/sets.hpp"

#include <algorithm>
#include <cmath>

namespace aamr {

namespace {

void require_finite(const Vector& v, const char* what)
{
    if (!v.allFinite()) {
        throw ParameterError(std::string(what) + " has non-finite coordinates");
    }
}

} // namespace

Matrix orthonormal_basis(const Matrix& m, double rel_tol)
{
    const Index n = m.rows();
    if (m.cols() == 0 || m.isZero(0.0)) {
        return Matrix(n, 0);
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(m);
    const auto& r = qr.matrixR();
    const Index k = std::min(m.rows(), m.cols());
    const double scale = std::abs(r(0, 0));
    Index rank = 0;
    while (rank < k && std::abs(r(rank, rank)) > rel_tol * scale) {
        ++rank;
    }
    Matrix q = qr.householderQ() * Matrix::Identity(n, rank);
    return q;
}

double orthonormality_defect(const Matrix& q)
{
    if (q.cols() == 0) {
        return 0.0;
    }
    const Matrix gram = q.transpose() * q;
    return (gram - Matrix::Identity(q.cols(), q.cols())).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------

LinearSubspace LinearSubspace::from_spanning(const Matrix& spanning)
{
    if (!spanning.allFinite()) {
        throw ParameterError("subspace basis has non-finite entries");
    }
    if (spanning.rows() == 0) {
        throw ParameterError("subspace ambient dimension must be positive");
    }
    return LinearSubspace(orthonormal_basis(spanning));
}

LinearSubspace LinearSubspace::from_orthonormal(Matrix basis)
{
    const double tol = 1e-12 * static_cast<double>(std::max<Index>(basis.rows(), 1));
    if (!basis.allFinite() || orthonormality_defect(basis) > tol) {
        throw ParameterError("subspace basis is not orthonormal");
    }
    return LinearSubspace(std::move(basis));
}

LinearSubspace LinearSubspace::whole_space(Index n) { return LinearSubspace(Matrix::Identity(n, n)); }

LinearSubspace LinearSubspace::zero(Index n) { return LinearSubspace(Matrix(n, 0)); }

Vector LinearSubspace::project_unchecked(const Vector& x) const
{
    if (basis_.cols() == 0) {
        return Vector::Zero(x.size());
    }
    return basis_ * (basis_.transpose() * x);
}

AffineSubspace::AffineSubspace(Vector offset, LinearSubspace direction)
    : offset_(std::move(offset)), direction_(std::move(direction))
{
    require_finite(offset_, "affine offset");
    require_dim(direction_.dim(), offset_.size(), "affine subspace");
}

Vector AffineSubspace::project_unchecked(const Vector& x) const
{
    return offset_ + direction_.project(x - offset_);
}

Ball::Ball(Vector center, double radius) : center_(std::move(center)), radius_(radius)
{
    require_finite(center_, "ball center");
    if (!(radius_ >= 0.0) || !std::isfinite(radius_)) {
        throw ParameterError("ball radius must be a finite nonnegative number");
    }
}

Vector Ball::project_unchecked(const Vector& x) const
{
    const Vector d = x - center_;
    const double dist = d.norm();
    if (dist <= radius_) {
        return x;
    }
    return center_ + (radius_ / dist) * d;
}

Halfspace::Halfspace(Vector normal, double offset) : normal_(std::move(normal)), offset_(offset)
{
    require_finite(normal_, "halfspace normal");
    if (normal_.squaredNorm() == 0.0) {
        throw ParameterError("halfspace normal must be nonzero");
    }
    if (!std::isfinite(offset_)) {
        throw ParameterError("halfspace offset must be finite");
    }
}

Vector Halfspace::project_unchecked(const Vector& x) const
{
    const double excess = normal_.dot(x) - offset_;
    if (excess <= 0.0) {
        return x;
    }
    return x - (excess / normal_.squaredNorm()) * normal_;
}

Hyperplane::Hyperplane(Vector normal, double offset) : normal_(std::move(normal)), offset_(offset)
{
    require_finite(normal_, "hyperplane normal");
    if (normal_.squaredNorm() == 0.0) {
        throw ParameterError("hyperplane normal must be nonzero");
    }
    if (!std::isfinite(offset_)) {
        throw ParameterError("hyperplane offset must be finite");
    }
}

Vector Hyperplane::project_unchecked(const Vector& x) const
{
    return x - ((normal_.dot(x) - offset_) / normal_.squaredNorm()) * normal_;
}

Box::Box(Vector lower, Vector upper) : lower_(std::move(lower)), upper_(std::move(upper))
{
    require_dim(lower_.size(), upper_.size(), "box bounds");
    if (lower_.size() == 0) {
        throw ParameterError("box dimension must be positive");
    }
    if (lower_.hasNaN() || upper_.hasNaN()) {
        throw ParameterError("box bounds contain NaN");
    }
    if ((lower_.array() > upper_.array()).any()) {
        throw ParameterError("box lower bound exceeds upper bound");
    }
}

Vector Box::project_unchecked(const Vector& x) const { return x.cwiseMax(lower_).cwiseMin(upper_); }

Translate::Translate(SetPtr inner, Vector shift) : inner_(std::move(inner)), shift_(std::move(shift))
{
    if (!inner_) {
        throw ParameterError("translate of a null set");
    }
    require_finite(shift_, "translation");
    require_dim(inner_->dim(), shift_.size(), "translate");
}

Vector Translate::project_unchecked(const Vector& x) const { return inner_->project(x + shift_) - shift_; }

Scaled::Scaled(SetPtr inner, double factor) : inner_(std::move(inner)), factor_(factor)
{
    if (!inner_) {
        throw ParameterError("dilation of a null set");
    }
    if (factor_ == 0.0 || !std::isfinite(factor_)) {
        throw ParameterError("dilation factor must be finite and nonzero");
    }
}

Vector Scaled::project_unchecked(const Vector& x) const { return factor_ * inner_->project(x / factor_); }

ProductSet::ProductSet(std::vector<SetPtr> factors) : factors_(std::move(factors))
{
    if (factors_.empty()) {
        throw ParameterError("product of zero sets");
    }
    for (const auto& f : factors_) {
        if (!f) {
            throw ParameterError("product factor is null");
        }
        dim_ += f->dim();
    }
}

Vector ProductSet::project_unchecked(const Vector& x) const
{
    Vector out(x.size());
    Index offset = 0;
    for (const auto& f : factors_) {
        const Index d = f->dim();
        out.segment(offset, d) = f->project(x.segment(offset, d));
        offset += d;
    }
    return out;
}

Diagonal::Diagonal(Index copies, Index base_dim) : copies_(copies), base_dim_(base_dim)
{
    if (copies_ < 1 || base_dim_ < 1) {
        throw ParameterError("diagonal needs at least one copy of a positive-dimensional space");
    }
}

Vector Diagonal::project_unchecked(const Vector& x) const { return replicate(block_mean(x, copies_), copies_); }

Vector block_mean(const Vector& x, Index copies)
{
    if (copies < 1 || x.size() % copies != 0) {
        throw DimensionError("block_mean: vector length is not a multiple of the block count");
    }
    const Index n = x.size() / copies;
    Vector mean = Vector::Zero(n);
    for (Index i = 0; i < copies; ++i) {
        mean += x.segment(i * n, n);
    }
    return mean / static_cast<double>(copies);
}

Vector replicate(const Vector& x, Index copies)
{
    Vector out(x.size() * copies);
    for (Index i = 0; i < copies; ++i) {
        out.segment(i * x.size(), x.size()) = x;
    }
    return out;
}

Vector modified_reflect(const ConvexSet& set, double beta, const Vector& x)
{
    if (!(beta > 0.0 && beta <= 1.0)) {
        throw ParameterError("modified reflector parameter beta must lie in (0,1]");
    }
    return 2.0 * beta * set.project(x) - x;
}

} // namespace aamr
