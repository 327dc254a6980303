#pragma once

#include "aamr/types.hpp"

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace aamr {

/// Nonempty closed convex subset of R^n with an exact projector.
///
/// Set descriptions are immutable once built, so a single instance may be
/// shared across threads; `project` is a pure function of its argument.
class ConvexSet {
public:
    virtual ~ConvexSet() = default;

    virtual Index dim() const = 0;
    virtual std::string kind() const = 0;

    /// Nearest point of the set to `x`. Throws DimensionError on size mismatch.
    Vector project(const Vector& x) const
    {
        require_dim(dim(), x.size(), "project");
        return project_unchecked(x);
    }

protected:
    virtual Vector project_unchecked(const Vector& x) const = 0;
};

using SetPtr = std::shared_ptr<const ConvexSet>;

/// Orthonormal basis for the column span of `m`, via QR with column pivoting.
/// Columns whose pivot magnitude is at most `rel_tol` times the largest pivot are dropped.
Matrix orthonormal_basis(const Matrix& m, double rel_tol = 1e-12);

/// max |Q^T Q - I| over all entries.
double orthonormality_defect(const Matrix& q);

class LinearSubspace final : public ConvexSet {
public:
    /// Subspace spanned by the columns of `spanning` (n x k, any rank).
    static LinearSubspace from_spanning(const Matrix& spanning);
    /// Subspace with a basis that is already orthonormal; verified within 1e-12 * n.
    static LinearSubspace from_orthonormal(Matrix basis);
    static LinearSubspace whole_space(Index n);
    static LinearSubspace zero(Index n);

    Index dim() const override { return basis_.rows(); }
    std::string kind() const override { return "subspace"; }
    Index subspace_dim() const { return basis_.cols(); }
    const Matrix& basis() const { return basis_; }

protected:
    Vector project_unchecked(const Vector& x) const override;

private:
    explicit LinearSubspace(Matrix basis) : basis_(std::move(basis)) {}
    Matrix basis_;
};

/// offset + direction.
class AffineSubspace final : public ConvexSet {
public:
    AffineSubspace(Vector offset, LinearSubspace direction);

    Index dim() const override { return offset_.size(); }
    std::string kind() const override { return "affine"; }
    const Vector& offset() const { return offset_; }
    const LinearSubspace& direction() const { return direction_; }

protected:
    Vector project_unchecked(const Vector& x) const override;

private:
    Vector offset_;
    LinearSubspace direction_;
};

class Ball final : public ConvexSet {
public:
    Ball(Vector center, double radius);

    Index dim() const override { return center_.size(); }
    std::string kind() const override { return "ball"; }
    const Vector& center() const { return center_; }
    double radius() const { return radius_; }

protected:
    Vector project_unchecked(const Vector& x) const override;

private:
    Vector center_;
    double radius_;
};

/// { x : <a, x> <= b }
class Halfspace final : public ConvexSet {
public:
    Halfspace(Vector normal, double offset);

    Index dim() const override { return normal_.size(); }
    std::string kind() const override { return "halfspace"; }
    const Vector& normal() const { return normal_; }
    double offset() const { return offset_; }

protected:
    Vector project_unchecked(const Vector& x) const override;

private:
    Vector normal_;
    double offset_;
};

/// { x : <a, x> = b }
class Hyperplane final : public ConvexSet {
public:
    Hyperplane(Vector normal, double offset);

    Index dim() const override { return normal_.size(); }
    std::string kind() const override { return "hyperplane"; }
    const Vector& normal() const { return normal_; }
    double offset() const { return offset_; }

protected:
    Vector project_unchecked(const Vector& x) const override;

private:
    Vector normal_;
    double offset_;
};

class Box final : public ConvexSet {
public:
    Box(Vector lower, Vector upper);

    Index dim() const override { return lower_.size(); }
    std::string kind() const override { return "box"; }
    const Vector& lower() const { return lower_; }
    const Vector& upper() const { return upper_; }

protected:
    Vector project_unchecked(const Vector& x) const override;

private:
    Vector lower_;
    Vector upper_;
};

/// The set `inner - shift`. Projection: P(x) = P_inner(x + shift) - shift.
class Translate final : public ConvexSet {
public:
    Translate(SetPtr inner, Vector shift);

    Index dim() const override { return inner_->dim(); }
    std::string kind() const override { return "translate"; }
    const SetPtr& inner() const { return inner_; }
    const Vector& shift() const { return shift_; }

protected:
    Vector project_unchecked(const Vector& x) const override;

private:
    SetPtr inner_;
    Vector shift_;
};

/// The dilation `factor * inner`, factor != 0. Projection: P(x) = factor * P_inner(x / factor).
class Scaled final : public ConvexSet {
public:
    Scaled(SetPtr inner, double factor);

    Index dim() const override { return inner_->dim(); }
    std::string kind() const override { return "scaled"; }
    double factor() const { return factor_; }

protected:
    Vector project_unchecked(const Vector& x) const override;

private:
    SetPtr inner_;
    double factor_;
};

/// Cartesian product C_1 x ... x C_r, stored as consecutive coordinate blocks.
class ProductSet final : public ConvexSet {
public:
    explicit ProductSet(std::vector<SetPtr> factors);

    Index dim() const override { return dim_; }
    std::string kind() const override { return "product"; }
    const std::vector<SetPtr>& factors() const { return factors_; }

protected:
    Vector project_unchecked(const Vector& x) const override;

private:
    std::vector<SetPtr> factors_;
    Index dim_ = 0;
};

/// D = {(x, ..., x)} in (R^n)^r. Projection replicates the blockwise mean.
class Diagonal final : public ConvexSet {
public:
    Diagonal(Index copies, Index base_dim);

    Index dim() const override { return copies_ * base_dim_; }
    std::string kind() const override { return "diagonal"; }
    Index copies() const { return copies_; }
    Index base_dim() const { return base_dim_; }

protected:
    Vector project_unchecked(const Vector& x) const override;

private:
    Index copies_;
    Index base_dim_;
};

/// Mean of the `copies` consecutive blocks of `x`.
Vector block_mean(const Vector& x, Index copies);

/// (x, ..., x) with `copies` blocks.
Vector replicate(const Vector& x, Index copies);

/// 2*beta*P_C(x) - x. beta must lie in (0, 1]; beta = 1 is the classical reflector.
Vector modified_reflect(const ConvexSet& set, double beta, const Vector& x);

/// Closed-form P_{C_1 ∩ ... ∩ C_r}(x), independent of any iterative method.
///
/// Supported families: linear/affine subspaces and hyperplanes (intersected
/// through principal vectors and a least-squares common point), and boxes
/// (componentwise intersection). A single set of any kind reduces to its
/// projector. Anything else raises NoOracleError; an empty intersection within
/// `tol` raises ParameterError.
Vector project_intersection_oracle(std::span<const SetPtr> sets, const Vector& x, double tol = 1e-9);

} // namespace aamr
