#include "aamr/geometry.hpp"
#include "aamr/sets.hpp"

#include <optional>

namespace aamr {

namespace {

struct AffinePiece {
    Vector offset;
    Matrix basis;
};

std::optional<AffinePiece> as_affine(const ConvexSet& set)
{
    if (const auto* s = dynamic_cast<const LinearSubspace*>(&set)) {
        return AffinePiece{Vector::Zero(s->dim()), s->basis()};
    }
    if (const auto* s = dynamic_cast<const AffineSubspace*>(&set)) {
        return AffinePiece{s->offset(), s->direction().basis()};
    }
    if (const auto* s = dynamic_cast<const Hyperplane*>(&set)) {
        const Vector& a = s->normal();
        const double a2 = a.squaredNorm();
        const Matrix complement = Matrix::Identity(a.size(), a.size()) - a * a.transpose() / a2;
        return AffinePiece{(s->offset() / a2) * a, orthonormal_basis(complement)};
    }
    return std::nullopt;
}

Vector affine_oracle(const std::vector<AffinePiece>& pieces, const Vector& x, double tol)
{
    const Index n = x.size();
    Matrix shared = pieces.front().basis;
    for (std::size_t i = 1; i < pieces.size(); ++i) {
        shared = geometry::subspace_intersection(shared, pieces[i].basis);
    }

    // Common point: minimum-norm solution of (I - P_i) y = (I - P_i) y_i for all i.
    const auto m = static_cast<Index>(pieces.size());
    Matrix system(m * n, n);
    Vector rhs(m * n);
    for (Index i = 0; i < m; ++i) {
        const auto& p = pieces[static_cast<std::size_t>(i)];
        const Matrix complement = Matrix::Identity(n, n) - p.basis * p.basis.transpose();
        system.middleRows(i * n, n) = complement;
        rhs.segment(i * n, n) = complement * p.offset;
    }
    const Vector y = system.completeOrthogonalDecomposition().solve(rhs);
    for (const auto& p : pieces) {
        const Vector miss = (y - p.offset) - p.basis * (p.basis.transpose() * (y - p.offset));
        if (miss.norm() > tol * (1.0 + y.norm())) {
            throw ParameterError("intersection oracle: affine subspaces do not intersect");
        }
    }
    const Vector d = x - y;
    if (shared.cols() == 0) {
        return y;
    }
    return y + shared * (shared.transpose() * d);
}

Vector box_oracle(const std::vector<const Box*>& boxes, const Vector& x, double tol)
{
    Vector lower = boxes.front()->lower();
    Vector upper = boxes.front()->upper();
    for (const Box* b : boxes) {
        lower = lower.cwiseMax(b->lower());
        upper = upper.cwiseMin(b->upper());
    }
    if ((lower.array() > upper.array() + tol).any()) {
        throw ParameterError("intersection oracle: boxes do not intersect");
    }
    upper = upper.cwiseMax(lower);
    return x.cwiseMax(lower).cwiseMin(upper);
}

} // namespace

Vector project_intersection_oracle(std::span<const SetPtr> sets, const Vector& x, double tol)
{
    if (sets.empty()) {
        throw ParameterError("intersection oracle needs at least one set");
    }
    for (const auto& s : sets) {
        require_dim(s->dim(), x.size(), "intersection oracle");
    }
    if (sets.size() == 1) {
        return sets.front()->project(x);
    }

    std::vector<AffinePiece> pieces;
    std::vector<const Box*> boxes;
    for (const auto& s : sets) {
        if (auto piece = as_affine(*s)) {
            pieces.push_back(std::move(*piece));
        } else if (const auto* b = dynamic_cast<const Box*>(s.get())) {
            boxes.push_back(b);
        }
    }
    if (pieces.size() == sets.size()) {
        return affine_oracle(pieces, x, tol);
    }
    if (boxes.size() == sets.size()) {
        return box_oracle(boxes, x, tol);
    }
    throw NoOracleError("no closed-form intersection oracle for this family of sets");
}

} // namespace aamr
