#pragma once

#include <span>
#include <vector>

#include "tetraverify/linalg.hpp"

namespace tetraverify::oracle {

/// Reference embedding that never touches bit masks of the embedded
/// operator: permute tensor legs so the target sites come first, take
/// kron(op, I), and permute back.
template <class D>
Matrix<typename D::Scalar> embed_by_interleaving(const Eigen::MatrixBase<D>& op, std::span<const int> sites, int n) {
    using Scalar = typename D::Scalar;
    const int m = static_cast<int>(sites.size());
    std::vector<int> order(sites.begin(), sites.end());  // new leg order, 1-based sites
    for (int s = 1; s <= n; ++s) {
        bool target = false;
        for (int t : sites) target = target || t == s;
        if (!target) order.push_back(s);
    }
    const Eigen::Index dim = Eigen::Index{1} << n;
    // perm(new_index, old_index) = 1 when new_index lists the digits of old_index in `order`.
    Matrix<Scalar> perm = Matrix<Scalar>::Zero(dim, dim);
    for (Eigen::Index old_index = 0; old_index < dim; ++old_index) {
        std::vector<int> digits(static_cast<std::size_t>(n));
        for (int s = 1; s <= n; ++s) digits[static_cast<std::size_t>(s - 1)] = (old_index >> (n - s)) & 1;
        Eigen::Index new_index = 0;
        for (int s : order) new_index = new_index * 2 + digits[static_cast<std::size_t>(s - 1)];
        perm(new_index, old_index) = Scalar(1);
    }
    const Matrix<Scalar> identity = Matrix<Scalar>::Identity(Eigen::Index{1} << (n - m), Eigen::Index{1} << (n - m));
    const Matrix<Scalar> lifted = kron(op, identity);
    return perm.transpose() * lifted * perm;
}

}  // namespace tetraverify::oracle
