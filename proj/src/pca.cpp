#include "pccdr/pca.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "pccdr/errors.hpp"

namespace pccdr {

Embedding PcaModel::transform(const Matrix& data) const {
    const std::size_t d = mean.size();
    if (data.cols() != d) throw InvalidInput("PCA transform: dimension mismatch");
    Embedding out(data.rows(), components.rows());
    for (std::size_t i = 0; i < data.rows(); ++i) {
        for (std::size_t c = 0; c < components.rows(); ++c) {
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j) s += (data(i, j) - mean[j]) * components(c, j);
            out(i, c) = s;
        }
    }
    return out;
}

std::pair<PcaModel, Embedding> pca_fit_transform(const Matrix& data, std::size_t m) {
    const std::size_t n = data.rows();
    const std::size_t d = data.cols();
    if (m < 1 || m > std::min(n, d)) {
        throw InvalidInput("PCA needs 1 <= m <= min(N, d); got m=" + std::to_string(m));
    }

    PcaModel model;
    model.mean.assign(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) model.mean[j] += data(i, j);
    }
    for (double& v : model.mean) v /= static_cast<double>(n);

    Eigen::MatrixXd centered(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            centered(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                data(i, j) - model.mean[j];
        }
    }
    const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
    const Eigen::MatrixXd cov = (centered.transpose() * centered) / denom;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) throw NumericalError("PCA eigensolver failed", 0);

    // Eigenvalues come back ascending.
    model.components = Matrix(m, d);
    model.explained_variance.resize(m);
    for (std::size_t c = 0; c < m; ++c) {
        const auto col = static_cast<Eigen::Index>(d - 1 - c);
        model.explained_variance[c] = std::max(0.0, solver.eigenvalues()(col));
        Eigen::VectorXd v = solver.eigenvectors().col(col);
        Eigen::Index arg = 0;
        for (Eigen::Index j = 1; j < v.size(); ++j) {
            if (std::fabs(v(j)) > std::fabs(v(arg))) arg = j;
        }
        if (v(arg) < 0.0) v = -v;
        for (std::size_t j = 0; j < d; ++j) model.components(c, j) = v(static_cast<Eigen::Index>(j));
    }

    Embedding emb = model.transform(data);
    return {std::move(model), std::move(emb)};
}

}  // namespace pccdr
