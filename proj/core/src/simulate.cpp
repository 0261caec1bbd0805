#include "cotab/simulate.hpp"

#include <cmath>
#include <cstdio>

#include <Eigen/Eigenvalues>

#include "cotab/random.hpp"

namespace cotab {

GeneratedSample generate(const GeneratorSpec& spec) {
    const int p = spec.rows * spec.cols - 1;
    if (spec.base_table.rows() != spec.rows || spec.base_table.cols() != spec.cols) {
        throw DimensionError("base table shape does not match the spec shape");
    }
    if (spec.n < 1) {
        throw InvalidSpec("sample size must be positive");
    }
    if (!(spec.contamination >= 0.0 && spec.contamination <= 0.4)) {
        throw InvalidSpec("contamination fraction must lie in [0, 0.4]");
    }
    if (spec.coordinate_covariance.rows() != p || spec.coordinate_covariance.cols() != p) {
        throw DimensionError("coordinate covariance must be " + std::to_string(p) + "x" +
                             std::to_string(p));
    }
    const int n_out = static_cast<int>(std::floor(spec.contamination * spec.n));
    if (n_out > 0 && spec.contamination_shift.size() != p) {
        throw DimensionError("contamination shift must have dimension " + std::to_string(p));
    }

    const Eigen::MatrixXd sym =
        0.5 * (spec.coordinate_covariance + spec.coordinate_covariance.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw InvalidSpec("coordinate covariance eigendecomposition failed");
    }
    const double lmax = std::max(0.0, solver.eigenvalues().maxCoeff());
    if (solver.eigenvalues().minCoeff() < -1e-10 * std::max(1.0, lmax)) {
        throw InvalidSpec("coordinate covariance is not positive semidefinite");
    }
    // Square root with negative noise eigenvalues clamped; singular
    // covariances (variation confined to a subspace) are allowed.
    Eigen::MatrixXd root = solver.eigenvectors();
    for (int i = 0; i < p; ++i) {
        root.col(i) *= std::sqrt(std::max(0.0, solver.eigenvalues()[i]));
    }

    const auto sys = TableCoordinateSystem::build(spec.rows, spec.cols);
    const Eigen::VectorXd z0 =
        sys->full()->contrast().transpose() * clr(vectorize(spec.base_table)).values;

    std::vector<CompositionalTable> tables;
    tables.reserve(spec.n);
    std::vector<bool> truth(spec.n, false);
    for (int i = 0; i < spec.n; ++i) {
        Rng rng = Rng::derive(spec.seed, static_cast<std::uint64_t>(i));
        Eigen::VectorXd g(p);
        for (int j = 0; j < p; ++j) g[j] = rng.normal();
        Eigen::VectorXd z = z0 + root * g;
        if (i >= spec.n - n_out) {
            z += spec.contamination_shift;
            truth[i] = true;
        }
        const Composition cells = from_coords(IlrVector{z, sys->full()});
        char id[16];
        std::snprintf(id, sizeof(id), "s%04d", i + 1);
        tables.push_back(table_from_vector(cells, spec.rows, spec.cols,
                                           spec.base_table.row_labels(),
                                           spec.base_table.col_labels(), id));
    }
    return GeneratedSample{TableSample(std::move(tables), Part::whole), std::move(truth), sys};
}

} // namespace cotab
