#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "cotab/pca.hpp"
#include "cotab/table.hpp"

namespace cotab {

/// Recipe for a synthetic sample of compositional tables: Gaussian draws in
/// the pivot coordinate space around the base table, with a fraction of
/// observations shifted by a coordinate-space offset. Contamination acts in
/// coordinate space so every generated table stays strictly positive.
struct GeneratorSpec {
    int rows = 2;
    int cols = 2;
    CompositionalTable base_table;
    Eigen::MatrixXd coordinate_covariance;   ///< p x p PSD, p = IJ-1
    int n = 0;
    double contamination = 0.0;              ///< fraction in [0, 0.4]
    Eigen::VectorXd contamination_shift;     ///< coordinate-space offset
    std::uint64_t seed = 1;
};

struct GeneratedSample {
    TableSample sample;
    std::vector<bool> is_outlier;            ///< ground truth, one flag per table
    std::shared_ptr<const TableCoordinateSystem> system;
};

/// Draw n tables per the spec. The floor(contamination*n) shifted
/// observations are the last indices of the sample; per-sample RNG streams
/// are derived from the seed, so the output is reproducible and
/// order-independent.
GeneratedSample generate(const GeneratorSpec& spec);

} // namespace cotab
