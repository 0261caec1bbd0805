#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cotab/robust.hpp"
#include "cotab/table.hpp"
#include "cotab/table_coordinates.hpp"

namespace cotab {

/// Which representation of the tables an analysis works on.
enum class Part { whole, independence, interaction };

enum class EstimatorMethod { classical, robust };

const char* to_string(Part part);
const char* to_string(EstimatorMethod method);

/// A sample of n compositional tables of identical shape and factor labels,
/// tagged with the part to analyze.
class TableSample {
public:
    TableSample(std::vector<CompositionalTable> tables, Part part = Part::whole);

    const std::vector<CompositionalTable>& tables() const { return tables_; }
    Part part() const { return part_; }
    Eigen::Index size() const { return static_cast<Eigen::Index>(tables_.size()); }
    Eigen::Index rows() const { return tables_.front().rows(); }
    Eigen::Index cols() const { return tables_.front().cols(); }

    TableSample with_part(Part part) const { return TableSample(tables_, part); }

    std::vector<std::string> sample_ids() const;

private:
    std::vector<CompositionalTable> tables_;
    Part part_;
};

/// Coordinate matrix (n x p) of a sample in the given system, p depending on
/// the sample's part: IJ-1, I+J-2 or (I-1)(J-1).
Eigen::MatrixXd coordinate_matrix(const TableSample& sample, const TableCoordinateSystem& sys);

/// Contrast sub-matrix matching a part (IJ x p).
Eigen::MatrixXd part_contrast(const TableCoordinateSystem& sys, Part part);

/// Principal component model of a table sample in pivot coordinates, with
/// loadings transformed back to the clr scale (G_clr = V G) for
/// interpretation in terms of the original cells. Loading columns are
/// oriented so the largest-magnitude clr entry is positive.
struct PcaModel {
    EstimatorMethod method = EstimatorMethod::classical;
    Part part = Part::whole;
    Eigen::VectorXd center_coords;
    Eigen::MatrixXd loadings_coords;   ///< p x p orthogonal, columns = eigenvectors
    Eigen::VectorXd eigenvalues;       ///< nonincreasing, clamped at 0
    Eigen::MatrixXd scores;            ///< n x p, row i = G^T (z_i - t)
    Eigen::MatrixXd loadings_clr;      ///< IJ x p
    Eigen::VectorXd explained;         ///< cumulative proportions
    std::shared_ptr<const TableCoordinateSystem> system;
    std::uint64_t seed = 0;
    ScatterEstimate estimate;
    std::vector<std::string> sample_ids;
    std::vector<std::string> cell_labels;  ///< vectorization order

    Eigen::Index coordinate_dim() const { return eigenvalues.size(); }
    double explained_at(int k) const;
};

PcaModel fit_pca(const TableSample& sample, EstimatorMethod method,
                 std::shared_ptr<const TableCoordinateSystem> sys, std::uint64_t seed,
                 double alpha = 0.75);

enum class BiplotForm { covariance, form };

/// Rank-k biplot geometry. Covariance scaling: arrows are rows of
/// G_clr[:, 1..k] scaled by sqrt(lambda), points are scores scaled by
/// 1/sqrt(lambda). Form scaling leaves arrows at G_clr and points at the raw
/// scores.
struct BiplotGeometry {
    Eigen::MatrixXd arrows;            ///< IJ x k
    Eigen::MatrixXd points;            ///< n x k
    Eigen::VectorXd axis_explained;    ///< per-axis share of total variance
    std::vector<std::string> arrow_labels;
    std::vector<std::string> point_labels;
    BiplotForm form = BiplotForm::covariance;
    Part part = Part::whole;
    EstimatorMethod method = EstimatorMethod::classical;
    std::string sign_convention = "largest-magnitude clr loading oriented positive";
};

BiplotGeometry biplot_geometry(const PcaModel& model, int k = 2,
                               BiplotForm form = BiplotForm::covariance);

/// Side-by-side diagnostics of two fits of the same sample and part.
struct RunComparison {
    double explained2_a = 0.0;
    double explained2_b = 0.0;
    Eigen::VectorXd principal_angles;      ///< radians, between leading subspaces
    Eigen::VectorXd score_displacement;    ///< per observation, sign-aligned
};

RunComparison compare_runs(const PcaModel& a, const PcaModel& b, int k = 2);

} // namespace cotab
