#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cotab/composition.hpp"
#include "cotab/table.hpp"

namespace cotab {

/// Orthonormal pivot coordinates of an I x J table over its column-major
/// vectorization, partitioned into three blocks:
///
///   rows        z_r_1 .. z_r_{I-1}          (I-1 coordinates)
///   columns     z_c_1 .. z_c_{J-1}          (J-1 coordinates)
///   odds ratio  z_OR_r_s, r-major order     ((I-1)(J-1) coordinates)
///
/// The row+column sub-matrix of the contrast spans the clr image of all
/// independence tables; the odds-ratio sub-matrix spans the clr image of all
/// interaction tables. Pivoting permutes row k and column l to the front
/// (remaining factors keep their relative order), as for vector pivot
/// coordinates.
class TableCoordinateSystem {
public:
    static std::shared_ptr<const TableCoordinateSystem> build(int rows, int cols,
                                                              int row_pivot = 1,
                                                              int col_pivot = 1);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int row_pivot() const { return row_pivot_; }
    int col_pivot() const { return col_pivot_; }

    int row_block_size() const { return rows_ - 1; }
    int col_block_size() const { return cols_ - 1; }
    int or_block_size() const { return (rows_ - 1) * (cols_ - 1); }
    int independence_size() const { return rows_ + cols_ - 2; }
    int full_size() const { return rows_ * cols_ - 1; }

    /// Full system over all IJ-1 coordinates, column order [rows|columns|OR].
    const std::shared_ptr<const CoordinateSystem>& full() const { return full_; }
    /// Sub-system of the first I+J-2 coordinates (independence tables).
    const std::shared_ptr<const CoordinateSystem>& independence() const { return independence_; }
    /// Sub-system of the (I-1)(J-1) odds-ratio coordinates (interaction tables).
    const std::shared_ptr<const CoordinateSystem>& interaction() const { return interaction_; }

    /// Column index of coordinate z_OR_r_s within the full system
    /// (r, s are 1-based pivot-cell positions in the permuted table).
    int or_coordinate_index(int r, int s) const;

    /// Flattening convention used by the contrast rows.
    static constexpr const char* vectorization_order() { return "column-major"; }

private:
    TableCoordinateSystem() = default;

    int rows_ = 0, cols_ = 0, row_pivot_ = 1, col_pivot_ = 1;
    std::shared_ptr<const CoordinateSystem> full_;
    std::shared_ptr<const CoordinateSystem> independence_;
    std::shared_ptr<const CoordinateSystem> interaction_;
};

/// Coordinates of a table split into the three blocks of the system.
struct TableCoords {
    Eigen::VectorXd row_block;
    Eigen::VectorXd col_block;
    Eigen::VectorXd or_block;

    Eigen::VectorXd concatenated() const;
};

TableCoords table_coords(const CompositionalTable& t, const TableCoordinateSystem& sys);

/// Independence-part coordinates (length I+J-2): the row and column
/// coordinates of t, identical to those of decompose(t).independence.
IlrVector coords_independence(const CompositionalTable& t,
                              const std::shared_ptr<const TableCoordinateSystem>& sys);

/// Interaction-part coordinates (length (I-1)(J-1)): the odds-ratio
/// coordinates of t, identical to those of decompose(t).interaction.
IlrVector coords_interaction(const CompositionalTable& t,
                             const std::shared_ptr<const TableCoordinateSystem>& sys);

/// Diagnostic for the clr-proportionality identities linking first pivot
/// coordinates to clr entries of the independence and interaction parts:
/// for every pivot choice (k, l),
///   clr_ind(k,l) = sqrt((I-1)/(IJ)) z_r_1^{(k)} + sqrt((J-1)/(IJ)) z_c_1^{(l)}
///   clr_int(k,l) = sqrt((I-1)(J-1)/(IJ)) z_OR_1_1^{(k,l)}
struct ProportionalityReport {
    double max_residual = 0.0;
    double independence_residual = 0.0;
    double interaction_residual = 0.0;
};

ProportionalityReport proportionality_check(const CompositionalTable& t);

} // namespace cotab
