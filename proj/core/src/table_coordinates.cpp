#include "cotab/table_coordinates.hpp"

#include <cmath>

namespace cotab {

namespace {

// perm[i] = original 1-based factor index standing at pivoted position i+1.
std::vector<int> pivot_permutation(int n, int pivot) {
    std::vector<int> perm;
    perm.reserve(n);
    perm.push_back(pivot - 1);
    for (int i = 0; i < n; ++i) {
        if (i != pivot - 1) perm.push_back(i);
    }
    return perm;
}

} // namespace

std::shared_ptr<const TableCoordinateSystem> TableCoordinateSystem::build(int rows, int cols,
                                                                          int row_pivot,
                                                                          int col_pivot) {
    if (rows < 2 || cols < 2) {
        throw InvalidComposition("table coordinate system needs I >= 2 and J >= 2");
    }
    if (row_pivot < 1 || row_pivot > rows) {
        throw IndexError("row pivot " + std::to_string(row_pivot) + " out of range [1, " +
                         std::to_string(rows) + "]");
    }
    if (col_pivot < 1 || col_pivot > cols) {
        throw IndexError("column pivot " + std::to_string(col_pivot) + " out of range [1, " +
                         std::to_string(cols) + "]");
    }

    const int I = rows, J = cols;
    const auto rp = pivot_permutation(I, row_pivot);
    const auto cp = pivot_permutation(J, col_pivot);
    const auto cell = [I](int i0, int j0) { return i0 + I * j0; };  // column-major

    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(I * J, I * J - 1);
    std::vector<std::string> names;
    names.reserve(I * J - 1);
    int col = 0;

    // Row coordinates: pivoted row i against the geometric mean of the rows
    // below it, every coefficient constant along its row.
    for (int i = 1; i < I; ++i, ++col) {
        const double c_pivot = std::sqrt(static_cast<double>(I - i) / ((I - i + 1.0) * J));
        const double c_rest = -std::sqrt(1.0 / ((I - i + 1.0) * J * (I - i)));
        for (int j0 = 0; j0 < J; ++j0) {
            v(cell(rp[i - 1], j0), col) = c_pivot;
            for (int t = i; t < I; ++t) {
                v(cell(rp[t], j0), col) = c_rest;
            }
        }
        names.push_back("z_r_" + std::to_string(i));
    }

    // Column coordinates, symmetric in the two factors.
    for (int j = 1; j < J; ++j, ++col) {
        const double c_pivot = std::sqrt(static_cast<double>(J - j) / ((J - j + 1.0) * I));
        const double c_rest = -std::sqrt(1.0 / ((J - j + 1.0) * I * (J - j)));
        for (int i0 = 0; i0 < I; ++i0) {
            v(cell(i0, cp[j - 1]), col) = c_pivot;
            for (int t = j; t < J; ++t) {
                v(cell(i0, cp[t]), col) = c_rest;
            }
        }
        names.push_back("z_c_" + std::to_string(j));
    }

    // Odds-ratio coordinates: pivot cell (r, s), blocks of the generalized
    // odds ratio over rows below r and columns right of s. Canonical order is
    // r-major: (1,1), (1,2), ..., (1,J-1), (2,1), ...
    for (int r = 1; r < I; ++r) {
        for (int s = 1; s < J; ++s, ++col) {
            const double c = std::sqrt(
                1.0 / (static_cast<double>(I - r) * (J - s) * (I - r + 1.0) * (J - s + 1.0)));
            v(cell(rp[r - 1], cp[s - 1]), col) = c * (I - r) * (J - s);
            for (int i = r; i < I; ++i) {
                for (int j = s; j < J; ++j) {
                    v(cell(rp[i], cp[j]), col) = c;
                }
            }
            for (int i = r; i < I; ++i) {
                v(cell(rp[i], cp[s - 1]), col) = -c * (J - s);
            }
            for (int j = s; j < J; ++j) {
                v(cell(rp[r - 1], cp[j]), col) = -c * (I - r);
            }
            names.push_back("z_OR_" + std::to_string(r) + "_" + std::to_string(s));
        }
    }

    auto sys = std::shared_ptr<TableCoordinateSystem>(new TableCoordinateSystem());
    sys->rows_ = I;
    sys->cols_ = J;
    sys->row_pivot_ = row_pivot;
    sys->col_pivot_ = col_pivot;

    const int ind = I + J - 2;
    const int orn = (I - 1) * (J - 1);
    // CoordinateSystem validates zero column sums and orthonormality at
    // construction for all three views.
    sys->independence_ = std::make_shared<const CoordinateSystem>(
        v.leftCols(ind), std::vector<std::string>(names.begin(), names.begin() + ind));
    sys->interaction_ = std::make_shared<const CoordinateSystem>(
        v.rightCols(orn), std::vector<std::string>(names.end() - orn, names.end()));
    sys->full_ = std::make_shared<const CoordinateSystem>(std::move(v), std::move(names));
    return sys;
}

int TableCoordinateSystem::or_coordinate_index(int r, int s) const {
    if (r < 1 || r > rows_ - 1 || s < 1 || s > cols_ - 1) {
        throw IndexError("odds-ratio pivot (" + std::to_string(r) + "," + std::to_string(s) +
                         ") out of range");
    }
    return independence_size() + (r - 1) * (cols_ - 1) + (s - 1);
}

Eigen::VectorXd TableCoords::concatenated() const {
    Eigen::VectorXd out(row_block.size() + col_block.size() + or_block.size());
    out << row_block, col_block, or_block;
    return out;
}

namespace {

void require_shape(const CompositionalTable& t, const TableCoordinateSystem& sys) {
    if (t.rows() != sys.rows() || t.cols() != sys.cols()) {
        throw DimensionError("table is " + std::to_string(t.rows()) + "x" +
                             std::to_string(t.cols()) + " but system was built for " +
                             std::to_string(sys.rows()) + "x" + std::to_string(sys.cols()));
    }
}

} // namespace

TableCoords table_coords(const CompositionalTable& t, const TableCoordinateSystem& sys) {
    require_shape(t, sys);
    const Eigen::VectorXd z = sys.full()->contrast().transpose() * clr(vectorize(t)).values;
    return TableCoords{z.head(sys.row_block_size()),
                       z.segment(sys.row_block_size(), sys.col_block_size()),
                       z.tail(sys.or_block_size())};
}

IlrVector coords_independence(const CompositionalTable& t,
                              const std::shared_ptr<const TableCoordinateSystem>& sys) {
    if (!sys) throw ConfigError("coords_independence: null system");
    require_shape(t, *sys);
    return to_coords(vectorize(t), sys->independence());
}

IlrVector coords_interaction(const CompositionalTable& t,
                             const std::shared_ptr<const TableCoordinateSystem>& sys) {
    if (!sys) throw ConfigError("coords_interaction: null system");
    require_shape(t, *sys);
    return to_coords(vectorize(t), sys->interaction());
}

ProportionalityReport proportionality_check(const CompositionalTable& t) {
    const int I = static_cast<int>(t.rows());
    const int J = static_cast<int>(t.cols());
    const Eigen::MatrixXd ci = clr_independence(t);
    const Eigen::MatrixXd ct = clr_interaction(t);
    const Eigen::VectorXd clr_vec = clr(vectorize(t)).values;

    const double w_row = std::sqrt((I - 1.0) / (I * J));
    const double w_col = std::sqrt((J - 1.0) / (I * J));
    const double w_or = std::sqrt((I - 1.0) * (J - 1.0) / (I * J));

    ProportionalityReport report;
    for (int k = 1; k <= I; ++k) {
        for (int l = 1; l <= J; ++l) {
            const auto sys = TableCoordinateSystem::build(I, J, k, l);
            const Eigen::MatrixXd& v = sys->full()->contrast();
            const double z_r1 = v.col(0).dot(clr_vec);
            const double z_c1 = v.col(I - 1).dot(clr_vec);
            const double z_or11 = v.col(sys->or_coordinate_index(1, 1)).dot(clr_vec);

            const double r_ind = std::abs(ci(k - 1, l - 1) - (w_row * z_r1 + w_col * z_c1));
            const double r_int = std::abs(ct(k - 1, l - 1) - w_or * z_or11);
            report.independence_residual = std::max(report.independence_residual, r_ind);
            report.interaction_residual = std::max(report.interaction_residual, r_int);
        }
    }
    report.max_residual = std::max(report.independence_residual, report.interaction_residual);
    return report;
}

} // namespace cotab
