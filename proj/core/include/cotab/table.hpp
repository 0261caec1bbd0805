#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "cotab/composition.hpp"
#include "cotab/errors.hpp"

namespace cotab {

/// An I x J grid of strictly positive entries carrying relative information
/// across a row factor and a column factor. Like vector compositions, tables
/// that differ by a positive scalar multiple are equivalent.
class CompositionalTable {
public:
    CompositionalTable(Eigen::MatrixXd cells,
                       std::vector<std::string> row_labels = {},
                       std::vector<std::string> col_labels = {},
                       std::string sample_id = {});

    Eigen::Index rows() const { return cells_.rows(); }
    Eigen::Index cols() const { return cells_.cols(); }
    const Eigen::MatrixXd& cells() const { return cells_; }
    const std::vector<std::string>& row_labels() const { return row_labels_; }
    const std::vector<std::string>& col_labels() const { return col_labels_; }
    const std::string& sample_id() const { return sample_id_; }

    /// Label of cell (i, j) in "row:col" form.
    std::string cell_label(Eigen::Index i, Eigen::Index j) const;

private:
    Eigen::MatrixXd cells_;
    std::vector<std::string> row_labels_;
    std::vector<std::string> col_labels_;
    std::string sample_id_;
};

/// Orthogonal split of a table into the part generated by its row/column
/// geometric marginals (independence) and the remainder encoding row-column
/// association (interaction). All four tables are closed to constant sum 1.
struct TableDecomposition {
    CompositionalTable independence;
    CompositionalTable interaction;
    CompositionalTable row_projection;
    CompositionalTable col_projection;
};

/// Column-major flattening (x_11, ..., x_I1, ..., x_IJ) of a table into an
/// IJ-part composition, labels "row:col".
Composition vectorize(const CompositionalTable& t);

/// Inverse of vectorize: restores shape and labels.
CompositionalTable table_from_vector(const Composition& v, Eigen::Index rows, Eigen::Index cols,
                                     std::vector<std::string> row_labels = {},
                                     std::vector<std::string> col_labels = {},
                                     std::string sample_id = {});

CompositionalTable close(const CompositionalTable& t, double kappa = 1.0);
CompositionalTable perturb(const CompositionalTable& x, const CompositionalTable& y);
CompositionalTable power(const CompositionalTable& x, double a);
double aitchison_inner(const CompositionalTable& x, const CompositionalTable& y);
double aitchison_norm(const CompositionalTable& x);
double aitchison_dist(const CompositionalTable& x, const CompositionalTable& y);

/// Neutral element test: Aitchison norm below 1e-10.
bool is_neutral(const CompositionalTable& t);

TableDecomposition decompose(const CompositionalTable& t);

/// clr grids of the independence / interaction part, computed directly from
/// the input table's row, column and whole-table geometric means:
///   clr_ind(i,j) = ln( g(row_i) g(col_j) / g(all)^2 )
///   clr_int(i,j) = ln( x_ij g(all) / (g(row_i) g(col_j)) )
/// They equal the clr of the decomposed tables themselves.
Eigen::MatrixXd clr_independence(const CompositionalTable& t);
Eigen::MatrixXd clr_interaction(const CompositionalTable& t);

} // namespace cotab
