#include "cotab/table.hpp"

#include <cmath>
#include <utility>

namespace cotab {

namespace {

void require_same_shape(const CompositionalTable& x, const CompositionalTable& y,
                        const char* op) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) {
        throw DimensionError(std::string(op) + ": table shapes differ (" +
                             std::to_string(x.rows()) + "x" + std::to_string(x.cols()) + " vs " +
                             std::to_string(y.rows()) + "x" + std::to_string(y.cols()) + ")");
    }
}

std::vector<std::string> default_labels(const char* prefix, Eigen::Index n) {
    std::vector<std::string> out;
    out.reserve(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.push_back(std::string(prefix) + std::to_string(i + 1));
    }
    return out;
}

} // namespace

CompositionalTable::CompositionalTable(Eigen::MatrixXd cells,
                                       std::vector<std::string> row_labels,
                                       std::vector<std::string> col_labels,
                                       std::string sample_id)
    : cells_(std::move(cells)),
      row_labels_(std::move(row_labels)),
      col_labels_(std::move(col_labels)),
      sample_id_(std::move(sample_id)) {
    if (cells_.rows() < 2 || cells_.cols() < 2) {
        throw InvalidComposition("a compositional table needs at least 2 rows and 2 columns, got " +
                                 std::to_string(cells_.rows()) + "x" + std::to_string(cells_.cols()));
    }
    for (Eigen::Index j = 0; j < cells_.cols(); ++j) {
        for (Eigen::Index i = 0; i < cells_.rows(); ++i) {
            const double v = cells_(i, j);
            if (!std::isfinite(v) || v <= 0.0) {
                throw InvalidComposition("cell (" + std::to_string(i + 1) + "," +
                                         std::to_string(j + 1) + ") is " + std::to_string(v) +
                                         "; cells must be positive and finite");
            }
        }
    }
    if (row_labels_.empty()) row_labels_ = default_labels("r", cells_.rows());
    if (col_labels_.empty()) col_labels_ = default_labels("c", cells_.cols());
    if (static_cast<Eigen::Index>(row_labels_.size()) != cells_.rows() ||
        static_cast<Eigen::Index>(col_labels_.size()) != cells_.cols()) {
        throw DimensionError("factor label counts do not match table shape");
    }
}

std::string CompositionalTable::cell_label(Eigen::Index i, Eigen::Index j) const {
    return row_labels_[i] + ":" + col_labels_[j];
}

Composition vectorize(const CompositionalTable& t) {
    Eigen::VectorXd v(t.rows() * t.cols());
    std::vector<std::string> labels;
    labels.reserve(v.size());
    Eigen::Index k = 0;
    for (Eigen::Index j = 0; j < t.cols(); ++j) {
        for (Eigen::Index i = 0; i < t.rows(); ++i, ++k) {
            v[k] = t.cells()(i, j);
            labels.push_back(t.cell_label(i, j));
        }
    }
    return Composition(std::move(v), std::move(labels));
}

CompositionalTable table_from_vector(const Composition& v, Eigen::Index rows, Eigen::Index cols,
                                     std::vector<std::string> row_labels,
                                     std::vector<std::string> col_labels,
                                     std::string sample_id) {
    if (v.size() != rows * cols) {
        throw DimensionError("table_from_vector: " + std::to_string(v.size()) +
                             " parts cannot fill a " + std::to_string(rows) + "x" +
                             std::to_string(cols) + " table");
    }
    Eigen::MatrixXd cells(rows, cols);
    Eigen::Index k = 0;
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i, ++k) {
            cells(i, j) = v.parts()[k];
        }
    }
    return CompositionalTable(std::move(cells), std::move(row_labels), std::move(col_labels),
                              std::move(sample_id));
}

CompositionalTable close(const CompositionalTable& t, double kappa) {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
        throw InvalidComposition("closure constant must be positive and finite");
    }
    return CompositionalTable(t.cells() * (kappa / t.cells().sum()), t.row_labels(),
                              t.col_labels(), t.sample_id());
}

CompositionalTable perturb(const CompositionalTable& x, const CompositionalTable& y) {
    require_same_shape(x, y, "perturb");
    return CompositionalTable(x.cells().cwiseProduct(y.cells()), x.row_labels(), x.col_labels(),
                              x.sample_id());
}

CompositionalTable power(const CompositionalTable& x, double a) {
    return CompositionalTable(x.cells().array().pow(a).matrix(), x.row_labels(), x.col_labels(),
                              x.sample_id());
}

double aitchison_inner(const CompositionalTable& x, const CompositionalTable& y) {
    require_same_shape(x, y, "aitchison_inner");
    return aitchison_inner(vectorize(x), vectorize(y));
}

double aitchison_norm(const CompositionalTable& x) {
    return std::sqrt(aitchison_inner(x, x));
}

double aitchison_dist(const CompositionalTable& x, const CompositionalTable& y) {
    require_same_shape(x, y, "aitchison_dist");
    return aitchison_norm(perturb(x, power(y, -1.0)));
}

bool is_neutral(const CompositionalTable& t) {
    return aitchison_norm(t) < 1e-10;
}

namespace {

struct LogMarginals {
    Eigen::VectorXd row;   // ln g(x_{i.})
    Eigen::VectorXd col;   // ln g(x_{.j})
    double whole;          // ln g(x_{..})
};

LogMarginals log_marginals(const CompositionalTable& t) {
    const Eigen::MatrixXd logs = t.cells().array().log().matrix();
    LogMarginals m;
    m.row = logs.rowwise().mean();
    m.col = logs.colwise().mean().transpose();
    m.whole = logs.mean();
    return m;
}

} // namespace

TableDecomposition decompose(const CompositionalTable& t) {
    const auto m = log_marginals(t);
    const Eigen::Index ni = t.rows();
    const Eigen::Index nj = t.cols();

    Eigen::MatrixXd row_proj(ni, nj), col_proj(ni, nj), ind(ni, nj), inter(ni, nj);
    const Eigen::MatrixXd logs = t.cells().array().log().matrix();
    for (Eigen::Index j = 0; j < nj; ++j) {
        for (Eigen::Index i = 0; i < ni; ++i) {
            row_proj(i, j) = std::exp(m.row[i]);
            col_proj(i, j) = std::exp(m.col[j]);
            ind(i, j) = std::exp(m.row[i] + m.col[j]);
            inter(i, j) = std::exp(logs(i, j) - m.row[i] - m.col[j]);
        }
    }
    auto make = [&](Eigen::MatrixXd cells) {
        return close(CompositionalTable(std::move(cells), t.row_labels(), t.col_labels(),
                                        t.sample_id()),
                     1.0);
    };
    return TableDecomposition{make(std::move(ind)), make(std::move(inter)),
                              make(std::move(row_proj)), make(std::move(col_proj))};
}

Eigen::MatrixXd clr_independence(const CompositionalTable& t) {
    const auto m = log_marginals(t);
    Eigen::MatrixXd out(t.rows(), t.cols());
    for (Eigen::Index j = 0; j < t.cols(); ++j) {
        for (Eigen::Index i = 0; i < t.rows(); ++i) {
            out(i, j) = m.row[i] + m.col[j] - 2.0 * m.whole;
        }
    }
    return out;
}

Eigen::MatrixXd clr_interaction(const CompositionalTable& t) {
    const auto m = log_marginals(t);
    Eigen::MatrixXd out(t.rows(), t.cols());
    for (Eigen::Index j = 0; j < t.cols(); ++j) {
        for (Eigen::Index i = 0; i < t.rows(); ++i) {
            out(i, j) = std::log(t.cells()(i, j)) - m.row[i] - m.col[j] + m.whole;
        }
    }
    return out;
}

} // namespace cotab
