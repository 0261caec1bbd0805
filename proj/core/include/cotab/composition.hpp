#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cotab/errors.hpp"

namespace cotab {

/// A positive D-part vector carrying only relative (ratio) information.
/// Two part vectors that differ by a positive scalar multiple are
/// representatives of the same equivalence class; every operation in this
/// header is invariant under that rescaling. Closure is never applied
/// implicitly.
class Composition {
public:
    explicit Composition(Eigen::VectorXd parts, std::vector<std::string> labels = {});

    Eigen::Index size() const { return parts_.size(); }
    const Eigen::VectorXd& parts() const { return parts_; }
    const std::vector<std::string>& labels() const { return labels_; }
    bool has_labels() const { return !labels_.empty(); }

private:
    Eigen::VectorXd parts_;
    std::vector<std::string> labels_;
};

/// Centered logratio image of a composition: ln(x_i / g(x)). Entries sum to
/// zero, so the vector lives in the hyperplane orthogonal to (1,...,1).
struct ClrVector {
    Eigen::VectorXd values;
    std::vector<std::string> labels;
};

/// An ordered set of orthonormal logratio functionals, carried by its
/// contrast matrix V (dim_in x dim_out). Columns are the clr images of the
/// basis elements: each sums to zero and V^T V = I.
class CoordinateSystem {
public:
    CoordinateSystem(Eigen::MatrixXd contrast, std::vector<std::string> coordinate_names);

    Eigen::Index dim_in() const { return contrast_.rows(); }
    Eigen::Index dim_out() const { return contrast_.cols(); }
    const Eigen::MatrixXd& contrast() const { return contrast_; }
    const std::vector<std::string>& coordinate_names() const { return names_; }

private:
    Eigen::MatrixXd contrast_;
    std::vector<std::string> names_;
};

/// Orthonormal (ilr) coordinates of a composition together with the system
/// that produced them.
struct IlrVector {
    Eigen::VectorXd values;
    std::shared_ptr<const CoordinateSystem> system;
};

/// Rescale to constant sum kappa. The output represents the same equivalence
/// class as the input.
Composition close(const Composition& x, double kappa = 1.0);

/// Componentwise product / power: the vector-space operations of the simplex.
Composition perturb(const Composition& x, const Composition& y);
Composition power(const Composition& x, double a);

/// Inner product over all pairwise logratios, plus the induced norm and
/// distance. All three are invariant to rescaling of either argument.
double aitchison_inner(const Composition& x, const Composition& y);
double aitchison_norm(const Composition& x);
double aitchison_dist(const Composition& x, const Composition& y);

ClrVector clr(const Composition& x);

/// Inverse of clr, returning the closed (kappa = 1) representative.
/// Input whose entries sum to more than 1e-8 in absolute value is rejected.
Composition clr_inverse(const ClrVector& c);

/// Pivot coordinate system of a D-part composition with part l (1-based)
/// moved to the front: the first coordinate captures all relative information
/// about part l, and the contrast columns are the log-space coefficient
/// vectors of the per-coordinate closed forms.
std::shared_ptr<const CoordinateSystem> pivot_system(int d, int pivot_index = 1);

IlrVector to_coords(const Composition& x, std::shared_ptr<const CoordinateSystem> sys);
Composition from_coords(const IlrVector& z);

} // namespace cotab
