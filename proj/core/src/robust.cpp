#include "cotab/robust.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Cholesky>
#include <boost/math/distributions/chi_squared.hpp>

#include "cotab/random.hpp"

namespace cotab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_finite(const Eigen::MatrixXd& z) {
    if (!z.allFinite()) {
        throw InvalidData("data matrix contains non-finite entries");
    }
}

struct SubsetMoments {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;       // denominator |subset| - 1
    Eigen::LDLT<Eigen::MatrixXd> ldlt;
    double log_det = kNegInf;  // -inf marks a singular covariance
};

SubsetMoments subset_moments(const Eigen::MatrixXd& z, const std::vector<int>& subset) {
    const Eigen::Index p = z.cols();
    const auto m = static_cast<Eigen::Index>(subset.size());
    SubsetMoments out;
    out.mean = Eigen::VectorXd::Zero(p);
    for (int idx : subset) out.mean += z.row(idx).transpose();
    out.mean /= static_cast<double>(m);

    out.cov = Eigen::MatrixXd::Zero(p, p);
    for (int idx : subset) {
        const Eigen::VectorXd d = z.row(idx).transpose() - out.mean;
        out.cov.noalias() += d * d.transpose();
    }
    out.cov /= static_cast<double>(m - 1);

    out.ldlt.compute(out.cov);
    if (out.ldlt.info() == Eigen::Success) {
        const Eigen::VectorXd diag = out.ldlt.vectorD();
        if ((diag.array() > 0.0).all()) {
            out.log_det = diag.array().log().sum();
        }
    }
    return out;
}

Eigen::VectorXd squared_distances(const Eigen::MatrixXd& z, const SubsetMoments& mom) {
    const Eigen::Index n = z.rows();
    Eigen::VectorXd d2(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::VectorXd d = z.row(i).transpose() - mom.mean;
        d2[i] = d.dot(mom.ldlt.solve(d));
    }
    return d2;
}

/// h indices with smallest squared distance; ties broken by index so the
/// selection is deterministic.
std::vector<int> h_smallest(const Eigen::VectorXd& d2, int h) {
    std::vector<int> order(d2.size());
    std::iota(order.begin(), order.end(), 0);
    std::nth_element(order.begin(), order.begin() + h, order.end(), [&](int a, int b) {
        return d2[a] < d2[b] || (d2[a] == d2[b] && a < b);
    });
    std::vector<int> subset(order.begin(), order.begin() + h);
    std::sort(subset.begin(), subset.end());
    return subset;
}

struct Candidate {
    std::vector<int> subset;
    SubsetMoments moments;
};

/// One concentration step. The covariance determinant of the new h-subset
/// never exceeds the old one; a violation is a bug, not a data problem.
Candidate concentration_step(const Eigen::MatrixXd& z, const Candidate& cur, int h) {
    Candidate next;
    next.subset = h_smallest(squared_distances(z, cur.moments), h);
    next.moments = subset_moments(z, next.subset);
    if (next.moments.log_det > cur.moments.log_det + 1e-9 &&
        cur.moments.log_det != kNegInf) {
        throw std::logic_error("concentration step increased the covariance determinant");
    }
    return next;
}

Candidate refine_to_convergence(const Eigen::MatrixXd& z, Candidate cand, int h,
                                const McdOptions& opt) {
    for (int it = 0; it < opt.max_refine_iterations; ++it) {
        if (cand.moments.log_det == kNegInf) break;  // exact fit, cannot improve
        Candidate next = concentration_step(z, cand, h);
        const bool converged =
            next.subset == cand.subset ||
            (next.moments.log_det != kNegInf &&
             std::abs(next.moments.log_det - cand.moments.log_det) <= opt.determinant_rel_tol);
        cand = std::move(next);
        if (converged) break;
    }
    return cand;
}

bool better(const Candidate& a, int ia, const Candidate& b, int ib) {
    if (a.moments.log_det != b.moments.log_det) return a.moments.log_det < b.moments.log_det;
    return ia < ib;
}

/// Number of h-subsets, capped: returns limit+1 as soon as the count exceeds it.
std::size_t binomial_capped(int n, int h, std::size_t limit) {
    const int k = std::min(h, n - h);
    long double acc = 1.0L;
    for (int i = 1; i <= k; ++i) {
        acc = acc * (n - k + i) / i;
        if (acc > static_cast<long double>(limit)) return limit + 1;
    }
    return static_cast<std::size_t>(acc + 0.5L);
}

Candidate exact_search(const Eigen::MatrixXd& z, int h) {
    const int n = static_cast<int>(z.rows());
    std::vector<int> subset(h);
    std::iota(subset.begin(), subset.end(), 0);

    Candidate best;
    bool first = true;
    while (true) {
        Candidate cand;
        cand.subset = subset;
        cand.moments = subset_moments(z, subset);
        if (first || cand.moments.log_det < best.moments.log_det) {
            best = std::move(cand);
            first = false;
        }
        // next combination in lexicographic order
        int i = h - 1;
        while (i >= 0 && subset[i] == n - h + i) --i;
        if (i < 0) break;
        ++subset[i];
        for (int j = i + 1; j < h; ++j) subset[j] = subset[j - 1] + 1;
    }
    return best;
}

Candidate sampling_search(const Eigen::MatrixXd& z, int h, std::uint64_t seed,
                          const McdOptions& opt) {
    const int n = static_cast<int>(z.rows());
    const int p = static_cast<int>(z.cols());

    std::vector<Candidate> pool;
    pool.reserve(opt.n_starts);
    for (int s = 0; s < opt.n_starts; ++s) {
        Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(s));
        // (p+1)-element start, extended with further random points while its
        // covariance stays singular.
        std::vector<int> idx = rng.sample_without_replacement(n, std::min(p + 1, n));
        std::sort(idx.begin(), idx.end());
        Candidate cand;
        cand.subset = idx;
        cand.moments = subset_moments(z, idx);
        while (cand.moments.log_det == kNegInf && static_cast<int>(cand.subset.size()) < n) {
            std::vector<bool> used(n, false);
            for (int i : cand.subset) used[i] = true;
            std::vector<int> rest;
            for (int i = 0; i < n; ++i) {
                if (!used[i]) rest.push_back(i);
            }
            cand.subset.push_back(rest[rng.below(rest.size())]);
            std::sort(cand.subset.begin(), cand.subset.end());
            cand.moments = subset_moments(z, cand.subset);
        }
        if (cand.moments.log_det == kNegInf) {
            // Whole data set is degenerate; let the caller report it.
            pool.push_back(std::move(cand));
            continue;
        }
        for (int c = 0; c < opt.n_csteps; ++c) {
            cand = concentration_step(z, cand, h);
            if (cand.moments.log_det == kNegInf) break;
        }
        pool.push_back(std::move(cand));
    }

    std::vector<int> order(pool.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return better(pool[a], a, pool[b], b);
    });

    // Refine the best candidates in rank order; on equal determinants the
    // earlier rank wins, so the merge is deterministic.
    Candidate best;
    int best_rank = -1;
    const int n_refine = std::min<int>(opt.n_best, static_cast<int>(order.size()));
    for (int r = 0; r < n_refine; ++r) {
        Candidate cand = refine_to_convergence(z, pool[order[r]], h, opt);
        if (best_rank < 0 || cand.moments.log_det < best.moments.log_det) {
            best = std::move(cand);
            best_rank = r;
        }
    }
    return best;
}

} // namespace

double chi_squared_quantile(int df, double quantile_level) {
    if (quantile_level >= 1.0) return std::numeric_limits<double>::infinity();
    if (quantile_level <= 0.0) return 0.0;
    boost::math::chi_squared dist(df);
    return boost::math::quantile(dist, quantile_level);
}

double mcd_consistency_factor(int p, double fraction) {
    if (fraction >= 1.0) return 1.0;
    const double q = chi_squared_quantile(p, fraction);
    boost::math::chi_squared dist(p + 2);
    return fraction / boost::math::cdf(dist, q);
}

ScatterEstimate classical_estimate(const Eigen::MatrixXd& z) {
    require_finite(z);
    const Eigen::Index n = z.rows();
    const Eigen::Index p = z.cols();
    if (n < 2 || p < 1) {
        throw InvalidData("classical estimate needs at least 2 observations and 1 variable");
    }
    ScatterEstimate est;
    est.center = z.colwise().mean().transpose();
    const Eigen::MatrixXd centered = z.rowwise() - est.center.transpose();
    est.scatter = centered.transpose() * centered / static_cast<double>(n - 1);
    est.method = ScatterMethod::classical;
    est.h = static_cast<int>(n);
    est.support_mask.assign(n, true);
    return est;
}

ScatterEstimate mcd_estimate(const Eigen::MatrixXd& z, double alpha, std::uint64_t seed,
                             const McdOptions& options) {
    require_finite(z);
    const int n = static_cast<int>(z.rows());
    const int p = static_cast<int>(z.cols());
    if (n < p + 1) {
        throw RankDeficient("MCD needs n >= p+1, got n=" + std::to_string(n) +
                            " p=" + std::to_string(p));
    }
    if (!(alpha >= 0.5 && alpha <= 1.0)) {
        throw ConfigError("MCD subset fraction alpha must lie in [0.5, 1], got " +
                          std::to_string(alpha));
    }

    const int h_min = (n + p + 1) / 2;
    const int h = std::clamp(static_cast<int>(std::floor(alpha * n)), h_min, n);

    if (h == n) {
        // Full-subset collapse: the raw estimate is the classical one and the
        // consistency factor is 1; reweighting is skipped so the equality is
        // exact.
        ScatterEstimate est = classical_estimate(z);
        est.method = options.reweight ? ScatterMethod::mcd_reweighted : ScatterMethod::mcd_raw;
        est.best_subset.resize(n);
        std::iota(est.best_subset.begin(), est.best_subset.end(), 0);
        Eigen::LDLT<Eigen::MatrixXd> ldlt(est.scatter);
        est.subset_log_determinant =
            (ldlt.info() == Eigen::Success && (ldlt.vectorD().array() > 0.0).all())
                ? ldlt.vectorD().array().log().sum()
                : kNegInf;
        est.seed = seed;
        return est;
    }

    const bool use_exact =
        options.search == McdOptions::Search::exact ||
        (options.search == McdOptions::Search::automatic &&
         binomial_capped(n, h, options.exact_enumeration_limit) <= options.exact_enumeration_limit);

    const Candidate best =
        use_exact ? exact_search(z, h) : sampling_search(z, h, seed, options);
    if (best.moments.log_det == kNegInf) {
        throw DegenerateData("every candidate h-subset has a singular covariance "
                             "(exact fit or too many duplicate observations)");
    }

    ScatterEstimate est;
    est.seed = seed;
    est.h = h;
    est.best_subset = best.subset;
    est.subset_log_determinant = best.moments.log_det;
    est.center = best.moments.mean;
    est.scatter =
        best.moments.cov * mcd_consistency_factor(p, static_cast<double>(h) / n);
    est.method = ScatterMethod::mcd_raw;
    est.support_mask.assign(n, false);
    for (int i : best.subset) est.support_mask[i] = true;

    if (options.reweight) {
        const double cut = chi_squared_quantile(p, 0.975);
        Eigen::LDLT<Eigen::MatrixXd> ldlt(est.scatter);
        std::vector<int> kept;
        for (int i = 0; i < n; ++i) {
            const Eigen::VectorXd d = z.row(i).transpose() - est.center;
            if (d.dot(ldlt.solve(d)) <= cut) kept.push_back(i);
        }
        if (static_cast<int>(kept.size()) < p + 1) {
            throw DegenerateData("reweighting kept fewer than p+1 observations");
        }
        SubsetMoments rw = subset_moments(z, kept);
        if (rw.log_det == kNegInf) {
            throw DegenerateData("reweighted covariance is singular");
        }
        est.center = rw.mean;
        est.scatter = rw.cov * mcd_consistency_factor(p, 0.975);
        est.method = ScatterMethod::mcd_reweighted;
        est.support_mask.assign(n, false);
        for (int i : kept) est.support_mask[i] = true;
    }
    return est;
}

Eigen::VectorXd mahalanobis_distances(const Eigen::MatrixXd& z, const ScatterEstimate& est) {
    require_finite(z);
    if (z.cols() != est.center.size()) {
        throw DimensionError("data has " + std::to_string(z.cols()) +
                             " columns, estimate has dimension " +
                             std::to_string(est.center.size()));
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(est.scatter);
    if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().array() > 0.0).all()) {
        throw RankDeficient("scatter matrix is singular; distances are undefined");
    }
    const Eigen::Index n = z.rows();
    Eigen::VectorXd out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::VectorXd d = z.row(i).transpose() - est.center;
        out[i] = std::sqrt(std::max(0.0, d.dot(ldlt.solve(d))));
    }
    return out;
}

int OutlierReport::flagged_count() const {
    int c = 0;
    for (bool f : flags) c += f ? 1 : 0;
    return c;
}

OutlierReport detect_outliers(const Eigen::MatrixXd& z, double alpha, double quantile_level,
                              std::uint64_t seed, const McdOptions& options) {
    if (!(quantile_level > 0.5)) {
        throw ConfigError("outlier quantile level must exceed 0.5");
    }
    OutlierReport report;
    report.estimate = mcd_estimate(z, alpha, seed, options);
    report.distances = mahalanobis_distances(z, report.estimate);
    report.df = static_cast<int>(z.cols());
    report.quantile_level = quantile_level;
    report.cutoff = std::sqrt(chi_squared_quantile(report.df, quantile_level));
    report.flags.resize(z.rows());
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
        report.flags[i] = report.distances[i] > report.cutoff;
    }
    return report;
}

} // namespace cotab
