#pragma once

#include <Eigen/Core>
#include <cmath>

#include "anosov/errors.hpp"

namespace anosov {

// A point of R^d regarded as a lift of a torus point. Unconstrained.
using LiftVector = Eigen::VectorXd;

// mod-1 reduction of a scalar into [0,1). Values within 1e-15 of 1 snap to 0
// so that a coordinate never rounds to exactly 1.0 and representatives stay
// canonical for hashing and separated-set bookkeeping.
inline double wrap_unit(double x) {
    double c = x - std::floor(x);
    if (c >= 1.0 - 1e-15) c = 0.0;
    if (c < 0.0) c = 0.0; // -0.0 and stray negatives from rounding
    return c;
}

// Point on the flat torus T^d; every coordinate lies in [0,1).
class TorusPoint {
public:
    explicit TorusPoint(Eigen::VectorXd coords) : c_(std::move(coords)) {
        require(c_.size() >= 1, "TorusPoint: dimension must be >= 1");
        for (Eigen::Index i = 0; i < c_.size(); ++i)
            require(c_[i] >= 0.0 && c_[i] < 1.0,
                    "TorusPoint: coordinate outside [0,1); use TorusPoint::wrap");
    }

    // canonical projection R^d -> T^d
    template <typename Derived>
    static TorusPoint wrap(const Eigen::MatrixBase<Derived>& lift) {
        Eigen::VectorXd c(lift.size());
        for (Eigen::Index i = 0; i < lift.size(); ++i) c[i] = wrap_unit(lift[i]);
        return TorusPoint(std::move(c));
    }

    static TorusPoint zero(int dim) { return TorusPoint(Eigen::VectorXd::Zero(dim)); }

    const Eigen::VectorXd& coords() const { return c_; }
    double operator[](Eigen::Index i) const { return c_[i]; }
    int dim() const { return static_cast<int>(c_.size()); }

private:
    Eigen::VectorXd c_;
};

// wrapped distance of two circle coordinates: min(|a-b| mod 1, 1 - |a-b| mod 1)
inline double wrapped_dist_1d(double a, double b) {
    double m = std::fabs(a - b);
    m -= std::floor(m);
    return std::min(m, 1.0 - m);
}

// signed representative of a-b in [-1/2, 1/2]
inline double wrapped_diff_1d(double a, double b) {
    const double d = a - b;
    return d - std::round(d);
}

// sup-metric on T^d (the metric used throughout: Bowen balls and observer
// boxes become products of intervals)
inline double sup_dist(const TorusPoint& a, const TorusPoint& b) {
    require(a.dim() == b.dim(), "sup_dist: dimension mismatch");
    double m = 0.0;
    for (int i = 0; i < a.dim(); ++i) m = std::max(m, wrapped_dist_1d(a[i], b[i]));
    return m;
}

} // namespace anosov
