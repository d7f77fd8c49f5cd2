#include "mllg/sparse.hpp"

#include <algorithm>
#include <cmath>

#include "mllg/errors.hpp"

namespace mllg {

SparseMat SparseMat::from_entries(int rows, int cols, std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.row != b.row) return a.row < b.row;
        if (a.col != b.col) return a.col < b.col;
        return a.tag < b.tag;
    });

    SparseMat m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.row_ptr_.assign(rows + 1, 0);
    for (std::size_t i = 0; i < entries.size();) {
        const int r = entries[i].row;
        const int c = entries[i].col;
        double sum = 0.0;
        while (i < entries.size() && entries[i].row == r && entries[i].col == c)
            sum += entries[i++].value;
        m.col_idx_.push_back(c);
        m.values_.push_back(sum);
        ++m.row_ptr_[r + 1];
    }
    for (int r = 0; r < rows; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
    return m;
}

Eigen::VectorXd SparseMat::apply(const Eigen::VectorXd& x) const {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(rows_);
    for (int r = 0; r < rows_; ++r) {
        double s = 0.0;
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += values_[k] * x[col_idx_[k]];
        y[r] = s;
    }
    return y;
}

double SparseMat::quadratic_form(const Eigen::VectorXd& x) const {
    return x.dot(apply(x));
}

double SparseMat::max_offdiagonal() const {
    double worst = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (int r = 0; r < rows_; ++r)
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            if (col_idx_[k] != r) {
                worst = std::max(worst, values_[k]);
                any = true;
            }
    return any ? worst : 0.0;
}

double SparseMat::max_asymmetry() const {
    Eigen::MatrixXd d = to_dense();
    return (d - d.transpose()).cwiseAbs().maxCoeff();
}

double SparseMat::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

Eigen::SparseMatrix<double> SparseMat::to_eigen() const {
    Eigen::SparseMatrix<double> s(rows_, cols_);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(values_.size());
    for (int r = 0; r < rows_; ++r)
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            trip.emplace_back(r, col_idx_[k], values_[k]);
    s.setFromTriplets(trip.begin(), trip.end());
    return s;
}

Eigen::MatrixXd SparseMat::to_dense() const {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows_, cols_);
    for (int r = 0; r < rows_; ++r)
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) d(r, col_idx_[k]) += values_[k];
    return d;
}

CgResult conjugate_gradient(const SparseMat& a, const Eigen::VectorXd& b, Eigen::VectorXd& x,
                            double rtol, long max_iterations) {
    CgResult res;
    const double bnorm = b.norm();
    if (bnorm == 0.0) {
        x.setZero();
        res.converged = true;
        return res;
    }
    Eigen::VectorXd r = b - a.apply(x);
    Eigen::VectorXd p = r;
    double rs = r.squaredNorm();
    const double target = rtol * bnorm;
    long it = 0;
    while (std::sqrt(rs) > target && it < max_iterations) {
        Eigen::VectorXd ap = a.apply(p);
        double alpha = rs / p.dot(ap);
        x += alpha * p;
        r -= alpha * ap;
        double rs_new = r.squaredNorm();
        p = r + (rs_new / rs) * p;
        rs = rs_new;
        ++it;
    }
    res.iterations = it;
    res.rel_residual = std::sqrt(rs) / bnorm;
    res.converged = res.rel_residual <= rtol;
    return res;
}

}  // namespace mllg
