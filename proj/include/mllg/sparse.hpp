#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace mllg {

// Assembly entry with a deterministic accumulation tag (usually the element
// index) so that sums are performed in a canonical order regardless of the
// traversal order that produced the entries.
struct Entry {
    int row = 0;
    int col = 0;
    int tag = 0;
    double value = 0.0;
};

// Compressed-row sparse matrix with canonical (row, col, tag) accumulation.
class SparseMat {
public:
    SparseMat() = default;
    static SparseMat from_entries(int rows, int cols, std::vector<Entry> entries);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
    double quadratic_form(const Eigen::VectorXd& x) const;  // x^T A x
    double max_offdiagonal() const;
    double max_asymmetry() const;  // max |A - A^T|
    double max_abs() const;

    Eigen::SparseMatrix<double> to_eigen() const;
    Eigen::MatrixXd to_dense() const;

    const std::vector<int>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& col_idx() const { return col_idx_; }
    const std::vector<double>& values() const { return values_; }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<int> row_ptr_;
    std::vector<int> col_idx_;
    std::vector<double> values_;
};

struct CgResult {
    bool converged = false;
    long iterations = 0;
    double rel_residual = 0.0;
};

// Plain conjugate gradients for SPD systems; x holds the initial guess on
// entry and the solution on exit. Convergence: ||b - Ax|| <= rtol * ||b||.
CgResult conjugate_gradient(const SparseMat& a, const Eigen::VectorXd& b, Eigen::VectorXd& x,
                            double rtol, long max_iterations);

}  // namespace mllg
