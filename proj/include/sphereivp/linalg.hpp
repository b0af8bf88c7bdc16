#pragma once

#include <array>
#include <stdexcept>

namespace sphereivp {

/// Thrown by solve_linear when elimination cannot find an acceptable pivot.
struct SingularMatrixError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dense row-major matrix of dimension 3 or 6, sized for the Newton kernels.
class SmallMatrix {
public:
    explicit SmallMatrix(int n);
    static SmallMatrix identity(int n);

    int dim() const { return n_; }
    double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i * n_ + j)]; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * n_ + j)]; }

private:
    int n_;
    std::array<double, 36> a_{};
};

/// Fixed-capacity vector companion to SmallMatrix.
class SmallVector {
public:
    explicit SmallVector(int n);

    int dim() const { return n_; }
    double& operator[](int i) { return a_[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return a_[static_cast<std::size_t>(i)]; }

private:
    int n_;
    std::array<double, 6> a_{};
};

double inf_norm(const SmallVector& v);
SmallVector matvec(const SmallMatrix& A, const SmallVector& x);

/// Gaussian elimination with partial pivoting. Throws SingularMatrixError when
/// the best available pivot falls below 1e-14 times the largest |A_ij|.
SmallVector solve_linear(SmallMatrix A, SmallVector b);

}  // namespace sphereivp
