#include "sphereivp/linalg.hpp"

#include <cmath>
#include <utility>

namespace sphereivp {

namespace {
void check_dim(int n) {
    if (n != 3 && n != 6) throw std::invalid_argument("dimension must be 3 or 6");
}
}  // namespace

SmallMatrix::SmallMatrix(int n) : n_(n) { check_dim(n); }

SmallMatrix SmallMatrix::identity(int n) {
    SmallMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

SmallVector::SmallVector(int n) : n_(n) { check_dim(n); }

double inf_norm(const SmallVector& v) {
    double m = 0.0;
    for (int i = 0; i < v.dim(); ++i) m = std::max(m, std::abs(v[i]));
    return m;
}

SmallVector matvec(const SmallMatrix& A, const SmallVector& x) {
    if (A.dim() != x.dim()) throw std::invalid_argument("matvec: dimension mismatch");
    SmallVector y(x.dim());
    for (int i = 0; i < A.dim(); ++i) {
        double s = 0.0;
        for (int j = 0; j < A.dim(); ++j) s += A(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

SmallVector solve_linear(SmallMatrix A, SmallVector b) {
    if (A.dim() != b.dim()) throw std::invalid_argument("solve_linear: dimension mismatch");
    const int n = A.dim();

    double max_abs = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) max_abs = std::max(max_abs, std::abs(A(i, j)));
    const double pivot_floor = 1e-14 * max_abs;
    if (max_abs == 0.0) throw SingularMatrixError("solve_linear: zero matrix");

    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(A(i, k)) > std::abs(A(piv, k))) piv = i;
        if (std::abs(A(piv, k)) <= pivot_floor)
            throw SingularMatrixError("solve_linear: pivot below singularity threshold");
        if (piv != k) {
            for (int j = k; j < n; ++j) std::swap(A(k, j), A(piv, j));
            std::swap(b[k], b[piv]);
        }
        for (int i = k + 1; i < n; ++i) {
            const double m = A(i, k) / A(k, k);
            if (m == 0.0) continue;
            for (int j = k; j < n; ++j) A(i, j) -= m * A(k, j);
            b[i] -= m * b[k];
        }
    }

    SmallVector x(n);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= A(i, j) * x[j];
        x[i] = s / A(i, i);
    }
    return x;
}

}  // namespace sphereivp
