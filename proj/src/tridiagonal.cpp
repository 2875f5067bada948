#include "pendular/tridiagonal.hpp"

#include "pendular/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace pendular {

TridiagonalEigen solve_tridiagonal(std::span<const double> diagonal,
                                   std::span<const double> off_diagonal,
                                   bool want_vectors, int max_iterations) {
    const auto n = static_cast<Eigen::Index>(diagonal.size());
    if (n == 0) {
        throw InvalidArgument("solve_tridiagonal: empty matrix");
    }
    if (off_diagonal.size() + 1 != diagonal.size()) {
        throw InvalidArgument("solve_tridiagonal: off-diagonal must have n-1 entries");
    }

    std::vector<double> d(diagonal.begin(), diagonal.end());
    std::vector<double> e(off_diagonal.begin(), off_diagonal.end());
    e.push_back(0.0);

    Eigen::MatrixXd z;
    if (want_vectors) {
        z = Eigen::MatrixXd::Identity(n, n);
    }

    constexpr double eps = std::numeric_limits<double>::epsilon();

    for (Eigen::Index l = 0; l < n; ++l) {
        int iterations = 0;
        Eigen::Index m = l;
        do {
            // Find a negligible off-diagonal element to split the problem.
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) {
                    break;
                }
            }
            if (m == l) {
                break;
            }
            if (iterations++ == max_iterations) {
                throw ConvergenceError("solve_tridiagonal: no convergence for eigenvalue " +
                                       std::to_string(l) + " of " + std::to_string(n) +
                                       " after " + std::to_string(max_iterations) +
                                       " iterations");
            }

            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0;
            double c = 1.0;
            double p = 0.0;
            bool underflow = false;
            for (Eigen::Index i = m - 1; i >= l; --i) {
                const double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if (want_vectors) {
                    for (Eigen::Index k = 0; k < n; ++k) {
                        const double t = z(k, i + 1);
                        z(k, i + 1) = s * z(k, i) + c * t;
                        z(k, i) = c * z(k, i) - s * t;
                    }
                }
            }
            if (underflow) {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        } while (m != l);
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return d[a] < d[b]; });

    TridiagonalEigen out;
    out.values.resize(n);
    if (want_vectors) {
        out.vectors.resize(n, n);
    }
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values[k] = d[order[k]];
        if (want_vectors) {
            out.vectors.col(k) = z.col(order[k]);
        }
    }
    return out;
}

}  // namespace pendular
