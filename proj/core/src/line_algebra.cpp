#include "polarmg/line_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace polarmg {

TridiagFactor tridiag_factor(const std::vector<double>& diag,
                             const std::vector<double>& offdiag,
                             std::uint64_t* ops) {
    const int n = static_cast<int>(diag.size());
    if (n < 1) throw std::invalid_argument("tridiag_factor: empty matrix");
    if (static_cast<int>(offdiag.size()) != n - 1)
        throw std::invalid_argument("tridiag_factor: offdiag must have n-1 entries");

    TridiagFactor f;
    f.n = n;
    f.diag.resize(n);
    f.off.resize(n - 1);
    std::uint64_t count = 0;

    if (diag[0] <= 0.0)
        throw std::runtime_error("not positive definite at index 0");
    f.diag[0] = std::sqrt(diag[0]);
    count += 1;
    for (int i = 1; i < n; ++i) {
        const double m = offdiag[i - 1] / f.diag[i - 1];
        const double pivot = diag[i] - m * m;
        if (pivot <= 0.0)
            throw std::runtime_error("not positive definite at index " +
                                     std::to_string(i));
        f.off[i - 1] = m;
        f.diag[i] = std::sqrt(pivot);
        count += 4;  // div, mul, sub, sqrt
    }
    if (ops) *ops += count;
    return f;
}

void tridiag_solve(const TridiagFactor& factor, double* rhs,
                   std::uint64_t* ops) {
    const int n = factor.n;
    const double* l = factor.diag.data();
    const double* m = factor.off.data();
    std::uint64_t count = 0;

    rhs[0] /= l[0];
    count += 1;
    for (int i = 1; i < n; ++i) {
        rhs[i] = (rhs[i] - m[i - 1] * rhs[i - 1]) / l[i];
        count += 3;  // mul, sub, div
    }
    rhs[n - 1] /= l[n - 1];
    count += 1;
    for (int i = n - 2; i >= 0; --i) {
        rhs[i] = (rhs[i] - m[i] * rhs[i + 1]) / l[i];
        count += 3;
    }
    if (ops) *ops += count;
}

CyclicTridiagFactor cyclic_tridiag_factor(const std::vector<double>& diag,
                                          const std::vector<double>& offdiag,
                                          double corner, std::uint64_t* ops) {
    const int n = static_cast<int>(diag.size());
    if (n < 3)
        throw std::invalid_argument(
            "cyclic_tridiag_factor: need n >= 3 (corner would duplicate a band)");
    if (static_cast<int>(offdiag.size()) != n - 1)
        throw std::invalid_argument(
            "cyclic_tridiag_factor: offdiag must have n-1 entries");

    // Rank-one split A = T + c w w^T, w = e_1 + e_n: shift the two end
    // diagonal entries by -c. For the line matrices of this solver the corner
    // is nonpositive, so the shift can only strengthen the core's positive
    // definiteness.
    std::vector<double> core_diag = diag;
    core_diag.front() -= corner;
    core_diag.back() -= corner;
    std::uint64_t count = 2;

    CyclicTridiagFactor f;
    try {
        f.core = tridiag_factor(core_diag, offdiag, &count);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(
            std::string("cyclic core not positive definite after rank-one "
                        "shift: ") +
            e.what());
    }
    f.corner = corner;
    if (ops) *ops += count;
    return f;
}

void cyclic_tridiag_solve(const CyclicTridiagFactor& factor, double* rhs,
                          double* work, std::uint64_t* ops) {
    const int n = factor.n();
    const double c = factor.corner;
    std::uint64_t count = 0;

    // y = T^{-1} b in place.
    tridiag_solve(factor.core, rhs, &count);
    // z = T^{-1} w, recomputed every solve (kept out of the factor on purpose).
    std::fill(work, work + n, 0.0);
    work[0] = 1.0;
    work[n - 1] = 1.0;
    tridiag_solve(factor.core, work, &count);
    // x = y - [c (y_1 + y_n) / (1 + c (z_1 + z_n))] z.
    const double tau =
        c * (rhs[0] + rhs[n - 1]) / (1.0 + c * (work[0] + work[n - 1]));
    count += 6;
    for (int i = 0; i < n; ++i) {
        rhs[i] -= tau * work[i];
        count += 2;
    }
    if (ops) *ops += count;
}

SparseDirectFactor::SparseDirectFactor(int n,
                                       const std::vector<Triplet>& lower_triplets,
                                       std::vector<int> permutation)
    : n_(n), perm_(std::move(permutation)) {
    if (n_ <= 0) throw std::invalid_argument("sparse factor: empty matrix");
    if (perm_.empty()) {
        perm_.resize(n_);
        for (int i = 0; i < n_; ++i) perm_[i] = i;
    }
    if (static_cast<int>(perm_.size()) != n_)
        throw std::invalid_argument("sparse factor: permutation size mismatch");
    iperm_.assign(n_, -1);
    for (int k = 0; k < n_; ++k) iperm_[perm_[k]] = k;

    // Envelope pattern in permuted coordinates.
    first_col_.resize(n_);
    for (int i = 0; i < n_; ++i) first_col_[i] = i;
    for (const Triplet& t : lower_triplets) {
        if (t.row < 0 || t.row >= n_ || t.col < 0 || t.col > t.row)
            throw std::invalid_argument(
                "sparse factor: triplets must address the lower triangle");
        const int pi = iperm_[t.row];
        const int pj = iperm_[t.col];
        const int hi = std::max(pi, pj);
        const int lo = std::min(pi, pj);
        first_col_[hi] = std::min(first_col_[hi], lo);
    }
    row_offset_.resize(n_ + 1);
    row_offset_[0] = 0;
    for (int i = 0; i < n_; ++i)
        row_offset_[i + 1] = row_offset_[i] + (i - first_col_[i]);
    factor_.assign(row_offset_[n_], 0.0);
    diag_.assign(n_, 0.0);

    // Scatter values (duplicates accumulate).
    bool diag_seen_any = false;
    std::vector<char> diag_seen(n_, 0);
    for (const Triplet& t : lower_triplets) {
        const int pi = iperm_[t.row];
        const int pj = iperm_[t.col];
        if (pi == pj) {
            diag_[pi] += t.value;
            diag_seen[pi] = 1;
            diag_seen_any = true;
        } else {
            const int hi = std::max(pi, pj);
            const int lo = std::min(pi, pj);
            factor_[row_offset_[hi] + (lo - first_col_[hi])] += t.value;
        }
    }
    (void)diag_seen_any;
    for (int i = 0; i < n_; ++i)
        if (!diag_seen[i])
            throw std::runtime_error(
                "sparse factor: structurally singular (missing diagonal at row " +
                std::to_string(perm_[i]) + ")");

    // In-place envelope LDL^T.
    double scale = 0.0;
    for (int i = 0; i < n_; ++i) scale = std::max(scale, std::abs(diag_[i]));
    std::uint64_t count = 0;
    for (int i = 0; i < n_; ++i) {
        const int fi = first_col_[i];
        double* rowi = factor_.data() + row_offset_[i] - fi;
        for (int j = fi; j < i; ++j) {
            const int fj = first_col_[j];
            const double* rowj = factor_.data() + row_offset_[j] - fj;
            const int k0 = std::max(fi, fj);
            double sum = rowi[j];
            for (int k = k0; k < j; ++k) {
                sum -= rowi[k] * diag_[k] * rowj[k];
                count += 3;
            }
            rowi[j] = sum / diag_[j];
            count += 1;
        }
        double d = diag_[i];
        for (int k = fi; k < i; ++k) {
            d -= rowi[k] * rowi[k] * diag_[k];
            count += 3;
        }
        if (std::abs(d) < 1e-14 * std::max(scale, 1.0))
            throw std::runtime_error("sparse factor: zero pivot at row " +
                                     std::to_string(perm_[i]));
        diag_[i] = d;
    }
    factor_ops_ = count;
}

void SparseDirectFactor::solve(double* rhs, double* work,
                               std::uint64_t* ops) const {
    bool identity = true;
    for (int k = 0; k < n_; ++k)
        if (perm_[k] != k) {
            identity = false;
            break;
        }
    double* x = rhs;
    if (!identity) {
        if (!work)
            throw std::invalid_argument(
                "sparse solve: permuted factor requires a work buffer");
        for (int k = 0; k < n_; ++k) work[k] = rhs[perm_[k]];
        x = work;
    }

    std::uint64_t count = 0;
    for (int i = 0; i < n_; ++i) {
        const int fi = first_col_[i];
        const double* rowi = factor_.data() + row_offset_[i] - fi;
        double sum = x[i];
        for (int k = fi; k < i; ++k) {
            sum -= rowi[k] * x[k];
            count += 2;
        }
        x[i] = sum;
    }
    for (int i = 0; i < n_; ++i) {
        x[i] /= diag_[i];
        count += 1;
    }
    for (int i = n_ - 1; i >= 0; --i) {
        const int fi = first_col_[i];
        const double* rowi = factor_.data() + row_offset_[i] - fi;
        const double xi = x[i];
        for (int k = fi; k < i; ++k) {
            x[k] -= rowi[k] * xi;
            count += 2;
        }
    }
    if (!identity)
        for (int k = 0; k < n_; ++k) rhs[perm_[k]] = work[k];
    if (ops) *ops += count;
}

std::size_t SparseDirectFactor::bytes() const {
    return factor_.capacity() * sizeof(double) + diag_.capacity() * sizeof(double) +
           (perm_.capacity() + iperm_.capacity() + first_col_.capacity()) *
               sizeof(int) +
           row_offset_.capacity() * sizeof(std::size_t);
}

}  // namespace polarmg
