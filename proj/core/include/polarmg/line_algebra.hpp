#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace polarmg {

/**
 * \brief Cholesky factorization L L^T of a symmetric positive definite
 * tridiagonal matrix, stored as the two factor bands.
 *
 * Operation counts follow the convention that each add, subtract, multiply,
 * divide, and square root counts as one operation: factorization costs
 * 4n - 3, a solve costs 6n - 4.
 */
struct TridiagFactor {
    int n = 0;
    std::vector<double> diag;  // L diagonal entries, length n
    std::vector<double> off;   // L subdiagonal entries, length n-1

    std::size_t bytes() const {
        return (diag.capacity() + off.capacity()) * sizeof(double);
    }
};

/// Factorizes the SPD tridiagonal matrix given by its diagonal and
/// subdiagonal; throws "not positive definite" with the failing index.
TridiagFactor tridiag_factor(const std::vector<double>& diag,
                             const std::vector<double>& offdiag,
                             std::uint64_t* ops = nullptr);

/// Solves L L^T x = rhs in place (rhs has factor.n entries).
void tridiag_solve(const TridiagFactor& factor, double* rhs,
                   std::uint64_t* ops = nullptr);

/**
 * \brief Sherman-Morrison treatment of a symmetric cyclic tridiagonal matrix
 * A = T + c w w^T with w = e_1 + e_n: the core T is A with the two corner
 * entries removed and the first/last diagonal entries shifted by -c.
 *
 * Only the tridiagonal core factor and the scalar corner are stored (2n+O(1)
 * doubles); the auxiliary solve of the Sherman-Morrison update is recomputed
 * by each solve, which keeps a solve at 14n + O(1) operations and the factor
 * free of extra length-n vectors.
 */
struct CyclicTridiagFactor {
    TridiagFactor core;
    double corner = 0.0;

    int n() const { return core.n; }
    std::size_t bytes() const { return core.bytes() + sizeof(double); }
};

/// Factorizes the SPD cyclic tridiagonal matrix (diag, offdiag, corner);
/// requires n >= 3. Errors mirror tridiag_factor for the shifted core.
CyclicTridiagFactor cyclic_tridiag_factor(const std::vector<double>& diag,
                                          const std::vector<double>& offdiag,
                                          double corner,
                                          std::uint64_t* ops = nullptr);

/// Solves in place; work must provide factor.n() doubles of scratch.
void cyclic_tridiag_solve(const CyclicTridiagFactor& factor, double* rhs,
                          double* work, std::uint64_t* ops = nullptr);

/**
 * \brief Small built-in symmetric direct solver (envelope LDL^T).
 *
 * Used for the coarsest-level operator and the innermost across-the-origin
 * ring, whose antipodal couplings make the circle-line submatrix
 * non-tridiagonal. Input is the lower triangle in triplet (COO) form; an
 * optional symmetric permutation keeps the envelope small (the across-origin
 * ring is passed in antipodally paired order). LDL^T handles the symmetric
 * indefinite case as long as no pivot vanishes.
 */
class SparseDirectFactor {
  public:
    struct Triplet {
        int row;
        int col;
        double value;
    };

    /// permutation[k] = original index placed at position k; empty = identity.
    SparseDirectFactor(int n, const std::vector<Triplet>& lower_triplets,
                       std::vector<int> permutation = {});

    /// Solves A x = rhs in place. rhs is in original index order; work must
    /// hold n doubles when a permutation is present (may be null otherwise).
    void solve(double* rhs, double* work = nullptr,
               std::uint64_t* ops = nullptr) const;

    int size() const { return n_; }
    std::size_t bytes() const;
    std::uint64_t factor_ops() const { return factor_ops_; }

  private:
    int n_ = 0;
    std::vector<int> perm_;               // position -> original index
    std::vector<int> iperm_;              // original index -> position
    std::vector<int> first_col_;          // envelope start per permuted row
    std::vector<std::size_t> row_offset_; // start of row i in factor_
    std::vector<double> factor_;          // strict lower L within envelope
    std::vector<double> diag_;            // D of LDL^T
    std::uint64_t factor_ops_ = 0;
};

}  // namespace polarmg
