#pragma once

#include <string>
#include <vector>

#include "polarmg/level_cache.hpp"
#include "polarmg/polar_grid.hpp"

namespace polarmg {

/// How the matrix-free operator distributes work.
enum class StencilMode {
    Take,  // row-wise gather: each row built from its neighbors' coefficients
    Give,  // node-wise scatter: each node's coefficients pushed to the rows
};

/// Treatment of the innermost ring.
enum class BoundaryMode {
    AcrossOrigin,       // phantom diametral edges close the disk at r = R0
    InteriorDirichlet,  // ring 0 carries Dirichlet values like the outer ring
};

StencilMode parse_stencil_mode(const std::string& name);
BoundaryMode parse_boundary_mode(bool dirichlet_interior);
std::string to_string(StencilMode mode);

/// One operator row in flat (smoother-ordered) indices. At most the diagonal,
/// eight grid neighbors, and the across-origin partner.
struct StencilRow {
    static constexpr int kMaxEntries = 10;
    int count = 0;
    int cols[kMaxEntries];
    double vals[kMaxEntries];

    void add(int col, double val) {
        cols[count] = col;
        vals[count] = val;
        ++count;
    }
    /// Value at `col`, 0 when the row has no such entry.
    double at(int col) const {
        for (int i = 0; i < count; ++i)
            if (cols[i] == col) return vals[i];
        return 0.0;
    }
};

/// Sparse matrix entry (used for subset assembly, local indices).
struct CooEntry {
    int row;
    int col;
    double value;
};

/// Energy contribution of one grid cell (i, j): four corners, each with its
/// one-sided difference quotients along the two cell edges meeting there.
/// The cross term carries the corner sign pattern (+, -, -, +).
struct CellEnergy {
    double weight;  // h_i * k_j / 4
    double h, k;    // cell extents
    struct Corner {
        int cs, ct;    // corner node
        int rs, rt;    // radial partner within the cell
        int ts, tt;    // angular partner within the cell
        double sigma;  // sign of the cross term
        double arr, art, att;
    } corners[4];
};

/// A phantom diametral edge closing the annulus across the origin.
struct PhantomEdge {
    int t;       // first angle index (t < n_theta/2)
    int t2;      // antipodal angle index
    double w;    // edge conductance omega * (arr_t + arr_t2)
};

/**
 * \brief Matrix-free discrete operator of -div(alpha grad u) + beta u on one
 * grid level, in either boundary mode, with matching Take (gather) and Give
 * (scatter) applications.
 *
 * The assembled system eliminates Dirichlet rows to identity and drops the
 * corresponding columns; assemble_rhs() carries the eliminated couplings to
 * the right-hand side. Raw rows (no elimination) expose the plain energy
 * gradient for verification.
 */
class DiscreteOperator {
  public:
    DiscreteOperator(const PolarGrid& grid, const LevelCache& cache,
                     BoundaryMode boundary);

    const PolarGrid& grid() const { return *grid_; }
    const LevelCache& cache() const { return *cache_; }
    BoundaryMode boundary_mode() const { return boundary_; }

    bool is_dirichlet_ring(int s) const {
        return s == grid_->n_r() - 1 ||
               (s == 0 && boundary_ == BoundaryMode::InteriorDirichlet);
    }

    /// Row of the eliminated system (Dirichlet rows are identity).
    void row(int s, int t, StencilRow& out) const;
    /// Row of the raw energy gradient (no boundary elimination).
    void row_raw(int s, int t, StencilRow& out) const;
    /// Diagonal entry of the eliminated system.
    double diagonal(int s, int t) const;

    void apply(StencilMode mode, const double* u, double* y) const;
    void apply_take(const double* u, double* y) const;
    void apply_give(const double* u, double* y) const;
    /// r = f - A u (eliminated system, so r = f - u on Dirichlet rows).
    void residual(StencilMode mode, const double* u, const double* f,
                  double* r) const;

    /// Volume-weighted source with Dirichlet lifting: interior rows get
    /// f*|detDF|*W minus eliminated couplings times boundary values,
    /// Dirichlet rows get the boundary values themselves.
    void assemble_rhs(double* b) const;
    /// Plain volume-weighted source on every row (no elimination).
    void assemble_rhs_raw(double* b) const;

    /// Sub-block over `nodes` (flat indices; their order defines the local
    /// numbering). Lower triangle only; couplings leaving the set are
    /// dropped. Eliminated rows.
    std::vector<CooEntry> assemble_coo(const std::vector<int>& nodes) const;

    /// Cyclic-tridiagonal data of circle line s: diag[t], off[t] couples t to
    /// t+1 for t < n_theta-1, corner couples n_theta-1 to 0. Requires that
    /// the line is cyclic-tridiagonal (not the across-origin ring 0).
    void circle_line(int s, std::vector<double>& diag,
                     std::vector<double>& off, double& corner) const;
    /// Tridiagonal data of radial line t over rings split..n_r-1.
    void radial_line(int t, std::vector<double>& diag,
                     std::vector<double>& off) const;

    /// Energy definition data for verification.
    CellEnergy cell_energy(int i, int j) const;
    /// Node quadrature weight W_p = sum of h*k/4 over the adjacent cells.
    double node_weight(int s, int t) const;
    /// Phantom diametral edges (empty in Dirichlet-interior mode).
    std::vector<PhantomEdge> phantom_edges() const;

  private:
    template <bool Eliminated>
    void build_row(int s, int t, StencilRow& out) const;
    void scatter_ring(int s, const double* u, double* y) const;

    const PolarGrid* grid_;
    const LevelCache* cache_;
    BoundaryMode boundary_;
};

}  // namespace polarmg
