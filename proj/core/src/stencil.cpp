#include "polarmg/stencil.hpp"

#include <omp.h>

#include <cmath>
#include <stdexcept>
#include <string>

namespace polarmg {

StencilMode parse_stencil_mode(const std::string& name) {
    if (name == "Take") return StencilMode::Take;
    if (name == "Give") return StencilMode::Give;
    throw std::invalid_argument("unknown stencilDistributionMethod '" + name +
                                "' (expected Take or Give)");
}

BoundaryMode parse_boundary_mode(bool dirichlet_interior) {
    return dirichlet_interior ? BoundaryMode::InteriorDirichlet
                              : BoundaryMode::AcrossOrigin;
}

std::string to_string(StencilMode mode) {
    return mode == StencilMode::Take ? "Take" : "Give";
}

DiscreteOperator::DiscreteOperator(const PolarGrid& grid,
                                   const LevelCache& cache,
                                   BoundaryMode boundary)
    : grid_(&grid), cache_(&cache), boundary_(boundary) {
    if (&cache.grid() != &grid)
        throw std::invalid_argument("cache was built for a different grid");
}

namespace {

/// Angular spacing "below" angle t, i.e. k_{t-1} with wraparound.
inline double k_below(const PolarGrid& g, int t) {
    return g.angular_spacing(t == 0 ? g.n_theta() - 1 : t - 1);
}

}  // namespace

template <bool Eliminated>
void DiscreteOperator::build_row(int s, int t, StencilRow& out) const {
    out.count = 0;
    const PolarGrid& g = *grid_;
    const int N = g.n_r() - 1;
    const int p = g.index(s, t);

    if (Eliminated && is_dirichlet_ring(s)) {
        out.add(p, 1.0);
        return;
    }

    const int tm = g.wrap_theta(t - 1);
    const int tp = g.wrap_theta(t + 1);
    const double km = k_below(g, t);
    const double kp = g.angular_spacing(t);
    const double hm = s > 0 ? g.radial_spacing(s - 1) : 0.0;
    const double hp = s < N ? g.radial_spacing(s) : 0.0;
    const double kbar = 0.5 * (km + kp);
    const double hbar = 0.5 * (hm + hp);

    const NodeCoeffs cP = cache_->coeffs(s, t);
    const NodeCoeffs cTM = cache_->coeffs(s, tm);
    const NodeCoeffs cTP = cache_->coeffs(s, tp);
    NodeCoeffs cSM{}, cSP{};
    if (s > 0) cSM = cache_->coeffs(s - 1, t);
    if (s < N) cSP = cache_->coeffs(s + 1, t);

    const bool at_origin_ring =
        s == 0 && boundary_ == BoundaryMode::AcrossOrigin;

    // Diagonal, accumulated in a fixed order.
    double diag = 0.0;
    if (s > 0) diag += (kbar / hm) * (cP.arr + cSM.arr);
    if (s < N) diag += (kbar / hp) * (cP.arr + cSP.arr);
    diag += (hbar / km) * (cP.att + cTM.att);
    diag += (hbar / kp) * (cP.att + cTP.att);
    diag += cache_->beta(s) * cP.det_abs * hbar * kbar;

    double w_phantom = 0.0;
    int t2 = -1;
    if (at_origin_ring) {
        t2 = g.wrap_theta(t + g.n_theta() / 2);
        const int tlo = t < t2 ? t : t2;
        const int thi = t < t2 ? t2 : t;
        const double kbar_lo = 0.5 * (k_below(g, tlo) + g.angular_spacing(tlo));
        const double kbar_hi = 0.5 * (k_below(g, thi) + g.angular_spacing(thi));
        const double omega = (kbar_lo + kbar_hi) / (4.0 * g.inner_radius());
        w_phantom = omega * (cache_->coeffs(0, tlo).arr +
                             cache_->coeffs(0, thi).arr);
        diag += w_phantom;
    }
    out.add(p, diag);

    const auto keep = [&](int ring) {
        return !Eliminated || !is_dirichlet_ring(ring);
    };

    // Radial neighbors: the cross-term parts cancel between the two angular
    // cells sharing the edge (the angular direction is periodic).
    if (s > 0 && keep(s - 1))
        out.add(g.index(s - 1, t), -(kbar / hm) * (cP.arr + cSM.arr));
    if (s < N && keep(s + 1))
        out.add(g.index(s + 1, t), -(kbar / hp) * (cP.arr + cSP.arr));

    // Angular neighbors. The cross-term parts cancel between the two radial
    // cells sharing the edge, except on the innermost and outermost rings
    // where only one of those cells exists.
    {
        double south = -(hbar / km) * (cP.att + cTM.att);
        double north = -(hbar / kp) * (cP.att + cTP.att);
        if (s == 0) {
            south += (cP.art - cTM.art) * 0.25;
            north += (cTP.art - cP.art) * 0.25;
        } else if (s == N) {
            south += (cTM.art - cP.art) * 0.25;
            north += (cP.art - cTP.art) * 0.25;
        }
        out.add(g.index(s, tm), south);
        out.add(g.index(s, tp), north);
    }

    // Diagonal neighbors (cross term), one cell each.
    if (s > 0 && keep(s - 1)) {
        out.add(g.index(s - 1, tm), -(cTM.art + cSM.art) * 0.25);
        out.add(g.index(s - 1, tp), (cSM.art + cTP.art) * 0.25);
    }
    if (s < N && keep(s + 1)) {
        out.add(g.index(s + 1, tm), (cTM.art + cSP.art) * 0.25);
        out.add(g.index(s + 1, tp), -(cSP.art + cTP.art) * 0.25);
    }

    if (at_origin_ring) out.add(g.index(0, t2), -w_phantom);
}

void DiscreteOperator::row(int s, int t, StencilRow& out) const {
    build_row<true>(s, t, out);
}

void DiscreteOperator::row_raw(int s, int t, StencilRow& out) const {
    build_row<false>(s, t, out);
}

double DiscreteOperator::diagonal(int s, int t) const {
    StencilRow r;
    build_row<true>(s, t, r);
    return r.vals[0];  // diagonal is emitted first
}

void DiscreteOperator::apply(StencilMode mode, const double* u,
                             double* y) const {
    if (mode == StencilMode::Take)
        apply_take(u, y);
    else
        apply_give(u, y);
}

void DiscreteOperator::apply_take(const double* u, double* y) const {
    const int n_r = grid_->n_r();
    const int n_theta = grid_->n_theta();
#pragma omp parallel for schedule(static)
    for (int s = 0; s < n_r; ++s) {
        StencilRow r;
        for (int t = 0; t < n_theta; ++t) {
            build_row<true>(s, t, r);
            double acc = 0.0;
            for (int i = 0; i < r.count; ++i) acc += r.vals[i] * u[r.cols[i]];
            y[grid_->index(s, t)] = acc;
        }
    }
}

void DiscreteOperator::scatter_ring(int s, const double* u, double* y) const {
    const PolarGrid& g = *grid_;
    const int N = g.n_r() - 1;
    const int n_theta = g.n_theta();
    const double hm = s > 0 ? g.radial_spacing(s - 1) : 0.0;
    const double hp = s < N ? g.radial_spacing(s) : 0.0;
    const double hbar = 0.5 * (hm + hp);
    const bool pD = is_dirichlet_ring(s);
    const bool smD = s > 0 && is_dirichlet_ring(s - 1);
    const bool spD = s < N && is_dirichlet_ring(s + 1);
    const double beta_s = cache_->beta(s);

    for (int t = 0; t < n_theta; ++t) {
        const int p = g.index(s, t);
        const int tm = g.wrap_theta(t - 1);
        const int tp = g.wrap_theta(t + 1);
        const double km = k_below(g, t);
        const double kp = g.angular_spacing(t);
        const double kbar = 0.5 * (km + kp);
        const NodeCoeffs cP = cache_->coeffs(s, t);

        if (pD) {
            y[p] = u[p];  // identity row; writes into it are filtered out
            // This node's arr share still feeds the neighboring interior
            // diagonal (the coupling itself is eliminated, the neighbor's
            // diagonal term is not).
            for (int side = 0; side < 2; ++side) {
                const bool inward = side == 0;
                if (inward ? s == 0 : s == N) continue;
                const int q = inward ? g.index(s - 1, t) : g.index(s + 1, t);
                if (inward ? smD : spD) continue;
                y[q] += (kbar / (inward ? hm : hp)) * cP.arr * u[q];
            }
            continue;
        }

        // Mass term.
        y[p] += beta_s * cP.det_abs * hbar * kbar * u[p];

        // Radial edges: this node's arr share, pushed to both edge rows.
        for (int side = 0; side < 2; ++side) {
            const bool inward = side == 0;
            if (inward ? s == 0 : s == N) continue;
            const int q = inward ? g.index(s - 1, t) : g.index(s + 1, t);
            const bool qD = inward ? smD : spD;
            const double w = (kbar / (inward ? hm : hp)) * cP.arr;
            y[p] += w * u[p];
            if (!qD) {
                y[p] -= w * u[q];
                y[q] += w * u[q];
                y[q] -= w * u[p];
            }
        }

        // Angular edges: both rows live on this ring (never Dirichlet here).
        for (int side = 0; side < 2; ++side) {
            const int q = g.index(s, side == 0 ? tm : tp);
            const double w = (hbar / (side == 0 ? km : kp)) * cP.att;
            y[p] += w * (u[p] - u[q]);
            y[q] += w * (u[q] - u[p]);
        }

        // Cross term, cell by cell: corner sign sigma, the corner's radial
        // and angular partners R and T within the cell.
        for (int rho = 0; rho < 2; ++rho) {
            const bool below = rho == 0;  // cell on the inward radial side
            if (below ? s == 0 : s == N) continue;
            for (int tau = 0; tau < 2; ++tau) {
                const bool left = tau == 1;  // cell on the +theta side
                const double sigma = (below != left) ? 1.0 : -1.0;
                const int R = below ? g.index(s - 1, t) : g.index(s + 1, t);
                const bool RD = below ? smD : spD;
                const int T = g.index(s, left ? tp : tm);
                const double v = sigma * cP.art * 0.25;
                y[p] += 2.0 * v * u[p];
                if (!RD) {
                    y[p] -= v * u[R];
                    y[R] -= v * u[p];
                    y[R] += v * u[T];
                }
                y[p] -= v * u[T];
                y[T] -= v * u[p];
                if (!RD) y[T] += v * u[R];
            }
        }
    }

    // Phantom diametral edges, owned by the ring-0 task.
    if (s == 0 && boundary_ == BoundaryMode::AcrossOrigin) {
        for (const PhantomEdge& e : phantom_edges()) {
            const int p = g.index(0, e.t);
            const int q = g.index(0, e.t2);
            y[p] += e.w * (u[p] - u[q]);
            y[q] += e.w * (u[q] - u[p]);
        }
    }
}

void DiscreteOperator::apply_give(const double* u, double* y) const {
    const int n = grid_->num_nodes();
    const int n_r = grid_->n_r();
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) y[i] = 0.0;
    // Ring task s writes rows s-1..s+1 only; rings of one phase are three
    // apart, so their write ranges are disjoint and the accumulation order
    // into any row is the phase order -- independent of the thread count.
    for (int phase = 0; phase < 3; ++phase) {
        const int count = (n_r - phase + 2) / 3;
#pragma omp parallel for schedule(static)
        for (int i = 0; i < count; ++i) scatter_ring(phase + 3 * i, u, y);
    }
}

void DiscreteOperator::residual(StencilMode mode, const double* u,
                                const double* f, double* r) const {
    apply(mode, u, r);
    const int n = grid_->num_nodes();
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) r[i] = f[i] - r[i];
}

double DiscreteOperator::node_weight(int s, int t) const {
    const PolarGrid& g = *grid_;
    const int N = g.n_r() - 1;
    const double hm = s > 0 ? g.radial_spacing(s - 1) : 0.0;
    const double hp = s < N ? g.radial_spacing(s) : 0.0;
    const double km = k_below(g, t);
    const double kp = g.angular_spacing(t);
    return 0.5 * (hm + hp) * 0.5 * (km + kp);
}

void DiscreteOperator::assemble_rhs_raw(double* b) const {
    const PolarGrid& g = *grid_;
    const GeometryMap& geom = cache_->geometry();
    const ProblemCase& prob = cache_->problem();
    std::string error;
#pragma omp parallel for schedule(static)
    for (int s = 0; s < g.n_r(); ++s) {
        try {
            for (int t = 0; t < g.n_theta(); ++t) {
                const double f = prob.rhs_f(geom, g.radius(s), g.angle(t));
                b[g.index(s, t)] =
                    f * cache_->coeffs(s, t).det_abs * node_weight(s, t);
            }
        } catch (const std::exception& e) {
#pragma omp critical
            if (error.empty()) error = e.what();
        }
    }
    if (!error.empty()) throw std::runtime_error(error);
}

void DiscreteOperator::assemble_rhs(double* b) const {
    assemble_rhs_raw(b);
    const PolarGrid& g = *grid_;
    const ProblemCase& prob = cache_->problem();
    const int N = g.n_r() - 1;
    for (int s = 0; s < g.n_r(); ++s) {
        const bool lift = (s > 0 && is_dirichlet_ring(s - 1)) ||
                          (s < N && is_dirichlet_ring(s + 1));
        if (!is_dirichlet_ring(s) && !lift) continue;
        for (int t = 0; t < g.n_theta(); ++t) {
            const int p = g.index(s, t);
            if (is_dirichlet_ring(s)) {
                b[p] = prob.dirichlet_u(g.radius(s), g.angle(t));
                continue;
            }
            StencilRow r;
            build_row<false>(s, t, r);
            for (int i = 0; i < r.count; ++i) {
                const auto [cs, ct] = g.numbering().node(r.cols[i]);
                if (!is_dirichlet_ring(cs)) continue;
                b[p] -= r.vals[i] *
                        prob.dirichlet_u(g.radius(cs), g.angle(ct));
            }
        }
    }
}

std::vector<CooEntry> DiscreteOperator::assemble_coo(
    const std::vector<int>& nodes) const {
    std::vector<int> local(grid_->num_nodes(), -1);
    for (std::size_t i = 0; i < nodes.size(); ++i)
        local[nodes[i]] = static_cast<int>(i);
    std::vector<CooEntry> entries;
    entries.reserve(nodes.size() * 6);
    StencilRow r;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto [s, t] = grid_->numbering().node(nodes[i]);
        row(s, t, r);
        const int lr = static_cast<int>(i);
        for (int e = 0; e < r.count; ++e) {
            const int lc = local[r.cols[e]];
            if (lc >= 0 && lc <= lr) entries.push_back({lr, lc, r.vals[e]});
        }
    }
    return entries;
}

void DiscreteOperator::circle_line(int s, std::vector<double>& diag,
                                   std::vector<double>& off,
                                   double& corner) const {
    if (s == 0 && boundary_ == BoundaryMode::AcrossOrigin)
        throw std::logic_error(
            "the across-origin innermost line is not cyclic-tridiagonal");
    const int n_theta = grid_->n_theta();
    diag.assign(n_theta, 0.0);
    off.assign(n_theta - 1, 0.0);
    corner = 0.0;
    StencilRow r;
    for (int t = 0; t < n_theta; ++t) {
        row(s, t, r);
        diag[t] = r.at(grid_->index(s, t));
        if (t < n_theta - 1)
            off[t] = r.at(grid_->index(s, t + 1));
        else
            corner = r.at(grid_->index(s, 0));
    }
}

void DiscreteOperator::radial_line(int t, std::vector<double>& diag,
                                   std::vector<double>& off) const {
    const int split = grid_->smoother_split();
    const int len = grid_->n_r() - split;
    diag.assign(len, 0.0);
    off.assign(len > 1 ? len - 1 : 0, 0.0);
    StencilRow r;
    for (int i = 0; i < len; ++i) {
        const int s = split + i;
        row(s, t, r);
        diag[i] = r.at(grid_->index(s, t));
        if (i < len - 1) off[i] = r.at(grid_->index(s + 1, t));
    }
}

CellEnergy DiscreteOperator::cell_energy(int i, int j) const {
    const PolarGrid& g = *grid_;
    const int jn = g.wrap_theta(j + 1);
    CellEnergy cell;
    cell.h = g.radial_spacing(i);
    cell.k = g.angular_spacing(j);
    cell.weight = cell.h * cell.k / 4.0;
    const int cs[4] = {i, i + 1, i, i + 1};
    const int ct[4] = {j, j, jn, jn};
    const int rs[4] = {i + 1, i, i + 1, i};
    const int ts[4] = {jn, jn, j, j};
    const double sg[4] = {1.0, -1.0, -1.0, 1.0};
    for (int c = 0; c < 4; ++c) {
        CellEnergy::Corner& corner = cell.corners[c];
        corner.cs = cs[c];
        corner.ct = ct[c];
        corner.rs = rs[c];
        corner.rt = ct[c];
        corner.ts = cs[c];
        corner.tt = ts[c];
        corner.sigma = sg[c];
        const NodeCoeffs cc = cache_->coeffs(cs[c], ct[c]);
        corner.arr = cc.arr;
        corner.art = cc.art;
        corner.att = cc.att;
    }
    return cell;
}

std::vector<PhantomEdge> DiscreteOperator::phantom_edges() const {
    std::vector<PhantomEdge> edges;
    if (boundary_ != BoundaryMode::AcrossOrigin) return edges;
    const PolarGrid& g = *grid_;
    const int half = g.n_theta() / 2;
    edges.reserve(half);
    for (int t = 0; t < half; ++t) {
        const int t2 = t + half;
        const double kbar_lo = 0.5 * (k_below(g, t) + g.angular_spacing(t));
        const double kbar_hi = 0.5 * (k_below(g, t2) + g.angular_spacing(t2));
        const double omega = (kbar_lo + kbar_hi) / (4.0 * g.inner_radius());
        const double w =
            omega * (cache_->coeffs(0, t).arr + cache_->coeffs(0, t2).arr);
        edges.push_back({t, t2, w});
    }
    return edges;
}

}  // namespace polarmg
