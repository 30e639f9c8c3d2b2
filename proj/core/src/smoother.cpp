#include "polarmg/smoother.hpp"

#include <omp.h>

#include <numeric>
#include <stdexcept>

namespace polarmg {

namespace {

inline double k_below(const PolarGrid& g, int t) {
    return g.angular_spacing(t == 0 ? g.n_theta() - 1 : t - 1);
}

}  // namespace

Smoother::Smoother(const DiscreteOperator& op, StencilMode mode,
                   const std::string& tag_prefix)
    : op_(&op),
      grid_(&op.grid()),
      mode_(mode),
      tag_(tag_prefix + "/smoother") {
    split_ = grid_->smoother_split();
    const int n_theta = grid_->n_theta();
    const bool origin_line =
        op.boundary_mode() == BoundaryMode::AcrossOrigin;

    std::vector<double> diag, off;
    double corner = 0.0;
    circle_factors_.reserve(split_);
    for (int s = 0; s < split_; ++s) {
        if (s == 0 && origin_line) {
            // The across-origin ring couples antipodal nodes; factor it in
            // antipodally paired order so those couplings sit next to the
            // diagonal and the envelope stays narrow.
            std::vector<int> nodes(n_theta);
            std::iota(nodes.begin(), nodes.end(), 0);
            std::vector<SparseDirectFactor::Triplet> triplets;
            for (const CooEntry& e : op.assemble_coo(nodes))
                triplets.push_back({e.row, e.col, e.value});
            std::vector<int> perm(n_theta);
            for (int i = 0; i < n_theta / 2; ++i) {
                perm[2 * i] = i;
                perm[2 * i + 1] = n_theta / 2 + i;
            }
            origin_factor_ = std::make_unique<SparseDirectFactor>(
                n_theta, triplets, std::move(perm));
            circle_factors_.emplace_back();  // placeholder, never solved
        } else {
            op.circle_line(s, diag, off, corner);
            circle_factors_.push_back(
                cyclic_tridiag_factor(diag, off, corner, nullptr));
        }
    }
    if (split_ < grid_->n_r()) {
        radial_factors_.reserve(n_theta);
        for (int t = 0; t < n_theta; ++t) {
            op.radial_line(t, diag, off);
            radial_factors_.push_back(tridiag_factor(diag, off, nullptr));
        }
    }

    for (const CyclicTridiagFactor& f : circle_factors_) bytes_ += f.bytes();
    for (const TridiagFactor& f : radial_factors_) bytes_ += f.bytes();
    if (origin_factor_) bytes_ += origin_factor_->bytes();
    MemoryTracker::instance().add(tag_, bytes_);
}

Smoother::~Smoother() { MemoryTracker::instance().remove(tag_, bytes_); }

void Smoother::smooth(double* u, const double* f,
                      std::vector<LineWorkspace>& workspaces,
                      FlopCounters* flops) const {
    sweep_circle(0, u, f, workspaces, flops, false);
    sweep_circle(1, u, f, workspaces, flops, false);
    if (!radial_factors_.empty()) {
        sweep_radial(0, u, f, workspaces, flops, false);
        sweep_radial(1, u, f, workspaces, flops, false);
    }
}

void Smoother::smooth_extrapolated(double* u, const double* fhat,
                                   std::vector<LineWorkspace>& workspaces,
                                   FlopCounters* flops) const {
    sweep_circle(1, u, fhat, workspaces, flops, true);
    if (!radial_factors_.empty())
        sweep_radial(1, u, fhat, workspaces, flops, true);
    extrapolated_pointwise(u, fhat);
    if (origin_factor_) extrapolated_origin_pairs(u, fhat);
}

// --- sweeps -----------------------------------------------------------------

void Smoother::sweep_circle(int parity, double* u, const double* f,
                            std::vector<LineWorkspace>& ws,
                            FlopCounters* flops, bool extrapolated) const {
    const bool gather = extrapolated || mode_ == StencilMode::Take;
    if (!gather) give_rhs_circle(parity, u, f);
    const int lines = split_ > parity ? (split_ - parity + 1) / 2 : 0;
#pragma omp parallel
    {
        FlopCounters local;
        LineWorkspace& w = ws[omp_get_thread_num()];
#pragma omp for schedule(static)
        for (int i = 0; i < lines; ++i) {
            const int s = parity + 2 * i;
            if (gather) take_rhs_circle(s, u, f, extrapolated);
            solve_circle(s, u, w, &local);
        }
        if (flops != nullptr) {
#pragma omp critical(polarmg_smoother_flops)
            { *flops += local; }
        }
    }
}

void Smoother::sweep_radial(int parity, double* u, const double* f,
                            std::vector<LineWorkspace>& ws,
                            FlopCounters* flops, bool extrapolated) const {
    const bool gather = extrapolated || mode_ == StencilMode::Take;
    if (!gather) give_rhs_radial(parity, u, f);
    const int n_theta = grid_->n_theta();
    const int len = grid_->n_r() - split_;
    const int lines = (n_theta - parity + 1) / 2;
    (void)ws;
#pragma omp parallel
    {
        FlopCounters local;
#pragma omp for schedule(static)
        for (int i = 0; i < lines; ++i) {
            const int t = parity + 2 * i;
            if (gather) take_rhs_radial(t, u, f, extrapolated);
            tridiag_solve(radial_factors_[t], u + split_ * n_theta + t * len,
                          &local.tridiag_solve);
        }
        if (flops != nullptr) {
#pragma omp critical(polarmg_smoother_flops)
            { *flops += local; }
        }
    }
}

void Smoother::solve_circle(int s, double* u, LineWorkspace& ws,
                            FlopCounters* flops) const {
    if (s == 0 && origin_factor_) {
        origin_factor_->solve(u, ws.a.data(), &flops->sparse_solve);
    } else {
        cyclic_tridiag_solve(circle_factors_[s], u + s * grid_->n_theta(),
                             ws.a.data(), &flops->cyclic_solve);
    }
}

// --- gathered right-hand sides ----------------------------------------------
//
// A line solve needs rhs_p = f_p - sum_{q off line} A_pq u_q written into u
// over the line's contiguous index range; the solve then runs in place. For
// the extrapolated operator, rows of fine-only nodes are 4/3 times the
// standard rows, so the same line factors apply to 3/4 of the modified
// right-hand side (Dirichlet rows stay identity rows).

void Smoother::take_rhs_circle(int s, double* u, const double* f,
                               bool extrapolated) const {
    const int n_theta = grid_->n_theta();
    const int base = s * n_theta;
    if (op_->is_dirichlet_ring(s)) {
        for (int t = 0; t < n_theta; ++t) u[base + t] = f[base + t];
        return;
    }
    StencilRow r;
    for (int t = 0; t < n_theta; ++t) {
        const int p = base + t;
        op_->row(s, t, r);
        double acc = extrapolated ? 0.75 * f[p] : f[p];
        for (int i = 0; i < r.count; ++i) {
            const int c = r.cols[i];
            if (c >= base && c < base + n_theta) continue;  // in line / diag
            acc -= r.vals[i] * u[c];
        }
        u[p] = acc;
    }
}

void Smoother::take_rhs_radial(int t, double* u, const double* f,
                               bool extrapolated) const {
    const int len = grid_->n_r() - split_;
    const int base = split_ * grid_->n_theta() + t * len;
    StencilRow r;
    for (int i = 0; i < len; ++i) {
        const int s = split_ + i;
        const int p = base + i;
        if (op_->is_dirichlet_ring(s)) {
            u[p] = f[p];
            continue;
        }
        op_->row(s, t, r);
        double acc = extrapolated ? 0.75 * f[p] : f[p];
        for (int e = 0; e < r.count; ++e) {
            const int c = r.cols[e];
            if (c >= base && c < base + len) continue;
            acc -= r.vals[e] * u[c];
        }
        u[p] = acc;
    }
}

// --- scattered right-hand sides ---------------------------------------------
//
// Give mode rebuilds the same right-hand sides from node coefficients, each
// evaluated once, in three barrier-separated write phases. Phase 1: every
// target line initializes its rows with f and adds the contributions of its
// own nodes (for spokes also the folded contribution of the circle node just
// below the interface). Phases 2 and 3: the off-color neighbor lines scatter
// their nodes' shares into target rows; lines four apart write disjoint row
// sets, so each phase is parallel and the accumulation order per row is the
// fixed phase order. Cross-derivative shares that cancel exactly between the
// two cells sharing an edge (the radial a-parts of angular couplings and vice
// versa) are omitted up front.

void Smoother::give_rhs_circle(int parity, double* u, const double* f) const {
    const PolarGrid& g = *grid_;
    const LevelCache& cache = op_->cache();
    const int n_theta = g.n_theta();
    const int N = g.n_r() - 1;

    const int targets = split_ > parity ? (split_ - parity + 1) / 2 : 0;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < targets; ++i) {
        const int s = parity + 2 * i;
        const int base = s * n_theta;
        if (op_->is_dirichlet_ring(s)) {
            for (int t = 0; t < n_theta; ++t) u[base + t] = f[base + t];
            continue;
        }
        const double hm = s > 0 ? g.radial_spacing(s - 1) : 0.0;
        const double hp = s < N ? g.radial_spacing(s) : 0.0;
        const bool in_ok = s > 0 && !op_->is_dirichlet_ring(s - 1);
        const bool out_ok = s < N && !op_->is_dirichlet_ring(s + 1);
        for (int t = 0; t < n_theta; ++t) u[base + t] = f[base + t];
        for (int t = 0; t < n_theta; ++t) {
            const int tm = t == 0 ? n_theta - 1 : t - 1;
            const int tp = t + 1 == n_theta ? 0 : t + 1;
            const double kbar =
                0.5 * (k_below(g, t) + g.angular_spacing(t));
            const NodeCoeffs cP = cache.coeffs(s, t);
            const double v = 0.25 * cP.art;
            if (in_ok) {
                const double ur = u[g.index(s - 1, t)];
                u[base + t] += (kbar / hm) * cP.arr * ur;
                u[base + tp] += v * ur;
                u[base + tm] -= v * ur;
            }
            if (out_ok) {
                const double ur = u[g.index(s + 1, t)];
                u[base + t] += (kbar / hp) * cP.arr * ur;
                u[base + tp] -= v * ur;
                u[base + tm] += v * ur;
            }
        }
    }

    // Source rings of the opposite color, two groups four rings apart.
    const int max_source = split_ < N ? split_ : N;
    for (int group = 0; group < 2; ++group) {
        const int first = (parity + 1 + 2 * group) % 4;
        const int count =
            max_source >= first ? (max_source - first) / 4 + 1 : 0;
#pragma omp parallel for schedule(static)
        for (int i = 0; i < count; ++i) {
            const int sq = first + 4 * i;
            if (op_->is_dirichlet_ring(sq)) continue;
            const bool in_t =
                sq > 0 && sq - 1 < split_ && !op_->is_dirichlet_ring(sq - 1);
            const bool out_t =
                sq + 1 < split_ && !op_->is_dirichlet_ring(sq + 1);
            if (!in_t && !out_t) continue;
            const double hm = sq > 0 ? g.radial_spacing(sq - 1) : 0.0;
            const double hp = sq < N ? g.radial_spacing(sq) : 0.0;
            for (int tc = 0; tc < n_theta; ++tc) {
                const int tm = tc == 0 ? n_theta - 1 : tc - 1;
                const int tp = tc + 1 == n_theta ? 0 : tc + 1;
                const double kbar =
                    0.5 * (k_below(g, tc) + g.angular_spacing(tc));
                const NodeCoeffs cS = cache.coeffs(sq, tc);
                const double uc = u[g.index(sq, tc)];
                const double v = 0.25 * cS.art;
                if (in_t) {
                    const int q = g.index(sq - 1, tc);
                    u[q] += (kbar / hm) * cS.arr * uc;
                    u[q] += v * u[g.index(sq, tp)];
                    u[q] -= v * u[g.index(sq, tm)];
                }
                if (out_t) {
                    const int q = g.index(sq + 1, tc);
                    u[q] += (kbar / hp) * cS.arr * uc;
                    u[q] -= v * u[g.index(sq, tp)];
                    u[q] += v * u[g.index(sq, tm)];
                }
            }
        }
    }
}

void Smoother::give_rhs_radial(int parity, double* u, const double* f) const {
    const PolarGrid& g = *grid_;
    const LevelCache& cache = op_->cache();
    const int n_theta = g.n_theta();
    const int N = g.n_r() - 1;
    const int len = g.n_r() - split_;
    const int region = split_ * n_theta;

    const int targets = (n_theta - parity + 1) / 2;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < targets; ++i) {
        const int t = parity + 2 * i;
        const int base = region + t * len;
        const int tm = t == 0 ? n_theta - 1 : t - 1;
        const int tp = t + 1 == n_theta ? 0 : t + 1;
        const double km = k_below(g, t);
        const double kp = g.angular_spacing(t);
        const double kbar = 0.5 * (km + kp);
        for (int j = 0; j < len; ++j) u[base + j] = f[base + j];
        for (int j = 0; j < len; ++j) {
            const int s = split_ + j;
            if (op_->is_dirichlet_ring(s)) continue;
            const double hm = g.radial_spacing(s - 1);
            const double hp = s < N ? g.radial_spacing(s) : 0.0;
            const double hbar = 0.5 * (hm + hp);
            const NodeCoeffs cP = cache.coeffs(s, t);
            const double v = 0.25 * cP.art;
            u[base + j] += (hbar / km) * cP.att * u[g.index(s, tm)];
            u[base + j] += (hbar / kp) * cP.att * u[g.index(s, tp)];
            if (s == split_ && !op_->is_dirichlet_ring(split_ - 1))
                u[base + j] += (kbar / hm) * cP.arr * u[g.index(split_ - 1, t)];
            // In-spoke cross shares into the rows just below/above.
            if (s > split_ && !op_->is_dirichlet_ring(s - 1)) {
                u[base + j - 1] += v * u[g.index(s, tp)];
                u[base + j - 1] -= v * u[g.index(s, tm)];
            }
            if (s < N && !op_->is_dirichlet_ring(s + 1)) {
                u[base + j + 1] -= v * u[g.index(s, tp)];
                u[base + j + 1] += v * u[g.index(s, tm)];
            }
        }
        // Folded contribution of the circle node below the interface row.
        if (!op_->is_dirichlet_ring(split_) &&
            !op_->is_dirichlet_ring(split_ - 1)) {
            const NodeCoeffs c2 = cache.coeffs(split_ - 1, t);
            const double v2 = 0.25 * c2.art;
            u[base] += (kbar / g.radial_spacing(split_ - 1)) * c2.arr *
                       u[g.index(split_ - 1, t)];
            u[base] += v2 * u[g.index(split_ - 1, tm)];
            u[base] -= v2 * u[g.index(split_ - 1, tp)];
        }
    }

    // Source spokes of the opposite color, two groups four spokes apart.
    for (int group = 0; group < 2; ++group) {
        const int first = (parity + 1 + 2 * group) % 4;
        const int count =
            n_theta > first ? (n_theta - 1 - first) / 4 + 1 : 0;
#pragma omp parallel for schedule(static)
        for (int i = 0; i < count; ++i) {
            const int tq = first + 4 * i;
            const int tm = tq == 0 ? n_theta - 1 : tq - 1;
            const int tp = tq + 1 == n_theta ? 0 : tq + 1;
            const double km = k_below(g, tq);
            const double kp = g.angular_spacing(tq);
            const int base_q = region + tq * len;
            const int base_m = region + tm * len;
            const int base_p = region + tp * len;
            for (int j = 0; j < len; ++j) {
                const int s = split_ + j;
                if (op_->is_dirichlet_ring(s)) continue;
                const double hm = g.radial_spacing(s - 1);
                const double hp = s < N ? g.radial_spacing(s) : 0.0;
                const double hbar = 0.5 * (hm + hp);
                const NodeCoeffs cS = cache.coeffs(s, tq);
                const double uc = u[base_q + j];
                const double v = 0.25 * cS.art;
                u[base_p + j] += (hbar / kp) * cS.att * uc;
                u[base_m + j] += (hbar / km) * cS.att * uc;
                if (!op_->is_dirichlet_ring(s - 1)) {
                    const double ub = u[g.index(s - 1, tq)];
                    u[base_p + j] += v * ub;
                    u[base_m + j] -= v * ub;
                }
                if (s < N && !op_->is_dirichlet_ring(s + 1)) {
                    const double ua = u[g.index(s + 1, tq)];
                    u[base_p + j] -= v * ua;
                    u[base_m + j] += v * ua;
                }
            }
        }
    }
}

// --- extrapolated pointwise phases ------------------------------------------

void Smoother::extrapolated_pointwise(double* u, const double* fhat) const {
    const PolarGrid& g = *grid_;
    const int n_theta = g.n_theta();
    const int N = g.n_r() - 1;
    const bool origin_pairs =
        op_->boundary_mode() == BoundaryMode::AcrossOrigin;

    // Fine-only nodes (odd t) of even circle rings.
    const int even_rings = (split_ + 1) / 2;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < even_rings; ++i) {
        const int s = 2 * i;
        if (s == 0 && origin_pairs) continue;  // joint antipodal phase
        const int base = s * n_theta;
        if (op_->is_dirichlet_ring(s)) {
            for (int t = 1; t < n_theta; t += 2) u[base + t] = fhat[base + t];
            continue;
        }
        StencilRow r;
        for (int t = 1; t < n_theta; t += 2) {
            const int p = base + t;
            op_->row(s, t, r);
            double diag = 1.0;
            double acc = 0.75 * fhat[p];
            for (int e = 0; e < r.count; ++e) {
                if (r.cols[e] == p)
                    diag = r.vals[e];
                else
                    acc -= r.vals[e] * u[r.cols[e]];
            }
            u[p] = acc / diag;
        }
    }

    // Fine-only nodes (odd ring) of even spokes.
    if (split_ < g.n_r()) {
        const int len = g.n_r() - split_;
        const int spokes = (n_theta + 1) / 2;
#pragma omp parallel for schedule(static)
        for (int i = 0; i < spokes; ++i) {
            const int t = 2 * i;
            StencilRow r;
            for (int s = split_ % 2 == 0 ? split_ + 1 : split_; s <= N;
                 s += 2) {
                const int p = split_ * n_theta + t * len + (s - split_);
                if (op_->is_dirichlet_ring(s)) {
                    u[p] = fhat[p];
                    continue;
                }
                op_->row(s, t, r);
                double diag = 1.0;
                double acc = 0.75 * fhat[p];
                for (int e = 0; e < r.count; ++e) {
                    if (r.cols[e] == p)
                        diag = r.vals[e];
                    else
                        acc -= r.vals[e] * u[r.cols[e]];
                }
                u[p] = acc / diag;
            }
        }
    }
}

void Smoother::extrapolated_origin_pairs(double* u, const double* fhat) const {
    const PolarGrid& g = *grid_;
    const int n_theta = g.n_theta();
    const int half = n_theta / 2;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < half / 2; ++i) {
        const int t = 2 * i + 1;
        const int t2 = t + half;
        const int p = g.index(0, t);
        const int q = g.index(0, t2);
        StencilRow r;
        double a11 = 1.0, a12 = 0.0, a21 = 0.0, a22 = 1.0;
        double b1 = 0.0, b2 = 0.0;
        op_->row(0, t, r);
        b1 = 0.75 * fhat[p];
        for (int e = 0; e < r.count; ++e) {
            const int c = r.cols[e];
            if (c == p)
                a11 = r.vals[e];
            else if (c == q)
                a12 = r.vals[e];
            else
                b1 -= r.vals[e] * u[c];
        }
        op_->row(0, t2, r);
        b2 = 0.75 * fhat[q];
        for (int e = 0; e < r.count; ++e) {
            const int c = r.cols[e];
            if (c == q)
                a22 = r.vals[e];
            else if (c == p)
                a21 = r.vals[e];
            else
                b2 -= r.vals[e] * u[c];
        }
        const double det = a11 * a22 - a12 * a21;
        u[p] = (b1 * a22 - a12 * b2) / det;
        u[q] = (a11 * b2 - a21 * b1) / det;
    }
}

}  // namespace polarmg
