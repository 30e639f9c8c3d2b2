#include "polarmg/interpolation.hpp"

#include <stdexcept>

namespace polarmg {

namespace {

void check_pair(const PolarGrid& fine, const PolarGrid& coarse) {
    if (fine.n_r() != 2 * coarse.n_r() - 1 ||
        fine.n_theta() != 2 * coarse.n_theta())
        throw std::invalid_argument(
            "grid transfer: fine grid is not the refinement of the coarse "
            "grid");
}

// Interpolation weights of the fine node on odd ring sf toward its coarse
// neighbors below (sf-1) and above (sf+1), from the fine radial spacings.
inline double radial_weight_below(const PolarGrid& fine, int sf) {
    return fine.radial_spacing(sf) /
           (fine.radial_spacing(sf - 1) + fine.radial_spacing(sf));
}
inline double radial_weight_above(const PolarGrid& fine, int sf) {
    return fine.radial_spacing(sf - 1) /
           (fine.radial_spacing(sf - 1) + fine.radial_spacing(sf));
}

// Same for the fine node on odd spoke tf, periodic in the angle.
inline double angular_weight_below(const PolarGrid& fine, int tf) {
    return fine.angular_spacing(tf) /
           (fine.angular_spacing(tf - 1) + fine.angular_spacing(tf));
}
inline double angular_weight_above(const PolarGrid& fine, int tf) {
    return fine.angular_spacing(tf - 1) /
           (fine.angular_spacing(tf - 1) + fine.angular_spacing(tf));
}

template <bool Add>
void prolongate_impl(const PolarGrid& fine, const PolarGrid& coarse,
                     const double* cu, double* fu) {
    check_pair(fine, coarse);
    const int n_r = fine.n_r();
    const int n_theta = fine.n_theta();
    const int ntc = coarse.n_theta();
#pragma omp parallel for schedule(static)
    for (int sf = 0; sf < n_r; ++sf) {
        const bool ring_odd = (sf & 1) != 0;
        const int sc = sf / 2;
        for (int tf = 0; tf < n_theta; ++tf) {
            const bool spoke_odd = (tf & 1) != 0;
            const int tc = tf / 2;
            const int tc_up = (tc + 1) % ntc;
            double value;
            if (!ring_odd && !spoke_odd) {
                value = cu[coarse.index(sc, tc)];
            } else if (ring_odd && !spoke_odd) {
                value = radial_weight_below(fine, sf) *
                            cu[coarse.index(sc, tc)] +
                        radial_weight_above(fine, sf) *
                            cu[coarse.index(sc + 1, tc)];
            } else if (!ring_odd && spoke_odd) {
                value = angular_weight_below(fine, tf) *
                            cu[coarse.index(sc, tc)] +
                        angular_weight_above(fine, tf) *
                            cu[coarse.index(sc, tc_up)];
            } else {
                const double wb = radial_weight_below(fine, sf);
                const double wa = radial_weight_above(fine, sf);
                const double vb = angular_weight_below(fine, tf);
                const double va = angular_weight_above(fine, tf);
                value = wb * vb * cu[coarse.index(sc, tc)] +
                        wb * va * cu[coarse.index(sc, tc_up)] +
                        wa * vb * cu[coarse.index(sc + 1, tc)] +
                        wa * va * cu[coarse.index(sc + 1, tc_up)];
            }
            const int p = fine.index(sf, tf);
            if constexpr (Add)
                fu[p] += value;
            else
                fu[p] = value;
        }
    }
}

}  // namespace

void prolongate(const PolarGrid& fine, const PolarGrid& coarse,
                const double* cu, double* fu) {
    prolongate_impl<false>(fine, coarse, cu, fu);
}

void prolongate_add(const PolarGrid& fine, const PolarGrid& coarse,
                    const double* cu, double* fu) {
    prolongate_impl<true>(fine, coarse, cu, fu);
}

void restrict_transpose(const PolarGrid& fine, const PolarGrid& coarse,
                        const double* fr, double* cr) {
    check_pair(fine, coarse);
    const int nrc = coarse.n_r();
    const int ntc = coarse.n_theta();
    const int n_r = fine.n_r();
    const int n_theta = fine.n_theta();
#pragma omp parallel for schedule(static)
    for (int sc = 0; sc < nrc; ++sc) {
        const int sf = 2 * sc;
        for (int tc = 0; tc < ntc; ++tc) {
            const int tf = 2 * tc;
            const int tf_dn = tf == 0 ? n_theta - 1 : tf - 1;
            const int tf_up = tf + 1;  // tf <= n_theta-2, so no wrap
            double acc = fr[fine.index(sf, tf)];
            // Odd-ring neighbors: this coarse node is "above" of sf-1 and
            // "below" of sf+1; the weights mirror prolongate_impl exactly.
            if (sf > 0)
                acc += radial_weight_above(fine, sf - 1) *
                       fr[fine.index(sf - 1, tf)];
            if (sf < n_r - 1)
                acc += radial_weight_below(fine, sf + 1) *
                       fr[fine.index(sf + 1, tf)];
            acc += angular_weight_above(fine, tf_dn) *
                   fr[fine.index(sf, tf_dn)];
            acc += angular_weight_below(fine, tf_up) *
                   fr[fine.index(sf, tf_up)];
            if (sf > 0) {
                acc += radial_weight_above(fine, sf - 1) *
                       angular_weight_above(fine, tf_dn) *
                       fr[fine.index(sf - 1, tf_dn)];
                acc += radial_weight_above(fine, sf - 1) *
                       angular_weight_below(fine, tf_up) *
                       fr[fine.index(sf - 1, tf_up)];
            }
            if (sf < n_r - 1) {
                acc += radial_weight_below(fine, sf + 1) *
                       angular_weight_above(fine, tf_dn) *
                       fr[fine.index(sf + 1, tf_dn)];
                acc += radial_weight_below(fine, sf + 1) *
                       angular_weight_below(fine, tf_up) *
                       fr[fine.index(sf + 1, tf_up)];
            }
            cr[coarse.index(sc, tc)] = acc;
        }
    }
}

void inject(const PolarGrid& fine, const PolarGrid& coarse, const double* fu,
            double* cu) {
    check_pair(fine, coarse);
    const int nrc = coarse.n_r();
    const int ntc = coarse.n_theta();
#pragma omp parallel for schedule(static)
    for (int sc = 0; sc < nrc; ++sc)
        for (int tc = 0; tc < ntc; ++tc)
            cu[coarse.index(sc, tc)] = fu[fine.index(2 * sc, 2 * tc)];
}

void inject_transpose_add(const PolarGrid& fine, const PolarGrid& coarse,
                          const double* cu, double* fu) {
    check_pair(fine, coarse);
    const int nrc = coarse.n_r();
    const int ntc = coarse.n_theta();
#pragma omp parallel for schedule(static)
    for (int sc = 0; sc < nrc; ++sc)
        for (int tc = 0; tc < ntc; ++tc)
            fu[fine.index(2 * sc, 2 * tc)] += cu[coarse.index(sc, tc)];
}

}  // namespace polarmg
