#pragma once

#include "wwt/model.hpp"
#include "wwt/quadrature.hpp"

namespace wwt {

/// Fermi Golden Rule rate pi |g_j(w)|^2; zero outside the band.
double decay_rate(const ContinuumModel& model, int j, double omega);

/// PV int |g_j(w')|^2 / (omega - w') dw' over the band. DomainError unless omega is
/// strictly inside the band.
double radiative_shift(const ContinuumModel& model, int j, double omega,
                       const quad::Options& opt = {});

/// All four Laplace transforms G~_jj'(z) = int conj(g_j) g_j' / (z + Gamma(w) + i w) dw
/// at one point.
struct LaplaceMatrix {
    cplx z;
    cplx g11, g12, g21, g22;
    double error = 0.0;  ///< quadrature estimate (max over the four entries)

    cplx operator()(int j, int jp) const {
        if (j == 1) return jp == 1 ? g11 : g12;
        return jp == 1 ? g21 : g22;
    }
};

struct LaplaceG {
    cplx value;
    cplx z;
    int j;
    int jp;
};

/// Re z > 0, or Re z == 0 meaning the retarded limit Re z -> 0+ (taken exactly by
/// subtracting the singular part). DomainError for Re z < 0, or for Re z == 0 with
/// -Im z on a band edge.
LaplaceMatrix laplace_matrix(const ContinuumModel& model, cplx z, const quad::Options& opt = {});
LaplaceG laplace_G(const ContinuumModel& model, int j, int jp, cplx z, const quad::Options& opt = {});

/// Boundary value G~(eps - i omega) with a finite regulator. A negative regulator
/// selects the default 1e-6 * omega1; zero gives the exact limit.
LaplaceMatrix boundary_G(const ContinuumModel& model, double omega, double regulator = -1.0,
                         const quad::Options& opt = {});

/// Retarded boundary values G~(0+ - i w) of a sink-free model at many in-band
/// frequencies. The smooth remainder after subtracting h(w)/(i (w' - w)) is summed on
/// one composite Kronrod rule shared by every w; points whose embedded Gauss estimate
/// misses the tolerance fall back to laplace_matrix.
class BoundaryTable {
public:
    explicit BoundaryTable(const ContinuumModel& model, const quad::Options& opt = {});
    LaplaceMatrix operator()(double omega) const;
    std::size_t nodes() const noexcept { return x_.size(); }

private:
    const ContinuumModel* model_;
    quad::Options opt_;
    std::vector<double> x_, wk_, wg_;
    std::vector<double> h11_, h22_;
    std::vector<cplx> h12_;
    std::vector<std::size_t> panel_start_;
};

/// Time-domain correlation G_jj'(t) = int conj(g_j) g_j' exp(-i w t) dw.
cplx correlation(const ContinuumModel& model, int j, int jp, double t, const quad::Options& opt = {});

}  // namespace wwt
