#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "wwt/errors.hpp"
#include "wwt/profile.hpp"

namespace wwt {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct Band {
    double lo = 0.0;
    double hi = 0.0;
    double width() const noexcept { return hi - lo; }
    bool contains(double w) const noexcept { return w >= lo && w <= hi; }
    bool interior(double w) const noexcept { return w > lo && w < hi; }
};

/// Parameter record for a continuum model. Densities are |g_j(w)|^2; the acceptor
/// formfactor is g2 = exp(-i L(w)) |g2(w)| and the donor one is real and non-negative.
struct ContinuumSpec {
    double omega1 = 1.0;
    double omega2 = 1.0;
    Band band{0.0, 1.0};
    Profile density{Constant{0.0}};
    std::optional<Profile> density2;  ///< defaults to `density`
    Profile phase{Constant{0.0}};
    Profile sink_continuum{Constant{0.0}};
    double sink2 = 0.0;
    double tol_orth = 0.02;
};

class ContinuumModel {
public:
    double omega(int j) const { return j == 1 ? spec_.omega1 : spec_.omega2; }
    double omega1() const noexcept { return spec_.omega1; }
    double omega2() const noexcept { return spec_.omega2; }
    const Band& band() const noexcept { return spec_.band; }

    /// |g_j(w)|^2
    double density(int j, double w) const { return j == 1 ? density1_(w) : density2_(w); }
    double magnitude(int j, double w) const { return std::sqrt(std::max(density(j, w), 0.0)); }
    /// g_j(w) including the relative phase on the acceptor side.
    cplx formfactor(int j, double w) const;
    double phase(double w) const { return spec_.phase(w); }
    double sink_continuum(double w) const { return spec_.sink_continuum(w); }
    double sink2() const noexcept { return spec_.sink2; }
    bool has_sink() const;

    const Profile& density_profile(int j) const { return j == 1 ? density1_ : density2_; }
    const Profile& phase_profile() const noexcept { return spec_.phase; }
    const Profile& sink_profile() const noexcept { return spec_.sink_continuum; }
    double tol_orth() const noexcept { return spec_.tol_orth; }
    const ContinuumSpec& spec() const noexcept { return spec_; }

    /// ||g_j||^2 over the band.
    double norm2(int j) const { return j == 1 ? norm2_1_ : norm2_2_; }
    /// Total variation of L over the band.
    double phase_variation() const noexcept { return phase_variation_; }
    /// Largest |L'| and |L''| seen on a uniform sampling of the band.
    double max_phase_slope() const noexcept { return max_slope_; }
    double max_phase_curvature() const noexcept { return max_curvature_; }
    /// Points where the formfactors or phase have structure (Lorentzian centres, knots).
    const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
    /// Narrowest width scale attached to `breakpoints()`, or the band width.
    double structure_width() const noexcept { return structure_width_; }

private:
    friend ContinuumModel build_continuum(const ContinuumSpec&);
    ContinuumModel() = default;

    ContinuumSpec spec_;
    Profile density1_, density2_;
    double norm2_1_ = 0.0, norm2_2_ = 0.0;
    double phase_variation_ = 0.0, max_slope_ = 0.0, max_curvature_ = 0.0;
    std::vector<double> breakpoints_;
    double structure_width_ = 0.0;
};

/// Validates and freezes a continuum spec. Throws ModelError on an empty band,
/// non-positive levels, negative densities or sinks, non-finite norms, or an
/// orthogonality overlap above tol_orth (measured() holds the overlap).
ContinuumModel build_continuum(const ContinuumSpec& spec);

struct Hopping {
    int k;  ///< 1-based site index
    int l;  ///< 1-based site index
    cplx amplitude;
};

inline constexpr int max_network_sites = 2000;

/// Single-exciton tight-binding Hamiltonian. Site 1 is the donor, site 2 the acceptor.
class DiscreteNetwork {
public:
    const CMatrix& h() const noexcept { return h_; }
    int sites() const noexcept { return static_cast<int>(h_.rows()); }
    int donor() const noexcept { return 1; }
    int acceptor() const noexcept { return 2; }

private:
    friend DiscreteNetwork build_network(const std::vector<double>&, const std::vector<Hopping>&);
    CMatrix h_;
};

/// h_kk = site energies, h_kl = amplitude and h_lk = conj(amplitude) for each hopping.
DiscreteNetwork build_network(const std::vector<double>& site_energies,
                              const std::vector<Hopping>& hoppings);

/// A network rewritten in the eigenbasis of its intermediate block.
struct DiscreteWW {
    double omega1 = 0.0;
    double omega2 = 0.0;
    std::vector<double> levels;
    std::vector<cplx> couplings1;  ///< <alpha|g_1>
    std::vector<cplx> couplings2;  ///< <alpha|g_2>
    double tol_orth = 0.02;

    /// The (N x N) matrix in the basis (donor, acceptor, levels...).
    CMatrix assemble() const;
};

/// |<g1|g2>| / (||g1|| ||g2||). Throws ZeroNormError if either formfactor vanishes.
double orthogonality_overlap(const ContinuumModel& model);
double orthogonality_overlap(const DiscreteWW& dww);

}  // namespace wwt
