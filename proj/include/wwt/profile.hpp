#pragma once

#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace wwt {

struct Constant {
    double value = 0.0;
};

struct Linear {
    double slope = 0.0;
    double offset = 0.0;
};

/// (area/pi) * width / ((x - center)^2 + width^2); integrates to `area` on the real line.
struct Lorentzian {
    double area = 1.0;
    double center = 0.0;
    double width = 1.0;
};

/// scale * sum_a weights[a] * Lorentzian(centers[a], width).
struct LorentzianSum {
    std::vector<double> centers;
    std::vector<double> weights;
    double width = 1.0;
    double scale = 1.0;
};

enum class Interpolation { monotone_cubic, linear };
enum class Extrapolation { error, constant };

/// Sampled function. Monotone cubic is the Fritsch-Carlson (PCHIP) interpolant,
/// which never overshoots the sample range between knots.
class Tabulated {
public:
    Tabulated(std::vector<double> x, std::vector<double> y,
              Interpolation interp = Interpolation::monotone_cubic,
              Extrapolation extrap = Extrapolation::error);

    double operator()(double x) const;

    const std::vector<double>& x() const noexcept { return x_; }
    const std::vector<double>& y() const noexcept { return y_; }
    Interpolation interpolation() const noexcept { return interp_; }
    Extrapolation extrapolation() const noexcept { return extrap_; }
    double lo() const noexcept { return x_.front(); }
    double hi() const noexcept { return x_.back(); }

private:
    std::vector<double> x_, y_, slope_;
    Interpolation interp_;
    Extrapolation extrap_;
};

using ProfileKind = std::variant<Constant, Linear, Lorentzian, LorentzianSum, Tabulated>;

/// A real function of frequency used for formfactor densities |g(w)|^2, phases L(w)
/// and sink rates Gamma(w).
class Profile {
public:
    Profile() : kind_(Constant{}) {}
    Profile(ProfileKind kind) : kind_(std::move(kind)) {}  // NOLINT: implicit by intent
    template <class P>
        requires std::is_constructible_v<ProfileKind, P> && (!std::is_same_v<std::decay_t<P>, Profile>)
    Profile(P&& p) : kind_(std::forward<P>(p)) {}  // NOLINT

    double operator()(double x) const;

    const ProfileKind& kind() const noexcept { return kind_; }
    std::string family() const;

    bool is_constant() const noexcept { return std::holds_alternative<Constant>(kind_); }
    /// True when the profile is identically zero.
    bool is_zero() const;

    /// Smallest value over the profile's defining parameters or samples. Used to reject
    /// negative densities and rates without sampling.
    double parameter_minimum() const;

private:
    ProfileKind kind_;
};

}  // namespace wwt
