#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fpuwave {

/// Uniform sampling of the periodicity cell [-L, L].
///
/// Samples sit at cell centres x_i = -L + (i + 1/2) h with h = 1/(2k), so a
/// shift by 1/2 is exactly k indices and the window [x - 1/2, x + 1/2] of the
/// averaging operator always ends on samples. The point x = 0 lies between
/// the two central samples.
class PeriodicGrid {
public:
    /// Throws InvalidArgument unless half_period >= 3 and resolution >= 1.
    static PeriodicGrid make(int half_period, int resolution);

    int half_period() const { return half_period_; }
    /// Samples per half-unit interval (k).
    int resolution() const { return resolution_; }
    double spacing() const { return 1.0 / (2.0 * resolution_); }
    std::size_t size() const { return 4 * static_cast<std::size_t>(half_period_) * resolution_; }

    double node(std::size_t i) const {
        return -half_period_ + (static_cast<double>(i) + 0.5) * spacing();
    }
    std::vector<double> nodes() const;

    /// Index shift equivalent to a spatial shift by 1/2.
    std::size_t half_shift() const { return static_cast<std::size_t>(resolution_); }
    /// Index of the sample at -x_i.
    std::size_t mirror(std::size_t i) const { return size() - 1 - i; }
    /// Cyclic index arithmetic.
    std::size_t wrap(long long i) const;

    friend bool operator==(const PeriodicGrid&, const PeriodicGrid&) = default;

private:
    PeriodicGrid(int half_period, int resolution)
        : half_period_(half_period), resolution_(resolution) {}

    int half_period_;
    int resolution_;
};

/// Samples of a 2L-periodic function on a PeriodicGrid.
class Profile {
public:
    Profile(PeriodicGrid grid, std::vector<double> values);

    static Profile constant(const PeriodicGrid& grid, double value);
    static Profile sample(const PeriodicGrid& grid, const std::function<double(double)>& f);

    const PeriodicGrid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

    Profile& operator+=(const Profile& other);
    Profile& operator-=(const Profile& other);
    Profile& operator*=(double s);

private:
    PeriodicGrid grid_;
    std::vector<double> values_;
};

Profile operator+(Profile lhs, const Profile& rhs);
Profile operator-(Profile lhs, const Profile& rhs);
Profile operator*(double s, Profile p);

/// Indicator function of [-1/2, 1/2] (the delta -> 0 velocity profile).
Profile indicator_profile(const PeriodicGrid& grid);
/// Tent map max(0, 1 - |x|) (the delta -> 0 distance profile).
Profile tent_profile(const PeriodicGrid& grid);

/// Unit-window average (A V)(x) = integral of V over [x - 1/2, x + 1/2],
/// trapezoidal rule on the grid-aligned window.
Profile average(const Profile& v);

/// Trapezoidal L^p norm over the cell; p = infinity gives the max norm.
/// Throws InvalidArgument for p < 1.
double lp_norm(const Profile& v, double p);
double inner_product(const Profile& v, const Profile& w);
/// max_i |v_i - w_i|
double sup_distance(const Profile& v, const Profile& w);

/// Periodic 4-point Lagrange interpolation; exact at samples and for cubics.
double interpolate(const Profile& v, double x);

/// Projection onto even, nonnegative, unimodal profiles: symmetrise, clip at
/// zero, then pool adjacent violators on the half cell [0, L].
Profile enforce_cone(const Profile& v);

/// Evenness to `tol`, nonnegativity, and monotone decay in |x| up to `tol`.
bool in_cone(const Profile& v, double tol);

/// Verifies grids agree; throws InvalidArgument otherwise.
void require_same_grid(const Profile& v, const Profile& w);

} // namespace fpuwave
