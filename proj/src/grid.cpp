#include "grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "error.hpp"

namespace fpuwave {

PeriodicGrid PeriodicGrid::make(int half_period, int resolution) {
    if (half_period <= 2) {
        throw InvalidArgument("half period L must satisfy L > 2, got " +
                              std::to_string(half_period));
    }
    if (resolution <= 0) {
        throw InvalidArgument("resolution k must be positive, got " + std::to_string(resolution));
    }
    return PeriodicGrid(half_period, resolution);
}

std::vector<double> PeriodicGrid::nodes() const {
    std::vector<double> x(size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = node(i);
    return x;
}

std::size_t PeriodicGrid::wrap(long long i) const {
    const auto n = static_cast<long long>(size());
    i %= n;
    if (i < 0) i += n;
    return static_cast<std::size_t>(i);
}

Profile::Profile(PeriodicGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw InvalidArgument("profile has " + std::to_string(values_.size()) +
                              " samples, grid expects " + std::to_string(grid_.size()));
    }
}

Profile Profile::constant(const PeriodicGrid& grid, double value) {
    return Profile(grid, std::vector<double>(grid.size(), value));
}

Profile Profile::sample(const PeriodicGrid& grid, const std::function<double(double)>& f) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid.node(i));
    return Profile(grid, std::move(v));
}

Profile& Profile::operator+=(const Profile& other) {
    require_same_grid(*this, other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

Profile& Profile::operator-=(const Profile& other) {
    require_same_grid(*this, other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

Profile& Profile::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

Profile operator+(Profile lhs, const Profile& rhs) { return lhs += rhs; }
Profile operator-(Profile lhs, const Profile& rhs) { return lhs -= rhs; }
Profile operator*(double s, Profile p) { return p *= s; }

void require_same_grid(const Profile& v, const Profile& w) {
    if (!(v.grid() == w.grid())) {
        throw InvalidArgument("profiles live on different grids");
    }
}

Profile indicator_profile(const PeriodicGrid& grid) {
    return Profile::sample(grid, [](double x) { return std::abs(x) < 0.5 ? 1.0 : 0.0; });
}

Profile tent_profile(const PeriodicGrid& grid) {
    return Profile::sample(grid, [](double x) { return std::max(0.0, 1.0 - std::abs(x)); });
}

Profile average(const Profile& v) {
    const auto& grid = v.grid();
    const std::size_t n = grid.size();
    const std::size_t k = grid.half_shift();
    const double h = grid.spacing();

    // ext[j] = v[j - k] cyclically, so window i spans ext[i .. i + 2k].
    std::vector<double> ext(n + 2 * k);
    for (std::size_t j = 0; j < ext.size(); ++j) {
        ext[j] = v[grid.wrap(static_cast<long long>(j) - static_cast<long long>(k))];
    }

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* c = ext.data() + i + k;
        // Summing in mirrored pairs keeps the result of an even input exactly even.
        double s = 0.5 * (c[-static_cast<std::ptrdiff_t>(k)] + c[k]);
        for (std::size_t m = k - 1; m >= 1; --m) {
            s += c[-static_cast<std::ptrdiff_t>(m)] + c[m];
        }
        s += c[0];
        out[i] = h * s;
    }
    return Profile(grid, std::move(out));
}

double lp_norm(const Profile& v, double p) {
    if (!(p >= 1.0)) throw InvalidArgument("lp_norm requires p >= 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (double x : v.values()) m = std::max(m, std::abs(x));
        return m;
    }
    const double h = v.grid().spacing();
    long double s = 0.0L;
    if (p == 1.0) {
        for (double x : v.values()) s += std::abs(x);
        return h * static_cast<double>(s);
    }
    if (p == 2.0) {
        for (double x : v.values()) s += static_cast<long double>(x) * x;
        return std::sqrt(h * static_cast<double>(s));
    }
    for (double x : v.values()) s += std::pow(std::abs(x), p);
    return std::pow(h * static_cast<double>(s), 1.0 / p);
}

double inner_product(const Profile& v, const Profile& w) {
    require_same_grid(v, w);
    long double s = 0.0L;
    for (std::size_t i = 0; i < v.size(); ++i) s += static_cast<long double>(v[i]) * w[i];
    return v.grid().spacing() * static_cast<double>(s);
}

double sup_distance(const Profile& v, const Profile& w) {
    require_same_grid(v, w);
    double m = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) m = std::max(m, std::abs(v[i] - w[i]));
    return m;
}

double interpolate(const Profile& v, double x) {
    const auto& grid = v.grid();
    const double n = static_cast<double>(grid.size());
    double t = (x + grid.half_period()) / grid.spacing() - 0.5;
    t = std::fmod(t, n);
    if (t < 0) t += n;
    const double base = std::floor(t);
    const double s = t - base;
    const auto i = static_cast<long long>(base);

    const double fm = v[grid.wrap(i - 1)];
    const double f0 = v[grid.wrap(i)];
    const double f1 = v[grid.wrap(i + 1)];
    const double f2 = v[grid.wrap(i + 2)];

    const double wm = -s * (s - 1.0) * (s - 2.0) / 6.0;
    const double w0 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
    const double w1 = -(s + 1.0) * s * (s - 2.0) / 2.0;
    const double w2 = (s + 1.0) * s * (s - 1.0) / 6.0;
    return wm * fm + w0 * f0 + w1 * f1 + w2 * f2;
}

namespace {

// Nonincreasing isotonic regression with unit weights.
std::vector<double> pool_adjacent_violators(std::span<const double> u) {
    struct Block {
        double sum;
        std::size_t count;
        double mean() const { return sum / static_cast<double>(count); }
    };
    std::vector<Block> blocks;
    blocks.reserve(u.size());
    for (double x : u) {
        blocks.push_back({x, 1});
        while (blocks.size() > 1 && blocks[blocks.size() - 2].mean() < blocks.back().mean()) {
            const Block top = blocks.back();
            blocks.pop_back();
            blocks.back().sum += top.sum;
            blocks.back().count += top.count;
        }
    }
    std::vector<double> out;
    out.reserve(u.size());
    for (const auto& b : blocks) {
        // Untouched singletons keep their exact value.
        const double m = b.count == 1 ? b.sum : b.mean();
        out.insert(out.end(), b.count, m);
    }
    return out;
}

} // namespace

Profile enforce_cone(const Profile& v) {
    const auto& grid = v.grid();
    const std::size_t n = grid.size();
    const std::size_t half = n / 2;

    std::vector<double> right(half);
    for (std::size_t j = 0; j < half; ++j) {
        const std::size_t i = half + j;
        const double even = 0.5 * (v[i] + v[grid.mirror(i)]);
        right[j] = std::max(even, 0.0);
    }
    const auto mono = pool_adjacent_violators(right);

    std::vector<double> out(n);
    for (std::size_t j = 0; j < half; ++j) {
        out[half + j] = mono[j];
        out[half - 1 - j] = mono[j];
    }
    return Profile(grid, std::move(out));
}

bool in_cone(const Profile& v, double tol) {
    const auto& grid = v.grid();
    const std::size_t n = grid.size();
    const std::size_t half = n / 2;
    for (std::size_t i = 0; i < n; ++i) {
        if (v[i] < -tol) return false;
        if (std::abs(v[i] - v[grid.mirror(i)]) > tol) return false;
    }
    for (std::size_t i = half + 1; i < n; ++i) {
        if (v[i] > v[i - 1] + tol) return false;
    }
    return true;
}

} // namespace fpuwave
