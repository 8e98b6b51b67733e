/// Discretized periodic box [-L, L)^d: grid geometry, scalar/vector fields,
/// weighted L^p norms and inner products.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace opcalc {

using cplx = std::complex<double>;

struct Grid {
    int dim = 3;               // d
    int n = 64;                // points per axis (power of two, >= 8)
    double L = 8.0;            // box half-width; domain [-L, L)^d
    bool origin_offset = true; // half-cell shift so no node hits the origin

    Grid() = default;
    Grid(int dim_, int n_, double L_, bool offset = true)
        : dim(dim_), n(n_), L(L_), origin_offset(offset) {
        if (dim < 1 || dim > 4) throw std::invalid_argument("grid: dim must be 1..4");
        if (n < 8) throw std::invalid_argument("grid: points_per_axis must be >= 8");
        if ((n & (n - 1)) != 0) throw std::invalid_argument("grid: points_per_axis must be a power of two");
        if (L <= 0) throw std::invalid_argument("grid: box_half_width must be > 0");
    }

    double h() const { return 2.0 * L / n; }
    std::size_t size() const {
        std::size_t s = 1;
        for (int i = 0; i < dim; ++i) s *= static_cast<std::size_t>(n);
        return s;
    }
    double cell_volume() const { return std::pow(h(), dim); }

    // node coordinate along one axis
    double coord(int i) const { return -L + (i + (origin_offset ? 0.5 : 0.0)) * h(); }

    // FFT frequency along one axis for index i (k = pi*m/L with m folded to [-n/2, n/2))
    double freq(int i) const {
        int m = (i <= n / 2 - 1) ? i : i - n;
        return M_PI * m / L;
    }

    // Dirichlet (sine-basis) frequency for DST index i: k = pi*(i+1)/(2L)
    double dirichlet_freq(int i) const { return M_PI * (i + 1) / (2.0 * L); }

    std::size_t encode(const std::array<int, 4>& idx) const {
        std::size_t flat = 0;
        for (int ax = 0; ax < dim; ++ax) flat = flat * n + static_cast<std::size_t>(idx[ax]);
        return flat;
    }

    void decode(std::size_t flat, std::array<int, 4>& idx) const {
        for (int ax = dim - 1; ax >= 0; --ax) {
            idx[ax] = static_cast<int>(flat % n);
            flat /= n;
        }
    }
    void node(std::size_t flat, std::array<double, 4>& x) const {
        std::array<int, 4> idx{};
        decode(flat, idx);
        for (int ax = 0; ax < dim; ++ax) x[ax] = coord(idx[ax]);
    }
    double radius(std::size_t flat) const {
        std::array<double, 4> x{};
        node(flat, x);
        double r2 = 0;
        for (int ax = 0; ax < dim; ++ax) r2 += x[ax] * x[ax];
        return std::sqrt(r2);
    }

    bool operator==(const Grid& o) const {
        return dim == o.dim && n == o.n && L == o.L && origin_offset == o.origin_offset;
    }
};

struct Field {
    Grid grid;
    std::vector<cplx> v;

    Field() = default;
    explicit Field(const Grid& g, cplx fill = 0.0) : grid(g), v(g.size(), fill) {}

    std::size_t size() const { return v.size(); }
    cplx& operator[](std::size_t i) { return v[i]; }
    const cplx& operator[](std::size_t i) const { return v[i]; }

    Field& operator+=(const Field& o) {
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += o.v[i];
        return *this;
    }
    Field& operator-=(const Field& o) {
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= o.v[i];
        return *this;
    }
    Field& operator*=(cplx s) {
        for (auto& x : v) x *= s;
        return *this;
    }
};

inline Field operator+(Field a, const Field& b) { a += b; return a; }
inline Field operator-(Field a, const Field& b) { a -= b; return a; }
inline Field operator*(cplx s, Field a) { a *= s; return a; }

struct VectorField {
    Grid grid;
    std::vector<Field> comp; // dim components

    VectorField() = default;
    explicit VectorField(const Grid& g) : grid(g), comp(g.dim, Field(g)) {}
    Field& operator[](int j) { return comp[j]; }
    const Field& operator[](int j) const { return comp[j]; }

    Field magnitude() const {
        Field out(grid);
        for (std::size_t i = 0; i < out.size(); ++i) {
            double s = 0;
            for (int j = 0; j < grid.dim; ++j) s += std::norm(comp[j][i]);
            out[i] = std::sqrt(s);
        }
        return out;
    }
};

// discrete inner product <f, g> = sum conj(f) g * h^d
inline cplx inner(const Field& f, const Field& g) {
    cplx s = 0;
    for (std::size_t i = 0; i < f.size(); ++i) s += std::conj(f[i]) * g[i];
    return s * f.grid.cell_volume();
}

inline double norm2(const Field& f) { return std::sqrt(std::abs(inner(f, f))); }

constexpr double LP_INF = -1.0; // sentinel for p = infinity

inline double lp_norm(const Field& f, double p) {
    if (p == LP_INF || std::isinf(p)) {
        double m = 0;
        for (const auto& x : f.v) m = std::max(m, std::abs(x));
        return m;
    }
    if (p < 1) throw std::domain_error("lp_norm: p must be >= 1");
    double s = 0;
    for (const auto& x : f.v) s += std::pow(std::abs(x), p);
    return std::pow(s * f.grid.cell_volume(), 1.0 / p);
}

inline cplx mean(const Field& f) {
    cplx s = std::accumulate(f.v.begin(), f.v.end(), cplx(0));
    return s / static_cast<double>(f.size());
}

inline Field real_part(const Field& f) {
    Field out(f.grid);
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i].real();
    return out;
}

// pointwise multiply
inline Field hadamard(const Field& a, const Field& b) {
    Field out(a.grid);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

} // namespace opcalc
