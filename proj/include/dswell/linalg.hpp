#pragma once

// Small fixed-size vector and matrix types used throughout the library.

#include <array>
#include <cmath>
#include <cstddef>
#include <ostream>

namespace dswell {

struct Vec3 {
    std::array<double, 3> v{0.0, 0.0, 0.0};

    constexpr Vec3() = default;
    constexpr Vec3(double x, double y, double z) : v{x, y, z} {}

    constexpr double& operator[](std::size_t i) { return v[i]; }
    constexpr double operator[](std::size_t i) const { return v[i]; }

    constexpr Vec3& operator+=(const Vec3& o)
    {
        for (std::size_t i = 0; i < 3; ++i) v[i] += o.v[i];
        return *this;
    }
    constexpr Vec3& operator-=(const Vec3& o)
    {
        for (std::size_t i = 0; i < 3; ++i) v[i] -= o.v[i];
        return *this;
    }
    constexpr Vec3& operator*=(double s)
    {
        for (auto& c : v) c *= s;
        return *this;
    }

    friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
    friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
    friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
    friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
    friend constexpr Vec3 operator/(Vec3 a, double s) { return a *= (1.0 / s); }
    friend constexpr Vec3 operator-(Vec3 a) { return a *= -1.0; }
    friend constexpr bool operator==(const Vec3&, const Vec3&) = default;

    friend std::ostream& operator<<(std::ostream& os, const Vec3& a)
    {
        return os << '(' << a[0] << ", " << a[1] << ", " << a[2] << ')';
    }
};

constexpr double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b)
{
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline Vec3 normalized(const Vec3& a) { return a / norm(a); }

inline constexpr Vec3 unit(std::size_t axis)
{
    Vec3 e;
    e[axis] = 1.0;
    return e;
}

/// Row-major 3x3 matrix.
struct Mat3 {
    std::array<double, 9> m{};

    constexpr double& operator()(std::size_t r, std::size_t c) { return m[3 * r + c]; }
    constexpr double operator()(std::size_t r, std::size_t c) const { return m[3 * r + c]; }

    static constexpr Mat3 identity()
    {
        Mat3 a;
        a(0, 0) = a(1, 1) = a(2, 2) = 1.0;
        return a;
    }
    static constexpr Mat3 diag(double a, double b, double c)
    {
        Mat3 d;
        d(0, 0) = a;
        d(1, 1) = b;
        d(2, 2) = c;
        return d;
    }
    static constexpr Mat3 from_rows(const std::array<std::array<double, 3>, 3>& rows)
    {
        Mat3 a;
        for (std::size_t r = 0; r < 3; ++r)
            for (std::size_t c = 0; c < 3; ++c) a(r, c) = rows[r][c];
        return a;
    }
    static constexpr Mat3 from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2)
    {
        Mat3 a;
        for (std::size_t r = 0; r < 3; ++r) {
            a(r, 0) = c0[r];
            a(r, 1) = c1[r];
            a(r, 2) = c2[r];
        }
        return a;
    }
    /// a * b^T
    static constexpr Mat3 outer(const Vec3& a, const Vec3& b)
    {
        Mat3 o;
        for (std::size_t r = 0; r < 3; ++r)
            for (std::size_t c = 0; c < 3; ++c) o(r, c) = a[r] * b[c];
        return o;
    }

    constexpr Vec3 column(std::size_t c) const { return {m[c], m[3 + c], m[6 + c]}; }
    constexpr Vec3 row(std::size_t r) const { return {m[3 * r], m[3 * r + 1], m[3 * r + 2]}; }

    constexpr Mat3 transposed() const
    {
        Mat3 t;
        for (std::size_t r = 0; r < 3; ++r)
            for (std::size_t c = 0; c < 3; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    constexpr double determinant() const
    {
        const auto& a = *this;
        return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
               + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    }

    constexpr double trace() const { return m[0] + m[4] + m[8]; }

    double max_abs() const
    {
        double s = 0.0;
        for (double x : m) s = std::max(s, std::abs(x));
        return s;
    }

    constexpr Mat3& operator+=(const Mat3& o)
    {
        for (std::size_t i = 0; i < 9; ++i) m[i] += o.m[i];
        return *this;
    }
    constexpr Mat3& operator-=(const Mat3& o)
    {
        for (std::size_t i = 0; i < 9; ++i) m[i] -= o.m[i];
        return *this;
    }
    constexpr Mat3& operator*=(double s)
    {
        for (auto& x : m) x *= s;
        return *this;
    }
    friend constexpr Mat3 operator+(Mat3 a, const Mat3& b) { return a += b; }
    friend constexpr Mat3 operator-(Mat3 a, const Mat3& b) { return a -= b; }
    friend constexpr Mat3 operator*(Mat3 a, double s) { return a *= s; }
    friend constexpr Mat3 operator*(double s, Mat3 a) { return a *= s; }

    friend constexpr Mat3 operator*(const Mat3& a, const Mat3& b)
    {
        Mat3 p;
        for (std::size_t r = 0; r < 3; ++r)
            for (std::size_t c = 0; c < 3; ++c) {
                double s = 0.0;
                for (std::size_t k = 0; k < 3; ++k) s += a(r, k) * b(k, c);
                p(r, c) = s;
            }
        return p;
    }
    friend constexpr Vec3 operator*(const Mat3& a, const Vec3& x)
    {
        return {a(0, 0) * x[0] + a(0, 1) * x[1] + a(0, 2) * x[2], a(1, 0) * x[0] + a(1, 1) * x[1] + a(1, 2) * x[2],
                a(2, 0) * x[0] + a(2, 1) * x[1] + a(2, 2) * x[2]};
    }
};

/// Rotation about e1 by angle (radians).
inline Mat3 rotation_e1(double angle)
{
    const double c = std::cos(angle), s = std::sin(angle);
    return Mat3::from_rows({{{1, 0, 0}, {0, c, -s}, {0, s, c}}});
}

/// Rotation about e2 by angle (radians).
inline Mat3 rotation_e2(double angle)
{
    const double c = std::cos(angle), s = std::sin(angle);
    return Mat3::from_rows({{{c, 0, s}, {0, 1, 0}, {-s, 0, c}}});
}

inline double deg_to_rad(double deg) { return deg * M_PI / 180.0; }

}  // namespace dswell
