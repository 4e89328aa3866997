#pragma once

#include <array>
#include <cmath>

namespace fsim {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
    Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
};

inline Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
inline Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
inline Vec2 operator*(double s, Vec2 a) { return a *= s; }
inline Vec2 operator*(Vec2 a, double s) { return a *= s; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double norm(const Vec2& a) { return std::sqrt(dot(a, a)); }

/// Row-major 2x2 tensor. m[r][c] indexes row r, column c.
struct Mat2 {
    std::array<std::array<double, 2>, 2> m{{{0.0, 0.0}, {0.0, 0.0}}};

    static Mat2 zero() { return {}; }
    static Mat2 identity() { return {{{{1.0, 0.0}, {0.0, 1.0}}}}; }

    double& operator()(int r, int c) { return m[r][c]; }
    double operator()(int r, int c) const { return m[r][c]; }

    Mat2& operator+=(const Mat2& o) {
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) m[r][c] += o.m[r][c];
        return *this;
    }
    Mat2& operator-=(const Mat2& o) {
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) m[r][c] -= o.m[r][c];
        return *this;
    }
    Mat2& operator*=(double s) {
        for (auto& row : m)
            for (auto& v : row) v *= s;
        return *this;
    }
};

inline Mat2 operator+(Mat2 a, const Mat2& b) { return a += b; }
inline Mat2 operator-(Mat2 a, const Mat2& b) { return a -= b; }
inline Mat2 operator*(double s, Mat2 a) { return a *= s; }
inline Mat2 operator*(Mat2 a, double s) { return a *= s; }

inline Mat2 operator*(const Mat2& a, const Mat2& b) {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
    return r;
}

inline Vec2 operator*(const Mat2& a, const Vec2& v) {
    return {a(0, 0) * v.x + a(0, 1) * v.y, a(1, 0) * v.x + a(1, 1) * v.y};
}

inline Mat2 transpose(const Mat2& a) {
    Mat2 r = a;
    std::swap(r(0, 1), r(1, 0));
    return r;
}

inline double det(const Mat2& a) { return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0); }
inline double trace(const Mat2& a) { return a(0, 0) + a(1, 1); }

inline double ddot(const Mat2& a, const Mat2& b) {
    double s = 0.0;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) s += a(r, c) * b(r, c);
    return s;
}

inline double max_abs(const Mat2& a) {
    double s = 0.0;
    for (const auto& row : a.m)
        for (double v : row) s = std::max(s, std::abs(v));
    return s;
}

inline Mat2 outer(const Vec2& a, const Vec2& b) {
    return {{{{a.x * b.x, a.x * b.y}, {a.y * b.x, a.y * b.y}}}};
}

inline Mat2 sym(const Mat2& a) { return 0.5 * (a + transpose(a)); }

/// Axis-aligned rectangle [x0,x1] x [y0,y1].
struct Rect {
    double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    bool contains(const Vec2& p) const {
        return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
    }
    static Rect unit() { return {0.0, 0.0, 1.0, 1.0}; }
};

} // namespace fsim
