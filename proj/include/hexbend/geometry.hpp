#pragma once

#include <array>
#include <cmath>

namespace hexbend {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
    constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
};

constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
constexpr Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
constexpr bool operator==(const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double norm(const Vec2& a) { return std::sqrt(dot(a, a)); }

/// Counter-clockwise rotation by pi/2 (e3 ^ a).
constexpr Vec2 perp(const Vec2& a) { return {-a.y, a.x}; }

/// Symmetric 2x2 tensor, e.g. a Hessian.
struct Sym2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;

    constexpr Vec2 apply(const Vec2& v) const { return {xx * v.x + xy * v.y, xy * v.x + yy * v.y}; }
    /// a . H b
    constexpr double contract(const Vec2& a, const Vec2& b) const { return dot(a, apply(b)); }
    constexpr double trace() const { return xx + yy; }
    constexpr double det() const { return xx * yy - xy * xy; }

    constexpr Sym2& operator+=(const Sym2& o) { xx += o.xx; xy += o.xy; yy += o.yy; return *this; }
    constexpr Sym2& operator*=(double s) { xx *= s; xy *= s; yy *= s; return *this; }
};

constexpr Sym2 operator+(Sym2 a, const Sym2& b) { return a += b; }
constexpr Sym2 operator*(double s, Sym2 a) { return a *= s; }

/// Fully symmetric 3-tensor in two dimensions (third derivatives).
struct Sym3 {
    double xxx = 0.0;
    double xxy = 0.0;
    double xyy = 0.0;
    double yyy = 0.0;

    constexpr double contract(const Vec2& a, const Vec2& b, const Vec2& c) const {
        return xxx * a.x * b.x * c.x
             + xxy * (a.x * b.x * c.y + a.x * b.y * c.x + a.y * b.x * c.x)
             + xyy * (a.x * b.y * c.y + a.y * b.x * c.y + a.y * b.y * c.x)
             + yyy * a.y * b.y * c.y;
    }

    constexpr Sym3& operator+=(const Sym3& o) {
        xxx += o.xxx; xxy += o.xxy; xyy += o.xyy; yyy += o.yyy;
        return *this;
    }
    constexpr Sym3& operator*=(double s) { xxx *= s; xxy *= s; xyy *= s; yyy *= s; return *this; }
};

constexpr Sym3 operator+(Sym3 a, const Sym3& b) { return a += b; }
constexpr Sym3 operator*(double s, Sym3 a) { return a *= s; }

/// Axis-aligned box.
struct Box {
    Vec2 lo;
    Vec2 hi;

    constexpr bool empty() const { return !(lo.x < hi.x && lo.y < hi.y); }
    constexpr Box padded(double d) const { return {{lo.x - d, lo.y - d}, {hi.x + d, hi.y + d}}; }
    constexpr bool contains(const Vec2& p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
    }
};

Box bounding_union(const Box& a, const Box& b);
Box intersect(const Box& a, const Box& b);

}  // namespace hexbend
