#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace chisio {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend Point operator-(Point a) { return {-a.x, -a.y}; }
    friend Point operator*(Point a, double s) { return {a.x * s, a.y * s}; }
    friend Point operator*(double s, Point a) { return {a.x * s, a.y * s}; }
    friend Point operator/(Point a, double s) { return {a.x / s, a.y / s}; }
    Point& operator+=(Point o) { x += o.x; y += o.y; return *this; }
    Point& operator-=(Point o) { x -= o.x; y -= o.y; return *this; }
    friend bool operator==(Point, Point) = default;

    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double distance(Point a, Point b) { return (a - b).norm(); }

/// Axis-aligned rectangle, top-left anchored, y grows downwards.
struct Rect {
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;

    friend bool operator==(const Rect&, const Rect&) = default;

    double right() const { return x + w; }
    double bottom() const { return y + h; }
    Point center() const { return {x + w / 2.0, y + h / 2.0}; }
    double min_side() const { return std::min(w, h); }

    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(w) && std::isfinite(h);
    }

    Rect translated(double dx, double dy) const { return {x + dx, y + dy, w, h}; }

    static Rect centered_at(Point c, double w, double h) {
        return {c.x - w / 2.0, c.y - h / 2.0, w, h};
    }
};

inline Rect unite(const Rect& a, const Rect& b) {
    const double l = std::min(a.x, b.x);
    const double t = std::min(a.y, b.y);
    const double r = std::max(a.right(), b.right());
    const double btm = std::max(a.bottom(), b.bottom());
    return {l, t, r - l, btm - t};
}

/// True when the two rectangles share interior area.
inline bool overlaps(const Rect& a, const Rect& b) {
    return a.x < b.right() && b.x < a.right() && a.y < b.bottom() && b.y < a.bottom();
}

/// Distance from the rectangle's center to its boundary along unit direction `dir`.
inline double clip_extent(const Rect& r, Point dir) {
    const double hw = r.w / 2.0;
    const double hh = r.h / 2.0;
    const double ax = std::abs(dir.x);
    const double ay = std::abs(dir.y);
    double t = std::numeric_limits<double>::infinity();
    if (ax > 0.0) t = std::min(t, hw / ax);
    if (ay > 0.0) t = std::min(t, hh / ay);
    return std::isfinite(t) ? t : 0.0;
}

/// Point where the ray from the rectangle's center towards `toward` leaves the rectangle.
inline Point clip_point(const Rect& r, Point toward) {
    const Point c = r.center();
    const Point d = toward - c;
    const double len = d.norm();
    if (len == 0.0) return c;
    const Point u = d / len;
    return c + u * std::min(clip_extent(r, u), len);
}

/// Shortest distance from point `p` to the (filled) rectangle; 0 when inside.
inline double distance_to_rect(Point p, const Rect& r) {
    const double dx = std::max({r.x - p.x, 0.0, p.x - r.right()});
    const double dy = std::max({r.y - p.y, 0.0, p.y - r.bottom()});
    return std::hypot(dx, dy);
}

struct Segment {
    Point a;
    Point b;
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Wraps an angle into [0, 2pi).
inline double normalize_angle(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    if (a >= kTwoPi) a = 0.0;
    return a;
}

}  // namespace chisio
