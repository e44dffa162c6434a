#pragma once
#include <array>
#include <cstddef>
#include <optional>
#include <vector>

namespace tabweave {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
inline bool operator==(Point a, Point b) { return a.x == b.x && a.y == b.y; }

double norm(Point p);

/// Control points of a cubic Bézier curve, in curve order.
struct ControlQuad {
    std::array<Point, 4> p;
};

using SamplePoints = std::vector<Point>;

enum class SeparatorClass { Explicit, Implicit, Background };

/// A curved table separator: T ordered sample points, a class label,
/// a confidence score and optionally the fitted control points.
struct Separator {
    SamplePoints samples;
    SeparatorClass cls = SeparatorClass::Explicit;
    double score = 1.0;
    std::optional<ControlQuad> control;
};

/// B(t) with degree-3 Bernstein basis. Throws DomainError if t is outside [0,1].
Point evaluate_bezier(const ControlQuad& ctrl, double t);

/// Samples B at t_i = i/(T-1), i = 0..T-1. Requires T >= 2.
SamplePoints sample_uniform(const ControlQuad& ctrl, std::size_t t_count);

struct FitResult {
    ControlQuad control;
    double residual = 0.0;  // RMS point error
};

/// Least-squares cubic Bézier fit at uniform parameters t_i = i/(T-1).
/// Requires at least 4 non-coincident points.
FitResult fit_least_squares(const SamplePoints& points);

/// Index-aligned mean Euclidean distance between two equal-length point tuples.
double separator_distance(const SamplePoints& a, const SamplePoints& b);

}  // namespace tabweave
