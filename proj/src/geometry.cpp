#include "tabweave/geometry.hpp"

#include <cmath>

#include "tabweave/errors.hpp"

namespace tabweave {

double norm(Point p) { return std::hypot(p.x, p.y); }

namespace {

// Degree-3 Bernstein basis at t.
std::array<double, 4> bernstein3(double t) {
    const double u = 1.0 - t;
    return {u * u * u, 3.0 * t * u * u, 3.0 * t * t * u, t * t * t};
}

// Solves the 4x4 system a*x = b by Gaussian elimination with partial pivoting.
std::array<double, 4> solve4(std::array<std::array<double, 4>, 4> a, std::array<double, 4> b) {
    for (int col = 0; col < 4; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        if (std::fabs(a[pivot][col]) < 1e-300)
            throw DomainError("fit_least_squares: degenerate design matrix");
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (int r = col + 1; r < 4; ++r) {
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::array<double, 4> x{};
    for (int r = 3; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < 4; ++c) s -= a[r][c] * x[c];
        x[r] = s / a[r][r];
    }
    return x;
}

}  // namespace

Point evaluate_bezier(const ControlQuad& ctrl, double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("evaluate_bezier: t outside [0,1]");
    const auto b = bernstein3(t);
    Point out{};
    for (int i = 0; i < 4; ++i) {
        out.x += b[i] * ctrl.p[i].x;
        out.y += b[i] * ctrl.p[i].y;
    }
    return out;
}

SamplePoints sample_uniform(const ControlQuad& ctrl, std::size_t t_count) {
    if (t_count < 2) throw DomainError("sample_uniform: T must be >= 2");
    SamplePoints out;
    out.reserve(t_count);
    for (std::size_t i = 0; i < t_count; ++i)
        out.push_back(evaluate_bezier(ctrl, double(i) / double(t_count - 1)));
    return out;
}

FitResult fit_least_squares(const SamplePoints& points) {
    const std::size_t n = points.size();
    if (n < 4) throw DomainError("fit_least_squares: need at least 4 points");
    bool all_same = true;
    for (const Point& p : points)
        if (!(p == points[0])) { all_same = false; break; }
    if (all_same) throw DomainError("fit_least_squares: all points coincident");

    // Normal equations (A^T A + ridge) P = A^T S with a tiny ridge term to
    // keep near-singular designs solvable.
    std::array<std::array<double, 4>, 4> ata{};
    std::array<double, 4> atx{}, aty{};
    for (std::size_t i = 0; i < n; ++i) {
        const auto b = bernstein3(double(i) / double(n - 1));
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) ata[r][c] += b[r] * b[c];
            atx[r] += b[r] * points[i].x;
            aty[r] += b[r] * points[i].y;
        }
    }
    constexpr double kRidge = 1e-12;
    for (int r = 0; r < 4; ++r) ata[r][r] += kRidge;

    const auto px = solve4(ata, atx);
    const auto py = solve4(ata, aty);

    FitResult fit;
    for (int i = 0; i < 4; ++i) fit.control.p[i] = {px[i], py[i]};

    double sq_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point e = evaluate_bezier(fit.control, double(i) / double(n - 1)) - points[i];
        sq_sum += e.x * e.x + e.y * e.y;
    }
    fit.residual = std::sqrt(sq_sum / double(n));
    return fit;
}

double separator_distance(const SamplePoints& a, const SamplePoints& b) {
    if (a.size() != b.size() || a.empty())
        throw DomainError("separator_distance: sample counts differ");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += norm(a[i] - b[i]);
    return sum / double(a.size());
}

}  // namespace tabweave
