// Welzl's randomized incremental minimal enclosing ball, for small dimension.
#include <algorithm>
#include <cmath>
#include <random>

#include "gmetric/constructions.hpp"

namespace gmetric {

namespace {

using Point = std::vector<double>;

double squared_distance(const Point& a, const Point& b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    acc += d * d;
  }
  return acc;
}

bool contains(const Ball& ball, const Point& p) {
  const double r = ball.radius;
  const double slack = 1e-12 * std::max(1.0, r * r);
  return squared_distance(ball.center, p) <= r * r + slack;
}

// Solves a small dense system in place by Gaussian elimination with partial
// pivoting. Returns false when the system is singular.
bool solve(std::vector<std::vector<double>>& a, std::vector<double>& b) {
  const std::size_t m = b.size();
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < m; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    }
    if (std::fabs(a[pivot][col]) < 1e-14) return false;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = col + 1; r < m; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < m; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t i = m; i-- > 0;) {
    double acc = b[i];
    for (std::size_t c = i + 1; c < m; ++c) acc -= a[i][c] * b[c];
    b[i] = acc / a[i][i];
  }
  return true;
}

// Smallest ball with every point of `boundary` on its surface; the center
// lies in the affine hull of the boundary points.
Ball ball_through(const std::vector<const Point*>& boundary, std::size_t dim) {
  if (boundary.empty()) return Ball{Point(dim, 0.0), -1.0};
  const Point& p0 = *boundary.front();
  if (boundary.size() == 1) return Ball{p0, 0.0};

  const std::size_t m = boundary.size() - 1;
  std::vector<Point> v(m, Point(dim));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < dim; ++k) v[i][k] = (*boundary[i + 1])[k] - p0[k];
  }
  std::vector<std::vector<double>> gram(m, std::vector<double>(m));
  std::vector<double> rhs(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double dot = 0.0;
      for (std::size_t k = 0; k < dim; ++k) dot += v[i][k] * v[j][k];
      gram[i][j] = dot;
    }
    rhs[i] = 0.5 * gram[i][i];
  }
  if (!solve(gram, rhs)) {
    // Degenerate boundary (affinely dependent): fall back to the farthest pair.
    Ball best{p0, 0.0};
    for (std::size_t i = 0; i < boundary.size(); ++i) {
      for (std::size_t j = i + 1; j < boundary.size(); ++j) {
        const double r = 0.5 * std::sqrt(squared_distance(*boundary[i], *boundary[j]));
        if (r > best.radius) {
          Point c(dim);
          for (std::size_t k = 0; k < dim; ++k) c[k] = 0.5 * ((*boundary[i])[k] + (*boundary[j])[k]);
          best = Ball{std::move(c), r};
        }
      }
    }
    return best;
  }
  Point center = p0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < dim; ++k) center[k] += rhs[i] * v[i][k];
  }
  double radius = 0.0;
  for (const Point* p : boundary) radius = std::max(radius, std::sqrt(squared_distance(center, *p)));
  return Ball{std::move(center), radius};
}

Ball welzl(std::vector<const Point*>& points, std::size_t count,
           std::vector<const Point*>& boundary, std::size_t dim) {
  if (count == 0 || boundary.size() == dim + 1) return ball_through(boundary, dim);
  const Point* p = points[count - 1];
  Ball ball = welzl(points, count - 1, boundary, dim);
  if (ball.radius >= 0.0 && contains(ball, *p)) return ball;
  boundary.push_back(p);
  ball = welzl(points, count - 1, boundary, dim);
  boundary.pop_back();
  return ball;
}

}  // namespace

Ball min_enclosing_ball(std::span<const std::vector<double>> points) {
  if (points.empty()) throw Error(ErrorCode::invalid_parameter, "enclosing ball of no points");
  const std::size_t dim = points.front().size();
  std::vector<const Point*> order;
  order.reserve(points.size());
  for (const auto& p : points) {
    if (p.size() != dim) throw Error(ErrorCode::invalid_parameter, "mixed point dimensions");
    order.push_back(&p);
  }
  // Fixed seed: the expected running time needs a random order, the output
  // must not depend on the run.
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng() % i]);
  }
  std::vector<const Point*> boundary;
  Ball ball = welzl(order, order.size(), boundary, dim);
  if (ball.radius < 0.0) ball.radius = 0.0;
  return ball;
}

}  // namespace gmetric
