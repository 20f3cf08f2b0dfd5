#pragma once

#include <array>
#include <vector>

#include "wgfem/core.hpp"

namespace wgfem {

/// Quadrature rule over a planar region. Points are in physical coordinates
/// and weights sum to the measure of the region.
struct QuadRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  int exact_degree = 0;

  std::size_t size() const { return points.size(); }
  double total_weight() const;
};

/// Quadrature rule along a straight segment. In addition to physical points
/// it carries the chordwise parameter s in [-1,1] (from the first endpoint
/// to the second), which edge bases are expressed in.
struct SegmentRule {
  std::vector<Vec2> points;
  std::vector<double> params;
  std::vector<double> weights;
  int exact_degree = 0;

  std::size_t size() const { return points.size(); }
  double total_weight() const;
};

/// Gauss-Legendre nodes and weights on [-1,1], exact through degree 2n-1.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Gauss rule along the segment [a,b] exact for polynomials of the given degree.
SegmentRule segment_rule(const Vec2& a, const Vec2& b, int degree);

/// Symmetric positive-weight rule on a triangle, exact at least to `degree`.
/// Tabulated point sets cover degrees up to 12; higher degrees fall back to a
/// tensorized Duffy rule. Degrees above max_triangle_degree() are an error.
QuadRule triangle_rule(const Vec2& v0, const Vec2& v1, const Vec2& v2, int degree);

int max_triangle_degree();

/// Rule over a convex (or centroid-star-shaped) polygon, assembled from
/// triangle rules on the centroid fan.
QuadRule polygon_rule(const std::vector<Vec2>& loop, const Vec2& centroid, int degree);

}  // namespace wgfem
