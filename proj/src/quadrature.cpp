#include "wgfem/quadrature.hpp"

#include <cmath>
#include <numeric>

namespace wgfem {

double QuadRule::total_weight() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

double SegmentRule::total_weight() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw QuadratureError("gauss_legendre: need at least one point");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  // Newton iteration on P_n with the usual Chebyshev-like initial guess.
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;  // after the loop: p1 = P_n, p0 = P_{n-1}
      for (int m = 1; m < n; ++m) {
        double p2 = ((2 * m + 1) * x * p1 - m * p0) / (m + 1);
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

SegmentRule segment_rule(const Vec2& a, const Vec2& b, int degree) {
  if (degree < 0) throw QuadratureError("segment_rule: negative degree");
  const int n = (degree + 2) / 2;  // ceil((degree+1)/2)
  std::vector<double> s, w;
  gauss_legendre(n, s, w);
  const double len = (b - a).norm();
  SegmentRule rule;
  rule.exact_degree = 2 * n - 1;
  rule.points.reserve(n);
  rule.params.reserve(n);
  rule.weights.reserve(n);
  for (int i = 0; i < n; ++i) {
    rule.params.push_back(s[i]);
    rule.points.push_back(0.5 * (1.0 - s[i]) * a + 0.5 * (1.0 + s[i]) * b);
    rule.weights.push_back(0.5 * len * w[i]);
  }
  return rule;
}

namespace {

// Symmetric orbits on the reference triangle (0,0),(1,0),(0,1), reference
// coordinates (x,y), weights normalized to sum to 1/2.
struct RefPoint {
  double x, y, w;
};

void add_centroid(std::vector<RefPoint>& pts, double w) {
  pts.push_back({1.0 / 3.0, 1.0 / 3.0, w});
}

// Three-point orbit (a,a), (1-2a,a), (a,1-2a).
void add_s21(std::vector<RefPoint>& pts, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  pts.push_back({a, a, w});
  pts.push_back({b, a, w});
  pts.push_back({a, b, w});
}

// Same orbit specified by the odd barycentric coordinate b = 1-2a.
void add_s21b(std::vector<RefPoint>& pts, double b, double w) {
  add_s21(pts, (1.0 - b) / 2.0, w);
}

// Rotational three-point orbit (a,b), (c,a), (b,c) with c = 1-a-b.
void add_r3(std::vector<RefPoint>& pts, double a, double b, double w) {
  const double c = 1.0 - a - b;
  pts.push_back({a, b, w});
  pts.push_back({c, a, w});
  pts.push_back({b, c, w});
}

void add_r3c(std::vector<RefPoint>& pts, double a, double b, double c, double w) {
  pts.push_back({a, b, w});
  pts.push_back({c, a, w});
  pts.push_back({b, c, w});
}

// Six-point orbit: all permutations of the barycentric triple (a, b, 1-a-b).
void add_s111(std::vector<RefPoint>& pts, double a, double b, double w) {
  const double c = 1.0 - a - b;
  pts.push_back({a, b, w});
  pts.push_back({b, a, w});
  pts.push_back({a, c, w});
  pts.push_back({c, a, w});
  pts.push_back({b, c, w});
  pts.push_back({c, b, w});
}

// Positive-weight symmetric rules. Degrees with no clean positive rule
// (3, 7 is fine, 11) reuse the next tabulated degree.
std::vector<RefPoint> reference_triangle_rule(int degree, int& exact) {
  std::vector<RefPoint> p;
  switch (degree) {
    case 0:
    case 1:
      add_centroid(p, 0.5);
      exact = 1;
      break;
    case 2:
      add_s21(p, 1.0 / 6.0, 1.0 / 6.0);
      exact = 2;
      break;
    case 3:
    case 4:
      add_s21(p, 0.091576213509770743460, 0.054975871827660933819);
      add_s21(p, 0.44594849091596488632, 0.11169079483900573285);
      exact = 4;
      break;
    case 5:
      add_centroid(p, 0.1125);
      add_s21(p, 0.10128650732345633880, 0.062969590272413576298);
      add_s21(p, 0.47014206410511508977, 0.066197076394253090369);
      exact = 5;
      break;
    case 6:
      add_s21(p, 0.063089014491502228340, 0.025422453185103408460);
      add_s21(p, 0.24928674517091042129, 0.058393137863189683013);
      add_s111(p, 0.053145049844816947353, 0.31035245103378440542,
               0.041425537809186787597);
      exact = 6;
      break;
    case 7:
      add_r3(p, 0.062382265094402118174, 0.067517867073916085443,
             0.026517028157436251429);
      add_r3(p, 0.055225456656926611737, 0.32150249385198182267,
             0.043881408714446055037);
      add_r3c(p, 0.034324302945097146470, 0.66094919618673565761,
              0.30472650086816719592, 0.028775042784981585738);
      add_r3c(p, 0.51584233435359177926, 0.27771616697639178257,
              0.20644149867001643817, 0.067493187009802774463);
      exact = 7;
      break;
    case 8:
      add_centroid(p, 0.0721578038388935841255455552445323);
      add_s21(p, 0.170569307751760206622293501491464,
              0.0516086852673591251408957751460645);
      add_s21(p, 0.0505472283170309754584235505965989,
              0.0162292488115990401554629641708902);
      add_s21(p, 0.459292588292723156028815514494169,
              0.0475458171336423123969480521942921);
      add_s111(p, 0.008394777409957605337213834539296,
               0.263112829634638113421785786284643,
               0.0136151570872174971324223450369544);
      exact = 8;
      break;
    case 9:
      add_centroid(p, 0.0485678981413994169096209912536443);
      add_s21b(p, 0.020634961602524744433, 0.0156673501135695352684274156436046);
      add_s21b(p, 0.12582081701412672546, 0.0389137705023871396583696781497019);
      add_s21(p, 0.188203535619032730240961280467335,
              0.0398238694636051265164458871320226);
      add_s21(p, 0.0447295133944527098651065899662763,
              0.0127888378293490156308393992794999);
      add_s111(p, 0.0368384120547362836348175987833851,
               0.2219629891607656956751025276931919,
               0.0216417696886446886446886446886446);
      exact = 9;
      break;
    case 10:
      add_centroid(p, 0.0454089951913767900476432975500142);
      add_s21b(p, 0.028844733232685245264984935583748,
               0.0183629788782333523585030359456832);
      add_s21(p, 0.109481575485037054795458631340522,
              0.0226605297177639673913028223692986);
      add_s111(p, 0.141707219414879954756683250476361,
               0.307939838764120950165155022930631,
               0.0363789584227100543021575883096803);
      add_s111(p, 0.025003534762686386073988481007746,
               0.246672560639902693917276465411176,
               0.0141636212655287424183685307910495);
      add_s111(p, 0.0095408154002994575801528096228873,
               0.0668032510122002657735402127620247,
               4.71083348186641172996373548344341e-03);
      exact = 10;
      break;
    case 11:
    case 12:
      add_s21b(p, 2.35652204523900e-02, 1.28655332202275e-02);
      add_s21b(p, 1.20551215411079e-01, 2.18462722690190e-02);
      add_s21(p, 2.71210385012116e-01, 3.14291121089425e-02);
      add_s21(p, 1.27576145541586e-01, 1.73980564653545e-02);
      add_s21(p, 2.13173504532100e-02, 3.08313052577950e-03);
      add_s111(p, 1.15343494534698e-01, 2.75713269685514e-01,
               2.01857788831905e-02);
      add_s111(p, 2.28383322222570e-02, 2.81325580989940e-01,
               1.11783866011515e-02);
      add_s111(p, 2.57340505483300e-02, 1.16251915907597e-01,
               8.65811555432950e-03);
      exact = 12;
      break;
    default:
      throw QuadratureError("reference_triangle_rule: degree out of table");
  }
  return p;
}

constexpr int kMaxTriangleDegree = 40;

// Duffy collapse of a tensor Gauss rule: x = u, y = v(1-u), Jacobian (1-u).
std::vector<RefPoint> duffy_rule(int degree, int& exact) {
  const int nu = (degree + 3) / 2;  // exact in u through degree+1 (Jacobian)
  const int nv = (degree + 2) / 2;
  std::vector<double> xu, wu, xv, wv;
  gauss_legendre(nu, xu, wu);
  gauss_legendre(nv, xv, wv);
  std::vector<RefPoint> p;
  p.reserve(static_cast<std::size_t>(nu) * nv);
  for (int i = 0; i < nu; ++i) {
    const double u = 0.5 * (xu[i] + 1.0);
    for (int j = 0; j < nv; ++j) {
      const double v = 0.5 * (xv[j] + 1.0);
      p.push_back({u, v * (1.0 - u), 0.25 * wu[i] * wv[j] * (1.0 - u)});
    }
  }
  exact = degree;
  return p;
}

}  // namespace

int max_triangle_degree() { return kMaxTriangleDegree; }

QuadRule triangle_rule(const Vec2& v0, const Vec2& v1, const Vec2& v2, int degree) {
  if (degree > kMaxTriangleDegree)
    throw QuadratureError("triangle_rule: degree above supported maximum");
  const Vec2 e1 = v1 - v0, e2 = v2 - v0;
  const double jac = e1.x() * e2.y() - e1.y() * e2.x();  // 2 * signed area
  if (!(jac > 0.0))
    throw QuadratureError("triangle_rule: non-positive triangle area");
  int exact = 0;
  const std::vector<RefPoint> ref =
      degree <= 12 ? reference_triangle_rule(std::max(degree, 1), exact)
                   : duffy_rule(degree, exact);
  QuadRule rule;
  rule.exact_degree = exact;
  rule.points.reserve(ref.size());
  rule.weights.reserve(ref.size());
  for (const RefPoint& rp : ref) {
    rule.points.push_back(v0 + rp.x * e1 + rp.y * e2);
    rule.weights.push_back(rp.w * jac);
  }
  return rule;
}

QuadRule polygon_rule(const std::vector<Vec2>& loop, const Vec2& centroid, int degree) {
  if (loop.size() < 3) throw QuadratureError("polygon_rule: fewer than 3 vertices");
  QuadRule rule;
  rule.exact_degree = 0;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const Vec2& a = loop[i];
    const Vec2& b = loop[(i + 1) % loop.size()];
    QuadRule tri = triangle_rule(centroid, a, b, degree);
    rule.exact_degree = tri.exact_degree;
    rule.points.insert(rule.points.end(), tri.points.begin(), tri.points.end());
    rule.weights.insert(rule.weights.end(), tri.weights.begin(), tri.weights.end());
  }
  return rule;
}

}  // namespace wgfem
