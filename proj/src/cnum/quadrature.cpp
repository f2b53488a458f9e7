#include "halfspace/cnum/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>

#include "halfspace/errors.hpp"

namespace halfspace::cnum {
namespace {

// QUADPACK qk15 abscissae and weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
  double a;
  double b;
  cplx value;
  double error;
  bool operator<(const Interval& o) const { return error < o.error; }
};

// Integrates g(s) ds over [a, b] where g already includes the path Jacobian.
Interval kronrod(const std::function<cplx(double)>& g, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const cplx fc = g(center);
  cplx kronrod_sum = fc * kWgk[7];
  cplx gauss_sum = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const cplx f1 = g(center - dx);
    const cplx f2 = g(center + dx);
    kronrod_sum += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss_sum += kWg[j / 2] * (f1 + f2);
  }
  const cplx k = kronrod_sum * half;
  const cplx gs = gauss_sum * half;
  return {a, b, k, std::abs(k - gs)};
}

QuadratureResult adaptive(const std::function<cplx(double)>& g, double a, double b,
                          const QuadratureOptions& options) {
  std::priority_queue<Interval> heap;
  Interval first = kronrod(g, a, b);
  cplx total = first.value;
  double error = first.error;
  heap.push(first);
  int evaluations = 15;
  int subdivisions = 0;
  while (error > options.tol) {
    if (subdivisions >= options.max_subdivisions || !std::isfinite(error)) {
      throw QuadratureError("adaptive quadrature did not converge", total, error);
    }
    const Interval worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Interval left = kronrod(g, worst.a, mid);
    const Interval right = kronrod(g, mid, worst.b);
    evaluations += 30;
    ++subdivisions;
    heap.push(left);
    heap.push(right);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
  }
  cplx sum(0.0, 0.0);
  double err = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  return {sum, err, 0.0, evaluations};
}

}  // namespace

cplx PathSpec::direction() const { return std::polar(1.0, theta); }

cplx PathSpec::finite_end() const {
  return kind == Kind::Segment ? end : start + length * direction();
}

QuadratureResult integrate(const std::function<cplx(cplx)>& f, const PathSpec& path,
                           const QuadratureOptions& options) {
  if (!(options.tol > 0.0)) throw ContractViolation("quadrature tolerance must be positive");

  if (path.kind == PathSpec::Kind::Segment) {
    const cplx a = path.start;
    const cplx delta = path.end - path.start;
    if (delta == cplx(0.0, 0.0)) return {};
    auto g = [&](double s) { return f(a + s * delta) * delta; };
    return adaptive(g, 0.0, 1.0, options);
  }

  if (!(path.length > 0.0) || !std::isfinite(path.length))
    throw ContractViolation("ray truncation parameter must be positive and finite");
  const cplx d = path.direction();
  double tail = 0.0;
  if (path.tail) {
    if (path.start != cplx(0.0, 0.0))
      throw ContractViolation("Gaussian tail bound is only available for rays from the origin");
    const double rate = -(path.tail->alpha * d * d).real();
    if (!(rate > 0.0))
      throw ContractViolation("Gaussian tail bound needs Re(alpha d^2) < 0 along the ray");
    const double T = path.length;
    tail = path.tail->coefficient * std::exp(-rate * T * T) / (2.0 * rate * T);
  }
  const cplx a = path.start;
  auto g = [&](double t) { return f(a + t * d) * d; };
  QuadratureResult r = adaptive(g, 0.0, path.length, options);
  r.tail_bound = tail;
  r.error_bound += tail;
  return r;
}

QuadratureResult integrate_holomorphic(const Expr& f, const PathSpec& path, double tol) {
  QuadratureOptions options;
  options.tol = tol;
  return integrate([&f](cplx z) { return f(z); }, path, options);
}

QuadratureResult integrate_polyline(const Expr& f, const std::vector<cplx>& vertices, double tol) {
  QuadratureResult total;
  if (vertices.size() < 2) return total;
  const double per_segment = tol / static_cast<double>(vertices.size() - 1);
  for (std::size_t k = 0; k + 1 < vertices.size(); ++k) {
    const QuadratureResult r =
        integrate_holomorphic(f, PathSpec::segment(vertices[k], vertices[k + 1]), per_segment);
    total.value += r.value;
    total.error_bound += r.error_bound;
    total.evaluations += r.evaluations;
  }
  return total;
}

double integrate_real(const std::function<double(double)>& f, double a, double b, double tol) {
  QuadratureOptions options;
  options.tol = tol;
  auto g = [&](double s) { return cplx(f(s), 0.0); };
  if (a == b) return 0.0;
  return adaptive(g, a, b, options).value.real();
}

}  // namespace halfspace::cnum
