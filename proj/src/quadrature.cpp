#include "grhs/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "grhs/error.hpp"

namespace grhs {
namespace {

// Abscissae and weights of the 7-point Gauss / 15-point Kronrod pair.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error, abs_value;
  bool operator<(const Segment& other) const { return error < other.error; }
};

double checked(const std::function<double(double)>& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y)) throw NumericalError("quadrature integrand is not finite");
  return y;
}

Segment gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = checked(f, center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double abs_sum = std::abs(kronrod);
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = checked(f, center - dx);
    const double f2 = checked(f, center + dx);
    kronrod += kWgk[j] * (f1 + f2);
    abs_sum += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  const double value = kronrod * half;
  const double error = std::abs((kronrod - gauss) * half);
  return {a, b, value, error, abs_sum * std::abs(half)};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, std::size_t max_intervals) {
  QuadratureResult result;
  if (a == b) return result;
  const double sign = b < a ? -1.0 : 1.0;
  if (b < a) std::swap(a, b);

  std::priority_queue<Segment> heap;
  heap.push(gauss_kronrod(f, a, b));
  result.evaluations = 15;
  double total = heap.top().value;
  double total_error = heap.top().error;
  double total_abs = heap.top().abs_value;
  constexpr double eps = std::numeric_limits<double>::epsilon();

  while (total_error > std::max(abs_tol, 50.0 * eps * total_abs)) {
    if (heap.size() >= max_intervals) {
      throw NumericalError("adaptive quadrature exceeded its subdivision budget");
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) {
      // Interval no longer representable; accept its estimate.
      heap.push({worst.a, worst.b, worst.value, 0.0, worst.abs_value});
      total_error -= worst.error;
      continue;
    }
    const Segment left = gauss_kronrod(f, worst.a, mid);
    const Segment right = gauss_kronrod(f, mid, worst.b);
    result.evaluations += 30;
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    total_abs += left.abs_value + right.abs_value - worst.abs_value;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum from the pieces so the result does not carry update round-off.
  double sum = 0.0;
  double err = 0.0;
  std::vector<Segment> pieces;
  pieces.reserve(heap.size());
  while (!heap.empty()) {
    pieces.push_back(heap.top());
    heap.pop();
  }
  std::sort(pieces.begin(), pieces.end(), [](const Segment& l, const Segment& r) { return l.a < r.a; });
  for (const Segment& s : pieces) {
    sum += s.value;
    err += s.error;
  }
  result.value = sign * sum;
  result.error = err;
  result.intervals = pieces.size();
  return result;
}

}  // namespace grhs
