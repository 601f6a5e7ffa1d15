#include "cuelab/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace cuelab {
namespace {

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

QuadratureResult kronrod15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kXgk[i];
    const double pair = f(c - dx) + f(c + dx);
    kronrod += kWgk[i] * pair;
    if (i % 2 == 1) gauss += kWg[i / 2] * pair;
  }
  return {kronrod * h, std::abs((kronrod - gauss) * h)};
}

QuadratureResult adapt(const std::function<double(double)>& f, double a, double b, double tol,
                       int depth) {
  const auto whole = kronrod15(f, a, b);
  if (whole.error <= tol || depth <= 0) return whole;
  const double m = 0.5 * (a + b);
  const auto left = adapt(f, a, m, 0.5 * tol, depth - 1);
  const auto right = adapt(f, m, b, 0.5 * tol, depth - 1);
  return {left.value + right.value, left.error + right.error};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol, double rel_tol, int max_depth) {
  if (a == b) return {};
  const auto rough = kronrod15(f, a, b);
  const double tol = std::max(abs_tol, rel_tol * std::abs(rough.value));
  return adapt(f, a, b, tol, max_depth);
}

QuadratureResult integrate_panels(const std::function<double(double)>& f, double a, double b,
                                  double panel, double abs_tol) {
  QuadratureResult total;
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / panel)));
  const double width = (b - a) / panels;
  for (int i = 0; i < panels; ++i) {
    const auto part = integrate(f, a + i * width, a + (i + 1) * width, abs_tol / panels, 1e-14);
    total.value += part.value;
    total.error += part.error;
  }
  return total;
}

}  // namespace cuelab
