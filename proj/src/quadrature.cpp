#include "kgfield/quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <memory>
#include <string>

#include "kgfield/core.hpp"

namespace kgfield {
namespace {

double trampoline(double x, void* p) { return (*static_cast<const std::function<double(double)>*>(p))(x); }

struct Workspace {
  gsl_integration_workspace* w;
  explicit Workspace(std::size_t n) : w(gsl_integration_workspace_alloc(n)) {}
  ~Workspace() { gsl_integration_workspace_free(w); }
};

void silence_gsl() {
  static const bool once = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)once;
}

} // namespace

GaussRule gauss_legendre(int order, double lo, double hi) {
  if (order < 1) throw PreconditionError("gauss_legendre: order must be positive");
  if (!(hi > lo)) throw PreconditionError("gauss_legendre: empty interval");
  std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)>
      table(gsl_integration_glfixed_table_alloc(order), &gsl_integration_glfixed_table_free);
  if (!table) throw NumericalError("gauss_legendre: table allocation failed");
  GaussRule r;
  r.nodes.resize(order);
  r.weights.resize(order);
  for (int i = 0; i < order; ++i)
    gsl_integration_glfixed_point(lo, hi, i, &r.nodes[i], &r.weights[i], table.get());
  return r;
}

double integrate(const std::function<double(double)>& f, double lo, double hi, double rel_tol) {
  silence_gsl();
  Workspace ws(4000);
  gsl_function F{&trampoline, const_cast<std::function<double(double)>*>(&f)};
  double result = 0.0, err = 0.0;
  const int status = gsl_integration_qag(&F, lo, hi, 0.0, std::max(rel_tol, 2e-14), 4000, GSL_INTEG_GAUSS61, ws.w,
                                         &result, &err);
  if (status != GSL_SUCCESS && status != GSL_EROUND)
    throw NumericalError(std::string("integrate: ") + gsl_strerror(status));
  return result;
}

double integrate_semi_infinite(const std::function<double(double)>& f, double lo, double rel_tol) {
  silence_gsl();
  Workspace ws(4000);
  gsl_function F{&trampoline, const_cast<std::function<double(double)>*>(&f)};
  double result = 0.0, err = 0.0;
  const int status = gsl_integration_qagiu(&F, lo, 0.0, std::max(rel_tol, 2e-14), 4000, ws.w, &result, &err);
  if (status != GSL_SUCCESS && status != GSL_EROUND)
    throw NumericalError(std::string("integrate_semi_infinite: ") + gsl_strerror(status));
  return result;
}

double integrate_singular(const std::function<double(double)>& f, double lo, double hi,
                          double rel_tol) {
  silence_gsl();
  Workspace ws(4000);
  gsl_function F{&trampoline, const_cast<std::function<double(double)>*>(&f)};
  double result = 0.0, err = 0.0;
  const int status = gsl_integration_qags(&F, lo, hi, 0.0, std::max(rel_tol, 2e-14), 4000, ws.w, &result, &err);
  if (status != GSL_SUCCESS && status != GSL_EROUND)
    throw NumericalError(std::string("integrate_singular: ") + gsl_strerror(status));
  return result;
}

double integrate_fourier_sine(const std::function<double(double)>& f, double omega, double lo,
                              double abs_tol) {
  silence_gsl();
  Workspace ws(4000), cycles(4000);
  std::unique_ptr<gsl_integration_qawo_table, decltype(&gsl_integration_qawo_table_free)> table(
      gsl_integration_qawo_table_alloc(omega, 1.0, GSL_INTEG_SINE, 40),
      &gsl_integration_qawo_table_free);
  gsl_function F{&trampoline, const_cast<std::function<double(double)>*>(&f)};
  double result = 0.0, err = 0.0;
  const int status = gsl_integration_qawf(&F, lo, abs_tol, 4000, ws.w, cycles.w, table.get(),
                                          &result, &err);
  if (status != GSL_SUCCESS && status != GSL_EROUND)
    throw NumericalError(std::string("integrate_fourier_sine: ") + gsl_strerror(status));
  return result;
}

} // namespace kgfield
