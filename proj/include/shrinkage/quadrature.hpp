#pragma once

#include <functional>

namespace shrinkage::quad {

// Integral of f over [a,b]: fixed 15-point Gauss-Kronrod panels, panel count
// doubled until two successive estimates agree to rel_tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10);

// log of the integral of exp(logf) over [a,b], same panel-doubling scheme but
// accumulated entirely in log space so the value may be far below log(DBL_MIN).
double log_integrate(const std::function<double(double)>& logf, double a, double b,
                     double rel_tol = 1e-10);

// log of the integral of exp(logf) over the real line for a unimodal-ish logf.
// Bounds are discovered by geometric expansion from `center` (in units of
// `step`) until logf falls `drop` nats below the running maximum.
double log_integrate_peaked(const std::function<double(double)>& logf, double center,
                            double step = 1.0, double rel_tol = 1e-10, double drop = 80.0);

}  // namespace shrinkage::quad
