#pragma once

#include <functional>
#include <span>

namespace memsplit {

struct MinResult {
  double x = 0.0;
  double fx = 0.0;
};

// Golden-section minimization of a unimodal f over [lo, hi]; stops when the
// bracket is narrower than tol.
MinResult golden_section_minimize(const std::function<double(double)>& f, double lo,
                                  double hi, double tol, int max_iter = 200);

double norm_pdf(double z);
double norm_cdf(double z);

double mean_of(std::span<const double> v);
// Sample standard deviation (n-1); 0 for fewer than two values.
double stddev_of(std::span<const double> v);

double logsumexp(std::span<const double> v);

}  // namespace memsplit
