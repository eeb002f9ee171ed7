//------------------------------------------------------------------------------
//
//   Copyright 2026 The circex Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#pragma once

namespace circex {

double normal_cdf(double x) noexcept;

/// Inverse of normal_cdf for p in (0, 1). Rational approximation refined
/// with one Halley step against erfc; absolute error below 1e-12.
/// Throws domain error outside (0, 1).
double normal_quantile(double p);

/// I_x(a, b) by Lentz's continued fraction. a, b > 0 and x in [0, 1].
double regularized_incomplete_beta(double a, double b, double x);

/// P(T <= t) for Student's t with `df` > 0 degrees of freedom.
double student_t_cdf(double t, double df);

/// P(|T| >= |t|).
double student_t_two_sided_p(double t, double df);

}  // namespace circex
