#pragma once

#include "pwamb/tensor.hpp"

#include <string>
#include <vector>

namespace pwamb {

// Fiber coordinate names over a base chart: "x3" -> prefix + "3", any other
// name c -> prefix + "_" + c.
std::vector<std::string> fiber_names(const Chart& base, const std::string& prefix);

// (x^A, p_A)
Chart cotangent_chart(const Chart& base, const std::string& prefix = "p");
// (x0, x^A), x0 > 0
Chart cone_base_chart(const Chart& base);
// (x0, x^A, y_A, y0)
Chart cone_chart(const Chart& base);
// (t, x^A, p_A, rho), t > 0
Chart ambient_chart(const Chart& base);

// Validates D (n >= 2, torsion-free, volume-preserving) and returns
// g = 2 dx^A . dp_A - 2 p_C Gamma_A^C_B dx^A . dx^B on the cotangent chart
// with fiber coordinates named after `prefix`. The split signature is checked
// at a random rational point.
MetricTensor patterson_walker(const AffineConnection& d, const std::string& prefix = "p");

// Ricci-flat connection on the cone chart (x0, x^A) with nabla Z = id for
// Z = x0 d/dx0.
AffineConnection thomas_cone(const AffineConnection& d);

// Cone metric in closed form on (x0, x^A, y_A, y0).
MetricTensor cone_pw_formula(const AffineConnection& d);
// Same metric obtained as patterson_walker(thomas_cone(d)) reordered to the
// cone chart; throws MathError("diagram") if it differs from the closed form.
MetricTensor cone_pw(const AffineConnection& d);

// Closed-form ambient metric on (t, x^A, p_A, rho).
MetricTensor ambient_pw(const AffineConnection& d);

// Map from the ambient chart to the cone chart: x0 = t, y0 = t rho,
// y_A = t^2 p_A. `inverse_fg_map` goes the other way.
CoordinateMap fg_map(const Chart& base);
CoordinateMap inverse_fg_map(const Chart& base);
// Base chart recovered from a cone chart (x0, x^A, y_A, y0).
Chart base_of_cone_chart(const Chart& cone);
// Pullback of a cone metric to the ambient chart.
MetricTensor normalize_to_fg(const MetricTensor& cone_metric);

// t^2 (1 + lambda rho)^2 g + 2 rho dt^2 + 2 t dt . drho on (t, x, rho).
// Requires Ric(g) = 2 lambda (m - 1) g; the result is checked to be Ricci-flat.
MetricTensor einstein_ambient(const MetricTensor& g, const Rational& lambda);
// (t, coords..., rho)
Chart ambient_chart_over(const Chart& base);

struct CanonicalFields {
    TensorField z;       // cone base chart
    TensorField k;       // ambient chart: 2 p_A d/dp_A + 2 rho d/drho
    TensorField killing; // t d/dt - 2 p_A d/dp_A - 2 rho d/drho
    TensorField euler;   // t d/dt
};
CanonicalFields canonical_fields(const AffineConnection& d);

// The coordinate fields spanning the fiber directions d/dp_A and d/drho.
std::vector<TensorField> fiber_frame(const Chart& base);

// Everything built from one connection.
struct ConstructionBundle {
    AffineConnection d;
    Chart base, cotangent, cone_base, cone, ambient;
    MetricTensor pw;
    AffineConnection thomas;
    MetricTensor cone_metric;
    MetricTensor ambient_metric;
    CanonicalFields fields;
};
ConstructionBundle build_bundle(const AffineConnection& d);

} // namespace pwamb
