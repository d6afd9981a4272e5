#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "saddlekit/geodesic.hpp"

namespace saddlekit {

// ---------------------------------------------------------------------------
// Test functions

/// Closed disc |v| <= r.
struct DiscIndicator {
  Rational r;
};
/// r1 < |v| <= r2, so discs split into annuli without overlap.
struct AnnulusIndicator {
  Rational r1, r2;
};
/// |v| <= r with direction within half_angle of center (radians, closed).
struct SectorIndicator {
  Rational r;
  double center = 0.0;
  double half_angle = 0.0;
};
/// Isosceles triangle with apex at the origin, symmetric about the ray at
/// angle `axis`, opening half-angle `half_angle` and height `height` along
/// the axis.
struct TriangleIndicator {
  double axis = 0.0;
  double half_angle = 0.0;
  double height = 0.0;
};

struct TestFunction;
/// h(x, y) = f(x) g(y) on pairs of vectors.
struct ProductPair {
  std::shared_ptr<const TestFunction> f, g;
};

struct TestFunction
    : std::variant<DiscIndicator, AnnulusIndicator, SectorIndicator, TriangleIndicator, ProductPair> {
  using variant::variant;
};

ProductPair make_pair(TestFunction f, TestFunction g);

/// Every vector in the support has length at most this. Throws
/// kInvalidArgument for ProductPair.
double support_radius(const TestFunction& f);

/// Invalid parameters (negative radii, r1 > r2, angles out of range) throw
/// kInvalidArgument.
void check_test_function(const TestFunction& f);

enum class Membership { kOut, kIn, kAmbiguous };

/// Exact where the boundary is exact (radii, rays at multiples of pi/4);
/// otherwise vectors within a relative angular gap of 1e-12 of an
/// approximated boundary are ambiguous.
Membership member(const TestFunction& f, const ExactVector& v);

/// Float membership with absolute safety margin delta.
Membership member(const TestFunction& f, double x, double y, double delta);

TestFunction test_function_from_json(const std::string& text);
std::string test_function_to_json(const TestFunction& f);

// ---------------------------------------------------------------------------
// Transforms

struct SvValue {
  double value = 0.0;
  std::size_t count = 0;      // connections decided inside the support
  std::size_t ambiguous = 0;  // connections left undecided, not counted
};

/// Sum of f over the holonomy of every oriented saddle connection.
/// ProductPair falls through to pair_transform.
SvValue transform(const TranslationSurface& s, const TestFunction& f,
                  const EnumerateOptions& options = {});

/// Transform at the unit-area rescaling of s, where `area` is the area of s:
/// a vector v counts as v / sqrt(area). Radii are compared exactly through
/// |v|^2 <= r^2 area.
SvValue transform_normalized(const TranslationSurface& s, const TestFunction& f, const Rational& area,
                             const EnumerateOptions& options = {});

/// Double sum of f(v1) g(v2) over pairs of connections.
SvValue pair_transform(const TranslationSurface& s, const TestFunction& f, const TestFunction& g,
                       const EnumerateOptions& options = {});

struct AverageOptions {
  double delta = 1e-9;                  // float membership margin
  double max_ambiguous_fraction = 1e-3;  // of all in-or-near-support evaluations
  int threads = 1;
};

struct AverageValue {
  double value = 0.0;
  std::size_t ambiguous = 0;
  std::size_t evaluations = 0;  // sample x vector pairs near the support
};

/// Trapezoidal average over n equally spaced angles t of the transform of
/// f at a_R r_t s, with a_R = diag(R, 1/R). Radial f with R = 1 is returned
/// exactly. Throws kAmbiguousMembership past the ambiguity tolerance.
AverageValue rotational_average(const TranslationSurface& s, const TestFunction& f, double R,
                                int n, const AverageOptions& options = {},
                                const EnumerateOptions& enumerate = {});

/// The rotational average of the triangle indicator of height h, half-angle
/// theta about the vertical, evaluated at one vector of length rho. Only rho
/// matters; the value is a fraction of the full turn.
double triangle_average_kernel(double rho, double R, double theta, double h);

/// Shrunken half-angle of the sector after a_R: atan(tan(theta) / R^2).
double shrunk_angle(double R, double theta);

struct SectorSandwich {
  double lower = 0.0;   // average of the inscribed triangle indicator
  double scaled = 0.0;  // (theta_R / pi) * N(s, R)
  double upper = 0.0;   // average of the circumscribed triangle indicator
  double margin = 0.0;  // floating error bound on each comparison
  std::size_t count = 0;
};

/// Requires 0 < theta <= pi/8 and R >= 2. Throws kMarginViolation when the
/// chain lower <= scaled <= upper fails by more than the margin.
SectorSandwich sector_sandwich(const TranslationSurface& s, double R, double theta,
                               const EnumerateOptions& options = {});

// ---------------------------------------------------------------------------
// Classification

enum class ClassLabel { kH1, kH2, kOmega0, kOmega1, kOmega2, kUnknown };
std::string class_label_name(ClassLabel label);

struct ClassifyOptions {
  /// Separatrix trace cap for cylinder detection; 0 picks 64 * sqrt(area).
  Rational max_trace = 0;
  EnumerateOptions enumerate;
};

struct Classification {
  ClassLabel label = ClassLabel::kUnknown;
  SaddleConnection gamma;                        // shortest connection
  std::optional<SaddleConnection> second;        // shortest non-homologous one
  /// Closed chain of connections witnessing a short closed curve (one piece
  /// when the curve is a cylinder core next to it).
  std::vector<SaddleConnection> short_curve;
  std::optional<Cylinder> cylinder;
  std::string note;
};

/// p is rational with 0 < p < 1/N. Throws kInvalidArgument otherwise.
Classification classify(const TranslationSurface& s, const Rational& epsilon0, const Rational& p,
                        const ClassifyOptions& options = {});

std::string classification_to_json(const Classification& c);

}  // namespace saddlekit
