#include "saddlekit/rational.hpp"

#include <cmath>
#include <limits>

#include "saddlekit/error.hpp"

namespace saddlekit {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEdgeSum: return "EDGE_SUM";
    case ErrorCode::kNonpositiveArea: return "NONPOSITIVE_AREA";
    case ErrorCode::kGluingNotInvolutive: return "GLUING_NOT_INVOLUTIVE";
    case ErrorCode::kGluingNotOpposite: return "GLUING_NOT_OPPOSITE";
    case ErrorCode::kConeAngle: return "CONE_ANGLE";
    case ErrorCode::kMalformed: return "MALFORMED";
    case ErrorCode::kSingularMatrix: return "SINGULAR_MATRIX";
    case ErrorCode::kResourceLimit: return "RESOURCE_LIMIT";
    case ErrorCode::kCollinear: return "COLLINEAR";
    case ErrorCode::kAmbiguousDiamond: return "AMBIGUOUS_DIAMOND";
    case ErrorCode::kFlipCycle: return "FLIP_CYCLE";
    case ErrorCode::kNotDelaunay: return "NOT_DELAUNAY";
    case ErrorCode::kChewCaseFour: return "CHEW_CASE_FOUR";
    case ErrorCode::kUndecidable: return "UNDECIDABLE";
    case ErrorCode::kAmbiguousMembership: return "AMBIGUOUS_MEMBERSHIP";
    case ErrorCode::kMarginViolation: return "MARGIN_VIOLATION";
    case ErrorCode::kAcceptanceRate: return "ACCEPTANCE_RATE";
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kParse: return "PARSE";
  }
  return "UNKNOWN";
}

namespace {

bool is_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  // U+2212 MINUS SIGN in UTF-8.
  constexpr std::string_view kUnicodeMinus = "\xE2\x88\x92";
  if (body.starts_with(kUnicodeMinus)) {
    negative = true;
    body.remove_prefix(kUnicodeMinus.size());
  } else if (body.starts_with('-')) {
    negative = true;
    body.remove_prefix(1);
  } else if (body.starts_with('+')) {
    body.remove_prefix(1);
  }
  std::string_view num = body;
  std::string_view den = "1";
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    num = body.substr(0, slash);
    den = body.substr(slash + 1);
  }
  if (!is_digits(num) || !is_digits(den)) {
    throw Error(ErrorCode::kParse, "not a rational: '" + std::string(text) + "'");
  }
  Integer n(std::string(num), 10);
  Integer d(std::string(den), 10);
  if (d == 0) {
    throw Error(ErrorCode::kParse, "zero denominator: '" + std::string(text) + "'");
  }
  Rational q(n, d);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

Rational ratio(long num, long den) {
  if (den == 0) throw Error(ErrorCode::kInvalidArgument, "zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string format_rational(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

double to_double(const Rational& q) { return q.get_d(); }

Rational from_double(double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::kInvalidArgument, "non-finite value");
  }
  return Rational(value);
}

Rational dyadic_round(double value, int bits) {
  const double scaled = std::nearbyint(std::ldexp(value, bits));
  Rational q(Integer(scaled), Integer(1) << bits);
  q.canonicalize();
  return q;
}

int sign(const Rational& q) { return sgn(q); }

}  // namespace saddlekit
