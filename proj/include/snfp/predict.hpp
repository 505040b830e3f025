#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

namespace snfp {

using Rational = boost::rational<std::int64_t>;

// ---------------------------------------------------------------------------
// Level-N sizes

std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n);

/// |P^3(Z/NZ)| = N^3 prod_{p | N} (1 + p + p^2 + p^3) / p^3.
std::uint64_t p3_size(std::uint64_t n);

/// |P^3(Z/NZ)| / N^3, exact.
Rational p3_constant(std::uint64_t n);

struct LevelArithmetic {
  std::uint64_t level = 0;
  std::vector<std::pair<std::uint64_t, unsigned>> factorization;
  std::uint64_t p3 = 0;
  // Estimated cochain ranks |P^3|/96, |P^3|/10, 25|P^3|/72, rounded to
  // nearest (halves up).
  std::uint64_t n6_est = 0;
  std::uint64_t n5_est = 0;
  std::uint64_t n4_est = 0;
};

/// Throws a Domain error for N < 2.
LevelArithmetic level_arithmetic(std::uint64_t n);

// ---------------------------------------------------------------------------
// Dimension formulas

/// Legendre symbol (a / n) for an odd prime n.
int kronecker(std::int64_t a, std::uint64_t n);

/// dim of weight-3 paramodular forms of prime level N. Throws an Internal
/// error if the rational terms do not sum to a nonnegative integer.
std::int64_t dim_paramodular3(std::uint64_t n);

/// Unsummed value of the weight-3 paramodular dimension formula.
Rational dim_paramodular3_exact(std::uint64_t n);

/// dim of level-one cusp forms of weight k.
std::int64_t dim_level1_cusp(std::int64_t k);

/// dim of Jacobi cusp forms of weight 3 and index N:
///   sum_{j=1}^{N-1} ( s(2j + 2) - floor(j^2 / 4N) ).
/// Throws an Internal error on a negative total.
std::int64_t dim_jacobi_cusp3(std::uint64_t n);

/// dim P_3(N) - dim J^cusp_{3,N}: paramodular forms that are not Gritsenko
/// lifts.
std::int64_t dim_paramodular3_nongritsenko(std::uint64_t n);

// ---------------------------------------------------------------------------
// Hecke polynomials

/// r + g * gamma + h * gamma', with gamma and gamma' formal symbols.
struct GammaLinear {
  Rational r{0};
  Rational g{0};
  Rational h{0};

  GammaLinear() = default;
  GammaLinear(Rational value) : r(value) {}  // NOLINT(google-explicit-constructor)
  GammaLinear(std::int64_t value) : r(value) {}  // NOLINT(google-explicit-constructor)
  GammaLinear(Rational r_, Rational g_, Rational h_) : r(r_), g(g_), h(h_) {}

  static GammaLinear gamma() { return {Rational(0), Rational(1), Rational(0)}; }
  static GammaLinear gamma_conj() { return {Rational(0), Rational(0), Rational(1)}; }

  // Compare against Rational, not int: boost 1.74 mixed comparisons recurse
  // forever under C++20 rewritten operators.
  bool is_rational() const noexcept { return g == Rational(0) && h == Rational(0); }

  friend bool operator==(const GammaLinear&, const GammaLinear&) = default;
};

GammaLinear operator+(const GammaLinear& a, const GammaLinear& b);
GammaLinear operator-(const GammaLinear& a, const GammaLinear& b);
GammaLinear operator-(const GammaLinear& a);
/// Throws a Domain error when both factors involve gamma or gamma'.
GammaLinear operator*(const GammaLinear& a, const GammaLinear& b);
std::string to_string(const GammaLinear& c);

enum class HeckeFamily { GenericGL4, IIa, IIb, IV, IIIa, IIIb, Spin };
std::string to_string(HeckeFamily family);

/// Degree <= 4 polynomial in T, coefficient k at index k.
struct HeckePolynomial {
  std::array<GammaLinear, 5> coeffs{};
  std::uint64_t l = 0;
  HeckeFamily family = HeckeFamily::GenericGL4;

  GammaLinear at_zero() const { return coeffs[0]; }
  friend bool operator==(const HeckePolynomial&, const HeckePolynomial&) = default;
};

std::string to_string(const HeckePolynomial& poly);

/// sum_k (-1)^k l^{k(k-1)/2} a_k T^k. Requires a_0 = 1.
HeckePolynomial hecke_poly_gl4(std::uint64_t l, const std::array<Rational, 5>& a);

/// Parameters of the Eisenstein families: IIa and IIb take alpha, IV takes
/// beta, IIIa and IIIb take gamma and gamma'.
struct FamilyParams {
  std::optional<GammaLinear> alpha;
  std::optional<GammaLinear> beta;
  std::optional<GammaLinear> gamma;
  std::optional<GammaLinear> gamma_conj;

  static FamilyParams with_alpha(GammaLinear a) { return {a, std::nullopt, std::nullopt, std::nullopt}; }
  static FamilyParams with_beta(GammaLinear b) { return {std::nullopt, b, std::nullopt, std::nullopt}; }
  /// gamma and gamma' left as formal symbols.
  static FamilyParams formal_gamma() {
    return {std::nullopt, std::nullopt, GammaLinear::gamma(), GammaLinear::gamma_conj()};
  }
};

/// Throws a Domain error when the parameters do not match the family.
HeckePolynomial hecke_poly_family(HeckeFamily family, std::uint64_t l, const FamilyParams& params);

/// 1 - d1 T + (d1^2 - d2 - l^2) T^2 - d1 l^3 T^3 + l^6 T^4 from the T_l and
/// T_{l^2} eigenvalues d1, d2.
HeckePolynomial hecke_poly_spin(std::uint64_t l, Rational delta_l, Rational delta_l2);

// ---------------------------------------------------------------------------
// Betti table

struct BettiRow {
  std::uint64_t level = 0;
  std::int64_t s2 = 0;
  std::int64_t s4_0 = 0;
  std::int64_t sl3 = 0;
  std::int64_t png = 0;
  std::int64_t h5 = 0;
};

/// 2 (s2 + sl3 + pnG) + s4_0.
std::int64_t predict_h5(const BettiRow& row);

/// CSV with header "N,s2,s4_0,sl3,pnG,h5". Lines starting with '#' are
/// comments. Throws Parse errors with line numbers.
std::vector<BettiRow> read_betti_csv(std::istream& in, const std::string& source = "<stream>");
std::vector<BettiRow> read_betti_csv_file(const std::filesystem::path& path);

struct BettiCheck {
  BettiRow row;
  std::int64_t predicted = 0;
  bool ok = false;
  /// pnG from the dimension formulas; only for prime levels >= 2.
  std::optional<std::int64_t> png_formula;
};

struct BettiReport {
  std::vector<BettiCheck> rows;
  std::size_t mismatches = 0;      // predicted h5 != h5
  std::size_t png_mismatches = 0;  // formula pnG != pnG column
};

BettiReport check_table(const std::vector<BettiRow>& rows);

}  // namespace snfp
