#include "snfp/predict.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "snfp/error.hpp"
#include "snfp/gfp.hpp"

namespace snfp {

std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

namespace {

void require_level(std::uint64_t n) {
  if (n < 2) throw domain_error("level must be at least 2");
  // Keeps N^3 * 4.x inside 64 bits.
  if (n > 1'000'000) throw domain_error("level too large");
}

std::uint64_t round_ratio(std::uint64_t x, std::uint64_t num, std::uint64_t den) {
  return (2 * x * num + den) / (2 * den);
}

}  // namespace

std::uint64_t p3_size(std::uint64_t n) {
  require_level(n);
  std::uint64_t total = 1;
  for (auto [p, e] : factorize(n)) {
    std::uint64_t term = 1 + p + p * p + p * p * p;
    for (unsigned t = 1; t < e; ++t) term *= p * p * p;
    total *= term;
  }
  return total;
}

Rational p3_constant(std::uint64_t n) {
  const std::uint64_t p3 = p3_size(n);
  return Rational(static_cast<std::int64_t>(p3), static_cast<std::int64_t>(n * n * n));
}

LevelArithmetic level_arithmetic(std::uint64_t n) {
  LevelArithmetic la;
  la.level = n;
  la.p3 = p3_size(n);
  la.factorization = factorize(n);
  la.n6_est = round_ratio(la.p3, 1, 96);
  la.n5_est = round_ratio(la.p3, 1, 10);
  la.n4_est = round_ratio(la.p3, 25, 72);
  return la;
}

int kronecker(std::int64_t a, std::uint64_t n) {
  if (n < 3 || n % 2 == 0 || !is_prime(n)) throw domain_error("Kronecker symbol needs an odd prime modulus");
  const auto nn = static_cast<std::int64_t>(n);
  std::uint64_t base = static_cast<std::uint64_t>(((a % nn) + nn) % nn);
  if (base == 0) return 0;
  std::uint64_t e = (n - 1) / 2, r = 1;
  while (e > 0) {
    if (e & 1) r = static_cast<std::uint64_t>((static_cast<unsigned __int128>(r) * base) % n);
    base = static_cast<std::uint64_t>((static_cast<unsigned __int128>(base) * base) % n);
    e >>= 1;
  }
  return r == 1 ? 1 : -1;
}

Rational dim_paramodular3_exact(std::uint64_t n) {
  if (!is_prime(n)) throw domain_error("paramodular dimension formula needs a prime level");
  if (n == 2 || n == 3) return Rational(0);
  if (n > 3'000'000) throw domain_error("level too large");
  const auto N = static_cast<std::int64_t>(n);
  const std::int64_t km1 = kronecker(-1, n);
  const std::int64_t km3 = kronecker(-3, n);
  const std::int64_t k2 = kronecker(2, n);
  Rational f(0), g(0);
  if (N % 5 == 2 || N % 5 == 3) f = Rational(2, 5);
  else if (N == 5) f = Rational(1, 5);
  if (N % 12 == 5) g = Rational(1, 6);
  return Rational(N * N - 1, 2880) + Rational((N + 1) * (1 - km1), 64) +
         Rational(5 * (N - 1) * (1 + km1), 192) + Rational((N + 1) * (1 - km3), 72) +
         Rational((N - 1) * (1 + km3), 36) + Rational(1 - k2, 8) + f + g - 1;
}

std::int64_t dim_paramodular3(std::uint64_t n) {
  const Rational d = dim_paramodular3_exact(n);
  if (d.denominator() != 1 || d.numerator() < 0)
    throw internal_error("paramodular dimension formula gave " + std::to_string(d.numerator()) + "/" +
                         std::to_string(d.denominator()) + " at N=" + std::to_string(n));
  return d.numerator();
}

std::int64_t dim_level1_cusp(std::int64_t k) {
  if (k < 12 || k % 2 != 0) return 0;
  const std::int64_t dim_mk = k / 12 + (k % 12 == 2 ? 0 : 1);
  return dim_mk - 1;
}

std::int64_t dim_jacobi_cusp3(std::uint64_t n) {
  if (n < 1) throw domain_error("Jacobi index must be positive");
  const auto m = static_cast<std::int64_t>(n);
  std::int64_t total = 0;
  for (std::int64_t j = 1; j <= m - 1; ++j) total += dim_level1_cusp(3 + 2 * j - 1) - (j * j) / (4 * m);
  if (total < 0)
    throw internal_error("Jacobi cusp form dimension came out negative at N=" + std::to_string(n));
  return total;
}

std::int64_t dim_paramodular3_nongritsenko(std::uint64_t n) {
  const std::int64_t d = dim_paramodular3(n) - dim_jacobi_cusp3(n);
  if (d < 0) throw internal_error("Gritsenko lifts exceed the paramodular space at N=" + std::to_string(n));
  return d;
}

// ---------------------------------------------------------------------------

GammaLinear operator+(const GammaLinear& a, const GammaLinear& b) {
  return {a.r + b.r, a.g + b.g, a.h + b.h};
}
GammaLinear operator-(const GammaLinear& a, const GammaLinear& b) {
  return {a.r - b.r, a.g - b.g, a.h - b.h};
}
GammaLinear operator-(const GammaLinear& a) { return {-a.r, -a.g, -a.h}; }
GammaLinear operator*(const GammaLinear& a, const GammaLinear& b) {
  if (a.is_rational()) return {a.r * b.r, a.r * b.g, a.r * b.h};
  if (b.is_rational()) return {b.r * a.r, b.r * a.g, b.r * a.h};
  throw domain_error("product of two gamma-dependent coefficients is not representable");
}

namespace {

std::string rat(const Rational& q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

using Poly = std::vector<GammaLinear>;

Poly multiply(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1);
  for (std::size_t x = 0; x < a.size(); ++x)
    for (std::size_t y = 0; y < b.size(); ++y) out[x + y] = out[x + y] + a[x] * b[y];
  return out;
}

GammaLinear ipow(std::uint64_t l, unsigned e) {
  std::int64_t r = 1;
  for (unsigned t = 0; t < e; ++t) r *= static_cast<std::int64_t>(l);
  return GammaLinear(r);
}

void require_prime_l(std::uint64_t l) {
  if (!is_prime(l)) throw domain_error("Hecke polynomials are indexed by a prime l");
  if (l > 1000) throw domain_error("l too large for exact 64-bit coefficients");
}

HeckePolynomial finish(const Poly& p, std::uint64_t l, HeckeFamily family) {
  if (p.size() > 5) throw internal_error("Hecke polynomial degree exceeds 4");
  HeckePolynomial h;
  h.l = l;
  h.family = family;
  for (std::size_t k = 0; k < p.size(); ++k) h.coeffs[k] = p[k];
  return h;
}

}  // namespace

std::string to_string(const GammaLinear& c) {
  if (c.is_rational()) return rat(c.r);
  std::string s = "(";
  bool first = true;
  const Rational zero(0), one(1);
  auto term = [&](const Rational& q, const char* sym) {
    if (q == zero) return;
    if (!first) s += q < zero ? " - " : " + ";
    else if (q < zero) s += "-";
    Rational mag = q < zero ? -q : q;
    if (*sym == '\0' || mag != one) s += rat(mag);
    s += sym;
    first = false;
  };
  term(c.r, "");
  term(c.g, "*gamma");
  term(c.h, "*gamma'");
  return s + ")";
}

std::string to_string(HeckeFamily family) {
  switch (family) {
    case HeckeFamily::GenericGL4: return "GL4";
    case HeckeFamily::IIa: return "IIa";
    case HeckeFamily::IIb: return "IIb";
    case HeckeFamily::IV: return "IV";
    case HeckeFamily::IIIa: return "IIIa";
    case HeckeFamily::IIIb: return "IIIb";
    case HeckeFamily::Spin: return "Spin";
  }
  return "?";
}

std::string to_string(const HeckePolynomial& poly) {
  std::string s;
  for (std::size_t k = 0; k < poly.coeffs.size(); ++k) {
    if (poly.coeffs[k] == GammaLinear()) continue;
    if (!s.empty()) s += " + ";
    s += to_string(poly.coeffs[k]);
    if (k >= 1) s += "*T";
    if (k >= 2) s += "^" + std::to_string(k);
  }
  return s.empty() ? "0" : s;
}

HeckePolynomial hecke_poly_gl4(std::uint64_t l, const std::array<Rational, 5>& a) {
  require_prime_l(l);
  if (a[0] != Rational(1)) throw domain_error("a(l,0) must be 1");
  Poly p(5);
  for (unsigned k = 0; k < 5; ++k) {
    GammaLinear c = ipow(l, k * (k - 1) / 2) * GammaLinear(a[k]);
    p[k] = k % 2 ? -c : c;
  }
  return finish(p, l, HeckeFamily::GenericGL4);
}

HeckePolynomial hecke_poly_family(HeckeFamily family, std::uint64_t l, const FamilyParams& params) {
  require_prime_l(l);
  const bool has_a = params.alpha.has_value(), has_b = params.beta.has_value();
  const bool has_g = params.gamma.has_value(), has_gc = params.gamma_conj.has_value();
  auto need = [&](bool a, bool b, bool g) {
    if (has_a != a || has_b != b || has_g != g || has_gc != g)
      throw domain_error("wrong parameters for Hecke family " + to_string(family));
  };
  const GammaLinear one(1);
  auto lin = [&](unsigned e) { return Poly{one, -ipow(l, e)}; };  // 1 - l^e T
  switch (family) {
    case HeckeFamily::IIa: {
      need(true, false, false);
      Poly quad{one, -*params.alpha, ipow(l, 1)};
      return finish(multiply(multiply(lin(2), lin(3)), quad), l, family);
    }
    case HeckeFamily::IIb: {
      need(true, false, false);
      Poly quad{one, -(ipow(l, 2) * *params.alpha), ipow(l, 5)};
      return finish(multiply(multiply(lin(0), lin(1)), quad), l, family);
    }
    case HeckeFamily::IV: {
      need(false, true, false);
      Poly quad{one, -*params.beta, ipow(l, 3)};
      return finish(multiply(multiply(lin(1), lin(2)), quad), l, family);
    }
    case HeckeFamily::IIIa: {
      need(false, false, true);
      Poly cubic{one, -*params.gamma, ipow(l, 1) * *params.gamma_conj, -ipow(l, 3)};
      return finish(multiply(lin(3), cubic), l, family);
    }
    case HeckeFamily::IIIb: {
      need(false, false, true);
      Poly cubic{one, -(ipow(l, 1) * *params.gamma), ipow(l, 3) * *params.gamma_conj, -ipow(l, 6)};
      return finish(multiply(lin(0), cubic), l, family);
    }
    case HeckeFamily::GenericGL4:
    case HeckeFamily::Spin:
      break;
  }
  throw domain_error("family " + to_string(family) + " has its own constructor");
}

HeckePolynomial hecke_poly_spin(std::uint64_t l, Rational delta_l, Rational delta_l2) {
  require_prime_l(l);
  const Rational L(static_cast<std::int64_t>(l));
  Poly p{GammaLinear(1), GammaLinear(-delta_l), GammaLinear(delta_l * delta_l - delta_l2 - L * L),
         GammaLinear(-delta_l * L * L * L), GammaLinear(L * L * L * L * L * L)};
  return finish(p, l, HeckeFamily::Spin);
}

// ---------------------------------------------------------------------------

std::int64_t predict_h5(const BettiRow& row) { return 2 * (row.s2 + row.sl3 + row.png) + row.s4_0; }

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<BettiRow> read_betti_csv(std::istream& in, const std::string& source) {
  std::vector<BettiRow> rows;
  std::string line;
  std::size_t no = 0;
  bool header = false;
  auto fail = [&](const std::string& what) {
    throw parse_error(source + ":" + std::to_string(no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(t);
    std::string cell;
    while (std::getline(ss, cell, ',')) fields.push_back(trim(cell));
    if (!t.empty() && t.back() == ',') fields.emplace_back();
    if (!header) {
      if (fields != std::vector<std::string>{"N", "s2", "s4_0", "sl3", "pnG", "h5"})
        fail("expected header \"N,s2,s4_0,sl3,pnG,h5\"");
      header = true;
      continue;
    }
    if (fields.size() != 6) fail("expected 6 fields, got " + std::to_string(fields.size()));
    std::int64_t v[6];
    for (int c = 0; c < 6; ++c) {
      const auto& f = fields[c];
      auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v[c]);
      if (ec != std::errc() || p != f.data() + f.size() || f.empty()) fail("field " + std::to_string(c + 1) + " is not an integer");
      if (v[c] < 0) fail("field " + std::to_string(c + 1) + " is negative");
    }
    if (v[0] < 2) fail("level must be at least 2");
    rows.push_back(BettiRow{static_cast<std::uint64_t>(v[0]), v[1], v[2], v[3], v[4], v[5]});
  }
  if (!header) {
    ++no;
    fail("missing header");
  }
  return rows;
}

std::vector<BettiRow> read_betti_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path.string());
  return read_betti_csv(in, path.string());
}

BettiReport check_table(const std::vector<BettiRow>& rows) {
  BettiReport report;
  for (const auto& row : rows) {
    BettiCheck c;
    c.row = row;
    c.predicted = predict_h5(row);
    c.ok = c.predicted == row.h5;
    if (!c.ok) ++report.mismatches;
    if (is_prime(row.level)) {
      c.png_formula = dim_paramodular3_nongritsenko(row.level);
      if (*c.png_formula != row.png) ++report.png_mismatches;
    }
    report.rows.push_back(c);
  }
  return report;
}

}  // namespace snfp
