#include "hrtlab/relations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include <json.hpp>

#include "hrtlab/error.hpp"

namespace hrtlab {

namespace detail {

namespace {

using Matrix = std::vector<std::vector<long double>>;

long double dot(const std::vector<long double>& a, const std::vector<long double>& b) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void gram_schmidt(const Matrix& b, Matrix& bstar, Matrix& mu, std::vector<long double>& norms) {
  const std::size_t n = b.size();
  bstar = b;
  mu.assign(n, std::vector<long double>(n, 0.0L));
  norms.assign(n, 0.0L);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      mu[i][j] = norms[j] > 0.0L ? dot(b[i], bstar[j]) / norms[j] : 0.0L;
      for (std::size_t k = 0; k < b[i].size(); ++k) bstar[i][k] -= mu[i][j] * bstar[j][k];
    }
    norms[i] = dot(bstar[i], bstar[i]);
  }
}

}  // namespace

void lll_reduce(std::vector<std::vector<long double>>& basis, long double delta) {
  const std::size_t n = basis.size();
  if (n < 2) return;
  Matrix bstar, mu;
  std::vector<long double> norms;
  gram_schmidt(basis, bstar, mu, norms);
  std::size_t k = 1;
  std::size_t guard = 0;
  while (k < n) {
    if (++guard > 100000) throw Error(ErrorKind::PrecisionExhausted, "lattice reduction did not converge");
    for (std::size_t jj = k; jj-- > 0;) {
      const long double r = std::nearbyint(mu[k][jj]);
      if (r != 0.0L) {
        for (std::size_t c = 0; c < basis[k].size(); ++c) basis[k][c] -= r * basis[jj][c];
        for (std::size_t c = 0; c <= jj; ++c) mu[k][c] -= r * (c == jj ? 1.0L : mu[jj][c]);
      }
    }
    if (norms[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * norms[k - 1]) {
      ++k;
    } else {
      std::swap(basis[k], basis[k - 1]);
      gram_schmidt(basis, bstar, mu, norms);
      k = std::max<std::size_t>(k - 1, 1);
    }
  }
}

}  // namespace detail

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool all_exact(std::span<const Real> values) {
  return std::all_of(values.begin(), values.end(), [](const Real& v) { return v.is_exact(); });
}

struct LatticeCandidate {
  std::vector<std::int64_t> coefficients;
  long double combination = 0.0L;  // sum q_i v_i
};

struct LatticeResult {
  std::vector<LatticeCandidate> candidates;  // reduced rows, shortest first
  double minGsNorm = kInf;
};

// Reduces rows [e_i | round(C v_i)] and returns the coefficient parts.
LatticeResult reduce_relation_lattice(std::span<const long double> v, double tol) {
  const std::size_t n = v.size();
  const long double C = 1.0L / static_cast<long double>(tol);
  std::vector<std::vector<long double>> rows(n, std::vector<long double>(n + 1, 0.0L));
  for (std::size_t i = 0; i < n; ++i) {
    rows[i][i] = 1.0L;
    rows[i][n] = std::nearbyint(C * v[i]);
  }
  detail::lll_reduce(rows);

  LatticeResult out;
  std::vector<std::vector<long double>> bstar, mu;
  std::vector<long double> norms;
  // Recompute Gram-Schmidt norms for the certificate.
  {
    bstar = rows;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        long double num = 0.0L, den = 0.0L;
        for (std::size_t c = 0; c <= n; ++c) {
          num += rows[i][c] * bstar[j][c];
          den += bstar[j][c] * bstar[j][c];
        }
        const long double m = den > 0.0L ? num / den : 0.0L;
        for (std::size_t c = 0; c <= n; ++c) bstar[i][c] -= m * bstar[j][c];
      }
      long double nn = 0.0L;
      for (std::size_t c = 0; c <= n; ++c) nn += bstar[i][c] * bstar[i][c];
      out.minGsNorm = std::min(out.minGsNorm, static_cast<double>(std::sqrt(nn)));
    }
  }
  std::vector<std::pair<long double, std::size_t>> order;
  for (std::size_t i = 0; i < n; ++i) {
    long double nn = 0.0L;
    for (std::size_t c = 0; c <= n; ++c) nn += rows[i][c] * rows[i][c];
    order.emplace_back(nn, i);
  }
  std::sort(order.begin(), order.end());
  for (const auto& [nn, i] : order) {
    LatticeCandidate cand;
    bool fits = true;
    for (std::size_t c = 0; c < n; ++c) {
      if (std::fabs(rows[i][c]) > 9.0e18L) fits = false;
    }
    if (!fits) continue;
    for (std::size_t c = 0; c < n; ++c) cand.coefficients.push_back(static_cast<std::int64_t>(rows[i][c]));
    for (std::size_t c = 0; c < n; ++c) cand.combination += static_cast<long double>(cand.coefficients[c]) * v[c];
    out.candidates.push_back(std::move(cand));
  }
  return out;
}

// Coordinates of an exact value over {1, sqrt r_1, sqrt r_2, ...}: key 1
// carries the rational part.
std::map<std::int64_t, Rational> coordinates(const QuadSurd& x) {
  std::map<std::int64_t, Rational> c;
  if (!x.rational_part().is_zero()) c[1] = x.rational_part();
  if (!x.surd_coefficient().is_zero()) c[x.radicand()] = x.surd_coefficient();
  return c;
}

// Integer vector in the rational null space of the columns given by `vectors`
// (each a sparse coordinate map), or nullopt when they are independent.
std::optional<std::vector<std::int64_t>> exact_null_vector(const std::vector<std::map<std::int64_t, Rational>>& vectors) {
  std::vector<std::int64_t> keys;
  for (const auto& v : vectors)
    for (const auto& [k, _] : v) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  const std::size_t rowsN = keys.size();
  const std::size_t colsN = vectors.size();
  std::vector<std::vector<Rational>> m(rowsN, std::vector<Rational>(colsN));
  for (std::size_t c = 0; c < colsN; ++c) {
    for (const auto& [k, val] : vectors[c]) {
      auto r = static_cast<std::size_t>(std::lower_bound(keys.begin(), keys.end(), k) - keys.begin());
      m[r][c] = val;
    }
  }
  // Reduced row echelon form.
  std::vector<std::size_t> pivotCols;
  std::size_t row = 0;
  for (std::size_t c = 0; c < colsN && row < rowsN; ++c) {
    std::size_t piv = row;
    while (piv < rowsN && m[piv][c].is_zero()) ++piv;
    if (piv == rowsN) continue;
    std::swap(m[piv], m[row]);
    const Rational inv = Rational(1) / m[row][c];
    for (auto& x : m[row]) x *= inv;
    for (std::size_t r = 0; r < rowsN; ++r) {
      if (r == row || m[r][c].is_zero()) continue;
      const Rational f = m[r][c];
      for (std::size_t cc = 0; cc < colsN; ++cc) m[r][cc] -= f * m[row][cc];
    }
    pivotCols.push_back(c);
    ++row;
  }
  std::size_t freeCol = colsN;
  for (std::size_t c = 0; c < colsN; ++c) {
    if (std::find(pivotCols.begin(), pivotCols.end(), c) == pivotCols.end()) {
      freeCol = c;
      break;
    }
  }
  if (freeCol == colsN) return std::nullopt;
  std::vector<Rational> sol(colsN);
  sol[freeCol] = Rational(1);
  for (std::size_t r = 0; r < pivotCols.size(); ++r) sol[pivotCols[r]] = -m[r][freeCol];
  std::int64_t L = 1;
  for (const auto& s : sol) L = checked_lcm(L, s.den());
  std::vector<std::int64_t> out;
  std::int64_t g = 0;
  for (const auto& s : sol) {
    const Rational scaled = s * Rational(L);
    out.push_back(scaled.num());
    g = std::gcd(g, scaled.num());
  }
  if (g > 1)
    for (auto& x : out) x /= g;
  return out;
}

long double value_ld(const Real& r) { return r.is_exact() ? r.exact()->to_long_double() : r.value(); }

}  // namespace

IndependenceCertificate is_rationally_independent(std::span<const Real> values, std::int64_t maxDen, double tol) {
  if (values.empty()) throw Error(ErrorKind::InvalidArgument, "independence test needs at least one value");
  if (maxDen < 1) throw Error(ErrorKind::InvalidArgument, "maxDen must be >= 1");
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  IndependenceCertificate cert;
  cert.searchedBound = maxDen;

  if (all_exact(values)) {
    cert.exact = true;
    std::vector<std::map<std::int64_t, Rational>> vecs;
    for (const auto& v : values) vecs.push_back(coordinates(*v.exact()));
    if (auto null = exact_null_vector(vecs)) {
      cert.independent = false;
      cert.relation = IntegerRelation{*null, 0.0};
      cert.normLowerBound = 0.0;
    } else {
      cert.normLowerBound = kInf;
    }
    return cert;
  }

  std::vector<long double> v;
  for (const auto& r : values) v.push_back(value_ld(r));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0.0L) {
      std::vector<std::int64_t> q(v.size(), 0);
      q[i] = 1;
      cert.independent = false;
      cert.relation = IntegerRelation{q, 0.0};
      return cert;
    }
  }
  if (v.size() == 1) {
    cert.normLowerBound = kInf;
    return cert;
  }

  const auto lattice = reduce_relation_lattice(v, tol);
  cert.normLowerBound = lattice.minGsNorm;
  bool nearMiss = false;
  for (const auto& cand : lattice.candidates) {
    std::int64_t maxAbs = 0;
    for (auto c : cand.coefficients) maxAbs = std::max<std::int64_t>(maxAbs, c < 0 ? -c : c);
    if (maxAbs == 0 || maxAbs > maxDen) continue;
    const double residual = static_cast<double>(std::fabs(cand.combination) / static_cast<long double>(maxAbs));
    if (residual <= tol) {
      cert.independent = false;
      cert.relation = IntegerRelation{cand.coefficients, residual};
      return cert;
    }
    if (residual <= 10.0 * tol) nearMiss = true;
  }
  if (nearMiss) {
    throw Error(ErrorKind::PrecisionExhausted,
                "a bounded integer relation holds to 10*tol but not to tol; inputs are too imprecise to decide");
  }
  return cert;
}

RelationBasis detect_relations(std::span<const Real> values, std::int64_t maxDen, double tol) {
  if (values.empty()) throw Error(ErrorKind::InvalidArgument, "relation detection needs at least one value");
  if (maxDen < 1) throw Error(ErrorKind::InvalidArgument, "maxDen must be >= 1");
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  RelationBasis rb;
  rb.count = values.size();

  if (all_exact(values)) {
    rb.exact = true;
    // Distinct square-free radicands are linearly independent over Q together
    // with 1, so each basis element owns one radicand.
    std::map<std::int64_t, std::size_t> owner;  // radicand -> basis position
    for (std::size_t j = 0; j < values.size(); ++j) {
      const QuadSurd& x = *values[j].exact();
      if (x.is_rational()) {
        rb.relations.push_back(Relation{j, x.rational_part(), std::vector<Rational>(rb.basisIndices.size()), 0.0});
        continue;
      }
      auto it = owner.find(x.radicand());
      if (it == owner.end()) {
        owner[x.radicand()] = rb.basisIndices.size();
        for (auto& rel : rb.relations) rel.d.push_back(Rational(0));
        rb.basisIndices.push_back(j);
        continue;
      }
      const QuadSurd& base = *values[rb.basisIndices[it->second]].exact();
      const Rational d = x.surd_coefficient() / base.surd_coefficient();
      Relation rel{j, x.rational_part() - d * base.rational_part(), std::vector<Rational>(rb.basisIndices.size()),
                   0.0};
      rel.d[it->second] = d;
      rb.relations.push_back(std::move(rel));
    }
  } else {
    for (std::size_t j = 0; j < values.size(); ++j) {
      std::vector<long double> v{1.0L};
      for (auto b : rb.basisIndices) v.push_back(value_ld(values[b]));
      const long double xj = value_ld(values[j]);
      v.push_back(xj);
      const auto lattice = reduce_relation_lattice(v, tol);

      std::optional<Relation> accepted;
      bool nearMiss = false;
      for (const auto& cand : lattice.candidates) {
        const std::int64_t qj = cand.coefficients.back();
        if (qj == 0) continue;
        // x_j = -q_0/q_j - sum_l (q_l / q_j) x_l
        Relation rel{j, Rational(-cand.coefficients[0], qj), {}, 0.0};
        bool bounded = rel.u.den() <= maxDen;
        for (std::size_t l = 0; l < rb.basisIndices.size(); ++l) {
          rel.d.push_back(Rational(-cand.coefficients[l + 1], qj));
          bounded = bounded && rel.d.back().den() <= maxDen;
        }
        if (!bounded) continue;
        long double rhs = rel.u.to_long_double();
        long double scale = std::max<long double>({1.0L, std::fabs(xj), std::fabs(rhs)});
        for (std::size_t l = 0; l < rel.d.size(); ++l) {
          const long double term = rel.d[l].to_long_double() * v[l + 1];
          rhs += term;
          scale = std::max(scale, std::fabs(term));
        }
        const long double err = std::fabs(xj - rhs);
        rel.residual = static_cast<double>(err);
        if (err <= static_cast<long double>(tol) * scale) {
          accepted = std::move(rel);
          break;
        }
        if (err <= static_cast<long double>(10.0 * tol) * scale) nearMiss = true;
      }
      if (accepted) {
        rb.relations.push_back(std::move(*accepted));
      } else if (nearMiss) {
        throw Error(ErrorKind::PrecisionExhausted,
                    "value " + std::to_string(j) + " nearly satisfies a bounded relation; cannot decide at tol");
      } else {
        for (auto& rel : rb.relations) rel.d.push_back(Rational(0));
        rb.basisIndices.push_back(j);
      }
    }
  }

  for (const auto& rel : rb.relations) {
    rb.L = checked_lcm(rb.L, rel.u.den());
    for (const auto& d : rel.d) rb.L = checked_lcm(rb.L, d.den());
  }
  return rb;
}

bool relations_hold_exactly(const RelationBasis& rb, std::span<const Real> values) {
  if (!all_exact(values)) return false;
  for (const auto& rel : rb.relations) {
    std::optional<QuadSurd> acc = QuadSurd(rel.u);
    for (std::size_t l = 0; l < rel.d.size() && acc; ++l) {
      auto term = mul(QuadSurd(rel.d[l]), *values[rb.basisIndices[l]].exact());
      acc = term ? add(*acc, *term) : std::nullopt;
    }
    if (!acc || !(*acc == *values[rel.j].exact())) return false;
  }
  return true;
}

GroupClosureDescriptor group_closure(const RelationBasis& rb) {
  GroupClosureDescriptor g;
  const std::size_t m = rb.basisIndices.size();
  g.torusDimension = m;
  g.componentCount = rb.L;
  g.exponentsPerQL.assign(rb.count, std::vector<Rational>(m, Rational(0)));
  for (std::size_t l = 0; l < m; ++l) g.exponentsPerQL[rb.basisIndices[l]][l] = Rational(1);
  for (const auto& rel : rb.relations) g.exponentsPerQL[rel.j] = rel.d;
  for (const auto& row : g.exponentsPerQL) {
    std::vector<std::int64_t> ints;
    for (const auto& d : row) {
      const Rational scaled = d * Rational(rb.L);
      if (!scaled.is_integer()) throw Error(ErrorKind::InvalidArgument, "L does not clear the exponent denominators");
      ints.push_back(scaled.num());
    }
    g.exponentsOfAL.push_back(std::move(ints));
  }
  return g;
}

std::string relation_basis_to_json(const RelationBasis& rb) {
  nlohmann::ordered_json j;
  j["count"] = rb.count;
  j["basis"] = rb.basisIndices;
  j["exact"] = rb.exact;
  auto rels = nlohmann::ordered_json::array();
  for (const auto& rel : rb.relations) {
    nlohmann::ordered_json r;
    r["j"] = rel.j;
    r["u"] = rel.u.str();
    auto d = nlohmann::ordered_json::array();
    for (const auto& x : rel.d) d.push_back(x.str());
    r["d"] = d;
    r["residual"] = rel.residual;
    rels.push_back(r);
  }
  j["relations"] = rels;
  j["L"] = rb.L;
  return j.dump(2);
}

}  // namespace hrtlab
