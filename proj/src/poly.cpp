#include "stablecat/poly.hpp"

#include "stablecat/error.hpp"

#include <algorithm>
#include <random>

namespace stablecat {

Poly::Poly(Field f, std::vector<elem_t> coeffs) : field_(f), c_(std::move(coeffs)) { trim(); }

void Poly::trim()
{
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Poly Poly::monomial(Field f, std::size_t degree, elem_t coeff)
{
    std::vector<elem_t> c(degree + 1, 0);
    c[degree] = coeff;
    return Poly(f, std::move(c));
}

Poly Poly::monic() const
{
    if (c_.empty()) return *this;
    elem_t iv = field_.inv(lead());
    std::vector<elem_t> c = c_;
    for (auto &v : c) v = field_.mul(v, iv);
    return Poly(field_, std::move(c));
}

Poly Poly::operator+(const Poly &o) const
{
    std::vector<elem_t> c(std::max(c_.size(), o.c_.size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = field_.add(i < c_.size() ? c_[i] : 0, i < o.c_.size() ? o.c_[i] : 0);
    return Poly(field_, std::move(c));
}

Poly Poly::operator-(const Poly &o) const
{
    std::vector<elem_t> c(std::max(c_.size(), o.c_.size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = field_.sub(i < c_.size() ? c_[i] : 0, i < o.c_.size() ? o.c_[i] : 0);
    return Poly(field_, std::move(c));
}

Poly Poly::operator*(const Poly &o) const
{
    if (c_.empty() || o.c_.empty()) return Poly(field_);
    std::vector<elem_t> c(c_.size() + o.c_.size() - 1, 0);
    for (std::size_t i = 0; i < c_.size(); ++i)
        for (std::size_t j = 0; j < o.c_.size(); ++j) c[i + j] = field_.add(c[i + j], field_.mul(c_[i], o.c_[j]));
    return Poly(field_, std::move(c));
}

std::pair<Poly, Poly> Poly::divmod(const Poly &d) const
{
    if (d.is_zero()) throw contract_error("polynomial division by zero");
    std::vector<elem_t> r = c_;
    if (r.size() < d.c_.size()) return {Poly(field_), *this};
    std::vector<elem_t> q(r.size() - d.c_.size() + 1, 0);
    elem_t iv = field_.inv(d.lead());
    for (std::size_t k = q.size(); k-- > 0;) {
        elem_t coef = field_.mul(r[k + d.c_.size() - 1], iv);
        q[k] = coef;
        if (!coef) continue;
        for (std::size_t j = 0; j < d.c_.size(); ++j) r[k + j] = field_.sub(r[k + j], field_.mul(coef, d.c_[j]));
    }
    return {Poly(field_, std::move(q)), Poly(field_, std::move(r))};
}

Poly Poly::derivative() const
{
    if (c_.size() <= 1) return Poly(field_);
    std::vector<elem_t> c(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) c[i - 1] = field_.mul(c_[i], field_.reduce(static_cast<std::int64_t>(i)));
    return Poly(field_, std::move(c));
}

Poly gcd(Poly a, Poly b)
{
    while (!b.is_zero()) {
        Poly r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

Poly powmod(const Poly &base, std::uint64_t e, const Poly &m)
{
    Poly result = Poly(base.field(), {1}) % m;
    Poly b = base % m;
    while (e) {
        if (e & 1) result = (result * b) % m;
        b = (b * b) % m;
        e >>= 1;
    }
    return result;
}

namespace {

// x^(p^k) mod m, computed by k repeated p-th powers.
Poly frobenius_power(const Poly &m, unsigned k)
{
    const Field &f = m.field();
    Poly x = Poly::monomial(f, 1) % m;
    for (unsigned i = 0; i < k; ++i) x = powmod(x, f.characteristic(), m);
    return x;
}

/// p-th root of a polynomial whose derivative vanishes.
Poly pth_root(const Poly &g)
{
    const Field &f = g.field();
    const auto p = f.characteristic();
    std::vector<elem_t> c;
    for (std::size_t i = 0; i < g.coeffs().size(); i += p) c.push_back(g.coeffs()[i]);
    // Over F_p every element is its own p-th root.
    return Poly(f, std::move(c));
}

void square_free(const Poly &f, unsigned mult, std::vector<std::pair<Poly, unsigned>> &out)
{
    // Yun-style decomposition adapted to characteristic p.
    if (f.degree() <= 0) return;
    Poly d = f.derivative();
    if (d.is_zero()) {
        square_free(pth_root(f), mult * f.field().characteristic(), out);
        return;
    }
    Poly c = gcd(f, d);
    Poly w = f.divmod(c).first;
    unsigned i = 1;
    while (w.degree() > 0) {
        Poly y = gcd(w, c);
        Poly z = w.divmod(y).first;
        if (z.degree() > 0) out.emplace_back(z.monic(), i * mult);
        ++i;
        w = y;
        c = c.divmod(y).first;
    }
    if (c.degree() > 0) square_free(pth_root(c), mult * f.field().characteristic(), out);
}

void equal_degree(const Poly &f, unsigned d, std::mt19937_64 &gen, std::vector<Poly> &out)
{
    if (f.degree() <= 0) return;
    if (static_cast<unsigned>(f.degree()) == d) {
        out.push_back(f.monic());
        return;
    }
    const Field &field = f.field();
    const auto p = field.characteristic();
    for (;;) {
        std::vector<elem_t> rc(f.degree());
        for (auto &v : rc) v = static_cast<elem_t>(gen() % p);
        Poly a(field, rc);
        if (a.degree() <= 0) continue;
        Poly g = gcd(a, f);
        if (g.degree() > 0 && g.degree() < f.degree()) {
            equal_degree(g, d, gen, out);
            equal_degree(f.divmod(g).first, d, gen, out);
            return;
        }
        Poly b(field);
        if (p == 2) {
            // Trace map a + a^2 + ... + a^(2^(d-1)).
            Poly t = a % f;
            b = t;
            for (unsigned i = 1; i < d; ++i) {
                t = (t * t) % f;
                b = b + t;
            }
        } else {
            // a^((p^d - 1)/2) = (a^(1 + p + ... + p^(d-1)))^((p-1)/2)
            Poly t = a % f;
            Poly acc = t;
            for (unsigned i = 1; i < d; ++i) {
                t = powmod(t, p, f);
                acc = (acc * t) % f;
            }
            b = powmod(acc, (p - 1) / 2, f) - Poly(field, {1});
        }
        g = gcd(b, f);
        if (g.degree() > 0 && g.degree() < f.degree()) {
            equal_degree(g, d, gen, out);
            equal_degree(f.divmod(g).first, d, gen, out);
            return;
        }
    }
}

bool poly_less(const Poly &a, const Poly &b)
{
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return std::lexicographical_compare(a.coeffs().rbegin(), a.coeffs().rend(), b.coeffs().rbegin(), b.coeffs().rend());
}

}

std::vector<std::pair<Poly, unsigned>> factor(const Poly &f, std::uint64_t seed)
{
    if (f.is_zero()) throw contract_error("cannot factor the zero polynomial");
    std::mt19937_64 gen(seed);
    std::vector<std::pair<Poly, unsigned>> sf;
    square_free(f.monic(), 1, sf);
    std::vector<std::pair<Poly, unsigned>> out;
    for (auto &[g, mult] : sf) {
        // Distinct-degree split.
        Poly rest = g;
        for (unsigned d = 1; rest.degree() >= static_cast<int>(2 * d); ++d) {
            Poly xq = frobenius_power(rest, d);
            Poly part = gcd(xq - Poly::monomial(f.field(), 1), rest);
            if (part.degree() > 0) {
                std::vector<Poly> pieces;
                equal_degree(part, d, gen, pieces);
                for (auto &q : pieces) out.emplace_back(q, mult);
                rest = rest.divmod(part).first;
            }
        }
        if (rest.degree() > 0) out.emplace_back(rest.monic(), mult);
    }
    // Merge equal factors coming from different square-free layers.
    std::sort(out.begin(), out.end(), [](auto &a, auto &b) { return poly_less(a.first, b.first); });
    std::vector<std::pair<Poly, unsigned>> merged;
    for (auto &e : out) {
        if (!merged.empty() && merged.back().first == e.first)
            merged.back().second += e.second;
        else
            merged.push_back(e);
    }
    return merged;
}

Matrix evaluate(const Poly &q, const Matrix &m)
{
    const Field &f = m.field();
    Matrix r(f, m.rows(), m.cols());
    // Horner.
    for (std::size_t k = q.coeffs().size(); k-- > 0;) {
        r = r * m;
        for (std::size_t i = 0; i < m.rows(); ++i) r(i, i) = f.add(r(i, i), q.coeffs()[k]);
    }
    return r;
}

Poly minimal_polynomial(const Matrix &m)
{
    const Field &f = m.field();
    const std::size_t n = m.rows();
    if (n != m.cols()) throw contract_error("minimal polynomial of non-square matrix");
    std::vector<std::vector<elem_t>> powers;
    Matrix cur = Matrix::identity(f, n);
    for (std::size_t k = 0; k <= n; ++k) {
        powers.push_back(cur.flatten());
        Matrix basis = Matrix::from_columns(f, n * n, powers);
        auto r = rref_full(basis);
        if (r.rank < powers.size()) {
            // The newest power depends on the earlier ones.
            auto col = r.kernel_basis.column(0);
            elem_t lead = col.back();
            std::vector<elem_t> c(col.size());
            for (std::size_t i = 0; i < col.size(); ++i) c[i] = f.mul(col[i], f.inv(lead));
            return Poly(f, std::move(c));
        }
        cur = cur * m;
    }
    throw consistency_error("minimal polynomial degree exceeds matrix size");
}

}
