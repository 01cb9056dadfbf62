#include "stablecat/algebra.hpp"

#include "stablecat/error.hpp"

#include <sstream>

namespace stablecat {

namespace {

std::string triple(std::size_t i, std::size_t j, std::size_t k)
{
    std::ostringstream os;
    os << "(" << i << "," << j << "," << k << ")";
    return os.str();
}

Matrix span_of_vectors(Field f, std::size_t n, const std::vector<std::vector<elem_t>> &vs)
{
    if (vs.empty()) return Matrix(f, n, 0);
    return column_space(Matrix::from_columns(f, n, vs));
}

}

Algebra::Algebra(std::string name, Field f, std::vector<std::vector<std::vector<elem_t>>> sc, std::vector<elem_t> unit)
    : name_(std::move(name)), field_(f), dim_(unit.size()), c_(std::move(sc)), unit_(std::move(unit))
{
    if (c_.size() != dim_) throw contract_error("algebra '" + name_ + "': structure constants must be dim x dim x dim");
    for (auto &row : c_) {
        if (row.size() != dim_) throw contract_error("algebra '" + name_ + "': structure constants must be dim x dim x dim");
        for (auto &v : row) {
            if (v.size() != dim_)
                throw contract_error("algebra '" + name_ + "': structure constants must be dim x dim x dim");
            for (auto &e : v) e = field_.reduce(e);
        }
    }
    for (auto &e : unit_) e = field_.reduce(e);
    for (std::size_t i = 0; i < dim_; ++i) {
        Matrix l(field_, dim_, dim_);
        for (std::size_t j = 0; j < dim_; ++j)
            for (std::size_t k = 0; k < dim_; ++k) l(k, j) = c_[i][j][k];
        left_mult_.push_back(std::move(l));
    }

    // Greedy generating set: add basis elements outside the subalgebra generated so far.
    auto closure = [&](const std::vector<std::size_t> &gens) {
        std::vector<std::vector<elem_t>> vs{unit_};
        for (auto g : gens) {
            std::vector<elem_t> e(dim_, 0);
            e[g] = 1;
            vs.push_back(e);
        }
        Matrix span = span_of_vectors(field_, dim_, vs);
        for (;;) {
            std::vector<std::vector<elem_t>> grown;
            for (std::size_t c = 0; c < span.cols(); ++c) grown.push_back(span.column(c));
            for (std::size_t c = 0; c < span.cols(); ++c)
                for (auto g : gens) grown.push_back((left_mult_[g] * span.block(0, c, dim_, 1)).column(0));
            Matrix next = span_of_vectors(field_, dim_, grown);
            if (next.cols() == span.cols()) return span;
            span = next;
        }
    };
    Matrix sub = closure(generators_);
    for (std::size_t i = 0; i < dim_ && sub.cols() < dim_; ++i) {
        Matrix probe = sub.hstack([&] {
            Matrix e(field_, dim_, 1);
            e(i, 0) = 1;
            return e;
        }());
        if (rank(probe) > sub.cols()) {
            generators_.push_back(i);
            sub = closure(generators_);
        }
    }
}

Algebra Algebra::truncated_polynomial(std::string name, Field f, std::size_t n)
{
    std::vector<std::vector<std::vector<elem_t>>> c(n, std::vector<std::vector<elem_t>>(n, std::vector<elem_t>(n, 0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i + j < n) c[i][j][i + j] = 1;
    std::vector<elem_t> unit(n, 0);
    if (n) unit[0] = 1;
    return Algebra(std::move(name), f, std::move(c), std::move(unit));
}

Matrix Algebra::right_mult(std::size_t i) const
{
    Matrix r(field_, dim_, dim_);
    for (std::size_t j = 0; j < dim_; ++j)
        for (std::size_t k = 0; k < dim_; ++k) r(k, j) = c_[j][i][k];
    return r;
}

std::vector<elem_t> Algebra::multiply(const std::vector<elem_t> &a, const std::vector<elem_t> &b) const
{
    std::vector<elem_t> r(dim_, 0);
    for (std::size_t i = 0; i < dim_; ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < dim_; ++j) {
            if (!b[j]) continue;
            elem_t ab = field_.mul(a[i], b[j]);
            for (std::size_t k = 0; k < dim_; ++k) r[k] = field_.add(r[k], field_.mul(ab, c_[i][j][k]));
        }
    }
    return r;
}

Diagnostic Algebra::validate() const
{
    auto basis = [&](std::size_t i) {
        std::vector<elem_t> e(dim_, 0);
        e[i] = 1;
        return e;
    };
    for (std::size_t i = 0; i < dim_; ++i) {
        if (multiply(unit_, basis(i)) != basis(i))
            return Diagnostic::fail("algebra '" + name_ + "': left unit law fails at basis element " + std::to_string(i));
        if (multiply(basis(i), unit_) != basis(i))
            return Diagnostic::fail("algebra '" + name_ + "': right unit law fails at basis element " + std::to_string(i));
    }
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j)
            for (std::size_t k = 0; k < dim_; ++k)
                if (multiply(multiply(basis(i), basis(j)), basis(k)) != multiply(basis(i), multiply(basis(j), basis(k))))
                    return Diagnostic::fail("algebra '" + name_ + "': associativity fails at " + triple(i, j, k));
    return Diagnostic::pass();
}

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v)
{
    h ^= v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    return h;
}

}

Module::Module(AlgebraPtr a, std::size_t dim, std::vector<Matrix> action, std::string name)
    : algebra_(std::move(a)), dim_(dim), action_(std::move(action)), name_(std::move(name))
{
    if (!algebra_) throw contract_error("module without algebra");
    if (action_.size() != algebra_->dim())
        throw contract_error("module '" + name_ + "': need one action matrix per algebra basis element");
    for (auto &m : action_)
        if (m.rows() != dim_ || m.cols() != dim_ || !(m.field() == algebra_->field()))
            throw contract_error("module '" + name_ + "': action matrices must be " + std::to_string(dim_) + "x" +
                                 std::to_string(dim_));
    std::uint64_t h = mix(reinterpret_cast<std::uintptr_t>(algebra_.get()), dim_);
    for (auto &m : action_)
        for (auto v : m.entries()) h = mix(h, v);
    fingerprint_ = h;
}

Module Module::zero(AlgebraPtr a)
{
    std::vector<Matrix> act(a->dim(), Matrix(a->field(), 0, 0));
    return Module(a, 0, std::move(act), "0");
}

Module Module::regular(AlgebraPtr a, std::string name)
{
    std::vector<Matrix> act;
    for (std::size_t i = 0; i < a->dim(); ++i) act.push_back(a->left_mult(i));
    std::size_t n = a->dim();
    return Module(std::move(a), n, std::move(act), std::move(name));
}

Module Module::dual_regular(AlgebraPtr a, std::string name)
{
    std::vector<Matrix> act;
    for (std::size_t i = 0; i < a->dim(); ++i) act.push_back(a->right_mult(i).transpose());
    std::size_t n = a->dim();
    return Module(std::move(a), n, std::move(act), std::move(name));
}

Module Module::renamed(std::string n) const
{
    Module m = *this;
    m.name_ = std::move(n);
    return m;
}

bool Module::same_as(const Module &o) const
{
    if (algebra_ != o.algebra_ || dim_ != o.dim_ || fingerprint_ != o.fingerprint_) return false;
    for (std::size_t i = 0; i < action_.size(); ++i)
        if (!(action_[i] == o.action_[i])) return false;
    return true;
}

Diagnostic Module::validate() const
{
    const Algebra &a = *algebra_;
    const Field &f = a.field();
    Matrix u(f, dim_, dim_);
    for (std::size_t i = 0; i < a.dim(); ++i) u += action_[i].scaled(a.unit()[i]);
    if (!u.is_identity()) return Diagnostic::fail("module '" + name_ + "': unit does not act as the identity");
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) {
            Matrix rhs(f, dim_, dim_);
            for (std::size_t k = 0; k < a.dim(); ++k)
                if (a.constant(i, j, k)) rhs += action_[k].scaled(a.constant(i, j, k));
            if (!(action_[i] * action_[j] == rhs))
                return Diagnostic::fail("module '" + name_ + "': action does not respect the product b_" +
                                        std::to_string(i) + " * b_" + std::to_string(j));
        }
    return Diagnostic::pass();
}

bool is_intertwiner(const Module &src, const Module &tgt, const Matrix &m)
{
    if (src.algebra() != tgt.algebra() || m.rows() != tgt.dim() || m.cols() != src.dim()) return false;
    for (auto g : src.algebra()->generators())
        if (!(m * src.action(g) == tgt.action(g) * m)) return false;
    return true;
}

Diagnostic ModuleMorphism::validate() const
{
    if (source.algebra() != target.algebra()) return Diagnostic::fail("morphism between modules over different algebras");
    if (matrix.rows() != target.dim() || matrix.cols() != source.dim())
        return Diagnostic::fail("morphism matrix has wrong shape");
    for (std::size_t i = 0; i < source.algebra()->dim(); ++i)
        if (!(matrix * source.action(i) == target.action(i) * matrix))
            return Diagnostic::fail("morphism does not intertwine the action of b_" + std::to_string(i));
    return Diagnostic::pass();
}

Matrix HomSpace::combination(const std::vector<elem_t> &coeffs) const
{
    const Field &f = source.field();
    Matrix r(f, target.dim(), source.dim());
    for (std::size_t k = 0; k < basis.size() && k < coeffs.size(); ++k)
        if (coeffs[k]) r += basis[k].scaled(coeffs[k]);
    return r;
}

HomSpace hom_space(const Module &m, const Module &n)
{
    if (m.algebra() != n.algebra()) throw contract_error("hom_space: modules over different algebras");
    const Field &f = m.field();
    const std::size_t dm = m.dim(), dn = n.dim();
    const auto &gens = m.algebra()->generators();
    HomSpace hs{m, n, {}};
    if (dm == 0 || dn == 0) return hs;
    // Unknown X (dn x dm), index i*dm + j.  Equation X rho_m(g) - rho_n(g) X = 0.
    Matrix sys(f, gens.size() * dn * dm, dn * dm);
    std::size_t row = 0;
    for (auto g : gens) {
        const Matrix &rm = m.action(g);
        const Matrix &rn = n.action(g);
        for (std::size_t i = 0; i < dn; ++i)
            for (std::size_t j = 0; j < dm; ++j, ++row) {
                for (std::size_t k = 0; k < dm; ++k)
                    if (rm(k, j)) sys(row, i * dm + k) = f.add(sys(row, i * dm + k), rm(k, j));
                for (std::size_t k = 0; k < dn; ++k)
                    if (rn(i, k)) sys(row, k * dm + j) = f.sub(sys(row, k * dm + j), rn(i, k));
            }
    }
    auto r = rref_full(sys);
    for (std::size_t c = 0; c < r.kernel_basis.cols(); ++c)
        hs.basis.push_back(Matrix::unflatten(f, dn, dm, r.kernel_basis.column(c)));
    return hs;
}

Module submodule(const Module &m, const Matrix &basis)
{
    std::vector<Matrix> act;
    for (std::size_t i = 0; i < m.algebra()->dim(); ++i) {
        auto sol = solve_affine(basis, m.action(i) * basis);
        if (!sol) throw consistency_error("submodule: span is not invariant under the action");
        act.push_back(sol->particular);
    }
    return Module(m.algebra(), basis.cols(), std::move(act));
}

KernelCokernelImage kci(const Module &src, const Module &tgt, const Matrix &f)
{
    const Field &fld = src.field();
    if (f.rows() != tgt.dim() || f.cols() != src.dim()) throw contract_error("kci: matrix shape does not match modules");
    auto r = rref_full(f);
    Matrix kin = r.kernel_basis;
    Module kernel = submodule(src, kin);

    Matrix img = f.select_columns(r.pivot_cols);
    Module image = submodule(tgt, img);
    auto fac = solve_affine(img, f);
    if (!fac) throw consistency_error("kci: image factorization failed");

    // Complement of the image inside the target.
    Matrix ext = img.hstack(Matrix::identity(fld, tgt.dim()));
    auto er = rref_full(ext);
    std::vector<std::size_t> comp;
    for (auto c : er.pivot_cols)
        if (c >= img.cols()) comp.push_back(c);
    Matrix section = ext.select_columns(comp);
    Matrix full = img.hstack(section);
    auto finv = inverse(full);
    if (!finv) throw consistency_error("kci: complement is not a complement");
    Matrix proj = finv->block(img.cols(), 0, section.cols(), tgt.dim());
    std::vector<Matrix> act;
    for (std::size_t i = 0; i < tgt.algebra()->dim(); ++i) act.push_back(proj * tgt.action(i) * section);
    Module cok(tgt.algebra(), section.cols(), std::move(act));
    return {std::move(kernel), std::move(kin), std::move(image), std::move(img), fac->particular,
            std::move(cok), std::move(proj), std::move(section)};
}

DirectSum direct_sum(const std::vector<Module> &ms, const AlgebraPtr &algebra)
{
    for (auto &m : ms)
        if (m.algebra() != algebra) throw contract_error("direct_sum: modules over different algebras");
    const Field &f = algebra->field();
    std::size_t total = 0;
    for (auto &m : ms) total += m.dim();
    std::vector<Matrix> act;
    for (std::size_t i = 0; i < algebra->dim(); ++i) {
        std::vector<Matrix> blocks;
        for (auto &m : ms) blocks.push_back(m.action(i));
        act.push_back(block_diagonal(f, blocks));
    }
    DirectSum ds{Module(algebra, total, std::move(act)), {}, {}};
    std::size_t off = 0;
    for (auto &m : ms) {
        Matrix inj(f, total, m.dim());
        Matrix proj(f, m.dim(), total);
        for (std::size_t k = 0; k < m.dim(); ++k) {
            inj(off + k, k) = 1;
            proj(k, off + k) = 1;
        }
        ds.injections.push_back(std::move(inj));
        ds.projections.push_back(std::move(proj));
        off += m.dim();
    }
    return ds;
}

}
