#include "stablecat/pseudotri.hpp"
#include "stablecat/error.hpp"

#include <sstream>

namespace stablecat {

const char *to_string(BackendKind k) { return k == BackendKind::abelian ? "abelian" : "stable"; }

namespace {

/// x with a x = b exactly; throws consistency_error if none exists.
Matrix exact_solve(const Matrix &a, const Matrix &b, const char *what)
{
    auto s = solve_affine(a, b);
    if (!s) throw consistency_error(std::string("no exact solution for ") + what);
    return s->particular;
}

/// n copies of the regular module with a structure map, or the zero module when n = 0.
Biproduct copies(const Module &r, std::size_t n, const AlgebraPtr &a)
{
    return Biproduct::of(std::vector<Module>(n, r), a);
}

}

Backend::Backend(BackendKind kind, AlgebraPtr a, std::uint64_t seed, SearchBudget budget)
    : kind_(kind), algebra_(a), regular_(Module::regular(a, "A")), zero_(Module::zero(a))
{
    std::vector<Module> ideal;
    if (kind == BackendKind::stable) ideal.push_back(regular_);
    cat_ = std::make_unique<QuotientCategory>(a, ideal, std::string(to_string(kind)) + "(" + a->name() + ")", seed,
                                              budget);
}

BackendPtr Backend::abelian(AlgebraPtr a, std::uint64_t seed, SearchBudget budget)
{
    return BackendPtr(new Backend(BackendKind::abelian, std::move(a), seed, budget));
}

BackendPtr Backend::stable(AlgebraPtr a, std::uint64_t seed, SearchBudget budget)
{
    Module r = Module::regular(a);
    Module d = Module::dual_regular(a);
    Membership m = add_membership(d, {r}, seed, budget);
    if (m.verdict != Verdict::yes)
        throw contract_error("algebra '" + a->name() + "' is not self-injective: D(A) is not in add(A)" +
                             (m.verdict == Verdict::inconclusive ? " (inconclusive)" : ""));
    return BackendPtr(new Backend(BackendKind::stable, std::move(a), seed, budget));
}

BackendPtr Backend::with_faults(FaultInjection faults) const
{
    auto b = new Backend(kind_, algebra_, cat_->seed(), cat_->budget());
    b->faults_ = faults;
    return BackendPtr(b);
}

std::shared_ptr<const ShiftPresentation> Backend::sigma_presentation(const Module &x) const
{
    if (kind_ != BackendKind::stable) throw contract_error("sigma_presentation: abelian backend");
    {
        std::lock_guard lock(mutex_);
        if (auto it = sigma_cache_.find(x.fingerprint()); it != sigma_cache_.end()) return it->second;
    }
    auto h = cat_->hom(x, regular_);
    Module envelope = zero_;
    Morphism mono = zero_morphism(x, zero_);
    if (h->dim() > 0) {
        Biproduct e = copies(regular_, h->dim(), algebra_);
        std::vector<Morphism> comps;
        for (const auto &m : h->basis) comps.push_back({x, regular_, m});
        envelope = e.sum;
        mono = e.into(comps);
    }
    if (rank(mono.matrix) != x.dim())
        throw consistency_error("injective envelope of a module of dimension " + std::to_string(x.dim()) +
                                " is not monic");
    KernelCokernelImage k = kci(x, envelope, mono.matrix);
    auto p = std::make_shared<ShiftPresentation>(ShiftPresentation{
        envelope, mono, {envelope, k.cokernel, k.cokernel_projection}, k.cokernel, k.cokernel_section,
        cat_->reduce(k.cokernel)});
    std::lock_guard lock(mutex_);
    return sigma_cache_.emplace(x.fingerprint(), p).first->second;
}

std::shared_ptr<const ShiftPresentation> Backend::omega_presentation(const Module &x) const
{
    if (kind_ != BackendKind::stable) throw contract_error("omega_presentation: abelian backend");
    {
        std::lock_guard lock(mutex_);
        if (auto it = omega_cache_.find(x.fingerprint()); it != omega_cache_.end()) return it->second;
    }
    const Field &f = x.field();
    const std::size_t n = algebra_->dim();
    Module envelope = zero_;
    Morphism epi = zero_morphism(zero_, x);
    if (x.dim() > 0) {
        Biproduct p = copies(regular_, x.dim(), algebra_);
        std::vector<Morphism> comps;
        // component i sends b_k to b_k . e_i
        for (std::size_t i = 0; i < x.dim(); ++i) {
            Matrix m(f, x.dim(), n);
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t r = 0; r < x.dim(); ++r) m(r, k) = x.action(k)(r, i);
            comps.push_back({regular_, x, m});
        }
        envelope = p.sum;
        epi = p.out_of(comps);
    }
    Matrix section = exact_solve(epi.matrix, Matrix::identity(f, x.dim()), "projective cover section");
    KernelCokernelImage k = kci(envelope, x, epi.matrix);
    auto p = std::make_shared<ShiftPresentation>(ShiftPresentation{
        envelope, {k.kernel, envelope, k.kernel_inclusion}, epi, k.kernel, section, cat_->reduce(k.kernel)});
    std::lock_guard lock(mutex_);
    return omega_cache_.emplace(x.fingerprint(), p).first->second;
}

Module Backend::sigma(const Module &x) const
{
    return kind_ == BackendKind::stable ? sigma_presentation(x)->reduced.object : zero_;
}

Module Backend::omega(const Module &x) const
{
    return kind_ == BackendKind::stable ? omega_presentation(x)->reduced.object : zero_;
}

Morphism Backend::sigma(const Morphism &f) const
{
    if (kind_ != BackendKind::stable) return zero_morphism(zero_, zero_);
    auto px = sigma_presentation(f.source);
    auto py = sigma_presentation(f.target);
    LinearSystem sys(*cat_);
    auto e = sys.unknown(px->envelope, py->envelope);
    sys.equation({sys.term_right(e, px->mono)}, py->mono * f, false);
    auto sol = sys.solve();
    if (!sol) throw consistency_error("sigma: no lift to the injective envelopes");
    Matrix full = py->epi.matrix * sol->particular[0].matrix * px->epi_section;
    Morphism full_m{px->full, py->full, full};
    return py->reduced.retraction * full_m * px->reduced.section;
}

Morphism Backend::omega(const Morphism &f) const
{
    if (kind_ != BackendKind::stable) return zero_morphism(zero_, zero_);
    auto px = omega_presentation(f.source);
    auto py = omega_presentation(f.target);
    LinearSystem sys(*cat_);
    auto p = sys.unknown(px->envelope, py->envelope);
    sys.equation({sys.term_left(p, py->epi)}, f * px->epi, false);
    auto sol = sys.solve();
    if (!sol) throw consistency_error("omega: no lift to the projective covers");
    Matrix full = exact_solve(py->mono.matrix, (sol->particular[0] * px->mono).matrix, "omega restriction");
    Morphism full_m{px->full, py->full, full};
    return py->reduced.retraction * full_m * px->reduced.section;
}

namespace {

/// psi without fault injection.
Morphism clean_psi(const Backend &bk, const Module &a, const Morphism &u)
{
    auto pa = bk.omega_presentation(a);
    auto pb = bk.sigma_presentation(u.target);
    Morphism u_full = u * pa->reduced.retraction;
    LinearSystem sys(bk.category());
    auto v = sys.unknown(pa->envelope, pb->envelope);
    sys.equation({sys.term_right(v, pa->mono)}, pb->mono * u_full, false);
    auto sol = sys.solve();
    if (!sol) throw consistency_error("psi: no extension to the projective cover");
    Morphism w_full{a, pb->full, pb->epi.matrix * sol->particular[0].matrix * pa->epi_section};
    return pb->reduced.retraction * w_full;
}

}

Morphism Backend::psi(const Module &a, const Morphism &u) const
{
    if (kind_ != BackendKind::stable) return zero_morphism(a, zero_);
    if (!u.source.same_as(omega(a))) throw contract_error("psi: source is not Omega of the given object");
    Morphism r = clean_psi(*this, a, u);
    if (faults_.psi_sign_flip) {
        auto c = cat_->coordinates(u);
        if (!c.empty() && c[0] != 0) {
            Morphism b0{u.source, u.target, cat_->quotient_basis(u.source, u.target)[0]};
            const Field &f = a.field();
            r = r - Morphism{a, r.target, clean_psi(*this, a, b0).matrix.scaled(f.mul(2 % f.characteristic(), c[0]))};
        }
    }
    return r;
}

Morphism Backend::psi_inverse(const Module &b, const Morphism &w) const
{
    if (kind_ != BackendKind::stable) return zero_morphism(zero_, b);
    const Module &a = w.source;
    Module oa = omega(a);
    if (!w.target.same_as(sigma(b))) throw contract_error("psi_inverse: target is not Sigma of the given object");
    auto q = cat_->quotient_basis(oa, b);
    // w = sum_k c_k psi(q_k) modulo the ideal, solved on flattened matrices
    const Field &f = a.field();
    auto nb = cat_->null_basis(a, w.target);
    const std::size_t len = w.matrix.rows() * w.matrix.cols();
    Matrix m(f, len, q.size() + nb->size());
    for (std::size_t k = 0; k < q.size(); ++k) {
        auto img = psi(a, Morphism{oa, b, q[k]}).matrix.entries();
        for (std::size_t i = 0; i < len; ++i) m(i, k) = img[i];
    }
    for (std::size_t k = 0; k < nb->size(); ++k)
        for (std::size_t i = 0; i < len; ++i) m(i, q.size() + k) = (*nb)[k].entries()[i];
    Matrix rhs = Matrix::unflatten(f, len, 1, w.matrix.entries());
    auto s = solve_affine(m, rhs);
    if (!s) throw consistency_error("psi_inverse: target morphism outside the image of psi");
    Matrix r(f, b.dim(), oa.dim());
    for (std::size_t k = 0; k < q.size(); ++k) r += q[k].scaled(s->particular(k, 0));
    return {oa, b, r};
}

RightTriangle Backend::complete_right(const Morphism &f) const
{
    if (kind_ == BackendKind::abelian) {
        KernelCokernelImage k = kci(f.source, f.target, f.matrix);
        return {f, {f.target, k.cokernel, k.cokernel_projection}, zero_morphism(k.cokernel, zero_)};
    }
    auto pa = sigma_presentation(f.source);
    Biproduct bi = Biproduct::of({f.target, pa->envelope}, algebra_);
    Morphism fx = bi.into({f, pa->mono});
    KernelCokernelImage k = kci(f.source, bi.sum, fx.matrix);
    Morphism c{bi.sum, k.cokernel, k.cokernel_projection};
    Morphism g_full = c * bi.inj[0];
    Morphism h_full{k.cokernel, pa->full, pa->epi.matrix * bi.proj[1].matrix * k.cokernel_section};
    Reduction red = cat_->reduce(k.cokernel);
    return {f, red.retraction * g_full, pa->reduced.retraction * h_full * red.section};
}

LeftTriangle Backend::complete_left(const Morphism &g) const
{
    if (kind_ == BackendKind::abelian) {
        KernelCokernelImage k = kci(g.source, g.target, g.matrix);
        return {zero_morphism(zero_, k.kernel), {k.kernel, g.source, k.kernel_inclusion}, g};
    }
    auto pc = omega_presentation(g.target);
    Biproduct bi = Biproduct::of({g.source, pc->envelope}, algebra_);
    Morphism gx = bi.out_of({g, pc->epi});
    KernelCokernelImage k = kci(bi.sum, g.target, gx.matrix);
    Morphism incl{k.kernel, bi.sum, k.kernel_inclusion};
    Morphism f_full = bi.proj[0] * incl;
    // connecting map Omega C -> K; the triangle carries its negative so that h = -psi(e)
    Matrix conn = exact_solve(incl.matrix, (bi.inj[1] * pc->mono).matrix, "left connecting map");
    Morphism e_full = -(Morphism{pc->full, k.kernel, conn} * pc->reduced.section);
    Reduction red = cat_->reduce(k.kernel);
    return {red.retraction * e_full, f_full * red.section, g};
}

RightTriangle Backend::rotate_right(const RightTriangle &t) const
{
    Morphism sf = sigma(t.f);
    return {t.g, t.h, faults_.rotation_sign_dropped ? sf : -sf};
}

LeftTriangle Backend::rotate_left(const LeftTriangle &t) const { return {-omega(t.g), t.e, t.f}; }

namespace {

std::string shape_error(const char *what, const Module &a, const Module &b)
{
    std::ostringstream s;
    s << what << ": objects of dimension " << a.dim() << " and " << b.dim() << " do not match";
    return s.str();
}

Witnessed from_search(const InvertibleSearch &s, const char *label)
{
    Witnessed w;
    w.verdict = s.verdict;
    if (s.verdict == Verdict::yes) w.witness = s.point[0];
    else if (s.verdict == Verdict::no) w.detail = std::string(label) + ": comparison maps exist but none is invertible";
    else w.detail = std::string(label) + ": no invertible comparison found within budget";
    return w;
}

}

Witnessed Backend::in_right(const RightTriangle &t) const
{
    if (!t.f.target.same_as(t.g.source)) return {Verdict::no, {}, shape_error("in_right", t.f.target, t.g.source)};
    if (!t.g.target.same_as(t.h.source)) return {Verdict::no, {}, shape_error("in_right", t.g.target, t.h.source)};
    Module sa = sigma(t.f.source);
    if (!t.h.target.same_as(sa)) return {Verdict::no, {}, shape_error("in_right", t.h.target, sa)};
    RightTriangle u = complete_right(t.f);
    auto sol = right_comparisons(*this, t, u);
    if (!sol) return {Verdict::no, {}, "in_right: no map of triangles to the standard completion"};
    return from_search(find_invertible(*cat_, *sol, 0), "in_right");
}

Witnessed Backend::in_left(const LeftTriangle &t) const
{
    if (!t.e.target.same_as(t.f.source)) return {Verdict::no, {}, shape_error("in_left", t.e.target, t.f.source)};
    if (!t.f.target.same_as(t.g.source)) return {Verdict::no, {}, shape_error("in_left", t.f.target, t.g.source)};
    Module oc = omega(t.g.target);
    if (!t.e.source.same_as(oc)) return {Verdict::no, {}, shape_error("in_left", t.e.source, oc)};
    LeftTriangle u = complete_left(t.g);
    LinearSystem sys(*cat_);
    auto a = sys.unknown(t.f.source, u.f.source);
    sys.equation({sys.term_left(a, u.f)}, t.f);
    sys.equation({sys.term_right(a, t.e)}, u.e);
    auto sol = sys.solve();
    if (!sol) return {Verdict::no, {}, "in_left: no map of triangles to the standard completion"};
    return from_search(find_invertible(*cat_, *sol, 0), "in_left");
}

Diagnostic Backend::validate(const Extension &x) const
{
    if (auto w = in_right(x.right()); !w) return Diagnostic::fail("right triangle: " + w.detail);
    if (auto w = in_left(x.left()); !w) return Diagnostic::fail("left triangle: " + w.detail);
    if (!cat_->equal(x.h, -psi(x.c(), x.e))) return Diagnostic::fail("h is not -psi(e)");
    return Diagnostic::pass();
}

bool Backend::is_sigma_null(const Morphism &f) const
{
    // Sigma is an equivalence on the stable category, so every map factors through an object of Sigma C.
    return kind_ == BackendKind::stable || f.matrix.is_zero();
}

bool Backend::is_omega_null(const Morphism &f) const { return kind_ == BackendKind::stable || f.matrix.is_zero(); }

bool Backend::sigma_epic(const Morphism &f) const { return is_sigma_null(complete_right(f).g); }

bool Backend::omega_monic(const Morphism &f) const { return is_omega_null(complete_left(f).f); }

Extension Backend::extension_from_monic(const Morphism &f) const
{
    if (!omega_monic(f)) {
        KernelCokernelImage k = kci(f.source, f.target, f.matrix);
        throw contract_error("not Omega-monic: kernel of dimension " + std::to_string(k.kernel.dim()));
    }
    RightTriangle t = complete_right(f);
    return {-psi_inverse(f.source, t.h), t.f, t.g, t.h};
}

Extension Backend::extension_from_epic(const Morphism &g) const
{
    if (!sigma_epic(g)) {
        KernelCokernelImage k = kci(g.source, g.target, g.matrix);
        throw contract_error("not Sigma-epic: cokernel of dimension " + std::to_string(k.cokernel.dim()));
    }
    LeftTriangle t = complete_left(g);
    return {t.e, t.f, t.g, -psi(g.target, t.e)};
}

Extension Backend::biproduct_extension(const Module &a, const Module &b) const
{
    Biproduct bi = Biproduct::of({a, b}, algebra_);
    return {zero_morphism(omega(b), a), bi.inj[0], bi.proj[1], zero_morphism(b, sigma(a))};
}

Extension Backend::from_short_exact(const ShortExact &s) const
{
    Morphism f{s.x, s.middle, s.f};
    Morphism g{s.middle, s.z, s.g};
    if (kind_ == BackendKind::abelian) return {zero_morphism(zero_, s.x), f, g, zero_morphism(s.z, zero_)};
    auto px = sigma_presentation(s.x);
    LinearSystem sys(*cat_);
    auto v = sys.unknown(s.middle, px->envelope);
    sys.equation({sys.term_right(v, f)}, px->mono, false);
    auto sol = sys.solve();
    if (!sol) throw consistency_error("from_short_exact: envelope does not extend over the middle term");
    Matrix gs = exact_solve(s.g, Matrix::identity(s.z.field(), s.z.dim()), "section of the deflation");
    Morphism h_full{s.z, px->full, px->epi.matrix * sol->particular[0].matrix * gs};
    Morphism h = px->reduced.retraction * h_full;
    return {-psi_inverse(s.x, h), f, g, h};
}

std::optional<LinearSystem::Solution> right_comparisons(const Backend &b, const RightTriangle &t, const RightTriangle &u)
{
    LinearSystem sys(b.category());
    auto c = sys.unknown(t.g.target, u.g.target);
    sys.equation({sys.term_right(c, t.g)}, u.g);
    sys.equation({sys.term_left(c, u.h)}, t.h);
    return sys.solve();
}

InvertibleSearch find_invertible(const QuotientCategory &cat, const LinearSystem::Solution &s, std::size_t index)
{
    InvertibleSearch r;
    r.verdict = search_affine(s, cat.field(), cat.seed(), cat.budget().exhaustive_limit, cat.budget().random_probes,
                              [&](const std::vector<Morphism> &p) {
                                  auto inv = cat.inverse(p[index]);
                                  if (!inv) return false;
                                  r.point = p;
                                  r.inverse = inv;
                                  return true;
                              });
    return r;
}

OctahedronResult octahedron_ext(const Backend &b, const Extension &ext_f, const Extension &ext_l,
                                const Extension &ext_lp)
{
    const auto &cat = b.category();
    const Morphism &f = ext_f.f, &g = ext_f.g, &h = ext_f.h;
    const Morphism &l = ext_l.f, &m = ext_l.g, &n = ext_l.h;
    const Morphism &lp = ext_lp.f, &mp = ext_lp.g, &np = ext_lp.h;
    if (!l.source.same_as(f.source) || !lp.target.same_as(l.target) || !mp.target.same_as(f.target))
        throw contract_error("octahedron_ext: the three extensions do not fit together");
    if (!cat.equal(mp * l, f)) throw contract_error("octahedron_ext: m' l differs from f");
    const Module &bp = m.target;  // B'
    const Module &c = g.target;
    const Module &ap = lp.source;
    LinearSystem sys(cat);
    auto gp = sys.unknown(bp, c);
    auto hp = sys.unknown(c, np.target);
    sys.equation({sys.term_right(hp, g)}, np);
    sys.equation({sys.term_left(gp, h)}, n);
    sys.equation({sys.term_right(gp, m)}, g * mp);
    sys.equation({sys.term_left(hp, b.sigma(lp))}, -(b.sigma(l) * h));
    auto sol = sys.solve();
    if (!sol) throw consistency_error("octahedron_ext: the octahedral identities have no solution");
    Morphism fp = m * lp;
    std::optional<OctahedronResult> found;
    Verdict v = search_affine(*sol, cat.field(), cat.seed(), cat.budget().exhaustive_limit, cat.budget().random_probes,
                              [&](const std::vector<Morphism> &p) {
                                  Extension x{-b.psi_inverse(ap, p[1]), fp, p[0], p[1]};
                                  if (!b.validate(x).ok) return false;
                                  found = OctahedronResult{p[0], p[1], x};
                                  return true;
                              });
    if (v == Verdict::inconclusive) throw inconclusive_error("octahedron_ext: no extension found within budget");
    if (!found) throw consistency_error("octahedron_ext: no solution of the identities gives an extension");
    return *found;
}

}
