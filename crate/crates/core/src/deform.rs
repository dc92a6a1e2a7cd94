//! 2-cocycle deformation of actions and of functors.
//!
//! For the finite-group backend `Ω` lives in `C[G] ⊗ C[G]` and is stored as the
//! coefficient matrix `Ω[g, h]` of `λ_g ⊗ λ_h`. For the dual backend it is a
//! function on `Γ × Γ`. In both cases `x ◁ ω` is the module structure induced
//! by the action: `x ◁ λ_g = α_{g⁻¹}(x)` and `x ◁ δ_γ = P_γ x`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hilbmod::StarAlgebraTable;
use crate::linalg::{identity, kron, max_abs, max_abs_vec, re, singular_values, CMat, CVec, C64};
use crate::qcat::{Backend, BackendKind, Group, RepCategory};
use crate::reconstruct::build;
use crate::report::{Report, Worst};
use crate::spectral::{certify_isomorphism, roundtrip_map, spectral_functor, ActionData};
use crate::wutf::FunctorData;

#[derive(Clone, Debug, PartialEq)]
pub struct CocycleData {
    pub kind: BackendKind,
    /// Counital values, `|G| × |G|`.
    pub values: CMat,
    /// Phase divided out to make `Ω` counital.
    pub phase: C64,
}

impl CocycleData {
    /// Normalizes `values` to counital form.
    pub fn new(backend: &Backend, kind: BackendKind, values: CMat) -> Result<CocycleData> {
        let n = backend.group.order();
        if kind != backend.kind {
            return Err(Error::Config("cocycle kind does not match the backend".into()));
        }
        if values.shape() != (n, n) {
            return Err(Error::Dimension(format!("cocycle needs a {n}×{n} array")));
        }
        let e = backend.group.identity;
        let phase = match kind {
            BackendKind::Dual => values[(e, e)],
            // Value of Ω on the trivial representation in both legs.
            BackendKind::Group => values.iter().sum(),
        };
        if phase.norm() < 1e-12 {
            return Err(Error::Validation("cocycle vanishes on the trivial representation".into()));
        }
        let phase = phase / phase.norm();
        Ok(CocycleData { kind, values: values.map(|v| v / phase), phase })
    }

    /// `Ω ≡ 1`.
    pub fn trivial(backend: &Backend) -> CocycleData {
        let n = backend.group.order();
        let e = backend.group.identity;
        let values = match backend.kind {
            BackendKind::Dual => CMat::from_element(n, n, re(1.0)),
            BackendKind::Group => CMat::from_fn(n, n, |g, h| if g == e && h == e { re(1.0) } else { re(0.0) }),
        };
        CocycleData { kind: backend.kind, values, phase: re(1.0) }
    }

    pub fn is_trivial(&self, backend: &Backend) -> bool {
        *self == CocycleData::trivial(backend)
    }

    /// `Ω` acting on `H_α ⊗ H_β`.
    pub fn on_pair(&self, backend: &Backend, a: usize, b: usize) -> CMat {
        match self.kind {
            BackendKind::Dual => CMat::from_element(1, 1, self.values[(a, b)]),
            BackendKind::Group => {
                let (ua, ub) = (&backend.irreps[a].matrices, &backend.irreps[b].matrices);
                let mut out = CMat::zeros(backend.dim(a) * backend.dim(b), backend.dim(a) * backend.dim(b));
                for g in 0..ua.len() {
                    for h in 0..ub.len() {
                        let c = self.values[(g, h)];
                        if c != re(0.0) {
                            out += kron(&ua[g], &ub[h]) * c;
                        }
                    }
                }
                out
            }
        }
    }

    /// Builds a finite-group cocycle from its values `ω(χ, ψ)` on pairs of
    /// characters of an abelian group.
    pub fn from_characters(backend: &Backend, omega: impl Fn(usize, usize) -> C64) -> Result<CocycleData> {
        let n = backend.group.order();
        if backend.kind != BackendKind::Group || backend.irreps.iter().any(|i| i.dim != 1) {
            return Err(Error::Config("character cocycles need an abelian group backend".into()));
        }
        let chi = |c: usize, g: usize| backend.irreps[c].matrices[g][(0, 0)];
        let values = CMat::from_fn(n, n, |g, h| {
            let mut s = re(0.0);
            for c in 0..n {
                for d in 0..n {
                    s += omega(c, d) * (chi(c, g) * chi(d, h)).conj();
                }
            }
            s / (n * n) as f64
        });
        CocycleData::new(backend, BackendKind::Group, values)
    }

    /// The coboundary `(v ⊗ v) Δ̂(v)*` of a unitary `v ∈ C[G]` given by its
    /// image `V_α` in every irrep.
    pub fn coboundary(backend: &Backend, v_irreps: &[CMat]) -> Result<CocycleData> {
        let g = &backend.group;
        let n = g.order();
        match backend.kind {
            BackendKind::Dual => {
                let c: Vec<C64> = v_irreps.iter().map(|m| m[(0, 0)]).collect();
                let values = CMat::from_fn(n, n, |a, b| c[a] * c[b] / c[g.mul[a][b]]);
                CocycleData::new(backend, BackendKind::Dual, values)
            }
            BackendKind::Group => {
                let v = fourier_inverse(backend, v_irreps);
                let mut values = CMat::zeros(n, n);
                for a in 0..n {
                    for b in 0..n {
                        for c in 0..n {
                            let ci = g.inverse[c];
                            values[(g.mul[a][ci], g.mul[b][ci])] += v[a] * v[b] * v[c].conj();
                        }
                    }
                }
                CocycleData::new(backend, BackendKind::Group, values)
            }
        }
    }
}

/// `v ∈ C[G]` with `π_α(v) = V_α` for every irrep.
pub fn fourier_inverse(backend: &Backend, v_irreps: &[CMat]) -> CVec {
    let n = backend.group.order();
    CVec::from_iterator(
        n,
        (0..n).map(|g| {
            let mut s = re(0.0);
            for (a, ir) in backend.irreps.iter().enumerate() {
                s += (ir.matrices[g].adjoint() * &v_irreps[a]).trace() * ir.dim as f64;
            }
            s / n as f64
        }),
    )
}

/// Convolution in `C[G]`.
fn conv(g: &Group, a: &CVec, b: &CVec) -> CVec {
    let mut out = CVec::zeros(g.order());
    for x in 0..g.order() {
        for y in 0..g.order() {
            out[g.mul[x][y]] += a[x] * b[y];
        }
    }
    out
}

/// Product in `C[G] ⊗ C[G]`.
fn mul2(g: &Group, a: &CMat, b: &CMat) -> CMat {
    let n = g.order();
    let mut out = CMat::zeros(n, n);
    for x in 0..n {
        for y in 0..n {
            if a[(x, y)] == re(0.0) {
                continue;
            }
            for z in 0..n {
                for w in 0..n {
                    out[(g.mul[x][z], g.mul[y][w])] += a[(x, y)] * b[(z, w)];
                }
            }
        }
    }
    out
}

fn star2(g: &Group, a: &CMat) -> CMat {
    let n = g.order();
    let mut out = CMat::zeros(n, n);
    for x in 0..n {
        for y in 0..n {
            out[(g.inverse[x], g.inverse[y])] = a[(x, y)].conj();
        }
    }
    out
}

fn star1(g: &Group, a: &CVec) -> CVec {
    let mut out = CVec::zeros(g.order());
    for x in 0..g.order() {
        out[g.inverse[x]] = a[x].conj();
    }
    out
}

fn antipode(g: &Group, a: &CVec) -> CVec {
    let mut out = CVec::zeros(g.order());
    for x in 0..g.order() {
        out[g.inverse[x]] = a[x];
    }
    out
}

/// Unitarity, the cocycle identity and counitality, irrep by irrep.
pub fn check_cocycle(backend: &Backend, om: &CocycleData, tol: f64) -> Result<Report> {
    let g = &backend.group;
    let nirr = backend.n_irreps();
    let mut rep = Report::new(tol);
    let pairs: BTreeMap<(usize, usize), CMat> = (0..nirr)
        .flat_map(|a| (0..nirr).map(move |b| (a, b)))
        .map(|(a, b)| ((a, b), om.on_pair(backend, a, b)))
        .collect();
    for ((a, b), m) in &pairs {
        let smin = singular_values(m).last().cloned().unwrap_or(0.0);
        if smin < 1e-12 {
            return Err(Error::Validation(format!(
                "cocycle is not invertible on ({}, {})",
                backend.irreps[*a].label, backend.irreps[*b].label
            )));
        }
    }
    let mut unit = Worst::new();
    for ((a, b), m) in &pairs {
        let d = m.nrows();
        unit.update(max_abs(&(m.adjoint() * m - identity(d))), || {
            format!("({}, {})", backend.irreps[*a].label, backend.irreps[*b].label)
        });
    }
    rep.push("unitarity", unit);
    let mut cyc = Worst::new();
    match om.kind {
        BackendKind::Dual => {
            let v = &om.values;
            for a in 0..g.order() {
                for b in 0..g.order() {
                    for c in 0..g.order() {
                        let lhs = v[(a, b)] * v[(g.mul[a][b], c)];
                        let rhs = v[(b, c)] * v[(a, g.mul[b][c])];
                        cyc.update((lhs - rhs).norm(), || {
                            format!("({}, {}, {})", g.labels[a], g.labels[b], g.labels[c])
                        });
                    }
                }
            }
        }
        BackendKind::Group => {
            let u = |a: usize| &backend.irreps[a].matrices;
            for a in 0..nirr {
                for b in 0..nirr {
                    for c in 0..nirr {
                        let (da, db, dc) = (backend.dim(a), backend.dim(b), backend.dim(c));
                        let mut left_co = CMat::zeros(da * db * dc, da * db * dc);
                        let mut right_co = left_co.clone();
                        for x in 0..g.order() {
                            for y in 0..g.order() {
                                let w = om.values[(x, y)];
                                if w == re(0.0) {
                                    continue;
                                }
                                left_co += kron(&kron(&u(a)[x], &u(b)[x]), &u(c)[y]) * w;
                                right_co += kron(&u(a)[x], &kron(&u(b)[y], &u(c)[y])) * w;
                            }
                        }
                        let lhs = kron(&pairs[&(a, b)], &identity(dc)) * left_co;
                        let rhs = kron(&identity(da), &pairs[&(b, c)]) * right_co;
                        cyc.update(max_abs(&(lhs - rhs)), || {
                            format!(
                                "({}, {}, {})",
                                backend.irreps[a].label, backend.irreps[b].label, backend.irreps[c].label
                            )
                        });
                    }
                }
            }
        }
    }
    rep.push("cocycle_identity", cyc);
    let t = backend.trivial;
    let mut counit = Worst::new();
    for a in 0..nirr {
        let d = backend.dim(a);
        counit.update(max_abs(&(&pairs[&(t, a)] - identity(d))), || format!("(e, {})", backend.irreps[a].label));
        counit.update(max_abs(&(&pairs[&(a, t)] - identity(d))), || format!("({}, e)", backend.irreps[a].label));
    }
    rep.push("counital", counit);
    Ok(rep)
}

/// `u = m(ι ⊗ Ŝ)(Ω)`: a function on `Γ` for the dual backend, coefficients in
/// `C[G]` for the finite-group backend.
#[derive(Clone, Debug, PartialEq)]
pub struct UElement {
    pub kind: BackendKind,
    pub values: CVec,
}

impl UElement {
    /// Image of `u` in the irrep `a`.
    pub fn on_irrep(&self, backend: &Backend, a: usize) -> CMat {
        match self.kind {
            BackendKind::Dual => CMat::from_element(1, 1, self.values[a]),
            BackendKind::Group => {
                let mut out = CMat::zeros(backend.dim(a), backend.dim(a));
                for (g, m) in backend.irreps[a].matrices.iter().enumerate() {
                    out += m * self.values[g];
                }
                out
            }
        }
    }
}

/// Computes `u` and checks `u⁻¹ = Ŝ(u*)` and `Ω R_U = (u ⊗ ι) R_U` on every irrep.
pub fn u_element(backend: &Backend, om: &CocycleData, tol: f64) -> Result<(UElement, Report)> {
    let g = &backend.group;
    let n = g.order();
    let values = match om.kind {
        BackendKind::Dual => CVec::from_iterator(n, (0..n).map(|x| om.values[(x, g.inverse[x])])),
        BackendKind::Group => {
            let mut u = CVec::zeros(n);
            for x in 0..n {
                for y in 0..n {
                    u[g.mul[x][g.inverse[y]]] += om.values[(x, y)];
                }
            }
            u
        }
    };
    let u = UElement { kind: om.kind, values };
    let mut rep = Report::new(tol);
    let mut inv = Worst::new();
    match om.kind {
        BackendKind::Dual => {
            for x in 0..n {
                let s = u.values[g.inverse[x]].conj();
                inv.update((u.values[x] * s - re(1.0)).norm(), || g.labels[x].clone());
            }
        }
        BackendKind::Group => {
            let s = antipode(g, &star1(g, &u.values));
            let mut one = CVec::zeros(n);
            one[g.identity] = re(1.0);
            inv.update(max_abs_vec(&(conv(g, &u.values, &s) - &one)), || "u Ŝ(u*)".into());
            inv.update(max_abs_vec(&(conv(g, &s, &u.values) - &one)), || "Ŝ(u*) u".into());
        }
    }
    rep.push("inverse_is_antipode_of_adjoint", inv);
    let cat = RepCategory::new(backend.clone());
    let mut eu = Worst::new();
    for a in 0..backend.n_irreps() {
        let sol = cat.conj_solution(a);
        let abar = sol.alpha_bar;
        let r = CMat::from_column_slice(sol.r.len(), 1, sol.r.as_slice());
        let lhs = om.on_pair(backend, abar, a) * &r;
        let rhs = kron(&u.on_irrep(backend, abar), &identity(backend.dim(a))) * &r;
        eu.update(max_abs(&(lhs - rhs)), || backend.irreps[a].label.clone());
    }
    rep.push("omega_r_equals_u_r", eu);
    Ok((u, rep))
}

/// Operators `x ↦ x ◁ ω_g` for the basis `ω_g` in which `Ω` is stored.
fn module_ops(act: &ActionData) -> Vec<CMat> {
    let g = &act.backend.group;
    match act.backend.kind {
        BackendKind::Group => (0..g.order()).map(|x| act.operator(g.inverse[x])).collect(),
        BackendKind::Dual => (0..g.order()).map(|x| act.operator(x)).collect(),
    }
}

/// The deformed algebra `B_Ω`: same space, product `m((x ⊗ y) ◁ Ω)` and
/// involution `x* ◁ u*`. The returned action carries the same module
/// operators; for finite-group backends these intertwine the coaction of the
/// deformed quantum group rather than acting by automorphisms.
pub fn deform_action(act: &ActionData, om: &CocycleData, tol: f64) -> Result<(ActionData, Report)> {
    let be = &act.backend;
    if om.kind != be.kind {
        return Err(Error::Config("cocycle kind does not match the action".into()));
    }
    let mut rep = Report::new(tol);
    if om.is_trivial(be) {
        rep.skip("deformation", "trivial cocycle: the algebra is returned unchanged");
        return Ok((act.clone(), rep));
    }
    let alg = &act.algebra;
    let g = &be.group;
    let n = alg.dim;
    let ng = g.order();
    let ops = module_ops(act);
    let (u, _) = u_element(be, om, tol)?;
    let left: Vec<CMat> = (0..n)
        .map(|p| {
            let bp = alg.basis(p);
            let mut m = CMat::zeros(n, n);
            for x in 0..ng {
                let xp = &ops[x] * &bp;
                if max_abs_vec(&xp) == 0.0 {
                    continue;
                }
                let lx = alg.left_matrix(&xp);
                for y in 0..ng {
                    let w = om.values[(x, y)];
                    if w != re(0.0) {
                        m += &lx * &ops[y] * w;
                    }
                }
            }
            m
        })
        .collect();
    // u* in the operator basis.
    let ustar = match be.kind {
        BackendKind::Group => star1(g, &u.values),
        BackendKind::Dual => u.values.map(|c| c.conj()),
    };
    let mut star = CMat::zeros(n, n);
    for x in 0..ng {
        star += &ops[x] * &alg.star * ustar[x];
    }
    let expectation = match be.kind {
        BackendKind::Group => ops.iter().fold(CMat::zeros(n, n), |acc, o| acc + o) / re(ng as f64),
        BackendKind::Dual => ops[g.identity].clone(),
    };
    let trace = expectation.transpose() * &alg.trace;
    let table = StarAlgebraTable::new(left, star, alg.unit.clone(), trace)?;
    let res = table.axiom_residuals();
    rep.push("associativity", worst(res.associativity));
    rep.push("unit", worst(res.unit));
    rep.push("involution", worst(res.involution));
    rep.push("anti_multiplicative", worst(res.anti_multiplicative));
    let out = ActionData { backend: be.clone(), algebra: table, kind: act.kind.clone(), base: act.base.clone() };
    match be.kind {
        BackendKind::Dual => rep.extend("grading_", out.validate(tol)?),
        BackendKind::Group => {
            // (x ⋆ y) ◁ λ_k = ⋆((x ⊗ y) ◁ Ω Δ̂(λ_k) Ω*).
            let t = &out.algebra;
            let om_star = star2(g, &om.values);
            let mut mult = Worst::new();
            let mut inv = Worst::new();
            let s_u_star = antipode(g, &ustar);
            for k in 0..ng {
                let mut dk = CMat::zeros(ng, ng);
                dk[(k, k)] = re(1.0);
                let twisted = mul2(g, &mul2(g, &om.values, &dk), &om_star);
                // Ŝ_Ω(λ_k)* = (u⁻¹)* λ_k u* with u⁻¹ = Ŝ(u*).
                let mut lk = CVec::zeros(ng);
                lk[k] = re(1.0);
                let sk = conv(g, &conv(g, &star1(g, &s_u_star), &lk), &ustar);
                let sk_op = (0..ng).fold(CMat::zeros(n, n), |acc, x| acc + &ops[x] * sk[x]);
                for p in 0..n {
                    let bp = t.basis(p);
                    let lhs = t.star(&(&ops[k] * &bp));
                    inv.update(max_abs_vec(&(lhs - &sk_op * t.star(&bp))), || format!("λ_{}", g.labels[k]));
                    for q in 0..n {
                        let bq = t.basis(q);
                        let lhs = &ops[k] * t.mul(&bp, &bq);
                        let mut rhs = CVec::zeros(n);
                        for x in 0..ng {
                            for y in 0..ng {
                                let w = twisted[(x, y)];
                                if w.norm() > 1e-15 {
                                    rhs += t.mul(&(&ops[x] * &bp), &(&ops[y] * &bq)) * w;
                                }
                            }
                        }
                        mult.update(max_abs_vec(&(lhs - rhs)), || format!("λ_{}", g.labels[k]));
                    }
                }
            }
            rep.push("deformed_coaction_multiplicative", mult);
            rep.push("deformed_coaction_star", inv);
        }
    }
    Ok((out, rep))
}

fn worst(r: f64) -> Worst {
    let mut w = Worst::new();
    w.update(r, String::new);
    w.at = None;
    w
}

/// `F ∘ E^Ω`: the same modules over the category twisted by `Ω`. For the dual
/// backend the twist is scalar and is absorbed into `φ_{α,β}`.
pub fn deform_functor(f: &FunctorData, om: &CocycleData) -> Result<FunctorData> {
    let cat = &f.category;
    let be = &cat.backend;
    if cat.is_twisted() {
        return Err(Error::Config("functor is already over a twisted category".into()));
    }
    if om.kind != be.kind {
        return Err(Error::Config("cocycle kind does not match the functor".into()));
    }
    if om.is_trivial(be) {
        return Ok(f.clone());
    }
    match be.kind {
        BackendKind::Dual => {
            let mut out = f.clone();
            for ((a, b, _), tensors) in out.phi.iter_mut() {
                let w = om.values[(*a, *b)];
                for t in tensors.iter_mut() {
                    *t *= w;
                }
            }
            Ok(out)
        }
        BackendKind::Group => {
            let n = be.n_irreps();
            let twist =
                (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| ((a, b), om.on_pair(be, a, b))).collect();
            let category = RepCategory::twisted(be.clone(), twist)?;
            Ok(FunctorData { category, ..f.clone() })
        }
    }
}

/// `build(deform_functor(F, Ω)) ≅ deform_action(B, Ω)` for the spectral functor
/// `F` of `act`, through the round-trip map.
pub fn cross_test(act: &ActionData, om: &CocycleData, tol: f64) -> Result<Report> {
    let sf = spectral_functor(act)?;
    let fd = deform_functor(&sf.functor, om)?;
    let mut rep = Report::new(tol);
    rep.extend("functor_", fd.validate(tol)?);
    let bf = build(&fd, tol)?;
    let (deformed, drep) = deform_action(act, om, tol)?;
    rep.extend("action_", drep);
    let psi = roundtrip_map(&sf, &bf, act.dim());
    rep.extend("iso_", certify_isomorphism(&psi, &bf, &deformed, &sf.fixed.embedding, tol));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::qcat::TAU;

    #[test]
    fn trivial_cocycle_passes_and_has_unit_u() {
        let be = Backend::symmetric3();
        let om = CocycleData::trivial(&be);
        assert!(check_cocycle(&be, &om, TAU).unwrap().passed());
        let (u, rep) = u_element(&be, &om, TAU).unwrap();
        assert!(rep.passed());
        assert_eq!(u.values[be.group.identity], re(1.0));
    }

    #[test]
    fn bicharacter_deforms_group_algebra() {
        let act = fixtures::abelian_group_algebra(&[2, 2]);
        let om = fixtures::bicharacter(&act.backend, 2);
        assert!(check_cocycle(&act.backend, &om, TAU).unwrap().passed());
        let (_, urep) = u_element(&act.backend, &om, TAU).unwrap();
        assert!(urep.passed(), "{:?}", urep.failures());
        let (b, rep) = deform_action(&act, &om, TAU).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures());
        assert_eq!(b.algebra.center().ncols(), 1);
        let rep = cross_test(&act, &om, TAU).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures());
    }

    #[test]
    fn character_cocycle_makes_translation_noncommutative() {
        let be = Backend::abelian_group(&[2, 2]);
        let act = fixtures::translation(be.clone());
        let om = fixtures::bicharacter(&be, 2);
        assert!(!om.is_trivial(&be));
        let (b, rep) = deform_action(&act, &om, TAU).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures());
        assert_eq!(act.algebra.center().ncols(), 4);
        assert_eq!(b.algebra.center().ncols(), 1);
    }

    #[test]
    fn coboundary_is_nontrivial_but_valid() {
        let be = Backend::symmetric3();
        let om = fixtures::random_coboundary(&be, 7);
        assert!(!om.is_trivial(&be));
        let rep = check_cocycle(&be, &om, TAU).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures());
        let (_, urep) = u_element(&be, &om, TAU).unwrap();
        assert!(urep.passed(), "{:?}", urep.failures());
        let mut bad = om.clone();
        bad.values[(1, 2)] += re(0.3);
        assert!(!check_cocycle(&be, &bad, TAU).unwrap().passed());
    }
}
