//! Weak unitary tensor functors in their quadratic form.
//!
//! A functor is stored as a correspondence `M_α` per irrep together with, for
//! every fusion basis element `T_k ∈ Mor(U_α × U_β, U_γ)`, the matrix of the
//! `A`-bilinear map `φ(T_k): M_α ⊗ M_β → M_γ`. Columns of that matrix are
//! indexed by `p · dim M_β + q` for basis vectors `m_p ⊗ n_q`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hilbmod::{Adjoint, Correspondence, FdCStarAlgebra};
use crate::linalg::{identity, kron, max_abs, max_abs_vec, rank, re, CMat, CVec, C64, RANK_TOL};
use crate::qcat::{Backend, Group, RepCategory};
use crate::report::{Report, Worst};

pub type Triple = (usize, usize, usize);

#[derive(Clone, Debug)]
pub struct FunctorData {
    pub category: RepCategory,
    pub base: FdCStarAlgebra,
    pub modules: Vec<Correspondence>,
    pub phi: BTreeMap<Triple, Vec<CMat>>,
}

/// `S_X[T]: Y ↦ φ(T)(X ⊗ Y)` for a fixed `X`.
pub fn s_x(phi: &CMat, x: &CVec, d_beta: usize) -> CMat {
    phi * kron(&CMat::from_column_slice(x.len(), 1, x.as_slice()), &identity(d_beta))
}

impl FunctorData {
    /// Checks that every fusion triple carries φ data of the right shape.
    pub fn check_complete(&self) -> Result<()> {
        let cat = &self.category;
        if self.modules.len() != cat.n_irreps() {
            return Err(Error::Incomplete(format!(
                "expected {} modules, found {}",
                cat.n_irreps(),
                self.modules.len()
            )));
        }
        for m in &self.modules {
            if m.algebra != self.base {
                return Err(Error::Config("module over a different base algebra".into()));
            }
        }
        for &(a, b, c) in cat.fusion_keys() {
            let tensors = self.phi.get(&(a, b, c)).ok_or_else(|| {
                Error::Incomplete(format!("missing phi for ({}, {}, {})", cat.label(a), cat.label(b), cat.label(c)))
            })?;
            if tensors.len() != cat.fusion(a, b, c).len() {
                return Err(Error::Incomplete(format!(
                    "phi for ({}, {}, {}) needs {} tensors",
                    cat.label(a),
                    cat.label(b),
                    cat.label(c),
                    cat.fusion(a, b, c).len()
                )));
            }
            let shape = (self.modules[c].dim, self.modules[a].dim * self.modules[b].dim);
            for t in tensors {
                if t.shape() != shape {
                    return Err(Error::Dimension(format!(
                        "phi for ({}, {}, {}) has shape {:?}, expected {:?}",
                        cat.label(a),
                        cat.label(b),
                        cat.label(c),
                        t.shape(),
                        shape
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self, a: usize) -> usize {
        self.modules[a].dim
    }

    /// `φ(S)` for an arbitrary `S ∈ Mor(U_α × U_β, U_γ)`.
    pub fn phi_of(&self, a: usize, b: usize, c: usize, s: &CMat) -> CMat {
        let mut out = CMat::zeros(self.dim(c), self.dim(a) * self.dim(b));
        let coeffs = self.category.expand(a, b, c, s);
        if let Some(tensors) = self.phi.get(&(a, b, c)) {
            for (t, k) in tensors.iter().zip(coeffs) {
                out += t * k;
            }
        }
        out
    }

    fn phi_k(&self, a: usize, b: usize, c: usize, k: usize) -> &CMat {
        &self.phi[&(a, b, c)][k]
    }

    /// The adjoint of `S_X[T_k]: M_β → M_γ`.
    pub fn s_x_adjoint(&self, a: usize, b: usize, c: usize, k: usize, x: &CVec, tol: f64) -> Result<Adjoint> {
        let s = s_x(self.phi_k(a, b, c, k), x, self.dim(b));
        self.modules[b].adjoint_of(&self.modules[c], &s, tol)
    }

    /// Checks axioms (i)–(v) of the quadratic description.
    pub fn validate(&self, tol: f64) -> Result<Report> {
        self.check_complete()?;
        let mut rep = Report::new(tol);
        rep.push("data", self.data_residual());
        rep.push("i_unit_module", self.base_module_residual());
        rep.push("ii_isometry", self.isometry_residual());
        rep.push("iii_unit_maps", self.unit_map_residual());
        rep.push("iv_associativity", self.associativity_residual());
        let (adj, exch) = self.exchange_residual(tol);
        rep.push("v_adjointable", adj);
        rep.push("v_exchange", exch);
        Ok(rep)
    }

    /// Correspondence axioms and `A`-bilinearity of every φ tensor.
    pub fn data_residual(&self) -> Worst {
        let cat = &self.category;
        let mut w = Worst::new();
        for (a, m) in self.modules.iter().enumerate() {
            let r = m.axiom_residuals();
            w.update(r.max_violation(), || format!("module {}", cat.label(a)));
            if m.dim > 0 {
                w.update((-r.definiteness_min).max(0.0), || format!("module {} definiteness", cat.label(a)));
            }
        }
        for (&(a, b, c), tensors) in &self.phi {
            let (ma, mb, mc) = (&self.modules[a], &self.modules[b], &self.modules[c]);
            for t in tensors {
                for e in 0..self.base.dim() {
                    let left = t * kron(&ma.left[e], &identity(mb.dim)) - &mc.left[e] * t;
                    let right = t * kron(&identity(ma.dim), &mb.right[e]) - &mc.right[e] * t;
                    let balanced = t * kron(&ma.right[e], &identity(mb.dim)) - t * kron(&identity(ma.dim), &mb.left[e]);
                    let r = max_abs(&left).max(max_abs(&right)).max(max_abs(&balanced));
                    w.update(r, || format!("phi ({}, {}, {}) bilinearity", cat.label(a), cat.label(b), cat.label(c)));
                }
            }
        }
        w
    }

    fn base_module_residual(&self) -> Worst {
        let canon = Correspondence::canonical(&self.base);
        let m = &self.modules[self.category.trivial()];
        let mut w = Worst::new();
        if m.dim != canon.dim {
            w.update(f64::INFINITY, || "dimension of M_e".into());
            return w;
        }
        for e in 0..self.base.dim() {
            let r = max_abs(&(&m.left[e] - &canon.left[e]))
                .max(max_abs(&(&m.right[e] - &canon.right[e])))
                .max(max_abs(&(&m.inner[e] - &canon.inner[e])));
            w.update(r, || format!("basis element {e}"));
        }
        w
    }

    /// Inner-product matrices of the algebraic tensor product `M_α ⊗ M_β`.
    fn tensor_inner(&self, a: usize, b: usize) -> Vec<CMat> {
        let (ma, mb) = (&self.modules[a], &self.modules[b]);
        let ad = self.base.dim();
        let mut tb = vec![CMat::zeros(ma.dim * mb.dim, ma.dim * mb.dim); ad];
        for c in 0..ad {
            if max_abs(&ma.inner[c]) == 0.0 {
                continue;
            }
            for (e, t) in tb.iter_mut().enumerate() {
                *t += kron(&ma.inner[c], &(&mb.inner[e] * &mb.left[c]));
            }
        }
        tb
    }

    fn isometry_residual(&self) -> Worst {
        let cat = &self.category;
        let n = cat.n_irreps();
        let mut w = Worst::new();
        for a in 0..n {
            for b in 0..n {
                let tb = self.tensor_inner(a, b);
                let mut sums = vec![CMat::zeros(tb[0].nrows(), tb[0].ncols()); self.base.dim()];
                for (c, k) in cat.channels(a, b) {
                    let phi = self.phi_k(a, b, c, k);
                    let dc = cat.dim(c) as f64;
                    for (e, s) in sums.iter_mut().enumerate() {
                        *s += phi.adjoint() * &self.modules[c].inner[e] * phi * re(dc);
                    }
                }
                for e in 0..self.base.dim() {
                    let r = max_abs(&(&sums[e] - &tb[e]));
                    w.update(r, || format!("({}, {})", cat.label(a), cat.label(b)));
                }
            }
        }
        w
    }

    fn unit_map_residual(&self) -> Worst {
        let cat = &self.category;
        let e = cat.trivial();
        let ad = self.base.dim();
        let mut w = Worst::new();
        for b in 0..cat.n_irreps() {
            let m = &self.modules[b];
            let id = identity(cat.dim(b));
            // a ⊗ X ↦ aX, columns a · dim + x.
            let expect_left = CMat::from_fn(m.dim, ad * m.dim, |i, col| m.left[col / m.dim][(i, col % m.dim)]);
            let got = self.phi_of(e, b, b, &id);
            w.update(max_abs(&(got - expect_left)), || format!("left unit at {}", cat.label(b)));
            // X ⊗ a ↦ Xa, columns x · dim A + a.
            let expect_right = CMat::from_fn(m.dim, m.dim * ad, |i, col| m.right[col % ad][(i, col / ad)]);
            let got = self.phi_of(b, e, b, &id);
            w.update(max_abs(&(got - expect_right)), || format!("right unit at {}", cat.label(b)));
        }
        w
    }

    /// Axiom (iv): `φ(S)(φ(T) ⊗ ι) = Σ φ(d_θ W(ι ⊗ P*))(ι ⊗ φ(P))` with `W = S(T ⊗ ι)`.
    pub fn associativity_residual(&self) -> Worst {
        let cat = &self.category;
        let n = cat.n_irreps();
        let mut w = Worst::new();
        for a in 0..n {
            for b in 0..n {
                for z in 0..n {
                    let (da, dz) = (cat.dim(a), cat.dim(z));
                    let (ma, mb, mz) = (self.dim(a), self.dim(b), self.dim(z));
                    for (eta, k) in cat.channels(a, b) {
                        let t = &cat.fusion(a, b, eta)[k];
                        let phi_t = self.phi_k(a, b, eta, k);
                        for (delta, l) in cat.channels(eta, z) {
                            let s = &cat.fusion(eta, z, delta)[l];
                            let wmor = s * kron(t, &identity(dz));
                            let lhs = self.phi_k(eta, z, delta, l) * kron(phi_t, &identity(mz));
                            let mut rhs = CMat::zeros(self.dim(delta), ma * mb * mz);
                            let mut cat_res: f64 = 0.0;
                            for (theta, m) in cat.channels(b, z) {
                                let p = &cat.fusion(b, z, theta)[m];
                                let piece = &wmor * kron(&identity(da), &p.adjoint()) * re(cat.dim(theta) as f64);
                                if max_abs(&piece) < 1e-14 {
                                    continue;
                                }
                                cat_res = cat_res.max(cat.expansion_residual(a, theta, delta, &piece));
                                let phi_piece = self.phi_of(a, theta, delta, &piece);
                                rhs += phi_piece * kron(&identity(ma), self.phi_k(b, z, theta, m));
                            }
                            let r = max_abs(&(lhs - rhs)).max(cat_res);
                            w.update(r, || {
                                format!(
                                    "({}, {}, {}) -> {}",
                                    cat.label(a),
                                    cat.label(b),
                                    cat.label(z),
                                    cat.label(delta)
                                )
                            });
                        }
                    }
                }
            }
        }
        w
    }

    /// Axiom (v): adjointability of `S_X[T]` on basis vectors `X`, and the
    /// exchange identity `φ(S)(S_X[T]* ⊗ ι) = Σ d_ζ S_X[P]* φ(P Z)` with
    /// `Z = (ι ⊗ S)(T* ⊗ ι)`.
    pub fn exchange_residual(&self, tol: f64) -> (Worst, Worst) {
        let cat = &self.category;
        let n = cat.n_irreps();
        let mut adj_w = Worst::new();
        let mut ex_w = Worst::new();
        for a in 0..n {
            let ma = self.dim(a);
            for x_idx in 0..ma {
                let x = unit(ma, x_idx);
                // Adjoints of S_X[P] for every channel, cached per (β, γ, k).
                let mut adjoints: BTreeMap<(usize, usize, usize), CMat> = BTreeMap::new();
                for b in 0..n {
                    for (c, k) in cat.channels(a, b) {
                        match self.s_x_adjoint(a, b, c, k, &x, tol) {
                            Ok(Adjoint::Adjointable(m)) => {
                                adjoints.insert((b, c, k), m);
                            }
                            Ok(Adjoint::NotAdjointable { residual }) => adj_w.update(residual, || {
                                format!("S_X at {} -> ({}, {})", cat.label(a), cat.label(b), cat.label(c))
                            }),
                            Err(_) => adj_w.update(f64::INFINITY, || {
                                format!("S_X at {} -> ({}, {}) not A-linear", cat.label(a), cat.label(b), cat.label(c))
                            }),
                        }
                    }
                }
                for b in 0..n {
                    for (gamma, k) in cat.channels(a, b) {
                        let Some(sx_t_star) = adjoints.get(&(b, gamma, k)) else { continue };
                        let t = &cat.fusion(a, b, gamma)[k];
                        for delta in 0..n {
                            let (da, dd) = (cat.dim(a), cat.dim(delta));
                            for (eta, l) in cat.channels(b, delta) {
                                let s = &cat.fusion(b, delta, eta)[l];
                                let lhs = self.phi_k(b, delta, eta, l) * kron(sx_t_star, &identity(self.dim(delta)));
                                // Z = (ι_α ⊗ S)(T* ⊗ ι_δ): γ ⊗ δ → α ⊗ η.
                                let z = kron(&identity(da), s) * kron(&t.adjoint(), &identity(dd));
                                let mut rhs = CMat::zeros(self.dim(eta), self.dim(gamma) * self.dim(delta));
                                for (zeta, m) in cat.channels(a, eta) {
                                    let p = &cat.fusion(a, eta, zeta)[m];
                                    let pz = p * &z * re(cat.dim(zeta) as f64);
                                    if max_abs(&pz) < 1e-14 {
                                        continue;
                                    }
                                    let Some(sx_p_star) = adjoints.get(&(eta, zeta, m)) else { continue };
                                    rhs += sx_p_star * self.phi_of(gamma, delta, zeta, &pz);
                                }
                                ex_w.update(max_abs(&(lhs - rhs)), || {
                                    format!(
                                        "X in {}, T: ({}, {}) -> {}, S: ({}, {}) -> {}",
                                        cat.label(a),
                                        cat.label(a),
                                        cat.label(b),
                                        cat.label(gamma),
                                        cat.label(b),
                                        cat.label(delta),
                                        cat.label(eta)
                                    )
                                });
                            }
                        }
                    }
                }
            }
        }
        (adj_w, ex_w)
    }

    /// Conjugate-linear map `X ↦ X^•` from `M_α` to `M_ᾱ`, as the matrix
    /// `K` with `X^• = K conj(X)`.
    pub fn bullet_matrix(&self, a: usize, tol: f64) -> Result<CMat> {
        let cat = &self.category;
        let abar = cat.conj_label(a);
        let e = cat.trivial();
        let rbar = &cat.conj_solution(a).rbar;
        let unit_a = self.base.unit();
        let mut k = CMat::zeros(self.dim(abar), self.dim(a));
        for x_idx in 0..self.dim(a) {
            let x = unit(self.dim(a), x_idx);
            let mut out = CVec::zeros(self.dim(abar));
            for (kk, p) in cat.fusion(a, abar, e).iter().enumerate() {
                let c: C64 = (p * rbar)[(0, 0)];
                if c.norm() < 1e-15 {
                    continue;
                }
                let s = s_x(&self.phi[&(a, abar, e)][kk], &x, self.dim(abar));
                let adj = self.modules[abar].adjoint_of(&self.modules[e], &s, tol)?;
                match adj {
                    Adjoint::Adjointable(m) => out += m * &unit_a * c * re(cat.dim(e) as f64),
                    Adjoint::NotAdjointable { residual } => {
                        return Err(Error::Validation(format!(
                            "axiom (v) fails for the bullet of {} (residual {residual:.3e})",
                            cat.label(a)
                        )))
                    }
                }
            }
            k.set_column(x_idx, &out);
        }
        Ok(k)
    }

    pub fn bullet(&self, a: usize, x: &CVec, tol: f64) -> Result<CVec> {
        Ok(self.bullet_matrix(a, tol)? * x.map(|z| z.conj()))
    }

    /// Residuals of `⟨X•, Y⟩ = φ(R̄*)(X ⊗ Y)` and `⟨X, Y⟩ = φ(R*)(X• ⊗ Y)` on basis vectors.
    pub fn bullet_residuals(&self, a: usize, tol: f64) -> Result<(f64, f64)> {
        let cat = &self.category;
        let abar = cat.conj_label(a);
        let e = cat.trivial();
        let k = self.bullet_matrix(a, tol)?;
        let sol = cat.conj_solution(a);
        let rbar_star = CMat::from_fn(1, sol.rbar.len(), |_, j| sol.rbar[j].conj());
        let r_star = CMat::from_fn(1, sol.r.len(), |_, j| sol.r[j].conj());
        let phi_rbar = self.phi_of(a, abar, e, &rbar_star);
        let phi_r = self.phi_of(abar, a, e, &r_star);
        let (mut r1, mut r2): (f64, f64) = (0.0, 0.0);
        for x_idx in 0..self.dim(a) {
            let x = unit(self.dim(a), x_idx);
            let xb = &k * &x;
            for y_idx in 0..self.dim(abar) {
                let y = unit(self.dim(abar), y_idx);
                let lhs = self.modules[abar].inner(&xb, &y);
                let rhs = &phi_rbar * crate::linalg::kron_vec(&x, &y);
                r1 = r1.max(max_abs_vec(&(lhs - rhs)));
            }
            for y_idx in 0..self.dim(a) {
                let y = unit(self.dim(a), y_idx);
                let lhs = self.modules[a].inner(&x, &y);
                let rhs = &phi_r * crate::linalg::kron_vec(&xb, &y);
                r2 = r2.max(max_abs_vec(&(lhs - rhs)));
            }
        }
        Ok((r1, r2))
    }

    /// The scalar `c` with `R̄_ᾱ = (ι ⊗ c)R_α`, and how far the solved map is from scalar.
    pub fn double_conjugate_scalar(&self, a: usize) -> (C64, f64) {
        let cat = &self.category;
        let abar = cat.conj_label(a);
        let d = cat.dim(a);
        let r = cat.conj_solution(a).r_matrix();
        let rb = CMat::from_fn(d, d, |c, j| cat.conj_solution(abar).rbar[c * d + j]);
        let ut = crate::linalg::pinv(&r) * rb;
        let c = ut[(0, 0)];
        (c, max_abs(&(ut - identity(d) * c)))
    }

    /// Both defining identities of `X•`, `X•• = F(u)X`, and equal traces of
    /// `⟨X•, X•⟩` and `⟨X, X⟩` in the Kac case.
    pub fn bullet_report(&self, tol: f64) -> Result<Report> {
        let cat = &self.category;
        let mut rep = Report::new(tol);
        let (mut first, mut second, mut double, mut traces) = (Worst::new(), Worst::new(), Worst::new(), Worst::new());
        let kac = (0..cat.n_irreps()).all(|a| max_abs(&(cat.rho(a) - identity(cat.dim(a)))) < tol);
        for a in 0..cat.n_irreps() {
            let label = || cat.label(a).to_string();
            let (r1, r2) = self.bullet_residuals(a, tol)?;
            first.update(r1, label);
            second.update(r2, label);
            let abar = cat.conj_label(a);
            let ka = self.bullet_matrix(a, tol)?;
            let kb = self.bullet_matrix(abar, tol)?;
            let (c, off) = self.double_conjugate_scalar(a);
            let dd = &kb * ka.map(|z| z.conj()) - identity(self.dim(a)) * c;
            double.update(off.max(max_abs(&dd)), label);
            if kac {
                for x in 0..self.dim(a) {
                    let xv = unit(self.dim(a), x);
                    let xb = &ka * &xv;
                    let t1 = self.base.trace(&self.modules[abar].inner(&xb, &xb));
                    let t0 = self.base.trace(&self.modules[a].inner(&xv, &xv));
                    traces.update((t1 - t0).norm(), label);
                }
            }
        }
        rep.push("bullet_pairs_with_rbar", first);
        rep.push("bullet_pairs_with_r", second);
        rep.push("bullet_twice_is_f_of_u", double);
        if kac {
            rep.push("bullet_preserves_trace", traces);
        } else {
            rep.skip("bullet_preserves_trace", "only expected when every rho is the identity");
        }
        Ok(rep)
    }

    /// Scales every tensor of one triple, a convenience for mutation tests.
    pub fn perturbed(&self, key: Triple, k: usize, delta: &CMat) -> FunctorData {
        let mut out = self.clone();
        if let Some(t) = out.phi.get_mut(&key) {
            t[k] += delta;
        }
        out
    }
}

fn unit(d: usize, i: usize) -> CVec {
    let mut v = CVec::zeros(d);
    v[i] = re(1.0);
    v
}

/// Result of comparing two functors through given module maps.
pub fn check_natural_iso(f: &FunctorData, g: &FunctorData, maps: &[CMat], tol: f64) -> Report {
    let mut rep = Report::new(tol);
    if f.base != g.base || maps.len() != f.modules.len() || g.modules.len() != f.modules.len() {
        rep.push_flag("shape", false, "functors over different data");
        return rep;
    }
    let cat = &f.category;
    let mut shape_ok = true;
    let mut unitary = Worst::new();
    let mut bilinear = Worst::new();
    for (a, u) in maps.iter().enumerate() {
        let (mf, mg) = (&f.modules[a], &g.modules[a]);
        if u.shape() != (mg.dim, mf.dim) {
            shape_ok = false;
            continue;
        }
        for e in 0..f.base.dim() {
            let r = max_abs(&(u.adjoint() * &mg.inner[e] * u - &mf.inner[e]));
            unitary.update(r, || format!("inner product at {}", cat.label(a)));
            let r = max_abs(&(u * &mf.left[e] - &mg.left[e] * u)).max(max_abs(&(u * &mf.right[e] - &mg.right[e] * u)));
            bilinear.update(r, || cat.label(a).to_string());
        }
        if rank(u, RANK_TOL) != mg.dim {
            unitary.update(f64::INFINITY, || format!("map at {} is not surjective", cat.label(a)));
        }
    }
    rep.push_flag("shape", shape_ok, "module dimensions agree");
    rep.push("unitary", unitary);
    rep.push("bimodule", bilinear);
    let mut mono = Worst::new();
    if shape_ok {
        for (&(a, b, c), tensors) in &f.phi {
            let Some(gt) = g.phi.get(&(a, b, c)) else {
                mono.update(f64::INFINITY, || "missing tensors".into());
                continue;
            };
            for (k, t) in tensors.iter().enumerate() {
                let r = max_abs(&(&gt[k] * kron(&maps[a], &maps[b]) - &maps[c] * t));
                mono.update(r, || format!("({}, {}, {})", cat.label(a), cat.label(b), cat.label(c)));
            }
        }
    }
    rep.push("monoidal", mono);
    rep
}

/// A Fell bundle over a finite group: fibers over `A` with multiplication maps.
#[derive(Clone, Debug)]
pub struct GradedBundle {
    pub group: Group,
    pub base: FdCStarAlgebra,
    pub fibers: Vec<Correspondence>,
    /// `mult[(α, β)]: M_α ⊗ M_β → M_{αβ}`.
    pub mult: BTreeMap<(usize, usize), CMat>,
}

impl GradedBundle {
    fn phi(&self, a: usize, b: usize) -> Result<&CMat> {
        self.mult.get(&(a, b)).ok_or_else(|| {
            Error::Incomplete(format!("missing multiplication ({}, {})", self.group.labels[a], self.group.labels[b]))
        })
    }

    fn check_complete(&self) -> Result<()> {
        let n = self.group.order();
        if self.fibers.len() != n {
            return Err(Error::Incomplete(format!("expected {n} fibers")));
        }
        for a in 0..n {
            for b in 0..n {
                let m = self.phi(a, b)?;
                let c = self.group.mul[a][b];
                let shape = (self.fibers[c].dim, self.fibers[a].dim * self.fibers[b].dim);
                if m.shape() != shape {
                    return Err(Error::Dimension(format!(
                        "multiplication ({}, {}) has shape {:?}, expected {:?}",
                        self.group.labels[a],
                        self.group.labels[b],
                        m.shape(),
                        shape
                    )));
                }
            }
        }
        Ok(())
    }

    /// Whether every multiplication map is onto its target fiber.
    pub fn all_surjective(&self) -> bool {
        let n = self.group.order();
        (0..n).all(|a| {
            (0..n).all(|b| {
                let c = self.group.mul[a][b];
                let m = &self.mult[&(a, b)];
                self.fibers[c].dim == 0 || rank(m, RANK_TOL) == self.fibers[c].dim
            })
        })
    }

    /// Checks conditions (a)–(d) of a Fell bundle.
    pub fn validate(&self, tol: f64) -> Result<Report> {
        self.check_complete()?;
        let as_functor = self.to_functor_unchecked();
        let mut rep = Report::new(tol);
        rep.push("data", as_functor.data_residual());
        rep.push("isometry", as_functor.isometry_residual());
        rep.push("a_unit_module", as_functor.base_module_residual());
        rep.push("b_unit_maps", as_functor.unit_map_residual());
        let g = &self.group;
        let n = g.order();
        let mut assoc = Worst::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let ab = g.mul[a][b];
                    let bc = g.mul[b][c];
                    let lhs = &self.mult[&(ab, c)] * kron(&self.mult[&(a, b)], &identity(self.fibers[c].dim));
                    let rhs = &self.mult[&(a, bc)] * kron(&identity(self.fibers[a].dim), &self.mult[&(b, c)]);
                    assoc.update(max_abs(&(lhs - rhs)), || {
                        format!("({}, {}, {})", g.labels[a], g.labels[b], g.labels[c])
                    });
                }
            }
        }
        rep.push("c_associativity", assoc);
        if self.all_surjective() {
            rep.skip("d_adjointable", "all multiplication maps are surjective");
            rep.skip("d_exchange", "all multiplication maps are surjective");
        } else {
            let (adj, exch) = self.condition_d(tol);
            rep.push("d_adjointable", adj);
            rep.push("d_exchange", exch);
        }
        Ok(rep)
    }

    fn condition_d(&self, tol: f64) -> (Worst, Worst) {
        let g = &self.group;
        let n = g.order();
        let mut adj_w = Worst::new();
        let mut ex_w = Worst::new();
        for a in 0..n {
            let da = self.fibers[a].dim;
            for x_idx in 0..da {
                let x = unit(da, x_idx);
                let mut adjoints = BTreeMap::new();
                for b in 0..n {
                    let s = s_x(&self.mult[&(a, b)], &x, self.fibers[b].dim);
                    let target = &self.fibers[g.mul[a][b]];
                    match self.fibers[b].adjoint_of(target, &s, tol) {
                        Ok(Adjoint::Adjointable(m)) => {
                            adjoints.insert(b, m);
                        }
                        Ok(Adjoint::NotAdjointable { residual }) => {
                            adj_w.update(residual, || format!("S_X at ({}, {})", g.labels[a], g.labels[b]))
                        }
                        Err(_) => adj_w.update(f64::INFINITY, || {
                            format!("S_X at ({}, {}) not A-linear", g.labels[a], g.labels[b])
                        }),
                    }
                }
                // φ_{β,γ}(S*_X ⊗ ι) = S*_X φ_{αβ,γ} on M_{αβ} ⊗ M_γ.
                for b in 0..n {
                    for c in 0..n {
                        let (Some(sb), Some(sbc)) = (adjoints.get(&b), adjoints.get(&g.mul[b][c])) else {
                            continue;
                        };
                        let ab = g.mul[a][b];
                        let lhs = &self.mult[&(b, c)] * kron(sb, &identity(self.fibers[c].dim));
                        let rhs = sbc * &self.mult[&(ab, c)];
                        ex_w.update(max_abs(&(lhs - rhs)), || {
                            format!("X in {}, ({}, {})", g.labels[a], g.labels[b], g.labels[c])
                        });
                    }
                }
            }
        }
        (adj_w, ex_w)
    }

    fn to_functor_unchecked(&self) -> FunctorData {
        let category = RepCategory::new(Backend::dual(self.group.clone()));
        let mut phi = BTreeMap::new();
        for (&(a, b), m) in &self.mult {
            phi.insert((a, b, self.group.mul[a][b]), vec![m.clone()]);
        }
        FunctorData { category, base: self.base.clone(), modules: self.fibers.clone(), phi }
    }

    /// The functor over the dual of the grading group described by the bundle.
    pub fn to_functor(&self, tol: f64) -> Result<FunctorData> {
        let rep = self.validate(tol)?;
        if !rep.passed() {
            let names: Vec<String> = rep.failures().iter().map(|c| c.name.clone()).collect();
            return Err(Error::Validation(format!("graded bundle fails {}", names.join(", "))));
        }
        Ok(self.to_functor_unchecked())
    }
}

/// The functor with `F(U_α) = 0` for every nontrivial `α` and `F(𝟙) = A`.
pub fn trivial_functor(category: RepCategory, base: FdCStarAlgebra) -> FunctorData {
    let n = category.n_irreps();
    let e = category.trivial();
    let modules: Vec<Correspondence> =
        (0..n).map(|a| if a == e { Correspondence::canonical(&base) } else { Correspondence::zero(&base) }).collect();
    let table = base.table();
    let mut phi = BTreeMap::new();
    let keys: Vec<Triple> = category.fusion_keys().cloned().collect();
    for (a, b, c) in keys {
        let tensors = category
            .fusion(a, b, c)
            .iter()
            .map(|t| {
                let (da, db, dc) = (modules[a].dim, modules[b].dim, modules[c].dim);
                if a == e && b == e && c == e {
                    // Multiplication of A scaled by the scalar intertwiner.
                    let d = base.dim();
                    let mut m = CMat::zeros(d, d * d);
                    for p in 0..d {
                        for q in 0..d {
                            m.set_column(p * d + q, &(table.mul(&base.basis(p), &base.basis(q)) * t[(0, 0)]));
                        }
                    }
                    m
                } else {
                    CMat::zeros(dc, da * db)
                }
            })
            .collect();
        phi.insert((a, b, c), tensors);
    }
    FunctorData { category, base, modules, phi }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcat::{Backend, TAU};

    #[test]
    fn trivial_functor_over_z2_passes() {
        let cat = RepCategory::new(Backend::abelian_group(&[2]));
        let f = trivial_functor(cat, FdCStarAlgebra::scalars());
        let rep = f.validate(TAU).unwrap();
        assert!(rep.passed(), "{rep:?}");
        let (r1, r2) = f.bullet_residuals(0, TAU).unwrap();
        assert!(r1 < 1e-12 && r2 < 1e-12);
    }

    #[test]
    fn missing_tensor_is_named() {
        let cat = RepCategory::new(Backend::abelian_group(&[2]));
        let mut f = trivial_functor(cat, FdCStarAlgebra::scalars());
        f.phi.remove(&(1, 1, 0));
        let err = f.validate(TAU).unwrap_err();
        assert!(matches!(err, Error::Incomplete(ref s) if s.contains("chi1")), "{err}");
    }
}
