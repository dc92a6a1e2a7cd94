//! The algebra `B_F = ⊕_α H̄_α ⊗ M_α` built from a functor.
//!
//! The basis element `ξ̄_i ⊗ m_k` of the `α`-component sits at flat index
//! `offset[α] + i · dim M_α + k`.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbmod::StarAlgebraTable;
use crate::linalg::{identity, max_abs, max_abs_vec, random_vec, re, seeded_rng, CMat, CVec, C64};
use crate::qcat::BackendKind;
use crate::report::{Report, Worst};
use crate::wutf::FunctorData;

/// Coefficients below this magnitude are treated as zero.
pub const PRUNE: f64 = 1e-13;

/// Nonzero coordinates of a vector as `(index, [re, im])`.
pub type SparseVec = Vec<(usize, [f64; 2])>;

#[derive(Clone, Debug)]
pub struct ReconstructedAlgebra {
    pub functor: FunctorData,
    pub offsets: Vec<usize>,
    pub dim: usize,
    /// Product, involution, unit and the faithful functional `τ_A ∘ E`.
    pub table: StarAlgebraTable,
}

impl ReconstructedAlgebra {
    pub fn component_dim(&self, a: usize) -> usize {
        self.functor.category.dim(a) * self.functor.dim(a)
    }

    pub fn index(&self, a: usize, i: usize, k: usize) -> usize {
        self.offsets[a] + i * self.functor.dim(a) + k
    }

    /// The element `ξ̄ ⊗ X` of the `α`-component.
    pub fn elementary(&self, a: usize, xi: &CVec, x: &CVec) -> CVec {
        let mut v = CVec::zeros(self.dim);
        for i in 0..xi.len() {
            for k in 0..x.len() {
                v[self.index(a, i, k)] = xi[i].conj() * x[k];
            }
        }
        v
    }

    /// Embeds `a ∈ A` as the trivial component.
    pub fn from_base(&self, a: &CVec) -> CVec {
        let e = self.functor.category.trivial();
        let mut v = CVec::zeros(self.dim);
        for k in 0..a.len() {
            v[self.index(e, 0, k)] = a[k];
        }
        v
    }

    pub fn component(&self, x: &CVec, a: usize) -> CVec {
        x.rows(self.offsets[a], self.component_dim(a)).into_owned()
    }

    pub fn multiply(&self, x: &CVec, y: &CVec) -> CVec {
        prune(self.table.mul(x, y))
    }

    pub fn star(&self, x: &CVec) -> CVec {
        prune(self.table.star(x))
    }

    /// The conditional expectation onto `A`.
    pub fn expectation(&self, x: &CVec) -> CVec {
        let e = self.functor.category.trivial();
        self.component(x, e)
    }

    /// `⟨x, y⟩ = E(x* y)`.
    pub fn inner(&self, x: &CVec, y: &CVec) -> CVec {
        self.expectation(&self.table.mul(&self.table.star(x), y))
    }

    pub fn regular_norm(&self, x: &CVec) -> f64 {
        self.table.norm(x)
    }

    /// The coaction evaluated at the group element `g` (group backend), or the
    /// degree projection onto `g` (dual backend).
    pub fn coaction(&self, g: usize) -> CMat {
        let cat = &self.functor.category;
        let mut m = CMat::zeros(self.dim, self.dim);
        for a in 0..cat.n_irreps() {
            let dm = self.functor.dim(a);
            match cat.kind() {
                BackendKind::Group => {
                    let u = &cat.backend.irreps[a].matrices[g];
                    for i in 0..cat.dim(a) {
                        for j in 0..cat.dim(a) {
                            for k in 0..dm {
                                m[(self.index(a, j, k), self.index(a, i, k))] = u[(i, j)];
                            }
                        }
                    }
                }
                BackendKind::Dual => {
                    if a == g {
                        for k in 0..dm {
                            m[(self.index(a, 0, k), self.index(a, 0, k))] = re(1.0);
                        }
                    }
                }
            }
        }
        m
    }

    /// `π(Ξ̄ ⊗ F_2(Z))` for `Ξ ∈ H_α ⊗ H_β` and `Z ∈ M_α ⊗ M_β`, using the
    /// given decomposition of `U_α × U_β` into isometries `w: H_γ → H_α ⊗ H_β`.
    pub fn pi_word(&self, a: usize, b: usize, decomposition: &[(usize, CMat)], xi: &CVec, z: &CVec) -> CVec {
        let mut out = CVec::zeros(self.dim);
        for (c, w) in decomposition {
            let eta = w.adjoint() * xi;
            let phi = self.functor.phi_of(a, b, *c, &w.adjoint());
            let zc = phi * z;
            out += self.elementary(*c, &eta, &zc);
        }
        prune(out)
    }

    /// The decomposition of `U_α × U_β` coming from the fusion bases.
    pub fn default_decomposition(&self, a: usize, b: usize) -> Vec<(usize, CMat)> {
        let cat = &self.functor.category;
        cat.channels(a, b)
            .into_iter()
            .map(|(c, k)| (c, cat.fusion(a, b, c)[k].adjoint() * re((cat.dim(c) as f64).sqrt())))
            .collect()
    }
}

fn prune(mut v: CVec) -> CVec {
    for z in v.iter_mut() {
        if z.norm() < PRUNE {
            *z = C64::new(0.0, 0.0);
        }
    }
    v
}

/// Builds `B_F` from validated functor data.
pub fn build(f: &FunctorData, tol: f64) -> Result<ReconstructedAlgebra> {
    let rep = f.validate(tol)?;
    if !rep.passed() {
        let names: Vec<String> = rep.failures().iter().map(|c| c.name.clone()).collect();
        return Err(Error::Validation(format!("functor fails {}", names.join(", "))));
    }
    build_unchecked(f, tol)
}

/// Builds `B_F` without first running the functor validators.
pub fn build_unchecked(f: &FunctorData, tol: f64) -> Result<ReconstructedAlgebra> {
    f.check_complete()?;
    let cat = &f.category;
    let n = cat.n_irreps();
    let mut offsets = Vec::with_capacity(n);
    let mut dim = 0;
    for a in 0..n {
        offsets.push(dim);
        dim += cat.dim(a) * f.dim(a);
    }
    let index = |a: usize, i: usize, k: usize| offsets[a] + i * f.dim(a) + k;

    // Left multiplication by each basis element.
    let mut left = vec![CMat::zeros(dim, dim); dim];
    for a in 0..n {
        for b in 0..n {
            let (ma, mb) = (f.dim(a), f.dim(b));
            if ma == 0 || mb == 0 {
                continue;
            }
            let (da, db) = (cat.dim(a), cat.dim(b));
            for (c, t) in cat.channels(a, b) {
                let tmat = &cat.fusion(a, b, c)[t];
                let phi = &f.phi[&(a, b, c)][t];
                let dc = cat.dim(c) as f64;
                for i in 0..da {
                    for j in 0..db {
                        for cc in 0..cat.dim(c) {
                            let coeff = tmat[(cc, i * db + j)].conj() * dc;
                            if coeff.norm() < PRUNE {
                                continue;
                            }
                            for p in 0..ma {
                                for q in 0..mb {
                                    let col = phi.column(p * mb + q);
                                    let row0 = index(a, i, p);
                                    let src = index(b, j, q);
                                    for k in 0..f.dim(c) {
                                        left[row0][(index(c, cc, k), src)] += coeff * col[k];
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    // Involution: (ξ̄_i ⊗ m_p)* = Σ_c conj(r[c, i]) η̄_c ⊗ m_p^•.
    let mut star = CMat::zeros(dim, dim);
    for a in 0..n {
        if f.dim(a) == 0 {
            continue;
        }
        let abar = cat.conj_label(a);
        let k = f.bullet_matrix(a, tol)?;
        let sol = cat.conj_solution(a);
        let da = cat.dim(a);
        for i in 0..da {
            for c in 0..cat.dim(abar) {
                let coeff = sol.r[c * da + i].conj();
                for p in 0..f.dim(a) {
                    for kk in 0..f.dim(abar) {
                        star[(index(abar, c, kk), index(a, i, p))] += coeff * k[(kk, p)];
                    }
                }
            }
        }
    }

    let e = cat.trivial();
    let mut unit = CVec::zeros(dim);
    let mut trace = CVec::zeros(dim);
    let a_unit = f.base.unit();
    for k in 0..f.base.dim() {
        unit[index(e, 0, k)] = a_unit[k];
        trace[index(e, 0, k)] = f.base.trace(&f.base.basis(k));
    }
    let table = StarAlgebraTable::new(left, star, unit, trace)?;
    Ok(ReconstructedAlgebra { functor: f.clone(), offsets, dim, table })
}

#[derive(Clone, Debug, Serialize)]
pub struct BuildReport {
    pub algebra_dim: usize,
    pub component_dims: Vec<(String, usize)>,
    pub checks: Report,
}

impl ReconstructedAlgebra {
    /// Verifies the algebra invariants on seeded random elements.
    pub fn verify(&self, tol: f64, seed: u64, samples: usize) -> BuildReport {
        let mut rng = seeded_rng(seed);
        let mut rep = Report::new(tol);
        let cat = &self.functor.category;
        let rand_el = |rng: &mut rand_chacha::ChaCha8Rng| random_vec(rng, self.dim);
        let base = &self.functor.base;

        let mut assoc = Worst::new();
        let mut anti = Worst::new();
        let mut invol = Worst::new();
        let mut cstar = Worst::new();
        let mut cond = Worst::new();
        let mut cond3 = Worst::new();
        for s in 0..samples {
            let (x, y, z) = (rand_el(&mut rng), rand_el(&mut rng), rand_el(&mut rng));
            let (nx, ny, nz) = (self.regular_norm(&x), self.regular_norm(&y), self.regular_norm(&z));
            let lhs = self.multiply(&self.multiply(&x, &y), &z);
            let rhs = self.multiply(&x, &self.multiply(&y, &z));
            assoc.update(max_abs_vec(&(lhs - rhs)) / (nx * ny * nz), || format!("sample {s}"));
            let xy_star = self.star(&self.multiply(&x, &y));
            let ys_xs = self.multiply(&self.star(&y), &self.star(&x));
            anti.update(max_abs_vec(&(xy_star - ys_xs)) / (nx * ny), || format!("sample {s}"));
            invol.update(max_abs_vec(&(self.star(&self.star(&x)) - &x)) / nx, || format!("sample {s}"));
            let n_xx = self.regular_norm(&self.multiply(&self.star(&x), &x));
            cstar.update((n_xx - nx * nx).abs() / (nx * nx), || format!("sample {s}"));
            // E(a x b) = a E(x) b.
            let a = random_vec(&mut rng, base.dim());
            let b = random_vec(&mut rng, base.dim());
            let axb = self.multiply(&self.multiply(&self.from_base(&a), &x), &self.from_base(&b));
            let expect = base.mul(&base.mul(&a, &self.expectation(&x)), &b);
            cond.update(max_abs_vec(&(self.expectation(&axb) - expect)), || format!("sample {s}"));
            // E(x* a* a x) ≤ ‖a‖² E(x* x).
            let ax = self.multiply(&self.from_base(&a), &x);
            let lhs = self.inner(&ax, &ax);
            let rhs = self.inner(&x, &x) * re(base.norm(&a).powi(2));
            let diff = rhs - lhs;
            let m = base.to_matrix(&diff);
            let min = crate::linalg::hermitian_eigen(&m).0.first().cloned().unwrap_or(0.0);
            cond3.update((-min).max(0.0) / (nx * nx * base.norm(&a).powi(2)), || format!("sample {s}"));
        }
        rep.push("associativity", assoc);
        rep.push("star_anti_multiplicative", anti);
        rep.push("star_involutive", invol);
        rep.push("cstar_identity", cstar);
        rep.push("expectation_bimodular", cond);
        rep.push("expectation_bounded", cond3);

        // A sits inside B_F with its own product, and acts on components by the module actions.
        let mut sub = Worst::new();
        for p in 0..base.dim() {
            let ep = base.basis(p);
            for q in 0..base.dim() {
                let eq = base.basis(q);
                let prod = self.multiply(&self.from_base(&ep), &self.from_base(&eq));
                sub.update(max_abs_vec(&(prod - self.from_base(&base.mul(&ep, &eq)))), || format!("({p}, {q})"));
            }
            for a in 0..cat.n_irreps() {
                let m = &self.functor.modules[a];
                for i in 0..cat.dim(a) {
                    for k in 0..m.dim {
                        let mut xi = CVec::zeros(cat.dim(a));
                        xi[i] = re(1.0);
                        let mut xk = CVec::zeros(m.dim);
                        xk[k] = re(1.0);
                        let x = self.elementary(a, &xi, &xk);
                        let left = self.multiply(&self.from_base(&ep), &x);
                        let right = self.multiply(&x, &self.from_base(&ep));
                        let el = self.elementary(a, &xi, &(&m.left[p] * &xk));
                        let er = self.elementary(a, &xi, &(&m.right[p] * &xk));
                        sub.update(max_abs_vec(&(left - el)).max(max_abs_vec(&(right - er))), || {
                            format!("module action at {}", cat.label(a))
                        });
                    }
                }
            }
        }
        rep.push("base_subalgebra", sub);
        let star_on_a = (0..base.dim())
            .map(|p| {
                let ep = base.basis(p);
                max_abs_vec(&(self.star(&self.from_base(&ep)) - self.from_base(&base.star(&ep))))
            })
            .fold(0.0, f64::max);
        rep.push("base_involution", Worst { residual: star_on_a, at: None });
        rep.push_lower_bound(
            "expectation_faithful",
            self.table.gram_min_eigenvalue(),
            0.0,
            "smallest eigenvalue of the Gram matrix of τ∘E",
        );

        // Independence of π from the decomposition: rotate each isotypic block.
        let mut pi_ind = Worst::new();
        let mut pi_hom = Worst::new();
        for a in 0..cat.n_irreps() {
            for b in 0..cat.n_irreps() {
                let (ma, mb) = (self.functor.dim(a), self.functor.dim(b));
                if ma == 0 || mb == 0 {
                    continue;
                }
                let d1 = self.default_decomposition(a, b);
                let d2 = rotated_decomposition(&d1, &mut rng);
                let (da, db) = (cat.dim(a), cat.dim(b));
                let xi = random_vec(&mut rng, da);
                let zeta = random_vec(&mut rng, db);
                let x = random_vec(&mut rng, ma);
                let y = random_vec(&mut rng, mb);
                let big_xi = crate::linalg::kron_vec(&xi, &zeta);
                let big_z = crate::linalg::kron_vec(&x, &y);
                let p1 = self.pi_word(a, b, &d1, &big_xi, &big_z);
                let p2 = self.pi_word(a, b, &d2, &big_xi, &big_z);
                pi_ind.update(max_abs_vec(&(&p1 - p2)), || format!("({}, {})", cat.label(a), cat.label(b)));
                let prod = self.multiply(&self.elementary(a, &xi, &x), &self.elementary(b, &zeta, &y));
                pi_hom.update(max_abs_vec(&(p1 - prod)), || format!("({}, {})", cat.label(a), cat.label(b)));
            }
        }
        rep.push("pi_decomposition_independent", pi_ind);
        rep.push("pi_homomorphism", pi_hom);

        self.verify_coaction(&mut rep);
        BuildReport {
            algebra_dim: self.dim,
            component_dims: (0..cat.n_irreps()).map(|a| (cat.label(a).to_string(), self.component_dim(a))).collect(),
            checks: rep,
        }
    }

    fn verify_coaction(&self, rep: &mut Report) {
        let cat = &self.functor.category;
        let g = &cat.backend.group;
        let n = g.order();
        let thetas: Vec<CMat> = (0..n).map(|x| self.coaction(x)).collect();
        match cat.kind() {
            BackendKind::Group => {
                let counit = max_abs(&(&thetas[g.identity] - identity(self.dim)));
                rep.push("coaction_counit", Worst { residual: counit, at: None });
                let mut coassoc = Worst::new();
                for a in 0..n {
                    for b in 0..n {
                        let r = max_abs(&(&thetas[a] * &thetas[b] - &thetas[g.mul[b][a]]));
                        coassoc.update(r, || format!("({}, {})", g.labels[a], g.labels[b]));
                    }
                }
                rep.push("coaction_coassociative", coassoc);
                if cat.is_twisted() {
                    rep.skip("coaction_star_homomorphism", "coaction of a twisted quantum group");
                } else {
                    let mut hom = Worst::new();
                    for (x, th) in thetas.iter().enumerate() {
                        for p in 0..self.dim {
                            let bp = self.table.basis(p);
                            let r = max_abs_vec(&(th * self.star(&bp) - self.star(&(th * &bp))));
                            hom.update(r, || format!("star at {}", g.labels[x]));
                            for q in 0..self.dim {
                                let bq = self.table.basis(q);
                                let lhs = th * self.table.mul(&bp, &bq);
                                let rhs = self.table.mul(&(th * &bp), &(th * &bq));
                                hom.update(max_abs_vec(&(lhs - rhs)), || format!("product at {}", g.labels[x]));
                            }
                        }
                    }
                    rep.push("coaction_star_homomorphism", hom);
                }
                // Fixed points: common kernel of Θ_g − 1.
                let mut stacked = CMat::zeros(n * self.dim, self.dim);
                for (x, th) in thetas.iter().enumerate() {
                    stacked.view_mut((x * self.dim, 0), (self.dim, self.dim)).copy_from(&(th - identity(self.dim)));
                }
                let fixed = crate::linalg::null_space(&stacked, crate::linalg::RANK_TOL).ncols();
                rep.push_flag(
                    "coaction_fixed_points",
                    fixed == self.functor.base.dim(),
                    &format!("fixed point dimension {fixed}"),
                );
            }
            BackendKind::Dual => {
                let mut grading = Worst::new();
                for p in 0..self.dim {
                    let bp = self.table.basis(p);
                    let gp = self.degree_of(p);
                    let r = max_abs_vec(&(&thetas[g.inverse[gp]] * self.star(&bp) - self.star(&bp)));
                    grading.update(r, || format!("star of basis {p}"));
                    for q in 0..self.dim {
                        let gq = self.degree_of(q);
                        let prod = self.table.mul(&bp, &self.table.basis(q));
                        let r = max_abs_vec(&(&thetas[g.mul[gp][gq]] * &prod - &prod));
                        grading.update(r, || format!("product of basis {p}, {q}"));
                    }
                }
                rep.push("grading_compatible", grading);
            }
        }
    }

    /// Irrep label of the component containing the flat index `p`.
    pub fn degree_of(&self, p: usize) -> usize {
        (0..self.offsets.len()).rev().find(|&a| self.offsets[a] <= p && self.component_dim(a) > 0).unwrap_or(0)
    }

    /// Matrix of the product, `mult[(p, q)]` as coordinates, for reports.
    pub fn multiplication_table(&self) -> Vec<Vec<SparseVec>> {
        (0..self.dim)
            .map(|p| {
                (0..self.dim)
                    .map(|q| {
                        let v = self.table.left[p].column(q);
                        v.iter()
                            .enumerate()
                            .filter(|(_, z)| z.norm() >= PRUNE)
                            .map(|(k, z)| (k, [z.re, z.im]))
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }
}

fn rotated_decomposition<R: Rng>(d: &[(usize, CMat)], rng: &mut R) -> Vec<(usize, CMat)> {
    // Mix isometries of equal target irrep by a random unitary and reverse the order.
    let mut out = Vec::new();
    let mut labels: Vec<usize> = d.iter().map(|(c, _)| *c).collect();
    labels.dedup();
    for c in labels.into_iter().rev() {
        let group: Vec<&CMat> = d.iter().filter(|(x, _)| *x == c).map(|(_, w)| w).collect();
        let m = group.len();
        let g = crate::linalg::random_complex(rng, m, m);
        let q = g.qr().q();
        for i in 0..m {
            let mut w = CMat::zeros(group[0].nrows(), group[0].ncols());
            for j in 0..m {
                w += group[j] * q[(j, i)];
            }
            out.push((c, w));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbmod::FdCStarAlgebra;
    use crate::qcat::{Backend, RepCategory, TAU};
    use crate::wutf::trivial_functor;

    #[test]
    fn trivial_functor_builds_base_algebra() {
        let cat = RepCategory::new(Backend::symmetric3());
        let base = FdCStarAlgebra::new(vec![1, 2]).unwrap();
        let f = trivial_functor(cat, base.clone());
        let b = build(&f, TAU).unwrap();
        assert_eq!(b.dim, base.dim());
        let report = b.verify(1e-9, 0, 10);
        assert!(report.checks.passed(), "{:?}", report.checks.failures());
    }
}
