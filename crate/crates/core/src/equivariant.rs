//! Equivariant Hilbert modules over an action and the functor
//! `U ↦ Mor(M, M ⊗ H_U)` they define.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbmod::{Correspondence, FdCStarAlgebra};
use crate::linalg::{
    frob_inner, hermitian_eigen, identity, kron, max_abs, max_abs_vec, null_space, pinv, psd_inv_sqrt, range_basis, re,
    seeded_rng, stack_columns, unvectorize, vectorize, wedderburn, CMat, CVec, RANK_TOL,
};
use crate::qcat::{BackendKind, Rep, RepCategory};
use crate::spectral::{ActionData, SpectralFunctor};
use crate::wutf::FunctorData;

/// A right `B`-submodule `M ⊂ C^n ⊗ B` invariant under the diagonal action.
///
/// Coordinates are orthonormal for `f(⟨·,·⟩_B)`, so module adjoints are
/// conjugate transposes.
#[derive(Clone, Debug)]
pub struct EquivariantModule {
    pub action: ActionData,
    pub rep: Rep,
    /// Columns span `M`, index `i · dim B + b`.
    pub basis: CMat,
    units: Option<(Vec<usize>, Vec<CMat>)>,
}

impl EquivariantModule {
    /// `M = span(q)`; checks closure under the right action and the group.
    pub fn new(action: ActionData, rep: Rep, q: &CMat, tol: f64) -> Result<EquivariantModule> {
        let nb = action.dim();
        let n = match &rep {
            Rep::Matrices(m) => m.first().map(|x| x.nrows()).unwrap_or(0),
            Rep::Graded(d) => d.len(),
        };
        if q.nrows() != n * nb {
            return Err(Error::Dimension(format!("module basis needs {} rows", n * nb)));
        }
        let q = range_basis(q, RANK_TOL);
        let metric = kron(&identity(n), &action.algebra.gram());
        let gram = q.adjoint() * &metric * &q;
        let basis = &q * psd_inv_sqrt(&gram);
        let m = EquivariantModule { action, rep, basis, units: None };
        let qp = pinv(&m.basis);
        let inside = |v: &CMat| max_abs(&(&m.basis * (&qp * v) - v));
        let mut worst: f64 = 0.0;
        for b in 0..nb {
            worst = worst.max(inside(&(m.full_right(b) * &m.basis)));
        }
        for g in 0..m.action.backend.group.order() {
            worst = worst.max(inside(&(m.full_group_op(g) * &m.basis)));
        }
        if worst > tol {
            return Err(Error::Validation(format!("span is not an equivariant submodule (residual {worst:.3e})")));
        }
        Ok(m)
    }

    /// `C^n ⊗ B` with the action twisted by `rep`; `rep` trivial of dimension 1 gives `B`.
    pub fn free(action: ActionData, rep: Rep, tol: f64) -> Result<EquivariantModule> {
        let n = match &rep {
            Rep::Matrices(m) => m.first().map(|x| x.nrows()).unwrap_or(0),
            Rep::Graded(d) => d.len(),
        };
        let dim = n * action.dim();
        EquivariantModule::new(action, rep, &identity(dim), tol)
    }

    /// `B` itself with `End(M)` identified with the fixed-point algebra through left
    /// multiplication, matching the spectral functor.
    pub fn regular(action: ActionData, tol: f64) -> Result<EquivariantModule> {
        let fixed = action.fixed_algebra()?;
        let rep = action.backend.trivial_rep(1);
        let mut m = EquivariantModule::free(action, rep, tol)?;
        let units = (0..fixed.algebra.dim())
            .map(|c| m.coords(&(m.action.algebra.left_matrix(&fixed.embedding.column(c).into_owned()) * &m.basis)))
            .collect();
        m.units = Some((fixed.algebra.blocks.clone(), units));
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.basis.nrows() / self.action.dim()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn coords(&self, v: &CMat) -> CMat {
        let metric = kron(&identity(self.n()), &self.action.algebra.gram());
        self.basis.adjoint() * metric * v
    }

    fn full_right(&self, b: usize) -> CMat {
        let alg = &self.action.algebra;
        kron(&identity(self.n()), &alg.right_matrix(&alg.basis(b)))
    }

    /// Group operator on `C^n ⊗ B`, or the degree projection for gradings.
    fn full_group_op(&self, g: usize) -> CMat {
        let grp = &self.action.backend.group;
        match &self.rep {
            Rep::Matrices(w) => kron(&w[g], &self.action.operator(g)),
            Rep::Graded(w) => {
                let nb = self.action.dim();
                let mut out = CMat::zeros(w.len() * nb, w.len() * nb);
                for (i, &wi) in w.iter().enumerate() {
                    let p = self.action.operator(grp.mul[wi][g]);
                    out.view_mut((i * nb, i * nb), (nb, nb)).copy_from(&p);
                }
                out
            }
        }
    }

    pub fn right(&self, b: usize) -> CMat {
        self.coords(&(self.full_right(b) * &self.basis))
    }

    pub fn group_op(&self, g: usize) -> CMat {
        self.coords(&(self.full_group_op(g) * &self.basis))
    }

    /// `⟨z, z'⟩_B` for coordinate vectors.
    pub fn inner(&self, z: &CVec, w: &CVec) -> CVec {
        let nb = self.action.dim();
        let alg = &self.action.algebra;
        let (u, v) = (&self.basis * z, &self.basis * w);
        let mut s = CVec::zeros(nb);
        for i in 0..self.n() {
            s += alg.mul(&alg.star(&u.rows(i * nb, nb).into_owned()), &v.rows(i * nb, nb).into_owned());
        }
        s
    }

    /// Operators on `M ⊗ H_α` (index `p · d_α + j`) that define equivariance.
    fn tensor_ops(&self, a: usize) -> Vec<CMat> {
        let be = &self.action.backend;
        let grp = &be.group;
        match be.kind {
            BackendKind::Group => {
                (0..grp.order()).map(|g| kron(&self.group_op(g), &be.irreps[a].matrices[g])).collect()
            }
            // deg(m ⊗ η_α) = α⁻¹ deg(m).
            BackendKind::Dual => (0..grp.order()).map(|g| self.group_op(grp.mul[a][g])).collect(),
        }
    }

    /// Basis of `Mor(M, M ⊗ H_α)` as `(d·d_α) × d` matrices.
    pub fn mor(&self, a: usize) -> Vec<CMat> {
        let be = &self.action.backend;
        let d = self.dim();
        let da = be.dim(a);
        let rows = d * da;
        let src: Vec<CMat> = (0..be.group.order()).map(|g| self.group_op(g)).collect();
        let dst = self.tensor_ops(a);
        let mut blocks = Vec::new();
        for b in 0..self.action.dim() {
            let r = self.right(b);
            let rt = kron(&r, &identity(da));
            blocks.push(kron(&r.transpose(), &identity(rows)) - kron(&identity(d), &rt));
        }
        for g in 0..be.group.order() {
            blocks.push(kron(&src[g].transpose(), &identity(rows)) - kron(&identity(d), &dst[g]));
        }
        let width = rows * d;
        let mut stacked = CMat::zeros(blocks.len() * width, width);
        for (k, b) in blocks.iter().enumerate() {
            stacked.view_mut((k * width, 0), (width, width)).copy_from(b);
        }
        let ns = null_space(&stacked, RANK_TOL);
        (0..ns.ncols()).map(|k| unvectorize(&ns.column(k).into_owned(), rows, d)).collect()
    }

    /// Block sizes and matrix units of `End(M)`.
    pub fn endomorphisms(&self) -> Result<(Vec<usize>, Vec<CMat>)> {
        if let Some(u) = &self.units {
            return Ok(u.clone());
        }
        let span = self.mor(self.action.backend.trivial);
        let mut rng = seeded_rng(0);
        let w = wedderburn(&span, self.dim(), &mut rng)
            .ok_or_else(|| Error::Validation("End(M) has no Wedderburn decomposition".into()))?;
        Ok((w.blocks, w.units))
    }
}

fn unit_coords(units: &[CMat], z: &CMat) -> CVec {
    CVec::from_iterator(units.len(), units.iter().map(|e| frob_inner(e, z) / frob_inner(e, e)))
}

/// The functor `U ↦ Mor(M, M ⊗ H_U)` with its canonical `φ`.
pub fn module_functor(m: &EquivariantModule) -> Result<FunctorData> {
    let be = &m.action.backend;
    let cat = RepCategory::new(be.clone());
    let (blocks, units) = m.endomorphisms()?;
    let base = FdCStarAlgebra::new(blocks)?;
    let d = m.dim();
    let nirr = cat.n_irreps();
    let mut bases: Vec<Vec<CMat>> = Vec::with_capacity(nirr);
    for a in 0..nirr {
        bases.push(if a == cat.trivial() { units.clone() } else { m.mor(a) });
    }
    let pinvs: Vec<CMat> = bases
        .iter()
        .map(|b| {
            let cols: Vec<CVec> = b.iter().map(vectorize).collect();
            let rows = b.first().map(|x| x.len()).unwrap_or(0);
            pinv(&stack_columns(&cols, rows))
        })
        .collect();
    let coords = |a: usize, y: &CMat| -> CVec { &pinvs[a] * vectorize(y) };
    let mut modules = Vec::with_capacity(nirr);
    for a in 0..nirr {
        let da = cat.dim(a);
        let xs = &bases[a];
        let k = xs.len();
        let map = |f: &dyn Fn(&CMat) -> CMat| -> CMat {
            let cols: Vec<CVec> = xs.iter().map(|x| coords(a, &f(x))).collect();
            stack_columns(&cols, k)
        };
        let left = units.iter().map(|e| map(&|x: &CMat| kron(e, &identity(da)) * x)).collect();
        let right = units.iter().map(|e| map(&|x: &CMat| x * e)).collect();
        let mut inner = vec![CMat::zeros(k, k); units.len()];
        for p in 0..k {
            for q in 0..k {
                let c = unit_coords(&units, &(xs[p].adjoint() * &xs[q]));
                for u in 0..units.len() {
                    inner[u][(p, q)] = c[u];
                }
            }
        }
        modules.push(Correspondence { algebra: base.clone(), dim: k, left, right, inner });
    }
    let mut phi = BTreeMap::new();
    let keys: Vec<_> = cat.fusion_keys().cloned().collect();
    for (a, b, c) in keys {
        let db = cat.dim(b);
        let tensors = cat
            .fusion(a, b, c)
            .iter()
            .map(|t| {
                let lift = kron(&identity(d), t);
                let mut out = CMat::zeros(bases[c].len(), bases[a].len() * bases[b].len());
                for (p, x) in bases[a].iter().enumerate() {
                    for (q, y) in bases[b].iter().enumerate() {
                        let z = &lift * kron(x, &identity(db)) * y;
                        out.set_column(p * bases[b].len() + q, &coords(c, &z));
                    }
                }
                out
            })
            .collect();
        phi.insert((a, b, c), tensors);
    }
    Ok(FunctorData { category: cat, base, modules, phi })
}

/// Maps `X = Σ ξ_i ⊗ x_i ↦ (m ↦ Σ_i x_i m ⊗ ξ_i)` from the spectral functor of
/// the action into the module functor of `B`.
pub fn spectral_to_module_maps(sf: &SpectralFunctor, m: &EquivariantModule, f: &FunctorData) -> Vec<CMat> {
    let cat = &sf.functor.category;
    let alg = &m.action.algebra;
    let nb = m.action.dim();
    (0..cat.n_irreps())
        .map(|a| {
            let da = cat.dim(a);
            let mor: Vec<CMat> = if a == cat.trivial() { m.endomorphisms().unwrap().1 } else { m.mor(a) };
            let cols: Vec<CVec> = mor.iter().map(vectorize).collect();
            let rows = mor.first().map(|x| x.len()).unwrap_or(0);
            let pi = pinv(&stack_columns(&cols, rows));
            let q = &sf.bases[a];
            let mut out = CMat::zeros(f.dim(a), q.ncols());
            for k in 0..q.ncols() {
                let mut t = CMat::zeros(m.dim() * da, m.dim());
                for i in 0..da {
                    let x = q.column(k).rows(i * nb, nb).into_owned();
                    let lx = m.coords(&(alg.left_matrix(&x) * &m.basis));
                    for p in 0..m.dim() {
                        for r in 0..m.dim() {
                            t[(p * da + i, r)] = lx[(p, r)];
                        }
                    }
                }
                out.set_column(k, &(&pi * vectorize(&t)));
            }
            out
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct FullnessReport {
    pub full: bool,
    /// Largest `c` with `⟨Y, Y⟩ ⪰ c Σ ⟨X_i, X_i⟩`.
    pub c: f64,
    /// Smallest eigenvalue of `⟨Y, Y⟩` in the regular representation.
    pub min_eigenvalue: f64,
    /// Rank of `⟨Y, Y⟩` against `dim B`.
    pub rank: usize,
    pub dim: usize,
    /// `max |⟨ι(x), ι(y)⟩ − x*y|` over basis pairs for `ι(x) = Y ⟨Y,Y⟩^{-1/2} x`.
    pub isometry_residual: f64,
    pub irreps_used: Vec<String>,
}

/// Searches the invariant vectors of `M ⊗ H_α` for a `Y` with `⟨Y, Y⟩` invertible.
pub fn fullness_check(m: &EquivariantModule, tol: f64) -> FullnessReport {
    let be = &m.action.backend;
    let alg = &m.action.algebra;
    let nb = m.action.dim();
    let d = m.dim();
    let mut sum_y = CVec::zeros(nb);
    let mut sum_x = CVec::zeros(nb);
    let mut pieces: Vec<(usize, CVec)> = Vec::new();
    let mut used = Vec::new();
    for a in 0..be.n_irreps() {
        let da = be.dim(a);
        let ops = m.tensor_ops(a);
        let mut stacked = CMat::zeros(ops.len() * d * da, d * da);
        for (g, op) in ops.iter().enumerate() {
            let block = match be.kind {
                BackendKind::Group => op - identity(d * da),
                BackendKind::Dual if g == be.group.identity => op - identity(d * da),
                BackendKind::Dual => op.clone(),
            };
            stacked.view_mut((g * d * da, 0), (d * da, d * da)).copy_from(&block);
        }
        let inv = null_space(&stacked, RANK_TOL);
        if inv.ncols() > 0 {
            used.push(be.irreps[a].label.clone());
        }
        for k in 0..inv.ncols() {
            let y = inv.column(k).into_owned();
            for j in 0..da {
                let z = CVec::from_iterator(d, (0..d).map(|p| y[p * da + j]));
                let g = m.inner(&z, &z);
                sum_y += &g;
                sum_x += g;
            }
            pieces.push((a, y));
        }
    }
    let (vals, _) = hermitian_eigen(&herm(&alg.regular(&sum_y)));
    let min_eigenvalue = vals.first().cloned().unwrap_or(0.0);
    let scale = vals.last().cloned().unwrap_or(0.0).max(1.0);
    let rank = vals.iter().filter(|&&v| v > tol * scale).count();
    let full = rank == nb && min_eigenvalue > tol;
    let mut c = 0.0;
    let mut isometry_residual = f64::INFINITY;
    if full {
        let sx = herm(&alg.regular(&sum_x));
        let w = psd_inv_sqrt(&sx);
        let (cv, _) = hermitian_eigen(&herm(&(&w * herm(&alg.regular(&sum_y)) * &w)));
        c = cv.first().cloned().unwrap_or(0.0);
        // ⟨Y h, Y k⟩ = h* ⟨Y,Y⟩ k for h = ⟨Y,Y⟩^{-1/2} x.
        let h = alg.apply_fn(&sum_y, |t| if t > 0.0 { t.powf(-0.5) } else { 0.0 });
        let mut worst: f64 = 0.0;
        for p in 0..nb {
            let bp = alg.basis(p);
            let hp = alg.mul(&h, &bp);
            for q in 0..nb {
                let bq = alg.basis(q);
                let hq = alg.mul(&h, &bq);
                let lhs = alg.mul(&alg.star(&hp), &alg.mul(&sum_y, &hq));
                worst = worst.max(max_abs_vec(&(lhs - alg.mul(&alg.star(&bp), &bq))));
            }
        }
        isometry_residual = worst;
    }
    FullnessReport { full, c, min_eigenvalue, rank, dim: nb, isometry_residual, irreps_used: used }
}

fn herm(m: &CMat) -> CMat {
    (m + m.adjoint()) * re(0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::qcat::TAU;
    use crate::spectral::spectral_functor;
    use crate::wutf::check_natural_iso;

    #[test]
    fn module_functor_of_b_matches_spectral_functor() {
        for (name, act) in fixtures::corpus() {
            let sf = spectral_functor(&act).unwrap();
            let m = EquivariantModule::regular(act, TAU).unwrap();
            let f = module_functor(&m).unwrap();
            let rep = f.validate(TAU).unwrap();
            assert!(rep.passed(), "{name}: {:?}", rep.failures());
            let maps = spectral_to_module_maps(&sf, &m, &f);
            let iso = check_natural_iso(&sf.functor, &f, &maps, TAU);
            assert!(iso.passed(), "{name}: {:?}", iso.failures());
        }
    }

    #[test]
    fn proper_corner_is_not_full() {
        let act = fixtures::trivial_action(crate::qcat::Backend::abelian_group(&[2]), vec![1, 1]);
        let p = CMat::from_diagonal(&CVec::from_vec(vec![re(1.0), re(0.0)]));
        let m = EquivariantModule::new(act.clone(), act.backend.trivial_rep(1), &p, TAU).unwrap();
        let r = fullness_check(&m, TAU);
        assert!(!r.full);
        assert_eq!(r.rank, 1);
        let whole = EquivariantModule::free(act.clone(), act.backend.trivial_rep(1), TAU).unwrap();
        let r = fullness_check(&whole, TAU);
        assert!(r.full && r.c > 0.0 && r.isometry_residual < 1e-9, "{r:?}");
    }
}
