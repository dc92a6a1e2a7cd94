//! From actions to functors: fixed-point algebras, spectral subspaces, the
//! spectral functor and the round trip through `B_F`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbmod::{Correspondence, FdCStarAlgebra, StarAlgebraTable};
use crate::linalg::{
    identity, kron, max_abs, max_abs_vec, null_space, pinv, rank, re, seeded_rng, singular_values, stack_columns,
    wedderburn, CMat, CVec, RANK_TOL,
};
use crate::qcat::{Backend, BackendKind, RepCategory};
use crate::reconstruct::{build, ReconstructedAlgebra};
use crate::report::{Report, Worst};
use crate::wutf::{check_natural_iso, FunctorData};

#[derive(Clone, Debug)]
pub enum ActionKind {
    /// One automorphism per group element, acting on flat coordinates.
    Automorphisms(Vec<CMat>),
    /// A basis of `B` (columns) with the degree of each basis vector.
    Grading { basis: CMat, degrees: Vec<usize> },
}

/// The fixed-point algebra `A` with its embedding `A → B` (columns are the
/// images of the matrix units of `A`).
#[derive(Clone, Debug)]
pub struct FixedAlgebra {
    pub algebra: FdCStarAlgebra,
    pub embedding: CMat,
}

#[derive(Clone, Debug)]
pub struct ActionData {
    pub backend: Backend,
    pub algebra: StarAlgebraTable,
    pub kind: ActionKind,
    /// A known fixed-point algebra; computed when absent.
    pub base: Option<FixedAlgebra>,
}

impl ActionData {
    pub fn new(backend: Backend, algebra: StarAlgebraTable, kind: ActionKind) -> ActionData {
        ActionData { backend, algebra, kind, base: None }
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim
    }

    /// The automorphism `α_g`, or the degree-`g` projection for gradings.
    pub fn operator(&self, g: usize) -> CMat {
        match &self.kind {
            ActionKind::Automorphisms(m) => m[g].clone(),
            ActionKind::Grading { basis, degrees } => {
                let inv = pinv(basis);
                let diag = CMat::from_diagonal(&CVec::from_iterator(
                    degrees.len(),
                    degrees.iter().map(|&d| if d == g { re(1.0) } else { re(0.0) }),
                ));
                basis * diag * inv
            }
        }
    }

    /// Residuals of the action axioms.
    pub fn validate(&self, tol: f64) -> Result<Report> {
        let n = self.dim();
        let g = &self.backend.group;
        let mut rep = Report::new(tol);
        let alg = &self.algebra;
        match (&self.kind, self.backend.kind) {
            (ActionKind::Automorphisms(m), BackendKind::Group) => {
                if m.len() != g.order() || m.iter().any(|a| a.shape() != (n, n)) {
                    return Err(Error::Dimension("one n×n automorphism per group element expected".into()));
                }
                let mut hom = Worst::new();
                let mut auto = Worst::new();
                for x in 0..g.order() {
                    for y in 0..g.order() {
                        hom.update(max_abs(&(&m[x] * &m[y] - &m[g.mul[x][y]])), || {
                            format!("({}, {})", g.labels[x], g.labels[y])
                        });
                    }
                    auto.update(max_abs_vec(&(&m[x] * &alg.unit - &alg.unit)), || format!("unit at {}", g.labels[x]));
                    for p in 0..n {
                        let bp = alg.basis(p);
                        let r = max_abs_vec(&(&m[x] * alg.star(&bp) - alg.star(&(&m[x] * &bp))));
                        auto.update(r, || format!("star at {}", g.labels[x]));
                        for q in 0..n {
                            let bq = alg.basis(q);
                            let lhs = &m[x] * alg.mul(&bp, &bq);
                            let rhs = alg.mul(&(&m[x] * &bp), &(&m[x] * &bq));
                            auto.update(max_abs_vec(&(lhs - rhs)), || format!("product at {}", g.labels[x]));
                        }
                    }
                }
                rep.push("homomorphism", hom);
                rep.push("star_automorphism", auto);
            }
            (ActionKind::Grading { basis, degrees }, BackendKind::Dual) => {
                if basis.shape() != (n, n) || degrees.len() != n || degrees.iter().any(|&d| d >= g.order()) {
                    return Err(Error::Dimension("grading needs a square basis and one degree per vector".into()));
                }
                let independent = rank(basis, RANK_TOL) == n;
                rep.push_flag("independent", independent, "grading basis spans B");
                if !independent {
                    return Ok(rep);
                }
                let proj: Vec<CMat> = (0..g.order()).map(|x| self.operator(x)).collect();
                let mut w = Worst::new();
                for p in 0..n {
                    let bp = basis.column(p).into_owned();
                    let dp = degrees[p];
                    let s = alg.star(&bp);
                    w.update(max_abs_vec(&(&proj[g.inverse[dp]] * &s - &s)), || format!("star of vector {p}"));
                    for q in 0..n {
                        let bq = basis.column(q).into_owned();
                        let prod = alg.mul(&bp, &bq);
                        let target = &proj[g.mul[dp][degrees[q]]];
                        w.update(max_abs_vec(&(target * &prod - &prod)), || format!("product of vectors {p}, {q}"));
                    }
                }
                w.update(max_abs_vec(&(&proj[g.identity] * &alg.unit - &alg.unit)), || "unit".into());
                rep.push("grading", w);
            }
            _ => return Err(Error::Config("action kind does not match the backend".into())),
        }
        Ok(rep)
    }

    /// Fixed points `A ⊂ B` with recovered block structure.
    pub fn fixed_algebra(&self) -> Result<FixedAlgebra> {
        if let Some(b) = &self.base {
            return Ok(b.clone());
        }
        let n = self.dim();
        let g = &self.backend.group;
        let fixed = match &self.kind {
            ActionKind::Automorphisms(m) => {
                let mut stacked = CMat::zeros(g.order() * n, n);
                for (x, a) in m.iter().enumerate() {
                    stacked.view_mut((x * n, 0), (n, n)).copy_from(&(a - identity(n)));
                }
                null_space(&stacked, RANK_TOL)
            }
            ActionKind::Grading { basis, degrees } => {
                let cols: Vec<CVec> =
                    (0..n).filter(|&p| degrees[p] == g.identity).map(|p| basis.column(p).into_owned()).collect();
                stack_columns(&cols, n)
            }
        };
        let alg = &self.algebra;
        let span: Vec<CMat> = (0..fixed.ncols()).map(|k| alg.regular(&fixed.column(k).into_owned())).collect();
        let mut rng = seeded_rng(0);
        let w = wedderburn(&span, n, &mut rng)
            .ok_or_else(|| Error::Validation("fixed points do not form a C*-subalgebra".into()))?;
        // Pull matrix units back from the regular representation.
        let gs = crate::linalg::psd_sqrt(&alg.gram());
        let gis = crate::linalg::psd_inv_sqrt(&alg.gram());
        let cols: Vec<CVec> = w.units.iter().map(|u| &gis * u * &gs * &alg.unit).collect();
        Ok(FixedAlgebra { algebra: FdCStarAlgebra::new(w.blocks)?, embedding: stack_columns(&cols, n) })
    }

    /// Basis (columns, index `i · dim B + b`) of the spectral subspace `(H_α ⊗ B)^G`.
    pub fn spectral_subspace(&self, a: usize) -> Result<CMat> {
        let n = self.dim();
        let g = &self.backend.group;
        match (&self.kind, self.backend.kind) {
            (ActionKind::Automorphisms(m), BackendKind::Group) => {
                let u = &self.backend.irreps[a].matrices;
                let d = self.backend.dim(a);
                // α_{g⁻¹}(x_i) = Σ_j U(g)_ij x_j for every g.
                let mut stacked = CMat::zeros(g.order() * d * n, d * n);
                for x in 0..g.order() {
                    let block = kron(&identity(d), &m[g.inverse[x]]) - kron(&u[x], &identity(n));
                    stacked.view_mut((x * d * n, 0), (d * n, d * n)).copy_from(&block);
                }
                Ok(null_space(&stacked, RANK_TOL))
            }
            (ActionKind::Grading { basis, degrees }, BackendKind::Dual) => {
                let cols: Vec<CVec> =
                    (0..n).filter(|&p| degrees[p] == a).map(|p| basis.column(p).into_owned()).collect();
                Ok(stack_columns(&cols, n))
            }
            _ => Err(Error::Config("action kind does not match the backend".into())),
        }
    }
}

/// The spectral functor together with the bases realizing each `M_α`.
#[derive(Clone, Debug)]
pub struct SpectralFunctor {
    pub functor: FunctorData,
    pub fixed: FixedAlgebra,
    /// Columns span `(H_α ⊗ B)^G`, index `i · dim B + b`.
    pub bases: Vec<CMat>,
}

fn components(v: &CVec, d: usize, n: usize) -> Vec<CVec> {
    (0..d).map(|i| v.rows(i * n, n).into_owned()).collect()
}

/// Assembles `M_α = (H_α ⊗ B)^G` and `φ(T) = F(T)F_2`.
pub fn spectral_functor(act: &ActionData) -> Result<SpectralFunctor> {
    let cat = RepCategory::new(act.backend.clone());
    let fixed = act.fixed_algebra()?;
    let a_alg = fixed.algebra.clone();
    let emb = &fixed.embedding;
    let emb_pinv = pinv(emb);
    let alg = &act.algebra;
    let n = act.dim();
    let nirr = cat.n_irreps();
    let mut bases = Vec::with_capacity(nirr);
    for a in 0..nirr {
        if a == cat.trivial() {
            bases.push(emb.clone());
        } else {
            bases.push(act.spectral_subspace(a)?);
        }
    }
    let psi: Vec<CVec> = (0..a_alg.dim()).map(|k| emb.column(k).into_owned()).collect();
    let mut modules = Vec::with_capacity(nirr);
    let mut coords = Vec::with_capacity(nirr);
    for a in 0..nirr {
        let q = &bases[a];
        let d = cat.dim(a);
        let qp = pinv(q);
        let dm = q.ncols();
        let map_each = |f: &dyn Fn(&CVec) -> CVec| -> CMat {
            let cols: Vec<CVec> = (0..dm)
                .map(|j| {
                    let comps = components(&q.column(j).into_owned(), d, n);
                    let mut v = CVec::zeros(d * n);
                    for (i, c) in comps.iter().enumerate() {
                        v.rows_mut(i * n, n).copy_from(&f(c));
                    }
                    &qp * v
                })
                .collect();
            stack_columns(&cols, dm)
        };
        let left: Vec<CMat> = psi.iter().map(|p| map_each(&|x: &CVec| alg.mul(p, x))).collect();
        let right: Vec<CMat> = psi.iter().map(|p| map_each(&|x: &CVec| alg.mul(x, p))).collect();
        let mut inner = vec![CMat::zeros(dm, dm); a_alg.dim()];
        for p in 0..dm {
            let cp = components(&q.column(p).into_owned(), d, n);
            for r in 0..dm {
                let cr = components(&q.column(r).into_owned(), d, n);
                let mut s = CVec::zeros(n);
                for i in 0..d {
                    s += alg.mul(&alg.star(&cp[i]), &cr[i]);
                }
                let ak = &emb_pinv * s;
                for k in 0..a_alg.dim() {
                    inner[k][(p, r)] = ak[k];
                }
            }
        }
        modules.push(Correspondence { algebra: a_alg.clone(), dim: dm, left, right, inner });
        coords.push(qp);
    }
    let mut phi = BTreeMap::new();
    let keys: Vec<_> = cat.fusion_keys().cloned().collect();
    for (a, b, c) in keys {
        let (qa, qb) = (&bases[a], &bases[b]);
        let (da, db) = (cat.dim(a), cat.dim(b));
        // F_2(X ⊗ Y) = Σ ξ_i ⊗ ζ_j ⊗ x_i y_j, index (i·db + j)·n + b.
        let mut f2 = CMat::zeros(da * db * n, qa.ncols() * qb.ncols());
        for p in 0..qa.ncols() {
            let xp = components(&qa.column(p).into_owned(), da, n);
            for r in 0..qb.ncols() {
                let yr = components(&qb.column(r).into_owned(), db, n);
                let mut col = CVec::zeros(da * db * n);
                for i in 0..da {
                    for j in 0..db {
                        col.rows_mut((i * db + j) * n, n).copy_from(&alg.mul(&xp[i], &yr[j]));
                    }
                }
                f2.set_column(p * qb.ncols() + r, &col);
            }
        }
        let tensors = cat.fusion(a, b, c).iter().map(|t| &coords[c] * kron(t, &identity(n)) * &f2).collect();
        phi.insert((a, b, c), tensors);
    }
    let functor = FunctorData { category: cat, base: a_alg, modules, phi };
    Ok(SpectralFunctor { functor, fixed, bases })
}

impl SpectralFunctor {
    /// Residual of `S_X[T]* Z = X*_{13}(T* ⊗ ι)Z` against the module adjoint.
    pub fn s_x_star_residual(&self, act: &ActionData, tol: f64) -> Result<f64> {
        let f = &self.functor;
        let cat = &f.category;
        let alg = &act.algebra;
        let n = act.dim();
        let mut worst: f64 = 0.0;
        for &(a, b, c) in cat.fusion_keys() {
            let (da, db) = (cat.dim(a), cat.dim(b));
            let qb_p = pinv(&self.bases[b]);
            for (k, t) in cat.fusion(a, b, c).iter().enumerate() {
                for x in 0..f.dim(a) {
                    let mut xv = CVec::zeros(f.dim(a));
                    xv[x] = re(1.0);
                    let adj = f.s_x_adjoint(a, b, c, k, &xv, tol)?;
                    let Some(adj) = adj.matrix() else { return Ok(f64::INFINITY) };
                    let xc = components(&self.bases[a].column(x).into_owned(), da, n);
                    for z in 0..f.dim(c) {
                        let zv = self.bases[c].column(z).into_owned();
                        let tz = kron(&t.adjoint(), &identity(n)) * zv;
                        let mut out = CVec::zeros(db * n);
                        for j in 0..db {
                            let mut s = CVec::zeros(n);
                            for i in 0..da {
                                s += alg.mul(&alg.star(&xc[i]), &tz.rows((i * db + j) * n, n).into_owned());
                            }
                            out.rows_mut(j * n, n).copy_from(&s);
                        }
                        let formula = &qb_p * out;
                        worst = worst.max(max_abs_vec(&(formula - adj.column(z))));
                    }
                }
            }
        }
        Ok(worst)
    }

    /// `dim (H_α ⊗ B)^G` per irrep and `Σ_α dim H_α · dim (H_α ⊗ B)^G`.
    pub fn peter_weyl(&self) -> (Vec<usize>, usize) {
        let cat = &self.functor.category;
        let dims: Vec<usize> = (0..cat.n_irreps()).map(|a| self.bases[a].ncols()).collect();
        let total = dims.iter().enumerate().map(|(a, &m)| cat.dim(a) * m).sum();
        (dims, total)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub checks: Report,
    /// Matrix of the isomorphism `B_F → B` as rows of `[re, im]` pairs.
    pub matrix: Vec<Vec<[f64; 2]>>,
}

pub fn matrix_json(m: &CMat) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

/// The map `π(ξ̄ ⊗ X) ↦ (ξ̄ ⊗ ι)(X)` from `B_F` to `B`.
pub fn roundtrip_map(sf: &SpectralFunctor, bf: &ReconstructedAlgebra, n: usize) -> CMat {
    let cat = &sf.functor.category;
    let mut psi = CMat::zeros(n, bf.dim);
    for a in 0..cat.n_irreps() {
        let d = cat.dim(a);
        for k in 0..sf.functor.dim(a) {
            let comps = components(&sf.bases[a].column(k).into_owned(), d, n);
            for (i, c) in comps.iter().enumerate() {
                psi.set_column(bf.index(a, i, k), c);
            }
        }
    }
    psi
}

/// Certifies that `Ψ: B_F → B` is a `G`-equivariant *-isomorphism restricting
/// to the embedding on `A`.
pub fn certify_isomorphism(
    psi: &CMat,
    bf: &ReconstructedAlgebra,
    act: &ActionData,
    embedding: &CMat,
    tol: f64,
) -> Report {
    let mut rep = Report::new(tol);
    let alg = &act.algebra;
    let square = psi.nrows() == psi.ncols();
    let smin = singular_values(psi).last().cloned().unwrap_or(0.0);
    rep.push_lower_bound(
        "bijective",
        if square { smin } else { 0.0 },
        tol,
        "smallest singular value of the isomorphism matrix",
    );
    let mut mult = Worst::new();
    let mut star = Worst::new();
    for p in 0..bf.dim {
        let bp = bf.table.basis(p);
        let ip = psi * &bp;
        star.update(max_abs_vec(&(psi * bf.star(&bp) - alg.star(&ip))), || format!("basis {p}"));
        for q in 0..bf.dim {
            let bq = bf.table.basis(q);
            let lhs = psi * bf.multiply(&bp, &bq);
            let rhs = alg.mul(&ip, &(psi * &bq));
            mult.update(max_abs_vec(&(lhs - rhs)), || format!("basis ({p}, {q})"));
        }
    }
    rep.push("multiplicative", mult);
    rep.push("star_preserving", star);
    let g = &act.backend.group;
    let mut eq = Worst::new();
    for x in 0..g.order() {
        let lhs = match act.backend.kind {
            // Ψ Θ_g = α_{g⁻¹} Ψ.
            BackendKind::Group => psi * bf.coaction(x) - act.operator(g.inverse[x]) * psi,
            BackendKind::Dual => psi * bf.coaction(x) - act.operator(x) * psi,
        };
        eq.update(max_abs(&lhs), || g.labels[x].clone());
    }
    rep.push("equivariant", eq);
    let a_dim = bf.functor.base.dim();
    let mut on_a = Worst::new();
    for k in 0..a_dim {
        let ek = bf.functor.base.basis(k);
        let r = max_abs_vec(&(psi * bf.from_base(&ek) - embedding.column(k)));
        on_a.update(r, || format!("basis {k}"));
    }
    rep.push("identity_on_base", on_a);
    rep
}

/// Checks that `map` is a unital *-isomorphism between two algebra tables.
pub fn algebra_isomorphism(src: &StarAlgebraTable, dst: &StarAlgebraTable, map: &CMat, tol: f64) -> Report {
    let mut rep = Report::new(tol);
    if map.shape() != (dst.dim, src.dim) || src.dim != dst.dim {
        rep.push_flag("bijective", false, "dimensions differ");
        return rep;
    }
    let smin = singular_values(map).last().cloned().unwrap_or(0.0);
    rep.push_lower_bound("bijective", smin, tol, "smallest singular value of the isomorphism matrix");
    let mut mult = Worst::new();
    let mut star = Worst::new();
    for p in 0..src.dim {
        let bp = src.basis(p);
        let ip = map * &bp;
        star.update(max_abs_vec(&(map * src.star(&bp) - dst.star(&ip))), || format!("basis {p}"));
        for q in 0..src.dim {
            let bq = src.basis(q);
            let lhs = map * src.mul(&bp, &bq);
            mult.update(max_abs_vec(&(lhs - dst.mul(&ip, &(map * &bq)))), || format!("basis ({p}, {q})"));
        }
    }
    rep.push("multiplicative", mult);
    rep.push("star_preserving", star);
    let mut unit = Worst::new();
    unit.update(max_abs_vec(&(map * &src.unit - &dst.unit)), || "unit".into());
    rep.push("unital", unit);
    rep
}

/// Builds `B_F` for the spectral functor of `act` and certifies `B_F ≅ B`.
pub fn roundtrip_check(act: &ActionData, tol: f64) -> Result<(Certificate, CMat)> {
    let sf = spectral_functor(act)?;
    let bf = build(&sf.functor, tol)?;
    let psi = roundtrip_map(&sf, &bf, act.dim());
    let checks = certify_isomorphism(&psi, &bf, act, &sf.fixed.embedding, tol);
    Ok((Certificate { checks, matrix: matrix_json(&psi) }, psi))
}

/// `B_F` with its coaction, viewed as an action whose fixed points are `A`.
pub fn as_action(bf: &ReconstructedAlgebra) -> ActionData {
    let cat = &bf.functor.category;
    let g = &cat.backend.group;
    let kind = match cat.kind() {
        BackendKind::Group => ActionKind::Automorphisms((0..g.order()).map(|x| bf.coaction(g.inverse[x])).collect()),
        BackendKind::Dual => {
            ActionKind::Grading { basis: identity(bf.dim), degrees: (0..bf.dim).map(|p| bf.degree_of(p)).collect() }
        }
    };
    let base = &bf.functor.base;
    let cols: Vec<CVec> = (0..base.dim()).map(|k| bf.from_base(&base.basis(k))).collect();
    ActionData {
        backend: cat.backend.clone(),
        algebra: bf.table.clone(),
        kind,
        base: Some(FixedAlgebra { algebra: base.clone(), embedding: stack_columns(&cols, bf.dim) }),
    }
}

/// Compares `F` with the spectral functor of `B_F` through the canonical maps
/// `X ↦ Σ_i ξ_i ⊗ (ξ̄_i ⊗ X)`.
pub fn functor_roundtrip(f: &FunctorData, tol: f64) -> Result<Report> {
    let bf = build(f, tol)?;
    let act = as_action(&bf);
    let sf = spectral_functor(&act)?;
    let cat = &f.category;
    let n = bf.dim;
    let mut maps = Vec::with_capacity(cat.n_irreps());
    let mut span = Worst::new();
    for a in 0..cat.n_irreps() {
        let d = cat.dim(a);
        let q = &sf.bases[a];
        let qp = pinv(q);
        let mut u = CMat::zeros(q.ncols(), f.dim(a));
        for k in 0..f.dim(a) {
            let mut v = CVec::zeros(d * n);
            for i in 0..d {
                v[i * n + bf.index(a, i, k)] = re(1.0);
            }
            let c = &qp * &v;
            span.update(max_abs_vec(&(q * &c - &v)), || cat.label(a).to_string());
            u.set_column(k, &c);
        }
        maps.push(u);
    }
    let mut rep = check_natural_iso(f, &sf.functor, &maps, tol);
    rep.push("maps_into_spectral_subspace", span);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcat::TAU;

    fn swap_action() -> ActionData {
        let b = FdCStarAlgebra::new(vec![1, 1]).unwrap();
        let swap = CMat::from_row_slice(2, 2, &[re(0.0), re(1.0), re(1.0), re(0.0)]);
        ActionData::new(Backend::abelian_group(&[2]), b.table(), ActionKind::Automorphisms(vec![identity(2), swap]))
    }

    #[test]
    fn swap_fixed_algebra_is_diagonal_c() {
        let act = swap_action();
        assert!(act.validate(TAU).unwrap().passed());
        let fixed = act.fixed_algebra().unwrap();
        assert_eq!(fixed.algebra.blocks, vec![1]);
        let col = fixed.embedding.column(0);
        assert!((col[0] - re(1.0)).norm() < 1e-10 && (col[1] - re(1.0)).norm() < 1e-10);
        assert_eq!(act.spectral_subspace(1).unwrap().ncols(), 1);
    }

    #[test]
    fn swap_roundtrip_certifies() {
        let act = swap_action();
        let sf = spectral_functor(&act).unwrap();
        let rep = sf.functor.validate(TAU).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures());
        assert!(sf.s_x_star_residual(&act, TAU).unwrap() < 1e-10);
        let (cert, _) = roundtrip_check(&act, TAU).unwrap();
        assert!(cert.checks.passed(), "{:?}", cert.checks.failures());
        let rep = functor_roundtrip(&sf.functor, TAU).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures());
    }
}
