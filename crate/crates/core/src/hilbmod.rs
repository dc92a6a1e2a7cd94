//! Finite-dimensional C*-algebras and C*-correspondences over them.
//!
//! An [`FdCStarAlgebra`] is a direct sum of full matrix blocks. Its flat
//! coordinates list the matrix units block by block, row-major inside each
//! block. A [`StarAlgebraTable`] describes an arbitrary finite-dimensional
//! *-algebra by structure constants together with a faithful positive trace;
//! reconstructed and deformed algebras are handled in that form.

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigen, identity, kron, lstsq, max_abs, max_abs_vec, null_space, psd_inv_sqrt, psd_sqrt, re,
    spectral_norm, stack_columns, CMat, CVec, C64, RANK_TOL,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FdCStarAlgebra {
    pub blocks: Vec<usize>,
}

impl FdCStarAlgebra {
    pub fn new(blocks: Vec<usize>) -> Result<FdCStarAlgebra> {
        if blocks.is_empty() || blocks.contains(&0) {
            return Err(Error::Config("blocks must be nonempty positive sizes".into()));
        }
        Ok(FdCStarAlgebra { blocks })
    }

    pub fn scalars() -> FdCStarAlgebra {
        FdCStarAlgebra { blocks: vec![1] }
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|n| n * n).sum()
    }

    /// Size of the concrete block-diagonal matrices.
    pub fn size(&self) -> usize {
        self.blocks.iter().sum()
    }

    pub fn offsets(&self) -> Vec<usize> {
        let mut off = 0;
        self.blocks
            .iter()
            .map(|n| {
                let o = off;
                off += n * n;
                o
            })
            .collect()
    }

    fn row_offsets(&self) -> Vec<usize> {
        let mut off = 0;
        self.blocks
            .iter()
            .map(|n| {
                let o = off;
                off += n;
                o
            })
            .collect()
    }

    /// `(block, i, j)` of the flat index `p`.
    pub fn unit_of(&self, p: usize) -> (usize, usize, usize) {
        let mut rest = p;
        for (b, &n) in self.blocks.iter().enumerate() {
            if rest < n * n {
                return (b, rest / n, rest % n);
            }
            rest -= n * n;
        }
        panic!("index {p} out of range");
    }

    pub fn index(&self, b: usize, i: usize, j: usize) -> usize {
        self.offsets()[b] + i * self.blocks[b] + j
    }

    pub fn to_matrix(&self, x: &CVec) -> CMat {
        let n = self.size();
        let rows = self.row_offsets();
        let mut m = CMat::zeros(n, n);
        for p in 0..self.dim() {
            let (b, i, j) = self.unit_of(p);
            m[(rows[b] + i, rows[b] + j)] = x[p];
        }
        m
    }

    pub fn from_matrix(&self, m: &CMat) -> CVec {
        let rows = self.row_offsets();
        CVec::from_fn(self.dim(), |p, _| {
            let (b, i, j) = self.unit_of(p);
            m[(rows[b] + i, rows[b] + j)]
        })
    }

    pub fn basis(&self, p: usize) -> CVec {
        let mut v = CVec::zeros(self.dim());
        v[p] = re(1.0);
        v
    }

    pub fn unit(&self) -> CVec {
        self.from_matrix(&identity(self.size()))
    }

    pub fn mul(&self, x: &CVec, y: &CVec) -> CVec {
        self.from_matrix(&(self.to_matrix(x) * self.to_matrix(y)))
    }

    pub fn star(&self, x: &CVec) -> CVec {
        self.from_matrix(&self.to_matrix(x).adjoint())
    }

    pub fn norm(&self, x: &CVec) -> f64 {
        spectral_norm(&self.to_matrix(x))
    }

    /// The faithful trace `Σ_b Tr(x_b)`.
    pub fn trace(&self, x: &CVec) -> C64 {
        self.to_matrix(x).trace()
    }

    pub fn is_positive(&self, x: &CVec, tol: f64) -> bool {
        let m = self.to_matrix(x);
        if max_abs(&(&m - m.adjoint())) > tol {
            return false;
        }
        hermitian_eigen(&m).0.first().is_none_or(|&v| v >= -tol)
    }

    pub fn table(&self) -> StarAlgebraTable {
        let d = self.dim();
        let left = (0..d)
            .map(|p| {
                let bp = self.to_matrix(&self.basis(p));
                let cols: Vec<CVec> =
                    (0..d).map(|q| self.from_matrix(&(&bp * self.to_matrix(&self.basis(q))))).collect();
                stack_columns(&cols, d)
            })
            .collect();
        let star = CMat::from_fn(d, d, |p, q| {
            let (b, i, j) = self.unit_of(q);
            if p == self.index(b, j, i) {
                re(1.0)
            } else {
                re(0.0)
            }
        });
        let trace = CVec::from_fn(d, |p, _| {
            let (_, i, j) = self.unit_of(p);
            if i == j {
                re(1.0)
            } else {
                re(0.0)
            }
        });
        StarAlgebraTable::new(left, star, self.unit(), trace).expect("matrix algebra table is valid")
    }
}

/// A finite-dimensional *-algebra given by structure constants.
#[derive(Clone, Debug)]
pub struct StarAlgebraTable {
    pub dim: usize,
    /// `left[p]` is the matrix of `y ↦ b_p y`.
    pub left: Vec<CMat>,
    /// `x* = star · conj(x)`.
    pub star: CMat,
    pub unit: CVec,
    /// Faithful positive functional `f(x) = Σ_p trace[p] x_p`.
    pub trace: CVec,
    gram_sqrt: CMat,
    gram_inv_sqrt: CMat,
    gram_min: f64,
}

impl StarAlgebraTable {
    pub fn new(left: Vec<CMat>, star: CMat, unit: CVec, trace: CVec) -> Result<StarAlgebraTable> {
        let dim = left.len();
        if star.shape() != (dim, dim) || unit.len() != dim || trace.len() != dim {
            return Err(Error::Dimension("inconsistent algebra table".into()));
        }
        let mut t = StarAlgebraTable {
            dim,
            left,
            star,
            unit,
            trace,
            gram_sqrt: CMat::zeros(0, 0),
            gram_inv_sqrt: CMat::zeros(0, 0),
            gram_min: 0.0,
        };
        let g = t.gram();
        let (vals, _) = hermitian_eigen(&g);
        t.gram_min = vals.first().cloned().unwrap_or(1.0);
        if dim > 0 && t.gram_min <= 0.0 {
            return Err(Error::Validation(format!(
                "trace functional is not faithful (min Gram eigenvalue {:.3e})",
                t.gram_min
            )));
        }
        t.gram_sqrt = psd_sqrt(&g);
        t.gram_inv_sqrt = psd_inv_sqrt(&g);
        Ok(t)
    }

    pub fn basis(&self, p: usize) -> CVec {
        let mut v = CVec::zeros(self.dim);
        v[p] = re(1.0);
        v
    }

    pub fn left_matrix(&self, x: &CVec) -> CMat {
        let mut m = CMat::zeros(self.dim, self.dim);
        for (p, lp) in self.left.iter().enumerate() {
            if x[p] != C64::new(0.0, 0.0) {
                m += lp * x[p];
            }
        }
        m
    }

    /// Matrix of `y ↦ y x`.
    pub fn right_matrix(&self, x: &CVec) -> CMat {
        let cols: Vec<CVec> = (0..self.dim).map(|q| &self.left[q] * x).collect();
        stack_columns(&cols, self.dim)
    }

    pub fn mul(&self, x: &CVec, y: &CVec) -> CVec {
        self.left_matrix(x) * y
    }

    pub fn star(&self, x: &CVec) -> CVec {
        &self.star * x.map(|z| z.conj())
    }

    pub fn functional(&self, x: &CVec) -> C64 {
        self.trace.iter().zip(x.iter()).map(|(a, b)| a * b).sum()
    }

    /// `G[p, q] = f(b_p* b_q)`.
    pub fn gram(&self) -> CMat {
        CMat::from_fn(self.dim, self.dim, |p, q| self.functional(&self.mul(&self.star(&self.basis(p)), &self.basis(q))))
    }

    pub fn gram_min_eigenvalue(&self) -> f64 {
        self.gram_min
    }

    /// Left multiplication by `x` in the orthonormal GNS frame.
    pub fn regular(&self, x: &CVec) -> CMat {
        &self.gram_sqrt * self.left_matrix(x) * &self.gram_inv_sqrt
    }

    /// The C*-norm, realized as the operator norm of the regular representation.
    pub fn norm(&self, x: &CVec) -> f64 {
        spectral_norm(&self.regular(x))
    }

    pub fn is_self_adjoint(&self, x: &CVec, tol: f64) -> bool {
        max_abs_vec(&(self.star(x) - x)) <= tol * (1.0 + max_abs_vec(x))
    }

    /// Smallest spectral value of the self-adjoint part of `x`.
    pub fn min_spectrum(&self, x: &CVec) -> f64 {
        let l = self.regular(x);
        hermitian_eigen(&((&l + l.adjoint()) * re(0.5))).0.first().cloned().unwrap_or(0.0)
    }

    pub fn is_positive(&self, x: &CVec, tol: f64) -> bool {
        self.is_self_adjoint(x, tol) && self.min_spectrum(x) >= -tol
    }

    /// Continuous functional calculus of a self-adjoint element.
    pub fn apply_fn(&self, x: &CVec, f: impl Fn(f64) -> f64) -> CVec {
        let l = self.regular(x);
        let fl = crate::linalg::hermitian_fn(&((&l + l.adjoint()) * re(0.5)), f);
        &self.gram_inv_sqrt * fl * &self.gram_sqrt * &self.unit
    }

    /// Basis (columns) of the center.
    pub fn center(&self) -> CMat {
        let d = self.dim;
        let mut rows = CMat::zeros(d * d, d);
        for q in 0..d {
            let mut m = CMat::zeros(d, d);
            for p in 0..d {
                m.set_column(p, &self.left[p].column(q));
            }
            rows.view_mut((q * d, 0), (d, d)).copy_from(&(m - &self.left[q]));
        }
        null_space(&rows, RANK_TOL)
    }

    /// Block sizes of the algebra, sorted ascending.
    pub fn block_sizes(&self, seed: u64) -> Option<Vec<usize>> {
        let reps: Vec<CMat> = (0..self.dim).map(|p| self.regular(&self.basis(p))).collect();
        let mut rng = crate::linalg::seeded_rng(seed);
        let w = crate::linalg::wedderburn(&reps, self.dim, &mut rng)?;
        let mut b = w.blocks;
        b.sort();
        Some(b)
    }

    /// Maximal residuals of the *-algebra axioms on basis elements.
    pub fn axiom_residuals(&self) -> AlgebraResiduals {
        let d = self.dim;
        let mut assoc: f64 = 0.0;
        let mut unit: f64 = 0.0;
        let mut involution: f64 = 0.0;
        let mut anti: f64 = 0.0;
        let lu = self.left_matrix(&self.unit);
        unit = unit.max(max_abs(&(lu - identity(d))));
        for p in 0..d {
            let bp = self.basis(p);
            unit = unit.max(max_abs_vec(&(self.mul(&bp, &self.unit) - &bp)));
            involution = involution.max(max_abs_vec(&(self.star(&self.star(&bp)) - &bp)));
            for q in 0..d {
                let bq = self.basis(q);
                let pq = self.mul(&bp, &bq);
                anti = anti.max(max_abs_vec(&(self.star(&pq) - self.mul(&self.star(&bq), &self.star(&bp)))));
                // L_{b_p b_q} = L_p L_q.
                assoc = assoc.max(max_abs(&(self.left_matrix(&pq) - &self.left[p] * &self.left[q])));
            }
        }
        AlgebraResiduals { associativity: assoc, unit, involution, anti_multiplicative: anti }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraResiduals {
    pub associativity: f64,
    pub unit: f64,
    pub involution: f64,
    pub anti_multiplicative: f64,
}

impl AlgebraResiduals {
    pub fn max(&self) -> f64 {
        self.associativity.max(self.unit).max(self.involution).max(self.anti_multiplicative)
    }
}

/// A C*-correspondence over a finite-dimensional C*-algebra `A`.
///
/// Vectors are coordinate columns of length `dim`. The left action of the
/// basis element `e_a` is `left[a]`, the right action `X ↦ X e_a` is
/// `right[a]`, and `⟨X, Y⟩ = Σ_a (X* inner[a] Y) e_a`.
#[derive(Clone, Debug)]
pub struct Correspondence {
    pub algebra: FdCStarAlgebra,
    pub dim: usize,
    pub left: Vec<CMat>,
    pub right: Vec<CMat>,
    pub inner: Vec<CMat>,
}

impl Correspondence {
    /// `A` as a correspondence over itself with `⟨x, y⟩ = x* y`.
    pub fn canonical(algebra: &FdCStarAlgebra) -> Correspondence {
        let d = algebra.dim();
        let table = algebra.table();
        let left = table.left.clone();
        let right = (0..d).map(|a| table.right_matrix(&algebra.basis(a))).collect();
        let mut inner = vec![CMat::zeros(d, d); d];
        for p in 0..d {
            for q in 0..d {
                let prod = algebra.mul(&algebra.star(&algebra.basis(p)), &algebra.basis(q));
                for a in 0..d {
                    inner[a][(p, q)] = prod[a];
                }
            }
        }
        Correspondence { algebra: algebra.clone(), dim: d, left, right, inner }
    }

    pub fn zero(algebra: &FdCStarAlgebra) -> Correspondence {
        let d = algebra.dim();
        Correspondence {
            algebra: algebra.clone(),
            dim: 0,
            left: vec![CMat::zeros(0, 0); d],
            right: vec![CMat::zeros(0, 0); d],
            inner: vec![CMat::zeros(0, 0); d],
        }
    }

    pub fn inner(&self, x: &CVec, y: &CVec) -> CVec {
        let xh = x.adjoint();
        CVec::from_fn(self.algebra.dim(), |a, _| (&xh * &self.inner[a] * y)[(0, 0)])
    }

    pub fn left_matrix(&self, a: &CVec) -> CMat {
        let mut m = CMat::zeros(self.dim, self.dim);
        for (k, l) in self.left.iter().enumerate() {
            m += l * a[k];
        }
        m
    }

    pub fn right_matrix(&self, a: &CVec) -> CMat {
        let mut m = CMat::zeros(self.dim, self.dim);
        for (k, r) in self.right.iter().enumerate() {
            m += r * a[k];
        }
        m
    }

    /// Gram matrix of the scalar inner product `Tr⟨X, Y⟩`.
    pub fn scalar_gram(&self) -> CMat {
        let mut g = CMat::zeros(self.dim, self.dim);
        for a in 0..self.algebra.dim() {
            let t = self.algebra.trace(&self.algebra.basis(a));
            if t != C64::new(0.0, 0.0) {
                g += &self.inner[a] * t;
            }
        }
        g
    }

    /// `‖X‖ = ‖⟨X, X⟩‖^{1/2}`.
    pub fn norm(&self, x: &CVec) -> f64 {
        self.algebra.norm(&self.inner(x, x)).sqrt()
    }

    /// `M_d(A)`-matrix `[⟨e_i, e_j⟩]` realized as a concrete matrix.
    fn gram_block_matrix(&self) -> CMat {
        let n = self.algebra.size();
        let mut g = CMat::zeros(self.dim * n, self.dim * n);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let mut a = CVec::zeros(self.algebra.dim());
                for k in 0..self.algebra.dim() {
                    a[k] = self.inner[k][(i, j)];
                }
                g.view_mut((i * n, j * n), (n, n)).copy_from(&self.algebra.to_matrix(&a));
            }
        }
        g
    }

    /// Maximal residuals of the correspondence axioms on basis vectors.
    pub fn axiom_residuals(&self) -> CorrespondenceResiduals {
        let ad = self.algebra.dim();
        let d = self.dim;
        let mut r = CorrespondenceResiduals::default();
        if self.left.len() != ad || self.right.len() != ad || self.inner.len() != ad {
            r.shape = f64::INFINITY;
            return r;
        }
        for m in self.left.iter().chain(&self.right).chain(&self.inner) {
            if m.shape() != (d, d) {
                r.shape = f64::INFINITY;
                return r;
            }
        }
        if d == 0 {
            return r;
        }
        let unit = self.algebra.unit();
        r.unit =
            max_abs(&(self.left_matrix(&unit) - identity(d))).max(max_abs(&(self.right_matrix(&unit) - identity(d))));
        for a in 0..ad {
            let ea = self.algebra.basis(a);
            let ea_star = self.algebra.star(&ea);
            for b in 0..ad {
                let eb = self.algebra.basis(b);
                let ab = self.algebra.mul(&ea, &eb);
                r.actions = r
                    .actions
                    .max(max_abs(&(&self.left[a] * &self.left[b] - self.left_matrix(&ab))))
                    .max(max_abs(&(&self.right[b] * &self.right[a] - self.right_matrix(&ab))))
                    .max(max_abs(&(&self.left[a] * &self.right[b] - &self.right[b] * &self.left[a])));
            }
            for i in 0..d {
                let x = unit_vec(d, i);
                for j in 0..d {
                    let y = unit_vec(d, j);
                    let xy = self.inner(&x, &y);
                    // ⟨X, Y a⟩ = ⟨X, Y⟩ a.
                    let lhs = self.inner(&x, &(&self.right[a] * &y));
                    r.right_linear = r.right_linear.max(max_abs_vec(&(lhs - self.algebra.mul(&xy, &ea))));
                    // ⟨a X, Y⟩ = ⟨X, a* Y⟩.
                    let l1 = self.inner(&(&self.left[a] * &x), &y);
                    let l2 = self.inner(&x, &(self.left_matrix(&ea_star) * &y));
                    r.left_adjoint = r.left_adjoint.max(max_abs_vec(&(l1 - l2)));
                    if a == 0 {
                        let yx = self.inner(&y, &x);
                        r.hermitian = r.hermitian.max(max_abs_vec(&(self.algebra.star(&xy) - yx)));
                    }
                }
            }
        }
        let g = self.gram_block_matrix();
        r.positivity = (-hermitian_eigen(&g).0[0]).max(0.0);
        let (vals, _) = hermitian_eigen(&self.scalar_gram());
        r.definiteness_min = vals[0];
        r
    }

    /// Checks all axioms at tolerance `tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let r = self.axiom_residuals();
        if r.max_violation() > tol || (self.dim > 0 && r.definiteness_min <= tol) {
            return Err(Error::Validation(format!("correspondence axioms fail: {r:?}")));
        }
        Ok(())
    }

    /// Whether `t: self → other` is right `A`-linear; returns the residual.
    pub fn right_linearity_residual(&self, other: &Correspondence, t: &CMat) -> f64 {
        (0..self.algebra.dim()).map(|a| max_abs(&(t * &self.right[a] - &other.right[a] * t))).fold(0.0, f64::max)
    }

    /// Adjoint of a right `A`-linear map `t: self → other`.
    pub fn adjoint_of(&self, other: &Correspondence, t: &CMat, tol: f64) -> Result<Adjoint> {
        if self.algebra != other.algebra {
            return Err(Error::Config("modules over different algebras".into()));
        }
        if t.shape() != (other.dim, self.dim) {
            return Err(Error::Dimension(format!(
                "map has shape {:?}, expected ({}, {})",
                t.shape(),
                other.dim,
                self.dim
            )));
        }
        let scale = 1.0 + max_abs(t);
        let lin = self.right_linearity_residual(other, t);
        if lin > tol * scale {
            return Err(Error::Contract(format!("map is not right A-linear (residual {lin:.3e})")));
        }
        if self.dim == 0 || other.dim == 0 {
            return Ok(Adjoint::Adjointable(CMat::zeros(self.dim, other.dim)));
        }
        // Solve G^M_b S = T^H G^N_b for every basis element b.
        let ad = self.algebra.dim();
        let mut lhs = CMat::zeros(ad * self.dim, self.dim);
        let mut rhs = CMat::zeros(ad * self.dim, other.dim);
        let th = t.adjoint();
        for b in 0..ad {
            lhs.view_mut((b * self.dim, 0), (self.dim, self.dim)).copy_from(&self.inner[b]);
            rhs.view_mut((b * self.dim, 0), (self.dim, other.dim)).copy_from(&(&th * &other.inner[b]));
        }
        let (s, residual) = lstsq(&lhs, &rhs);
        if residual > tol * scale {
            Ok(Adjoint::NotAdjointable { residual })
        } else {
            Ok(Adjoint::Adjointable(s))
        }
    }

    /// Interior tensor product `self ⊗_A other`.
    pub fn internal_tensor(&self, other: &Correspondence) -> Result<InternalTensor> {
        if self.algebra != other.algebra {
            return Err(Error::Config("modules over different algebras".into()));
        }
        let ad = self.algebra.dim();
        let (dm, dn) = (self.dim, other.dim);
        let full = dm * dn;
        let mut tb = vec![CMat::zeros(full, full); ad];
        for c in 0..ad {
            if max_abs(&self.inner[c]) == 0.0 {
                continue;
            }
            for b in 0..ad {
                let gn = &other.inner[b] * &other.left[c];
                tb[b] += kron(&self.inner[c], &gn);
            }
        }
        let mut scalar = CMat::zeros(full, full);
        for (b, t) in tb.iter().enumerate() {
            scalar += t * self.algebra.trace(&self.algebra.basis(b));
        }
        let (vals, vecs) = hermitian_eigen(&scalar);
        let top = vals.iter().cloned().fold(0.0, f64::max);
        let keep: Vec<CVec> = vals
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > 1e-10 * top && top > 0.0)
            .map(|(k, _)| vecs.column(k).into_owned())
            .collect();
        let v = stack_columns(&keep, full);
        let vh = v.adjoint();
        let module = Correspondence {
            algebra: self.algebra.clone(),
            dim: v.ncols(),
            left: self.left.iter().map(|l| &vh * kron(l, &identity(dn)) * &v).collect(),
            right: other.right.iter().map(|r| &vh * kron(&identity(dm), r) * &v).collect(),
            inner: tb.iter().map(|t| &vh * t * &v).collect(),
        };
        Ok(InternalTensor { module, quotient: vh })
    }

    /// Direct sum of correspondences.
    pub fn direct_sum(&self, other: &Correspondence) -> Correspondence {
        let ds = |a: &CMat, b: &CMat| {
            let mut m = CMat::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
            m.view_mut((0, 0), a.shape()).copy_from(a);
            m.view_mut(a.shape(), b.shape()).copy_from(b);
            m
        };
        Correspondence {
            algebra: self.algebra.clone(),
            dim: self.dim + other.dim,
            left: self.left.iter().zip(&other.left).map(|(a, b)| ds(a, b)).collect(),
            right: self.right.iter().zip(&other.right).map(|(a, b)| ds(a, b)).collect(),
            inner: self.inner.iter().zip(&other.inner).map(|(a, b)| ds(a, b)).collect(),
        }
    }
}

fn unit_vec(d: usize, i: usize) -> CVec {
    let mut v = CVec::zeros(d);
    v[i] = re(1.0);
    v
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CorrespondenceResiduals {
    pub shape: f64,
    pub unit: f64,
    pub actions: f64,
    pub right_linear: f64,
    pub left_adjoint: f64,
    pub hermitian: f64,
    pub positivity: f64,
    /// Smallest eigenvalue of the scalar Gram matrix (must be positive).
    pub definiteness_min: f64,
}

impl CorrespondenceResiduals {
    pub fn max_violation(&self) -> f64 {
        [self.shape, self.unit, self.actions, self.right_linear, self.left_adjoint, self.hermitian, self.positivity]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug)]
pub enum Adjoint {
    Adjointable(CMat),
    NotAdjointable { residual: f64 },
}

impl Adjoint {
    pub fn matrix(self) -> Option<CMat> {
        match self {
            Adjoint::Adjointable(m) => Some(m),
            Adjoint::NotAdjointable { .. } => None,
        }
    }
}

/// `M ⊗_A N` together with the quotient map from `M ⊗ N` (index `x·dim N + y`).
#[derive(Clone, Debug)]
pub struct InternalTensor {
    pub module: Correspondence,
    pub quotient: CMat,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{random_vec, seeded_rng};

    fn column_module(n: usize) -> Correspondence {
        // C^n as a correspondence from M_n to C: left matrix action, ⟨x,y⟩ = x*y.
        let a = FdCStarAlgebra::scalars();
        Correspondence {
            algebra: a,
            dim: n,
            left: vec![identity(n)],
            right: vec![identity(n)],
            inner: vec![identity(n)],
        }
    }

    #[test]
    fn canonical_module_is_valid() {
        let a = FdCStarAlgebra::new(vec![1, 2]).unwrap();
        let m = Correspondence::canonical(&a);
        m.validate(1e-10).unwrap();
    }

    #[test]
    fn module_norm_is_operator_norm() {
        let a = FdCStarAlgebra::new(vec![2]).unwrap();
        let m = Correspondence::canonical(&a);
        let mut rng = seeded_rng(5);
        let x = random_vec(&mut rng, 4);
        assert!((m.norm(&x) - a.norm(&x)).abs() < 1e-12);
    }

    #[test]
    fn tensor_with_base_is_identity() {
        let a = FdCStarAlgebra::new(vec![1, 2]).unwrap();
        let canon = Correspondence::canonical(&a);
        let t = canon.internal_tensor(&canon).unwrap();
        assert_eq!(t.module.dim, canon.dim);
        t.module.validate(1e-9).unwrap();
        let c = column_module(2);
        let t = column_module(1).internal_tensor(&c).unwrap();
        assert_eq!(t.module.dim, 2);
    }

    #[test]
    fn degenerate_pairing_shrinks_tensor() {
        // M = C ⊕ 0-part over C ⊕ C: only the first summand pairs with N.
        let a = FdCStarAlgebra::new(vec![1, 1]).unwrap();
        let canon = Correspondence::canonical(&a);
        let mut n = canon.clone();
        // N = p A, the ideal supported on the first summand.
        n.dim = 1;
        n.left = vec![identity(1), CMat::zeros(1, 1)];
        n.right = vec![identity(1), CMat::zeros(1, 1)];
        n.inner = vec![identity(1), CMat::zeros(1, 1)];
        n.validate(1e-10).unwrap();
        let t = canon.internal_tensor(&n).unwrap();
        assert_eq!(t.module.dim, 1);
    }

    #[test]
    fn adjoint_of_identity_and_failure_modes() {
        let a = FdCStarAlgebra::new(vec![2]).unwrap();
        let m = Correspondence::canonical(&a);
        let adj = m.adjoint_of(&m, &identity(4), 1e-10).unwrap().matrix().unwrap();
        assert!(max_abs(&(adj - identity(4))) < 1e-10);
        // Left multiplication by a unitary is right linear; adjoint is its inverse.
        let u = CMat::from_row_slice(2, 2, &[re(0.0), re(1.0), re(1.0), re(0.0)]);
        let lu = m.left_matrix(&a.from_matrix(&u));
        let adj = m.adjoint_of(&m, &lu, 1e-10).unwrap().matrix().unwrap();
        assert!(max_abs(&(adj * &lu - identity(4))) < 1e-10);
        // A right multiplication is not right linear over a noncommutative A.
        let r = m.right_matrix(&a.basis(1));
        assert!(matches!(m.adjoint_of(&m, &r, 1e-10), Err(Error::Contract(_))));
    }

    #[test]
    fn table_from_matrix_algebra_is_consistent() {
        let a = FdCStarAlgebra::new(vec![1, 2]).unwrap();
        let t = a.table();
        assert!(t.axiom_residuals().max() < 1e-12);
        assert_eq!(t.center().ncols(), 2);
        assert_eq!(t.block_sizes(0).unwrap(), vec![1, 2]);
        let mut rng = seeded_rng(9);
        let x = random_vec(&mut rng, a.dim());
        assert!((t.norm(&x) - a.norm(&x)).abs() < 1e-10);
        let xx = t.mul(&t.star(&x), &x);
        let sq = t.apply_fn(&xx, |v| v.max(0.0).sqrt());
        assert!(max_abs_vec(&(t.mul(&sq, &sq) - &xx)) < 1e-9);
    }
}
