//! Representation categories of finite groups and of duals of finite groups.
//!
//! A [`Backend`] fixes the irreducible unitary representations. Representations
//! are described by [`Rep`]: explicit matrices for a finite group, or a
//! grading of the basis vectors for the dual of a finite group (whose irreducible
//! representations are one-dimensional and labelled by group elements).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigen, identity, kron, max_abs, psd_inv_sqrt, psd_sqrt, range_basis, re, unvectorize, CMat, CVec, C64,
    RANK_TOL,
};

/// Default tolerance for unitarity and intertwining residuals.
pub const TAU: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Group {
    pub labels: Vec<String>,
    pub mul: Vec<Vec<usize>>,
    pub identity: usize,
    pub inverse: Vec<usize>,
}

impl Group {
    /// Builds a group from its multiplication table, checking the group axioms.
    pub fn new(labels: Vec<String>, mul: Vec<Vec<usize>>, identity: usize) -> Result<Group> {
        let n = labels.len();
        if n == 0 || mul.len() != n || mul.iter().any(|row| row.len() != n) {
            return Err(Error::Table("multiplication table must be square".into()));
        }
        if identity >= n || mul.iter().flatten().any(|&x| x >= n) {
            return Err(Error::Table("element id out of range".into()));
        }
        for a in 0..n {
            if mul[identity][a] != a || mul[a][identity] != a {
                return Err(Error::Table(format!("identity law fails at {}", labels[a])));
            }
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(Error::Table(format!(
                            "associativity fails at ({}, {}, {})",
                            labels[a], labels[b], labels[c]
                        )));
                    }
                }
            }
        }
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            match (0..n).find(|&b| mul[a][b] == identity && mul[b][a] == identity) {
                Some(b) => inverse.push(b),
                None => return Err(Error::Table(format!("{} has no inverse", labels[a]))),
            }
        }
        Ok(Group { labels, mul, identity, inverse })
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul[a][b] == self.mul[b][a]))
    }

    pub fn cyclic(n: usize) -> Group {
        Group::abelian(&[n])
    }

    /// Product of cyclic groups; elements are tuples in mixed radix order.
    pub fn abelian(orders: &[usize]) -> Group {
        let tuples = mixed_radix(orders);
        let labels = tuples.iter().map(|t| tuple_label(t)).collect();
        let index = |t: &[usize]| t.iter().zip(orders).fold(0, |acc, (&x, &n)| acc * n + x);
        let mul = tuples
            .iter()
            .map(|a| {
                tuples
                    .iter()
                    .map(|b| {
                        let s: Vec<usize> = (0..orders.len()).map(|k| (a[k] + b[k]) % orders[k]).collect();
                        index(&s)
                    })
                    .collect()
            })
            .collect();
        Group::new(labels, mul, 0).expect("abelian group table is valid")
    }

    /// The symmetric group on three letters.
    pub fn symmetric3() -> Group {
        let perms = s3_perms();
        let labels = perms.iter().map(perm_label).collect();
        let mul = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| {
                        let pq = [p[q[0]], p[q[1]], p[q[2]]];
                        perms.iter().position(|r| *r == pq).unwrap()
                    })
                    .collect()
            })
            .collect();
        Group::new(labels, mul, 0).expect("S3 table is valid")
    }
}

fn mixed_radix(orders: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &n in orders {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

fn tuple_label(t: &[usize]) -> String {
    if t.len() == 1 {
        t[0].to_string()
    } else {
        let parts: Vec<String> = t.iter().map(|x| x.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

fn s3_perms() -> Vec<[usize; 3]> {
    vec![[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]]
}

fn perm_label(p: &[usize; 3]) -> String {
    match p {
        [0, 1, 2] => "e".into(),
        [1, 0, 2] => "(12)".into(),
        [0, 2, 1] => "(23)".into(),
        [2, 1, 0] => "(13)".into(),
        [1, 2, 0] => "(123)".into(),
        _ => "(132)".into(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum BackendKind {
    /// A finite group `G`; irreps are given by unitary matrices.
    Group,
    /// The dual of a finite group `Γ`; irreps are the elements of `Γ`.
    Dual,
}

#[derive(Clone, Debug)]
pub struct Irrep {
    pub label: String,
    pub dim: usize,
    /// One matrix per group element (empty for the dual backend).
    pub matrices: Vec<CMat>,
    pub rho: CMat,
    pub conj: usize,
}

/// A representation of the backend quantum group.
#[derive(Clone, Debug, PartialEq)]
pub enum Rep {
    Matrices(Vec<CMat>),
    /// Degree of each basis vector.
    Graded(Vec<usize>),
}

impl Rep {
    pub fn dim(&self) -> usize {
        match self {
            Rep::Matrices(m) => m[0].nrows(),
            Rep::Graded(g) => g.len(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Backend {
    pub kind: BackendKind,
    pub group: Group,
    pub irreps: Vec<Irrep>,
    pub trivial: usize,
    /// Unitary `J_α ∈ Mor(Ū_α, U_ᾱ)` identifying the conjugate space.
    pub j: Vec<CMat>,
}

/// Raw irrep data as supplied by a user: label, matrices and optional ρ.
#[derive(Clone, Debug)]
pub struct IrrepInput {
    pub label: String,
    pub matrices: Vec<CMat>,
    pub rho: Option<CMat>,
}

impl Backend {
    /// The dual of a finite group: irreps are the group elements.
    pub fn dual(group: Group) -> Backend {
        let irreps = (0..group.order())
            .map(|g| Irrep {
                label: group.labels[g].clone(),
                dim: 1,
                matrices: Vec::new(),
                rho: identity(1),
                conj: group.inverse[g],
            })
            .collect();
        let j = vec![identity(1); group.order()];
        Backend { kind: BackendKind::Dual, trivial: group.identity, group, irreps, j }
    }

    /// A finite group backend from user-supplied irreps.
    pub fn finite(group: Group, inputs: Vec<IrrepInput>, tol: f64) -> Result<Backend> {
        let n = group.order();
        let mut irreps = Vec::new();
        for inp in inputs {
            if inp.matrices.len() != n {
                return Err(Error::Table(format!("irrep {} needs {} matrices", inp.label, n)));
            }
            let d = inp.matrices[0].nrows();
            if d == 0 || inp.matrices.iter().any(|m| m.shape() != (d, d)) {
                return Err(Error::Dimension(format!("irrep {} has inconsistent shapes", inp.label)));
            }
            for (g, m) in inp.matrices.iter().enumerate() {
                if max_abs(&(m.adjoint() * m - identity(d))) > tol {
                    return Err(Error::Table(format!("irrep {} is not unitary at {}", inp.label, group.labels[g])));
                }
            }
            for a in 0..n {
                for b in 0..n {
                    let lhs = &inp.matrices[a] * &inp.matrices[b];
                    if max_abs(&(lhs - &inp.matrices[group.mul[a][b]])) > tol {
                        return Err(Error::Table(format!(
                            "irrep {} does not respect the multiplication table",
                            inp.label
                        )));
                    }
                }
            }
            let rho = inp.rho.unwrap_or_else(|| identity(d));
            check_rho(&inp.label, &rho, d, tol)?;
            irreps.push(Irrep { label: inp.label, dim: d, matrices: inp.matrices, rho, conj: 0 });
        }
        let trivial = irreps
            .iter()
            .position(|ir| ir.dim == 1 && ir.matrices.iter().all(|m| (m[(0, 0)] - re(1.0)).norm() < tol))
            .ok_or_else(|| Error::Table("no trivial irrep".into()))?;
        let mut backend = Backend { kind: BackendKind::Group, group, irreps, trivial, j: Vec::new() };
        for a in 0..backend.irreps.len() {
            for b in 0..a {
                if !backend.mor_space(&backend.rep(a), &backend.rep(b))?.is_empty() {
                    return Err(Error::Table(format!(
                        "irreps {} and {} are equivalent",
                        backend.irreps[a].label, backend.irreps[b].label
                    )));
                }
            }
        }
        let sum_sq: usize = backend.irreps.iter().map(|ir| ir.dim * ir.dim).sum();
        if sum_sq != n {
            return Err(Error::Table(format!("irreps are incomplete: Σ d² = {sum_sq} ≠ {n}")));
        }
        for a in 0..backend.irreps.len() {
            let cu = backend.conj_rep(a);
            let mut found = None;
            for b in 0..backend.irreps.len() {
                let basis = backend.mor_space(&cu, &backend.rep(b))?;
                if let Some(t) = basis.first() {
                    let d = backend.irreps[a].dim as f64;
                    found = Some((b, t * re(d.sqrt())));
                    break;
                }
            }
            let (b, j) =
                found.ok_or_else(|| Error::Table(format!("irrep {} has no conjugate", backend.irreps[a].label)))?;
            backend.irreps[a].conj = b;
            backend.j.push(j);
        }
        Ok(backend)
    }

    /// Finite abelian group `Z_{n1} × … × Z_{nk}` with its characters.
    pub fn abelian_group(orders: &[usize]) -> Backend {
        let group = Group::abelian(orders);
        let tuples = mixed_radix(orders);
        let inputs = tuples
            .iter()
            .map(|m| IrrepInput {
                label: format!("chi{}", tuple_label(m)),
                matrices: tuples
                    .iter()
                    .map(|a| {
                        let phase: f64 = (0..orders.len()).map(|k| (m[k] * a[k]) as f64 / orders[k] as f64).sum();
                        let t = 2.0 * std::f64::consts::PI * phase;
                        CMat::from_element(1, 1, C64::new(t.cos(), t.sin()))
                    })
                    .collect(),
                rho: None,
            })
            .collect();
        Backend::finite(group, inputs, TAU).expect("characters form a complete set")
    }

    /// `S_3` with its trivial, sign and two-dimensional irreps.
    pub fn symmetric3() -> Backend {
        let group = Group::symmetric3();
        let perms = s3_perms();
        let sign = |p: &[usize; 3]| -> f64 {
            let mut inv = 0;
            for i in 0..3 {
                for j in i + 1..3 {
                    if p[i] > p[j] {
                        inv += 1;
                    }
                }
            }
            if inv % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        };
        let s2 = 2f64.sqrt();
        let s6 = 6f64.sqrt();
        let v = [[1.0 / s2, -1.0 / s2, 0.0], [1.0 / s6, 1.0 / s6, -2.0 / s6]];
        let std_mat = |p: &[usize; 3]| -> CMat {
            // U_ij = <v_i, P v_j> where P e_k = e_{p(k)}.
            CMat::from_fn(2, 2, |i, j| {
                let mut s = 0.0;
                for k in 0..3 {
                    s += v[i][p[k]] * v[j][k];
                }
                re(s)
            })
        };
        let inputs = vec![
            IrrepInput { label: "triv".into(), matrices: perms.iter().map(|_| identity(1)).collect(), rho: None },
            IrrepInput {
                label: "sign".into(),
                matrices: perms.iter().map(|p| CMat::from_element(1, 1, re(sign(p)))).collect(),
                rho: None,
            },
            IrrepInput { label: "std".into(), matrices: perms.iter().map(std_mat).collect(), rho: None },
        ];
        Backend::finite(group, inputs, TAU).expect("S3 irreps are valid")
    }

    pub fn n_irreps(&self) -> usize {
        self.irreps.len()
    }

    pub fn dim(&self, a: usize) -> usize {
        self.irreps[a].dim
    }

    pub fn irrep_index(&self, label: &str) -> Option<usize> {
        self.irreps.iter().position(|ir| ir.label == label)
    }

    /// The representation `U_α`.
    pub fn rep(&self, a: usize) -> Rep {
        match self.kind {
            BackendKind::Group => Rep::Matrices(self.irreps[a].matrices.clone()),
            BackendKind::Dual => Rep::Graded(vec![a]),
        }
    }

    /// The complex conjugate representation `Ū_α` on the conjugate space.
    pub fn conj_rep(&self, a: usize) -> Rep {
        match self.kind {
            BackendKind::Group => Rep::Matrices(self.irreps[a].matrices.iter().map(|m| m.map(|z| z.conj())).collect()),
            BackendKind::Dual => Rep::Graded(vec![self.group.inverse[a]]),
        }
    }

    pub fn trivial_rep(&self, dim: usize) -> Rep {
        match self.kind {
            BackendKind::Group => Rep::Matrices(vec![identity(dim); self.group.order()]),
            BackendKind::Dual => Rep::Graded(vec![self.group.identity; dim]),
        }
    }

    /// Tensor product; basis vector `i ⊗ j` sits at index `i * dim(v) + j`.
    pub fn tensor(&self, u: &Rep, v: &Rep) -> Result<Rep> {
        match (u, v) {
            (Rep::Matrices(a), Rep::Matrices(b)) => {
                Ok(Rep::Matrices(a.iter().zip(b).map(|(x, y)| kron(x, y)).collect()))
            }
            (Rep::Graded(a), Rep::Graded(b)) => Ok(Rep::Graded(
                a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).map(|(x, y)| self.group.mul[x][y]).collect(),
            )),
            _ => Err(Error::Config("representations from different backends".into())),
        }
    }

    fn check_rep(&self, u: &Rep) -> Result<()> {
        match (self.kind, u) {
            (BackendKind::Group, Rep::Matrices(m)) if m.len() == self.group.order() => Ok(()),
            (BackendKind::Dual, Rep::Graded(g)) if g.iter().all(|&x| x < self.group.order()) => Ok(()),
            _ => Err(Error::Config("representation does not match the backend".into())),
        }
    }

    /// Averages `seed: H_u → H_v` over the group, projecting onto `Mor(u, v)`.
    pub fn haar_average(&self, u: &Rep, v: &Rep, seed: &CMat) -> Result<CMat> {
        self.check_rep(u)?;
        self.check_rep(v)?;
        if seed.shape() != (v.dim(), u.dim()) {
            return Err(Error::Dimension(format!(
                "seed has shape {:?}, expected ({}, {})",
                seed.shape(),
                v.dim(),
                u.dim()
            )));
        }
        match (u, v) {
            (Rep::Matrices(a), Rep::Matrices(b)) => {
                let mut acc = CMat::zeros(v.dim(), u.dim());
                for (ua, vb) in a.iter().zip(b) {
                    acc += vb * seed * ua.adjoint();
                }
                Ok(acc * re(1.0 / a.len() as f64))
            }
            (Rep::Graded(a), Rep::Graded(b)) => {
                Ok(CMat::from_fn(b.len(), a.len(), |i, j| if b[i] == a[j] { seed[(i, j)] } else { C64::new(0.0, 0.0) }))
            }
            _ => unreachable!("checked above"),
        }
    }

    /// Orthonormal basis of `Mor(u, v)` in the trace inner product.
    pub fn mor_space(&self, u: &Rep, v: &Rep) -> Result<Vec<CMat>> {
        self.check_rep(u)?;
        self.check_rep(v)?;
        let (du, dv) = (u.dim(), v.dim());
        match (u, v) {
            (Rep::Matrices(a), Rep::Matrices(b)) => {
                // vec(V X U*) = (conj(U) ⊗ V) vec(X) in column-major order.
                let mut p = CMat::zeros(du * dv, du * dv);
                for (ua, vb) in a.iter().zip(b) {
                    p += kron(&ua.map(|z| z.conj()), vb);
                }
                p *= re(1.0 / a.len() as f64);
                let basis = range_basis(&p, RANK_TOL);
                Ok((0..basis.ncols()).map(|k| unvectorize(&basis.column(k).into_owned(), dv, du)).collect())
            }
            (Rep::Graded(a), Rep::Graded(b)) => {
                let mut out = Vec::new();
                for i in 0..dv {
                    for j in 0..du {
                        if b[i] == a[j] {
                            let mut e = CMat::zeros(dv, du);
                            e[(i, j)] = re(1.0);
                            out.push(e);
                        }
                    }
                }
                Ok(out)
            }
            _ => unreachable!("checked above"),
        }
    }

    /// Isometries `w_i ∈ Mor(U_{α_i}, u)` with `Σ w_i w_i* = 1`.
    pub fn decompose(&self, u: &Rep) -> Result<Vec<(usize, CMat)>> {
        let mut out = Vec::new();
        for a in 0..self.n_irreps() {
            let d = self.dim(a) as f64;
            for t in self.mor_space(&self.rep(a), u)? {
                out.push((a, t * re(d.sqrt())));
            }
        }
        Ok(out)
    }

    pub fn quantum_dim(&self, a: usize) -> f64 {
        self.irreps[a].rho.trace().re
    }

    /// Standard solution `(R, R̄)` of the conjugate equations for `U_α`.
    pub fn conjugate_solution(&self, a: usize) -> ConjugateSolution {
        let ir = &self.irreps[a];
        let d = ir.dim;
        let j = &self.j[a];
        let dc = j.nrows();
        let r_mat = j * psd_inv_sqrt(&ir.rho).transpose();
        let rbar_mat = psd_sqrt(&ir.rho) * j.transpose();
        let r = CVec::from_fn(dc * d, |k, _| r_mat[(k / d, k % d)]);
        let rbar = CVec::from_fn(d * dc, |k, _| rbar_mat[(k / dc, k % dc)]);
        ConjugateSolution { alpha: a, alpha_bar: ir.conj, dim: d, r, rbar }
    }

    /// Frobenius reciprocity `T ↦ (T ⊗ ι)(ι ⊗ R̄_α)`.
    ///
    /// `t` maps `H_B ⊗ H_α → H_B ⊗ H_V`; the result maps `H_B → H_B ⊗ H_V ⊗ H_ᾱ`.
    pub fn frobenius(&self, t: &CMat, d_b: usize, a: usize, d_v: usize) -> Result<CMat> {
        let sol = self.conjugate_solution(a);
        frobenius_with(t, d_b, d_v, &sol)
    }

    /// Inverse of [`Backend::frobenius`]: `S ↦ (ι ⊗ ι ⊗ R*_α)(S ⊗ ι)`.
    pub fn frobenius_inverse(&self, s: &CMat, d_b: usize, a: usize, d_v: usize) -> Result<CMat> {
        let sol = self.conjugate_solution(a);
        frobenius_inverse_with(s, d_b, d_v, &sol)
    }
}

fn check_rho(label: &str, rho: &CMat, d: usize, tol: f64) -> Result<()> {
    if rho.shape() != (d, d) {
        return Err(Error::Dimension(format!("rho of {label} has the wrong shape")));
    }
    if max_abs(&(rho - rho.adjoint())) > tol {
        return Err(Error::Table(format!("rho of {label} is not self-adjoint")));
    }
    let (vals, _) = hermitian_eigen(rho);
    if vals.iter().any(|&x| x <= 0.0) {
        return Err(Error::Table(format!("rho of {label} is not positive invertible")));
    }
    let tr: f64 = vals.iter().sum();
    let tr_inv: f64 = vals.iter().map(|x| 1.0 / x).sum();
    if (tr - tr_inv).abs() > tol * tr.max(1.0) {
        return Err(Error::Table(format!("rho of {label} violates Tr ρ = Tr ρ⁻¹")));
    }
    Ok(())
}

/// Conjugate solution data for an irrep `α` with conjugate `ᾱ`.
///
/// `r ∈ H_ᾱ ⊗ H_α` is stored at index `c * dim + j`, `rbar ∈ H_α ⊗ H_ᾱ` at
/// index `j * dim_bar + c`.
#[derive(Clone, Debug)]
pub struct ConjugateSolution {
    pub alpha: usize,
    pub alpha_bar: usize,
    pub dim: usize,
    pub r: CVec,
    pub rbar: CVec,
}

impl ConjugateSolution {
    pub fn dim_bar(&self) -> usize {
        self.r.len() / self.dim
    }

    /// `(R[c, j])` as a `dim_bar × dim` matrix.
    pub fn r_matrix(&self) -> CMat {
        let (d, dc) = (self.dim, self.dim_bar());
        CMat::from_fn(dc, d, |c, j| self.r[c * d + j])
    }

    /// `(R̄[j, c])` as a `dim × dim_bar` matrix.
    pub fn rbar_matrix(&self) -> CMat {
        let (d, dc) = (self.dim, self.dim_bar());
        CMat::from_fn(d, dc, |j, c| self.rbar[j * dc + c])
    }

    /// Residuals of `(ι ⊗ R*)(R̄ ⊗ ι) = ι` and `(R* ⊗ ι)(ι ⊗ R̄) = ι`.
    pub fn equation_residuals(&self) -> (f64, f64) {
        let r = self.r_matrix();
        let rbar = self.rbar_matrix();
        let m1 = &rbar * r.map(|z| z.conj());
        let m2 = (r.map(|z| z.conj()) * &rbar).transpose();
        (max_abs(&(m1 - identity(self.dim))), max_abs(&(m2 - identity(self.dim_bar()))))
    }

    pub fn norms_squared(&self) -> (f64, f64) {
        (self.r.norm_squared(), self.rbar.norm_squared())
    }
}

pub fn frobenius_with(t: &CMat, d_b: usize, d_v: usize, sol: &ConjugateSolution) -> Result<CMat> {
    let (da, dc) = (sol.dim, sol.dim_bar());
    if t.shape() != (d_b * d_v, d_b * da) {
        return Err(Error::Dimension(format!(
            "frobenius input has shape {:?}, expected ({}, {})",
            t.shape(),
            d_b * d_v,
            d_b * da
        )));
    }
    let mut s = CMat::zeros(d_b * d_v * dc, d_b);
    for x in 0..d_b {
        for v in 0..d_v {
            for c in 0..dc {
                for y in 0..d_b {
                    let mut acc = C64::new(0.0, 0.0);
                    for u in 0..da {
                        acc += t[(x * d_v + v, y * da + u)] * sol.rbar[u * dc + c];
                    }
                    s[((x * d_v + v) * dc + c, y)] = acc;
                }
            }
        }
    }
    Ok(s)
}

pub fn frobenius_inverse_with(s: &CMat, d_b: usize, d_v: usize, sol: &ConjugateSolution) -> Result<CMat> {
    let (da, dc) = (sol.dim, sol.dim_bar());
    if s.shape() != (d_b * d_v * dc, d_b) {
        return Err(Error::Dimension(format!(
            "frobenius inverse input has shape {:?}, expected ({}, {})",
            s.shape(),
            d_b * d_v * dc,
            d_b
        )));
    }
    let mut t = CMat::zeros(d_b * d_v, d_b * da);
    for x in 0..d_b {
        for v in 0..d_v {
            for y in 0..d_b {
                for u in 0..da {
                    let mut acc = C64::new(0.0, 0.0);
                    for c in 0..dc {
                        acc += s[((x * d_v + v) * dc + c, y)] * sol.r[c * da + u].conj();
                    }
                    t[(x * d_v + v, y * da + u)] = acc;
                }
            }
        }
    }
    Ok(t)
}

/// The category of representations with precomputed fusion bases and
/// conjugate solutions, optionally twisted by a unitary 2-cocycle.
///
/// For a twist `Ω` the tensor product `U_α ⊗ U_β` carries the representation
/// `Ω_{αβ}(U_α ⊗ U_β)Ω_{αβ}*`, so every fusion basis element becomes `T Ω_{αβ}*`.
#[derive(Clone, Debug)]
pub struct RepCategory {
    pub backend: Backend,
    twist: Option<BTreeMap<(usize, usize), CMat>>,
    fusion: BTreeMap<(usize, usize, usize), Vec<CMat>>,
    conj: Vec<ConjugateSolution>,
}

impl RepCategory {
    pub fn new(backend: Backend) -> RepCategory {
        let n = backend.n_irreps();
        let mut fusion = BTreeMap::new();
        for a in 0..n {
            for b in 0..n {
                match backend.kind {
                    BackendKind::Dual => {
                        let c = backend.group.mul[a][b];
                        fusion.insert((a, b, c), vec![identity(1)]);
                    }
                    BackendKind::Group => {
                        let ab = backend.tensor(&backend.rep(a), &backend.rep(b)).unwrap();
                        for c in 0..n {
                            let basis = backend.mor_space(&ab, &backend.rep(c)).unwrap();
                            if !basis.is_empty() {
                                fusion.insert((a, b, c), basis);
                            }
                        }
                    }
                }
            }
        }
        let conj = (0..n).map(|a| backend.conjugate_solution(a)).collect();
        RepCategory { backend, twist: None, fusion, conj }
    }

    /// Twists the tensor structure by `Ω_{αβ}`, given on every pair of irreps
    /// as a unitary on `H_α ⊗ H_β`.
    pub fn twisted(backend: Backend, twist: BTreeMap<(usize, usize), CMat>) -> Result<RepCategory> {
        let mut cat = RepCategory::new(backend);
        let n = cat.n_irreps();
        for a in 0..n {
            for b in 0..n {
                let d = cat.dim(a) * cat.dim(b);
                let om = twist.get(&(a, b)).ok_or_else(|| Error::Incomplete(format!("twist missing on ({a}, {b})")))?;
                if om.shape() != (d, d) {
                    return Err(Error::Dimension(format!("twist on ({a}, {b}) has the wrong shape")));
                }
            }
        }
        for ((a, b, _), basis) in cat.fusion.iter_mut() {
            let om_star = twist[&(*a, *b)].adjoint();
            for t in basis.iter_mut() {
                *t = &*t * &om_star;
            }
        }
        for a in 0..n {
            let sol = &mut cat.conj[a];
            let abar = sol.alpha_bar;
            sol.r = &twist[&(abar, a)] * &sol.r;
            sol.rbar = &twist[&(a, abar)] * &sol.rbar;
        }
        cat.twist = Some(twist);
        Ok(cat)
    }

    /// Multiplies both `R_α` and `R̄_α` by the unimodular `phases[α]`, which
    /// keeps them solutions of the conjugate equations.
    pub fn with_conjugate_phases(&self, phases: &[C64]) -> RepCategory {
        let mut out = self.clone();
        for (sol, p) in out.conj.iter_mut().zip(phases) {
            sol.r *= *p;
            sol.rbar *= *p;
        }
        out
    }

    pub fn is_twisted(&self) -> bool {
        self.twist.is_some()
    }

    pub fn twist(&self, a: usize, b: usize) -> CMat {
        match &self.twist {
            Some(t) => t[&(a, b)].clone(),
            None => identity(self.dim(a) * self.dim(b)),
        }
    }

    pub fn kind(&self) -> BackendKind {
        self.backend.kind
    }

    pub fn n_irreps(&self) -> usize {
        self.backend.n_irreps()
    }

    pub fn dim(&self, a: usize) -> usize {
        self.backend.dim(a)
    }

    pub fn trivial(&self) -> usize {
        self.backend.trivial
    }

    pub fn conj_label(&self, a: usize) -> usize {
        self.backend.irreps[a].conj
    }

    pub fn qdim(&self, a: usize) -> f64 {
        self.backend.quantum_dim(a)
    }

    pub fn rho(&self, a: usize) -> &CMat {
        &self.backend.irreps[a].rho
    }

    pub fn label(&self, a: usize) -> &str {
        &self.backend.irreps[a].label
    }

    pub fn conj_solution(&self, a: usize) -> &ConjugateSolution {
        &self.conj[a]
    }

    /// Orthonormal basis of `Mor(U_α × U_β, U_γ)`, each a `dγ × dα·dβ` matrix.
    pub fn fusion(&self, a: usize, b: usize, c: usize) -> &[CMat] {
        self.fusion.get(&(a, b, c)).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// All `(γ, k)` such that the `k`-th basis element of `Mor(α × β, γ)` exists.
    pub fn channels(&self, a: usize, b: usize) -> Vec<(usize, usize)> {
        (0..self.n_irreps()).flat_map(|c| (0..self.fusion(a, b, c).len()).map(move |k| (c, k))).collect()
    }

    /// Coefficients of `s ∈ Mor(α × β, γ)` in the orthonormal fusion basis.
    pub fn expand(&self, a: usize, b: usize, c: usize, s: &CMat) -> Vec<C64> {
        self.fusion(a, b, c).iter().map(|t| crate::linalg::frob_inner(t, s)).collect()
    }

    /// Residual of `s` outside the span of the fusion basis.
    pub fn expansion_residual(&self, a: usize, b: usize, c: usize, s: &CMat) -> f64 {
        let coeffs = self.expand(a, b, c, s);
        let mut rebuilt = CMat::zeros(s.nrows(), s.ncols());
        for (t, k) in self.fusion(a, b, c).iter().zip(coeffs) {
            rebuilt += t * k;
        }
        max_abs(&(s - rebuilt))
    }

    pub fn fusion_keys(&self) -> impl Iterator<Item = &(usize, usize, usize)> {
        self.fusion.keys()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{random_complex, seeded_rng};

    #[test]
    fn s3_haar_average_is_schur_scalar() {
        let b = Backend::symmetric3();
        let std = b.irrep_index("std").unwrap();
        let mut rng = seeded_rng(1);
        let seed = random_complex(&mut rng, 2, 2);
        let avg = b.haar_average(&b.rep(std), &b.rep(std), &seed).unwrap();
        let scalar = avg[(0, 0)];
        assert!(max_abs(&(&avg - identity(2) * scalar)) < 1e-12);
        assert!((scalar - seed.trace() * re(0.5)).norm() < 1e-12);
    }

    #[test]
    fn trivial_to_sign_average_vanishes() {
        let b = Backend::symmetric3();
        let sign = b.irrep_index("sign").unwrap();
        let avg = b.haar_average(&b.rep(b.trivial), &b.rep(sign), &CMat::from_element(1, 1, re(3.0))).unwrap();
        assert!(max_abs(&avg) < 1e-15);
    }

    #[test]
    fn haar_average_rejects_bad_shape() {
        let b = Backend::symmetric3();
        let std = b.irrep_index("std").unwrap();
        let err = b.haar_average(&b.rep(std), &b.rep(std), &identity(3));
        assert!(matches!(err, Err(Error::Dimension(_))));
    }

    #[test]
    fn std_squared_decomposes_into_all_irreps() {
        let b = Backend::symmetric3();
        let std = b.irrep_index("std").unwrap();
        let u = b.tensor(&b.rep(std), &b.rep(std)).unwrap();
        let parts = b.decompose(&u).unwrap();
        let labels: Vec<&str> = parts.iter().map(|(a, _)| b.irreps[*a].label.as_str()).collect();
        assert_eq!(labels, vec!["triv", "sign", "std"]);
        let mut sum = CMat::zeros(4, 4);
        for (_, w) in &parts {
            assert!(max_abs(&(w.adjoint() * w - identity(w.ncols()))) < 1e-10);
            sum += w * w.adjoint();
        }
        assert!(max_abs(&(sum - identity(4))) < 1e-10);
    }

    #[test]
    fn dual_backend_fuses_by_multiplication() {
        let b = Backend::dual(Group::cyclic(4));
        let u = b.tensor(&b.rep(1), &b.rep(2)).unwrap();
        let parts = b.decompose(&u).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].0, 3);
        assert!(b.mor_space(&b.rep(1), &b.rep(2)).unwrap().is_empty());
    }

    #[test]
    fn conjugate_equations_hold_for_synthetic_rho() {
        let q: f64 = 0.5 * (1.0 + 5f64.sqrt()) / 2.0;
        let mut backend = Backend::abelian_group(&[2]);
        // Synthetic non-Kac data on a formally two-dimensional irrep.
        let rho = CMat::from_diagonal(&CVec::from_vec(vec![re(q), re(1.0 / q)]));
        backend.irreps[1].dim = 2;
        backend.irreps[1].rho = rho;
        backend.j[1] = identity(2);
        let sol = backend.conjugate_solution(1);
        let (e1, e2) = sol.equation_residuals();
        assert!(e1 < 1e-12 && e2 < 1e-12);
        let (n1, n2) = sol.norms_squared();
        assert!((n1 - (q + 1.0 / q)).abs() < 1e-12);
        assert!((n2 - (q + 1.0 / q)).abs() < 1e-12);
        assert!((backend.quantum_dim(1) - (q + 1.0 / q)).abs() < 1e-12);
    }

    #[test]
    fn frobenius_round_trip() {
        let b = Backend::symmetric3();
        let std = b.irrep_index("std").unwrap();
        let mut rng = seeded_rng(3);
        let t = random_complex(&mut rng, 3 * 2, 3 * 2);
        let s = b.frobenius(&t, 3, std, 2).unwrap();
        let back = b.frobenius_inverse(&s, 3, std, 2).unwrap();
        assert!(max_abs(&(back - t)) < 1e-12);
    }

    #[test]
    fn group_table_errors_are_reported() {
        let labels = vec!["a".to_string(), "b".to_string()];
        let err = Group::new(labels, vec![vec![0, 1], vec![1, 1]], 0);
        assert!(matches!(err, Err(Error::Table(_))));
    }
}
