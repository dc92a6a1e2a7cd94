//! Dense complex linear algebra helpers shared by every module.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen, SVD};
use rand::Rng;

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Singular-value threshold used for rank decisions.
pub const RANK_TOL: f64 = 1e-8;

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

#[inline]
pub fn cx(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_vec(v: &CVec) -> f64 {
    v.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn kron_vec(a: &CVec, b: &CVec) -> CVec {
    let mut out = CVec::zeros(a.len() * b.len());
    for i in 0..a.len() {
        for j in 0..b.len() {
            out[i * b.len() + j] = a[i] * b[j];
        }
    }
    out
}

/// Column-major vectorisation, matching `vec(BXA^T) = (A ⊗ B) vec(X)`.
pub fn vectorize(m: &CMat) -> CVec {
    CVec::from_iterator(m.len(), m.iter().cloned())
}

pub fn unvectorize(v: &CVec, rows: usize, cols: usize) -> CMat {
    CMat::from_iterator(rows, cols, v.iter().cloned())
}

/// Frobenius inner product `Tr(a^* b)`.
pub fn frob_inner(a: &CMat, b: &CMat) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn stack_columns(cols: &[CVec], rows: usize) -> CMat {
    let mut m = CMat::zeros(rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        m.set_column(j, c);
    }
    m
}

fn full_svd(m: &CMat) -> (DVector<f64>, CMat, CMat) {
    // Pad to at least square so that `v_t` spans the whole domain.
    let (r, c) = m.shape();
    let padded = if r < c {
        let mut p = CMat::zeros(c, c);
        p.view_mut((0, 0), (r, c)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = SVD::new(padded, true, true);
    (svd.singular_values, svd.u.expect("u requested"), svd.v_t.expect("v_t requested"))
}

/// Orthonormal basis (as columns) of the kernel of `m`.
pub fn null_space(m: &CMat, tol: f64) -> CMat {
    let c = m.ncols();
    if c == 0 {
        return CMat::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return identity(c);
    }
    let (s, _, v_t) = full_svd(m);
    let scale = s.iter().cloned().fold(1.0, f64::max);
    let cols: Vec<CVec> =
        (0..s.len()).filter(|&k| s[k] <= tol * scale).map(|k| v_t.row(k).adjoint().into_owned()).collect();
    let mut basis = stack_columns(&cols, c);
    canonical_phases(&mut basis);
    basis
}

/// Orthonormal basis (as columns) of the column space of `m`.
pub fn range_basis(m: &CMat, tol: f64) -> CMat {
    let r = m.nrows();
    if m.ncols() == 0 || r == 0 {
        return CMat::zeros(r, 0);
    }
    let svd = SVD::new(m.clone(), true, false);
    let u = svd.u.expect("u requested");
    let s = &svd.singular_values;
    let scale = s.iter().cloned().fold(1.0, f64::max);
    let mut idx: Vec<usize> = (0..s.len()).filter(|&k| s[k] > tol * scale).collect();
    idx.sort_by(|&a, &b| s[b].partial_cmp(&s[a]).unwrap().then(a.cmp(&b)));
    let cols: Vec<CVec> = idx.iter().map(|&k| u.column(k).into_owned()).collect();
    let mut basis = stack_columns(&cols, r);
    canonical_phases(&mut basis);
    basis
}

pub fn rank(m: &CMat, tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let svd = SVD::new(m.clone(), false, false);
    let scale = svd.singular_values.iter().cloned().fold(1.0, f64::max);
    svd.singular_values.iter().filter(|&&s| s > tol * scale).count()
}

pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = SVD::new(m.clone(), false, false).singular_values.iter().cloned().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Rotate each column so that its first entry of (near) maximal modulus is
/// real and positive.
pub fn canonical_phases(m: &mut CMat) {
    for j in 0..m.ncols() {
        let col = m.column(j);
        let top = col.iter().fold(0.0, |a: f64, z| a.max(z.norm()));
        if top == 0.0 {
            continue;
        }
        let pivot = col.iter().find(|z| z.norm() > top * (1.0 - 1e-6)).cloned().unwrap();
        let phase = pivot.conj() / pivot.norm();
        for i in 0..m.nrows() {
            m[(i, j)] *= phase;
        }
    }
}

/// Least-squares solution of `a x = b` together with the max-abs residual.
pub fn lstsq(a: &CMat, b: &CMat) -> (CMat, f64) {
    if a.ncols() == 0 {
        let x = CMat::zeros(0, b.ncols());
        return (x, max_abs(b));
    }
    if a.nrows() == 0 {
        return (CMat::zeros(a.ncols(), b.ncols()), 0.0);
    }
    let svd = SVD::new(a.clone(), true, true);
    let scale = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let x = svd.solve(b, 1e-12 * scale.max(1e-300)).expect("svd solve with u and v_t");
    let res = max_abs(&(a * &x - b));
    (x, res)
}

/// Moore-Penrose pseudo-inverse.
pub fn pinv(a: &CMat) -> CMat {
    if a.is_empty() {
        return CMat::zeros(a.ncols(), a.nrows());
    }
    let svd = SVD::new(a.clone(), true, true);
    let scale = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    svd.pseudo_inverse(1e-12 * scale.max(1e-300)).expect("pseudo inverse")
}

/// Eigen-decomposition of a Hermitian matrix; eigenvalues ascending.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    let h = (m + m.adjoint()) * re(0.5);
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap().then(a.cmp(&b)));
    let vals = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let cols: Vec<CVec> = order.iter().map(|&k| eig.eigenvectors.column(k).into_owned()).collect();
    (vals, stack_columns(&cols, n))
}

/// Apply a real function to a Hermitian matrix through its spectrum.
pub fn hermitian_fn(m: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (vals, vecs) = hermitian_eigen(m);
    let d = CMat::from_diagonal(&CVec::from_iterator(vals.len(), vals.iter().map(|&x| re(f(x)))));
    &vecs * d * vecs.adjoint()
}

pub fn psd_sqrt(m: &CMat) -> CMat {
    hermitian_fn(m, |x| x.max(0.0).sqrt())
}

pub fn psd_inv_sqrt(m: &CMat) -> CMat {
    hermitian_fn(m, |x| 1.0 / x.sqrt())
}

pub fn spectral_norm(m: &CMat) -> f64 {
    singular_values(m).first().cloned().unwrap_or(0.0)
}

/// Group sorted eigenvalues into clusters of nearly equal values.
pub fn cluster(vals: &[f64], tol: f64) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (k, &v) in vals.iter().enumerate() {
        match out.last_mut() {
            Some(last) if (vals[*last.last().unwrap()] - v).abs() <= tol => last.push(k),
            _ => out.push(vec![k]),
        }
    }
    out
}

pub fn random_complex<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| cx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

pub fn random_vec<R: Rng>(rng: &mut R, n: usize) -> CVec {
    CVec::from_fn(n, |_, _| cx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

pub fn random_reals<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

pub fn seeded_rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

/// Wedderburn decomposition of a unital *-subalgebra of `M_n(C)`.
///
/// The input matrices must span a subalgebra closed under conjugate
/// transpose and containing the identity. Returns the block sizes and a
/// full system of matrix units, ordered block by block and row-major inside
/// each block.
#[derive(Clone, Debug)]
pub struct Wedderburn {
    pub blocks: Vec<usize>,
    pub units: Vec<CMat>,
}

pub fn wedderburn<R: Rng>(span: &[CMat], n: usize, rng: &mut R) -> Option<Wedderburn> {
    let vecs: Vec<CVec> = span.iter().map(vectorize).collect();
    let basis_cols = range_basis(&stack_columns(&vecs, n * n), RANK_TOL);
    let s = basis_cols.ncols();
    let basis: Vec<CMat> = (0..s).map(|k| unvectorize(&basis_cols.column(k).into_owned(), n, n)).collect();
    let in_algebra = |m: &CMat| -> f64 {
        let v = vectorize(m);
        let proj = &basis_cols * (basis_cols.adjoint() * &v);
        max_abs_vec(&(v - proj))
    };

    // Center: coefficient vectors c with [Σ c_k S_k, S_j] = 0 for all j.
    let mut rows = CMat::zeros(s * n * n, s);
    for (k, sk) in basis.iter().enumerate() {
        for (j, sj) in basis.iter().enumerate() {
            let comm = vectorize(&(sk * sj - sj * sk));
            rows.view_mut((j * n * n, k), (n * n, 1)).copy_from(&comm);
        }
    }
    let center = null_space(&rows, RANK_TOL);
    let combo = |coeffs: &CVec| -> CMat {
        let mut m = CMat::zeros(n, n);
        for (k, sk) in basis.iter().enumerate() {
            m += sk * coeffs[k];
        }
        m
    };

    // Minimal central projections from a random self-adjoint central element.
    let mut h = CMat::zeros(n, n);
    for c in 0..center.ncols() {
        let z = combo(&center.column(c).into_owned());
        let z = (&z + z.adjoint()) * re(0.5);
        h += z * re(rng.random_range(0.5..1.5) * (c as f64 + 1.0));
    }
    let (vals, vecs) = hermitian_eigen(&h);
    let scale = vals.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    let mut central = Vec::new();
    for group in cluster(&vals, 1e-7 * scale) {
        let cols: Vec<CVec> = group.iter().map(|&k| vecs.column(k).into_owned()).collect();
        let v = stack_columns(&cols, n);
        central.push(&v * v.adjoint());
    }

    let mut blocks = Vec::new();
    let mut units = Vec::new();
    for p in central {
        if in_algebra(&p) > 1e-6 {
            return None;
        }
        let range = range_basis(&p, 1e-6);
        // Random self-adjoint element of pAp, compressed to the range of p.
        let coeffs = CVec::from_iterator(s, random_reals(rng, s).into_iter().map(re));
        let a = combo(&coeffs);
        let a = &p * ((&a + a.adjoint()) * re(0.5)) * &p;
        let compressed = range.adjoint() * &a * &range;
        let (vals, vecs) = hermitian_eigen(&compressed);
        let scale = vals.iter().fold(1e-3f64, |acc, v| acc.max(v.abs()));
        let groups = cluster(&vals, 1e-7 * scale);
        let k = groups.len();
        let minimal: Vec<CMat> = groups
            .iter()
            .map(|g| {
                let cols: Vec<CVec> = g.iter().map(|&i| &range * vecs.column(i)).collect();
                let v = stack_columns(&cols, n);
                &v * v.adjoint()
            })
            .collect();
        let q1 = &minimal[0];
        let tr_q1 = q1.trace().re;
        let mut col1 = vec![q1.clone()];
        for qi in minimal.iter().skip(1) {
            let r = combo(&CVec::from_iterator(
                s,
                (0..s).map(|_| cx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))),
            ));
            let y = qi * r * q1;
            let c = (y.adjoint() * &y).trace().re / tr_q1;
            if c <= 1e-12 {
                return None;
            }
            col1.push(y * re(1.0 / c.sqrt()));
        }
        for i in 0..k {
            for j in 0..k {
                units.push(&col1[i] * col1[j].adjoint());
            }
        }
        blocks.push(k);
    }
    let total: usize = blocks.iter().map(|k| k * k).sum();
    if total != s {
        return None;
    }
    Some(Wedderburn { blocks, units })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_rank_one() {
        let m = CMat::from_row_slice(1, 2, &[re(1.0), re(1.0)]);
        let k = null_space(&m, RANK_TOL);
        assert_eq!(k.ncols(), 1);
        assert!(max_abs(&(&m * &k)) < 1e-12);
    }

    #[test]
    fn lstsq_reports_inconsistency() {
        let a = CMat::from_row_slice(2, 1, &[re(1.0), re(0.0)]);
        let b = CMat::from_row_slice(2, 1, &[re(1.0), re(1.0)]);
        let (_, res) = lstsq(&a, &b);
        assert!((res - 1.0).abs() < 1e-12);
    }

    #[test]
    fn wedderburn_of_block_diagonal_algebra() {
        // C ⊕ M_2 embedded in M_3.
        let mut span = Vec::new();
        let mut e = CMat::zeros(3, 3);
        e[(0, 0)] = re(1.0);
        span.push(e);
        for i in 1..3 {
            for j in 1..3 {
                let mut e = CMat::zeros(3, 3);
                e[(i, j)] = re(1.0);
                span.push(e);
            }
        }
        let mut rng = seeded_rng(7);
        let w = wedderburn(&span, 3, &mut rng).unwrap();
        let mut blocks = w.blocks.clone();
        blocks.sort();
        assert_eq!(blocks, vec![1, 2]);
        // Matrix unit relations.
        let mut off = 0;
        for &k in &w.blocks {
            for i in 0..k {
                for j in 0..k {
                    for l in 0..k {
                        let prod = &w.units[off + i * k + j] * &w.units[off + j * k + l];
                        assert!(max_abs(&(prod - &w.units[off + i * k + l])) < 1e-10);
                    }
                }
            }
            off += k * k;
        }
    }
}
