//! JSON file formats. Complex numbers are `[re, im]`; matrices are lists of rows.

use std::collections::BTreeMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::deform::CocycleData;
use crate::error::{Error, Result};
use crate::hilbmod::{Correspondence, FdCStarAlgebra};
use crate::linalg::{max_abs, CMat, C64};
use crate::qcat::{Backend, BackendKind, Group, IrrepInput, Rep, RepCategory};
use crate::spectral::{ActionData, ActionKind, FixedAlgebra};
use crate::wutf::{FunctorData, GradedBundle};

pub type C2 = [f64; 2];
pub type JMat = Vec<Vec<C2>>;

pub fn mat_to_json(m: &CMat) -> JMat {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

pub fn mat_from_json(j: &JMat, what: &str) -> Result<CMat> {
    let rows = j.len();
    let cols = j.first().map(|r| r.len()).unwrap_or(0);
    if j.iter().any(|r| r.len() != cols) {
        return Err(Error::Parse(format!("{what}: ragged matrix")));
    }
    Ok(CMat::from_fn(rows, cols, |r, c| C64::new(j[r][c][0], j[r][c][1])))
}

fn check_shape(m: &CMat, shape: (usize, usize), what: &str) -> Result<()> {
    if m.shape() != shape {
        return Err(Error::Dimension(format!(
            "{what}: expected {}×{}, found {}×{}",
            shape.0,
            shape.1,
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

pub fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupFile {
    pub elements: Vec<String>,
    /// `mul_table[a][b]` is the index of `ab`.
    pub mul_table: Vec<Vec<usize>>,
    pub identity: String,
}

impl GroupFile {
    pub fn from_group(g: &Group) -> GroupFile {
        GroupFile { elements: g.labels.clone(), mul_table: g.mul.clone(), identity: g.labels[g.identity].clone() }
    }

    pub fn to_group(&self) -> Result<Group> {
        let id = self
            .elements
            .iter()
            .position(|l| *l == self.identity)
            .ok_or_else(|| Error::Parse(format!("identity {} is not an element", self.identity)))?;
        Group::new(self.elements.clone(), self.mul_table.clone(), id)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IrrepFile {
    pub label: String,
    pub dim: usize,
    pub matrices: Vec<JMat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<JMat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conj: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BackendFile {
    /// `"group"` or `"dual"`.
    pub kind: String,
    #[serde(flatten)]
    pub group: GroupFile,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub irreps: Vec<IrrepFile>,
}

impl BackendFile {
    pub fn from_backend(b: &Backend) -> BackendFile {
        let irreps = match b.kind {
            BackendKind::Dual => Vec::new(),
            BackendKind::Group => b
                .irreps
                .iter()
                .map(|ir| IrrepFile {
                    label: ir.label.clone(),
                    dim: ir.dim,
                    matrices: ir.matrices.iter().map(mat_to_json).collect(),
                    rho: Some(mat_to_json(&ir.rho)),
                    conj: Some(b.irreps[ir.conj].label.clone()),
                })
                .collect(),
        };
        let kind = match b.kind {
            BackendKind::Group => "group",
            BackendKind::Dual => "dual",
        };
        BackendFile { kind: kind.into(), group: GroupFile::from_group(&b.group), irreps }
    }

    pub fn to_backend(&self, tol: f64) -> Result<Backend> {
        let group = self.group.to_group()?;
        match self.kind.as_str() {
            "dual" => Ok(Backend::dual(group)),
            "group" => {
                let mut inputs = Vec::new();
                for ir in &self.irreps {
                    let mut matrices = Vec::new();
                    for (g, m) in ir.matrices.iter().enumerate() {
                        let m = mat_from_json(m, &format!("irrep {} matrix {g}", ir.label))?;
                        check_shape(&m, (ir.dim, ir.dim), &format!("irrep {} matrix {g}", ir.label))?;
                        matrices.push(m);
                    }
                    let rho =
                        ir.rho.as_ref().map(|r| mat_from_json(r, &format!("irrep {} rho", ir.label))).transpose()?;
                    inputs.push(IrrepInput { label: ir.label.clone(), matrices, rho });
                }
                let b = Backend::finite(group, inputs, tol)?;
                for (a, ir) in self.irreps.iter().enumerate() {
                    if let Some(c) = &ir.conj {
                        if b.irreps[b.irreps[a].conj].label != *c {
                            return Err(Error::Table(format!(
                                "irrep {} declares conjugate {c}, found {}",
                                ir.label, b.irreps[b.irreps[a].conj].label
                            )));
                        }
                    }
                }
                Ok(b)
            }
            other => Err(Error::Parse(format!("unknown backend kind {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub blocks: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrespondenceFile {
    pub algebra: AlgebraFile,
    pub dim: usize,
    pub left_action: Vec<JMat>,
    pub right_action: Vec<JMat>,
    pub inner: Vec<JMat>,
}

impl CorrespondenceFile {
    pub fn from_correspondence(c: &Correspondence) -> CorrespondenceFile {
        CorrespondenceFile {
            algebra: AlgebraFile { blocks: c.algebra.blocks.clone() },
            dim: c.dim,
            left_action: c.left.iter().map(mat_to_json).collect(),
            right_action: c.right.iter().map(mat_to_json).collect(),
            inner: c.inner.iter().map(mat_to_json).collect(),
        }
    }

    pub fn to_correspondence(&self, base: &FdCStarAlgebra, what: &str) -> Result<Correspondence> {
        if self.algebra.blocks != base.blocks {
            return Err(Error::Config(format!("{what}: correspondence is over a different algebra")));
        }
        let n = base.dim();
        let read = |v: &Vec<JMat>, name: &str| -> Result<Vec<CMat>> {
            if v.len() != n {
                return Err(Error::Dimension(format!("{what}: {name} needs {n} matrices")));
            }
            v.iter()
                .enumerate()
                .map(|(k, m)| {
                    let m = mat_from_json(m, &format!("{what} {name} {k}"))?;
                    check_shape(&m, (self.dim, self.dim), &format!("{what} {name} {k}"))?;
                    Ok(m)
                })
                .collect()
        };
        Ok(Correspondence {
            algebra: base.clone(),
            dim: self.dim,
            left: read(&self.left_action, "left_action")?,
            right: read(&self.right_action, "right_action")?,
            inner: read(&self.inner, "inner")?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiEntry {
    pub alpha: String,
    pub beta: String,
    pub gamma: String,
    pub intertwiner_index: usize,
    pub tensor: JMat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwistEntry {
    pub alpha: String,
    pub beta: String,
    pub matrix: JMat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctorFile {
    /// Path of the backend file, relative to this file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub backend_ref: Option<String>,
    pub base_algebra: AlgebraFile,
    pub modules: BTreeMap<String, CorrespondenceFile>,
    pub phi: Vec<PhiEntry>,
    /// Twist of the tensor structure, for functors out of a deformed category.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<Vec<TwistEntry>>,
}

fn irrep_of(b: &Backend, label: &str) -> Result<usize> {
    b.irrep_index(label).ok_or_else(|| Error::Parse(format!("unknown irrep {label:?}")))
}

impl FunctorFile {
    pub fn from_functor(f: &FunctorData, backend_ref: Option<String>) -> FunctorFile {
        let cat = &f.category;
        let modules = (0..cat.n_irreps())
            .map(|a| (cat.label(a).to_string(), CorrespondenceFile::from_correspondence(&f.modules[a])))
            .collect();
        let phi = f
            .phi
            .iter()
            .flat_map(|(&(a, b, c), ts)| {
                ts.iter().enumerate().map(move |(k, t)| PhiEntry {
                    alpha: cat.label(a).into(),
                    beta: cat.label(b).into(),
                    gamma: cat.label(c).into(),
                    intertwiner_index: k,
                    tensor: mat_to_json(t),
                })
            })
            .collect();
        let twist = cat.is_twisted().then(|| {
            (0..cat.n_irreps())
                .flat_map(|a| (0..cat.n_irreps()).map(move |b| (a, b)))
                .map(|(a, b)| TwistEntry {
                    alpha: cat.label(a).into(),
                    beta: cat.label(b).into(),
                    matrix: mat_to_json(&cat.twist(a, b)),
                })
                .collect()
        });
        FunctorFile { backend_ref, base_algebra: AlgebraFile { blocks: f.base.blocks.clone() }, modules, phi, twist }
    }

    pub fn to_functor(&self, backend: &Backend) -> Result<FunctorData> {
        let base = FdCStarAlgebra::new(self.base_algebra.blocks.clone())?;
        let category = match &self.twist {
            None => RepCategory::new(backend.clone()),
            Some(entries) => {
                let mut tw = BTreeMap::new();
                for e in entries {
                    let key = (irrep_of(backend, &e.alpha)?, irrep_of(backend, &e.beta)?);
                    tw.insert(key, mat_from_json(&e.matrix, &format!("twist ({}, {})", e.alpha, e.beta))?);
                }
                RepCategory::twisted(backend.clone(), tw)?
            }
        };
        for key in self.modules.keys() {
            irrep_of(backend, key)?;
        }
        let mut modules = Vec::new();
        for a in 0..backend.n_irreps() {
            let label = &backend.irreps[a].label;
            let cf =
                self.modules.get(label).ok_or_else(|| Error::Incomplete(format!("no module for irrep {label}")))?;
            modules.push(cf.to_correspondence(&base, &format!("module {label}"))?);
        }
        let mut grouped: BTreeMap<(usize, usize, usize), BTreeMap<usize, CMat>> = BTreeMap::new();
        for e in &self.phi {
            let key = (irrep_of(backend, &e.alpha)?, irrep_of(backend, &e.beta)?, irrep_of(backend, &e.gamma)?);
            let what = format!("phi ({}, {}, {})[{}]", e.alpha, e.beta, e.gamma, e.intertwiner_index);
            let t = mat_from_json(&e.tensor, &what)?;
            if grouped.entry(key).or_default().insert(e.intertwiner_index, t).is_some() {
                return Err(Error::Parse(format!("{what} given twice")));
            }
        }
        let mut phi = BTreeMap::new();
        for (key, ts) in grouped {
            let n = ts.len();
            if ts.keys().cloned().ne(0..n) {
                return Err(Error::Incomplete(format!(
                    "phi ({}, {}, {}) has gaps in intertwiner indices",
                    backend.irreps[key.0].label, backend.irreps[key.1].label, backend.irreps[key.2].label
                )));
            }
            phi.insert(key, ts.into_values().collect());
        }
        Ok(FunctorData { category, base, modules, phi })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultEntry {
    pub alpha: String,
    pub beta: String,
    pub tensor: JMat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradedFile {
    pub group: GroupFile,
    pub base_algebra: AlgebraFile,
    pub fibers: BTreeMap<String, CorrespondenceFile>,
    pub mult: Vec<MultEntry>,
}

impl GradedFile {
    pub fn from_bundle(b: &GradedBundle) -> GradedFile {
        let g = &b.group;
        GradedFile {
            group: GroupFile::from_group(g),
            base_algebra: AlgebraFile { blocks: b.base.blocks.clone() },
            fibers: (0..g.order())
                .map(|x| (g.labels[x].clone(), CorrespondenceFile::from_correspondence(&b.fibers[x])))
                .collect(),
            mult: b
                .mult
                .iter()
                .map(|(&(x, y), t)| MultEntry {
                    alpha: g.labels[x].clone(),
                    beta: g.labels[y].clone(),
                    tensor: mat_to_json(t),
                })
                .collect(),
        }
    }

    pub fn to_bundle(&self) -> Result<GradedBundle> {
        let group = self.group.to_group()?;
        let base = FdCStarAlgebra::new(self.base_algebra.blocks.clone())?;
        let elem = |l: &str| group.index_of(l).ok_or_else(|| Error::Parse(format!("unknown group element {l:?}")));
        for key in self.fibers.keys() {
            elem(key)?;
        }
        let mut fibers = Vec::new();
        for x in 0..group.order() {
            let label = &group.labels[x];
            let cf = self.fibers.get(label).ok_or_else(|| Error::Incomplete(format!("no fiber for {label}")))?;
            fibers.push(cf.to_correspondence(&base, &format!("fiber {label}"))?);
        }
        let mut mult = BTreeMap::new();
        for e in &self.mult {
            let key = (elem(&e.alpha)?, elem(&e.beta)?);
            mult.insert(key, mat_from_json(&e.tensor, &format!("mult ({}, {})", e.alpha, e.beta))?);
        }
        Ok(GradedBundle { group, base, fibers, mult })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradingData {
    /// Degree (element label) of each basis vector.
    pub degrees: Vec<String>,
    /// Basis vectors as columns; the standard basis when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<JMat>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "lowercase")]
pub enum ActionKindFile {
    /// One matrix on flat coordinates per group element label.
    Automorphism(BTreeMap<String, JMat>),
    Grading(GradingData),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedAlgebraFile {
    pub blocks: Vec<usize>,
    pub embedding: JMat,
}

/// An equivariant submodule `M ⊂ C^n ⊗ B` for `module-functor` and `fullness`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModuleFile {
    /// Irrep label `U` for `M ⊂ H_U ⊗ B`.
    pub rep: String,
    /// Columns spanning `M`; all of `H_U ⊗ B` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<JMat>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionFile {
    /// Path of the backend file, relative to this file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub backend_ref: Option<String>,
    pub algebra: AlgebraFile,
    #[serde(flatten)]
    pub kind: ActionKindFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<FixedAlgebraFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleFile>,
}

impl ActionFile {
    /// Requires the algebra of `act` to be in standard block form.
    pub fn from_action(act: &ActionData) -> Result<ActionFile> {
        let blocks =
            act.algebra.block_sizes(0).ok_or_else(|| Error::Config("algebra has no block decomposition".into()))?;
        let std = FdCStarAlgebra::new(blocks.clone())?.table();
        let same = std.dim == act.algebra.dim
            && std.left.iter().zip(&act.algebra.left).all(|(a, b)| max_abs(&(a - b)) < 1e-12)
            && max_abs(&(&std.star - &act.algebra.star)) < 1e-12;
        if !same {
            return Err(Error::Config("algebra is not in standard block form".into()));
        }
        let g = &act.backend.group;
        let kind = match &act.kind {
            ActionKind::Automorphisms(m) => ActionKindFile::Automorphism(
                (0..g.order()).map(|x| (g.labels[x].clone(), mat_to_json(&m[x]))).collect(),
            ),
            ActionKind::Grading { basis, degrees } => ActionKindFile::Grading(GradingData {
                degrees: degrees.iter().map(|&d| g.labels[d].clone()).collect(),
                basis: (basis != &crate::linalg::identity(basis.nrows())).then(|| mat_to_json(basis)),
            }),
        };
        let base = act
            .base
            .as_ref()
            .map(|b| FixedAlgebraFile { blocks: b.algebra.blocks.clone(), embedding: mat_to_json(&b.embedding) });
        Ok(ActionFile { backend_ref: None, algebra: AlgebraFile { blocks }, kind, base, module: None })
    }

    pub fn to_action(&self, backend: &Backend) -> Result<ActionData> {
        let alg = FdCStarAlgebra::new(self.algebra.blocks.clone())?;
        let n = alg.dim();
        let g = &backend.group;
        let elem = |l: &str| g.index_of(l).ok_or_else(|| Error::Parse(format!("unknown group element {l:?}")));
        let kind = match &self.kind {
            ActionKindFile::Automorphism(map) => {
                for key in map.keys() {
                    elem(key)?;
                }
                let mut ms = Vec::new();
                for x in 0..g.order() {
                    let m = map
                        .get(&g.labels[x])
                        .ok_or_else(|| Error::Incomplete(format!("no automorphism for {}", g.labels[x])))?;
                    let m = mat_from_json(m, &format!("automorphism {}", g.labels[x]))?;
                    check_shape(&m, (n, n), &format!("automorphism {}", g.labels[x]))?;
                    ms.push(m);
                }
                ActionKind::Automorphisms(ms)
            }
            ActionKindFile::Grading(gd) => {
                let degrees = gd.degrees.iter().map(|l| elem(l)).collect::<Result<Vec<_>>>()?;
                let basis = match &gd.basis {
                    Some(b) => mat_from_json(b, "grading basis")?,
                    None => crate::linalg::identity(n),
                };
                check_shape(&basis, (n, degrees.len()), "grading basis")?;
                ActionKind::Grading { basis, degrees }
            }
        };
        let base = match &self.base {
            Some(b) => {
                let algebra = FdCStarAlgebra::new(b.blocks.clone())?;
                let embedding = mat_from_json(&b.embedding, "base embedding")?;
                check_shape(&embedding, (n, algebra.dim()), "base embedding")?;
                Some(FixedAlgebra { algebra, embedding })
            }
            None => None,
        };
        Ok(ActionData { backend: backend.clone(), algebra: alg.table(), kind, base })
    }

    /// The representation and spanning columns of the declared module, if any.
    pub fn module_spec(&self, backend: &Backend, dim_b: usize) -> Result<Option<(Rep, CMat)>> {
        let Some(m) = &self.module else { return Ok(None) };
        let a = irrep_of(backend, &m.rep)?;
        let rep = backend.rep(a);
        let rows = backend.dim(a) * dim_b;
        let basis = match &m.basis {
            Some(b) => mat_from_json(b, "module basis")?,
            None => crate::linalg::identity(rows),
        };
        if basis.nrows() != rows {
            return Err(Error::Dimension(format!("module basis needs {rows} rows")));
        }
        Ok(Some((rep, basis)))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CocycleFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub backend_ref: Option<String>,
    #[serde(flatten)]
    pub values: CocycleValues,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CocycleValues {
    /// Values keyed by `"(γ,δ)"`; missing pairs default to 1.
    Dual { values: BTreeMap<String, C2> },
    /// Coefficients of `λ_g ⊗ λ_h`, rows indexed by `g`.
    Group { tensor: JMat },
}

/// Splits `"(a,b)"` at its top-level comma, so labels may contain commas.
fn split_pair(key: &str) -> Option<(&str, &str)> {
    let inner = key.trim().strip_prefix('(')?.strip_suffix(')')?;
    let mut depth = 0i32;
    for (i, ch) in inner.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some((inner[..i].trim(), inner[i + 1..].trim())),
            _ => {}
        }
    }
    None
}

impl CocycleFile {
    pub fn from_cocycle(om: &CocycleData, backend: &Backend) -> CocycleFile {
        let g = &backend.group;
        match om.kind {
            BackendKind::Dual => {
                let mut values = BTreeMap::new();
                for a in 0..g.order() {
                    for b in 0..g.order() {
                        let v = om.values[(a, b)] * om.phase;
                        values.insert(format!("({},{})", g.labels[a], g.labels[b]), [v.re, v.im]);
                    }
                }
                CocycleFile { backend_ref: None, values: CocycleValues::Dual { values } }
            }
            BackendKind::Group => CocycleFile {
                backend_ref: None,
                values: CocycleValues::Group { tensor: mat_to_json(&om.values.map(|v| v * om.phase)) },
            },
        }
    }

    pub fn to_cocycle(&self, backend: &Backend) -> Result<CocycleData> {
        let g = &backend.group;
        let n = g.order();
        match &self.values {
            CocycleValues::Dual { values } => {
                let mut m = CMat::from_element(n, n, crate::linalg::re(1.0));
                for (key, v) in values {
                    let (a, b) = split_pair(key).ok_or_else(|| Error::Parse(format!("bad cocycle key {key:?}")))?;
                    let ia = g.index_of(a).ok_or_else(|| Error::Parse(format!("unknown element {a:?} in {key:?}")))?;
                    let ib = g.index_of(b).ok_or_else(|| Error::Parse(format!("unknown element {b:?} in {key:?}")))?;
                    m[(ia, ib)] = C64::new(v[0], v[1]);
                }
                CocycleData::new(backend, BackendKind::Dual, m)
            }
            CocycleValues::Group { tensor } => {
                let m = mat_from_json(tensor, "cocycle tensor")?;
                CocycleData::new(backend, BackendKind::Group, m)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::qcat::TAU;

    #[test]
    fn pair_keys_respect_nesting() {
        assert_eq!(split_pair("((0,1),(1,0))"), Some(("(0,1)", "(1,0)")));
        assert_eq!(split_pair("(e,(12))"), Some(("e", "(12)")));
        assert_eq!(split_pair("e,f"), None);
    }

    #[test]
    fn files_roundtrip_through_json() {
        let be = Backend::symmetric3();
        let bf = BackendFile::from_backend(&be);
        let text = serde_json::to_string(&bf).unwrap();
        let back: BackendFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back, bf);
        let be2 = back.to_backend(TAU).unwrap();
        assert_eq!(be2.group, be.group);

        let act = fixtures::s3_translation();
        let af = ActionFile::from_action(&act).unwrap();
        let act2 =
            serde_json::from_str::<ActionFile>(&serde_json::to_string(&af).unwrap()).unwrap().to_action(&be2).unwrap();
        assert_eq!(ActionFile::from_action(&act2).unwrap(), af);

        let sf = crate::spectral::spectral_functor(&act).unwrap();
        let ff = FunctorFile::from_functor(&sf.functor, None);
        let f2 = ff.to_functor(&be2).unwrap();
        assert!(f2.validate(TAU).unwrap().passed());

        let om = fixtures::random_coboundary(&be, 3);
        let cf = CocycleFile::from_cocycle(&om, &be);
        let text = serde_json::to_string(&cf).unwrap();
        assert!(text.contains("\"kind\":\"group\""));
        let om2 = serde_json::from_str::<CocycleFile>(&text).unwrap().to_cocycle(&be).unwrap();
        assert!(max_abs(&(om2.values - om.values)) < 1e-15);

        let bundle = fixtures::clock_shift_bundle();
        let gf = GradedFile::from_bundle(&bundle);
        assert!(gf.to_bundle().unwrap().validate(TAU).unwrap().passed());
    }
}
