//! Finite spherical prefusion 2-category data: the skeletal tables the state
//! sum consumes, generator backends that evaluate them lazily, and explicit
//! tables for gauge experiments and file round trips.
//!
//! Labels are index-based: an edge label is an object index, a triangle label
//! is an index into the fusion list of its edge triple.  A tetrahedron label
//! therefore only exists when each of its four triangles is admissible, which
//! is exactly the fusion gate on associator spaces.

pub mod cochain;
pub mod dimid;
pub mod generators;
pub mod group;
pub mod pachner;
pub mod tenj;

use std::borrow::Cow;
use std::collections::{BTreeMap, HashMap};

use once_cell::sync::Lazy;
use serde_json::{json, Value};
use thiserror::Error;

use crate::scalar::Cyclotomic;
use crate::tensor::Matrix;
use cochain::CochainTable;
use group::GroupPresentation;
use tenj::{
    penta_face, pointed_z, ten_j_index_order, PentaLabel, TetraLabel,
    PENTA_TRI_TRIPLES, TETRA_TRI_TRIPLES,
};

pub type ObjId = usize;

static UNIT: Lazy<Cyclotomic> = Lazy::new(Cyclotomic::one);

#[derive(Debug, Error)]
pub enum CatError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("category validation failed: {0:?}")]
    Validation(Vec<String>),
    #[error("invalid cocycle: {witness}")]
    InvalidCocycle { witness: String },
    #[error("unsupported twist: {0}")]
    UnsupportedTwist(String),
    #[error("pentagon violation at {witness}")]
    PentagonViolation { witness: String },
    #[error("hexagon violation at {witness}")]
    HexagonViolation { witness: String },
    #[error("singular pairing at {0}")]
    SingularPairing(String),
    #[error("label out of range: {0}")]
    BadLabel(String),
    #[error("io error: {0}")]
    Io(String),
}

/// One simple 1-morphism in a fusion list: display name plus its dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct MorData {
    pub name: String,
    pub dim: Cyclotomic,
}

/// How a labeled 4-simplex is twisted for a Yetter-style 2-group category.
#[derive(Debug, Clone)]
pub enum YetterOmega {
    Trivial,
    /// Values on labeled 4-simplices; labels absent from the table count as 1.
    Table(HashMap<PentaLabel, Cyclotomic>),
}

#[derive(Debug, Clone)]
pub struct ExplicitTables {
    /// Associator space dimensions; labels absent from the map have dim 0.
    pub tetra: HashMap<TetraLabel, usize>,
    pub pairing: HashMap<TetraLabel, Matrix>,
    /// Row-major data over the five slots in the fixed index order.
    pub ten_j: HashMap<(PentaLabel, i8), Vec<Cyclotomic>>,
}

#[derive(Debug, Clone)]
pub enum CatBackend {
    Dw {
        group: GroupPresentation,
        omega: CochainTable,
    },
    Pointed {
        group: GroupPresentation,
        f: CochainTable,
        r: CochainTable,
        dims: Vec<Cyclotomic>,
    },
    Yetter {
        g: GroupPresentation,
        a: GroupPresentation,
        omega: YetterOmega,
    },
    Explicit(ExplicitTables),
}

#[derive(Debug, Clone)]
pub struct Fusion2CatData {
    pub name: String,
    pub objects: Vec<String>,
    /// Component index per object.
    pub components: Vec<usize>,
    pub dim_obj: Vec<Cyclotomic>,
    pub dim_end: Vec<Cyclotomic>,
    pub fusion: BTreeMap<(ObjId, ObjId, ObjId), Vec<MorData>>,
    pub backend: CatBackend,
}

/// Value of a 10j symbol: a dense tensor over the five slot spaces in the
/// fixed index order.  All shipped generators produce 0- or 1-dimensional
/// slots, so data is a single scalar or empty.
#[derive(Debug, Clone, PartialEq)]
pub struct TenJTensor {
    pub shape: [usize; 5],
    pub data: Vec<Cyclotomic>,
}

static EMPTY_FUSION: &[MorData] = &[];

impl Fusion2CatData {
    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn fusion_list(&self, a: ObjId, b: ObjId, c: ObjId) -> &[MorData] {
        self.fusion.get(&(a, b, c)).map(|v| v.as_slice()).unwrap_or(EMPTY_FUSION)
    }

    pub fn component_size(&self, a: ObjId) -> usize {
        let c = self.components[a];
        self.components.iter().filter(|&&x| x == c).count()
    }

    /// d(A) = dim(A) * dim End(A) * n(A).
    pub fn d_obj(&self, a: ObjId) -> Cyclotomic {
        self.dim_obj[a]
            .mul(&self.dim_end[a])
            .mul(&Cyclotomic::from_int(self.component_size(a) as i64))
    }

    /// dim(C) = sum over components of 1/dim End(representative).
    pub fn dim_cat(&self) -> Result<Cyclotomic, CatError> {
        let mut seen: Vec<usize> = Vec::new();
        let mut acc = Cyclotomic::zero();
        for (a, &c) in self.components.iter().enumerate() {
            if !seen.contains(&c) {
                seen.push(c);
                let inv = self.dim_end[a]
                    .inv()
                    .map_err(|_| CatError::Validation(vec![format!(
                        "dim End({}) is zero",
                        self.objects[a]
                    )]))?;
                acc = acc.add(&inv);
            }
        }
        Ok(acc)
    }

    /// Unit object: U with nonempty fusion(U, A, A) and fusion(A, U, A) for
    /// every object A.
    pub fn unit_object(&self) -> Option<ObjId> {
        match &self.backend {
            CatBackend::Dw { group, .. } => Some(group.unit),
            CatBackend::Yetter { g, .. } => Some(g.unit),
            CatBackend::Pointed { .. } => Some(0),
            CatBackend::Explicit(_) => (0..self.n_objects()).find(|&u| {
                (0..self.n_objects()).all(|a| {
                    !self.fusion_list(u, a, a).is_empty() && !self.fusion_list(a, u, a).is_empty()
                })
            }),
        }
    }

    /// Fusion key of triangle (i, j, k) of a simplex: morphisms go from
    /// edge(i,j) box edge(j,k) to edge(i,k).
    fn tetra_tri_key(&self, t: &TetraLabel, which: usize) -> (ObjId, ObjId, ObjId) {
        let (i, j, k) = TETRA_TRI_TRIPLES[which];
        let e = |a: usize, b: usize| t.edges[tenj::tetra_edge_index(a, b)];
        (e(i, j), e(j, k), e(i, k))
    }

    fn penta_tri_key(&self, p: &PentaLabel, which: usize) -> (ObjId, ObjId, ObjId) {
        let (i, j, k) = PENTA_TRI_TRIPLES[which];
        let e = |a: usize, b: usize| p.edges[tenj::penta_edge_index(a, b)];
        (e(i, j), e(j, k), e(i, k))
    }

    /// Checks index validity of a tetra label against the fusion tables.
    pub fn tetra_label_valid(&self, t: &TetraLabel) -> bool {
        if t.edges.iter().any(|&e| e >= self.n_objects()) {
            return false;
        }
        (0..4).all(|w| {
            let key = self.tetra_tri_key(t, w);
            t.tris[w] < self.fusion_list(key.0, key.1, key.2).len()
        })
    }

    pub fn penta_label_valid(&self, p: &PentaLabel) -> bool {
        if p.edges.iter().any(|&e| e >= self.n_objects()) {
            return false;
        }
        (0..10).all(|w| {
            let key = self.penta_tri_key(p, w);
            p.tris[w] < self.fusion_list(key.0, key.1, key.2).len()
        })
    }

    /// Dimension of the associator space attached to a labeled tetrahedron.
    pub fn tetra_space(&self, t: &TetraLabel) -> usize {
        debug_assert!(self.tetra_label_valid(t));
        match &self.backend {
            CatBackend::Dw { .. } => 1,
            CatBackend::Pointed { group, .. } => {
                // One object; triangle labels are A elements.  Flatness:
                // a(012) + a(023) = a(013) + a(123).
                let [a012, a013, a023, a123] = t.tris;
                if group.mul[a012][a023] == group.mul[a013][a123] {
                    1
                } else {
                    0
                }
            }
            CatBackend::Yetter { a, .. } => {
                let [a012, a013, a023, a123] = t.tris;
                if a.mul[a012][a023] == a.mul[a013][a123] {
                    1
                } else {
                    0
                }
            }
            CatBackend::Explicit(tables) => tables.tetra.get(t).copied().unwrap_or(0),
        }
    }

    /// Pairing matrix P with P[a][b] = <e-_a, e+_b> for a labeled tetra with
    /// nonzero space.
    pub fn pairing(&self, t: &TetraLabel) -> Result<Matrix, CatError> {
        let n = self.tetra_space(t);
        if n == 0 {
            return Err(CatError::BadLabel(format!(
                "pairing requested on zero-dimensional space {t:?}"
            )));
        }
        match &self.backend {
            CatBackend::Dw { .. } | CatBackend::Yetter { .. } => Ok(Matrix::identity(1)),
            CatBackend::Pointed { group, dims, .. } => {
                // Canonical bases are normalized so the entry equals the
                // dimension of the underlying composite 1-morphism.
                let [a012, _, a023, _] = t.tris;
                let comp = group.mul[a012][a023];
                Ok(Matrix::new(1, 1, vec![dims[comp].clone()]))
            }
            CatBackend::Explicit(tables) => tables
                .pairing
                .get(t)
                .cloned()
                .ok_or_else(|| CatError::BadLabel(format!("no pairing stored for {t:?}"))),
        }
    }

    pub fn copairing(&self, t: &TetraLabel) -> Result<Matrix, CatError> {
        let p = self.pairing(t)?;
        p.inverse()
            .map_err(|_| CatError::SingularPairing(format!("{t:?}")))
    }

    /// The 10j tensor of a labeled 4-simplex, in the fixed slot order for the
    /// given orientation sign.
    pub fn ten_j(&self, p: &PentaLabel, eps: i8) -> Result<TenJTensor, CatError> {
        debug_assert!(self.penta_label_valid(p));
        let mut shape = [0usize; 5];
        for (slot, (omit, _sign)) in ten_j_index_order(eps).iter().enumerate() {
            shape[slot] = self.tetra_space(&penta_face(p, *omit));
        }
        if shape.iter().any(|&d| d == 0) {
            return Ok(TenJTensor { shape, data: Vec::new() });
        }
        match &self.backend {
            CatBackend::Dw { .. } | CatBackend::Pointed { .. } | CatBackend::Yetter { .. } => {
                let v = self.ten_j_value(p, eps)?;
                Ok(TenJTensor { shape, data: vec![v] })
            }
            CatBackend::Explicit(tables) => {
                let data = tables
                    .ten_j
                    .get(&(p.clone(), eps))
                    .cloned()
                    .ok_or_else(|| CatError::BadLabel(format!("no ten_j stored for {p:?}")))?;
                let expect: usize = shape.iter().product();
                if data.len() != expect {
                    return Err(CatError::Validation(vec![format!(
                        "stored ten_j for {p:?} has {} entries, slots require {expect}",
                        data.len()
                    )]));
                }
                Ok(TenJTensor { shape, data })
            }
        }
    }

    /// Scalar fast path when every slot is one-dimensional.
    pub fn ten_j_scalar(&self, p: &PentaLabel, eps: i8) -> Result<Cyclotomic, CatError> {
        let t = self.ten_j(p, eps)?;
        if t.data.len() == 1 {
            Ok(t.data.into_iter().next().unwrap())
        } else if t.data.is_empty() {
            Ok(Cyclotomic::zero())
        } else {
            Err(CatError::BadLabel(
                "ten_j has higher-dimensional slots; use the tensor form".into(),
            ))
        }
    }

    /// The single 10j entry, skipping the slot-shape computation.  Callers
    /// must already know that all five face spaces are one-dimensional; on
    /// generator backends that holds whenever the faces are nonzero.
    pub fn ten_j_value(&self, p: &PentaLabel, eps: i8) -> Result<Cyclotomic, CatError> {
        Ok(self.ten_j_value_ref(p, eps)?.into_owned())
    }

    /// Borrowing form of [`Self::ten_j_value`]: table-backed values come out
    /// as references, which keeps the per-simplex cost of a scan free of
    /// allocation when the entries are units.
    pub fn ten_j_value_ref<'s>(
        &'s self,
        p: &PentaLabel,
        eps: i8,
    ) -> Result<Cow<'s, Cyclotomic>, CatError> {
        let invert = |v: &'s Cyclotomic| -> Result<Cow<'s, Cyclotomic>, CatError> {
            if v.is_one() {
                Ok(Cow::Borrowed(v))
            } else {
                v.inv()
                    .map(Cow::Owned)
                    .map_err(|_| CatError::InvalidCocycle {
                        witness: "omega value is zero".into(),
                    })
            }
        };
        match &self.backend {
            CatBackend::Dw { omega, .. } => {
                let g01 = p.edges[tenj::penta_edge_index(0, 1)];
                let g12 = p.edges[tenj::penta_edge_index(1, 2)];
                let g23 = p.edges[tenj::penta_edge_index(2, 3)];
                let g34 = p.edges[tenj::penta_edge_index(3, 4)];
                let v = omega.get(&[g01, g12, g23, g34]);
                if eps >= 0 {
                    Ok(Cow::Borrowed(v))
                } else {
                    invert(v)
                }
            }
            CatBackend::Pointed { group, f, r, .. } => {
                pointed_z(group, f, r, &p.tris, eps).map(Cow::Owned)
            }
            CatBackend::Yetter { omega, .. } => {
                let v = match omega {
                    YetterOmega::Trivial => &*UNIT,
                    YetterOmega::Table(tbl) => tbl.get(p).unwrap_or(&UNIT),
                };
                if eps >= 0 {
                    Ok(Cow::Borrowed(v))
                } else {
                    invert(v)
                }
            }
            CatBackend::Explicit(_) => self.ten_j_scalar(p, eps).map(Cow::Owned),
        }
    }

    /// The single pairing entry of a one-dimensional tetra space, skipping the
    /// matrix wrapper.
    pub fn pairing_scalar(&self, t: &TetraLabel) -> Result<Cyclotomic, CatError> {
        match &self.backend {
            CatBackend::Dw { .. } | CatBackend::Yetter { .. } => Ok(Cyclotomic::one()),
            CatBackend::Pointed { group, dims, .. } => {
                let [a012, _, a023, _] = t.tris;
                Ok(dims[group.mul[a012][a023]].clone())
            }
            CatBackend::Explicit(_) => {
                let m = self.pairing(t)?;
                if m.rows == 1 && m.cols == 1 {
                    Ok(m.data.into_iter().next().unwrap())
                } else {
                    Err(CatError::BadLabel(
                        "pairing is not one-dimensional; use the matrix form".into(),
                    ))
                }
            }
        }
    }

    /// All tetra labels whose four triangles are admissible.
    pub fn admissible_tetra_labels(&self) -> Vec<TetraLabel> {
        let mut out = Vec::new();
        let n = self.n_objects();
        let mut edges = [0usize; 6];
        self.tetra_edge_dfs(&mut edges, 0, n, &mut out);
        out.sort();
        out
    }

    fn tetra_edge_dfs(&self, edges: &mut [usize; 6], pos: usize, n: usize, out: &mut Vec<TetraLabel>) {
        if pos == 6 {
            let lists: Vec<usize> = (0..4)
                .map(|w| {
                    let (i, j, k) = TETRA_TRI_TRIPLES[w];
                    let e = |a: usize, b: usize| edges[tenj::tetra_edge_index(a, b)];
                    self.fusion_list(e(i, j), e(j, k), e(i, k)).len()
                })
                .collect();
            if lists.iter().any(|&l| l == 0) {
                return;
            }
            let mut tris = [0usize; 4];
            loop {
                out.push(TetraLabel { edges: *edges, tris });
                // advance mixed radix over the four fusion lists
                let mut w = 3usize;
                loop {
                    tris[w] += 1;
                    if tris[w] < lists[w] {
                        break;
                    }
                    tris[w] = 0;
                    if w == 0 {
                        return;
                    }
                    w -= 1;
                }
            }
        } else {
            for e in 0..n {
                edges[pos] = e;
                // Prune: any triangle fully determined by assigned edges with
                // an empty fusion list kills the branch.
                let ok = (0..4).all(|w| {
                    let (i, j, k) = TETRA_TRI_TRIPLES[w];
                    let idx = [
                        tenj::tetra_edge_index(i, j),
                        tenj::tetra_edge_index(j, k),
                        tenj::tetra_edge_index(i, k),
                    ];
                    if idx.iter().any(|&x| x > pos) {
                        return true;
                    }
                    !self.fusion_list(edges[idx[0]], edges[idx[1]], edges[idx[2]]).is_empty()
                });
                if ok {
                    self.tetra_edge_dfs(edges, pos + 1, n, out);
                }
            }
        }
    }

    /// All penta labels whose ten triangles are admissible.  With
    /// `require_nonzero_faces`, labels with any zero-dimensional face slot are
    /// dropped (their 10j tensor is empty).
    pub fn admissible_penta_labels(&self, require_nonzero_faces: bool) -> Vec<PentaLabel> {
        let mut out = Vec::new();
        let n = self.n_objects();
        let mut edges = [0usize; 10];
        self.penta_edge_dfs(&mut edges, 0, n, &mut out);
        if require_nonzero_faces {
            out.retain(|p| (0..5).all(|omit| self.tetra_space(&penta_face(p, omit)) > 0));
        }
        out.sort();
        out
    }

    fn penta_edge_dfs(&self, edges: &mut [usize; 10], pos: usize, n: usize, out: &mut Vec<PentaLabel>) {
        if pos == 10 {
            let lists: Vec<usize> = (0..10)
                .map(|w| {
                    let (i, j, k) = PENTA_TRI_TRIPLES[w];
                    let e = |a: usize, b: usize| edges[tenj::penta_edge_index(a, b)];
                    self.fusion_list(e(i, j), e(j, k), e(i, k)).len()
                })
                .collect();
            if lists.iter().any(|&l| l == 0) {
                return;
            }
            let mut tris = [0usize; 10];
            loop {
                out.push(PentaLabel { edges: *edges, tris });
                let mut w = 9usize;
                loop {
                    tris[w] += 1;
                    if tris[w] < lists[w] {
                        break;
                    }
                    tris[w] = 0;
                    if w == 0 {
                        return;
                    }
                    w -= 1;
                }
            }
        } else {
            for e in 0..n {
                edges[pos] = e;
                let ok = (0..10).all(|w| {
                    let (i, j, k) = PENTA_TRI_TRIPLES[w];
                    let idx = [
                        tenj::penta_edge_index(i, j),
                        tenj::penta_edge_index(j, k),
                        tenj::penta_edge_index(i, k),
                    ];
                    if idx.iter().any(|&x| x > pos) {
                        return true;
                    }
                    !self.fusion_list(edges[idx[0]], edges[idx[1]], edges[idx[2]]).is_empty()
                });
                if ok {
                    self.penta_edge_dfs(edges, pos + 1, n, out);
                }
            }
        }
    }

    /// Structural invariants shared by every backend, plus backend-specific
    /// coherence (cocycle, pentagon/hexagon, stored-table shapes).
    pub fn validate(&self) -> Result<(), CatError> {
        let mut problems = Vec::new();
        let n = self.n_objects();
        if n == 0 {
            problems.push("category has no objects".to_string());
        }
        if self.components.len() != n || self.dim_obj.len() != n || self.dim_end.len() != n {
            problems.push("per-object tables have inconsistent lengths".to_string());
        }
        if !problems.is_empty() {
            return Err(CatError::Validation(problems));
        }
        for a in 0..n {
            if self.dim_obj[a].is_zero() {
                problems.push(format!("dim({}) is zero", self.objects[a]));
            }
            if self.dim_end[a].is_zero() {
                problems.push(format!("dim End({}) is zero", self.objects[a]));
            }
            if self.d_obj(a).is_zero() {
                problems.push(format!("d({}) is zero", self.objects[a]));
            }
        }
        // dim End is constant on components.
        let mut rep: HashMap<usize, usize> = HashMap::new();
        for (a, &c) in self.components.iter().enumerate() {
            if let Some(&r) = rep.get(&c) {
                if self.dim_end[a] != self.dim_end[r] {
                    problems.push(format!(
                        "objects {} and {} share a component but differ in dim End",
                        self.objects[r], self.objects[a]
                    ));
                }
            } else {
                rep.insert(c, a);
            }
        }
        for (&(a, b, c), list) in &self.fusion {
            if a >= n || b >= n || c >= n {
                problems.push(format!("fusion key ({a},{b},{c}) out of range"));
                continue;
            }
            for m in list {
                if m.dim.is_zero() {
                    problems.push(format!(
                        "morphism {} in fusion({},{},{}) has zero dimension",
                        m.name, self.objects[a], self.objects[b], self.objects[c]
                    ));
                }
            }
        }
        match self.dim_cat() {
            Ok(d) if d.is_zero() => problems.push("dim(C) is zero".to_string()),
            Ok(_) => {}
            Err(e) => return Err(e),
        }
        if !problems.is_empty() {
            return Err(CatError::Validation(problems));
        }
        match &self.backend {
            CatBackend::Dw { group, omega } => {
                if omega.degree != 4 || omega.order != group.order() {
                    return Err(CatError::Validation(vec![
                        "omega must be a degree-4 cochain on the group".into(),
                    ]));
                }
                omega.validate_cocycle(group)?;
            }
            CatBackend::Pointed { group, f, r, dims } => {
                generators::validate_pointed_data(group, f, r, dims)?;
            }
            CatBackend::Yetter { g, a, omega } => {
                if !a.is_abelian() {
                    return Err(CatError::Validation(vec![
                        "the base group of a 2-group category must be abelian".into(),
                    ]));
                }
                generators::validate_yetter_omega(self, g, a, omega)?;
            }
            CatBackend::Explicit(tables) => {
                for (t, &sz) in &tables.tetra {
                    if !self.tetra_label_valid(t) {
                        return Err(CatError::Validation(vec![format!(
                            "tetra table references invalid label {t:?}"
                        )]));
                    }
                    if sz > 0 {
                        let p = tables.pairing.get(t).ok_or_else(|| {
                            CatError::Validation(vec![format!("no pairing stored for {t:?}")])
                        })?;
                        if p.rows != sz || p.cols != sz {
                            return Err(CatError::Validation(vec![format!(
                                "pairing for {t:?} is {}x{}, space has dim {sz}",
                                p.rows, p.cols
                            )]));
                        }
                        if p.inverse().is_err() {
                            return Err(CatError::SingularPairing(format!("{t:?}")));
                        }
                    }
                }
            }
        }
        // Pairing invertibility over admissible labels (generator backends).
        if !matches!(self.backend, CatBackend::Explicit(_)) {
            for t in self.admissible_tetra_labels() {
                if self.tetra_space(&t) > 0 {
                    self.copairing(&t)?;
                }
            }
        }
        Ok(())
    }

    /// Field-by-field comparison used by the degeneration tests: scalar data,
    /// fusion tables, and the evaluated tetra/pairing/10j tables must agree.
    pub fn presentation_diff(&self, other: &Fusion2CatData) -> Vec<String> {
        let mut diffs = Vec::new();
        let cap = 20usize;
        macro_rules! push {
            ($($arg:tt)*) => {
                if diffs.len() < cap { diffs.push(format!($($arg)*)); }
            };
        }
        if self.objects != other.objects {
            push!("objects differ: {:?} vs {:?}", self.objects, other.objects);
            return diffs;
        }
        if self.components != other.components {
            push!("components differ: {:?} vs {:?}", self.components, other.components);
        }
        if self.dim_obj != other.dim_obj {
            push!("dim_obj tables differ");
        }
        if self.dim_end != other.dim_end {
            push!("dim_end tables differ");
        }
        if self.fusion != other.fusion {
            push!("fusion tables differ");
            return diffs;
        }
        let tetra = self.admissible_tetra_labels();
        for t in &tetra {
            let (sa, sb) = (self.tetra_space(t), other.tetra_space(t));
            if sa != sb {
                push!("tetra space at {t:?}: {sa} vs {sb}");
            } else if sa > 0 {
                let (pa, pb) = (self.pairing(t), other.pairing(t));
                match (pa, pb) {
                    (Ok(pa), Ok(pb)) => {
                        if pa != pb {
                            push!("pairing at {t:?} differs");
                        }
                    }
                    _ => push!("pairing at {t:?} failed to evaluate"),
                }
            }
        }
        for p in self.admissible_penta_labels(true) {
            for eps in [1i8, -1] {
                let (ta, tb) = (self.ten_j(&p, eps), other.ten_j(&p, eps));
                match (ta, tb) {
                    (Ok(ta), Ok(tb)) => {
                        if ta != tb {
                            push!("ten_j at {p:?} eps={eps} differs");
                        }
                    }
                    _ => push!("ten_j at {p:?} eps={eps} failed to evaluate"),
                }
                if diffs.len() >= cap {
                    return diffs;
                }
            }
        }
        diffs
    }

    /// Materialize every generator-evaluated table.  The result has the same
    /// scalar fields with an explicit backend.
    pub fn to_explicit(&self) -> Result<Fusion2CatData, CatError> {
        let mut tables = ExplicitTables {
            tetra: HashMap::new(),
            pairing: HashMap::new(),
            ten_j: HashMap::new(),
        };
        for t in self.admissible_tetra_labels() {
            let sz = self.tetra_space(&t);
            if sz > 0 {
                tables.pairing.insert(t.clone(), self.pairing(&t)?);
            }
            tables.tetra.insert(t, sz);
        }
        for p in self.admissible_penta_labels(true) {
            for eps in [1i8, -1] {
                let t = self.ten_j(&p, eps)?;
                tables.ten_j.insert((p.clone(), eps), t.data);
            }
        }
        Ok(Fusion2CatData {
            name: self.name.clone(),
            objects: self.objects.clone(),
            components: self.components.clone(),
            dim_obj: self.dim_obj.clone(),
            dim_end: self.dim_end.clone(),
            fusion: self.fusion.clone(),
            backend: CatBackend::Explicit(tables),
        })
    }

    fn tetra_key_string(&self, t: &TetraLabel) -> String {
        let edges: Vec<&str> = t.edges.iter().map(|&e| self.objects[e].as_str()).collect();
        let tris: Vec<&str> = (0..4)
            .map(|w| {
                let key = self.tetra_tri_key(t, w);
                self.fusion_list(key.0, key.1, key.2)[t.tris[w]].name.as_str()
            })
            .collect();
        format!("{}#{}", edges.join("|"), tris.join("|"))
    }

    fn penta_key_string(&self, p: &PentaLabel) -> String {
        let edges: Vec<&str> = p.edges.iter().map(|&e| self.objects[e].as_str()).collect();
        let tris: Vec<&str> = (0..10)
            .map(|w| {
                let key = self.penta_tri_key(p, w);
                self.fusion_list(key.0, key.1, key.2)[p.tris[w]].name.as_str()
            })
            .collect();
        format!("{}#{}", edges.join("|"), tris.join("|"))
    }

    fn parse_tetra_key(&self, s: &str) -> Result<TetraLabel, CatError> {
        let (edges, tris) = parse_label_key(self, s, 6, 4)?;
        let mut label = TetraLabel {
            edges: edges.try_into().unwrap(),
            tris: [0; 4],
        };
        for w in 0..4 {
            let key = self.tetra_tri_key(&label, w);
            let list = self.fusion_list(key.0, key.1, key.2);
            let idx = list
                .iter()
                .position(|m| m.name == tris[w])
                .ok_or_else(|| CatError::Parse(format!("unknown morphism {:?} in key {s:?}", tris[w])))?;
            label.tris[w] = idx;
        }
        Ok(label)
    }

    fn parse_penta_key(&self, s: &str) -> Result<PentaLabel, CatError> {
        let (edges, tris) = parse_label_key(self, s, 10, 10)?;
        let mut label = PentaLabel {
            edges: edges.try_into().unwrap(),
            tris: [0; 10],
        };
        for w in 0..10 {
            let key = self.penta_tri_key(&label, w);
            let list = self.fusion_list(key.0, key.1, key.2);
            let idx = list
                .iter()
                .position(|m| m.name == tris[w])
                .ok_or_else(|| CatError::Parse(format!("unknown morphism {:?} in key {s:?}", tris[w])))?;
            label.tris[w] = idx;
        }
        Ok(label)
    }

    /// Serialize with all tables materialized.
    pub fn to_explicit_json(&self) -> Result<Value, CatError> {
        let ex = self.to_explicit()?;
        let tables = match &ex.backend {
            CatBackend::Explicit(t) => t,
            _ => unreachable!(),
        };
        let mut components: Vec<Vec<String>> = Vec::new();
        let max_comp = self.components.iter().copied().max().unwrap_or(0);
        for c in 0..=max_comp {
            let names: Vec<String> = self
                .objects
                .iter()
                .zip(self.components.iter())
                .filter(|(_, &cc)| cc == c)
                .map(|(o, _)| o.clone())
                .collect();
            components.push(names);
        }
        let dim_obj: serde_json::Map<String, Value> = self
            .objects
            .iter()
            .zip(self.dim_obj.iter())
            .map(|(o, d)| (o.clone(), d.to_json()))
            .collect();
        let dim_end: serde_json::Map<String, Value> = self
            .objects
            .iter()
            .zip(self.dim_end.iter())
            .map(|(o, d)| (o.clone(), d.to_json()))
            .collect();
        let mut fusion = serde_json::Map::new();
        let mut dim_mor = serde_json::Map::new();
        for (&(a, b, c), list) in &self.fusion {
            let key = format!("{}|{}|{}", self.objects[a], self.objects[b], self.objects[c]);
            fusion.insert(
                key.clone(),
                json!(list.iter().map(|m| m.name.clone()).collect::<Vec<_>>()),
            );
            for m in list {
                dim_mor.insert(format!("{key}|{}", m.name), m.dim.to_json());
            }
        }
        let mut tetra = serde_json::Map::new();
        let mut tetra_keys: Vec<&TetraLabel> = tables.tetra.keys().collect();
        tetra_keys.sort();
        for t in tetra_keys {
            tetra.insert(self.tetra_key_string(t), json!(tables.tetra[t]));
        }
        let mut pairing = serde_json::Map::new();
        let mut pair_keys: Vec<&TetraLabel> = tables.pairing.keys().collect();
        pair_keys.sort();
        for t in pair_keys {
            let m = &tables.pairing[t];
            let rows: Vec<Vec<Value>> = (0..m.rows)
                .map(|r| (0..m.cols).map(|c| m.get(r, c).to_json()).collect())
                .collect();
            pairing.insert(self.tetra_key_string(t), json!(rows));
        }
        let mut ten_j = serde_json::Map::new();
        let mut tj_keys: Vec<&(PentaLabel, i8)> = tables.ten_j.keys().collect();
        tj_keys.sort();
        for (p, eps) in tj_keys {
            let key = format!(
                "{}#{}",
                self.penta_key_string(p),
                if *eps >= 0 { "+1" } else { "-1" }
            );
            let vals: Vec<Value> = tables.ten_j[&(p.clone(), *eps)].iter().map(|v| v.to_json()).collect();
            ten_j.insert(key, json!(vals));
        }
        Ok(json!({
            "name": self.name,
            "objects": self.objects,
            "components": components,
            "dim_obj": dim_obj,
            "dim_end": dim_end,
            "fusion": fusion,
            "dim_mor": dim_mor,
            "tetra": tetra,
            "pairing": pairing,
            "ten_j": ten_j,
        }))
    }
}

fn parse_label_key(
    cat: &Fusion2CatData,
    s: &str,
    n_edges: usize,
    n_tris: usize,
) -> Result<(Vec<usize>, Vec<String>), CatError> {
    let parts: Vec<&str> = s.split('#').collect();
    if parts.len() != 2 {
        return Err(CatError::Parse(format!("label key {s:?} must have edges#tris")));
    }
    let edges: Vec<usize> = parts[0]
        .split('|')
        .map(|e| {
            cat.objects
                .iter()
                .position(|o| o == e)
                .ok_or_else(|| CatError::Parse(format!("unknown object {e:?} in key {s:?}")))
        })
        .collect::<Result<_, _>>()?;
    if edges.len() != n_edges {
        return Err(CatError::Parse(format!(
            "label key {s:?} has {} edges, expected {n_edges}",
            edges.len()
        )));
    }
    let tris: Vec<String> = parts[1].split('|').map(|t| t.to_string()).collect();
    if tris.len() != n_tris {
        return Err(CatError::Parse(format!(
            "label key {s:?} has {} triangles, expected {n_tris}",
            tris.len()
        )));
    }
    Ok((edges, tris))
}

/// Load a category from either file form: a generator reference (dispatched
/// through the generators) or fully explicit tables.
pub fn load_category(v: &Value) -> Result<Fusion2CatData, CatError> {
    let obj = v
        .as_object()
        .ok_or_else(|| CatError::Parse("category file must be a JSON object".into()))?;
    if obj.contains_key("generator") {
        return generators::from_generator_json(v);
    }
    explicit_from_json(v)
}

pub fn load_category_file(path: &std::path::Path) -> Result<Fusion2CatData, CatError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CatError::Io(format!("{}: {e}", path.display())))?;
    let v: Value =
        serde_json::from_str(&text).map_err(|e| CatError::Parse(format!("{}: {e}", path.display())))?;
    load_category(&v)
}

fn explicit_from_json(v: &Value) -> Result<Fusion2CatData, CatError> {
    let obj = v.as_object().unwrap();
    let objects: Vec<String> = obj
        .get("objects")
        .and_then(|o| o.as_array())
        .ok_or_else(|| CatError::Parse("missing objects array".into()))?
        .iter()
        .map(|x| {
            x.as_str()
                .map(str::to_string)
                .ok_or_else(|| CatError::Parse("object names must be strings".into()))
        })
        .collect::<Result<_, _>>()?;
    let obj_index: HashMap<&str, usize> = objects
        .iter()
        .enumerate()
        .map(|(i, o)| (o.as_str(), i))
        .collect();
    let comp_lists = obj
        .get("components")
        .and_then(|c| c.as_array())
        .ok_or_else(|| CatError::Parse("missing components array".into()))?;
    let mut components = vec![usize::MAX; objects.len()];
    for (ci, group) in comp_lists.iter().enumerate() {
        for name in group
            .as_array()
            .ok_or_else(|| CatError::Parse("components must be lists of object names".into()))?
        {
            let name = name
                .as_str()
                .ok_or_else(|| CatError::Parse("component members must be strings".into()))?;
            let &i = obj_index
                .get(name)
                .ok_or_else(|| CatError::Parse(format!("unknown object {name:?} in components")))?;
            components[i] = ci;
        }
    }
    if components.iter().any(|&c| c == usize::MAX) {
        return Err(CatError::Parse("components must partition the objects".into()));
    }
    let scalar_table = |key: &str| -> Result<Vec<Cyclotomic>, CatError> {
        let map = obj
            .get(key)
            .and_then(|m| m.as_object())
            .ok_or_else(|| CatError::Parse(format!("missing {key} table")))?;
        objects
            .iter()
            .map(|o| {
                let v = map
                    .get(o)
                    .ok_or_else(|| CatError::Parse(format!("{key} missing entry for {o:?}")))?;
                Cyclotomic::from_json(v).map_err(|e| CatError::Parse(format!("{key}[{o}]: {e}")))
            })
            .collect()
    };
    let dim_obj = scalar_table("dim_obj")?;
    let dim_end = scalar_table("dim_end")?;
    let fusion_map = obj
        .get("fusion")
        .and_then(|f| f.as_object())
        .ok_or_else(|| CatError::Parse("missing fusion table".into()))?;
    let dim_mor_map = obj
        .get("dim_mor")
        .and_then(|f| f.as_object())
        .ok_or_else(|| CatError::Parse("missing dim_mor table".into()))?;
    let mut fusion: BTreeMap<(usize, usize, usize), Vec<MorData>> = BTreeMap::new();
    for (key, names) in fusion_map {
        let parts: Vec<&str> = key.split('|').collect();
        if parts.len() != 3 {
            return Err(CatError::Parse(format!("fusion key {key:?} must be A|B|C")));
        }
        let ids: Vec<usize> = parts
            .iter()
            .map(|p| {
                obj_index
                    .get(p)
                    .copied()
                    .ok_or_else(|| CatError::Parse(format!("unknown object {p:?} in fusion key")))
            })
            .collect::<Result<_, _>>()?;
        let mut list = Vec::new();
        for name in names
            .as_array()
            .ok_or_else(|| CatError::Parse("fusion entries must be arrays".into()))?
        {
            let name = name
                .as_str()
                .ok_or_else(|| CatError::Parse("morphism names must be strings".into()))?;
            let dim_v = dim_mor_map
                .get(&format!("{key}|{name}"))
                .ok_or_else(|| CatError::Parse(format!("dim_mor missing entry for {key}|{name}")))?;
            let dim = Cyclotomic::from_json(dim_v)
                .map_err(|e| CatError::Parse(format!("dim_mor[{key}|{name}]: {e}")))?;
            list.push(MorData {
                name: name.to_string(),
                dim,
            });
        }
        fusion.insert((ids[0], ids[1], ids[2]), list);
    }
    let mut cat = Fusion2CatData {
        name: obj
            .get("name")
            .and_then(|n| n.as_str())
            .unwrap_or("explicit")
            .to_string(),
        objects,
        components,
        dim_obj,
        dim_end,
        fusion,
        backend: CatBackend::Explicit(ExplicitTables {
            tetra: HashMap::new(),
            pairing: HashMap::new(),
            ten_j: HashMap::new(),
        }),
    };
    let mut tables = ExplicitTables {
        tetra: HashMap::new(),
        pairing: HashMap::new(),
        ten_j: HashMap::new(),
    };
    let tetra_map = obj
        .get("tetra")
        .and_then(|t| t.as_object())
        .ok_or_else(|| CatError::Parse("missing tetra table".into()))?;
    for (key, val) in tetra_map {
        let label = cat.parse_tetra_key(key)?;
        let sz = val
            .as_u64()
            .ok_or_else(|| CatError::Parse(format!("tetra[{key}] must be a nonnegative integer")))?;
        tables.tetra.insert(label, sz as usize);
    }
    let pairing_map = obj
        .get("pairing")
        .and_then(|t| t.as_object())
        .ok_or_else(|| CatError::Parse("missing pairing table".into()))?;
    for (key, val) in pairing_map {
        let label = cat.parse_tetra_key(key)?;
        let rows_v = val
            .as_array()
            .ok_or_else(|| CatError::Parse(format!("pairing[{key}] must be a matrix")))?;
        let rows = rows_v.len();
        let mut data = Vec::new();
        let mut cols = 0usize;
        for row in rows_v {
            let row = row
                .as_array()
                .ok_or_else(|| CatError::Parse(format!("pairing[{key}] rows must be arrays")))?;
            cols = row.len();
            for x in row {
                data.push(
                    Cyclotomic::from_json(x)
                        .map_err(|e| CatError::Parse(format!("pairing[{key}]: {e}")))?,
                );
            }
        }
        tables.pairing.insert(label, Matrix::new(rows, cols, data));
    }
    let tj_map = obj
        .get("ten_j")
        .and_then(|t| t.as_object())
        .ok_or_else(|| CatError::Parse("missing ten_j table".into()))?;
    for (key, val) in tj_map {
        let (body, eps_s) = key
            .rsplit_once('#')
            .ok_or_else(|| CatError::Parse(format!("ten_j key {key:?} must end with #eps")))?;
        let eps: i8 = match eps_s {
            "+1" => 1,
            "-1" => -1,
            _ => return Err(CatError::Parse(format!("bad orientation sign {eps_s:?} in ten_j key"))),
        };
        let label = cat.parse_penta_key(body)?;
        let data: Vec<Cyclotomic> = val
            .as_array()
            .ok_or_else(|| CatError::Parse(format!("ten_j[{key}] must be an array")))?
            .iter()
            .map(|x| Cyclotomic::from_json(x).map_err(|e| CatError::Parse(format!("ten_j[{key}]: {e}"))))
            .collect::<Result<_, _>>()?;
        tables.ten_j.insert((label, eps), data);
    }
    cat.backend = CatBackend::Explicit(tables);
    Ok(cat)
}

#[cfg(test)]
mod tests {
    use super::generators::*;
    use super::*;

    #[test]
    fn dw_z2_basic_quantities() {
        let cat = gen_twisted_dw(GroupPresentation::cyclic(2), None).unwrap();
        assert_eq!(cat.n_objects(), 2);
        assert_eq!(cat.dim_cat().unwrap(), Cyclotomic::from_int(2));
        assert_eq!(cat.d_obj(0), Cyclotomic::one());
        cat.validate().unwrap();
        assert_eq!(cat.admissible_tetra_labels().len(), 8);
        assert_eq!(cat.admissible_penta_labels(true).len(), 16);
    }

    #[test]
    fn pointed_z2_basic_quantities() {
        let cat = pointed_preset("semion").unwrap();
        assert_eq!(cat.n_objects(), 1);
        let half = Cyclotomic::from_int(2).inv().unwrap();
        assert_eq!(cat.dim_cat().unwrap(), half);
        assert_eq!(cat.d_obj(0), Cyclotomic::from_int(2));
        cat.validate().unwrap();
        // Flat tetra labels: 8 of 16 triangle labelings.
        let labels = cat.admissible_tetra_labels();
        assert_eq!(labels.len(), 16);
        let flat: Vec<_> = labels.iter().filter(|t| cat.tetra_space(t) == 1).collect();
        assert_eq!(flat.len(), 8);
        // Flat penta labels: |B^2| = 2^6 = 64.
        assert_eq!(cat.admissible_penta_labels(true).len(), 64);
    }

    #[test]
    fn explicit_round_trip_preserves_presentation() {
        for cat in [
            gen_twisted_dw(GroupPresentation::cyclic(2), None).unwrap(),
            pointed_preset("fermion").unwrap(),
            gen_yetter_2group(
                GroupPresentation::cyclic(2),
                GroupPresentation::cyclic(2),
                YetterOmega::Trivial,
            )
            .unwrap(),
        ] {
            let j = cat.to_explicit_json().unwrap();
            let back = load_category(&j).unwrap();
            back.validate().unwrap();
            let diff = cat.presentation_diff(&back);
            assert!(diff.is_empty(), "{}: {diff:?}", cat.name);
        }
    }

    #[test]
    fn ten_j_index_order_matches_relative_signs() {
        // Slot sign of the face omitting local vertex i must be eps*(-1)^i.
        for eps in [1i8, -1] {
            for (omit, sign) in ten_j_index_order(eps) {
                let expect = eps * if omit % 2 == 0 { 1 } else { -1 };
                assert_eq!(sign, expect, "eps={eps} omit={omit}");
            }
            let omits: Vec<usize> = ten_j_index_order(eps).iter().map(|&(o, _)| o).collect();
            let mut sorted = omits.clone();
            sorted.sort();
            assert_eq!(sorted, vec![0, 1, 2, 3, 4]);
        }
    }

    #[test]
    fn unit_detection_works_for_explicit_backend() {
        let cat = gen_twisted_dw(GroupPresentation::cyclic(3), None).unwrap();
        let ex = cat.to_explicit().unwrap();
        assert_eq!(ex.unit_object(), Some(0));
    }
}
