//! Executable forms of the bistellar tensor identities.
//!
//! Every move shape lives on the vertex set {0..5} of a 5-simplex.  The side
//! omitting I ⊂ {0..5} consists of the facets Δ({0..5}∖{o}) for o ∈ I, the
//! other side of those for o in the complement J; gluing them along their
//! common boundary gives the two triangulations of the 4-ball that a
//! (|I|,|J|) move exchanges.  A facet for omit o carries orientation (-1)^o
//! on the I side and -(-1)^o on the J side, so positively oriented facets
//! contribute a 10j symbol with eps = +1 and negative ones with eps = -1.
//!
//! The validators label the shared boundary cells, sum both sides over their
//! interior labels with the state-sum weights (one reciprocal category
//! dimension per interior vertex, one reciprocal object dimension per
//! interior edge, one morphism dimension per interior triangle), and compare
//! the resulting boundary tensors entry by entry.  Interior tetrahedra are
//! contracted away through the copairings built into the Z maps; boundary
//! tetrahedra remain as named axes, which both sides produce in the same
//! order with the same induced signs.

use std::collections::{BTreeMap, BTreeSet};

use crate::scalar::Cyclotomic;
use crate::tensor::{Axis, AxisKey, NamedTensor, Role};

use super::tenj::{
    penta_face, ten_j_index_order, PentaLabel, TetraLabel, PENTA_EDGE_PAIRS, PENTA_TRI_TRIPLES,
    TETRA_EDGE_PAIRS, TETRA_TRI_TRIPLES,
};
use super::{CatError, Fusion2CatData, ObjId};

/// Edges of the 5-simplex in lexicographic order.
pub const D5_EDGE_PAIRS: [(u32, u32); 15] = [
    (0, 1),
    (0, 2),
    (0, 3),
    (0, 4),
    (0, 5),
    (1, 2),
    (1, 3),
    (1, 4),
    (1, 5),
    (2, 3),
    (2, 4),
    (2, 5),
    (3, 4),
    (3, 5),
    (4, 5),
];

/// Triangles of the 5-simplex in lexicographic order.
pub const D5_TRI_TRIPLES: [(u32, u32, u32); 20] = [
    (0, 1, 2),
    (0, 1, 3),
    (0, 1, 4),
    (0, 1, 5),
    (0, 2, 3),
    (0, 2, 4),
    (0, 2, 5),
    (0, 3, 4),
    (0, 3, 5),
    (0, 4, 5),
    (1, 2, 3),
    (1, 2, 4),
    (1, 2, 5),
    (1, 3, 4),
    (1, 3, 5),
    (1, 4, 5),
    (2, 3, 4),
    (2, 3, 5),
    (2, 4, 5),
    (3, 4, 5),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveKind {
    ThreeThree,
    TwoFour,
    OneFive,
}

impl MoveKind {
    pub fn label(self) -> &'static str {
        match self {
            MoveKind::ThreeThree => "3-3",
            MoveKind::TwoFour => "2-4",
            MoveKind::OneFive => "1-5",
        }
    }

    /// Omitted-vertex sets selecting the facets of the two sides.
    fn omits(self) -> (&'static [u32], &'static [u32]) {
        match self {
            MoveKind::ThreeThree => (&[0, 2, 4], &[1, 3, 5]),
            MoveKind::TwoFour => (&[2, 4], &[0, 1, 3, 5]),
            MoveKind::OneFive => (&[4], &[0, 1, 2, 3, 5]),
        }
    }
}

/// Cell labels on the move support: an object per edge, a fusion-list index
/// per triangle.  Contexts carry the boundary cells; the validators insert
/// and remove interior cells while summing.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MoveLabeling {
    pub edges: BTreeMap<(u32, u32), ObjId>,
    pub tris: BTreeMap<(u32, u32, u32), usize>,
}

/// One side of a move: its facets with orientation signs, its interior cells
/// graded by dimension, and its boundary tetrahedra with the orientation
/// induced by the unique facet of this side containing each.
struct SideGeometry {
    facets: Vec<([u32; 5], i8)>,
    interior_vertices: Vec<u32>,
    interior_edges: Vec<(u32, u32)>,
    interior_tris: Vec<(u32, u32, u32)>,
    interior_tets: Vec<[u32; 4]>,
    boundary_tets: BTreeMap<[u32; 4], i8>,
}

struct MoveGeometry {
    kind: MoveKind,
    lhs: SideGeometry,
    rhs: SideGeometry,
    boundary_edges: Vec<(u32, u32)>,
    boundary_tris: Vec<(u32, u32, u32)>,
}

fn in_side(simplex: &[u32], omits: &[u32]) -> bool {
    omits.iter().any(|o| !simplex.contains(o))
}

fn all_tets() -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    for a in 0..6u32 {
        for b in a + 1..6 {
            for c in b + 1..6 {
                for d in c + 1..6 {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

fn side_geometry(omits: &[u32], other: &[u32], base_sign: i8) -> SideGeometry {
    let facets: Vec<([u32; 5], i8)> = omits
        .iter()
        .map(|&o| {
            let mut f = [0u32; 5];
            let mut k = 0;
            for v in 0..6u32 {
                if v != o {
                    f[k] = v;
                    k += 1;
                }
            }
            let sign = base_sign * if o % 2 == 0 { 1 } else { -1 };
            (f, sign)
        })
        .collect();
    // A simplex is interior to this side exactly when it contains every
    // omitted vertex of the other side, hence lies in no facet over there.
    let interior = |s: &[u32]| other.iter().all(|o| s.contains(o));
    let interior_vertices: Vec<u32> = (0..6u32).filter(|&v| interior(&[v])).collect();
    let interior_edges: Vec<(u32, u32)> = D5_EDGE_PAIRS
        .iter()
        .copied()
        .filter(|&(a, b)| interior(&[a, b]))
        .collect();
    let interior_tris: Vec<(u32, u32, u32)> = D5_TRI_TRIPLES
        .iter()
        .copied()
        .filter(|&(a, b, c)| interior(&[a, b, c]))
        .collect();
    let interior_tets: Vec<[u32; 4]> = all_tets().into_iter().filter(|t| interior(t)).collect();

    let mut boundary_tets: BTreeMap<[u32; 4], i8> = BTreeMap::new();
    let mut interior_signs: BTreeMap<[u32; 4], Vec<i8>> = BTreeMap::new();
    for (f, sign) in &facets {
        for i in 0..5 {
            let mut tet = [0u32; 4];
            let mut k = 0;
            for (j, &v) in f.iter().enumerate() {
                if j != i {
                    tet[k] = v;
                    k += 1;
                }
            }
            let induced = sign * if i % 2 == 0 { 1 } else { -1 };
            if interior(&tet) {
                interior_signs.entry(tet).or_default().push(induced);
            } else {
                let prev = boundary_tets.insert(tet, induced);
                assert!(prev.is_none(), "boundary tetrahedron in two facets of one side");
            }
        }
    }
    // Interior tetrahedra must occur in exactly two facets with opposite
    // orientations; this is what lets the copairings cancel them.
    assert_eq!(interior_signs.len(), interior_tets.len());
    for signs in interior_signs.values() {
        assert_eq!(signs.len(), 2);
        assert_eq!(signs[0] + signs[1], 0);
    }
    SideGeometry {
        facets,
        interior_vertices,
        interior_edges,
        interior_tris,
        interior_tets,
        boundary_tets,
    }
}

fn move_geometry(kind: MoveKind) -> MoveGeometry {
    let (i_omits, j_omits) = kind.omits();
    let lhs = side_geometry(i_omits, j_omits, 1);
    let rhs = side_geometry(j_omits, i_omits, -1);
    assert_eq!(lhs.boundary_tets, rhs.boundary_tets);
    let boundary_edges: Vec<(u32, u32)> = D5_EDGE_PAIRS
        .iter()
        .copied()
        .filter(|&(a, b)| in_side(&[a, b], i_omits) && in_side(&[a, b], j_omits))
        .collect();
    let boundary_tris: Vec<(u32, u32, u32)> = D5_TRI_TRIPLES
        .iter()
        .copied()
        .filter(|&(a, b, c)| in_side(&[a, b, c], i_omits) && in_side(&[a, b, c], j_omits))
        .collect();
    MoveGeometry {
        kind,
        lhs,
        rhs,
        boundary_edges,
        boundary_tris,
    }
}

/// Fusion key of a labeled triangle: morphisms go from the composite along
/// the two short edges to the long edge.
fn tri_key(lab: &MoveLabeling, t: (u32, u32, u32)) -> (ObjId, ObjId, ObjId) {
    (
        lab.edges[&(t.0, t.1)],
        lab.edges[&(t.1, t.2)],
        lab.edges[&(t.0, t.2)],
    )
}

fn tetra_label_at(lab: &MoveLabeling, t: &[u32; 4]) -> TetraLabel {
    let mut edges = [0usize; 6];
    for (k, &(a, b)) in TETRA_EDGE_PAIRS.iter().enumerate() {
        edges[k] = lab.edges[&(t[a], t[b])];
    }
    let mut tris = [0usize; 4];
    for (k, &(a, b, c)) in TETRA_TRI_TRIPLES.iter().enumerate() {
        tris[k] = lab.tris[&(t[a], t[b], t[c])];
    }
    TetraLabel { edges, tris }
}

fn penta_label_at(lab: &MoveLabeling, f: &[u32; 5]) -> PentaLabel {
    let mut edges = [0usize; 10];
    for (k, &(a, b)) in PENTA_EDGE_PAIRS.iter().enumerate() {
        edges[k] = lab.edges[&(f[a], f[b])];
    }
    let mut tris = [0usize; 10];
    for (k, &(a, b, c)) in PENTA_TRI_TRIPLES.iter().enumerate() {
        tris[k] = lab.tris[&(f[a], f[b], f[c])];
    }
    PentaLabel { edges, tris }
}

/// Depth-first labeler over fixed cell lists: objects on `edges`, then fusion
/// indices on `tris`.  Prunes through fusion emptiness as soon as all edges
/// of a listed triangle are fixed and through zero `gate_tets` spaces as soon
/// as all four triangles of a gate tetrahedron are fixed.  Cells outside the
/// lists must already be labeled before `run`.
struct CellDfs<'a> {
    cat: &'a Fusion2CatData,
    edges: Vec<(u32, u32)>,
    tris: Vec<(u32, u32, u32)>,
    gate_tets: Vec<[u32; 4]>,
    tris_ready_at: Vec<Vec<usize>>,
    entry_tris: Vec<usize>,
    tets_ready_at: Vec<Vec<usize>>,
    entry_tets: Vec<usize>,
}

impl<'a> CellDfs<'a> {
    fn new(
        cat: &'a Fusion2CatData,
        edges: Vec<(u32, u32)>,
        tris: Vec<(u32, u32, u32)>,
        gate_tets: Vec<[u32; 4]>,
    ) -> Self {
        let mut tris_ready_at = vec![Vec::new(); edges.len()];
        let mut entry_tris = Vec::new();
        for (ti, &(a, b, c)) in tris.iter().enumerate() {
            let last = [(a, b), (a, c), (b, c)]
                .iter()
                .filter_map(|e| edges.iter().position(|x| x == e))
                .max();
            match last {
                Some(k) => tris_ready_at[k].push(ti),
                None => entry_tris.push(ti),
            }
        }
        let mut tets_ready_at = vec![Vec::new(); tris.len()];
        let mut entry_tets = Vec::new();
        for (gi, t) in gate_tets.iter().enumerate() {
            let faces = [
                (t[0], t[1], t[2]),
                (t[0], t[1], t[3]),
                (t[0], t[2], t[3]),
                (t[1], t[2], t[3]),
            ];
            let last = faces
                .iter()
                .filter_map(|f| tris.iter().position(|x| x == f))
                .max();
            match last {
                Some(k) => tets_ready_at[k].push(gi),
                None => entry_tets.push(gi),
            }
        }
        CellDfs {
            cat,
            edges,
            tris,
            gate_tets,
            tris_ready_at,
            entry_tris,
            tets_ready_at,
            entry_tets,
        }
    }

    /// Visits every admissible completion of `lab`; the callback returns
    /// false to abort the walk.  Returns false if the walk was aborted.
    fn run(
        &self,
        lab: &mut MoveLabeling,
        visit: &mut dyn FnMut(&mut MoveLabeling) -> Result<bool, CatError>,
    ) -> Result<bool, CatError> {
        for &ti in &self.entry_tris {
            let k = tri_key(lab, self.tris[ti]);
            if self.cat.fusion_list(k.0, k.1, k.2).is_empty() {
                return Ok(true);
            }
        }
        for &gi in &self.entry_tets {
            if self.cat.tetra_space(&tetra_label_at(lab, &self.gate_tets[gi])) == 0 {
                return Ok(true);
            }
        }
        self.edge_step(0, lab, visit)
    }

    fn edge_step(
        &self,
        k: usize,
        lab: &mut MoveLabeling,
        visit: &mut dyn FnMut(&mut MoveLabeling) -> Result<bool, CatError>,
    ) -> Result<bool, CatError> {
        if k == self.edges.len() {
            return self.tri_step(0, lab, visit);
        }
        let e = self.edges[k];
        for obj in 0..self.cat.n_objects() {
            lab.edges.insert(e, obj);
            let ok = self.tris_ready_at[k].iter().all(|&ti| {
                let key = tri_key(lab, self.tris[ti]);
                !self.cat.fusion_list(key.0, key.1, key.2).is_empty()
            });
            if ok && !self.edge_step(k + 1, lab, visit)? {
                lab.edges.remove(&e);
                return Ok(false);
            }
        }
        lab.edges.remove(&e);
        Ok(true)
    }

    fn tri_step(
        &self,
        k: usize,
        lab: &mut MoveLabeling,
        visit: &mut dyn FnMut(&mut MoveLabeling) -> Result<bool, CatError>,
    ) -> Result<bool, CatError> {
        if k == self.tris.len() {
            return visit(lab);
        }
        let t = self.tris[k];
        let key = tri_key(lab, t);
        let n = self.cat.fusion_list(key.0, key.1, key.2).len();
        for idx in 0..n {
            lab.tris.insert(t, idx);
            let ok = self.tets_ready_at[k]
                .iter()
                .all(|&gi| self.cat.tetra_space(&tetra_label_at(lab, &self.gate_tets[gi])) > 0);
            if ok && !self.tri_step(k + 1, lab, visit)? {
                lab.tris.remove(&t);
                return Ok(false);
            }
        }
        lab.tris.remove(&t);
        Ok(true)
    }
}

/// 10j functional of one labeled 4-simplex as a named tensor, with negative
/// slots closed off by copairings.  Raw slots are `In` axes keyed by the
/// tetrahedron tuple produced by `tuple_of_omit` and the slot sign; composing
/// a copairing replaces a negative `In` axis by a positive `Out` axis, so the
/// result maps the positive faces to the negative ones.  Labels with a
/// zero-dimensional face give the size-0 tensor.
pub(crate) fn z_tensor_with<F>(
    cat: &Fusion2CatData,
    p: &PentaLabel,
    eps: i8,
    tuple_of_omit: F,
) -> Result<NamedTensor, CatError>
where
    F: Fn(usize) -> Vec<u32>,
{
    let tj = cat.ten_j(p, eps)?;
    let order = ten_j_index_order(eps);
    let mut axes = Vec::with_capacity(5);
    for (slot, &(omit, sign)) in order.iter().enumerate() {
        axes.push(Axis {
            key: AxisKey {
                simplex: tuple_of_omit(omit),
                sign,
            },
            role: Role::In,
            dim: tj.shape[slot],
        });
    }
    let mut t = NamedTensor::new(axes, tj.data);
    if t.size() == 0 {
        return Ok(t);
    }
    for &(omit, sign) in order.iter() {
        if sign >= 0 {
            continue;
        }
        let face = penta_face(p, omit);
        let c = cat.copairing(&face)?;
        let tuple = tuple_of_omit(omit);
        let cop = NamedTensor::new(
            vec![
                Axis {
                    key: AxisKey {
                        simplex: tuple.clone(),
                        sign: 1,
                    },
                    role: Role::Out,
                    dim: c.rows,
                },
                Axis {
                    key: AxisKey {
                        simplex: tuple,
                        sign: -1,
                    },
                    role: Role::Out,
                    dim: c.cols,
                },
            ],
            c.data,
        );
        t = t.contract(&cop);
    }
    Ok(t)
}

fn local_tuple(omit: usize) -> Vec<u32> {
    (0..5u32).filter(|&v| v as usize != omit).collect()
}

/// Z map of a positively oriented labeled 4-simplex on vertices {0..4}: the
/// three positive faces remain `In` axes, the two negative ones become `Out`
/// axes through the copairings.  Inadmissible labels give the zero map as a
/// size-0 tensor.
pub fn z_plus(cat: &Fusion2CatData, p: &PentaLabel) -> Result<NamedTensor, CatError> {
    z_tensor_with(cat, p, 1, local_tuple)
}

/// Z map of the reversed orientation: two positive faces in, three out.
pub fn z_minus(cat: &Fusion2CatData, p: &PentaLabel) -> Result<NamedTensor, CatError> {
    z_tensor_with(cat, p, -1, local_tuple)
}

fn inv_or(v: &Cyclotomic, what: &str) -> Result<Cyclotomic, CatError> {
    v.inv()
        .map_err(|_| CatError::Validation(vec![format!("{what} is zero")]))
}

fn interior_norm(
    cat: &Fusion2CatData,
    geom: &SideGeometry,
    lab: &MoveLabeling,
) -> Result<Cyclotomic, CatError> {
    let mut s = Cyclotomic::one();
    if !geom.interior_vertices.is_empty() {
        let dc = inv_or(&cat.dim_cat()?, "dim of the category")?;
        for _ in &geom.interior_vertices {
            s = s.mul(&dc);
        }
    }
    for e in &geom.interior_edges {
        let a = lab.edges[e];
        s = s.mul(&inv_or(&cat.d_obj(a), &format!("d({})", cat.objects[a]))?);
    }
    for t in &geom.interior_tris {
        let key = tri_key(lab, *t);
        s = s.mul(&cat.fusion_list(key.0, key.1, key.2)[lab.tris[t]].dim);
    }
    Ok(s)
}

/// Boundary tensor of one side under a boundary context: the sum over all
/// admissible interior labels of the weighted contraction of the facet Z
/// maps.  Boundary tetrahedra with positive induced sign stay `In` axes,
/// negative ones come out of the copairings as `Out` axes.
fn side_tensor(
    cat: &Fusion2CatData,
    geom: &SideGeometry,
    ctx: &MoveLabeling,
) -> Result<NamedTensor, CatError> {
    let mut axes = Vec::new();
    for (tet, &sign) in &geom.boundary_tets {
        axes.push(Axis {
            key: AxisKey {
                simplex: tet.to_vec(),
                sign: 1,
            },
            role: if sign > 0 { Role::In } else { Role::Out },
            dim: cat.tetra_space(&tetra_label_at(ctx, tet)),
        });
    }
    let size: usize = axes.iter().map(|a| a.dim).product();
    let mut acc = NamedTensor::new(axes, vec![Cyclotomic::zero(); size]).canonicalized();
    if size == 0 {
        return Ok(acc);
    }
    let dfs = CellDfs::new(
        cat,
        geom.interior_edges.clone(),
        geom.interior_tris.clone(),
        geom.interior_tets.clone(),
    );
    let mut lab = ctx.clone();
    dfs.run(&mut lab, &mut |lab| {
        let norm = interior_norm(cat, geom, lab)?;
        let mut term: Option<NamedTensor> = None;
        for (f, sign) in &geom.facets {
            let p = penta_label_at(lab, f);
            let z = z_tensor_with(cat, &p, *sign, |omit| {
                f.iter()
                    .enumerate()
                    .filter(|&(i, _)| i != omit)
                    .map(|(_, &v)| v)
                    .collect()
            })?;
            if z.size() == 0 {
                return Ok(true);
            }
            term = Some(match term {
                None => z,
                Some(t) => t.contract(&z),
            });
        }
        let t = term.expect("move side has facets").scale(&norm).canonicalized();
        acc.add_assign(&t);
        Ok(true)
    })?;
    Ok(acc)
}

fn format_labeling(cat: &Fusion2CatData, lab: &MoveLabeling) -> String {
    let edges: Vec<String> = lab
        .edges
        .iter()
        .map(|((a, b), &o)| format!("{a}{b}:{}", cat.objects[o]))
        .collect();
    let tris: Vec<String> = lab
        .tris
        .iter()
        .map(|(&(a, b, c), &i)| {
            let key = tri_key(lab, (a, b, c));
            format!("{a}{b}{c}:{}", cat.fusion_list(key.0, key.1, key.2)[i].name)
        })
        .collect();
    format!("edges {{{}}} tris {{{}}}", edges.join(" "), tris.join(" "))
}

fn format_entry(t: &NamedTensor, flat: usize) -> String {
    if t.axes.is_empty() {
        return "scalar".into();
    }
    let mut idx = flat;
    let mut parts = vec![0usize; t.axes.len()];
    for k in (0..t.axes.len()).rev() {
        parts[k] = idx % t.axes[k].dim;
        idx /= t.axes[k].dim;
    }
    let s: Vec<String> = t
        .axes
        .iter()
        .zip(&parts)
        .map(|(a, p)| format!("{}={p}", a.key))
        .collect();
    format!("[{}]", s.join(", "))
}

fn compare_sides(
    cat: &Fusion2CatData,
    geom: &MoveGeometry,
    ctx: &MoveLabeling,
) -> Result<Option<String>, CatError> {
    let lhs = side_tensor(cat, &geom.lhs, ctx)?;
    let rhs = side_tensor(cat, &geom.rhs, ctx)?;
    assert_eq!(lhs.axes, rhs.axes, "move sides disagree on boundary axes");
    if lhs.data == rhs.data {
        return Ok(None);
    }
    let i = (0..lhs.data.len())
        .find(|&i| lhs.data[i] != rhs.data[i])
        .expect("unequal data differs somewhere");
    Ok(Some(format!(
        "{} move mismatch at {}; entry {}: lhs = {}, rhs = {}",
        geom.kind.label(),
        format_labeling(cat, ctx),
        format_entry(&lhs, i),
        lhs.data[i],
        rhs.data[i]
    )))
}

#[derive(Debug, Clone)]
pub struct PachnerReport {
    pub kind: MoveKind,
    /// Boundary contexts visited: labelings of the shared boundary cells with
    /// every boundary tetrahedron space nonzero.
    pub contexts: u64,
    pub mismatch: Option<String>,
}

/// Exhaustively checks one bistellar identity: every boundary context whose
/// tetrahedra all carry nonzero spaces is evaluated on both sides, stopping
/// at the first mismatch.  Contexts with a zero boundary space are skipped
/// since both sides are the zero tensor there.
pub fn check_pachner(cat: &Fusion2CatData, kind: MoveKind) -> Result<PachnerReport, CatError> {
    let geom = move_geometry(kind);
    let gates: Vec<[u32; 4]> = geom.lhs.boundary_tets.keys().copied().collect();
    let dfs = CellDfs::new(
        cat,
        geom.boundary_edges.clone(),
        geom.boundary_tris.clone(),
        gates,
    );
    let mut report = PachnerReport {
        kind,
        contexts: 0,
        mismatch: None,
    };
    let mut lab = MoveLabeling::default();
    dfs.run(&mut lab, &mut |lab| {
        report.contexts += 1;
        match compare_sides(cat, &geom, lab)? {
            None => Ok(true),
            Some(w) => {
                report.mismatch = Some(w);
                Ok(false)
            }
        }
    })?;
    Ok(report)
}

/// Checks one bistellar identity at a single boundary context.  The labeling
/// must cover every boundary edge and triangle of the move shape; interior
/// cells are ignored.  Returns a mismatch description, or None on agreement.
pub fn check_pachner_at(
    cat: &Fusion2CatData,
    kind: MoveKind,
    ctx: &MoveLabeling,
) -> Result<Option<String>, CatError> {
    let geom = move_geometry(kind);
    let mut stripped = MoveLabeling::default();
    for e in &geom.boundary_edges {
        let &obj = ctx
            .edges
            .get(e)
            .ok_or_else(|| CatError::BadLabel(format!("no object on boundary edge {e:?}")))?;
        if obj >= cat.n_objects() {
            return Err(CatError::BadLabel(format!(
                "object {obj} on edge {e:?} out of range"
            )));
        }
        stripped.edges.insert(*e, obj);
    }
    for t in &geom.boundary_tris {
        let &idx = ctx
            .tris
            .get(t)
            .ok_or_else(|| CatError::BadLabel(format!("no morphism on boundary triangle {t:?}")))?;
        let key = tri_key(&stripped, *t);
        if idx >= cat.fusion_list(key.0, key.1, key.2).len() {
            return Err(CatError::BadLabel(format!(
                "morphism index {idx} on triangle {t:?} out of range"
            )));
        }
        stripped.tris.insert(*t, idx);
    }
    compare_sides(cat, &geom, &stripped)
}

pub fn check_pachner_33(cat: &Fusion2CatData) -> Result<PachnerReport, CatError> {
    check_pachner(cat, MoveKind::ThreeThree)
}

pub fn check_pachner_24(cat: &Fusion2CatData) -> Result<PachnerReport, CatError> {
    check_pachner(cat, MoveKind::TwoFour)
}

pub fn check_pachner_15(cat: &Fusion2CatData) -> Result<PachnerReport, CatError> {
    check_pachner(cat, MoveKind::OneFive)
}

// Section identity.  On the 4-simplex {0..4}, fix every cell except the edge
// (1,3), its triangles (0,1,3), (1,2,3), (1,3,4), and the triangle (0,2,4):
// that frame leaves the middle labels m = (edge 13, f013, f123, f134) and the
// block label r = f024.  Writing
//   Zhat+ = dim(f024) * Z+,
//   Zhat- = dim(f013) dim(f123) dim(f134) / d(edge 13) * Z-,
// the sum over m of Zhat+(r, m) after Zhat-(c, m) is the identity on the
// block r = c spanned by V+(0,2,3,4) x V+(0,1,2,4), and zero for r != c.

const FRAME_EDGE_SLOTS: [usize; 9] = [0, 1, 2, 3, 4, 6, 7, 8, 9];
const FRAME_TRI_SLOTS: [usize; 6] = [0, 2, 3, 5, 7, 9];
const MID_TRI_SLOTS: [usize; 3] = [1, 6, 8];
const MID_EDGE_SLOT: usize = 5;
const R_TRI_SLOT: usize = 4;

type MidKey = (usize, [usize; 3]);
type FrameKey = ([usize; 9], [usize; 6]);

#[derive(Debug, Clone)]
pub struct SectionReport {
    /// Frames with at least one nonzero block.
    pub frames: u64,
    /// Block pairs compared.
    pub checks: u64,
    pub mismatch: Option<String>,
}

fn mor_dim(cat: &Fusion2CatData, p: &PentaLabel, slot: usize) -> Cyclotomic {
    let k = cat.penta_tri_key(p, slot);
    cat.fusion_list(k.0, k.1, k.2)[p.tris[slot]].dim.clone()
}

fn block_axes(in_dims: (usize, usize), out_dims: (usize, usize)) -> Vec<Axis> {
    // Canonical order: key (0,1,2,4) before (0,2,3,4), In before Out.
    let mk = |tuple: &[u32], role: Role, dim: usize| Axis {
        key: AxisKey {
            simplex: tuple.to_vec(),
            sign: 1,
        },
        role,
        dim,
    };
    vec![
        mk(&[0, 1, 2, 4], Role::In, in_dims.1),
        mk(&[0, 1, 2, 4], Role::Out, out_dims.1),
        mk(&[0, 2, 3, 4], Role::In, in_dims.0),
        mk(&[0, 2, 3, 4], Role::Out, out_dims.0),
    ]
}

/// Retags the sign component of every `In` axis key.  Composing Zhat- after
/// Zhat+ must contract only the middle faces, but the block faces of the two
/// maps carry identical keys with opposite roles; hiding the `In` block axes
/// behind a different sign while contracting keeps them as operator indices.
fn with_in_signs(t: &NamedTensor, sign: i8) -> NamedTensor {
    let mut axes = t.axes.clone();
    for a in &mut axes {
        if a.role == Role::In {
            a.key.sign = sign;
        }
    }
    NamedTensor::new(axes, t.data.clone())
}

fn block_identity(dims: (usize, usize)) -> NamedTensor {
    let axes = block_axes(dims, dims);
    let (d0, d1) = dims;
    let mut data = vec![Cyclotomic::zero(); d1 * d1 * d0 * d0];
    for a in 0..d1 {
        for b in 0..d0 {
            data[((a * d1 + a) * d0 + b) * d0 + b] = Cyclotomic::one();
        }
    }
    NamedTensor::new(axes, data)
}

/// Verifies that the normalized Z maps compose to the identity: over every
/// frame of 4-simplex labels, summing the middles of Zhat+ against Zhat-
/// must give the identity on the diagonal blocks and zero off the diagonal.
pub fn check_section_identity(cat: &Fusion2CatData) -> Result<SectionReport, CatError> {
    let mut buckets: BTreeMap<FrameKey, (PentaLabel, BTreeMap<(usize, MidKey), (NamedTensor, NamedTensor)>)> =
        BTreeMap::new();
    for p in cat.admissible_penta_labels(false) {
        let frame: FrameKey = (
            FRAME_EDGE_SLOTS.map(|k| p.edges[k]),
            FRAME_TRI_SLOTS.map(|k| p.tris[k]),
        );
        let entry = buckets
            .entry(frame)
            .or_insert_with(|| (p.clone(), BTreeMap::new()));
        let zp = z_plus(cat, &p)?;
        let zm = z_minus(cat, &p)?;
        if zp.size() == 0 && zm.size() == 0 {
            continue;
        }
        let plus_norm = mor_dim(cat, &p, R_TRI_SLOT);
        let mut minus_norm = inv_or(
            &cat.d_obj(p.edges[MID_EDGE_SLOT]),
            &format!("d({})", cat.objects[p.edges[MID_EDGE_SLOT]]),
        )?;
        for slot in MID_TRI_SLOTS {
            minus_norm = minus_norm.mul(&mor_dim(cat, &p, slot));
        }
        let r = p.tris[R_TRI_SLOT];
        let mid: MidKey = (p.edges[MID_EDGE_SLOT], MID_TRI_SLOTS.map(|k| p.tris[k]));
        entry
            .1
            .insert((r, mid), (zp.scale(&plus_norm), zm.scale(&minus_norm)));
    }

    let mut report = SectionReport {
        frames: 0,
        checks: 0,
        mismatch: None,
    };
    'frames: for (rep, entries) in buckets.values() {
        let k024 = cat.penta_tri_key(rep, R_TRI_SLOT);
        let nr = cat.fusion_list(k024.0, k024.1, k024.2).len();
        let mut rep_r = rep.clone();
        // Nonzero blocks: both negative faces of the plus map must have
        // nonzero space; their labels depend only on the frame and r.
        let mut blocks: Vec<(usize, (usize, usize))> = Vec::new();
        for r in 0..nr {
            rep_r.tris[R_TRI_SLOT] = r;
            let d0234 = cat.tetra_space(&penta_face(&rep_r, 1));
            let d0124 = cat.tetra_space(&penta_face(&rep_r, 3));
            if d0234 > 0 && d0124 > 0 {
                blocks.push((r, (d0234, d0124)));
            }
        }
        if blocks.is_empty() {
            continue;
        }
        report.frames += 1;
        let mids: BTreeSet<MidKey> = entries.keys().map(|&(_, m)| m).collect();
        for &(r, rdims) in &blocks {
            for &(c, cdims) in &blocks {
                report.checks += 1;
                let axes = block_axes(cdims, rdims);
                let size: usize = axes.iter().map(|a| a.dim).product();
                let mut acc = NamedTensor::new(axes, vec![Cyclotomic::zero(); size]);
                for mid in &mids {
                    if let (Some((zp, _)), Some((_, zm))) =
                        (entries.get(&(r, *mid)), entries.get(&(c, *mid)))
                    {
                        if zp.size() == 0 || zm.size() == 0 {
                            continue;
                        }
                        let term = zp.contract(&with_in_signs(zm, -1));
                        acc.add_assign(&with_in_signs(&term, 1).canonicalized());
                    }
                }
                let expected = if r == c {
                    block_identity(rdims)
                } else {
                    NamedTensor::new(
                        block_axes(cdims, rdims),
                        vec![Cyclotomic::zero(); size],
                    )
                };
                if acc != expected {
                    let i = (0..acc.data.len())
                        .find(|&i| acc.data[i] != expected.data[i])
                        .expect("unequal data differs somewhere");
                    let mut frame_lab = rep.clone();
                    frame_lab.tris[R_TRI_SLOT] = r;
                    report.mismatch = Some(format!(
                        "section identity mismatch at frame of {:?} with blocks r={r}, c={c}; \
                         entry {}: got {}, want {}",
                        frame_lab,
                        format_entry(&acc, i),
                        acc.data[i],
                        expected.data[i]
                    ));
                    break 'frames;
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::cochain::CochainTable;
    use crate::category::generators::{gen_twisted_dw, preset_category};
    use crate::category::group::GroupPresentation;
    use crate::category::CatBackend;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn preset(name: &str) -> Fusion2CatData {
        preset_category(name).unwrap_or_else(|| panic!("missing preset {name}"))
    }

    fn coboundary_twisted_dw_z2() -> Fusion2CatData {
        let g = GroupPresentation::cyclic(2);
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let nu = CochainTable::random(3, 2, &mut rng);
        let omega = nu.differential(&g).unwrap();
        gen_twisted_dw(g, Some(omega)).unwrap()
    }

    fn certification_categories() -> Vec<Fusion2CatData> {
        let mut cats: Vec<Fusion2CatData> = [
            "trivial",
            "dw_z2",
            "dw_z3",
            "dw_z2xz2",
            "dw_s3",
            "yetter_z2_z2",
            "boson",
            "fermion",
            "semion",
            "anti_semion",
            "z3_0",
            "z3_1",
            "z3_2",
        ]
        .iter()
        .map(|n| preset(n))
        .collect();
        cats.push(coboundary_twisted_dw_z2());
        cats
    }

    #[test]
    fn move_geometry_census() {
        for (kind, nl, nr, nb) in [
            (MoveKind::ThreeThree, 3, 3, 9),
            (MoveKind::TwoFour, 2, 4, 8),
            (MoveKind::OneFive, 1, 5, 5),
        ] {
            let g = move_geometry(kind);
            assert_eq!(g.lhs.facets.len(), nl);
            assert_eq!(g.rhs.facets.len(), nr);
            assert_eq!(g.lhs.boundary_tets.len(), nb);
            assert_eq!(g.lhs.boundary_tets, g.rhs.boundary_tets);
        }
        let g33 = move_geometry(MoveKind::ThreeThree);
        assert_eq!(g33.lhs.interior_tris, vec![(1, 3, 5)]);
        assert_eq!(g33.rhs.interior_tris, vec![(0, 2, 4)]);
        assert!(g33.lhs.interior_edges.is_empty());
        assert_eq!(g33.lhs.interior_tets.len(), 3);
        assert_eq!(g33.boundary_tris.len(), 18);
        let g24 = move_geometry(MoveKind::TwoFour);
        assert!(g24.lhs.interior_tris.is_empty());
        assert_eq!(g24.lhs.interior_tets, vec![[0, 1, 3, 5]]);
        assert_eq!(g24.rhs.interior_edges, vec![(2, 4)]);
        assert_eq!(g24.rhs.interior_tris.len(), 4);
        assert_eq!(g24.rhs.interior_tets.len(), 6);
        let g15 = move_geometry(MoveKind::OneFive);
        assert!(g15.lhs.interior_tets.is_empty());
        assert_eq!(g15.rhs.interior_vertices, vec![4]);
        assert_eq!(g15.rhs.interior_edges.len(), 5);
        assert_eq!(g15.rhs.interior_tris.len(), 10);
        assert_eq!(g15.rhs.interior_tets.len(), 10);
        assert_eq!(g15.boundary_tris.len(), 10);
    }

    #[test]
    fn dw_z_plus_is_unit_scalar() {
        let cat = preset("dw_z2");
        for p in cat.admissible_penta_labels(true) {
            let z = z_plus(&cat, &p).unwrap();
            assert_eq!(z.size(), 1);
            assert!(z.data[0].is_one(), "z+ should be 1, got {}", z.data[0]);
        }
    }

    #[test]
    fn boundary_axes_match_geometry() {
        let cat = preset("dw_z2");
        let g = move_geometry(MoveKind::ThreeThree);
        let mut ctx = MoveLabeling::default();
        for e in &g.boundary_edges {
            ctx.edges.insert(*e, 0);
        }
        for t in &g.boundary_tris {
            ctx.tris.insert(*t, 0);
        }
        let lhs = side_tensor(&cat, &g.lhs, &ctx).unwrap();
        let rhs = side_tensor(&cat, &g.rhs, &ctx).unwrap();
        assert_eq!(lhs.axes, rhs.axes);
        assert_eq!(lhs.axes.len(), 9);
        for ax in &lhs.axes {
            assert_eq!(ax.key.sign, 1);
            assert_eq!(ax.dim, 1);
        }
        let ins = lhs.axes.iter().filter(|a| a.role == Role::In).count();
        assert_eq!(ins, 6);
    }

    #[test]
    fn pachner_33_exhaustive_over_generators() {
        for cat in certification_categories() {
            let r = check_pachner_33(&cat).unwrap();
            assert!(r.mismatch.is_none(), "{}: {}", cat.name, r.mismatch.unwrap());
            assert!(r.contexts > 0, "{}: no contexts visited", cat.name);
            if cat.name == "dw(Z2)" {
                assert_eq!(r.contexts, 32);
            }
            if cat.name == "trivial" {
                assert_eq!(r.contexts, 1);
            }
        }
    }

    #[test]
    fn pachner_24_exhaustive_over_generators() {
        for cat in certification_categories() {
            let r = check_pachner_24(&cat).unwrap();
            assert!(r.mismatch.is_none(), "{}: {}", cat.name, r.mismatch.unwrap());
            assert!(r.contexts > 0, "{}: no contexts visited", cat.name);
            if cat.name == "dw(Z2)" {
                assert_eq!(r.contexts, 32);
            }
        }
    }

    #[test]
    fn pachner_15_exhaustive_over_generators() {
        for cat in certification_categories() {
            let r = check_pachner_15(&cat).unwrap();
            assert!(r.mismatch.is_none(), "{}: {}", cat.name, r.mismatch.unwrap());
            assert!(r.contexts > 0, "{}: no contexts visited", cat.name);
            if cat.name == "dw(Z2)" {
                assert_eq!(r.contexts, 16);
            }
        }
    }

    #[test]
    fn pachner_at_accepts_unit_context_and_rejects_gaps() {
        let cat = preset("dw_z2");
        let g = move_geometry(MoveKind::ThreeThree);
        let mut ctx = MoveLabeling::default();
        for e in &g.boundary_edges {
            ctx.edges.insert(*e, 0);
        }
        for t in &g.boundary_tris {
            ctx.tris.insert(*t, 0);
        }
        assert!(check_pachner_at(&cat, MoveKind::ThreeThree, &ctx)
            .unwrap()
            .is_none());
        let empty = MoveLabeling::default();
        assert!(matches!(
            check_pachner_at(&cat, MoveKind::ThreeThree, &empty),
            Err(CatError::BadLabel(_))
        ));
    }

    #[test]
    fn noncocycle_omega_fails_with_witness() {
        // The lone -1 at (1,1,1,0) is not closed: its coboundary is the sign
        // of g1 g2 g3, so some flat context must see unequal sides.
        let mut cat = preset("dw_z2");
        let mut bad = CochainTable::trivial(4, 2);
        bad.set(&[1, 1, 1, 0], Cyclotomic::from_int(-1));
        cat.backend = CatBackend::Dw {
            group: GroupPresentation::cyclic(2),
            omega: bad,
        };
        let r = check_pachner_33(&cat).unwrap();
        let w = r.mismatch.expect("non-cocycle must fail the 3-3 identity");
        assert!(w.contains("3-3"), "witness should name the move: {w}");
        assert!(w.contains("lhs ="), "witness should show both values: {w}");
    }

    #[test]
    fn corrupted_ten_j_fails_with_witness() {
        let mut cat = preset("dw_z2").to_explicit().unwrap();
        let target = cat.admissible_penta_labels(true)[0].clone();
        if let CatBackend::Explicit(tables) = &mut cat.backend {
            let data = tables.ten_j.get_mut(&(target, 1)).unwrap();
            let flipped = data[0].mul(&Cyclotomic::from_int(-1));
            data[0] = flipped;
        } else {
            panic!("expected explicit backend");
        }
        let r = check_pachner_33(&cat).unwrap();
        let w = r.mismatch.expect("corrupted ten_j must fail the 3-3 identity");
        assert!(w.contains("entry"), "witness should pinpoint the entry: {w}");
        let s = check_section_identity(&cat).unwrap();
        assert!(s.mismatch.is_some(), "corrupted ten_j must break the section identity");
    }

    #[test]
    fn section_identity_over_generators() {
        for cat in certification_categories() {
            let r = check_section_identity(&cat).unwrap();
            assert!(r.mismatch.is_none(), "{}: {}", cat.name, r.mismatch.unwrap());
            assert!(r.frames > 0, "{}: no frames checked", cat.name);
        }
    }
}
