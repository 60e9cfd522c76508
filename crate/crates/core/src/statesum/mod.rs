//! State enumeration and evaluation of the state-sum invariant.
//!
//! A state labels every edge of the complex with a simple object and every
//! triangle with an index into the fusion list of its edge labels.  The
//! invariant is
//!
//! ```text
//! Z(K) = sum over states of
//!        dim(C)^-V * prod_e d(edge label)^-1 * prod_s dim(triangle label) * Z(Gamma)
//! ```
//!
//! where `Z(Gamma)` contracts one 10j tensor per 4-simplex over the shared
//! tetrahedron slots through the copairings.  Enumeration is a depth-first
//! scan over edges in a spanning-forest-first order, pruning a branch as soon
//! as a fully-labeled triangle has an empty fusion list, followed by a scan
//! over triangle indices pruned through zero-dimensional tetrahedron spaces.

mod reduced;

pub use reduced::state_sum_reduced;

use rayon::prelude::*;
use std::collections::{HashMap, VecDeque};

use crate::category::cochain::CochainTable;
use crate::category::pachner::z_tensor_with;
use crate::category::tenj::{
    penta_edge_index, tetra_edge_index, PentaLabel, TetraLabel, PENTA_TRI_TRIPLES,
    TETRA_TRI_TRIPLES,
};
use crate::category::{CatBackend, CatError, Fusion2CatData, ObjId};
use crate::scalar::Cyclotomic;
use crate::simplicial::{OrderedOrientedComplex, SimplicialError, Vert};
use crate::tensor::{plan_greedy, execute_plan, ContractionPlan, NodeSkeleton};

#[derive(Debug, thiserror::Error)]
pub enum StateSumError {
    #[error(transparent)]
    Cat(#[from] CatError),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
    #[error("index mismatch: {0}")]
    IndexMismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("reduction self-check failed: {0}")]
    ReductionSelfCheckFailed(String),
}

/// Evaluation mode requested by the caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Enumerate every admissible state.
    Full,
    /// Sum cohomology class representatives scaled by orbit size; only
    /// supported for pointed and Yetter-style categories.
    Reduced,
}

#[derive(Debug, Clone)]
pub struct StateSumOptions {
    pub mode: Mode,
    /// Seed for the reduced-mode coboundary self-check.
    pub seed: u64,
    /// Number of random coboundary shifts verified in reduced mode.
    pub self_check_trials: usize,
    /// Split the edge scan across the rayon pool.  The result is identical
    /// either way; sequential runs are easier to profile.
    pub parallel: bool,
}

impl Default for StateSumOptions {
    fn default() -> Self {
        StateSumOptions {
            mode: Mode::Full,
            seed: 0,
            self_check_trials: 32,
            parallel: true,
        }
    }
}

/// One state: a simple object per edge and a fusion-list index per triangle,
/// both in the storage order of the complex's simplex lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    pub edges: Vec<ObjId>,
    pub tris: Vec<usize>,
}

/// Precomputed incidence data binding the cells of an ordered complex to the
/// label conventions of the category tables.  All simplex tuples are taken in
/// the total vertex order, so local vertex `i` of a cell is the `i`-th vertex
/// of the cell by rank.
pub(crate) struct Engine<'a> {
    pub(crate) cat: &'a Fusion2CatData,
    n_obj: usize,
    pub(crate) n_edges: usize,
    pub(crate) n_tris: usize,
    n_tets: usize,
    /// Per triangle: edge positions in fusion-key order (01, 12, 02).
    tri_edges: Vec<[usize; 3]>,
    /// Per tetrahedron: edge positions in `tetra_edge_index` order.
    tet_edges: Vec<[usize; 6]>,
    /// Per tetrahedron: triangle positions in `TETRA_TRI_TRIPLES` order.
    tet_tris: Vec<[usize; 4]>,
    /// Per tetrahedron: its vertex tuple in rank order, used as axis key.
    tet_tuple: Vec<Vec<Vert>>,
    /// Per facet: edge positions in `penta_edge_index` order.
    facet_edges: Vec<[usize; 10]>,
    /// Per facet: triangle positions in `PENTA_TRI_TRIPLES` order.
    facet_tris: Vec<[usize; 10]>,
    /// Per facet: tetrahedron positions indexed by omitted local vertex.
    facet_tets: Vec<[usize; 5]>,
    facet_sign: Vec<i8>,
    /// Edge scan order: spanning-forest edges first, then the edge completing
    /// the most triangles at each step.
    edge_order: Vec<usize>,
    /// Triangles whose three edges are all assigned after edge step k.
    tris_ready_at: Vec<Vec<usize>>,
    /// Tetrahedra whose four triangles are all assigned after triangle step t.
    tet_gate_at: Vec<Vec<usize>>,
    /// Fusion list length by dense key (a*n + b)*n + c.
    fusion_len: Vec<usize>,
    /// Morphism dimensions by the same dense key.
    mor_dims: Vec<Vec<Cyclotomic>>,
    /// d(A)^-1 per object.
    d_inv: Vec<Cyclotomic>,
    /// dim(C)^-V, the vertex factor of every state at once.
    vertex_factor: Cyclotomic,
    /// True when every one-dimensional pairing is the scalar 1.
    pairing_trivial: bool,
    /// True when every valid tetrahedron space is one-dimensional, making the
    /// tetrahedron gate a no-op.
    gate_trivial: bool,
    /// True when every d(A)^-1 and every fusion slot dimension is 1, so the
    /// normalization of every state is just the vertex factor.
    norm_trivial: bool,
    /// Integer-exponent tables for root-of-unity group cocycles.
    dw_fast: Option<DwFast>,
}

/// Dense evaluation tables for a group 4-cocycle whose values are all powers
/// of one root of unity.  Each facet then contributes an integer exponent and
/// a leaf costs a few array lookups instead of cyclotomic multiplications.
struct DwFast {
    /// Per facet: edge-state positions of the consecutive edges 01, 12, 23,
    /// 34, the arguments of the cocycle.
    facet_pos: Vec<[usize; 4]>,
    /// Exponent per dense cocycle index, matching the cochain table layout.
    log: Vec<u64>,
    /// Powers of the common root; `pow.len()` is its order.
    pow: Vec<Cyclotomic>,
}

fn dw_fast_tables(
    omega: &CochainTable,
    n_obj: usize,
    facet_edges: &[[usize; 10]],
) -> Option<DwFast> {
    if omega.degree != 4 || omega.order != n_obj {
        return None;
    }
    let mut root: u64 = 1;
    for v in &omega.values {
        root = num_integer::lcm(root, v.conductor());
    }
    if root % 2 == 1 {
        // An odd-conductor root of unity can still be -zeta^k.
        root *= 2;
    }
    if root > 4096 {
        return None;
    }
    let zeta = Cyclotomic::zeta(root, 1);
    let mut pow = Vec::with_capacity(root as usize);
    let mut log_of: HashMap<Cyclotomic, u64> = HashMap::new();
    let mut acc = Cyclotomic::one();
    for j in 0..root {
        log_of.insert(acc.clone(), j);
        pow.push(acc.clone());
        acc = acc.mul(&zeta);
    }
    let mut log = Vec::with_capacity(omega.values.len());
    for v in &omega.values {
        log.push(*log_of.get(v)?);
    }
    let facet_pos = facet_edges
        .iter()
        .map(|e| {
            [
                e[penta_edge_index(0, 1)],
                e[penta_edge_index(1, 2)],
                e[penta_edge_index(2, 3)],
                e[penta_edge_index(3, 4)],
            ]
        })
        .collect();
    Some(DwFast { facet_pos, log, pow })
}

impl<'a> Engine<'a> {
    pub(crate) fn new(
        oc: &'a OrderedOrientedComplex,
        cat: &'a Fusion2CatData,
    ) -> Result<Engine<'a>, StateSumError> {
        let cx = &oc.cx;
        let n_obj = cat.n_objects();
        let edges = cx.simplices(1);
        let tris = cx.simplices(2);
        let tets = cx.simplices(3);
        let facets = cx.facets();
        let pos = |verts: &[Vert]| {
            cx.simplex_index(verts)
                .expect("complex is closed under faces")
        };
        // Rank-ordered tuples everywhere: the category tables are written for
        // cells whose local vertex order is the restriction of the total order.
        let ordered = |verts: &[Vert]| oc.ordered_tuple(verts);
        let edge_pos = |a: Vert, b: Vert| {
            let key = if a < b { [a, b] } else { [b, a] };
            pos(&key)
        };

        let mut tri_edges = Vec::with_capacity(tris.len());
        for t in tris {
            let v = ordered(t);
            tri_edges.push([
                edge_pos(v[0], v[1]),
                edge_pos(v[1], v[2]),
                edge_pos(v[0], v[2]),
            ]);
        }

        let mut tet_edges = Vec::with_capacity(tets.len());
        let mut tet_tris = Vec::with_capacity(tets.len());
        let mut tet_tuple = Vec::with_capacity(tets.len());
        for t in tets {
            let v = ordered(t);
            let mut e = [0usize; 6];
            for i in 0..4 {
                for j in (i + 1)..4 {
                    e[tetra_edge_index(i, j)] = edge_pos(v[i], v[j]);
                }
            }
            let mut f = [0usize; 4];
            for (w, &(i, j, k)) in TETRA_TRI_TRIPLES.iter().enumerate() {
                let mut key = [v[i], v[j], v[k]];
                key.sort_unstable();
                f[w] = pos(&key);
            }
            tet_edges.push(e);
            tet_tris.push(f);
            tet_tuple.push(v);
        }

        let mut facet_edges = Vec::with_capacity(facets.len());
        let mut facet_tris = Vec::with_capacity(facets.len());
        let mut facet_tets = Vec::with_capacity(facets.len());
        for s in facets {
            let v = ordered(s);
            let mut e = [0usize; 10];
            for i in 0..5 {
                for j in (i + 1)..5 {
                    e[penta_edge_index(i, j)] = edge_pos(v[i], v[j]);
                }
            }
            let mut f = [0usize; 10];
            for (w, &(i, j, k)) in PENTA_TRI_TRIPLES.iter().enumerate() {
                let mut key = [v[i], v[j], v[k]];
                key.sort_unstable();
                f[w] = pos(&key);
            }
            let mut td = [0usize; 5];
            for omit in 0..5 {
                let mut key: Vec<Vert> = Vec::with_capacity(4);
                for (i, &x) in v.iter().enumerate() {
                    if i != omit {
                        key.push(x);
                    }
                }
                key.sort_unstable();
                td[omit] = pos(&key);
            }
            facet_edges.push(e);
            facet_tris.push(f);
            facet_tets.push(td);
        }

        let edge_order = edge_scan_order(cx.n_vertices(), edges, &tri_edges);
        let mut order_pos = vec![usize::MAX; edges.len()];
        for (k, &e) in edge_order.iter().enumerate() {
            order_pos[e] = k;
        }
        let mut tris_ready_at = vec![Vec::new(); edges.len()];
        for (t, te) in tri_edges.iter().enumerate() {
            if let Some(step) = te.iter().map(|&e| order_pos[e]).max() {
                tris_ready_at[step].push(t);
            }
        }
        let mut tet_gate_at = vec![Vec::new(); tris.len()];
        for (tp, tt) in tet_tris.iter().enumerate() {
            if let Some(&step) = tt.iter().max() {
                tet_gate_at[step].push(tp);
            }
        }

        let mut fusion_len = vec![0usize; n_obj * n_obj * n_obj];
        let mut mor_dims = vec![Vec::new(); n_obj * n_obj * n_obj];
        for a in 0..n_obj {
            for b in 0..n_obj {
                for c in 0..n_obj {
                    let list = cat.fusion_list(a, b, c);
                    let key = (a * n_obj + b) * n_obj + c;
                    fusion_len[key] = list.len();
                    mor_dims[key] = list.iter().map(|m| m.dim.clone()).collect();
                }
            }
        }
        let mut d_inv = Vec::with_capacity(n_obj);
        for a in 0..n_obj {
            let d = cat.d_obj(a);
            d_inv.push(d.inv().map_err(|_| {
                CatError::Validation(vec![format!("d({}) is zero", cat.objects[a])])
            })?);
        }
        let dim_inv = cat.dim_cat()?.inv().map_err(|_| {
            CatError::Validation(vec!["dim(C) is zero".to_string()])
        })?;
        let vertex_factor = dim_inv
            .pow(cx.n_vertices() as i64)
            .map_err(|_| CatError::Validation(vec!["dim(C) is zero".to_string()]))?;
        let pairing_trivial = match &cat.backend {
            CatBackend::Dw { .. } | CatBackend::Yetter { .. } => true,
            CatBackend::Pointed { dims, .. } => dims.iter().all(|d| d.is_one()),
            CatBackend::Explicit(_) => false,
        };
        let gate_trivial = matches!(cat.backend, CatBackend::Dw { .. });
        let norm_trivial = d_inv.iter().all(|d| d.is_one())
            && mor_dims.iter().flatten().all(|d| d.is_one());
        // Group-cocycle values do not depend on the triangle indices, and a
        // group category has at most one fusion slot per triple, so when the
        // cocycle is root-of-unity valued each leaf reduces to exponent sums.
        let dw_fast = match &cat.backend {
            CatBackend::Dw { omega, .. } if fusion_len.iter().all(|&l| l <= 1) => {
                dw_fast_tables(omega, n_obj, &facet_edges)
            }
            _ => None,
        };

        Ok(Engine {
            cat,
            n_obj,
            n_edges: edges.len(),
            n_tris: tris.len(),
            n_tets: tets.len(),
            tri_edges,
            tet_edges,
            tet_tris,
            tet_tuple,
            facet_edges,
            facet_tris,
            facet_tets,
            facet_sign: oc.facet_sign.clone(),
            edge_order,
            tris_ready_at,
            tet_gate_at,
            fusion_len,
            mor_dims,
            d_inv,
            vertex_factor,
            pairing_trivial,
            gate_trivial,
            norm_trivial,
            dw_fast,
        })
    }

    fn tri_key(&self, edges: &[ObjId], t: usize) -> usize {
        let [e01, e12, e02] = self.tri_edges[t];
        (edges[e01] * self.n_obj + edges[e12]) * self.n_obj + edges[e02]
    }

    pub(crate) fn tetra_label(&self, st: (&[ObjId], &[usize]), tp: usize) -> TetraLabel {
        let (edges, tris) = st;
        let mut lab = TetraLabel {
            edges: [0; 6],
            tris: [0; 4],
        };
        for (k, &e) in self.tet_edges[tp].iter().enumerate() {
            lab.edges[k] = edges[e];
        }
        for (w, &t) in self.tet_tris[tp].iter().enumerate() {
            lab.tris[w] = tris[t];
        }
        lab
    }

    fn penta_label(&self, st: (&[ObjId], &[usize]), f: usize) -> PentaLabel {
        let (edges, tris) = st;
        let mut lab = PentaLabel {
            edges: [0; 10],
            tris: [0; 10],
        };
        for (k, &e) in self.facet_edges[f].iter().enumerate() {
            lab.edges[k] = edges[e];
        }
        for (w, &t) in self.facet_tris[f].iter().enumerate() {
            lab.tris[w] = tris[t];
        }
        lab
    }

    /// Exact normalization factor of one state.
    pub(crate) fn normalization_of(
        &self,
        st: (&[ObjId], &[usize]),
    ) -> Result<Cyclotomic, StateSumError> {
        let (edges, tris) = st;
        let mut acc = self.vertex_factor.clone();
        for &a in edges {
            if !self.d_inv[a].is_one() {
                acc = acc.mul(&self.d_inv[a]);
            }
        }
        for (t, &idx) in tris.iter().enumerate() {
            let dim = &self.mor_dims[self.tri_key(edges, t)][idx];
            if !dim.is_one() {
                acc = acc.mul(dim);
            }
        }
        Ok(acc)
    }

    /// Contraction of the 10j tensors of one state: scalar product when every
    /// tetrahedron space is one-dimensional, otherwise a full tensor network
    /// contraction.
    pub(crate) fn ten_j_action_of(
        &self,
        st: (&[ObjId], &[usize]),
    ) -> Result<Cyclotomic, StateSumError> {
        let mut scalar = true;
        for tp in 0..self.n_tets {
            match self.cat.tetra_space(&self.tetra_label(st, tp)) {
                0 => return Ok(Cyclotomic::zero()),
                1 => {}
                _ => scalar = false,
            }
        }
        if scalar {
            self.scalar_action(st)
        } else {
            self.tensor_action(st)
        }
    }

    fn scalar_action(&self, st: (&[ObjId], &[usize])) -> Result<Cyclotomic, StateSumError> {
        let mut acc = Cyclotomic::one();
        for f in 0..self.facet_sign.len() {
            let p = self.penta_label(st, f);
            let v = self.cat.ten_j_value_ref(&p, self.facet_sign[f])?;
            if !v.is_one() {
                acc = acc.mul(&v);
            }
        }
        if !self.pairing_trivial {
            for tp in 0..self.n_tets {
                let lab = self.tetra_label(st, tp);
                let p = self.cat.pairing_scalar(&lab)?;
                if !p.is_one() {
                    let c = p.inv().map_err(|_| {
                        CatError::SingularPairing(format!("{lab:?}"))
                    })?;
                    acc = acc.mul(&c);
                }
            }
        }
        Ok(acc)
    }

    fn facet_tensors(
        &self,
        st: (&[ObjId], &[usize]),
    ) -> Result<Vec<crate::tensor::NamedTensor>, StateSumError> {
        let mut out = Vec::with_capacity(self.facet_sign.len());
        for f in 0..self.facet_sign.len() {
            let p = self.penta_label(st, f);
            let tets = &self.facet_tets[f];
            let t = z_tensor_with(self.cat, &p, self.facet_sign[f], |omit| {
                self.tet_tuple[tets[omit]].clone()
            })?;
            out.push(t);
        }
        Ok(out)
    }

    fn tensor_action(&self, st: (&[ObjId], &[usize])) -> Result<Cyclotomic, StateSumError> {
        let tensors = self.facet_tensors(st)?;
        if tensors.is_empty() {
            return Ok(Cyclotomic::one());
        }
        let skeletons: Vec<NodeSkeleton> = tensors.iter().map(|t| t.axes.clone()).collect();
        let plan = plan_greedy(&skeletons);
        let result = execute_plan(&plan, tensors);
        if !result.axes.is_empty() {
            let open: Vec<String> = result.axes.iter().map(|a| a.key.to_string()).collect();
            return Err(StateSumError::IndexMismatch(format!(
                "contraction left open tetrahedron slots {}",
                open.join(", ")
            )));
        }
        Ok(result.data.into_iter().next().unwrap_or_else(Cyclotomic::zero))
    }

    /// Summand of one state, normalization included.
    pub(crate) fn term_of(&self, st: (&[ObjId], &[usize])) -> Result<Cyclotomic, StateSumError> {
        let z = self.ten_j_action_of(st)?;
        if z.is_zero() {
            return Ok(z);
        }
        Ok(self.normalization_of(st)?.mul(&z))
    }

    /// Depth-first scan over admissible states.  `gate` prunes triangle
    /// branches through zero-dimensional tetrahedron spaces; enumeration for
    /// its own sake leaves every admissible state visible and so runs
    /// ungated.  The visitor returns `false` to stop the whole scan.
    fn scan(
        &self,
        prefix: &[ObjId],
        gate: bool,
        visit: &mut dyn FnMut(&[ObjId], &[usize]) -> Result<bool, StateSumError>,
    ) -> Result<bool, StateSumError> {
        let mut edges = vec![usize::MAX; self.n_edges];
        let mut tris = vec![usize::MAX; self.n_tris];
        for (k, &obj) in prefix.iter().enumerate() {
            edges[self.edge_order[k]] = obj;
        }
        let gate = gate && !self.gate_trivial;
        self.edge_step(prefix.len(), &mut edges, &mut tris, gate, visit)
    }

    fn edge_step(
        &self,
        k: usize,
        edges: &mut Vec<ObjId>,
        tris: &mut Vec<usize>,
        gate: bool,
        visit: &mut dyn FnMut(&[ObjId], &[usize]) -> Result<bool, StateSumError>,
    ) -> Result<bool, StateSumError> {
        if k == self.n_edges {
            return self.tri_step(0, edges, tris, gate, visit);
        }
        let e = self.edge_order[k];
        for obj in 0..self.n_obj {
            edges[e] = obj;
            let alive = self.tris_ready_at[k]
                .iter()
                .all(|&t| self.fusion_len[self.tri_key(edges, t)] > 0);
            if alive && !self.edge_step(k + 1, edges, tris, gate, visit)? {
                edges[e] = usize::MAX;
                return Ok(false);
            }
        }
        edges[e] = usize::MAX;
        Ok(true)
    }

    fn tri_step(
        &self,
        t: usize,
        edges: &mut Vec<ObjId>,
        tris: &mut Vec<usize>,
        gate: bool,
        visit: &mut dyn FnMut(&[ObjId], &[usize]) -> Result<bool, StateSumError>,
    ) -> Result<bool, StateSumError> {
        if t == self.n_tris {
            return visit(edges, tris);
        }
        let len = self.fusion_len[self.tri_key(edges, t)];
        for idx in 0..len {
            tris[t] = idx;
            let alive = !gate
                || self.tet_gate_at[t].iter().all(|&tp| {
                    self.cat
                        .tetra_space(&self.tetra_label((edges.as_slice(), tris.as_slice()), tp))
                        > 0
                });
            if alive && !self.tri_step(t + 1, edges, tris, gate, visit)? {
                tris[t] = usize::MAX;
                return Ok(false);
            }
        }
        tris[t] = usize::MAX;
        Ok(true)
    }

    /// Scan over admissible edge labelings alone, for callers that derive the
    /// triangle labels by other means.
    pub(crate) fn edge_scan(
        &self,
        visit: &mut dyn FnMut(&[ObjId]) -> Result<bool, StateSumError>,
    ) -> Result<(), StateSumError> {
        self.edge_scan_from(&[], visit)
    }

    fn edge_scan_from(
        &self,
        prefix: &[ObjId],
        visit: &mut dyn FnMut(&[ObjId]) -> Result<bool, StateSumError>,
    ) -> Result<(), StateSumError> {
        let mut edges = vec![usize::MAX; self.n_edges];
        for (k, &obj) in prefix.iter().enumerate() {
            edges[self.edge_order[k]] = obj;
        }
        self.edge_only_step(prefix.len(), &mut edges, visit).map(|_| ())
    }

    fn edge_only_step(
        &self,
        k: usize,
        edges: &mut Vec<ObjId>,
        visit: &mut dyn FnMut(&[ObjId]) -> Result<bool, StateSumError>,
    ) -> Result<bool, StateSumError> {
        if k == self.n_edges {
            return visit(edges);
        }
        let e = self.edge_order[k];
        for obj in 0..self.n_obj {
            edges[e] = obj;
            let alive = self.tris_ready_at[k]
                .iter()
                .all(|&t| self.fusion_len[self.tri_key(edges, t)] > 0);
            if alive && !self.edge_only_step(k + 1, edges, visit)? {
                edges[e] = usize::MAX;
                return Ok(false);
            }
        }
        edges[e] = usize::MAX;
        Ok(true)
    }

    /// Edge-label prefixes covering the state space disjointly, for splitting
    /// the scan across threads.  Expansion stops once `target` prefixes exist
    /// or every edge is pinned.
    fn prefixes(&self, target: usize) -> Vec<Vec<ObjId>> {
        let mut out: Vec<Vec<ObjId>> = vec![Vec::new()];
        let mut scratch = vec![usize::MAX; self.n_edges];
        for k in 0..self.n_edges {
            if out.len() >= target {
                break;
            }
            let mut next = Vec::with_capacity(out.len() * self.n_obj);
            for p in &out {
                for (i, &obj) in p.iter().enumerate() {
                    scratch[self.edge_order[i]] = obj;
                }
                let e = self.edge_order[k];
                for obj in 0..self.n_obj {
                    scratch[e] = obj;
                    let alive = self.tris_ready_at[k]
                        .iter()
                        .all(|&t| self.fusion_len[self.tri_key(&scratch, t)] > 0);
                    if alive {
                        let mut q = p.clone();
                        q.push(obj);
                        next.push(q);
                    }
                }
                scratch[e] = usize::MAX;
                for i in 0..p.len() {
                    scratch[self.edge_order[i]] = usize::MAX;
                }
            }
            out = next;
            if out.is_empty() {
                break;
            }
        }
        out
    }

    fn sum_from(&self, prefix: &[ObjId]) -> Result<Cyclotomic, StateSumError> {
        if self.norm_trivial {
            if let Some(fast) = &self.dw_fast {
                return self.count_from(prefix, fast);
            }
        }
        let mut acc = Cyclotomic::zero();
        self.scan(prefix, true, &mut |edges, tris| {
            let term = self.term_of((edges, tris))?;
            if !term.is_zero() {
                acc = acc.add(&term);
            }
            Ok(true)
        })?;
        Ok(acc)
    }

    /// Group-cocycle fast path: triangle labels are forced, every state has
    /// the same normalization, and Z(Gamma) is a power of one root of unity,
    /// so the sum is a histogram of exponents over admissible edge labelings.
    fn count_from(&self, prefix: &[ObjId], fast: &DwFast) -> Result<Cyclotomic, StateSumError> {
        let n = self.n_obj;
        let order = fast.pow.len() as u64;
        let mut counts = vec![0u64; fast.pow.len()];
        self.edge_scan_from(prefix, &mut |edges| {
            let mut e: u64 = 0;
            for (f, pos) in fast.facet_pos.iter().enumerate() {
                let idx = ((edges[pos[3]] * n + edges[pos[2]]) * n + edges[pos[1]]) * n
                    + edges[pos[0]];
                let l = fast.log[idx];
                e += if self.facet_sign[f] >= 0 { l } else { order - l };
            }
            counts[(e % order) as usize] += 1;
            Ok(true)
        })?;
        let mut acc = Cyclotomic::zero();
        for (j, &c) in counts.iter().enumerate() {
            if c > 0 {
                let term = Cyclotomic::from_int(c as i64).mul(&fast.pow[j]);
                acc = acc.add(&term);
            }
        }
        Ok(acc.mul(&self.vertex_factor))
    }

    pub(crate) fn full_sum(&self, parallel: bool) -> Result<Cyclotomic, StateSumError> {
        let threads = rayon::current_num_threads();
        if !parallel || threads <= 1 {
            return self.sum_from(&[]);
        }
        let prefixes = self.prefixes((threads * 16).min(4096));
        if prefixes.is_empty() {
            return Ok(Cyclotomic::zero());
        }
        let partials: Result<Vec<Cyclotomic>, StateSumError> = prefixes
            .par_iter()
            .map(|p| self.sum_from(p))
            .collect();
        // Summed in prefix order: the result does not depend on thread count.
        let mut acc = Cyclotomic::zero();
        for part in partials? {
            acc = acc.add(&part);
        }
        Ok(acc)
    }
}

/// Spanning-forest-first edge order: breadth-first tree edges pin one new
/// vertex each, then the remaining edges are taken so that each step closes
/// as many triangles as possible.
fn edge_scan_order(
    n_vertices: usize,
    edges: &[Vec<Vert>],
    tri_edges: &[[usize; 3]],
) -> Vec<usize> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_vertices];
    for (e, v) in edges.iter().enumerate() {
        let (a, b) = (v[0] as usize, v[1] as usize);
        adj[a].push((b, e));
        adj[b].push((a, e));
    }
    let mut seen_v = vec![false; n_vertices];
    let mut placed = vec![false; edges.len()];
    let mut order = Vec::with_capacity(edges.len());
    for root in 0..n_vertices {
        if seen_v[root] {
            continue;
        }
        seen_v[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &(y, e) in &adj[x] {
                if !seen_v[y] {
                    seen_v[y] = true;
                    placed[e] = true;
                    order.push(e);
                    queue.push_back(y);
                }
            }
        }
    }
    let mut placed_count = vec![0usize; edges.len()];
    let mut tri_missing: Vec<usize> = tri_edges
        .iter()
        .map(|te| te.iter().filter(|&&e| !placed[e]).count())
        .collect();
    while order.len() < edges.len() {
        for c in placed_count.iter_mut() {
            *c = 0;
        }
        for (t, te) in tri_edges.iter().enumerate() {
            if tri_missing[t] == 1 {
                for &e in te {
                    if !placed[e] {
                        placed_count[e] += 1;
                    }
                }
            }
        }
        let best = (0..edges.len())
            .filter(|&e| !placed[e])
            .max_by_key(|&e| (placed_count[e], std::cmp::Reverse(e)))
            .expect("unplaced edge exists");
        placed[best] = true;
        order.push(best);
        for (t, te) in tri_edges.iter().enumerate() {
            if te.contains(&best) && tri_missing[t] > 0 {
                tri_missing[t] -= 1;
            }
        }
    }
    order
}

/// Visits every admissible state exactly once.  A state is admissible when
/// each triangle label indexes into the fusion list of its edge labels;
/// branches die as soon as a fully-edge-labeled triangle has an empty list.
/// The visitor returns `false` to stop early.
pub fn enumerate_states(
    oc: &OrderedOrientedComplex,
    cat: &Fusion2CatData,
    mut visit: impl FnMut(&State) -> bool,
) -> Result<(), StateSumError> {
    let eng = Engine::new(oc, cat)?;
    eng.scan(&[], false, &mut |edges, tris| {
        Ok(visit(&State {
            edges: edges.to_vec(),
            tris: tris.to_vec(),
        }))
    })?;
    Ok(())
}

/// Exact normalization factor of one state: `dim(C)^-V` times the inverse
/// `d` of each edge label times the dimension of each triangle label.
pub fn normalization(
    oc: &OrderedOrientedComplex,
    cat: &Fusion2CatData,
    st: &State,
) -> Result<Cyclotomic, StateSumError> {
    let eng = Engine::new(oc, cat)?;
    check_state(&eng, st)?;
    eng.normalization_of((st.edges.as_slice(), st.tris.as_slice()))
}

/// Contraction of the per-facet 10j tensors of one state over the shared
/// tetrahedron slots.
pub fn ten_j_action(
    oc: &OrderedOrientedComplex,
    cat: &Fusion2CatData,
    st: &State,
) -> Result<Cyclotomic, StateSumError> {
    let eng = Engine::new(oc, cat)?;
    check_state(&eng, st)?;
    eng.ten_j_action_of((st.edges.as_slice(), st.tris.as_slice()))
}

/// Greedy contraction schedule for the facet tensors of one state.
pub fn plan_contraction(
    oc: &OrderedOrientedComplex,
    cat: &Fusion2CatData,
    st: &State,
) -> Result<ContractionPlan, StateSumError> {
    let eng = Engine::new(oc, cat)?;
    check_state(&eng, st)?;
    let tensors = eng.facet_tensors((st.edges.as_slice(), st.tris.as_slice()))?;
    let skeletons: Vec<NodeSkeleton> = tensors.iter().map(|t| t.axes.clone()).collect();
    Ok(plan_greedy(&skeletons))
}

fn check_state(eng: &Engine, st: &State) -> Result<(), StateSumError> {
    if st.edges.len() != eng.n_edges || st.tris.len() != eng.n_tris {
        return Err(StateSumError::IndexMismatch(format!(
            "state has {} edge and {} triangle labels, complex has {} and {}",
            st.edges.len(),
            st.tris.len(),
            eng.n_edges,
            eng.n_tris
        )));
    }
    for (pos, &a) in st.edges.iter().enumerate() {
        if a >= eng.n_obj {
            return Err(StateSumError::IndexMismatch(format!(
                "edge {pos} labeled with object {a}, category has {}",
                eng.n_obj
            )));
        }
    }
    for (t, &idx) in st.tris.iter().enumerate() {
        let len = eng.fusion_len[eng.tri_key(&st.edges, t)];
        if idx >= len {
            return Err(StateSumError::IndexMismatch(format!(
                "triangle {t} labeled with index {idx}, fusion list has {len} entries"
            )));
        }
    }
    Ok(())
}

/// The full state sum.  Dispatches on the requested mode.
pub fn evaluate(
    oc: &OrderedOrientedComplex,
    cat: &Fusion2CatData,
    opts: &StateSumOptions,
) -> Result<Cyclotomic, StateSumError> {
    match opts.mode {
        Mode::Full => state_sum(oc, cat, opts),
        Mode::Reduced => state_sum_reduced(oc, cat, opts),
    }
}

/// Exact evaluation by enumerating every admissible state.
pub fn state_sum(
    oc: &OrderedOrientedComplex,
    cat: &Fusion2CatData,
    opts: &StateSumOptions,
) -> Result<Cyclotomic, StateSumError> {
    let eng = Engine::new(oc, cat)?;
    eng.full_sum(opts.parallel)
}

/// Outcome of a gauge-invariance probe: the invariant before and after a
/// seeded change of tetrahedron bases.
#[derive(Debug, Clone)]
pub struct GaugeReport {
    pub base: Cyclotomic,
    pub transformed: Cyclotomic,
    pub pass: bool,
}

/// Recomputes the invariant after a random rescaling of the tetrahedron
/// bases.  With `include_pairing` the pairings absorb the rescaling and the
/// invariant must not move; without it the probe deliberately breaks the
/// ten_j/pairing coupling and is expected to fail.
pub fn gauge_transform_test(
    oc: &OrderedOrientedComplex,
    cat: &Fusion2CatData,
    opts: &StateSumOptions,
    seed: u64,
    include_pairing: bool,
) -> Result<GaugeReport, StateSumError> {
    let base = state_sum(oc, cat, opts)?;
    let t = crate::category::tenj::gauge_transformed(cat, seed, include_pairing)?;
    let transformed = state_sum(oc, &t, opts)?;
    let pass = base == transformed;
    Ok(GaugeReport {
        base,
        transformed,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::generators::preset_category;
    use crate::scalar::Rational;
    use crate::simplicial::fixtures::{boundary_delta5, s1xs3_staircase};
    use num_bigint::BigInt;

    fn oriented(cx: crate::simplicial::SimplicialComplex) -> OrderedOrientedComplex {
        OrderedOrientedComplex::orient(cx, None).unwrap()
    }

    fn rat(num: i64, den: i64) -> Cyclotomic {
        Cyclotomic::from_rational(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    #[test]
    fn trivial_category_gives_one_on_boundary_delta5() {
        let oc = oriented(boundary_delta5());
        let cat = preset_category("trivial").unwrap();
        let z = state_sum(&oc, &cat, &StateSumOptions::default()).unwrap();
        assert_eq!(z, Cyclotomic::one());
    }

    #[test]
    fn dw_z2_on_boundary_delta5_counts_flat_connections() {
        let oc = oriented(boundary_delta5());
        let cat = preset_category("dw_z2").unwrap();

        let mut states = 0usize;
        enumerate_states(&oc, &cat, |st| {
            assert_eq!(st.edges.len(), 15);
            assert_eq!(st.tris.len(), 20);
            states += 1;
            true
        })
        .unwrap();
        assert_eq!(states, 32);

        let z = state_sum(&oc, &cat, &StateSumOptions::default()).unwrap();
        assert_eq!(z, rat(1, 2));

        // Independent count: label the 15 edges with Z2 directly and check
        // the multiplicative triangle condition against the Cayley table.
        let cx = &oc.cx;
        let tris: Vec<[usize; 3]> = cx
            .simplices(2)
            .iter()
            .map(|t| {
                let v = oc.ordered_tuple(t);
                let pos = |a, b| cx.simplex_index(&[a, b]).unwrap();
                [pos(v[0], v[1]), pos(v[1], v[2]), pos(v[0], v[2])]
            })
            .collect();
        let mut flat = 0u64;
        for word in 0u32..1 << 15 {
            let g = |e: usize| (word >> e) & 1;
            if tris.iter().all(|&[e01, e12, e02]| (g(e01) + g(e12)) % 2 == g(e02)) {
                flat += 1;
            }
        }
        assert_eq!(flat, 32);
        // Z = flat / |G|^V with every other factor equal to one.
        assert_eq!(z, rat(flat as i64, 2i64.pow(6)));
    }

    #[test]
    fn dw_z2_on_s1xs3_is_one() {
        let oc = oriented(s1xs3_staircase());
        let cat = preset_category("dw_z2").unwrap();
        let z = state_sum(&oc, &cat, &StateSumOptions::default()).unwrap();
        assert_eq!(z, Cyclotomic::one());
    }

    #[test]
    fn dw_z3_parallel_matches_sequential() {
        let oc = oriented(boundary_delta5());
        let cat = preset_category("dw_z3").unwrap();
        let mut opts = StateSumOptions::default();
        opts.parallel = false;
        let seq = state_sum(&oc, &cat, &opts).unwrap();
        opts.parallel = true;
        let par = state_sum(&oc, &cat, &opts).unwrap();
        assert_eq!(seq, par);
        assert_eq!(seq, rat(1, 3));
    }

    #[test]
    fn pointed_normalization_value_on_boundary_delta5() {
        let oc = oriented(boundary_delta5());
        let cat = preset_category("boson").unwrap();
        let st = State {
            edges: vec![0; 15],
            tris: vec![0; 20],
        };
        let n = normalization(&oc, &cat, &st).unwrap();
        // dim(C)^-6 * d(*)^-15 = 2^6 * 2^-15.
        assert_eq!(n, rat(1, 512));
    }

    #[test]
    fn plan_eliminates_each_tetrahedron_once() {
        let oc = oriented(boundary_delta5());
        let cat = preset_category("trivial").unwrap();
        let st = State {
            edges: vec![0; 15],
            tris: vec![0; 20],
        };
        let plan = plan_contraction(&oc, &cat, &st).unwrap();
        assert_eq!(plan.initial_nodes, 6);
        let eliminated: usize = plan.steps.iter().map(|s| s.eliminated.len()).sum();
        assert_eq!(eliminated, 15);
        // Five merges fold six facets into a single closed scalar.
        assert_eq!(plan.steps.len(), 5);
        assert_eq!(plan.steps.last().unwrap().result_rank, 0);
    }

    #[test]
    fn state_shape_errors_are_reported() {
        let oc = oriented(boundary_delta5());
        let cat = preset_category("trivial").unwrap();
        let st = State {
            edges: vec![0; 3],
            tris: vec![0; 20],
        };
        match ten_j_action(&oc, &cat, &st) {
            Err(StateSumError::IndexMismatch(msg)) => {
                assert!(msg.contains("edge"), "unexpected message {msg}");
            }
            other => panic!("expected IndexMismatch, got {other:?}"),
        }
    }

    #[test]
    fn disjoint_union_multiplies() {
        let a = boundary_delta5();
        let b = boundary_delta5();
        let oc = oriented(a.disjoint_union(&b));
        let cat = preset_category("dw_z2").unwrap();
        let z = state_sum(&oc, &cat, &StateSumOptions::default()).unwrap();
        assert_eq!(z, rat(1, 4));
    }

    #[test]
    fn gauge_probe_passes_with_pairing_and_fails_without() {
        let oc = oriented(boundary_delta5());
        let cat = preset_category("semion").unwrap();
        let opts = StateSumOptions::default();
        let ok = gauge_transform_test(&oc, &cat, &opts, 5, true).unwrap();
        assert!(ok.pass, "gauge-compensated rescaling moved the invariant");
        let bad = gauge_transform_test(&oc, &cat, &opts, 5, false).unwrap();
        assert!(
            !bad.pass,
            "rescaling ten_j without the pairing should move the invariant"
        );
    }
}
