//! Simplicial complexes, vertex orders, orientations, links, and validation
//! of singular combinatorial 4-manifolds.
//!
//! Vertices are interned as `u32` indices into a name table; simplices are
//! sorted index tuples.  A complex is immutable after construction: bistellar
//! moves (see [`moves`]) build new complexes.

pub mod fixtures;
pub mod moves;

use serde_json::{json, Value};
use std::collections::{HashMap, HashSet, VecDeque};
use thiserror::Error;

pub type Vert = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimplicialError {
    #[error("complex is not pure: {0}")]
    NotPure(String),
    #[error("complex is not closed: 3-simplex {simplex:?} lies in {count} facets")]
    NotClosed { simplex: Vec<String>, count: usize },
    #[error("link of 2-simplex {simplex:?} is not a single cycle: {reason}")]
    BadTriangleLink { simplex: Vec<String>, reason: String },
    #[error("link of edge {simplex:?} is not a 2-sphere: {reason}")]
    BadEdgeLink { simplex: Vec<String>, reason: String },
    #[error("link of vertex {simplex:?} is not a closed 3-manifold: {reason}")]
    BadVertexLink { simplex: Vec<String>, reason: String },
    #[error("complex is not orientable")]
    NonOrientable,
    #[error("invalid move site: {0}")]
    InvalidSite(String),
    #[error("vertex name collision: {0}")]
    NameCollision(String),
    #[error("no valid move found within the retry budget")]
    NoValidMove,
    #[error("face index out of range")]
    IndexOutOfRange,
    #[error("{0:?} is not a face of the given simplex")]
    NotAFace(Vec<String>),
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    names: Vec<String>,
    name_index: HashMap<String, Vert>,
    facets: Vec<Vec<Vert>>,
    by_dim: Vec<Vec<Vec<Vert>>>,
    index: Vec<HashMap<Vec<Vert>, usize>>,
    dim: usize,
}

fn subsets_of_size(set: &[Vert], k: usize, out: &mut Vec<Vec<Vert>>) {
    let n = set.len();
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| set[i]).collect());
        // Advance combination.
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

impl SimplicialComplex {
    /// Build from vertex names and facets given as name tuples.  Facets are
    /// deduplicated; the face lattice is derived eagerly.
    pub fn build(
        vertex_names: Vec<String>,
        facet_names: &[Vec<String>],
    ) -> Result<Self, SimplicialError> {
        let mut name_index = HashMap::new();
        for (i, n) in vertex_names.iter().enumerate() {
            if name_index.insert(n.clone(), i as Vert).is_some() {
                return Err(SimplicialError::NameCollision(n.clone()));
            }
        }
        let mut facets: Vec<Vec<Vert>> = Vec::new();
        for f in facet_names {
            let mut tuple: Vec<Vert> = Vec::with_capacity(f.len());
            for n in f {
                let Some(&v) = name_index.get(n) else {
                    return Err(SimplicialError::Parse(format!(
                        "facet vertex {n:?} is not in the vertex list"
                    )));
                };
                tuple.push(v);
            }
            tuple.sort_unstable();
            let before = tuple.len();
            tuple.dedup();
            if tuple.len() != before {
                return Err(SimplicialError::NotPure(format!(
                    "facet {f:?} repeats a vertex"
                )));
            }
            facets.push(tuple);
        }
        facets.sort();
        facets.dedup();
        Ok(Self::from_internal(vertex_names, name_index, facets))
    }

    fn from_internal(
        names: Vec<String>,
        name_index: HashMap<String, Vert>,
        facets: Vec<Vec<Vert>>,
    ) -> Self {
        let dim = facets.iter().map(|f| f.len() - 1).max().unwrap_or(0);
        let mut by_dim: Vec<Vec<Vec<Vert>>> = vec![Vec::new(); dim + 1];
        for f in &facets {
            for d in 0..f.len() {
                subsets_of_size(f, d + 1, &mut by_dim[d]);
            }
        }
        for level in by_dim.iter_mut() {
            level.sort();
            level.dedup();
        }
        let index: Vec<HashMap<Vec<Vert>, usize>> = by_dim
            .iter()
            .map(|level| {
                level
                    .iter()
                    .enumerate()
                    .map(|(i, s)| (s.clone(), i))
                    .collect()
            })
            .collect();
        SimplicialComplex {
            names,
            name_index,
            facets,
            by_dim,
            index,
            dim,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: Vert) -> &str {
        &self.names[v as usize]
    }

    pub fn name_tuple(&self, simplex: &[Vert]) -> Vec<String> {
        simplex.iter().map(|&v| self.name(v).to_string()).collect()
    }

    pub fn vertex_id(&self, name: &str) -> Option<Vert> {
        self.name_index.get(name).copied()
    }

    pub fn n_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn facets(&self) -> &[Vec<Vert>] {
        &self.facets
    }

    /// Simplices of dimension d, sorted lexicographically.
    pub fn simplices(&self, d: usize) -> &[Vec<Vert>] {
        static EMPTY: Vec<Vec<Vert>> = Vec::new();
        self.by_dim.get(d).unwrap_or(&EMPTY)
    }

    pub fn simplex_index(&self, simplex: &[Vert]) -> Option<usize> {
        let d = simplex.len().checked_sub(1)?;
        self.index.get(d)?.get(simplex).copied()
    }

    pub fn contains(&self, simplex: &[Vert]) -> bool {
        self.simplex_index(simplex).is_some()
    }

    /// Facet indices whose facet contains the given simplex.
    pub fn star_facets(&self, simplex: &[Vert]) -> Vec<usize> {
        self.facets
            .iter()
            .enumerate()
            .filter(|(_, f)| simplex.iter().all(|v| f.binary_search(v).is_ok()))
            .map(|(i, _)| i)
            .collect()
    }

    /// The link of a simplex, as a complex over the same vertex name table.
    pub fn link(&self, simplex: &[Vert]) -> SimplicialComplex {
        let mut link_facets: Vec<Vec<Vert>> = Vec::new();
        for f in &self.facets {
            if simplex.iter().all(|v| f.binary_search(v).is_ok()) {
                let rest: Vec<Vert> = f
                    .iter()
                    .copied()
                    .filter(|v| !simplex.contains(v))
                    .collect();
                if !rest.is_empty() {
                    link_facets.push(rest);
                }
            }
        }
        link_facets.sort();
        link_facets.dedup();
        Self::from_internal(self.names.clone(), self.name_index.clone(), link_facets)
    }

    pub fn euler_characteristic(&self) -> i64 {
        let mut chi = 0i64;
        for (d, level) in self.by_dim.iter().enumerate() {
            let c = level.len() as i64;
            chi += if d % 2 == 0 { c } else { -c };
        }
        chi
    }

    /// Connectivity of the 1-skeleton restricted to vertices that occur in facets.
    pub fn is_connected(&self) -> bool {
        let verts: Vec<Vert> = self.simplices(0).iter().map(|s| s[0]).collect();
        if verts.len() <= 1 {
            return true;
        }
        let mut adj: HashMap<Vert, Vec<Vert>> = HashMap::new();
        for e in self.simplices(1) {
            adj.entry(e[0]).or_default().push(e[1]);
            adj.entry(e[1]).or_default().push(e[0]);
        }
        let mut seen: HashSet<Vert> = HashSet::new();
        let mut queue = VecDeque::new();
        queue.push_back(verts[0]);
        seen.insert(verts[0]);
        while let Some(v) = queue.pop_front() {
            for &w in adj.get(&v).into_iter().flatten() {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen.len() == verts.len()
    }

    fn is_pure(&self) -> bool {
        self.facets.iter().all(|f| f.len() == self.dim + 1)
    }

    /// Closed pseudomanifold check in the top dimension: every codimension-1
    /// simplex lies in exactly two facets.
    fn closed_check(&self) -> Result<(), SimplicialError> {
        if self.dim == 0 {
            return Ok(());
        }
        let mut count: HashMap<Vec<Vert>, usize> = HashMap::new();
        let mut buf: Vec<Vec<Vert>> = Vec::new();
        for f in &self.facets {
            buf.clear();
            subsets_of_size(f, self.dim, &mut buf);
            for s in &buf {
                *count.entry(s.clone()).or_insert(0) += 1;
            }
        }
        for s in self.simplices(self.dim - 1) {
            let c = count.get(s).copied().unwrap_or(0);
            if c != 2 {
                return Err(SimplicialError::NotClosed {
                    simplex: self.name_tuple(s),
                    count: c,
                });
            }
        }
        Ok(())
    }

    /// Is this complex a single cycle (closed connected 1-manifold)?
    fn is_single_cycle(&self) -> Result<(), String> {
        if self.dim != 1 || !self.is_pure() {
            return Err("not pure of dimension 1".into());
        }
        let verts = self.simplices(0).len();
        let edges = self.simplices(1).len();
        if verts != edges {
            return Err(format!("{verts} vertices vs {edges} edges"));
        }
        let mut deg: HashMap<Vert, usize> = HashMap::new();
        for e in self.simplices(1) {
            *deg.entry(e[0]).or_insert(0) += 1;
            *deg.entry(e[1]).or_insert(0) += 1;
        }
        if deg.values().any(|&d| d != 2) {
            return Err("a vertex does not have degree 2".into());
        }
        if !self.is_connected() {
            return Err("disconnected".into());
        }
        Ok(())
    }

    /// Is this complex a closed connected surface with Euler characteristic 2?
    /// Sufficient for 2-sphere recognition.
    fn is_two_sphere(&self) -> Result<(), String> {
        if self.dim != 2 || !self.is_pure() {
            return Err("not pure of dimension 2".into());
        }
        self.closed_check().map_err(|e| e.to_string())?;
        // Vertex links in a closed surface must be single cycles.
        for v in self.simplices(0) {
            self.link(v).is_single_cycle().map_err(|r| {
                format!("link of vertex {} is not a cycle: {r}", self.name(v[0]))
            })?;
        }
        if !self.is_connected() {
            return Err("disconnected".into());
        }
        let chi = self.euler_characteristic();
        if chi != 2 {
            return Err(format!("Euler characteristic {chi} != 2"));
        }
        Ok(())
    }

    /// Is this complex a closed connected combinatorial 3-manifold?
    /// Sphericity is deliberately not tested.
    fn is_closed_3_manifold(&self) -> Result<(), String> {
        if self.dim != 3 || !self.is_pure() {
            return Err("not pure of dimension 3".into());
        }
        self.closed_check().map_err(|e| e.to_string())?;
        if !self.is_connected() {
            return Err("disconnected".into());
        }
        for e in self.simplices(1) {
            self.link(e).is_single_cycle().map_err(|r| {
                format!(
                    "link of edge {:?} is not a cycle: {r}",
                    self.name_tuple(e)
                )
            })?;
        }
        for v in self.simplices(0) {
            self.link(v).is_two_sphere().map_err(|r| {
                format!(
                    "link of vertex {} is not a 2-sphere: {r}",
                    self.name(v[0])
                )
            })?;
        }
        Ok(())
    }

    /// Validate that the complex is a closed singular combinatorial
    /// 4-manifold: pure and closed, links of triangles are circles, links of
    /// edges are 2-spheres, links of vertices are closed connected
    /// combinatorial 3-manifolds (cone singularities allowed, so vertex links
    /// are never tested for sphericity).  The empty complex passes vacuously.
    pub fn validate_singular_4manifold(&self) -> Result<(), SimplicialError> {
        if self.is_empty() {
            return Ok(());
        }
        if self.dim != 4 || !self.is_pure() {
            return Err(SimplicialError::NotPure(format!(
                "facet dimensions vary or differ from 4 (dim = {})",
                self.dim
            )));
        }
        let used: usize = self.simplices(0).len();
        if used != self.names.len() {
            return Err(SimplicialError::NotPure(format!(
                "{} vertices are not contained in any facet",
                self.names.len() - used
            )));
        }
        self.closed_check()?;
        for t in self.simplices(2) {
            self.link(t)
                .is_single_cycle()
                .map_err(|reason| SimplicialError::BadTriangleLink {
                    simplex: self.name_tuple(t),
                    reason,
                })?;
        }
        for e in self.simplices(1) {
            self.link(e)
                .is_two_sphere()
                .map_err(|reason| SimplicialError::BadEdgeLink {
                    simplex: self.name_tuple(e),
                    reason,
                })?;
        }
        for v in self.simplices(0) {
            self.link(v)
                .is_closed_3_manifold()
                .map_err(|reason| SimplicialError::BadVertexLink {
                    simplex: self.name_tuple(v),
                    reason,
                })?;
        }
        Ok(())
    }

    /// Disjoint union; colliding names are prefixed to stay unique.
    pub fn disjoint_union(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let mut names = self.names.clone();
        let mut taken: HashSet<String> = names.iter().cloned().collect();
        let mut other_map: Vec<Vert> = Vec::with_capacity(other.names.len());
        for n in &other.names {
            let mut candidate = n.clone();
            while taken.contains(&candidate) {
                candidate = format!("r_{candidate}");
            }
            taken.insert(candidate.clone());
            other_map.push(names.len() as Vert);
            names.push(candidate);
        }
        let mut facets: Vec<Vec<Vert>> = self.facets.clone();
        for f in &other.facets {
            let mut g: Vec<Vert> = f.iter().map(|&v| other_map[v as usize]).collect();
            g.sort_unstable();
            facets.push(g);
        }
        facets.sort();
        facets.dedup();
        let name_index = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i as Vert))
            .collect();
        Self::from_internal(names, name_index, facets)
    }

    pub fn to_json(&self) -> Value {
        let facets: Vec<Value> = self
            .facets
            .iter()
            .map(|f| Value::Array(f.iter().map(|&v| json!(self.name(v))).collect()))
            .collect();
        json!({
            "vertices": self.names,
            "facets": facets,
        })
    }
}

/// Staircase (ordered simplicial) product.  Facets are the monotone staircase
/// paths through the grid sigma x tau for facets sigma, tau of the factors;
/// the vertex orders of the inputs are their vertex-list orders.
pub fn staircase_product(
    a: &SimplicialComplex,
    b: &SimplicialComplex,
) -> Result<SimplicialComplex, SimplicialError> {
    if !a.is_pure() || !b.is_pure() {
        return Err(SimplicialError::NotPure(
            "staircase product requires pure factors".into(),
        ));
    }
    let mut names: Vec<String> = Vec::with_capacity(a.names.len() * b.names.len());
    for u in &a.names {
        for v in &b.names {
            names.push(format!("{u}|{v}"));
        }
    }
    let nb = b.names.len() as Vert;
    let pair = |u: Vert, v: Vert| -> Vert { u * nb + v };
    let p = a.dim();
    let q = b.dim();
    let mut facet_sets: Vec<Vec<Vert>> = Vec::new();
    // Interleavings: bitmasks over p+q steps with p "advance in a" steps.
    let steps = p + q;
    let mut pattern: Vec<bool> = Vec::with_capacity(steps);
    fn emit(
        sigma: &[Vert],
        tau: &[Vert],
        pattern: &mut Vec<bool>,
        remaining_a: usize,
        remaining_b: usize,
        pair: &dyn Fn(Vert, Vert) -> Vert,
        out: &mut Vec<Vec<Vert>>,
    ) {
        if remaining_a == 0 && remaining_b == 0 {
            let mut i = 0usize;
            let mut j = 0usize;
            let mut facet: Vec<Vert> = vec![pair(sigma[0], tau[0])];
            for &step_a in pattern.iter() {
                if step_a {
                    i += 1;
                } else {
                    j += 1;
                }
                facet.push(pair(sigma[i], tau[j]));
            }
            facet.sort_unstable();
            out.push(facet);
            return;
        }
        if remaining_a > 0 {
            pattern.push(true);
            emit(sigma, tau, pattern, remaining_a - 1, remaining_b, pair, out);
            pattern.pop();
        }
        if remaining_b > 0 {
            pattern.push(false);
            emit(sigma, tau, pattern, remaining_a, remaining_b - 1, pair, out);
            pattern.pop();
        }
    }
    for sigma in a.facets() {
        for tau in b.facets() {
            emit(sigma, tau, &mut pattern, p, q, &pair, &mut facet_sets);
        }
    }
    facet_sets.sort();
    facet_sets.dedup();
    let name_index = names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.clone(), i as Vert))
        .collect();
    Ok(SimplicialComplex::from_internal(
        names, name_index, facet_sets,
    ))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedOrientedComplex {
    pub cx: SimplicialComplex,
    /// rank[v] = position of vertex v in the total order.
    pub rank: Vec<usize>,
    /// Orientation sign of each facet relative to its order-ascending tuple.
    pub facet_sign: Vec<i8>,
}

fn permutation_parity(perm: &[usize]) -> i8 {
    let mut seen = vec![false; perm.len()];
    let mut parity = 0usize;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0usize;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        parity += len - 1;
    }
    if parity % 2 == 0 {
        1
    } else {
        -1
    }
}

impl OrderedOrientedComplex {
    /// Orient via dual-graph propagation.  The lexicographically first facet
    /// of each dual-graph component receives +1 relative to the given order
    /// (default: vertex-list order).
    pub fn orient(
        cx: SimplicialComplex,
        order: Option<Vec<Vert>>,
    ) -> Result<Self, SimplicialError> {
        let rank = Self::rank_from_order(&cx, order)?;
        let signs = Self::propagate_signs(&cx, &rank, &HashMap::new())?;
        Ok(OrderedOrientedComplex {
            cx,
            rank,
            facet_sign: signs,
        })
    }

    fn rank_from_order(
        cx: &SimplicialComplex,
        order: Option<Vec<Vert>>,
    ) -> Result<Vec<usize>, SimplicialError> {
        let n = cx.n_vertices();
        match order {
            None => Ok((0..n).collect()),
            Some(o) => {
                if o.len() != n {
                    return Err(SimplicialError::Parse(format!(
                        "order lists {} of {} vertices",
                        o.len(),
                        n
                    )));
                }
                let mut rank = vec![usize::MAX; n];
                for (pos, &v) in o.iter().enumerate() {
                    if (v as usize) >= n || rank[v as usize] != usize::MAX {
                        return Err(SimplicialError::Parse(
                            "order is not a permutation of the vertices".into(),
                        ));
                    }
                    rank[v as usize] = pos;
                }
                Ok(rank)
            }
        }
    }

    /// Propagate orientation signs across the dual graph, honoring any seeded
    /// signs.  Fails with NonOrientable on an inconsistent cycle.
    fn propagate_signs(
        cx: &SimplicialComplex,
        rank: &[usize],
        seeds: &HashMap<usize, i8>,
    ) -> Result<Vec<i8>, SimplicialError> {
        let nf = cx.facets().len();
        if nf == 0 {
            return Ok(Vec::new());
        }
        let dim = cx.dim();
        // Map codim-1 face -> incident facet indices.
        let mut incidence: HashMap<Vec<Vert>, Vec<usize>> = HashMap::new();
        let mut buf: Vec<Vec<Vert>> = Vec::new();
        for (fi, f) in cx.facets().iter().enumerate() {
            buf.clear();
            subsets_of_size(f, dim, &mut buf);
            for s in &buf {
                incidence.entry(s.clone()).or_default().push(fi);
            }
        }
        for (s, inc) in &incidence {
            if inc.len() > 2 {
                return Err(SimplicialError::NotClosed {
                    simplex: cx.name_tuple(s),
                    count: inc.len(),
                });
            }
        }
        let induced_sign = |fi: usize, s: &[Vert]| -> i8 {
            // Sign (-1)^i where s omits the i-th vertex of the order-sorted facet.
            let mut tuple: Vec<Vert> = cx.facets()[fi].clone();
            tuple.sort_by_key(|&v| rank[v as usize]);
            let omitted = tuple
                .iter()
                .position(|v| !s.contains(v))
                .expect("codim-1 face omits one vertex");
            if omitted % 2 == 0 {
                1
            } else {
                -1
            }
        };
        let mut signs: Vec<i8> = vec![0; nf];
        let mut queue = VecDeque::new();
        for (&fi, &s) in seeds {
            signs[fi] = s;
            queue.push_back(fi);
        }
        let bfs = |signs: &mut Vec<i8>,
                       queue: &mut VecDeque<usize>|
         -> Result<(), SimplicialError> {
            let mut buf: Vec<Vec<Vert>> = Vec::new();
            while let Some(fi) = queue.pop_front() {
                buf.clear();
                subsets_of_size(&cx.facets()[fi], dim, &mut buf);
                for s in &buf {
                    for &fj in &incidence[s] {
                        if fj == fi {
                            continue;
                        }
                        // Opposite induced orientations on the shared face.
                        let need = -signs[fi] * induced_sign(fi, s) * induced_sign(fj, s);
                        if signs[fj] == 0 {
                            signs[fj] = need;
                            queue.push_back(fj);
                        } else if signs[fj] != need {
                            return Err(SimplicialError::NonOrientable);
                        }
                    }
                }
            }
            Ok(())
        };
        // Seeds propagate first so that transported orientations win; any
        // component without a seed is rooted +1 at its first facet.
        bfs(&mut signs, &mut queue)?;
        for root in 0..nf {
            if signs[root] != 0 {
                continue;
            }
            signs[root] = 1;
            queue.push_back(root);
            bfs(&mut signs, &mut queue)?;
        }
        Ok(signs)
    }

    /// Same complex and orientation class, new total order.
    pub fn with_order(&self, order: Vec<Vert>) -> Result<Self, SimplicialError> {
        let new_rank = Self::rank_from_order(&self.cx, Some(order))?;
        let mut signs = Vec::with_capacity(self.facet_sign.len());
        for (fi, f) in self.cx.facets().iter().enumerate() {
            let mut old_tuple = f.clone();
            old_tuple.sort_by_key(|&v| self.rank[v as usize]);
            let mut new_tuple = f.clone();
            new_tuple.sort_by_key(|&v| new_rank[v as usize]);
            // Permutation mapping positions in the new tuple to positions in the old.
            let perm: Vec<usize> = new_tuple
                .iter()
                .map(|v| old_tuple.iter().position(|w| w == v).unwrap())
                .collect();
            signs.push(self.facet_sign[fi] * permutation_parity(&perm));
        }
        Ok(OrderedOrientedComplex {
            cx: self.cx.clone(),
            rank: new_rank,
            facet_sign: signs,
        })
    }

    pub fn reversed(&self) -> Self {
        OrderedOrientedComplex {
            cx: self.cx.clone(),
            rank: self.rank.clone(),
            facet_sign: self.facet_sign.iter().map(|s| -s).collect(),
        }
    }

    /// Vertices of a simplex sorted ascending by the total order.
    pub fn ordered_tuple(&self, simplex: &[Vert]) -> Vec<Vert> {
        let mut t = simplex.to_vec();
        t.sort_by_key(|&v| self.rank[v as usize]);
        t
    }

    /// The sub-simplex of an order-sorted tuple selected by position indices.
    pub fn face(&self, tuple: &[Vert], indices: &[usize]) -> Result<Vec<Vert>, SimplicialError> {
        let mut out = Vec::with_capacity(indices.len());
        for &i in indices {
            if i >= tuple.len() {
                return Err(SimplicialError::IndexOutOfRange);
            }
            out.push(tuple[i]);
        }
        Ok(out)
    }

    /// The sign with which a facet induces orientation on a 3-face:
    /// lambda * (-1)^i where the face omits the i-th vertex in order.
    pub fn relative_sign(&self, facet_idx: usize, kappa: &[Vert]) -> Result<i8, SimplicialError> {
        let facet = &self.cx.facets()[facet_idx];
        if !kappa.iter().all(|v| facet.contains(v)) || kappa.len() + 1 != facet.len() {
            return Err(SimplicialError::NotAFace(self.cx.name_tuple(kappa)));
        }
        let tuple = self.ordered_tuple(facet);
        let omitted = tuple
            .iter()
            .position(|v| !kappa.contains(v))
            .ok_or_else(|| SimplicialError::NotAFace(self.cx.name_tuple(kappa)))?;
        let parity = if omitted % 2 == 0 { 1 } else { -1 };
        Ok(self.facet_sign[facet_idx] * parity)
    }

    pub fn order(&self) -> Vec<Vert> {
        let mut verts: Vec<Vert> = (0..self.cx.n_vertices() as Vert).collect();
        verts.sort_by_key(|&v| self.rank[v as usize]);
        verts
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.cx.to_json();
        let order: Vec<String> = self
            .order()
            .iter()
            .map(|&x| self.cx.name(x).to_string())
            .collect();
        v.as_object_mut()
            .unwrap()
            .insert("order".into(), json!(order));
        v
    }
}

fn json_names(v: &Value, what: &str) -> Result<Vec<String>, SimplicialError> {
    let arr = v
        .as_array()
        .ok_or_else(|| SimplicialError::Parse(format!("{what} must be an array")))?;
    arr.iter()
        .map(|x| match x {
            Value::String(s) => Ok(s.clone()),
            Value::Number(n) => Ok(n.to_string()),
            _ => Err(SimplicialError::Parse(format!(
                "{what} entries must be strings or integers"
            ))),
        })
        .collect()
}

/// Parse a triangulation file: {"vertices": [...], "facets": [[...]], "order": optional}.
pub fn complex_from_json(v: &Value) -> Result<(SimplicialComplex, Option<Vec<Vert>>), SimplicialError> {
    let obj = v
        .as_object()
        .ok_or_else(|| SimplicialError::Parse("triangulation must be a JSON object".into()))?;
    let vertices = json_names(
        obj.get("vertices")
            .ok_or_else(|| SimplicialError::Parse("missing \"vertices\"".into()))?,
        "vertices",
    )?;
    let facets_v = obj
        .get("facets")
        .ok_or_else(|| SimplicialError::Parse("missing \"facets\"".into()))?
        .as_array()
        .ok_or_else(|| SimplicialError::Parse("\"facets\" must be an array".into()))?;
    let mut facets = Vec::with_capacity(facets_v.len());
    for f in facets_v {
        facets.push(json_names(f, "facet")?);
    }
    let cx = SimplicialComplex::build(vertices, &facets)?;
    let order = match obj.get("order") {
        None => None,
        Some(o) => {
            let names = json_names(o, "order")?;
            let mut ids = Vec::with_capacity(names.len());
            for n in &names {
                ids.push(cx.vertex_id(n).ok_or_else(|| {
                    SimplicialError::Parse(format!("order lists unknown vertex {n:?}"))
                })?);
            }
            Some(ids)
        }
    };
    Ok((cx, order))
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn boundary_delta5_validates() {
        let cx = boundary_delta5();
        assert_eq!(cx.facets().len(), 6);
        assert_eq!(cx.simplices(0).len(), 6);
        assert_eq!(cx.simplices(1).len(), 15);
        assert_eq!(cx.simplices(2).len(), 20);
        assert_eq!(cx.simplices(3).len(), 15);
        assert_eq!(cx.euler_characteristic(), 2);
        cx.validate_singular_4manifold().unwrap();
    }

    #[test]
    fn boundary_delta5_orientation_alternates() {
        let oc = OrderedOrientedComplex::orient(boundary_delta5(), None).unwrap();
        // Facet omitting vertex i gets sign (-1)^(i+1): the lexicographically
        // first facet {0,1,2,3,4} omits 5 and is the +1 root.
        for (fi, f) in oc.cx.facets().iter().enumerate() {
            let omitted = (0..6u32).find(|v| !f.contains(v)).unwrap();
            let expect = if omitted % 2 == 1 { 1 } else { -1 };
            assert_eq!(oc.facet_sign[fi], expect, "facet omitting {omitted}");
        }
    }

    #[test]
    fn closure_sum_of_induced_orientations_vanishes() {
        let oc = OrderedOrientedComplex::orient(boundary_delta5(), None).unwrap();
        for kappa in oc.cx.simplices(3) {
            let mut total = 0i32;
            for fi in oc.cx.star_facets(kappa) {
                total += oc.relative_sign(fi, kappa).unwrap() as i32;
            }
            assert_eq!(total, 0, "3-simplex {kappa:?}");
        }
    }

    #[test]
    fn relative_sign_formula() {
        let oc = OrderedOrientedComplex::orient(boundary_delta5(), None).unwrap();
        // Facet {0,1,2,3,4} has sign +1; its faces alternate starting at +1.
        let fi = oc
            .cx
            .facets()
            .iter()
            .position(|f| f == &vec![0, 1, 2, 3, 4])
            .unwrap();
        assert_eq!(oc.facet_sign[fi], 1);
        assert_eq!(oc.relative_sign(fi, &[1, 2, 3, 4]).unwrap(), 1);
        assert_eq!(oc.relative_sign(fi, &[0, 1, 2, 4]).unwrap(), -1);
        assert_eq!(oc.relative_sign(fi, &[0, 1, 2, 3]).unwrap(), 1);
        assert!(oc.relative_sign(fi, &[0, 1, 2, 5]).is_err());
    }

    #[test]
    fn face_selection() {
        let oc = OrderedOrientedComplex::orient(boundary_delta5(), None).unwrap();
        let tau = vec![2u32, 5, 7, 9, 11];
        // Indices address positions in the ordered tuple.
        assert_eq!(oc.face(&[2, 5, 7, 9, 11], &[0, 2, 4]).unwrap(), vec![2, 7, 11]);
        assert_eq!(oc.face(&tau, &[0, 1, 2, 3, 4]).unwrap(), tau);
        assert_eq!(oc.face(&[3, 9], &[1]).unwrap(), vec![9]);
        assert!(oc.face(&[3, 9], &[2]).is_err());
    }

    #[test]
    fn reordering_preserves_orientation_class() {
        let oc = OrderedOrientedComplex::orient(boundary_delta5(), None).unwrap();
        let reordered = oc.with_order(vec![5, 3, 1, 0, 2, 4]).unwrap();
        // The orientation class is preserved: for every 3-simplex the two
        // incident facets still induce opposite signs.
        for kappa in reordered.cx.simplices(3) {
            let mut total = 0i32;
            for fi in reordered.cx.star_facets(kappa) {
                total += reordered.relative_sign(fi, kappa).unwrap() as i32;
            }
            assert_eq!(total, 0);
        }
        // And going back recovers the original signs.
        let back = reordered.with_order(vec![0, 1, 2, 3, 4, 5]).unwrap();
        assert_eq!(back.facet_sign, oc.facet_sign);
    }

    #[test]
    fn projective_plane_is_not_orientable() {
        let names: Vec<String> = (1..=6).map(|i| i.to_string()).collect();
        let facets: Vec<Vec<String>> = [
            [1, 2, 3], [1, 3, 4], [1, 4, 5], [1, 5, 6], [1, 6, 2],
            [2, 3, 5], [3, 4, 6], [4, 5, 2], [5, 6, 3], [6, 2, 4],
        ]
        .iter()
        .map(|f| f.iter().map(|v| v.to_string()).collect())
        .collect();
        let cx = SimplicialComplex::build(names, &facets).unwrap();
        assert_eq!(cx.euler_characteristic(), 1);
        assert_eq!(
            OrderedOrientedComplex::orient(cx, None).unwrap_err(),
            SimplicialError::NonOrientable
        );
    }

    #[test]
    fn torus_staircase_counts() {
        let c3 = circle(3);
        let torus = staircase_product(&c3, &c3).unwrap();
        assert_eq!(torus.simplices(0).len(), 9);
        assert_eq!(torus.simplices(2).len(), 18);
        assert_eq!(torus.euler_characteristic(), 0);
        torus.closed_check().unwrap();
    }

    #[test]
    fn point_times_complex_is_isomorphic_copy() {
        let pt = SimplicialComplex::build(vec!["p".into()], &[vec!["p".into()]]).unwrap();
        let c4 = circle(4);
        let prod = staircase_product(&pt, &c4).unwrap();
        assert_eq!(prod.simplices(0).len(), 4);
        assert_eq!(prod.simplices(1).len(), 4);
        assert_eq!(prod.euler_characteristic(), c4.euler_characteristic());
    }

    #[test]
    fn s1_x_s3_staircase_validates() {
        let cx = s1xs3_staircase();
        assert_eq!(cx.simplices(0).len(), 15);
        assert_eq!(cx.facets().len(), 60);
        assert_eq!(cx.simplices(1).len(), 75);
        assert_eq!(cx.euler_characteristic(), 0);
        cx.validate_singular_4manifold().unwrap();
        OrderedOrientedComplex::orient(cx, None).unwrap();
    }

    #[test]
    fn link_duality() {
        let cx = boundary_delta5();
        // s in link(t) iff t in link(s), spot-checked across dimensions.
        let t = vec![0u32, 1];
        let link_t = cx.link(&t);
        for s in link_t.simplices(1) {
            assert!(cx.link(s).contains(&t));
        }
    }

    #[test]
    fn disjoint_union_validates_and_counts_add() {
        let a = boundary_delta5();
        let b = boundary_delta5();
        let u = a.disjoint_union(&b);
        assert_eq!(u.facets().len(), 12);
        assert_eq!(u.simplices(0).len(), 12);
        u.validate_singular_4manifold().unwrap();
        OrderedOrientedComplex::orient(u, None).unwrap();
    }

    #[test]
    fn json_round_trip() {
        let cx = boundary_delta5();
        let j = cx.to_json();
        let (back, order) = complex_from_json(&j).unwrap();
        assert_eq!(back, cx);
        assert!(order.is_none());
        let oc = OrderedOrientedComplex::orient(cx, None).unwrap();
        let j2 = oc.to_json();
        let (back2, order2) = complex_from_json(&j2).unwrap();
        assert_eq!(back2, oc.cx);
        assert_eq!(order2, Some(vec![0, 1, 2, 3, 4, 5]));
    }

    #[test]
    fn broken_inputs_are_rejected() {
        // Open manifold: a single 4-simplex.
        let names: Vec<String> = (0..5).map(|i| i.to_string()).collect();
        let facets = vec![names.clone()];
        let cx = SimplicialComplex::build(names, &facets).unwrap();
        assert!(matches!(
            cx.validate_singular_4manifold(),
            Err(SimplicialError::NotClosed { .. })
        ));
        // Unknown facet vertex.
        assert!(SimplicialComplex::build(
            vec!["a".into()],
            &[vec!["a".into(), "b".into()]]
        )
        .is_err());
        // Duplicate vertex name.
        assert!(SimplicialComplex::build(vec!["a".into(), "a".into()], &[]).is_err());
    }
}
