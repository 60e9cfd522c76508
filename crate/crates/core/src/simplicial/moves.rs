//! Bistellar (Pachner) moves on closed 4-complexes.
//!
//! A (p,q) move (p+q = 6) replaces a subcomplex isomorphic to p facets of
//! the boundary of the 5-simplex by the complementary q facets glued along
//! the same boundary.  Sites are recognized structurally: the isomorphism
//! with the model pattern is pinned by a distinguished "pivot" simplex which
//! is recorded for reproducibility.

use super::{OrderedOrientedComplex, SimplicialError, Vert};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde_json::{json, Value};
use std::collections::HashMap;

/// Identifier of the seeded RNG stream used everywhere randomness is needed.
pub const RNG_ALGORITHM: &str = "chacha12";

pub const MOVE_KINDS: [(u8, u8); 5] = [(1, 5), (2, 4), (3, 3), (4, 2), (5, 1)];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BistellarMove {
    pub kind: (u8, u8),
    /// The p facets to remove, as vertex-name tuples.
    pub site: Vec<Vec<String>>,
    /// Name for the created vertex; required for (1,5), ignored otherwise.
    pub fresh_vertex: Option<String>,
}

/// Applied-move record; together with the pivot this determines the pattern
/// isomorphism that was used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveRecord {
    pub mv: BistellarMove,
    pub removed: Vec<Vec<String>>,
    pub added: Vec<Vec<String>>,
    /// (1,5): the split facet; (2,4): the shared tetrahedron; (3,3): the
    /// removed triangle; (4,2): the removed interior edge; (5,1): the removed
    /// vertex.
    pub pivot: Vec<String>,
}

impl BistellarMove {
    pub fn to_json(&self) -> Value {
        json!({
            "kind": [self.kind.0, self.kind.1],
            "site": self.site,
            "fresh_vertex": self.fresh_vertex,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, SimplicialError> {
        let obj = v
            .as_object()
            .ok_or_else(|| SimplicialError::Parse("move must be an object".into()))?;
        let kind_v = obj
            .get("kind")
            .and_then(|k| k.as_array())
            .ok_or_else(|| SimplicialError::Parse("move.kind must be [p, q]".into()))?;
        if kind_v.len() != 2 {
            return Err(SimplicialError::Parse("move.kind must be [p, q]".into()));
        }
        let p = kind_v[0].as_u64().unwrap_or(0) as u8;
        let q = kind_v[1].as_u64().unwrap_or(0) as u8;
        let site_v = obj
            .get("site")
            .and_then(|s| s.as_array())
            .ok_or_else(|| SimplicialError::Parse("move.site must be an array".into()))?;
        let mut site = Vec::with_capacity(site_v.len());
        for f in site_v {
            site.push(super::json_names(f, "site facet")?);
        }
        let fresh_vertex = match obj.get("fresh_vertex") {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) => Some(s.clone()),
            Some(Value::Number(n)) => Some(n.to_string()),
            _ => {
                return Err(SimplicialError::Parse(
                    "move.fresh_vertex must be a string".into(),
                ))
            }
        };
        Ok(BistellarMove {
            kind: (p, q),
            site,
            fresh_vertex,
        })
    }
}

impl MoveRecord {
    pub fn to_json(&self) -> Value {
        json!({
            "move": self.mv.to_json(),
            "removed": self.removed,
            "added": self.added,
            "pivot": self.pivot,
        })
    }
}

fn sorted_ids(
    oc: &OrderedOrientedComplex,
    names: &[String],
) -> Result<Vec<Vert>, SimplicialError> {
    let mut ids = Vec::with_capacity(names.len());
    for n in names {
        ids.push(oc.cx.vertex_id(n).ok_or_else(|| {
            SimplicialError::InvalidSite(format!("unknown vertex {n:?} in site"))
        })?);
    }
    ids.sort_unstable();
    ids.dedup();
    Ok(ids)
}

fn intersect_all(sets: &[Vec<Vert>]) -> Vec<Vert> {
    let mut it = sets.iter();
    let mut acc: Vec<Vert> = it.next().cloned().unwrap_or_default();
    for s in it {
        acc.retain(|v| s.binary_search(v).is_ok());
    }
    acc
}

fn union_all(sets: &[Vec<Vert>]) -> Vec<Vert> {
    let mut acc: Vec<Vert> = sets.iter().flatten().copied().collect();
    acc.sort_unstable();
    acc.dedup();
    acc
}

/// The facets to add for a recognized site, plus the pivot simplex.
/// Everything is id-based relative to the input complex; the fresh (1,5)
/// vertex is represented by `u32::MAX` and patched by the caller.
fn plan_replacement(
    oc: &OrderedOrientedComplex,
    kind: (u8, u8),
    site_ids: &[Vec<Vert>],
) -> Result<(Vec<Vec<Vert>>, Vec<Vert>), SimplicialError> {
    let cx = &oc.cx;
    for f in site_ids {
        if !cx.facets().contains(f) {
            return Err(SimplicialError::InvalidSite(format!(
                "site facet {:?} is not a facet of the complex",
                cx.name_tuple(f)
            )));
        }
    }
    if site_ids.len() != kind.0 as usize {
        return Err(SimplicialError::InvalidSite(format!(
            "a ({},{}) move needs {} distinct site facets, got {}",
            kind.0,
            kind.1,
            kind.0,
            site_ids.len()
        )));
    }
    let inter = intersect_all(site_ids);
    let uni = union_all(site_ids);
    let star_matches = |pivot: &[Vert]| -> bool {
        let mut star: Vec<Vec<Vert>> = cx
            .star_facets(pivot)
            .into_iter()
            .map(|i| cx.facets()[i].clone())
            .collect();
        star.sort();
        let mut s = site_ids.to_vec();
        s.sort();
        star == s
    };
    match kind {
        (1, 5) => {
            let facet = &site_ids[0];
            let fresh = u32::MAX;
            let mut added = Vec::with_capacity(5);
            for omit in 0..5 {
                let mut f: Vec<Vert> = facet
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != omit)
                    .map(|(_, &v)| v)
                    .collect();
                f.push(fresh);
                added.push(f);
            }
            Ok((added, facet.clone()))
        }
        (2, 4) => {
            if inter.len() != 4 {
                return Err(SimplicialError::InvalidSite(
                    "the two site facets must share a tetrahedron".into(),
                ));
            }
            let outers: Vec<Vert> = uni
                .iter()
                .copied()
                .filter(|v| inter.binary_search(v).is_err())
                .collect();
            let mut edge = outers.clone();
            edge.sort_unstable();
            if cx.contains(&edge) {
                return Err(SimplicialError::InvalidSite(format!(
                    "interior edge {:?} already exists",
                    cx.name_tuple(&edge)
                )));
            }
            let mut added = Vec::with_capacity(4);
            for omit in 0..4 {
                let mut f: Vec<Vert> = inter
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != omit)
                    .map(|(_, &v)| v)
                    .collect();
                f.extend_from_slice(&edge);
                f.sort_unstable();
                added.push(f);
            }
            Ok((added, inter))
        }
        (3, 3) => {
            if inter.len() != 3 || uni.len() != 6 {
                return Err(SimplicialError::InvalidSite(
                    "the three site facets must share a triangle and span 6 vertices".into(),
                ));
            }
            if !star_matches(&inter) {
                return Err(SimplicialError::InvalidSite(format!(
                    "site is not the full star of triangle {:?}",
                    cx.name_tuple(&inter)
                )));
            }
            let opposite: Vec<Vert> = uni
                .iter()
                .copied()
                .filter(|v| inter.binary_search(v).is_err())
                .collect();
            if cx.contains(&opposite) {
                return Err(SimplicialError::InvalidSite(format!(
                    "interior triangle {:?} already exists",
                    cx.name_tuple(&opposite)
                )));
            }
            let mut added = Vec::with_capacity(3);
            for omit in 0..3 {
                let mut f = opposite.clone();
                f.extend(inter.iter().enumerate().filter(|(i, _)| *i != omit).map(|(_, &v)| v));
                f.sort_unstable();
                added.push(f);
            }
            Ok((added, inter))
        }
        (4, 2) => {
            if inter.len() != 2 || uni.len() != 6 {
                return Err(SimplicialError::InvalidSite(
                    "the four site facets must share an edge and span 6 vertices".into(),
                ));
            }
            if !star_matches(&inter) {
                return Err(SimplicialError::InvalidSite(format!(
                    "site is not the full star of edge {:?}",
                    cx.name_tuple(&inter)
                )));
            }
            let cycle: Vec<Vert> = uni
                .iter()
                .copied()
                .filter(|v| inter.binary_search(v).is_err())
                .collect();
            if cx.contains(&cycle) {
                return Err(SimplicialError::InvalidSite(format!(
                    "interior tetrahedron {:?} already exists",
                    cx.name_tuple(&cycle)
                )));
            }
            let mut added = Vec::with_capacity(2);
            for &e in &inter {
                let mut f = cycle.clone();
                f.push(e);
                f.sort_unstable();
                added.push(f);
            }
            Ok((added, inter))
        }
        (5, 1) => {
            if inter.len() != 1 || uni.len() != 6 {
                return Err(SimplicialError::InvalidSite(
                    "the five site facets must share a vertex and span 6 vertices".into(),
                ));
            }
            if !star_matches(&inter) {
                return Err(SimplicialError::InvalidSite(format!(
                    "site is not the full star of vertex {:?}",
                    cx.name(inter[0])
                )));
            }
            let rest: Vec<Vert> = uni
                .iter()
                .copied()
                .filter(|&v| v != inter[0])
                .collect();
            if cx.contains(&rest) {
                return Err(SimplicialError::InvalidSite(format!(
                    "replacement facet {:?} already exists",
                    cx.name_tuple(&rest)
                )));
            }
            Ok((vec![rest], inter))
        }
        _ => Err(SimplicialError::InvalidSite(format!(
            "unknown move kind ({},{})",
            kind.0, kind.1
        ))),
    }
}

/// Apply a bistellar move; returns the new complex and the applied record.
pub fn apply_bistellar(
    oc: &OrderedOrientedComplex,
    mv: &BistellarMove,
) -> Result<(OrderedOrientedComplex, MoveRecord), SimplicialError> {
    let cx = &oc.cx;
    let mut site_ids: Vec<Vec<Vert>> = Vec::with_capacity(mv.site.len());
    for f in &mv.site {
        site_ids.push(sorted_ids(oc, f)?);
    }
    site_ids.sort();
    site_ids.dedup();
    let (added_ids, pivot_ids) = plan_replacement(oc, mv.kind, &site_ids)?;

    // Assemble the new complex over vertex names.
    let mut names: Vec<String> = Vec::new();
    let old_order = oc.order();
    for &v in &old_order {
        if mv.kind == (5, 1) && v == pivot_ids[0] {
            continue;
        }
        names.push(cx.name(v).to_string());
    }
    let fresh_name = if mv.kind == (1, 5) {
        let w = mv
            .fresh_vertex
            .clone()
            .ok_or_else(|| SimplicialError::InvalidSite("(1,5) requires fresh_vertex".into()))?;
        if cx.vertex_id(&w).is_some() {
            return Err(SimplicialError::NameCollision(w));
        }
        names.push(w.clone());
        Some(w)
    } else {
        None
    };
    let name_of = |v: Vert| -> String {
        if v == u32::MAX {
            fresh_name.clone().expect("fresh vertex name")
        } else {
            cx.name(v).to_string()
        }
    };
    let removed_names: Vec<Vec<String>> = site_ids.iter().map(|f| cx.name_tuple(f)).collect();
    let added_names: Vec<Vec<String>> = added_ids
        .iter()
        .map(|f| f.iter().map(|&v| name_of(v)).collect())
        .collect();
    let mut facet_names: Vec<Vec<String>> = cx
        .facets()
        .iter()
        .filter(|f| !site_ids.contains(f))
        .map(|f| cx.name_tuple(f))
        .collect();
    for (i, f) in added_names.iter().enumerate() {
        // The replacement facets must be fresh; a collision would silently
        // merge and break closedness.
        if cx.contains(&added_ids[i]) && !added_ids[i].contains(&u32::MAX) {
            return Err(SimplicialError::InvalidSite(format!(
                "replacement facet {f:?} already exists"
            )));
        }
        facet_names.push(f.clone());
    }
    let new_cx = super::SimplicialComplex::build(names.clone(), &facet_names)?;
    let order: Vec<Vert> = names
        .iter()
        .map(|n| new_cx.vertex_id(n).expect("vertex survives"))
        .collect();
    let rank = {
        let mut r = vec![0usize; new_cx.n_vertices()];
        for (pos, &v) in order.iter().enumerate() {
            r[v as usize] = pos;
        }
        r
    };
    // Transport orientation: seed surviving facets with their old signs, then
    // propagate across the dual graph.
    let mut old_sign: HashMap<Vec<String>, i8> = HashMap::new();
    for (fi, f) in cx.facets().iter().enumerate() {
        old_sign.insert(cx.name_tuple(f), oc.facet_sign[fi]);
    }
    let mut seeds: HashMap<usize, i8> = HashMap::new();
    for (fi, f) in new_cx.facets().iter().enumerate() {
        if let Some(&s) = old_sign.get(&new_cx.name_tuple(f)) {
            seeds.insert(fi, s);
        }
    }
    let signs = OrderedOrientedComplex::propagate_signs(&new_cx, &rank, &seeds)?;
    let record = MoveRecord {
        mv: mv.clone(),
        removed: removed_names,
        added: added_names,
        pivot: cx.name_tuple(&pivot_ids),
    };
    Ok((
        OrderedOrientedComplex {
            cx: new_cx,
            rank,
            facet_sign: signs,
        },
        record,
    ))
}

/// All valid sites for a move kind, in canonical (pivot-lexicographic) order.
/// (1,5) moves are returned with `fresh_vertex: None`; callers supply a name.
pub fn enumerate_sites(oc: &OrderedOrientedComplex, kind: (u8, u8)) -> Vec<BistellarMove> {
    let cx = &oc.cx;
    let star_names = |pivot: &[Vert]| -> Vec<Vec<String>> {
        cx.star_facets(pivot)
            .into_iter()
            .map(|i| cx.name_tuple(&cx.facets()[i]))
            .collect()
    };
    let mut out = Vec::new();
    match kind {
        (1, 5) => {
            for f in cx.facets() {
                out.push(BistellarMove {
                    kind,
                    site: vec![cx.name_tuple(f)],
                    fresh_vertex: None,
                });
            }
        }
        (2, 4) => {
            for tet in cx.simplices(3) {
                let star = cx.star_facets(tet);
                if star.len() != 2 {
                    continue;
                }
                let sets: Vec<Vec<Vert>> =
                    star.iter().map(|&i| cx.facets()[i].clone()).collect();
                let uni = union_all(&sets);
                let mut edge: Vec<Vert> = uni
                    .iter()
                    .copied()
                    .filter(|v| tet.binary_search(v).is_err())
                    .collect();
                edge.sort_unstable();
                if edge.len() == 2 && !cx.contains(&edge) {
                    out.push(BistellarMove {
                        kind,
                        site: sets.iter().map(|f| cx.name_tuple(f)).collect(),
                        fresh_vertex: None,
                    });
                }
            }
        }
        (3, 3) => {
            for tri in cx.simplices(2) {
                let star = cx.star_facets(tri);
                if star.len() != 3 {
                    continue;
                }
                let sets: Vec<Vec<Vert>> =
                    star.iter().map(|&i| cx.facets()[i].clone()).collect();
                let uni = union_all(&sets);
                if uni.len() != 6 {
                    continue;
                }
                let opp: Vec<Vert> = uni
                    .iter()
                    .copied()
                    .filter(|v| tri.binary_search(v).is_err())
                    .collect();
                if !cx.contains(&opp) {
                    out.push(BistellarMove {
                        kind,
                        site: star_names(tri),
                        fresh_vertex: None,
                    });
                }
            }
        }
        (4, 2) => {
            for edge in cx.simplices(1) {
                let star = cx.star_facets(edge);
                if star.len() != 4 {
                    continue;
                }
                let sets: Vec<Vec<Vert>> =
                    star.iter().map(|&i| cx.facets()[i].clone()).collect();
                let uni = union_all(&sets);
                if uni.len() != 6 {
                    continue;
                }
                let cycle: Vec<Vert> = uni
                    .iter()
                    .copied()
                    .filter(|v| edge.binary_search(v).is_err())
                    .collect();
                if !cx.contains(&cycle) {
                    out.push(BistellarMove {
                        kind,
                        site: star_names(edge),
                        fresh_vertex: None,
                    });
                }
            }
        }
        (5, 1) => {
            for v in cx.simplices(0) {
                let star = cx.star_facets(v);
                if star.len() != 5 {
                    continue;
                }
                let sets: Vec<Vec<Vert>> =
                    star.iter().map(|&i| cx.facets()[i].clone()).collect();
                let uni = union_all(&sets);
                if uni.len() != 6 {
                    continue;
                }
                let rest: Vec<Vert> = uni.iter().copied().filter(|x| x != &v[0]).collect();
                if !cx.contains(&rest) {
                    out.push(BistellarMove {
                        kind,
                        site: star_names(v),
                        fresh_vertex: None,
                    });
                }
            }
        }
        _ => {}
    }
    out
}

pub struct WalkOptions {
    pub count: usize,
    pub seed: u64,
    /// Restrict the walk to one move kind (used by tests).
    pub forced_kind: Option<(u8, u8)>,
    /// Vertex budget: (1,5) moves are suppressed at or above this many
    /// vertices so state spaces stay tractable.
    pub max_vertices: Option<usize>,
}

/// Apply `count` seeded random bistellar moves.  Deterministic for a fixed
/// seed; every prefix of the walk is a valid closed 4-manifold.
pub fn random_move_walk(
    oc: &OrderedOrientedComplex,
    opts: &WalkOptions,
) -> Result<(OrderedOrientedComplex, Vec<MoveRecord>), SimplicialError> {
    let mut rng = ChaCha12Rng::seed_from_u64(opts.seed);
    let max_vertices = opts.max_vertices.unwrap_or(oc.cx.n_vertices() + 4);
    let mut current = oc.clone();
    let mut log = Vec::with_capacity(opts.count);
    let mut fresh_counter = 0usize;
    for _ in 0..opts.count {
        let mut options: Vec<(u8, u8)> = Vec::new();
        let mut sites: HashMap<(u8, u8), Vec<BistellarMove>> = HashMap::new();
        for kind in MOVE_KINDS {
            if let Some(forced) = opts.forced_kind {
                if kind != forced {
                    continue;
                }
            }
            if kind == (1, 5) && current.cx.n_vertices() >= max_vertices {
                continue;
            }
            let s = enumerate_sites(&current, kind);
            if !s.is_empty() {
                options.push(kind);
                sites.insert(kind, s);
            }
        }
        if options.is_empty() {
            return Err(SimplicialError::NoValidMove);
        }
        let kind = options[rng.gen_range(0..options.len())];
        let list = &sites[&kind];
        let mut mv = list[rng.gen_range(0..list.len())].clone();
        if kind == (1, 5) {
            let name = loop {
                let candidate = format!("w{fresh_counter}");
                fresh_counter += 1;
                if current.cx.vertex_id(&candidate).is_none() {
                    break candidate;
                }
            };
            mv.fresh_vertex = Some(name);
        }
        let (next, record) = apply_bistellar(&current, &mv)?;
        current = next;
        log.push(record);
    }
    Ok((current, log))
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::boundary_delta5;
    use super::super::{OrderedOrientedComplex, SimplicialComplex};
    use super::*;

    fn oriented(cx: SimplicialComplex) -> OrderedOrientedComplex {
        OrderedOrientedComplex::orient(cx, None).unwrap()
    }

    fn move_15(facet_names: Vec<String>, w: &str) -> BistellarMove {
        BistellarMove {
            kind: (1, 5),
            site: vec![facet_names],
            fresh_vertex: Some(w.to_string()),
        }
    }

    #[test]
    fn one_five_on_boundary_delta5() {
        let oc = oriented(boundary_delta5());
        let site: Vec<String> = (0..5).map(|i| i.to_string()).collect();
        let (next, record) = apply_bistellar(&oc, &move_15(site.clone(), "6")).unwrap();
        assert_eq!(next.cx.n_vertices(), 7);
        assert_eq!(next.cx.facets().len(), 10);
        assert_eq!(next.cx.euler_characteristic(), 2);
        next.cx.validate_singular_4manifold().unwrap();
        assert_eq!(record.pivot, site);
        assert_eq!(record.added.len(), 5);
        // Interior created counts: 1 vertex, 5 edges, 10 triangles, 10 tets.
        let w = next.cx.vertex_id("6").unwrap();
        let contains_w = |d: usize| {
            next.cx
                .simplices(d)
                .iter()
                .filter(|s| s.contains(&w))
                .count()
        };
        assert_eq!(contains_w(0), 1);
        assert_eq!(contains_w(1), 5);
        assert_eq!(contains_w(2), 10);
        assert_eq!(contains_w(3), 10);
        assert_eq!(contains_w(4), 5);
        // New vertex is last in the order.
        assert_eq!(next.order().last().copied(), Some(w));
        // Orientation closure still holds.
        for kappa in next.cx.simplices(3) {
            let total: i32 = next
                .cx
                .star_facets(kappa)
                .into_iter()
                .map(|fi| next.relative_sign(fi, kappa).unwrap() as i32)
                .sum();
            assert_eq!(total, 0);
        }
    }

    #[test]
    fn fresh_vertex_collision_is_rejected() {
        let oc = oriented(boundary_delta5());
        let site: Vec<String> = (0..5).map(|i| i.to_string()).collect();
        let err = apply_bistellar(&oc, &move_15(site, "3")).unwrap_err();
        assert!(matches!(err, SimplicialError::NameCollision(_)));
    }

    #[test]
    fn no_shrinking_or_exchange_moves_exist_on_boundary_delta5() {
        // All 15 edges, 20 triangles, and 15 tetrahedra of the 6 vertices are
        // present, so every non-(1,5) move fails its freshness condition.
        let oc = oriented(boundary_delta5());
        assert_eq!(enumerate_sites(&oc, (1, 5)).len(), 6);
        for kind in [(2, 4), (3, 3), (4, 2), (5, 1)] {
            assert!(enumerate_sites(&oc, kind).is_empty(), "{kind:?}");
        }
        let res = random_move_walk(
            &oc,
            &WalkOptions {
                count: 1,
                seed: 0,
                forced_kind: Some((3, 3)),
                max_vertices: None,
            },
        );
        assert_eq!(res.unwrap_err(), SimplicialError::NoValidMove);
    }

    /// Join of a hollow triangle with the boundary of a tetrahedron: a
    /// 7-vertex 4-sphere admitting (3,3) moves.
    fn cycle_join_tetra() -> SimplicialComplex {
        let cycle = ["a", "b", "c"];
        let names: Vec<String> = cycle
            .iter()
            .map(|s| s.to_string())
            .chain((0..4).map(|i| format!("t{i}")))
            .collect();
        let mut facets = Vec::new();
        for i in 0..3 {
            let e = [cycle[i], cycle[(i + 1) % 3]];
            for omit in 0..4 {
                let mut f: Vec<String> = e.iter().map(|s| s.to_string()).collect();
                for j in 0..4 {
                    if j != omit {
                        f.push(format!("t{j}"));
                    }
                }
                facets.push(f);
            }
        }
        SimplicialComplex::build(names, &facets).unwrap()
    }

    #[test]
    fn three_three_move_round_trip() {
        let oc = oriented(cycle_join_tetra());
        oc.cx.validate_singular_4manifold().unwrap();
        let sites = enumerate_sites(&oc, (3, 3));
        // One (3,3) site per triangle of the tetrahedron side.
        assert_eq!(sites.len(), 4);
        let (next, record) = apply_bistellar(&oc, &sites[0]).unwrap();
        assert_eq!(next.cx.facets().len(), 12);
        assert_eq!(next.cx.euler_characteristic(), 2);
        next.cx.validate_singular_4manifold().unwrap();
        assert_eq!(record.removed.len(), 3);
        assert_eq!(record.added.len(), 3);
        // The inverse (3,3) at the created triangle restores the complex.
        let back_site: Vec<Vec<String>> = record
            .added
            .clone();
        let inverse = BistellarMove {
            kind: (3, 3),
            site: back_site,
            fresh_vertex: None,
        };
        let (orig, _) = apply_bistellar(&next, &inverse).unwrap();
        assert_eq!(orig.cx, oc.cx);
        assert_eq!(orig.facet_sign, oc.facet_sign);
    }

    #[test]
    fn two_four_then_inverse_restores_complex() {
        let oc = oriented(boundary_delta5());
        let site: Vec<String> = (0..5).map(|i| i.to_string()).collect();
        let (k1, _) = apply_bistellar(&oc, &move_15(site, "6")).unwrap();
        let sites24 = enumerate_sites(&k1, (2, 4));
        assert!(!sites24.is_empty());
        let (k2, record) = apply_bistellar(&k1, &sites24[0]).unwrap();
        k2.cx.validate_singular_4manifold().unwrap();
        // Created interior: 1 edge, 4 triangles, 6 tetrahedra, 4 facets.
        let pivot = &record.pivot; // shared tetrahedron
        assert_eq!(pivot.len(), 4);
        let diff =
            |d: usize| k2.cx.simplices(d).len() as i64 - k1.cx.simplices(d).len() as i64;
        assert_eq!(diff(0), 0);
        assert_eq!(diff(1), 1);
        assert_eq!(diff(2), 4);
        assert_eq!(diff(3), 5); // 6 created, 1 removed
        assert_eq!(diff(4), 2); // 4 created, 2 removed
        assert_eq!(k2.cx.euler_characteristic(), k1.cx.euler_characteristic());
        // Invert at the created site: the (4,2) site is the star of the new edge.
        let sites42 = enumerate_sites(&k2, (4, 2));
        let inverse = sites42
            .iter()
            .find(|m| m.site == record.added || {
                let mut a = m.site.clone();
                let mut b = record.added.clone();
                a.sort();
                b.sort();
                a == b
            })
            .expect("inverse site");
        let (k3, _) = apply_bistellar(&k2, inverse).unwrap();
        assert_eq!(k3.cx, k1.cx);
        assert_eq!(k3.facet_sign, k1.facet_sign);
    }

    #[test]
    fn five_one_inverts_one_five() {
        let oc = oriented(boundary_delta5());
        let site: Vec<String> = (0..5).map(|i| i.to_string()).collect();
        let (k1, record) = apply_bistellar(&oc, &move_15(site, "6")).unwrap();
        let sites51 = enumerate_sites(&k1, (5, 1));
        let inverse = sites51
            .iter()
            .find(|m| {
                let mut a = m.site.clone();
                let mut b = record.added.clone();
                a.sort();
                b.sort();
                a == b
            })
            .expect("inverse site");
        let (k0, rec) = apply_bistellar(&k1, inverse).unwrap();
        assert_eq!(rec.pivot, vec!["6".to_string()]);
        assert_eq!(k0.cx, oc.cx);
        assert_eq!(k0.facet_sign, oc.facet_sign);
    }

    #[test]
    fn walk_is_deterministic_and_stays_a_manifold() {
        let oc = oriented(boundary_delta5());
        let opts = WalkOptions {
            count: 20,
            seed: 11,
            forced_kind: None,
            max_vertices: None,
        };
        let (a, log_a) = random_move_walk(&oc, &opts).unwrap();
        let (b, log_b) = random_move_walk(&oc, &opts).unwrap();
        assert_eq!(a, b);
        assert_eq!(log_a.len(), 20);
        assert_eq!(log_a, log_b);
        a.cx.validate_singular_4manifold().unwrap();
        assert_eq!(a.cx.euler_characteristic(), 2);
        assert!(a.cx.n_vertices() <= 10);
    }

    #[test]
    fn zero_length_walk_is_identity() {
        let oc = oriented(boundary_delta5());
        let (same, log) = random_move_walk(
            &oc,
            &WalkOptions {
                count: 0,
                seed: 5,
                forced_kind: None,
                max_vertices: None,
            },
        )
        .unwrap();
        assert_eq!(same, oc);
        assert!(log.is_empty());
    }

    #[test]
    fn forced_one_five_walk() {
        let oc = oriented(boundary_delta5());
        let (k, log) = random_move_walk(
            &oc,
            &WalkOptions {
                count: 1,
                seed: 3,
                forced_kind: Some((1, 5)),
                max_vertices: None,
            },
        )
        .unwrap();
        assert_eq!(k.cx.facets().len(), 10);
        assert_eq!(log[0].mv.kind, (1, 5));
        assert_eq!(log[0].mv.fresh_vertex.as_deref(), Some("w0"));
    }

    #[test]
    fn move_json_round_trip() {
        let mv = BistellarMove {
            kind: (2, 4),
            site: vec![
                vec!["0".into(), "1".into(), "2".into(), "3".into(), "4".into()],
                vec!["0".into(), "1".into(), "2".into(), "3".into(), "5".into()],
            ],
            fresh_vertex: None,
        };
        assert_eq!(BistellarMove::from_json(&mv.to_json()).unwrap(), mv);
    }

    #[test]
    fn stale_triangle_site_is_rejected() {
        // In the 5-simplex boundary the triple of facets around any triangle
        // is a (3,3)-shaped star, but the opposite triangle always exists, so
        // the replacement would collide with existing simplices.
        let oc = oriented(boundary_delta5());
        let bad = BistellarMove {
            kind: (3, 3),
            site: vec![
                (0..5).map(|i| i.to_string()).collect(),
                (1..6).map(|i| i.to_string()).collect(),
                vec!["0".into(), "1".into(), "2".into(), "3".into(), "5".into()],
            ],
            fresh_vertex: None,
        };
        assert!(matches!(
            apply_bistellar(&oc, &bad),
            Err(SimplicialError::InvalidSite(_))
        ));
    }
}
