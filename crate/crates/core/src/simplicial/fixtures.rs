//! Built-in triangulations: the 4-sphere as the boundary of the 5-simplex,
//! the 9-vertex complex projective plane, and S1 x S3 as a staircase product.

use super::{staircase_product, SimplicialComplex};
use std::sync::OnceLock;

fn from_u32_facets(n_vertices: u32, facets: &[Vec<u32>]) -> SimplicialComplex {
    let names: Vec<String> = (0..n_vertices).map(|i| i.to_string()).collect();
    let facet_names: Vec<Vec<String>> = facets
        .iter()
        .map(|f| f.iter().map(|v| v.to_string()).collect())
        .collect();
    SimplicialComplex::build(names, &facet_names).expect("built-in complex")
}

/// Boundary of the standard n-simplex on vertices 0..=n.
pub fn boundary_delta(n: u32) -> SimplicialComplex {
    let facets: Vec<Vec<u32>> = (0..=n)
        .map(|omit| (0..=n).filter(|&v| v != omit).collect())
        .collect();
    from_u32_facets(n + 1, &facets)
}

/// The 4-sphere as the boundary of the 5-simplex: 6 vertices, 6 facets.
pub fn boundary_delta5() -> SimplicialComplex {
    boundary_delta(5)
}

/// A circle with n vertices (n >= 3).
pub fn circle(n: u32) -> SimplicialComplex {
    assert!(n >= 3);
    let facets: Vec<Vec<u32>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
    from_u32_facets(n, &facets)
}

/// S1 x S3 as the staircase product of a 3-vertex circle with the boundary
/// of the 4-simplex: 15 vertices, 60 facets.
pub fn s1xs3_staircase() -> SimplicialComplex {
    staircase_product(&circle(3), &boundary_delta(4)).expect("staircase product")
}

/// The unique 9-vertex triangulation of the complex projective plane:
/// 36 facets on vertices 1..9, invariant under the translation group of the
/// 3x3 array {1,2,3} x {4,5,6} x {7,8,9}.
///
/// The facet list is reconstructed deterministically: among all unions of
/// four translation-group orbits of 5-element vertex sets, exactly the
/// triangulations of CP^2 survive the closed-combinatorial-4-manifold check
/// with Euler characteristic 3 (a closed 4-manifold needs at least 9 vertices
/// unless it is a sphere, and at 9 vertices only this complex remains).  The
/// lexicographically least surviving facet list is returned.
pub fn cp2_kuhnel9() -> SimplicialComplex {
    static CACHE: OnceLock<SimplicialComplex> = OnceLock::new();
    CACHE.get_or_init(build_cp2).clone()
}

fn apply_perm(perm: &[u8; 9], set: &[u8]) -> Vec<u8> {
    let mut out: Vec<u8> = set.iter().map(|&v| perm[(v - 1) as usize]).collect();
    out.sort_unstable();
    out
}

fn build_cp2() -> SimplicialComplex {
    // sigma: rotate within each block; tau: shift blocks.
    let sigma: [u8; 9] = [2, 3, 1, 5, 6, 4, 8, 9, 7];
    let tau: [u8; 9] = [4, 5, 6, 7, 8, 9, 1, 2, 3];

    // All 5-subsets of {1..9}, grouped into orbits of the order-9 group.
    let mut all5: Vec<Vec<u8>> = Vec::new();
    for a in 1u8..=9 {
        for b in a + 1..=9 {
            for c in b + 1..=9 {
                for d in c + 1..=9 {
                    for e in d + 1..=9 {
                        all5.push(vec![a, b, c, d, e]);
                    }
                }
            }
        }
    }
    let mut orbits: Vec<Vec<Vec<u8>>> = Vec::new();
    let mut seen: std::collections::HashSet<Vec<u8>> = std::collections::HashSet::new();
    for s in &all5 {
        if seen.contains(s) {
            continue;
        }
        let mut orbit: std::collections::BTreeSet<Vec<u8>> = std::collections::BTreeSet::new();
        let mut frontier = vec![s.clone()];
        while let Some(t) = frontier.pop() {
            if !orbit.insert(t.clone()) {
                continue;
            }
            frontier.push(apply_perm(&sigma, &t));
            frontier.push(apply_perm(&tau, &t));
        }
        for t in &orbit {
            seen.insert(t.clone());
        }
        orbits.push(orbit.into_iter().collect());
    }
    assert_eq!(orbits.len(), 14, "free orbits of 5-sets");

    // Index 4-subsets for the fast closedness prefilter.
    let mut tet_id: std::collections::HashMap<Vec<u8>, usize> = std::collections::HashMap::new();
    for a in 1u8..=9 {
        for b in a + 1..=9 {
            for c in b + 1..=9 {
                for d in c + 1..=9 {
                    let n = tet_id.len();
                    tet_id.insert(vec![a, b, c, d], n);
                }
            }
        }
    }
    let orbit_tets: Vec<Vec<u16>> = orbits
        .iter()
        .map(|orbit| {
            let mut counts = vec![0u16; tet_id.len()];
            for f in orbit {
                for omit in 0..5 {
                    let tet: Vec<u8> = f
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != omit)
                        .map(|(_, &v)| v)
                        .collect();
                    counts[tet_id[&tet]] += 1;
                }
            }
            counts
        })
        .collect();

    let mut best: Option<SimplicialComplex> = None;
    let mut best_facets: Option<Vec<Vec<u8>>> = None;
    for i in 0..14 {
        for j in i + 1..14 {
            for k in j + 1..14 {
                for l in k + 1..14 {
                    let pick = [i, j, k, l];
                    let closed = (0..tet_id.len()).all(|t| {
                        let c: u16 = pick.iter().map(|&o| orbit_tets[o][t]).sum();
                        c == 0 || c == 2
                    });
                    if !closed {
                        continue;
                    }
                    let mut facets: Vec<Vec<u8>> = Vec::with_capacity(36);
                    for &o in &pick {
                        facets.extend(orbits[o].iter().cloned());
                    }
                    facets.sort();
                    let names: Vec<String> = (1..=9u8).map(|v| v.to_string()).collect();
                    let facet_names: Vec<Vec<String>> = facets
                        .iter()
                        .map(|f| f.iter().map(|v| v.to_string()).collect())
                        .collect();
                    let cand = SimplicialComplex::build(names, &facet_names).unwrap();
                    if cand.euler_characteristic() != 3 {
                        continue;
                    }
                    if cand.validate_singular_4manifold().is_err() {
                        continue;
                    }
                    if !cand.is_connected() {
                        continue;
                    }
                    let better = match &best_facets {
                        None => true,
                        Some(bf) => facets < *bf,
                    };
                    if better {
                        best_facets = Some(facets.clone());
                        best = Some(cand);
                    }
                }
            }
        }
    }
    best.expect("a 9-vertex triangulation of CP^2 with translation symmetry")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cp2_has_the_known_face_vector() {
        let cx = cp2_kuhnel9();
        assert_eq!(cx.simplices(0).len(), 9);
        assert_eq!(cx.simplices(1).len(), 36);
        assert_eq!(cx.simplices(2).len(), 84);
        assert_eq!(cx.simplices(3).len(), 90);
        assert_eq!(cx.facets().len(), 36);
        assert_eq!(cx.euler_characteristic(), 3);
        cx.validate_singular_4manifold().unwrap();
        super::super::OrderedOrientedComplex::orient(cx, None).unwrap();
    }
}
