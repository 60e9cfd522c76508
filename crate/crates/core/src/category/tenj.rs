//! Label types for tetrahedra and 4-simplices, the slot order of the 10j
//! tensor, face restriction, the pointed 10j evaluation, and basis-rescaling
//! (gauge) transforms on explicit tables.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use super::cochain::CochainTable;
use super::group::GroupPresentation;
use super::{CatBackend, CatError, Fusion2CatData};
use crate::scalar::Cyclotomic;

/// Edge slots of a tetrahedron in local vertex order:
/// [01],[02],[03],[12],[13],[23].
pub const TETRA_EDGE_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Triangle slots of a tetrahedron: [012],[013],[023],[123].
pub const TETRA_TRI_TRIPLES: [(usize, usize, usize); 4] =
    [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)];

/// Edge slots of a 4-simplex, lexicographic.
pub const PENTA_EDGE_PAIRS: [(usize, usize); 10] = [
    (0, 1),
    (0, 2),
    (0, 3),
    (0, 4),
    (1, 2),
    (1, 3),
    (1, 4),
    (2, 3),
    (2, 4),
    (3, 4),
];

/// Triangle slots of a 4-simplex, lexicographic.
pub const PENTA_TRI_TRIPLES: [(usize, usize, usize); 10] = [
    (0, 1, 2),
    (0, 1, 3),
    (0, 1, 4),
    (0, 2, 3),
    (0, 2, 4),
    (0, 3, 4),
    (1, 2, 3),
    (1, 2, 4),
    (1, 3, 4),
    (2, 3, 4),
];

pub fn tetra_edge_index(a: usize, b: usize) -> usize {
    TETRA_EDGE_PAIRS
        .iter()
        .position(|&p| p == (a, b))
        .unwrap_or_else(|| panic!("({a},{b}) is not a tetra edge"))
}

pub fn penta_edge_index(a: usize, b: usize) -> usize {
    PENTA_EDGE_PAIRS
        .iter()
        .position(|&p| p == (a, b))
        .unwrap_or_else(|| panic!("({a},{b}) is not a 4-simplex edge"))
}

pub fn penta_tri_index(a: usize, b: usize, c: usize) -> usize {
    PENTA_TRI_TRIPLES
        .iter()
        .position(|&p| p == (a, b, c))
        .unwrap_or_else(|| panic!("({a},{b},{c}) is not a 4-simplex triangle"))
}

/// Labeled tetrahedron: object per edge slot, fusion-list index per triangle.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TetraLabel {
    pub edges: [usize; 6],
    pub tris: [usize; 4],
}

/// Labeled 4-simplex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PentaLabel {
    pub edges: [usize; 10],
    pub tris: [usize; 10],
}

/// Slot order of the 10j tensor: pairs (omitted local vertex, variance sign).
///
/// eps = +1 reads [(0123,+),(0134,+),(1234,+),(0124,-),(0234,-)];
/// eps = -1 reads [(0234,+),(0124,+),(1234,-),(0134,-),(0123,-)].
/// In both cases the sign in slot for face kappa is eps*(-1)^i with i the
/// position of the omitted vertex.
pub fn ten_j_index_order(eps: i8) -> [(usize, i8); 5] {
    if eps >= 0 {
        [(4, 1), (2, 1), (0, 1), (3, -1), (1, -1)]
    } else {
        [(1, 1), (3, 1), (0, -1), (2, -1), (4, -1)]
    }
}

/// Restriction of a 4-simplex label to the tetrahedron omitting one local
/// vertex, with vertices renumbered in order.
pub fn penta_face(p: &PentaLabel, omit: usize) -> TetraLabel {
    let kept: Vec<usize> = (0..5).filter(|&v| v != omit).collect();
    let mut edges = [0usize; 6];
    for (slot, &(a, b)) in TETRA_EDGE_PAIRS.iter().enumerate() {
        edges[slot] = p.edges[penta_edge_index(kept[a], kept[b])];
    }
    let mut tris = [0usize; 4];
    for (slot, &(a, b, c)) in TETRA_TRI_TRIPLES.iter().enumerate() {
        tris[slot] = p.tris[penta_tri_index(kept[a], kept[b], kept[c])];
    }
    TetraLabel { edges, tris }
}

/// Pointed 10j scalar.  Triangle labels are elements of the abelian group A
/// (indices into its element list); F is the associator 3-cochain and R the
/// braiding 2-cochain of the abelian 3-cocycle.
///
/// The positive value is the evaluation of the pentagon of triangulations of
/// the 5-gon: the long path 012|023|034 -> 013|123|034 -> 014|134|123 ->
/// 014|124|234 against the short path through 012|024|234, with one
/// interchange of the horizontally adjacent pair (012, 234) contributing the
/// braiding, and each re-bracketing of a vertical chain contributing an
/// associator value:
///
///   z+ = R(x012, x234)
///        * F(x034, x023, x012) * F(x034, x013, x123)^-1
///        * F(x014, x134, x123) * F(x014, x124, x234)^-1
///        * F(x024, x012, x234) * F(x024, x234, x012)^-1
///
/// and z- = (z+)^-1.
pub fn pointed_z(
    group: &GroupPresentation,
    f: &CochainTable,
    r: &CochainTable,
    tris: &[usize; 10],
    eps: i8,
) -> Result<Cyclotomic, CatError> {
    let x = |i: usize, j: usize, k: usize| tris[penta_tri_index(i, j, k)];
    let x012 = x(0, 1, 2);
    let x013 = x(0, 1, 3);
    let x014 = x(0, 1, 4);
    let x023 = x(0, 2, 3);
    let x024 = x(0, 2, 4);
    let x034 = x(0, 3, 4);
    let x123 = x(1, 2, 3);
    let x124 = x(1, 2, 4);
    let x134 = x(1, 3, 4);
    let x234 = x(2, 3, 4);
    let _ = group;
    let inv = |v: &Cyclotomic| -> Result<Cyclotomic, CatError> {
        v.inv().map_err(|_| CatError::Validation(vec!["zero value in F or R table".into()]))
    };
    let mut z = r.get(&[x012, x234]).clone();
    z = z.mul(f.get(&[x034, x023, x012]));
    z = z.mul(&inv(f.get(&[x034, x013, x123]))?);
    z = z.mul(f.get(&[x014, x134, x123]));
    z = z.mul(&inv(f.get(&[x014, x124, x234]))?);
    z = z.mul(f.get(&[x024, x012, x234]));
    z = z.mul(&inv(f.get(&[x024, x234, x012]))?);
    if eps >= 0 {
        Ok(z)
    } else {
        inv(&z)
    }
}

/// Basis rescaling on an explicit category: for every labeled tetra the +
/// basis is scaled by a random unit u and the - basis by a random unit w.
/// With `include_pairing` the pairing picks up u*w and the transform leaves
/// every state-sum value unchanged; without it only ten_j is rescaled, which
/// is the negative control.
pub fn gauge_transformed(
    cat: &Fusion2CatData,
    seed: u64,
    include_pairing: bool,
) -> Result<Fusion2CatData, CatError> {
    let mut ex = cat.to_explicit()?;
    let tables = match &mut ex.backend {
        CatBackend::Explicit(t) => t,
        _ => unreachable!(),
    };
    let mut labels: Vec<TetraLabel> = tables
        .tetra
        .iter()
        .filter(|&(_, &sz)| sz > 0)
        .map(|(t, _)| t.clone())
        .collect();
    labels.sort();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut scale: std::collections::HashMap<TetraLabel, (Cyclotomic, Cyclotomic)> =
        std::collections::HashMap::new();
    for t in &labels {
        let u = Cyclotomic::zeta(8, rng.gen_range(0..8i64));
        let w = Cyclotomic::zeta(8, rng.gen_range(0..8i64));
        scale.insert(t.clone(), (u, w));
    }
    if include_pairing {
        for (t, (u, w)) in &scale {
            let p = tables.pairing.get_mut(t).expect("pairing for nonzero space");
            let factor = u.mul(w);
            for v in p.data.iter_mut() {
                *v = v.mul(&factor);
            }
        }
    }
    let keys: Vec<(PentaLabel, i8)> = tables.ten_j.keys().cloned().collect();
    for key in keys {
        let (p, eps) = &key;
        let mut factor = Cyclotomic::one();
        for (omit, sign) in ten_j_index_order(*eps) {
            let face = penta_face(p, omit);
            let (u, w) = scale.get(&face).expect("face label seen in tetra pass");
            factor = factor.mul(if sign > 0 { u } else { w });
        }
        let data = tables.ten_j.get_mut(&key).unwrap();
        for v in data.iter_mut() {
            *v = v.mul(&factor);
        }
    }
    ex.name = format!("{} [gauge {seed}]", cat.name);
    Ok(ex)
}

#[cfg(test)]
mod tests {
    use super::super::generators::*;
    use super::*;

    #[test]
    fn face_restriction_renumbers() {
        // Distinct edge labels so the mapping is visible.
        let p = PentaLabel {
            edges: [0, 1, 2, 3, 4, 5, 6, 7, 8, 9],
            tris: [0, 1, 2, 3, 4, 5, 6, 7, 8, 9],
        };
        // Omit vertex 0: kept (1,2,3,4); local edge [01] is global [12].
        let t = penta_face(&p, 0);
        assert_eq!(t.edges, [4, 5, 6, 7, 8, 9]);
        assert_eq!(t.tris, [6, 7, 8, 9]);
        // Omit vertex 4: local labels are the lex-first entries.
        let t = penta_face(&p, 4);
        assert_eq!(t.edges, [0, 1, 2, 4, 5, 7]);
        assert_eq!(t.tris, [0, 1, 3, 6]);
    }

    #[test]
    fn pointed_z_reduces_to_braiding_when_f_trivial() {
        let fermion = pointed_preset("fermion").unwrap();
        let (group, f, r) = match &fermion.backend {
            CatBackend::Pointed { group, f, r, .. } => (group, f, r),
            _ => unreachable!(),
        };
        // x012 = x234 = 1, everything else irrelevant for trivial F.
        let mut tris = [0usize; 10];
        tris[penta_tri_index(0, 1, 2)] = 1;
        tris[penta_tri_index(2, 3, 4)] = 1;
        let z = pointed_z(group, f, r, &tris, 1).unwrap();
        assert_eq!(z, Cyclotomic::from_int(-1));
        let z = pointed_z(group, f, r, &tris, -1).unwrap();
        assert_eq!(z, Cyclotomic::from_int(-1));
        tris[penta_tri_index(0, 1, 2)] = 0;
        let z = pointed_z(group, f, r, &tris, 1).unwrap();
        assert_eq!(z, Cyclotomic::one());
    }

    #[test]
    fn z_minus_is_inverse_of_z_plus() {
        let semion = pointed_preset("semion").unwrap();
        let (group, f, r) = match &semion.backend {
            CatBackend::Pointed { group, f, r, .. } => (group, f, r),
            _ => unreachable!(),
        };
        for mask in 0..1024u32 {
            let mut tris = [0usize; 10];
            for (i, t) in tris.iter_mut().enumerate() {
                *t = ((mask >> i) & 1) as usize;
            }
            let zp = pointed_z(group, f, r, &tris, 1).unwrap();
            let zm = pointed_z(group, f, r, &tris, -1).unwrap();
            assert!(zp.mul(&zm).is_one());
        }
    }
}
