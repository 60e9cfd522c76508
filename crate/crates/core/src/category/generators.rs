//! Category generators: twisted Dijkgraaf-Witten data, pointed braided data
//! from an abelian 3-cocycle, and 2-group (Yetter-style) data, plus the
//! generator-reference file format.

use std::collections::{BTreeMap, HashMap};

use serde_json::{json, Value};

use super::cochain::CochainTable;
use super::group::GroupPresentation;
use super::tenj::{penta_edge_index, penta_tri_index, PentaLabel};
use super::{CatBackend, CatError, Fusion2CatData, MorData, YetterOmega};
use crate::scalar::Cyclotomic;

fn singleton_components(n: usize) -> Vec<usize> {
    (0..n).collect()
}

fn ones(n: usize) -> Vec<Cyclotomic> {
    vec![Cyclotomic::one(); n]
}

/// The trivial category: one object, one morphism, all tables 1.
pub fn gen_trivial() -> Fusion2CatData {
    let mut cat = gen_twisted_dw(GroupPresentation::trivial(), None).expect("trivial data");
    cat.name = "trivial".to_string();
    cat
}

/// Endotrivial category from a finite group and a 4-cocycle.  Objects are the
/// group elements, fusion follows multiplication, and the 10j symbol of a
/// labeled 4-simplex is omega(g01, g12, g23, g34)^eps.
pub fn gen_twisted_dw(
    group: GroupPresentation,
    omega: Option<CochainTable>,
) -> Result<Fusion2CatData, CatError> {
    let n = group.order();
    let omega = omega.unwrap_or_else(|| CochainTable::trivial(4, n));
    if omega.degree != 4 || omega.order != n {
        return Err(CatError::Parse(
            "omega must be a degree-4 cochain on the group".into(),
        ));
    }
    omega.validate_cocycle(&group)?;
    let mut fusion = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            fusion.insert(
                (a, b, group.mul[a][b]),
                vec![MorData {
                    name: "0".to_string(),
                    dim: Cyclotomic::one(),
                }],
            );
        }
    }
    let name = if omega.is_trivial() {
        format!("dw({})", group.name)
    } else {
        format!("dw({}; twisted)", group.name)
    };
    Ok(Fusion2CatData {
        name,
        objects: group.elements.clone(),
        components: singleton_components(n),
        dim_obj: ones(n),
        dim_end: ones(n),
        fusion,
        backend: CatBackend::Dw { group, omega },
    })
}

/// Pentagon (d F = 1) and both hexagons for an abelian 3-cocycle (F, R),
/// plus the dims table shape.
pub fn validate_pointed_data(
    group: &GroupPresentation,
    f: &CochainTable,
    r: &CochainTable,
    dims: &[Cyclotomic],
) -> Result<(), CatError> {
    let n = group.order();
    if !group.is_abelian() {
        return Err(CatError::Validation(vec![
            "pointed braided data needs an abelian group".into(),
        ]));
    }
    if f.degree != 3 || f.order != n || r.degree != 2 || r.order != n {
        return Err(CatError::Validation(vec![
            "F must be a degree-3 and R a degree-2 table on the group".into(),
        ]));
    }
    if dims.len() != n {
        return Err(CatError::Validation(vec![format!(
            "dims table has {} entries, group has {n}",
            dims.len()
        )]));
    }
    for (a, d) in dims.iter().enumerate() {
        if !(d.is_one() || d.clone().neg().is_one()) {
            return Err(CatError::Validation(vec![format!(
                "dims({}) must be +1 or -1",
                group.elements[a]
            )]));
        }
    }
    if let Err(CatError::InvalidCocycle { witness }) = f.validate_cocycle(group) {
        return Err(CatError::PentagonViolation { witness });
    }
    let inv = |v: &Cyclotomic| -> Result<Cyclotomic, CatError> {
        v.inv()
            .map_err(|_| CatError::Validation(vec!["zero value in F or R table".into()]))
    };
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let bc = group.mul[b][c];
                let ab = group.mul[a][b];
                // F(b,c,a) R(a,bc) F(a,b,c) = R(a,c) F(b,a,c) R(a,b)
                let lhs = f
                    .get(&[b, c, a])
                    .mul(r.get(&[a, bc]))
                    .mul(f.get(&[a, b, c]));
                let rhs = r
                    .get(&[a, c])
                    .mul(f.get(&[b, a, c]))
                    .mul(r.get(&[a, b]));
                if lhs != rhs {
                    return Err(CatError::HexagonViolation {
                        witness: format!(
                            "first hexagon at ({}, {}, {}): {} vs {}",
                            group.elements[a], group.elements[b], group.elements[c], lhs, rhs
                        ),
                    });
                }
                // F(c,a,b)^-1 R(ab,c) F(a,b,c)^-1 = R(a,c) F(a,c,b)^-1 R(b,c)
                let lhs = inv(f.get(&[c, a, b]))?
                    .mul(r.get(&[ab, c]))
                    .mul(&inv(f.get(&[a, b, c]))?);
                let rhs = r
                    .get(&[a, c])
                    .mul(&inv(f.get(&[a, c, b]))?)
                    .mul(r.get(&[b, c]));
                if lhs != rhs {
                    return Err(CatError::HexagonViolation {
                        witness: format!(
                            "second hexagon at ({}, {}, {}): {} vs {}",
                            group.elements[a], group.elements[b], group.elements[c], lhs, rhs
                        ),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Pointed braided category on an abelian group: one object whose morphisms
/// are the group elements, with associator F, braiding R, and morphism
/// dimensions dims.
pub fn gen_pointed_braided(
    group: GroupPresentation,
    f: CochainTable,
    r: CochainTable,
    dims: Vec<Cyclotomic>,
) -> Result<Fusion2CatData, CatError> {
    validate_pointed_data(&group, &f, &r, &dims)?;
    let _n = group.order();
    let mut dim_end = Cyclotomic::zero();
    for d in &dims {
        dim_end = dim_end.add(&d.mul(d));
    }
    let fusion_list: Vec<MorData> = group
        .elements
        .iter()
        .zip(dims.iter())
        .map(|(e, d)| MorData {
            name: e.clone(),
            dim: d.clone(),
        })
        .collect();
    let mut fusion = BTreeMap::new();
    fusion.insert((0, 0, 0), fusion_list);
    Ok(Fusion2CatData {
        name: format!("pointed({})", group.name),
        objects: vec!["0".to_string()],
        components: vec![0],
        dim_obj: ones(1),
        dim_end: vec![dim_end],
        fusion,
        backend: CatBackend::Pointed { group, f, r, dims },
    })
}

/// Named abelian 3-cocycle data on Z2 and Z3 used throughout the tests:
/// the four quadratic forms on Z2 and the three braidings of pointed Z3.
pub fn pointed_preset(name: &str) -> Option<Fusion2CatData> {
    let z2 = GroupPresentation::cyclic(2);
    let mk_z2 = |label: &str, f_val: Cyclotomic, r_val: Cyclotomic| {
        let mut f = CochainTable::trivial(3, 2);
        f.set(&[1, 1, 1], f_val);
        let mut r = CochainTable::trivial(2, 2);
        r.set(&[1, 1], r_val);
        let mut cat = gen_pointed_braided(z2.clone(), f, r, ones(2)).expect("preset data");
        cat.name = format!("pointed(Z2; {label})");
        Some(cat)
    };
    match name {
        "boson" => mk_z2("boson", Cyclotomic::one(), Cyclotomic::one()),
        "fermion" => mk_z2("fermion", Cyclotomic::one(), Cyclotomic::from_int(-1)),
        "semion" => mk_z2("semion", Cyclotomic::from_int(-1), Cyclotomic::zeta(4, 1)),
        "anti_semion" | "anti-semion" => {
            mk_z2("anti-semion", Cyclotomic::from_int(-1), Cyclotomic::zeta(4, 3))
        }
        "z3_0" | "z3_1" | "z3_2" => {
            let k: i64 = name[3..].parse().ok()?;
            Some(pointed_z3(k))
        }
        _ => None,
    }
}

/// Pointed Z3 with trivial associator and bilinear braiding
/// R(a,b) = zeta_3^{2kab}.
pub fn pointed_z3(k: i64) -> Fusion2CatData {
    let z3 = GroupPresentation::cyclic(3);
    let f = CochainTable::trivial(3, 3);
    let mut r = CochainTable::trivial(2, 3);
    for a in 0..3usize {
        for b in 0..3usize {
            r.set(&[a, b], Cyclotomic::zeta(3, 2 * k * (a as i64) * (b as i64)));
        }
    }
    let mut cat = gen_pointed_braided(z3, f, r, ones(3)).expect("pointed Z3 data");
    cat.name = format!("pointed(Z3; k={k})");
    cat
}

/// 2-group category for a finite group G and an abelian group A with trivial
/// action and trivial Postnikov class: objects are G, every fusion space is
/// A, and the 10j symbol is the value of the supplied 4-form.
pub fn gen_yetter_2group(
    g: GroupPresentation,
    a: GroupPresentation,
    omega: YetterOmega,
) -> Result<Fusion2CatData, CatError> {
    if !a.is_abelian() {
        return Err(CatError::Validation(vec![
            "the base group of a 2-group category must be abelian".into(),
        ]));
    }
    let n = g.order();
    let fusion_list: Vec<MorData> = a
        .elements
        .iter()
        .map(|e| MorData {
            name: e.clone(),
            dim: Cyclotomic::one(),
        })
        .collect();
    let mut fusion = BTreeMap::new();
    for x in 0..n {
        for y in 0..n {
            fusion.insert((x, y, g.mul[x][y]), fusion_list.clone());
        }
    }
    let dim_end = Cyclotomic::from_int(a.order() as i64);
    let cat = Fusion2CatData {
        name: format!("yetter({}, {})", g.name, a.name),
        objects: g.elements.clone(),
        components: singleton_components(n),
        dim_obj: ones(n),
        dim_end: vec![dim_end; n],
        fusion,
        backend: CatBackend::Yetter { g: g.clone(), a: a.clone(), omega },
    };
    if let CatBackend::Yetter { omega, .. } = &cat.backend {
        validate_yetter_omega(&cat, &g, &a, omega)?;
    }
    Ok(cat)
}

/// For an explicit omega table: every value must be a unit and the alternating
/// product over the six faces of any admissibly labeled 5-simplex must be 1.
pub fn validate_yetter_omega(
    cat: &Fusion2CatData,
    g: &GroupPresentation,
    a: &GroupPresentation,
    omega: &YetterOmega,
) -> Result<(), CatError> {
    let table = match omega {
        YetterOmega::Trivial => return Ok(()),
        YetterOmega::Table(t) => t,
    };
    for (label, v) in table {
        if v.is_zero() {
            return Err(CatError::InvalidCocycle {
                witness: format!("omega value at {label:?} is zero"),
            });
        }
        if !cat.penta_label_valid(label) {
            return Err(CatError::Validation(vec![format!(
                "omega table references invalid label {label:?}"
            )]));
        }
    }
    let lookup = |p: &PentaLabel| table.get(p).cloned().unwrap_or_else(Cyclotomic::one);
    let mut witness: Option<String> = None;
    enumerate_delta5_labelings(g, a, &mut |edges, tris| {
        if witness.is_some() {
            return;
        }
        let mut acc = Cyclotomic::one();
        for omit in 0..6usize {
            let face = delta5_face(edges, tris, omit);
            let v = lookup(&face);
            if omit % 2 == 0 {
                acc = acc.mul(&v);
            } else {
                match v.inv() {
                    Ok(vi) => acc = acc.mul(&vi),
                    Err(_) => {
                        witness = Some("omega value is zero".to_string());
                        return;
                    }
                }
            }
        }
        if !acc.is_one() {
            witness = Some(format!(
                "coboundary of omega is {acc} on the 5-simplex labeled edges={edges:?} tris={tris:?}"
            ));
        }
    });
    match witness {
        None => Ok(()),
        Some(w) => Err(CatError::InvalidCocycle { witness: w }),
    }
}

const D5_EDGES: usize = 15;
const D5_TRIS: usize = 20;

fn d5_edge_pairs() -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for i in 0..6 {
        for j in (i + 1)..6 {
            v.push((i, j));
        }
    }
    v
}

fn d5_tri_triples() -> Vec<(usize, usize, usize)> {
    let mut v = Vec::new();
    for i in 0..6 {
        for j in (i + 1)..6 {
            for k in (j + 1)..6 {
                v.push((i, j, k));
            }
        }
    }
    v
}

/// Every G-flat edge labeling times every A-flat triangle labeling of the
/// 5-simplex: edges satisfy g01 g12 = g02 on all triangles, triangle labels
/// satisfy the tetra flatness x012 + x023 = x013 + x123 on all 15 tetras.
fn enumerate_delta5_labelings<F: FnMut(&[usize; D5_EDGES], &[usize; D5_TRIS])>(
    g: &GroupPresentation,
    a: &GroupPresentation,
    emit: &mut F,
) {
    let pairs = d5_edge_pairs();
    let triples = d5_tri_triples();
    let eidx = |x: usize, y: usize| pairs.iter().position(|&p| p == (x, y)).unwrap();
    // Flat G-labelings: determined by g_{0i}.
    let n = g.order();
    let mut choice = vec![0usize; 5];
    loop {
        let mut edges = [0usize; D5_EDGES];
        for i in 1..6 {
            edges[eidx(0, i)] = choice[i - 1];
        }
        for i in 1..6 {
            for j in (i + 1)..6 {
                // g_ij = g_0i^{-1} g_0j
                edges[eidx(i, j)] = g.mul[g.inv[choice[i - 1]]][choice[j - 1]];
            }
        }
        // Triangle labels via DFS with tetra-flatness pruning.
        let mut tris = [0usize; D5_TRIS];
        tri_dfs(a, &triples, &mut tris, 0, &edges, emit);
        // advance
        let mut i = 0;
        loop {
            if i == 5 {
                return;
            }
            choice[i] += 1;
            if choice[i] < n {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

fn tri_dfs<F: FnMut(&[usize; D5_EDGES], &[usize; D5_TRIS])>(
    a: &GroupPresentation,
    triples: &[(usize, usize, usize)],
    tris: &mut [usize; D5_TRIS],
    pos: usize,
    edges: &[usize; D5_EDGES],
    emit: &mut F,
) {
    if pos == D5_TRIS {
        emit(edges, tris);
        return;
    }
    let tidx = |x: usize, y: usize, z: usize| triples.iter().position(|&t| t == (x, y, z)).unwrap();
    for v in 0..a.order() {
        tris[pos] = v;
        // Check every tetra whose four triangles are all assigned and whose
        // last-assigned triangle is `pos`.
        let mut ok = true;
        'tets: for t0 in 0..6usize {
            for t1 in (t0 + 1)..6 {
                for t2 in (t1 + 1)..6 {
                    for t3 in (t2 + 1)..6 {
                        let f = [
                            tidx(t0, t1, t2),
                            tidx(t0, t1, t3),
                            tidx(t0, t2, t3),
                            tidx(t1, t2, t3),
                        ];
                        if f.iter().any(|&x| x > pos) || !f.contains(&pos) {
                            continue;
                        }
                        let lhs = a.mul[tris[f[0]]][tris[f[2]]];
                        let rhs = a.mul[tris[f[1]]][tris[f[3]]];
                        if lhs != rhs {
                            ok = false;
                            break 'tets;
                        }
                    }
                }
            }
        }
        if ok {
            tri_dfs(a, triples, tris, pos + 1, edges, emit);
        }
    }
}

/// Face of a labeled 5-simplex as a penta label, renumbering vertices.
fn delta5_face(edges: &[usize; D5_EDGES], tris: &[usize; D5_TRIS], omit: usize) -> PentaLabel {
    let pairs = d5_edge_pairs();
    let triples = d5_tri_triples();
    let eidx = |x: usize, y: usize| pairs.iter().position(|&p| p == (x, y)).unwrap();
    let tidx = |x: usize, y: usize, z: usize| triples.iter().position(|&t| t == (x, y, z)).unwrap();
    let kept: Vec<usize> = (0..6).filter(|&v| v != omit).collect();
    let mut pe = [0usize; 10];
    for (a, b) in (0..5).flat_map(|a| ((a + 1)..5).map(move |b| (a, b))) {
        pe[penta_edge_index(a, b)] = edges[eidx(kept[a], kept[b])];
    }
    let mut pt = [0usize; 10];
    for a in 0..5 {
        for b in (a + 1)..5 {
            for c in (b + 1)..5 {
                pt[penta_tri_index(a, b, c)] = tris[tidx(kept[a], kept[b], kept[c])];
            }
        }
    }
    PentaLabel { edges: pe, tris: pt }
}

fn group_from_value(v: &Value) -> Result<GroupPresentation, CatError> {
    GroupPresentation::from_json("custom", v)
}

fn group_to_value(g: &GroupPresentation) -> Value {
    if let Some(p) = GroupPresentation::preset(&g.name) {
        if p == *g {
            return json!(g.name);
        }
    }
    g.to_json()
}

/// Parse the ragged lower-triangular R form [["1"],["1","zeta(4,1)"]]:
/// row i holds R(i, 0..=i) and the upper triangle is filled symmetrically.
fn r_from_ragged(rows: &[Value], n: usize) -> Result<CochainTable, CatError> {
    if rows.len() != n {
        return Err(CatError::Parse(format!(
            "ragged R table has {} rows, group has {n}",
            rows.len()
        )));
    }
    let mut r = CochainTable::trivial(2, n);
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| CatError::Parse("R rows must be arrays".into()))?;
        if row.len() != i + 1 {
            return Err(CatError::Parse(format!(
                "ragged R row {i} has {} entries, expected {}",
                row.len(),
                i + 1
            )));
        }
        for (j, v) in row.iter().enumerate() {
            let sc = Cyclotomic::from_json(v)
                .map_err(|e| CatError::Parse(format!("R[{i}][{j}]: {e}")))?;
            r.set(&[i, j], sc.clone());
            if i != j {
                r.set(&[j, i], sc);
            }
        }
    }
    Ok(r)
}

/// Build a category from a generator-reference JSON object.
pub fn from_generator_json(v: &Value) -> Result<Fusion2CatData, CatError> {
    let obj = v.as_object().unwrap();
    let kind = obj
        .get("generator")
        .and_then(|g| g.as_str())
        .ok_or_else(|| CatError::Parse("generator must be a string".into()))?;
    for twist_key in ["action", "postnikov"] {
        if let Some(t) = obj.get(twist_key) {
            if t.as_str() != Some("trivial") {
                return Err(CatError::UnsupportedTwist(format!(
                    "nontrivial {twist_key} tables are not supported"
                )));
            }
        }
    }
    match kind {
        "trivial" => Ok(gen_trivial()),
        "dw" => {
            let group = group_from_value(
                obj.get("group")
                    .ok_or_else(|| CatError::Parse("dw generator needs a group".into()))?,
            )?;
            let omega = match obj.get("omega") {
                None => None,
                Some(o) => Some(CochainTable::from_json(4, &group, o)?),
            };
            gen_twisted_dw(group, omega)
        }
        "pointed" => {
            if let Some(p) = obj.get("preset").and_then(|p| p.as_str()) {
                return pointed_preset(p)
                    .ok_or_else(|| CatError::Parse(format!("unknown pointed preset {p:?}")));
            }
            let group = group_from_value(
                obj.get("group")
                    .ok_or_else(|| CatError::Parse("pointed generator needs a group".into()))?,
            )?;
            let n = group.order();
            let f = match obj.get("F").or_else(|| obj.get("f")) {
                None => CochainTable::trivial(3, n),
                Some(fv) => CochainTable::from_json(3, &group, fv)?,
            };
            let r = match obj.get("R").or_else(|| obj.get("r")) {
                None => CochainTable::trivial(2, n),
                Some(Value::Array(rows)) => r_from_ragged(rows, n)?,
                Some(rv) => CochainTable::from_json(2, &group, rv)?,
            };
            let dims = match obj.get("dims") {
                None => ones(n),
                Some(Value::Array(ds)) => ds
                    .iter()
                    .map(|d| {
                        Cyclotomic::from_json(d)
                            .map_err(|e| CatError::Parse(format!("dims entry: {e}")))
                    })
                    .collect::<Result<_, _>>()?,
                Some(_) => return Err(CatError::Parse("dims must be an array".into())),
            };
            gen_pointed_braided(group, f, r, dims)
        }
        "yetter" => {
            let g = group_from_value(
                obj.get("group")
                    .ok_or_else(|| CatError::Parse("yetter generator needs a group".into()))?,
            )?;
            let a = group_from_value(
                obj.get("base")
                    .or_else(|| obj.get("base_group"))
                    .ok_or_else(|| CatError::Parse("yetter generator needs a base group".into()))?,
            )?;
            let omega = match obj.get("omega") {
                None => YetterOmega::Trivial,
                Some(Value::String(s)) if s == "trivial" => YetterOmega::Trivial,
                Some(o) => {
                    // Keys are penta label strings against the untwisted category.
                    let plain = gen_yetter_2group(g.clone(), a.clone(), YetterOmega::Trivial)?;
                    let table_v = o
                        .as_object()
                        .and_then(|m| m.get("table"))
                        .and_then(|t| t.as_object())
                        .ok_or_else(|| {
                            CatError::Parse("yetter omega must be \"trivial\" or {\"table\": {...}}".into())
                        })?;
                    let mut table = HashMap::new();
                    for (key, val) in table_v {
                        let label = plain.parse_penta_key(key)?;
                        let sc = Cyclotomic::from_json(val)
                            .map_err(|e| CatError::Parse(format!("omega[{key}]: {e}")))?;
                        table.insert(label, sc);
                    }
                    YetterOmega::Table(table)
                }
            };
            gen_yetter_2group(g, a, omega)
        }
        other => Err(CatError::Parse(format!("unknown generator {other:?}"))),
    }
}

/// Serialize a generator-backed category back to its reference form.
pub fn to_generator_json(cat: &Fusion2CatData) -> Option<Value> {
    match &cat.backend {
        CatBackend::Dw { group, omega } => {
            let mut o = serde_json::Map::new();
            o.insert("generator".into(), json!("dw"));
            o.insert("group".into(), group_to_value(group));
            if !omega.is_trivial() {
                o.insert("omega".into(), omega.to_json(group));
            }
            Some(Value::Object(o))
        }
        CatBackend::Pointed { group, f, r, dims } => {
            let mut o = serde_json::Map::new();
            o.insert("generator".into(), json!("pointed"));
            o.insert("group".into(), group_to_value(group));
            if !f.is_trivial() {
                o.insert("F".into(), f.to_json(group));
            }
            if !r.is_trivial() {
                o.insert("R".into(), r.to_json(group));
            }
            if dims.iter().any(|d| !d.is_one()) {
                o.insert("dims".into(), json!(dims.iter().map(|d| d.to_json()).collect::<Vec<_>>()));
            }
            Some(Value::Object(o))
        }
        CatBackend::Yetter { g, a, omega } => {
            let mut o = serde_json::Map::new();
            o.insert("generator".into(), json!("yetter"));
            o.insert("group".into(), group_to_value(g));
            o.insert("base".into(), group_to_value(a));
            if let YetterOmega::Table(table) = omega {
                let mut keys: Vec<&PentaLabel> = table.keys().collect();
                keys.sort();
                let mut tbl = serde_json::Map::new();
                for k in keys {
                    tbl.insert(cat.penta_key_string(k), table[k].to_json());
                }
                o.insert("omega".into(), json!({ "table": Value::Object(tbl) }));
            }
            Some(Value::Object(o))
        }
        CatBackend::Explicit(_) => None,
    }
}

/// Named categories used by the command line and the test suites.
pub fn preset_category(name: &str) -> Option<Fusion2CatData> {
    match name {
        "trivial" => Some(gen_trivial()),
        "dw_z2" => gen_twisted_dw(GroupPresentation::cyclic(2), None).ok(),
        "dw_z3" => gen_twisted_dw(GroupPresentation::cyclic(3), None).ok(),
        "dw_z2xz2" => gen_twisted_dw(GroupPresentation::z2xz2(), None).ok(),
        "dw_s3" => gen_twisted_dw(GroupPresentation::s3(), None).ok(),
        "yetter_z2_z2" => gen_yetter_2group(
            GroupPresentation::cyclic(2),
            GroupPresentation::cyclic(2),
            YetterOmega::Trivial,
        )
        .ok(),
        other => pointed_preset(other),
    }
}

pub const PRESET_NAMES: &[&str] = &[
    "trivial",
    "dw_z2",
    "dw_z3",
    "dw_z2xz2",
    "dw_s3",
    "boson",
    "fermion",
    "semion",
    "anti_semion",
    "z3_1",
    "z3_2",
    "yetter_z2_z2",
];

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn all_presets_validate() {
        for name in PRESET_NAMES {
            let cat = preset_category(name).unwrap_or_else(|| panic!("missing preset {name}"));
            cat.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn twisted_dw_accepts_coboundaries_and_rejects_junk() {
        let g = GroupPresentation::cyclic(2);
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let nu = CochainTable::random(3, 2, &mut rng);
        let omega = nu.differential(&g).unwrap();
        gen_twisted_dw(g.clone(), Some(omega.clone())).unwrap();
        let mut bad = omega;
        bad.set(&[1, 1, 0, 1], bad.get(&[1, 1, 0, 1]).mul(&Cyclotomic::from_int(-1)));
        match gen_twisted_dw(g, Some(bad)) {
            Err(CatError::InvalidCocycle { .. }) => {}
            other => panic!("expected InvalidCocycle, got {other:?}"),
        }
    }

    #[test]
    fn hexagon_violation_is_caught() {
        let z2 = GroupPresentation::cyclic(2);
        let f = CochainTable::trivial(3, 2);
        let mut r = CochainTable::trivial(2, 2);
        // R(1,1) = i with trivial F fails the hexagons on Z2.
        r.set(&[1, 1], Cyclotomic::zeta(4, 1));
        match gen_pointed_braided(z2, f, r, vec![Cyclotomic::one(); 2]) {
            Err(CatError::HexagonViolation { witness }) => {
                assert!(witness.contains("hexagon"), "{witness}");
            }
            other => panic!("expected HexagonViolation, got {other:?}"),
        }
    }

    #[test]
    fn pentagon_violation_is_caught() {
        let z2 = GroupPresentation::cyclic(2);
        let mut f = CochainTable::trivial(3, 2);
        // F(1,1,0) = -1 alone breaks d F = 1.
        f.set(&[1, 1, 0], Cyclotomic::from_int(-1));
        let r = CochainTable::trivial(2, 2);
        match gen_pointed_braided(z2, f, r, vec![Cyclotomic::one(); 2]) {
            Err(CatError::PentagonViolation { .. }) => {}
            other => panic!("expected PentagonViolation, got {other:?}"),
        }
    }

    #[test]
    fn nonabelian_pointed_group_is_rejected() {
        let s3 = GroupPresentation::s3();
        let f = CochainTable::trivial(3, 6);
        let r = CochainTable::trivial(2, 6);
        assert!(gen_pointed_braided(s3, f, r, vec![Cyclotomic::one(); 6]).is_err());
    }

    #[test]
    fn yetter_omega_cocycle_gate() {
        let z2 = GroupPresentation::cyclic(2);
        // A single altered value on one labeled 4-simplex is not a cocycle.
        let plain =
            gen_yetter_2group(z2.clone(), z2.clone(), YetterOmega::Trivial).unwrap();
        let label = plain.admissible_penta_labels(true).into_iter().last().unwrap();
        let mut table = HashMap::new();
        table.insert(label, Cyclotomic::from_int(-1));
        match gen_yetter_2group(z2.clone(), z2.clone(), YetterOmega::Table(table)) {
            Err(CatError::InvalidCocycle { .. }) => {}
            other => panic!("expected InvalidCocycle, got {other:?}"),
        }
    }

    #[test]
    fn unsupported_twists_error() {
        let v = json!({"generator": "yetter", "group": "Z2", "base": "Z2", "action": "flip"});
        match from_generator_json(&v) {
            Err(CatError::UnsupportedTwist(_)) => {}
            other => panic!("expected UnsupportedTwist, got {other:?}"),
        }
    }

    #[test]
    fn generator_files_round_trip() {
        let semion = pointed_preset("semion").unwrap();
        let j = to_generator_json(&semion).unwrap();
        let back = from_generator_json(&j).unwrap();
        assert!(semion.presentation_diff(&back).is_empty());

        let g = GroupPresentation::cyclic(2);
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let omega = CochainTable::random(3, 2, &mut rng).differential(&g).unwrap();
        let dw = gen_twisted_dw(g, Some(omega)).unwrap();
        let j = to_generator_json(&dw).unwrap();
        let back = from_generator_json(&j).unwrap();
        assert!(dw.presentation_diff(&back).is_empty());
    }

    #[test]
    fn ragged_r_spec_example_parses() {
        let v = json!({
            "generator": "pointed",
            "group": "Z2",
            "F": {"degree": 3, "table": {"1,1,1": "-1"}},
            "R": [["1"], ["1", "zeta(4,1)"]],
        });
        let cat = from_generator_json(&v).unwrap();
        let semion = pointed_preset("semion").unwrap();
        assert!(cat.presentation_diff(&semion).is_empty());
    }

    #[test]
    fn degeneration_to_dw() {
        let z2 = GroupPresentation::cyclic(2);
        let yet = gen_yetter_2group(z2.clone(), GroupPresentation::trivial(), YetterOmega::Trivial)
            .unwrap();
        let dw = gen_twisted_dw(z2, None).unwrap();
        let diff = yet.presentation_diff(&dw);
        assert!(diff.is_empty(), "{diff:?}");
    }

    #[test]
    fn degeneration_to_pointed() {
        let z2 = GroupPresentation::cyclic(2);
        let yet = gen_yetter_2group(GroupPresentation::trivial(), z2.clone(), YetterOmega::Trivial)
            .unwrap();
        let pointed = gen_pointed_braided(
            z2,
            CochainTable::trivial(3, 2),
            CochainTable::trivial(2, 2),
            vec![Cyclotomic::one(); 2],
        )
        .unwrap();
        let diff = yet.presentation_diff(&pointed);
        assert!(diff.is_empty(), "{diff:?}");
    }
}
