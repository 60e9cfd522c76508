//! Finite groups as explicit Cayley tables, with the named presets used by
//! the category generators.

use serde_json::{json, Value};
use std::collections::HashMap;

use super::CatError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPresentation {
    pub name: String,
    pub elements: Vec<String>,
    /// mul[a][b] = index of a*b.
    pub mul: Vec<Vec<usize>>,
    pub unit: usize,
    pub inv: Vec<usize>,
}

impl GroupPresentation {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul[a][b] == self.mul[b][a]))
    }

    /// Build from elements and a Cayley table; derives unit and inverses and
    /// verifies the group laws over the full table.
    pub fn from_table(
        name: &str,
        elements: Vec<String>,
        mul: Vec<Vec<usize>>,
    ) -> Result<Self, CatError> {
        let n = elements.len();
        if n == 0 {
            return Err(CatError::Parse("group must have at least one element".into()));
        }
        {
            let mut seen = HashMap::new();
            for (i, e) in elements.iter().enumerate() {
                if seen.insert(e.clone(), i).is_some() {
                    return Err(CatError::Parse(format!("duplicate group element {e:?}")));
                }
            }
        }
        if mul.len() != n || mul.iter().any(|row| row.len() != n) {
            return Err(CatError::Parse("Cayley table must be square".into()));
        }
        if mul.iter().flatten().any(|&x| x >= n) {
            return Err(CatError::Parse("Cayley table entry out of range".into()));
        }
        let unit = (0..n)
            .find(|&e| (0..n).all(|a| mul[e][a] == a && mul[a][e] == a))
            .ok_or_else(|| CatError::Validation(vec!["group has no two-sided unit".into()]))?;
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            let i = (0..n)
                .find(|&b| mul[a][b] == unit && mul[b][a] == unit)
                .ok_or_else(|| {
                    CatError::Validation(vec![format!(
                        "element {:?} has no two-sided inverse",
                        elements[a]
                    )])
                })?;
            inv[a] = i;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(CatError::Validation(vec![format!(
                            "associativity fails at ({:?}, {:?}, {:?})",
                            elements[a], elements[b], elements[c]
                        )]));
                    }
                }
            }
        }
        Ok(GroupPresentation {
            name: name.to_string(),
            elements,
            mul,
            unit,
            inv,
        })
    }

    /// Cyclic group of order n with elements named "0".."n-1".
    pub fn cyclic(n: usize) -> Self {
        let elements: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let mul: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let name = if n == 1 { "Z1".to_string() } else { format!("Z{n}") };
        GroupPresentation::from_table(&name, elements, mul).expect("cyclic group")
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// Klein four-group with elements "00","01","10","11" (bitwise xor).
    pub fn z2xz2() -> Self {
        let elements: Vec<String> = ["00", "01", "10", "11"].iter().map(|s| s.to_string()).collect();
        let mul: Vec<Vec<usize>> = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
        GroupPresentation::from_table("Z2xZ2", elements, mul).expect("Klein group")
    }

    /// Symmetric group S3 as permutations of 3 letters; elements named by
    /// one-line notation "012", "120", ....
    pub fn s3() -> Self {
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [1, 2, 0],
            [2, 0, 1],
            [0, 2, 1],
            [2, 1, 0],
            [1, 0, 2],
        ];
        let elements: Vec<String> = perms
            .iter()
            .map(|p| p.iter().map(|d| d.to_string()).collect())
            .collect();
        let compose = |p: &[usize; 3], q: &[usize; 3]| -> [usize; 3] {
            // (p*q)(x) = p(q(x))
            [p[q[0]], p[q[1]], p[q[2]]]
        };
        let mul: Vec<Vec<usize>> = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| {
                        let r = compose(p, q);
                        perms.iter().position(|s| *s == r).unwrap()
                    })
                    .collect()
            })
            .collect();
        GroupPresentation::from_table("S3", elements, mul).expect("S3")
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "Z1" | "trivial" => Some(Self::trivial()),
            "Z2" => Some(Self::cyclic(2)),
            "Z3" => Some(Self::cyclic(3)),
            "Z4" => Some(Self::cyclic(4)),
            "Z2xZ2" => Some(Self::z2xz2()),
            "S3" => Some(Self::s3()),
            _ => None,
        }
    }

    pub fn element_index(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    /// Order of a single element.
    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.unit {
            x = self.mul[x][a];
            k += 1;
        }
        k
    }

    /// Decompose an abelian group as a direct product of cyclic subgroups:
    /// returns generators g_i with orders n_i such that every element is
    /// uniquely a product of powers.  Brute-force search, fine at desk scale.
    pub fn cyclic_decomposition(&self) -> Option<CyclicDecomposition> {
        if !self.is_abelian() {
            return None;
        }
        let n = self.order();
        if n == 1 {
            return Some(CyclicDecomposition {
                generators: vec![],
                orders: vec![],
                coords: vec![vec![]],
            });
        }
        // Try generator tuples of increasing length.
        for len in 1..=3 {
            let mut tuple = vec![0usize; len];
            if let Some(d) = self.try_tuples(&mut tuple, 0, len) {
                return Some(d);
            }
        }
        None
    }

    fn try_tuples(
        &self,
        tuple: &mut Vec<usize>,
        pos: usize,
        len: usize,
    ) -> Option<CyclicDecomposition> {
        if pos == len {
            return self.check_decomposition(tuple);
        }
        for g in 0..self.order() {
            tuple[pos] = g;
            if let Some(d) = self.try_tuples(tuple, pos + 1, len) {
                return Some(d);
            }
        }
        None
    }

    fn check_decomposition(&self, gens: &[usize]) -> Option<CyclicDecomposition> {
        let orders: Vec<usize> = gens.iter().map(|&g| self.element_order(g)).collect();
        if orders.iter().product::<usize>() != self.order() {
            return None;
        }
        let mut coords = vec![Vec::new(); self.order()];
        let mut seen = vec![false; self.order()];
        let mut exps = vec![0usize; gens.len()];
        loop {
            let mut x = self.unit;
            for (i, &g) in gens.iter().enumerate() {
                for _ in 0..exps[i] {
                    x = self.mul[x][g];
                }
            }
            if seen[x] {
                return None;
            }
            seen[x] = true;
            coords[x] = exps.clone();
            // Advance mixed-radix counter.
            let mut i = 0;
            loop {
                if i == gens.len() {
                    return Some(CyclicDecomposition {
                        generators: gens.to_vec(),
                        orders,
                        coords,
                    });
                }
                exps[i] += 1;
                if exps[i] < orders[i] {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "elements": self.elements,
            "mul": self.mul.iter()
                .map(|row| row.iter().map(|&x| json!(self.elements[x])).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(name: &str, v: &Value) -> Result<Self, CatError> {
        if let Some(s) = v.as_str() {
            return Self::preset(s)
                .ok_or_else(|| CatError::Parse(format!("unknown group preset {s:?}")));
        }
        let obj = v
            .as_object()
            .ok_or_else(|| CatError::Parse("group must be a preset name or an object".into()))?;
        let elements: Vec<String> = obj
            .get("elements")
            .and_then(|e| e.as_array())
            .ok_or_else(|| CatError::Parse("group.elements must be an array".into()))?
            .iter()
            .map(|x| match x {
                Value::String(s) => Ok(s.clone()),
                Value::Number(n) => Ok(n.to_string()),
                _ => Err(CatError::Parse("group elements must be strings".into())),
            })
            .collect::<Result<_, _>>()?;
        let index: HashMap<&str, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.as_str(), i))
            .collect();
        let mul_v = obj
            .get("mul")
            .and_then(|m| m.as_array())
            .ok_or_else(|| CatError::Parse("group.mul must be an array".into()))?;
        let mut mul = Vec::with_capacity(mul_v.len());
        for row in mul_v {
            let row_v = row
                .as_array()
                .ok_or_else(|| CatError::Parse("group.mul rows must be arrays".into()))?;
            let mut r = Vec::with_capacity(row_v.len());
            for x in row_v {
                let idx = match x {
                    Value::String(s) => *index
                        .get(s.as_str())
                        .ok_or_else(|| CatError::Parse(format!("unknown element {s:?} in mul")))?,
                    Value::Number(n) => {
                        let name = n.to_string();
                        *index.get(name.as_str()).ok_or_else(|| {
                            CatError::Parse(format!("unknown element {name:?} in mul"))
                        })?
                    }
                    _ => return Err(CatError::Parse("mul entries must be element names".into())),
                };
                r.push(idx);
            }
            mul.push(r);
        }
        Self::from_table(name, elements, mul)
    }
}

/// Result of decomposing a finite abelian group into cyclic factors.
#[derive(Debug, Clone)]
pub struct CyclicDecomposition {
    pub generators: Vec<usize>,
    pub orders: Vec<usize>,
    /// coords[element] = exponent vector over the generators.
    pub coords: Vec<Vec<usize>>,
}
