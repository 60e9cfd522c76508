//! Group cochains with values in the unit cyclotomics, the bar differential,
//! and cocycle validation with violation reporting.

use rand::Rng;
use serde_json::{json, Value};

use super::group::GroupPresentation;
use super::CatError;
use crate::scalar::Cyclotomic;

/// A k-cochain on a finite group: a full table of nonzero cyclotomic values
/// indexed by k-tuples of elements.  Stored dense; index is little-endian
/// mixed radix over the group order.
#[derive(Debug, Clone, PartialEq)]
pub struct CochainTable {
    pub degree: usize,
    pub order: usize,
    pub values: Vec<Cyclotomic>,
}

impl CochainTable {
    pub fn trivial(degree: usize, order: usize) -> Self {
        CochainTable {
            degree,
            order,
            values: vec![Cyclotomic::one(); order.pow(degree as u32)],
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|v| v.is_one())
    }

    fn index(&self, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), self.degree);
        let mut idx = 0;
        for &a in args.iter().rev() {
            idx = idx * self.order + a;
        }
        idx
    }

    pub fn get(&self, args: &[usize]) -> &Cyclotomic {
        &self.values[self.index(args)]
    }

    pub fn set(&mut self, args: &[usize], v: Cyclotomic) {
        let i = self.index(args);
        self.values[i] = v;
    }

    fn tuples(&self, degree: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
        let n = self.order;
        let total = n.pow(degree as u32);
        (0..total).map(move |mut i| {
            (0..degree)
                .map(|_| {
                    let d = i % n;
                    i /= n;
                    d
                })
                .collect()
        })
    }

    /// Bar differential: for w of degree k,
    ///   (dw)(g1..g_{k+1}) = w(g2..g_{k+1})
    ///     * prod_i w(g1, .., g_i g_{i+1}, .., g_{k+1})^{(-1)^i}
    ///     * w(g1..gk)^{(-1)^{k+1}}.
    pub fn differential(&self, group: &GroupPresentation) -> Result<CochainTable, CatError> {
        assert_eq!(group.order(), self.order);
        let k = self.degree;
        let mut out = CochainTable::trivial(k + 1, self.order);
        for args in out.tuples(k + 1).collect::<Vec<_>>() {
            let mut acc = self.get(&args[1..]).clone();
            for i in 1..=k {
                let mut inner: Vec<usize> = Vec::with_capacity(k);
                inner.extend_from_slice(&args[..i - 1]);
                inner.push(group.mul[args[i - 1]][args[i]]);
                inner.extend_from_slice(&args[i + 1..]);
                let f = self.get(&inner);
                if i % 2 == 1 {
                    let finv = f
                        .inv()
                        .map_err(|_| CatError::Validation(vec!["cochain has a zero value".into()]))?;
                    acc = acc.mul(&finv);
                } else {
                    acc = acc.mul(f);
                }
            }
            let last = self.get(&args[..k]);
            if (k + 1) % 2 == 1 {
                let linv = last
                    .inv()
                    .map_err(|_| CatError::Validation(vec!["cochain has a zero value".into()]))?;
                acc = acc.mul(&linv);
            } else {
                acc = acc.mul(last);
            }
            out.set(&args, acc);
        }
        Ok(out)
    }

    /// Checks d(self) == 1 pointwise.  On failure returns the violating
    /// tuples (as element names) for the report.
    pub fn validate_cocycle(&self, group: &GroupPresentation) -> Result<(), CatError> {
        if self.values.iter().any(|v| v.is_zero()) {
            return Err(CatError::InvalidCocycle {
                witness: "cochain contains a zero value".into(),
            });
        }
        let d = self.differential(group)?;
        let mut bad = Vec::new();
        for args in d.tuples(d.degree) {
            if !d.get(&args).is_one() {
                let names: Vec<&str> = args.iter().map(|&a| group.elements[a].as_str()).collect();
                bad.push(format!("({}) -> {}", names.join(", "), d.get(&args)));
                if bad.len() >= 5 {
                    break;
                }
            }
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(CatError::InvalidCocycle {
                witness: bad.join("; "),
            })
        }
    }

    /// Random cochain with values among the 8th roots of unity.  Used to
    /// exercise coboundary twists: d of any such cochain is a cocycle.
    pub fn random<R: Rng>(degree: usize, order: usize, rng: &mut R) -> Self {
        let mut t = CochainTable::trivial(degree, order);
        for v in t.values.iter_mut() {
            *v = Cyclotomic::zeta(8, rng.gen_range(0..8));
        }
        t
    }

    pub fn to_json(&self, group: &GroupPresentation) -> Value {
        let mut table = serde_json::Map::new();
        for args in self.tuples(self.degree) {
            let key = args
                .iter()
                .map(|&a| group.elements[a].clone())
                .collect::<Vec<_>>()
                .join(",");
            table.insert(key, self.get(&args).to_json());
        }
        json!({ "degree": self.degree, "table": Value::Object(table) })
    }

    pub fn from_json(degree: usize, group: &GroupPresentation, v: &Value) -> Result<Self, CatError> {
        if let Some(s) = v.as_str() {
            if s == "trivial" {
                return Ok(CochainTable::trivial(degree, group.order()));
            }
            return Err(CatError::Parse(format!("unknown cochain preset {s:?}")));
        }
        let obj = v
            .as_object()
            .ok_or_else(|| CatError::Parse("cochain must be \"trivial\" or an object".into()))?;
        if let Some(d) = obj.get("degree").and_then(|d| d.as_u64()) {
            if d as usize != degree {
                return Err(CatError::Parse(format!(
                    "expected a degree-{degree} cochain, file says {d}"
                )));
            }
        }
        let table = obj
            .get("table")
            .and_then(|t| t.as_object())
            .ok_or_else(|| CatError::Parse("cochain.table must be an object".into()))?;
        let mut out = CochainTable::trivial(degree, group.order());
        for (key, val) in table {
            let parts: Vec<&str> = if key.is_empty() { vec![] } else { key.split(',').collect() };
            if parts.len() != degree {
                return Err(CatError::Parse(format!(
                    "cochain key {key:?} has {} entries, expected {degree}",
                    parts.len()
                )));
            }
            let args: Vec<usize> = parts
                .iter()
                .map(|p| {
                    group
                        .element_index(p)
                        .ok_or_else(|| CatError::Parse(format!("unknown element {p:?} in cochain key")))
                })
                .collect::<Result<_, _>>()?;
            let sc = Cyclotomic::from_json(val)
                .map_err(|e| CatError::Parse(format!("cochain value for {key:?}: {e}")))?;
            out.set(&args, sc);
        }
        Ok(out)
    }
}
