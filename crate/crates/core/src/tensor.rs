//! Small dense tensors over the cyclotomic field, with axes named by
//! simplices of the ambient complex.
//!
//! A tensor axis carries the vertex tuple of a 3-simplex, a variance sign
//! (+1 for an associator space, -1 for its reversed counterpart), and a role:
//! `In` axes consume vectors (slots of a multilinear functional), `Out` axes
//! produce them (legs of a copairing).  Contraction matches an `Out` axis to
//! the `In` axis with the same key, so the order in which tensors are merged
//! never affects which pairs are summed.

use crate::scalar::{Cyclotomic, ScalarError};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AxisKey {
    pub simplex: Vec<u32>,
    pub sign: i8,
}

impl fmt::Display for AxisKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verts: Vec<String> = self.simplex.iter().map(|v| v.to_string()).collect();
        write!(
            f,
            "V{}({})",
            if self.sign >= 0 { "+" } else { "-" },
            verts.join(",")
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    In,
    Out,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axis {
    pub key: AxisKey,
    pub role: Role,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedTensor {
    pub axes: Vec<Axis>,
    pub data: Vec<Cyclotomic>,
}

impl NamedTensor {
    pub fn scalar(value: Cyclotomic) -> Self {
        NamedTensor {
            axes: Vec::new(),
            data: vec![value],
        }
    }

    pub fn new(axes: Vec<Axis>, data: Vec<Cyclotomic>) -> Self {
        let size: usize = axes.iter().map(|a| a.dim).product();
        assert_eq!(size, data.len(), "tensor data does not match axis dims");
        NamedTensor { axes, data }
    }

    pub fn rank(&self) -> usize {
        self.axes.len()
    }

    pub fn size(&self) -> usize {
        self.data.len()
    }

    pub fn is_scalar(&self) -> bool {
        self.axes.is_empty()
    }

    pub fn into_scalar(self) -> Cyclotomic {
        assert!(self.is_scalar(), "tensor of rank {} is not a scalar", self.rank());
        self.data.into_iter().next().unwrap()
    }

    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1usize; self.axes.len()];
        for i in (0..self.axes.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.axes[i + 1].dim;
        }
        strides
    }

    /// Reorder axes into the canonical (key, role) order.
    pub fn canonicalized(&self) -> NamedTensor {
        let mut perm: Vec<usize> = (0..self.axes.len()).collect();
        perm.sort_by(|&a, &b| {
            (&self.axes[a].key, self.axes[a].role).cmp(&(&self.axes[b].key, self.axes[b].role))
        });
        self.permuted(&perm)
    }

    /// New tensor whose axis i is the old axis perm[i].
    pub fn permuted(&self, perm: &[usize]) -> NamedTensor {
        assert_eq!(perm.len(), self.axes.len());
        let new_axes: Vec<Axis> = perm.iter().map(|&i| self.axes[i].clone()).collect();
        let old_strides = self.strides();
        let shape: Vec<usize> = new_axes.iter().map(|a| a.dim).collect();
        let mut data = vec![Cyclotomic::zero(); self.data.len()];
        let mut idx = vec![0usize; shape.len()];
        for slot in data.iter_mut() {
            let mut off = 0;
            for (k, &i) in idx.iter().enumerate() {
                off += i * old_strides[perm[k]];
            }
            *slot = self.data[off].clone();
            increment(&mut idx, &shape);
        }
        NamedTensor::new(new_axes, data)
    }

    /// Contract all internally matched (In, Out) axis pairs with equal keys.
    pub fn self_contracted(&self) -> NamedTensor {
        let pairs = internal_pairs(&self.axes);
        if pairs.is_empty() {
            return self.clone();
        }
        let paired: Vec<usize> = pairs.iter().flat_map(|&(i, j)| [i, j]).collect();
        let keep: Vec<usize> = (0..self.axes.len()).filter(|i| !paired.contains(i)).collect();
        let strides = self.strides();
        let keep_axes: Vec<Axis> = keep.iter().map(|&i| self.axes[i].clone()).collect();
        let keep_shape: Vec<usize> = keep_axes.iter().map(|a| a.dim).collect();
        let sum_shape: Vec<usize> = pairs.iter().map(|&(i, _)| self.axes[i].dim).collect();
        let out_size: usize = keep_shape.iter().product();
        let mut data = vec![Cyclotomic::zero(); out_size];
        let mut kidx = vec![0usize; keep.len()];
        for out_slot in data.iter_mut() {
            let base: usize = kidx
                .iter()
                .zip(keep.iter())
                .map(|(&i, &ax)| i * strides[ax])
                .sum();
            let mut sidx = vec![0usize; pairs.len()];
            let mut acc = Cyclotomic::zero();
            loop {
                let mut off = base;
                for (k, &(i, j)) in pairs.iter().enumerate() {
                    off += sidx[k] * (strides[i] + strides[j]);
                }
                acc = acc.add(&self.data[off]);
                if !increment(&mut sidx, &sum_shape) {
                    break;
                }
            }
            *out_slot = acc;
            increment(&mut kidx, &keep_shape);
        }
        NamedTensor::new(keep_axes, data)
    }

    /// Outer product followed by contraction of every matched pair between
    /// (and within) the factors.
    pub fn contract(&self, other: &NamedTensor) -> NamedTensor {
        let sa = self.strides();
        let sb = other.strides();
        // Matched pairs across the two tensors: same key, opposite roles.
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        let mut used_b: Vec<bool> = vec![false; other.axes.len()];
        for (i, ax) in self.axes.iter().enumerate() {
            for (j, bx) in other.axes.iter().enumerate() {
                if !used_b[j] && ax.key == bx.key && ax.role != bx.role {
                    assert_eq!(
                        ax.dim, bx.dim,
                        "axis {} has mismatched dims {} vs {}",
                        ax.key, ax.dim, bx.dim
                    );
                    pairs.push((i, j));
                    used_b[j] = true;
                    break;
                }
            }
        }
        let a_paired: Vec<usize> = pairs.iter().map(|&(i, _)| i).collect();
        let b_paired: Vec<usize> = pairs.iter().map(|&(_, j)| j).collect();
        let a_keep: Vec<usize> = (0..self.axes.len()).filter(|i| !a_paired.contains(i)).collect();
        let b_keep: Vec<usize> = (0..other.axes.len()).filter(|j| !b_paired.contains(j)).collect();
        let mut axes: Vec<Axis> = a_keep.iter().map(|&i| self.axes[i].clone()).collect();
        axes.extend(b_keep.iter().map(|&j| other.axes[j].clone()));
        let shape: Vec<usize> = axes.iter().map(|a| a.dim).collect();
        let sum_shape: Vec<usize> = pairs.iter().map(|&(i, _)| self.axes[i].dim).collect();
        let out_size: usize = shape.iter().product();
        let mut data = vec![Cyclotomic::zero(); out_size];
        let mut oidx = vec![0usize; axes.len()];
        for out_slot in data.iter_mut() {
            let mut abase = 0usize;
            let mut bbase = 0usize;
            for (k, &i) in oidx.iter().enumerate() {
                if k < a_keep.len() {
                    abase += i * sa[a_keep[k]];
                } else {
                    bbase += i * sb[b_keep[k - a_keep.len()]];
                }
            }
            let mut sidx = vec![0usize; pairs.len()];
            let mut acc = Cyclotomic::zero();
            loop {
                let mut aoff = abase;
                let mut boff = bbase;
                for (k, &(i, j)) in pairs.iter().enumerate() {
                    aoff += sidx[k] * sa[i];
                    boff += sidx[k] * sb[j];
                }
                acc = acc.add(&self.data[aoff].mul(&other.data[boff]));
                if !increment(&mut sidx, &sum_shape) {
                    break;
                }
            }
            *out_slot = acc;
            increment(&mut oidx, &shape);
        }
        NamedTensor::new(axes, data).self_contracted()
    }

    pub fn scale(&self, factor: &Cyclotomic) -> NamedTensor {
        NamedTensor {
            axes: self.axes.clone(),
            data: self.data.iter().map(|x| x.mul(factor)).collect(),
        }
    }

    pub fn add_assign(&mut self, other: &NamedTensor) {
        assert_eq!(self.axes, other.axes, "tensor sum requires identical axes");
        for (a, b) in self.data.iter_mut().zip(other.data.iter()) {
            *a = a.add(b);
        }
    }

    pub fn is_all_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }
}

fn internal_pairs(axes: &[Axis]) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    let mut used = vec![false; axes.len()];
    for i in 0..axes.len() {
        if used[i] {
            continue;
        }
        for j in (i + 1)..axes.len() {
            if !used[j] && axes[i].key == axes[j].key && axes[i].role != axes[j].role {
                assert_eq!(axes[i].dim, axes[j].dim);
                pairs.push((i, j));
                used[i] = true;
                used[j] = true;
                break;
            }
        }
    }
    pairs
}

/// Advance a row-major multi-index; returns false on wraparound.
fn increment(idx: &mut [usize], shape: &[usize]) -> bool {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < shape[k] {
            return true;
        }
        idx[k] = 0;
    }
    false
}

/// One merge in a contraction schedule, in terms of node slots: the two
/// source slots are drained and the result is appended as a fresh slot.
#[derive(Debug, Clone)]
pub struct PlanStep {
    pub left: usize,
    pub right: usize,
    pub eliminated: Vec<AxisKey>,
    pub result_rank: usize,
    pub result_size: u128,
}

#[derive(Debug, Clone)]
pub struct ContractionPlan {
    pub initial_nodes: usize,
    pub steps: Vec<PlanStep>,
    pub max_intermediate_size: u128,
    pub max_intermediate_rank: usize,
}

/// Axis skeleton used for planning: keys with roles and dims, no data.
pub type NodeSkeleton = Vec<Axis>;

fn skeleton_merge(a: &NodeSkeleton, b: &NodeSkeleton) -> (NodeSkeleton, Vec<AxisKey>) {
    let mut out: Vec<Axis> = Vec::new();
    let mut eliminated: Vec<AxisKey> = Vec::new();
    let mut consumed_b = vec![false; b.len()];
    for ax in a {
        if let Some(j) = b
            .iter()
            .enumerate()
            .position(|(j, bx)| !consumed_b[j] && bx.key == ax.key && bx.role != ax.role)
        {
            consumed_b[j] = true;
            eliminated.push(ax.key.clone());
        } else {
            out.push(ax.clone());
        }
    }
    for (j, bx) in b.iter().enumerate() {
        if !consumed_b[j] {
            out.push(bx.clone());
        }
    }
    // Internal matches in the concatenation.
    let pairs = internal_pairs(&out);
    if !pairs.is_empty() {
        let drop: Vec<usize> = pairs.iter().flat_map(|&(i, j)| [i, j]).collect();
        for &(i, _) in &pairs {
            eliminated.push(out[i].key.clone());
        }
        out = out
            .into_iter()
            .enumerate()
            .filter(|(i, _)| !drop.contains(i))
            .map(|(_, ax)| ax)
            .collect();
    }
    (out, eliminated)
}

fn skeleton_size(s: &NodeSkeleton) -> u128 {
    s.iter().map(|a| a.dim as u128).product()
}

/// Greedy pairwise schedule: repeatedly merge the connected pair whose result
/// is smallest, breaking ties by slot index.  Disconnected remainders are
/// merged by outer product at the end.
pub fn plan_greedy(nodes: &[NodeSkeleton]) -> ContractionPlan {
    let mut slots: Vec<Option<NodeSkeleton>> = nodes.iter().cloned().map(Some).collect();
    let mut steps: Vec<PlanStep> = Vec::new();
    let mut max_size: u128 = slots
        .iter()
        .flatten()
        .map(|s| skeleton_size(s))
        .max()
        .unwrap_or(1);
    let mut max_rank: usize = slots.iter().flatten().map(|s| s.len()).max().unwrap_or(0);
    loop {
        let live: Vec<usize> = (0..slots.len()).filter(|&i| slots[i].is_some()).collect();
        if live.len() <= 1 {
            break;
        }
        let mut best: Option<(u128, usize, usize, NodeSkeleton, Vec<AxisKey>)> = None;
        for (pi, &i) in live.iter().enumerate() {
            for &j in &live[pi + 1..] {
                let a = slots[i].as_ref().unwrap();
                let b = slots[j].as_ref().unwrap();
                let shares = a.iter().any(|ax| {
                    b.iter().any(|bx| bx.key == ax.key && bx.role != ax.role)
                });
                if !shares {
                    continue;
                }
                let (merged, eliminated) = skeleton_merge(a, b);
                let cost = skeleton_size(&merged);
                if best.as_ref().map(|(c, ..)| cost < *c).unwrap_or(true) {
                    best = Some((cost, i, j, merged, eliminated));
                }
            }
        }
        let (i, j, merged, eliminated) = match best {
            Some((_, i, j, m, e)) => (i, j, m, e),
            None => {
                // No connected pair: outer-product the two lowest slots.
                let i = live[0];
                let j = live[1];
                let (m, e) = skeleton_merge(
                    slots[i].as_ref().unwrap(),
                    slots[j].as_ref().unwrap(),
                );
                (i, j, m, e)
            }
        };
        let size = skeleton_size(&merged);
        let rank = merged.len();
        max_size = max_size.max(size);
        max_rank = max_rank.max(rank);
        steps.push(PlanStep {
            left: i,
            right: j,
            eliminated,
            result_rank: rank,
            result_size: size,
        });
        slots[i] = None;
        slots[j] = None;
        slots.push(Some(merged));
    }
    ContractionPlan {
        initial_nodes: nodes.len(),
        steps,
        max_intermediate_size: max_size,
        max_intermediate_rank: max_rank,
    }
}

/// Execute a schedule produced by `plan_greedy` over concrete tensors laid out
/// in the same initial slot order.  Returns the single remaining tensor.
pub fn execute_plan(plan: &ContractionPlan, tensors: Vec<NamedTensor>) -> NamedTensor {
    assert_eq!(plan.initial_nodes, tensors.len());
    let mut slots: Vec<Option<NamedTensor>> = tensors.into_iter().map(Some).collect();
    for step in &plan.steps {
        let a = slots[step.left].take().expect("plan reuses drained slot");
        let b = slots[step.right].take().expect("plan reuses drained slot");
        slots.push(Some(a.contract(&b)));
    }
    let mut remaining: Vec<NamedTensor> = slots.into_iter().flatten().collect();
    let mut acc = remaining.pop().expect("empty contraction network");
    while let Some(t) = remaining.pop() {
        acc = acc.contract(&t);
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Cyclotomic>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Cyclotomic>) -> Self {
        assert_eq!(rows * cols, data.len());
        Matrix { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![Cyclotomic::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = Cyclotomic::one();
        }
        Matrix {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn get(&self, r: usize, c: usize) -> &Cyclotomic {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Cyclotomic) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::new(
            self.rows,
            other.cols,
            vec![Cyclotomic::zero(); self.rows * other.cols],
        );
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let v = out.get(r, c).add(&a.mul(other.get(k, c)));
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    /// Exact inverse by Gauss-Jordan elimination; `Err` if singular.
    pub fn inverse(&self) -> Result<Matrix, ScalarError> {
        assert_eq!(self.rows, self.cols, "only square matrices invert");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero());
            let Some(pivot) = pivot else {
                return Err(ScalarError::DivisionByZero);
            };
            if pivot != col {
                for c in 0..n {
                    a.data.swap(pivot * n + c, col * n + c);
                    inv.data.swap(pivot * n + c, col * n + c);
                }
            }
            let pinv = a.get(col, col).inv()?;
            for c in 0..n {
                let av = a.get(col, c).mul(&pinv);
                a.set(col, c, av);
                let iv = inv.get(col, c).mul(&pinv);
                inv.set(col, c, iv);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for c in 0..n {
                    let av = a.get(r, c).sub(&f.mul(a.get(col, c)));
                    a.set(r, c, av);
                    let iv = inv.get(r, c).sub(&f.mul(inv.get(col, c)));
                    inv.set(r, c, iv);
                }
            }
        }
        Ok(inv)
    }
}
