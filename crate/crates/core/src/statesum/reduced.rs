//! Coboundary-reduced evaluation for pointed and Yetter-style categories.
//!
//! For these categories the triangle labels of an admissible state are
//! exactly the A-valued simplicial 2-cocycles of the complex, the edge labels
//! never interact with them, and the summand is invariant under shifting a
//! cocycle by a coboundary.  The sum over states therefore collapses to a sum
//! over cohomology class representatives, each scaled by the exact coboundary
//! count.  Representatives come from an integer diagonalization of the two
//! coboundary matrices, one cyclic factor of A at a time.
//!
//! The invariance claim is itself re-verified at run time: a batch of random
//! coboundary shifts on random admissible states must leave the normalized
//! summand exactly unchanged, and any violation surfaces as an error rather
//! than a silent fallback.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use super::{Engine, StateSumError, StateSumOptions};
use crate::category::group::GroupPresentation;
use crate::category::{CatBackend, Fusion2CatData, ObjId};
use crate::scalar::{Cyclotomic, Rational};
use crate::simplicial::OrderedOrientedComplex;

/// Guard against pathological inputs: the number of class representatives
/// enumerated per cyclic factor stays below this.
const MAX_REPS: usize = 1 << 22;

/// Reduced state sum.  Preconditions: the category is pointed or
/// Yetter-style with abelian coefficient group; otherwise `Unsupported`.
pub fn state_sum_reduced(
    oc: &OrderedOrientedComplex,
    cat: &Fusion2CatData,
    opts: &StateSumOptions,
) -> Result<Cyclotomic, StateSumError> {
    let coeff: &GroupPresentation = match &cat.backend {
        CatBackend::Pointed { group, .. } => group,
        CatBackend::Yetter { a, .. } => a,
        _ => {
            return Err(StateSumError::Unsupported(
                "reduced mode needs a pointed or Yetter-style category".into(),
            ))
        }
    };
    let cd = coeff.cyclic_decomposition().ok_or_else(|| {
        StateSumError::Unsupported("coefficient group is not abelian".into())
    })?;
    let eng = Engine::new(oc, cat)?;
    // The reduction identifies fusion indices with coefficient group
    // elements; every realizable fusion list must be the whole group.
    let n = coeff.order();
    for list in cat.fusion.values() {
        if !list.is_empty() && list.len() != n {
            return Err(StateSumError::Unsupported(format!(
                "fusion lists have {} entries, coefficient group has {n}",
                list.len()
            )));
        }
    }

    // Element index from one exponent per cyclic factor.
    let strides = {
        let mut s = Vec::with_capacity(cd.orders.len());
        let mut acc = 1usize;
        for &m in &cd.orders {
            s.push(acc);
            acc *= m;
        }
        s
    };
    let mut by_radix = vec![0usize; n.max(1)];
    for (x, exps) in cd.coords.iter().enumerate() {
        let idx: usize = exps.iter().zip(&strides).map(|(&e, &s)| e * s).sum();
        by_radix[idx] = x;
    }

    let basis = CocycleBasis::new(&eng)?;
    let mut factor_reps: Vec<Vec<Vec<usize>>> = Vec::with_capacity(cd.orders.len());
    let mut orbit = BigInt::one();
    for &m in &cd.orders {
        let (reps, coboundaries) = basis.classes_mod(m)?;
        factor_reps.push(reps);
        orbit *= coboundaries;
    }
    // Combine per-factor representatives into element-indexed triangle labels.
    let mut reps: Vec<Vec<usize>> = vec![vec![0usize; eng.n_tris]];
    for (f, list) in factor_reps.iter().enumerate() {
        let mut next = Vec::with_capacity(reps.len() * list.len());
        for base in &reps {
            for rep in list {
                let mut combined = base.clone();
                for (t, &v) in rep.iter().enumerate() {
                    combined[t] += v * strides[f];
                }
                next.push(combined);
            }
        }
        reps = next;
        if reps.len() > MAX_REPS {
            return Err(StateSumError::Unsupported(format!(
                "{} cohomology class representatives exceed the reduced-mode budget",
                reps.len()
            )));
        }
    }
    for rep in &mut reps {
        for v in rep.iter_mut() {
            *v = by_radix[*v];
        }
    }

    let mut edge_states: Vec<Vec<ObjId>> = Vec::new();
    eng.edge_scan(&mut |edges| {
        edge_states.push(edges.to_vec());
        Ok(true)
    })?;

    if !edge_states.is_empty() && opts.self_check_trials > 0 {
        self_check(&eng, &cd, &by_radix, &strides, &edge_states, &reps, opts)?;
    }

    let orbit_factor = Cyclotomic::from_rational(Rational::from_integer(orbit));
    let mut acc = Cyclotomic::zero();
    for edges in &edge_states {
        for rep in &reps {
            let term = eng.term_of((edges.as_slice(), rep.as_slice()))?;
            if !term.is_zero() {
                acc = acc.add(&term.mul(&orbit_factor));
            }
        }
    }
    Ok(acc)
}

/// Random-shift verification that the summand only depends on the cohomology
/// class.  Each trial takes a random admissible state (random edge state,
/// random class, random coboundary offset) and a second random coboundary,
/// and compares the normalized summands exactly.
#[allow(clippy::too_many_arguments)]
fn self_check(
    eng: &Engine,
    cd: &crate::category::group::CyclicDecomposition,
    by_radix: &[usize],
    strides: &[usize],
    edge_states: &[Vec<ObjId>],
    reps: &[Vec<usize>],
    opts: &StateSumOptions,
) -> Result<(), StateSumError> {
    let mut rng = ChaCha12Rng::seed_from_u64(opts.seed);
    let mut exps = vec![vec![0usize; eng.n_tris]; cd.orders.len()];
    for trial in 0..opts.self_check_trials {
        let edges = &edge_states[rng.gen_range(0..edge_states.len())];
        let rep = &reps[rng.gen_range(0..reps.len())];
        for (f, &m) in cd.orders.iter().enumerate() {
            for (t, slot) in exps[f].iter_mut().enumerate() {
                *slot = cd.coords[rep[t]][f];
            }
            shift_by_random_coboundary(eng, m, &mut exps[f], &mut rng);
        }
        let base = combine(&exps, strides, by_radix, eng.n_tris);
        let mut shifted_exps = exps.clone();
        for (f, &m) in cd.orders.iter().enumerate() {
            shift_by_random_coboundary(eng, m, &mut shifted_exps[f], &mut rng);
        }
        let shifted = combine(&shifted_exps, strides, by_radix, eng.n_tris);
        let a = eng.term_of((edges.as_slice(), base.as_slice()))?;
        let b = eng.term_of((edges.as_slice(), shifted.as_slice()))?;
        if a != b {
            return Err(StateSumError::ReductionSelfCheckFailed(format!(
                "trial {trial}: normalized summand moved under a coboundary shift \
                 ({a} vs {b}); labels are not constant on cohomology classes",
            )));
        }
    }
    Ok(())
}

/// In-place shift of one cyclic factor by the coboundary of a random
/// 1-cochain: (d mu)(v0 v1 v2) = mu(v1 v2) - mu(v0 v2) + mu(v0 v1).
fn shift_by_random_coboundary(
    eng: &Engine,
    m: usize,
    exps: &mut [usize],
    rng: &mut ChaCha12Rng,
) {
    let mu: Vec<usize> = (0..eng.n_edges).map(|_| rng.gen_range(0..m)).collect();
    for (t, slot) in exps.iter_mut().enumerate() {
        let [e01, e12, e02] = eng.tri_edges[t];
        let d = mu[e01] + mu[e12] + (m - mu[e02]);
        *slot = (*slot + d) % m;
    }
}

fn combine(exps: &[Vec<usize>], strides: &[usize], by_radix: &[usize], n_tris: usize) -> Vec<usize> {
    let mut out = vec![0usize; n_tris];
    for (t, slot) in out.iter_mut().enumerate() {
        let idx: usize = exps.iter().zip(strides).map(|(v, &s)| v[t] * s).sum();
        *slot = by_radix[idx];
    }
    out
}

/// Integer cochain data of the complex: diagonalized coboundary matrices with
/// the transforms needed to read off cocycle representatives mod any m.
struct CocycleBasis {
    n_tris: usize,
    /// Rank of the edge-to-triangle coboundary over the integers.
    rank2: usize,
    /// Nonzero diagonal of the edge-to-triangle coboundary.
    diag2: Vec<BigInt>,
    /// Inverse left transform of the first diagonalization: triangle labels
    /// are `linv2 * c` for coordinate vectors c.
    linv2: Vec<Vec<BigInt>>,
    /// Diagonal and rank of the constraint block: the triangle-to-tetrahedron
    /// coboundary in the new coordinates, restricted past the image block.
    diag3: Vec<BigInt>,
    rank3: usize,
    /// Right transform of the second diagonalization: kernel vectors are
    /// `right3 * z` for box vectors z.
    right3: Vec<Vec<BigInt>>,
}

impl CocycleBasis {
    fn new(eng: &Engine) -> Result<CocycleBasis, StateSumError> {
        let n_tris = eng.n_tris;
        let n_edges = eng.n_edges;
        let mut d2 = vec![vec![BigInt::zero(); n_edges]; n_tris];
        for (t, &[e01, e12, e02]) in eng.tri_edges.iter().enumerate() {
            d2[t][e01] += 1;
            d2[t][e12] += 1;
            d2[t][e02] -= 1;
        }
        let snf2 = diagonalize(d2);
        let rank2 = snf2.rank;
        // Constraint matrix in c-coordinates: rows are tetrahedra, columns the
        // c-coordinates; (d a)(v0..v3) = a(123) - a(023) + a(013) - a(012).
        let n_tets = eng.tet_tris.len();
        let mut m = vec![vec![BigInt::zero(); n_tris]; n_tets];
        for (row, &[t012, t013, t023, t123]) in eng.tet_tris.iter().enumerate() {
            for (j, cell) in m[row].iter_mut().enumerate() {
                let mut v = BigInt::zero();
                v += &snf2.linv[t123][j];
                v -= &snf2.linv[t023][j];
                v += &snf2.linv[t013][j];
                v -= &snf2.linv[t012][j];
                *cell = v;
            }
        }
        // The first rank2 columns express coboundaries, which are closed, so
        // they vanish identically over the integers.
        for row in &m {
            for cell in &row[..rank2] {
                assert!(cell.is_zero(), "coboundary of a coboundary is nonzero");
            }
        }
        let tail: Vec<Vec<BigInt>> = m
            .iter()
            .map(|row| row[rank2..].to_vec())
            .collect();
        let snf3 = diagonalize(tail);
        Ok(CocycleBasis {
            n_tris,
            rank2,
            diag2: snf2.diag,
            linv2: snf2.linv,
            diag3: snf3.diag,
            rank3: snf3.rank,
            right3: snf3.right,
        })
    }

    /// Cohomology class representatives mod m as triangle exponent vectors,
    /// together with the exact number of coboundaries mod m.
    fn classes_mod(&self, m: usize) -> Result<(Vec<Vec<usize>>, BigInt), StateSumError> {
        let mb = BigInt::from(m);
        let free = self.n_tris - self.rank2;
        // Radix per enumerated coordinate: torsion reps for the image block,
        // kernel steps for the constrained block, everything mod m beyond.
        let mut radix: Vec<usize> = Vec::with_capacity(self.n_tris);
        let mut step: Vec<usize> = Vec::with_capacity(self.n_tris);
        let mut coboundaries = BigInt::one();
        for d in &self.diag2[..self.rank2] {
            let g: BigInt = d.gcd(&mb);
            let g: usize = usize::try_from(&g).expect("gcd fits");
            radix.push(g);
            step.push(1);
            coboundaries *= m / g;
        }
        for e in &self.diag3[..self.rank3] {
            let h: BigInt = e.gcd(&mb);
            let h: usize = usize::try_from(&h).expect("gcd fits");
            radix.push(h);
            step.push(m / h);
        }
        for _ in self.rank3..free {
            radix.push(m);
            step.push(1);
        }
        let count = radix.iter().try_fold(1usize, |acc, &r| {
            acc.checked_mul(r).filter(|&c| c <= MAX_REPS)
        });
        let count = count.ok_or_else(|| {
            StateSumError::Unsupported(
                "cohomology class count exceeds the reduced-mode budget".into(),
            )
        })?;

        let mut reps = Vec::with_capacity(count);
        let mut digits = vec![0usize; radix.len()];
        loop {
            reps.push(self.rep_from_digits(&digits, &step, m));
            let mut k = 0;
            loop {
                if k == digits.len() {
                    return Ok((reps, coboundaries));
                }
                digits[k] += 1;
                if digits[k] < radix[k] {
                    break;
                }
                digits[k] = 0;
                k += 1;
            }
        }
    }

    fn rep_from_digits(&self, digits: &[usize], step: &[usize], m: usize) -> Vec<usize> {
        let mb = BigInt::from(m);
        // c-coordinates: torsion digits directly, then the kernel image of the
        // box digits under the right transform.
        let free = self.n_tris - self.rank2;
        let mut c = vec![BigInt::zero(); self.n_tris];
        for i in 0..self.rank2 {
            c[i] = BigInt::from(digits[i] * step[i]);
        }
        if free > 0 {
            let z: Vec<BigInt> = (0..free)
                .map(|j| BigInt::from(digits[self.rank2 + j] * step[self.rank2 + j]))
                .collect();
            for (i, slot) in c[self.rank2..].iter_mut().enumerate() {
                let mut acc = BigInt::zero();
                for (j, zj) in z.iter().enumerate() {
                    if !zj.is_zero() && !self.right3[i][j].is_zero() {
                        acc += &self.right3[i][j] * zj;
                    }
                }
                *slot = acc;
            }
        }
        // Back to triangle labels: a = linv2 * c, reduced mod m.
        let mut out = vec![0usize; self.n_tris];
        for (t, slot) in out.iter_mut().enumerate() {
            let mut acc = BigInt::zero();
            for (j, cj) in c.iter().enumerate() {
                if !cj.is_zero() && !self.linv2[t][j].is_zero() {
                    acc += &self.linv2[t][j] * cj;
                }
            }
            let r = acc.mod_floor(&mb);
            *slot = usize::try_from(&r).expect("residue fits");
        }
        out
    }
}

struct Diagonalized {
    /// Diagonal entries, nonzero first; length min(rows, cols).
    diag: Vec<BigInt>,
    rank: usize,
    /// Inverse of the row transform: original = linv * diagonal-coords.
    linv: Vec<Vec<BigInt>>,
    /// Column transform: kernel and image of the diagonal form pull back
    /// through it on the right.
    right: Vec<Vec<BigInt>>,
}

/// Diagonalizes an integer matrix by unimodular row and column operations,
/// tracking the inverse row transform and the forward column transform.  The
/// diagonal is not normalized to a divisibility chain; none of the downstream
/// formulas need it.
fn diagonalize(mut s: Vec<Vec<BigInt>>) -> Diagonalized {
    let rows = s.len();
    let cols = s.first().map(|r| r.len()).unwrap_or(0);
    let mut linv = identity(rows);
    let mut right = identity(cols);
    let n = rows.min(cols);
    let mut k = 0;
    while k < n {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let mut piv: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if s[i][j].is_zero() {
                    continue;
                }
                let better = match piv {
                    None => true,
                    Some((pi, pj)) => s[i][j].abs() < s[pi][pj].abs(),
                };
                if better {
                    piv = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = piv else { break };
        if pi != k {
            s.swap(pi, k);
            for row in linv.iter_mut() {
                row.swap(pi, k);
            }
        }
        if pj != k {
            for row in s.iter_mut() {
                row.swap(pj, k);
            }
            for row in right.iter_mut() {
                row.swap(pj, k);
            }
        }
        loop {
            let mut clean = true;
            for i in k + 1..rows {
                if s[i][k].is_zero() {
                    continue;
                }
                let q = s[i][k].div_floor(&s[k][k]);
                if !q.is_zero() {
                    row_sub(&mut s, &mut linv, i, k, &q);
                }
                if !s[i][k].is_zero() {
                    clean = false;
                }
            }
            for j in k + 1..cols {
                if s[k][j].is_zero() {
                    continue;
                }
                let q = s[k][j].div_floor(&s[k][k]);
                if !q.is_zero() {
                    col_sub(&mut s, &mut right, j, k, &q);
                }
                if !s[k][j].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
            // Residues are smaller than the pivot; promote the smallest one
            // and sweep again.  Strictly decreasing pivots, so this ends.
            let mut best: Option<(usize, usize)> = None;
            for i in k..rows {
                for j in k..cols {
                    if s[i][j].is_zero() {
                        continue;
                    }
                    let better = match best {
                        None => true,
                        Some((bi, bj)) => s[i][j].abs() < s[bi][bj].abs(),
                    };
                    if better {
                        best = Some((i, j));
                    }
                }
            }
            let (bi, bj) = best.expect("nonzero residue exists");
            if bi != k {
                s.swap(bi, k);
                for row in linv.iter_mut() {
                    row.swap(bi, k);
                }
            }
            if bj != k {
                for row in s.iter_mut() {
                    row.swap(bj, k);
                }
                for row in right.iter_mut() {
                    row.swap(bj, k);
                }
            }
        }
        if s[k][k].is_negative() {
            for row in s.iter_mut() {
                row[k] = -std::mem::take(&mut row[k]);
            }
            for row in right.iter_mut() {
                row[k] = -std::mem::take(&mut row[k]);
            }
        }
        k += 1;
    }
    let mut diag = vec![BigInt::zero(); n];
    for (i, d) in diag.iter_mut().enumerate().take(k) {
        *d = s[i][i].clone();
    }
    Diagonalized {
        diag,
        rank: k,
        linv,
        right,
    }
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigInt::one();
    }
    m
}

/// row_i -= q * row_k on the matrix; the inverse transform absorbs the
/// opposite column operation.
fn row_sub(s: &mut [Vec<BigInt>], linv: &mut [Vec<BigInt>], i: usize, k: usize, q: &BigInt) {
    let (rk, ri) = two_rows(s, k, i);
    for (a, b) in ri.iter_mut().zip(rk.iter()) {
        *a -= q * b;
    }
    // linv <- linv * E^-1 with E the row operation: col_k += q * col_i.
    for row in linv.iter_mut() {
        let add = q * &row[i];
        row[k] += add;
    }
}

/// col_j -= q * col_k on the matrix and on the column transform.
fn col_sub(s: &mut [Vec<BigInt>], right: &mut [Vec<BigInt>], j: usize, k: usize, q: &BigInt) {
    for row in s.iter_mut() {
        let sub = q * &row[k];
        row[j] -= sub;
    }
    for row in right.iter_mut() {
        let sub = q * &row[k];
        row[j] -= sub;
    }
}

fn two_rows<T>(s: &mut [Vec<T>], k: usize, i: usize) -> (&Vec<T>, &mut Vec<T>) {
    assert_ne!(k, i);
    if k < i {
        let (a, b) = s.split_at_mut(i);
        (&a[k], &mut b[0])
    } else {
        let (a, b) = s.split_at_mut(k);
        (&b[0], &mut a[i])
    }
}
