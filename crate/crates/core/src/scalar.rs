//! Exact arithmetic in the union of cyclotomic fields Q(zeta_N).
//!
//! A value is stored at its minimal conductor N as a rational-coefficient
//! polynomial in zeta_N of degree < phi(N), reduced modulo the N-th
//! cyclotomic polynomial.  Because the representation is canonical,
//! structural equality coincides with field equality.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;
use serde_json::{json, Value};
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid scalar encoding: {0}")]
    Parse(String),
}

/// Euler totient.
pub fn phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

fn prime_factors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            out.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Integer coefficients of the n-th cyclotomic polynomial, little endian.
/// Computed by exact division of x^n - 1 by the proper-divisor cyclotomics.
fn cyclotomic_poly(n: u64) -> Vec<BigInt> {
    static CACHE: Lazy<Mutex<HashMap<u64, Vec<BigInt>>>> =
        Lazy::new(|| Mutex::new(HashMap::new()));
    if let Some(p) = CACHE.lock().unwrap().get(&n) {
        return p.clone();
    }
    let poly = if n == 1 {
        vec![BigInt::from(-1), BigInt::from(1)]
    } else {
        // x^n - 1
        let mut num = vec![BigInt::from(0); (n + 1) as usize];
        num[0] = BigInt::from(-1);
        num[n as usize] = BigInt::from(1);
        for d in 1..n {
            if n % d == 0 {
                num = int_poly_div_exact(&num, &cyclotomic_poly(d));
            }
        }
        num
    };
    CACHE.lock().unwrap().insert(n, poly.clone());
    poly
}

/// Exact division of integer polynomials; the divisor must be monic and divide evenly.
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let nd = rem.len() - 1;
    assert!(nd >= dd);
    let mut quot = vec![BigInt::from(0); nd - dd + 1];
    for k in (0..=(nd - dd)).rev() {
        let c = rem[k + dd].clone();
        if !c.is_zero() {
            for i in 0..=dd {
                let t = &den[i] * &c;
                rem[k + i] -= t;
            }
        }
        quot[k] = c;
    }
    assert!(rem.iter().all(|c| c.is_zero()), "division not exact");
    trim_int(&mut quot);
    quot
}

fn trim_int(p: &mut Vec<BigInt>) {
    while p.len() > 1 && p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
}

fn trim_rat(p: &mut Vec<Rational>) {
    while let Some(c) = p.last() {
        if c.is_zero() && p.len() > 0 {
            p.pop();
        } else {
            break;
        }
    }
}

/// Remainder of a rational polynomial modulo a monic integer polynomial.
fn poly_rem(poly: &[Rational], modulus: &[BigInt]) -> Vec<Rational> {
    let dd = modulus.len() - 1;
    let mut rem: Vec<Rational> = poly.to_vec();
    while rem.len() > dd {
        let k = rem.len() - 1;
        let c = rem[k].clone();
        if !c.is_zero() {
            for i in 0..dd {
                let t = Rational::from(modulus[i].clone()) * &c;
                rem[k - dd + i] -= t;
            }
        }
        rem.pop();
    }
    rem.resize(dd, Rational::zero());
    rem
}

/// Exact cyclotomic number in canonical form: minimal conductor, coefficients
/// over the power basis 1, zeta_N, ..., zeta_N^(phi(N)-1).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    conductor: u64,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic {
            conductor: 1,
            coeffs: vec![Rational::zero()],
        }
    }

    pub fn one() -> Self {
        Cyclotomic {
            conductor: 1,
            coeffs: vec![Rational::one()],
        }
    }

    pub fn from_rational(q: Rational) -> Self {
        Cyclotomic {
            conductor: 1,
            coeffs: vec![q],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from(BigInt::from(n)))
    }

    /// zeta_n^k, the primitive n-th root of unity raised to the k-th power.
    pub fn zeta(n: u64, k: i64) -> Self {
        assert!(n >= 1, "root order must be positive");
        let kk = k.rem_euclid(n as i64) as u64;
        let deg = phi(n) as usize;
        let mut poly = vec![Rational::zero(); (kk as usize) + 1];
        poly[kk as usize] = Rational::one();
        let mut coeffs = poly_rem(&poly, &cyclotomic_poly(n));
        coeffs.resize(deg, Rational::zero());
        Cyclotomic {
            conductor: n,
            coeffs,
        }
        .reduced()
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.conductor == 1 && self.coeffs[0].is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.conductor == 1 && self.coeffs[0].is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.conductor == 1
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.conductor == 1 {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// Rewrite at conductor m, which must be a multiple of the current conductor.
    fn lift(&self, m: u64) -> Vec<Rational> {
        assert!(m % self.conductor == 0);
        let step = (m / self.conductor) as usize;
        let mut poly = vec![Rational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                poly[i * step] = c.clone();
            }
        }
        let deg = phi(m) as usize;
        let mut out = poly_rem(&poly, &cyclotomic_poly(m));
        out.resize(deg, Rational::zero());
        out
    }

    /// Canonicalize: descend to the minimal conductor.
    fn reduced(mut self) -> Self {
        loop {
            if self.conductor == 1 {
                return self;
            }
            let mut descended = false;
            for p in prime_factors(self.conductor) {
                let m = self.conductor / p;
                if let Some(down) = self.try_descend(m) {
                    self = down;
                    descended = true;
                    break;
                }
            }
            if !descended {
                return self;
            }
        }
    }

    /// Attempt to rewrite the value in Q(zeta_m) for a proper divisor m of the conductor.
    fn try_descend(&self, m: u64) -> Option<Cyclotomic> {
        let n = self.conductor;
        let step = (n / m) as usize;
        let dn = phi(n) as usize;
        let dm = phi(m) as usize;
        let modulus = cyclotomic_poly(n);
        // Columns: zeta_n^(step*j) reduced mod Phi_n, for j < phi(m).
        let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(dm);
        for j in 0..dm {
            let mut poly = vec![Rational::zero(); step * j + 1];
            poly[step * j] = Rational::one();
            let mut col = poly_rem(&poly, &modulus);
            col.resize(dn, Rational::zero());
            cols.push(col);
        }
        let sol = solve_rational_system(&cols, &self.coeffs, dn, dm)?;
        Some(Cyclotomic {
            conductor: m,
            coeffs: sol,
        })
    }

    pub fn add(&self, other: &Cyclotomic) -> Cyclotomic {
        let m = num_integer::lcm(self.conductor, other.conductor);
        let a = self.lift(m);
        let b = other.lift(m);
        let coeffs: Vec<Rational> = a.iter().zip(b.iter()).map(|(x, y)| x + y).collect();
        Cyclotomic {
            conductor: m,
            coeffs,
        }
        .reduced()
    }

    pub fn neg(&self) -> Cyclotomic {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Cyclotomic) -> Cyclotomic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Cyclotomic) -> Cyclotomic {
        if self.is_zero() || other.is_zero() {
            return Cyclotomic::zero();
        }
        if self.conductor == 1 {
            let q = &self.coeffs[0];
            return Cyclotomic {
                conductor: other.conductor,
                coeffs: other.coeffs.iter().map(|c| c * q).collect(),
            }
            .reduced();
        }
        if other.conductor == 1 {
            return other.mul(self);
        }
        let m = num_integer::lcm(self.conductor, other.conductor);
        let a = self.lift(m);
        let b = other.lift(m);
        let mut prod = vec![Rational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let deg = phi(m) as usize;
        let mut coeffs = poly_rem(&prod, &cyclotomic_poly(m));
        coeffs.resize(deg, Rational::zero());
        Cyclotomic {
            conductor: m,
            coeffs,
        }
        .reduced()
    }

    pub fn inv(&self) -> Result<Cyclotomic, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if self.conductor == 1 {
            return Ok(Cyclotomic::from_rational(
                Rational::one() / self.coeffs[0].clone(),
            ));
        }
        // Extended Euclid in Q[x]: s*v + t*Phi_N = 1, so v^-1 = s mod Phi_N.
        let modulus: Vec<Rational> = cyclotomic_poly(self.conductor)
            .iter()
            .map(|c| Rational::from(c.clone()))
            .collect();
        let mut v = self.coeffs.clone();
        trim_rat(&mut v);
        let (g, s) = poly_ext_gcd(&v, &modulus);
        // g is a nonzero constant since Phi_N is irreducible and v is nonzero mod Phi_N.
        assert!(g.len() == 1 && !g[0].is_zero(), "gcd with Phi_N not constant");
        let ginv = Rational::one() / g[0].clone();
        let mut inv_poly: Vec<Rational> = s.iter().map(|c| c * &ginv).collect();
        let deg = phi(self.conductor) as usize;
        inv_poly = poly_rem(&inv_poly, &cyclotomic_poly(self.conductor));
        inv_poly.resize(deg, Rational::zero());
        Ok(Cyclotomic {
            conductor: self.conductor,
            coeffs: inv_poly,
        }
        .reduced())
    }

    pub fn div(&self, other: &Cyclotomic) -> Result<Cyclotomic, ScalarError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Cyclotomic, ScalarError> {
        if e == 0 {
            return Ok(Cyclotomic::one());
        }
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Cyclotomic::one();
        let mut b = base;
        let mut n = e.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&b);
            }
            n >>= 1;
            if n > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc)
    }

    /// Numeric evaluation as (re, im).
    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.conductor as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let x = rational_to_f64(c);
            let theta = 2.0 * std::f64::consts::PI * (i as f64) / n;
            re += x * theta.cos();
            im += x * theta.sin();
        }
        (re, im)
    }

    pub fn to_json(&self) -> Value {
        if let Some(q) = self.as_rational() {
            return Value::String(format_rational(q));
        }
        let coeffs: Vec<Value> = self
            .coeffs
            .iter()
            .map(|c| json!([c.numer().to_string(), c.denom().to_string()]))
            .collect();
        json!({ "conductor": self.conductor, "coeffs": coeffs })
    }

    pub fn from_json(v: &Value) -> Result<Cyclotomic, ScalarError> {
        match v {
            Value::String(s) => {
                let t = s.trim();
                let (neg, t) = match t.strip_prefix('-') {
                    Some(rest) if rest.trim_start().starts_with("zeta(") => (true, rest.trim_start()),
                    _ => (false, t),
                };
                if let Some(inner) = t.strip_prefix("zeta(").and_then(|r| r.strip_suffix(')')) {
                    let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
                    if parts.len() != 2 {
                        return Err(ScalarError::Parse(format!(
                            "zeta literal {s:?} must look like \"zeta(N,k)\""
                        )));
                    }
                    let n: u64 = parts[0]
                        .parse()
                        .map_err(|_| ScalarError::Parse(format!("bad zeta order in {s:?}")))?;
                    let k: i64 = parts[1]
                        .parse()
                        .map_err(|_| ScalarError::Parse(format!("bad zeta exponent in {s:?}")))?;
                    if n == 0 {
                        return Err(ScalarError::Parse("zeta order must be positive".into()));
                    }
                    let z = Cyclotomic::zeta(n, k);
                    return Ok(if neg { z.neg() } else { z });
                }
                Ok(Cyclotomic::from_rational(parse_rational(s)?))
            }
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(Cyclotomic::from_int(i))
                } else {
                    Err(ScalarError::Parse(format!(
                        "non-integer numeric scalar {n}; use \"q/p\" strings for exactness"
                    )))
                }
            }
            Value::Object(map) => {
                if let Some(z) = map.get("zeta") {
                    let pair = z.as_array().ok_or_else(|| {
                        ScalarError::Parse("\"zeta\" must be an array [N, k]".into())
                    })?;
                    if pair.len() != 2 {
                        return Err(ScalarError::Parse("\"zeta\" must have two entries".into()));
                    }
                    let n = pair[0]
                        .as_u64()
                        .ok_or_else(|| ScalarError::Parse("zeta order must be a positive integer".into()))?;
                    let k = pair[1]
                        .as_i64()
                        .ok_or_else(|| ScalarError::Parse("zeta exponent must be an integer".into()))?;
                    if n == 0 {
                        return Err(ScalarError::Parse("zeta order must be positive".into()));
                    }
                    return Ok(Cyclotomic::zeta(n, k));
                }
                let n = map
                    .get("conductor")
                    .and_then(|x| x.as_u64())
                    .ok_or_else(|| ScalarError::Parse("missing conductor".into()))?;
                if n == 0 {
                    return Err(ScalarError::Parse("conductor must be positive".into()));
                }
                let arr = map
                    .get("coeffs")
                    .and_then(|x| x.as_array())
                    .ok_or_else(|| ScalarError::Parse("missing coeffs".into()))?;
                if arr.len() > phi(n) as usize {
                    return Err(ScalarError::Parse(format!(
                        "coeffs length {} exceeds phi({}) = {}",
                        arr.len(),
                        n,
                        phi(n)
                    )));
                }
                let mut coeffs = Vec::with_capacity(arr.len());
                for entry in arr {
                    let pair = entry
                        .as_array()
                        .ok_or_else(|| ScalarError::Parse("coeff must be [num, den]".into()))?;
                    if pair.len() != 2 {
                        return Err(ScalarError::Parse("coeff must be [num, den]".into()));
                    }
                    let num = pair[0]
                        .as_str()
                        .ok_or_else(|| ScalarError::Parse("coeff entries are strings".into()))?;
                    let den = pair[1]
                        .as_str()
                        .ok_or_else(|| ScalarError::Parse("coeff entries are strings".into()))?;
                    let num = BigInt::from_str(num)
                        .map_err(|e| ScalarError::Parse(format!("bad integer {num:?}: {e}")))?;
                    let den = BigInt::from_str(den)
                        .map_err(|e| ScalarError::Parse(format!("bad integer {den:?}: {e}")))?;
                    if den.is_zero() {
                        return Err(ScalarError::Parse("zero denominator".into()));
                    }
                    coeffs.push(Rational::new(num, den));
                }
                coeffs.resize(phi(n) as usize, Rational::zero());
                Ok(Cyclotomic {
                    conductor: n,
                    coeffs,
                }
                .reduced())
            }
            _ => Err(ScalarError::Parse(format!("unsupported scalar encoding {v}"))),
        }
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if i == 0 {
                write!(f, "{}", format_rational(&mag))?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", format_rational(&mag))?;
                }
                if i == 1 {
                    write!(f, "z{}", self.conductor)?;
                } else {
                    write!(f, "z{}^{}", self.conductor, i)?;
                }
            }
        }
        Ok(())
    }
}

pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, ScalarError> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num =
        BigInt::from_str(num).map_err(|e| ScalarError::Parse(format!("bad rational {s:?}: {e}")))?;
    let den =
        BigInt::from_str(den).map_err(|e| ScalarError::Parse(format!("bad rational {s:?}: {e}")))?;
    if den.is_zero() {
        return Err(ScalarError::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    // Scale through 2^64 chunks to stay finite for large entries.
    let n = q.numer();
    let d = q.denom();
    let nf = bigint_to_f64(n);
    let df = bigint_to_f64(d);
    nf / df
}

fn bigint_to_f64(n: &BigInt) -> f64 {
    let s = n.to_string();
    s.parse::<f64>().unwrap_or(f64::NAN)
}

/// Format a float with 15 significant digits.
pub fn format_f64(x: f64) -> String {
    format!("{:.*e}", 14, x)
}

/// Solve sum_j cols[j] * x_j = target over Q.  Returns None if inconsistent.
fn solve_rational_system(
    cols: &[Vec<Rational>],
    target: &[Rational],
    rows: usize,
    ncols: usize,
) -> Option<Vec<Rational>> {
    // Build augmented matrix [cols | target], eliminate.
    let mut m: Vec<Vec<Rational>> = (0..rows)
        .map(|r| {
            let mut row: Vec<Rational> = (0..ncols).map(|c| cols[c][r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let mut pivot_rows: Vec<usize> = Vec::new();
    let mut r0 = 0;
    for c in 0..ncols {
        let Some(pr) = (r0..rows).find(|&r| !m[r][c].is_zero()) else {
            pivot_rows.push(usize::MAX);
            continue;
        };
        m.swap(r0, pr);
        let inv = Rational::one() / m[r0][c].clone();
        for x in m[r0].iter_mut() {
            *x *= &inv;
        }
        for r in 0..rows {
            if r != r0 && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in 0..=ncols {
                    let t = &m[r0][k] * &f;
                    m[r][k] -= t;
                }
            }
        }
        pivot_rows.push(r0);
        r0 += 1;
    }
    // Inconsistent if any zero row has nonzero augment.
    for r in r0..rows {
        if !m[r][ncols].is_zero() {
            return None;
        }
    }
    let mut sol = vec![Rational::zero(); ncols];
    for (c, &pr) in pivot_rows.iter().enumerate() {
        if pr != usize::MAX {
            sol[c] = m[pr][ncols].clone();
        }
    }
    // Verify (guards against free variables chosen as zero not matching).
    for r in 0..rows {
        let mut acc = Rational::zero();
        for c in 0..ncols {
            if !sol[c].is_zero() {
                acc += &cols[c][r] * &sol[c];
            }
        }
        if acc != target[r] {
            return None;
        }
    }
    Some(sol)
}

/// Extended gcd for rational polynomials: returns (g, s) with s*a = g mod b.
fn poly_ext_gcd(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r0: Vec<Rational> = a.to_vec();
    let mut r1: Vec<Rational> = b.to_vec();
    trim_rat(&mut r0);
    trim_rat(&mut r1);
    let mut s0 = vec![Rational::one()];
    let mut s1 = vec![Rational::zero()];
    while !(r1.len() == 1 && r1[0].is_zero()) && !r1.is_empty() {
        let (q, r) = poly_divmod(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        if r1.is_empty() {
            r1 = vec![Rational::zero()];
        }
    }
    (r0, s0)
}

fn poly_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem: Vec<Rational> = a.to_vec();
    trim_rat(&mut rem);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if rem.len() <= db {
        return (vec![Rational::zero()], rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - db];
    while rem.len() > db && !(rem.len() == 1 && rem[0].is_zero()) {
        let k = rem.len() - 1;
        let c = &rem[k] / &lead;
        if !c.is_zero() {
            quot[k - db] = c.clone();
            for i in 0..=db {
                let t = &b[i] * &c;
                rem[k - db + i] -= t;
            }
        }
        rem.pop();
        trim_rat(&mut rem);
        if rem.is_empty() {
            rem = vec![Rational::zero()];
            break;
        }
    }
    (quot, rem)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    trim_rat(&mut out);
    if out.is_empty() {
        out = vec![Rational::zero()];
    }
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = vec![Rational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim_rat(&mut out);
    if out.is_empty() {
        out = vec![Rational::zero()];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> Cyclotomic {
        Cyclotomic::from_int(n)
    }

    #[test]
    fn phi_small_values() {
        let expected = [(1u64, 1u64), (2, 1), (3, 2), (4, 2), (5, 4), (6, 2), (8, 4), (9, 6), (12, 4), (24, 8)];
        for (n, p) in expected {
            assert_eq!(phi(n), p, "phi({n})");
        }
    }

    #[test]
    fn cyclotomic_polynomials_match_known_tables() {
        let to_vec = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(cyclotomic_poly(1), to_vec(&[-1, 1]));
        assert_eq!(cyclotomic_poly(2), to_vec(&[1, 1]));
        assert_eq!(cyclotomic_poly(3), to_vec(&[1, 1, 1]));
        assert_eq!(cyclotomic_poly(4), to_vec(&[1, 0, 1]));
        assert_eq!(cyclotomic_poly(6), to_vec(&[1, -1, 1]));
        assert_eq!(cyclotomic_poly(8), to_vec(&[1, 0, 0, 0, 1]));
        assert_eq!(cyclotomic_poly(12), to_vec(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn zeta4_squares_to_minus_one() {
        let i = Cyclotomic::zeta(4, 1);
        assert_eq!(i.mul(&i), c(-1));
    }

    #[test]
    fn zeta_orders() {
        for n in 1..=16u64 {
            let z = Cyclotomic::zeta(n, 1);
            assert_eq!(z.pow(n as i64).unwrap(), c(1), "zeta_{n}^{n} = 1");
            for k in 1..n {
                assert_ne!(z.pow(k as i64).unwrap(), c(1), "zeta_{n}^{k} != 1");
            }
        }
    }

    #[test]
    fn conductor_is_minimal() {
        // zeta_6 lies in Q(zeta_3).
        assert_eq!(Cyclotomic::zeta(6, 1).conductor(), 3);
        // zeta_8^2 = i has conductor 4.
        assert_eq!(Cyclotomic::zeta(8, 2).conductor(), 4);
        // 1 + zeta_3 + zeta_3^2 = 0.
        let z3 = Cyclotomic::zeta(3, 1);
        let s = c(1).add(&z3).add(&z3.mul(&z3));
        assert!(s.is_zero());
        // zeta_8 + zeta_8^-1 = sqrt(2) stays at conductor 8.
        let z8 = Cyclotomic::zeta(8, 1);
        let r2 = z8.add(&Cyclotomic::zeta(8, -1));
        assert_eq!(r2.conductor(), 8);
        assert_eq!(r2.mul(&r2), c(2));
    }

    #[test]
    fn inverse_round_trips() {
        let samples = [
            c(7),
            Cyclotomic::from_rational(Rational::new(BigInt::from(-3), BigInt::from(5))),
            Cyclotomic::zeta(4, 1),
            Cyclotomic::zeta(3, 1).add(&c(2)),
            Cyclotomic::zeta(8, 1).add(&Cyclotomic::zeta(8, 3)).add(&c(1)),
            Cyclotomic::zeta(5, 2).sub(&Cyclotomic::zeta(5, 1)),
        ];
        for v in samples {
            let inv = v.inv().unwrap();
            assert_eq!(v.mul(&inv), c(1), "v * v^-1 = 1 for {v}");
        }
        assert_eq!(Cyclotomic::zero().inv(), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn golden_ratio_identity() {
        // (zeta_5 + zeta_5^4) satisfies x^2 + x - 1 = 0.
        let x = Cyclotomic::zeta(5, 1).add(&Cyclotomic::zeta(5, 4));
        let lhs = x.mul(&x).add(&x).sub(&c(1));
        assert!(lhs.is_zero());
    }

    #[test]
    fn to_complex_matches_known_values() {
        let (re, im) = Cyclotomic::zeta(4, 1).to_complex();
        assert!((re - 0.0).abs() < 1e-12 && (im - 1.0).abs() < 1e-12);
        let (re, im) = Cyclotomic::zeta(3, 1).to_complex();
        assert!((re + 0.5).abs() < 1e-12 && (im - 0.75f64.sqrt()).abs() < 1e-12);
        let half = Cyclotomic::from_rational(Rational::new(BigInt::from(1), BigInt::from(2)));
        let v = half.mul(&c(1).add(&Cyclotomic::zeta(4, 1)));
        let (re, im) = v.to_complex();
        assert!((re - 0.5).abs() < 1e-12 && (im - 0.5).abs() < 1e-12);
    }

    #[test]
    fn display_formats() {
        assert_eq!(Cyclotomic::zero().to_string(), "0");
        assert_eq!(c(5).to_string(), "5");
        let half = Rational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(Cyclotomic::from_rational(half.clone()).to_string(), "1/2");
        let v = Cyclotomic::from_rational(half.clone())
            .add(&Cyclotomic::from_rational(half).mul(&Cyclotomic::zeta(4, 1)));
        assert_eq!(v.to_string(), "1/2 + 1/2*z4");
        assert_eq!(Cyclotomic::zeta(4, 1).neg().to_string(), "-z4");
        let w = Cyclotomic::zeta(8, 1).sub(&Cyclotomic::zeta(8, 3));
        assert_eq!(w.to_string(), "z8 - z8^3");
    }

    #[test]
    fn json_round_trip() {
        let vals = [
            c(0),
            c(-3),
            Cyclotomic::from_rational(Rational::new(BigInt::from(2), BigInt::from(3))),
            Cyclotomic::zeta(4, 1),
            Cyclotomic::zeta(12, 5).add(&c(1)),
        ];
        for v in vals {
            let j = v.to_json();
            let back = Cyclotomic::from_json(&j).unwrap();
            assert_eq!(v, back);
        }
    }

    #[test]
    fn json_accepts_zeta_strings() {
        let v = Cyclotomic::from_json(&json!("zeta(4,1)")).unwrap();
        assert_eq!(v, Cyclotomic::zeta(4, 1));
        let v = Cyclotomic::from_json(&json!("-zeta(4,1)")).unwrap();
        assert_eq!(v, Cyclotomic::zeta(4, 1).neg());
        let v = Cyclotomic::from_json(&json!("zeta(3, 2)")).unwrap();
        assert_eq!(v, Cyclotomic::zeta(3, 2));
        assert!(Cyclotomic::from_json(&json!("zeta(0,1)")).is_err());
        assert!(Cyclotomic::from_json(&json!("zeta(4)")).is_err());
    }

    #[test]
    fn json_accepts_all_documented_encodings() {
        let v = Cyclotomic::from_json(&json!("3/4")).unwrap();
        assert_eq!(v, Cyclotomic::from_rational(Rational::new(BigInt::from(3), BigInt::from(4))));
        let v = Cyclotomic::from_json(&json!({"zeta": [8, 3]})).unwrap();
        assert_eq!(v, Cyclotomic::zeta(8, 3));
        let v = Cyclotomic::from_json(&json!({
            "conductor": 4,
            "coeffs": [["1", "2"], ["1", "2"]]
        }))
        .unwrap();
        assert_eq!(v.to_string(), "1/2 + 1/2*z4");
        assert_eq!(Cyclotomic::from_json(&json!(7)).unwrap(), c(7));
        assert!(Cyclotomic::from_json(&json!(0.5)).is_err());
        assert!(Cyclotomic::from_json(&json!({"zeta": [0, 1]})).is_err());
        assert!(Cyclotomic::from_json(&json!("1/0")).is_err());
    }

    #[test]
    fn mixed_conductor_arithmetic() {
        // (1 + zeta_3)(1 + zeta_4) expands and lands at conductor 12.
        let a = c(1).add(&Cyclotomic::zeta(3, 1));
        let b = c(1).add(&Cyclotomic::zeta(4, 1));
        let p = a.mul(&b);
        assert_eq!(p.conductor(), 12);
        let q = p.div(&b).unwrap();
        assert_eq!(q, a);
        // Numeric cross-check.
        let (re, im) = p.to_complex();
        let (ar, ai) = a.to_complex();
        let (br, bi) = b.to_complex();
        assert!((re - (ar * br - ai * bi)).abs() < 1e-12);
        assert!((im - (ar * bi + ai * br)).abs() < 1e-12);
    }
}
