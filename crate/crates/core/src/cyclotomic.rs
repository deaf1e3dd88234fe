//! Exact sums of roots of unity.
//!
//! A value is stored in `ℚ(ζ_N)` for the least `N` whose field contains it,
//! as coefficients of `1, ζ_N, …, ζ_N^{φ(N)-1}` (the power basis modulo the
//! cyclotomic polynomial `Φ_N`). Both choices are unique, so structural
//! equality is value equality.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cochain::{Cochain, Phase};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Cyclotomic {
    conductor: u64,
    coeffs: Vec<BigRational>,
}

fn cyclotomic_poly(n: u64) -> Vec<i128> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<i128>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut p = vec![0i128; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        let q = cyclotomic_poly(d);
        p = divide_monic(&p, &q);
    }
    cache.lock().unwrap().insert(n, p.clone());
    p
}

fn divide_monic(a: &[i128], b: &[i128]) -> Vec<i128> {
    let (da, db) = (a.len() - 1, b.len() - 1);
    let mut rem = a.to_vec();
    let mut quot = vec![0i128; da - db + 1];
    for i in (0..=da - db).rev() {
        let c = rem[i + db];
        quot[i] = c;
        for j in 0..=db {
            rem[i + j] -= c * b[j];
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

fn totient(n: u64) -> usize {
    cyclotomic_poly(n).len() - 1
}

/// Reduces a polynomial in `ζ_N` modulo `Φ_N`.
fn reduce(mut poly: Vec<BigRational>, n: u64) -> Vec<BigRational> {
    let phi = cyclotomic_poly(n);
    let d = phi.len() - 1;
    for i in (d..poly.len()).rev() {
        if poly[i].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut poly[i], BigRational::zero());
        for j in 0..d {
            if phi[j] != 0 {
                poly[i - d + j] -= &c * BigRational::from_integer(BigInt::from(phi[j]));
            }
        }
    }
    poly.resize(d, BigRational::zero());
    poly
}

/// The image of `ζ_d^i` for each `i < φ(d)` in the power basis of `ℚ(ζ_n)`.
fn embedding_columns(d: u64, n: u64) -> Vec<Vec<BigRational>> {
    let step = (n / d) as usize;
    (0..totient(d))
        .map(|i| {
            let mut p = vec![BigRational::zero(); i * step + 1];
            p[i * step] = BigRational::one();
            reduce(p, n)
        })
        .collect()
}

/// Solves `Σ x_j · cols[j] = rhs` exactly, if possible.
fn solve(cols: &[Vec<BigRational>], rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    let (rows, ncols) = (rhs.len(), cols.len());
    let mut m: Vec<Vec<BigRational>> = (0..rows)
        .map(|r| cols.iter().map(|c| c[r].clone()).chain(std::iter::once(rhs[r].clone())).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for v in m[row].iter_mut() {
            *v *= &inv;
        }
        for r in 0..rows {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..=ncols {
                    let t = &f * &m[row][c];
                    m[r][c] -= t;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if m[row..].iter().any(|r| !r[ncols].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][ncols].clone();
    }
    Some(x)
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Self { conductor: 1, coeffs: vec![BigRational::zero()] }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self { conductor: 1, coeffs: vec![r] }
    }

    pub fn from_integer(k: i64) -> Self {
        Self::from_rational(BigRational::from_integer(k.into()))
    }

    /// `e^{2πi p/q}`.
    pub fn from_phase(p: Phase) -> Self {
        Self::from_weighted_phases([(p, BigRational::one())])
    }

    /// `Σ w · e^{2πi p}` over the given pairs.
    pub fn from_weighted_phases(terms: impl IntoIterator<Item = (Phase, BigRational)>) -> Self {
        let terms: Vec<(Phase, BigRational)> = terms.into_iter().collect();
        let n = terms.iter().fold(1u64, |l, (p, _)| l.lcm(&(p.denominator() as u64)));
        let mut poly = vec![BigRational::zero(); n as usize];
        for (p, w) in terms {
            let k = p.numerator() as u64 * (n / p.denominator() as u64);
            poly[k as usize] += w;
        }
        Self::from_powers(n, poly)
    }

    /// `Σ_k coeffs[k] ζ_N^k` for any number of coefficients.
    pub fn from_powers(conductor: u64, coeffs: Vec<BigRational>) -> Self {
        assert!(conductor >= 1, "conductor must be positive");
        let mut poly = vec![BigRational::zero(); conductor as usize];
        for (k, c) in coeffs.into_iter().enumerate() {
            poly[k % conductor as usize] += c;
        }
        Self { conductor, coeffs: reduce(poly, conductor) }.canonical()
    }

    /// Moves the value to the least conductor whose field contains it.
    fn canonical(self) -> Self {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            return Self::from_rational(self.coeffs[0].clone());
        }
        let n = self.conductor;
        for d in (2..n).filter(|d| n.is_multiple_of(*d)) {
            if let Some(x) = solve(&embedding_columns(d, n), &self.coeffs) {
                return Self { conductor: d, coeffs: x };
            }
        }
        self
    }

    /// The representation in `ℚ(ζ_m)`, for `m` a multiple of the conductor.
    fn lift(&self, m: u64) -> Vec<BigRational> {
        debug_assert_eq!(m % self.conductor, 0);
        let step = (m / self.conductor) as usize;
        let mut poly = vec![BigRational::zero(); m as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[(i * step) % m as usize] += c;
        }
        reduce(poly, m)
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// Power-basis coefficients in `ℚ(ζ_N)`, `N` the conductor.
    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.conductor == 1 && self.coeffs[0].is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        (self.conductor == 1).then(|| &self.coeffs[0])
    }

    /// The value as an integer; an error if it is not a rational integer.
    pub fn as_integer(&self) -> Result<i64> {
        self.as_rational()
            .filter(|r| r.is_integer())
            .and_then(|r| r.to_integer().to_i64())
            .ok_or_else(|| Error::NotInteger(self.to_string()))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| c * r).collect() }.canonical()
    }

    pub fn to_complex(&self) -> Complex64 {
        let n = self.conductor as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), std::f64::consts::TAU * k as f64 / n))
            .sum()
    }

    fn combine(&self, other: &Self, f: impl Fn(Vec<BigRational>, Vec<BigRational>, u64) -> Vec<BigRational>) -> Self {
        let m = self.conductor.lcm(&other.conductor);
        let coeffs = f(self.lift(m), other.lift(m), m);
        Self { conductor: m, coeffs }.canonical()
    }

    /// JSON form: `{"conductor": N, "coeffs": [...]}` with `N` coefficients
    /// of `ζ_N^k` as `"a/b"` strings, plus `"int"` for integers.
    pub fn to_json(&self) -> serde_json::Value {
        let mut coeffs: Vec<String> = self.coeffs.iter().map(rational_string).collect();
        coeffs.resize(self.conductor as usize, "0".into());
        let mut v = serde_json::json!({ "conductor": self.conductor, "coeffs": coeffs });
        if let Ok(k) = self.as_integer() {
            v["int"] = k.into();
        }
        v
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let raw: CyclotomicJson = serde_json::from_value(v.clone())?;
        if raw.conductor == 0 {
            return Err(Error::Parse("conductor must be positive".into()));
        }
        let coeffs = raw.coeffs.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_powers(raw.conductor, coeffs))
    }
}

#[derive(Serialize, Deserialize)]
struct CyclotomicJson {
    conductor: u64,
    coeffs: Vec<String>,
}

fn rational_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().map_err(|_| bad())?, d.trim().parse::<BigInt>().map_err(|_| bad())?),
        None => (s.trim().parse::<BigInt>().map_err(|_| bad())?, BigInt::one()),
    };
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return f.write_str(&rational_string(r));
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let mag = rational_string(&c.abs());
            let mag = if mag == "1" && k > 0 { String::new() } else { mag };
            let root = match k {
                0 => String::new(),
                1 => format!("z{}", self.conductor),
                _ => format!("z{}^{k}", self.conductor),
            };
            let sep = if !mag.is_empty() && !root.is_empty() { "*" } else { "" };
            write!(f, "{sign}{mag}{sep}{root}")?;
            first = false;
        }
        Ok(())
    }
}

impl Serialize for Cyclotomic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;

    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.combine(rhs, |a, b, _| a.into_iter().zip(b).map(|(x, y)| x + y).collect())
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;

    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.combine(rhs, |a, b, _| a.into_iter().zip(b).map(|(x, y)| x - y).collect())
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;

    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.combine(rhs, |a, b, m| {
            let mut poly = vec![BigRational::zero(); m as usize];
            for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                    poly[(i + j) % m as usize] += x * y;
                }
            }
            reduce(poly, m)
        })
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;

    fn neg(self) -> Cyclotomic {
        Cyclotomic { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl std::iter::Sum for Cyclotomic {
    fn sum<I: Iterator<Item = Cyclotomic>>(iter: I) -> Cyclotomic {
        iter.fold(Cyclotomic::zero(), |a, b| &a + &b)
    }
}

/// `∫β = Σ_x β(x)/|x→|` for a locally constant 0-cochain. The component
/// form `Σ_{[x]} β(x)/|Aut(x)|` is evaluated as well and must agree.
pub fn integrate(beta: &Cochain) -> Result<Cyclotomic> {
    if beta.degree() != 0 {
        return Err(Error::Degree { expected: "0".into(), found: beta.degree() });
    }
    let g = beta.base();
    if let Some(m) = (0..g.num_morphisms()).find(|&m| beta.value(&[g.src(m)]) != beta.value(&[g.dst(m)])) {
        return Err(Error::NotLocallyConstant(m));
    }
    let over_objects = Cyclotomic::from_weighted_phases(
        (0..g.num_objects()).map(|x| (beta.value(&[x]), BigRational::new(1.into(), (g.out_degree(x) as i64).into()))),
    );
    let over_components = Cyclotomic::from_weighted_phases(g.components().iter().map(|c| {
        let x = c[0];
        (beta.value(&[x]), BigRational::new(1.into(), (g.automorphisms(x).len() as i64).into()))
    }));
    if over_objects != over_components {
        return Err(Error::CrossCheck(format!("integral forms differ: {over_objects} vs {over_components}")));
    }
    Ok(over_objects)
}
