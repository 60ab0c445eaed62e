//! Laurent polynomials in `L`, truncated power series over them, and the
//! Kapranov zeta function of cellular varieties.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Integer Laurent polynomial in the formal symbol `L`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct LPoly(BTreeMap<i64, BigInt>);

impl LPoly {
    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: impl Into<BigInt>, exp: i64) -> Self {
        let c = c.into();
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(exp, c);
        }
        LPoly(m)
    }

    /// `L^e`.
    pub fn l_pow(exp: i64) -> Self {
        Self::monomial(1, exp)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, BigInt)>) -> Self {
        let mut out = LPoly::zero();
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    fn add_term(&mut self, exp: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(exp).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.0.get(&exp).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.0.iter().map(|(e, c)| (*e, c))
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.0.keys().next_back().copied()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.0.keys().next().copied()
    }

    /// Multiplies by `L^s`.
    pub fn shift(&self, s: i64) -> Self {
        LPoly(self.0.iter().map(|(e, c)| (e + s, c.clone())).collect())
    }

    /// Drops terms with exponent below `min`.
    pub fn truncate_below(&self, min: i64) -> Self {
        LPoly(self.0.range(min..).map(|(e, c)| (*e, c.clone())).collect())
    }

    /// Value at `L = q`.
    pub fn eval(&self, q: &BigRational) -> BigRational {
        self.0.iter().fold(BigRational::zero(), |acc, (e, c)| {
            acc + BigRational::from_integer(c.clone()) * pow_q(q, *e)
        })
    }

    /// Value at an integer `L = q`; exact only when all exponents are >= 0.
    pub fn eval_int(&self, q: i64) -> Option<BigInt> {
        let v = self.eval(&BigRational::from_integer(q.into()));
        v.is_integer().then(|| v.to_integer())
    }

    pub fn to_json(&self) -> Value {
        let m: serde_json::Map<String, Value> = self.0.iter().map(|(e, c)| (e.to_string(), bigint_json(c))).collect();
        Value::Object(m)
    }
}

fn pow_q(q: &BigRational, e: i64) -> BigRational {
    let mut out = BigRational::one();
    for _ in 0..e.unsigned_abs() {
        out *= q;
    }
    if e < 0 {
        out.recip()
    } else {
        out
    }
}

/// Integers become JSON numbers when they fit in `i64`, strings otherwise.
pub fn bigint_json(c: &BigInt) -> Value {
    match c.to_i64() {
        Some(v) => json!(v),
        None => json!(c.to_string()),
    }
}

/// Exact rational as a `[numerator, denominator]` pair.
pub fn rational_json(r: &BigRational) -> Value {
    json!([bigint_json(r.numer()), bigint_json(r.denom())])
}

impl fmt::Display for LPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.0.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mono = match *e {
                0 => String::new(),
                1 => "L".to_string(),
                e => format!("L^{e}"),
            };
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{a}{mono}")?;
            }
        }
        Ok(())
    }
}

impl Add for &LPoly {
    type Output = LPoly;
    fn add(self, o: &LPoly) -> LPoly {
        let mut out = self.clone();
        for (e, c) in &o.0 {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &LPoly {
    type Output = LPoly;
    fn sub(self, o: &LPoly) -> LPoly {
        let mut out = self.clone();
        for (e, c) in &o.0 {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Mul for &LPoly {
    type Output = LPoly;
    fn mul(self, o: &LPoly) -> LPoly {
        let mut out = LPoly::zero();
        for (e1, c1) in &self.0 {
            for (e2, c2) in &o.0 {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LPoly {
    type Output = LPoly;
    fn neg(self) -> LPoly {
        LPoly(self.0.iter().map(|(e, c)| (*e, -c)).collect())
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for LPoly {
            type Output = LPoly;
            fn $m(self, o: LPoly) -> LPoly {
                (&self).$m(&o)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for LPoly {
    type Output = LPoly;
    fn neg(self) -> LPoly {
        -&self
    }
}

impl Zero for LPoly {
    fn zero() -> Self {
        LPoly(BTreeMap::new())
    }
    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

impl One for LPoly {
    fn one() -> Self {
        LPoly::constant(1)
    }
}

/// Power series in `t` with `LPoly` coefficients, known through `t^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MotSeries {
    coeffs: Vec<LPoly>,
}

impl MotSeries {
    /// Coefficients `c_0..=c_n`; the truncation is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<LPoly>) -> Self {
        assert!(!coeffs.is_empty(), "a series is known through at least t^0");
        MotSeries { coeffs }
    }

    pub fn one(n: usize) -> Self {
        let mut c = vec![LPoly::zero(); n + 1];
        c[0] = LPoly::one();
        MotSeries { coeffs: c }
    }

    /// Truncation degree.
    pub fn n(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &LPoly {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[LPoly] {
        &self.coeffs
    }

    pub fn truncate(&self, n: usize) -> Self {
        MotSeries { coeffs: self.coeffs[..=n.min(self.n())].to_vec() }
    }

    pub fn mul(&self, o: &MotSeries) -> MotSeries {
        let n = self.n().min(o.n());
        let coeffs = (0..=n)
            .map(|k| (0..=k).fold(LPoly::zero(), |acc, i| acc + &self.coeffs[i] * &o.coeffs[k - i]))
            .collect();
        MotSeries { coeffs }
    }

    pub fn add(&self, o: &MotSeries) -> MotSeries {
        let n = self.n().min(o.n());
        MotSeries { coeffs: (0..=n).map(|k| &self.coeffs[k] + &o.coeffs[k]).collect() }
    }

    /// Multiplicative inverse; the constant term must be 1.
    pub fn invert(&self) -> Result<MotSeries> {
        if self.coeffs[0] != LPoly::one() {
            return Err(Error::NonUnitConstant);
        }
        let mut inv: Vec<LPoly> = vec![LPoly::one()];
        for k in 1..=self.n() {
            let s = (1..=k).fold(LPoly::zero(), |acc, i| acc + &self.coeffs[i] * &inv[k - i]);
            inv.push(-s);
        }
        Ok(MotSeries { coeffs: inv })
    }

    /// `s(t^m)`, known through the same degree.
    pub fn substitute_power(&self, m: usize) -> MotSeries {
        let n = self.n();
        let coeffs = (0..=n)
            .map(|k| if k % m == 0 { self.coeffs[k / m].clone() } else { LPoly::zero() })
            .collect();
        MotSeries { coeffs }
    }

    /// `s(L^a t)`.
    pub fn scale_t(&self, a: i64) -> MotSeries {
        MotSeries { coeffs: self.coeffs.iter().enumerate().map(|(k, c)| c.shift(a * k as i64)).collect() }
    }

    /// Coefficients at `L = q`.
    pub fn specialize(&self, q: i64) -> Vec<BigRational> {
        let q = BigRational::from_integer(q.into());
        self.coeffs.iter().map(|c| c.eval(&q)).collect()
    }

    /// Evaluates at `t = L^{-n}` keeping exponents `>= -keep`.
    ///
    /// `growth` bounds the top exponent of every coefficient: `deg c_k <=
    /// growth * k`. Coefficients beyond the truncation then contribute only
    /// below `L^{-(N+1)(n - growth)}`, which must lie under `-keep`.
    pub fn evaluate_at_l_power(&self, n: i64, keep: i64, growth: i64) -> Result<LPoly> {
        let big_n = self.n() as i64;
        if n <= growth || (big_n + 1) * (n - growth) <= keep {
            return Err(Error::InsufficientTruncation(format!(
                "series known through t^{big_n} cannot fix L^-{keep} at t = L^-{n}"
            )));
        }
        let total = self
            .coeffs
            .iter()
            .enumerate()
            .fold(LPoly::zero(), |acc, (k, c)| acc + c.shift(-n * k as i64));
        Ok(total.truncate_below(-keep))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "truncation": self.n(),
            "coefficients": self.coeffs.iter().map(LPoly::to_json).collect::<Vec<_>>(),
            "display": self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// A variety with an affine paving, recorded by its cell dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellularVariety {
    cells: Vec<u32>,
}

#[derive(Deserialize)]
struct VarietyJson {
    #[serde(rename = "type")]
    kind: String,
    cells: Vec<u32>,
}

impl CellularVariety {
    pub fn new(mut cells: Vec<u32>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::InvalidParams("a cellular variety needs at least one cell".into()));
        }
        cells.sort_unstable();
        Ok(CellularVariety { cells })
    }

    pub fn point() -> Self {
        CellularVariety { cells: vec![0] }
    }

    pub fn affine(n: u32) -> Self {
        CellularVariety { cells: vec![n] }
    }

    pub fn projective(n: u32) -> Self {
        CellularVariety { cells: (0..=n).collect() }
    }

    pub fn product(&self, o: &CellularVariety) -> Self {
        let mut cells: Vec<u32> = self.cells.iter().flat_map(|a| o.cells.iter().map(move |b| a + b)).collect();
        cells.sort_unstable();
        CellularVariety { cells }
    }

    pub fn disjoint_union(&self, o: &CellularVariety) -> Self {
        let mut cells = self.cells.clone();
        cells.extend(&o.cells);
        cells.sort_unstable();
        CellularVariety { cells }
    }

    pub fn cells(&self) -> &[u32] {
        &self.cells
    }

    pub fn dim(&self) -> u32 {
        *self.cells.iter().max().expect("nonempty")
    }

    pub fn class(&self) -> LPoly {
        LPoly::from_terms(self.cells.iter().map(|&a| (a as i64, BigInt::one())))
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: VarietyJson = serde_json::from_str(s).map_err(|e| Error::Input(e.to_string()))?;
        if raw.kind != "cellular" {
            return Err(Error::Input(format!("unsupported variety type `{}`", raw.kind)));
        }
        Self::new(raw.cells)
    }

    pub fn to_json(&self) -> Value {
        json!({"type": "cellular", "cells": self.cells})
    }
}

/// `prod over cells a of (1 - L^a t)^{-1}` through `t^n`.
pub fn kapranov_zeta(x: &CellularVariety, n: usize) -> MotSeries {
    x.cells.iter().fold(MotSeries::one(n), |acc, &a| {
        let geometric = MotSeries::new((0..=n).map(|k| LPoly::l_pow(a as i64 * k as i64)).collect());
        acc.mul(&geometric)
    })
}

/// The exact polynomial `prod over cells a of (1 - L^a t)`, as a series known
/// through its degree.
pub fn inverse_zeta_polynomial(x: &CellularVariety) -> MotSeries {
    let n = x.cells.len();
    x.cells.iter().fold(MotSeries::one(n), |acc, &a| {
        let mut c = vec![LPoly::zero(); n + 1];
        c[0] = LPoly::one();
        c[1] = -LPoly::l_pow(a as i64);
        acc.mul(&MotSeries::new(c))
    })
}

/// `Z(t) / Z(t^2)` through `t^n`.
pub fn config_gf(x: &CellularVariety, n: usize) -> MotSeries {
    let z = kapranov_zeta(x, n);
    let denom = z.substitute_power(2).invert().expect("zeta has constant term 1");
    z.mul(&denom)
}

/// Compositions of `k` into positive parts, in lexicographic order.
pub fn compositions(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=k {
        for mut rest in compositions(k - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `sum over compositions a of k of (-1)^{#parts} prod_i [S^{a_i} X]`.
pub fn mu_terms_gamma(x: &CellularVariety, k: usize) -> Result<LPoly> {
    if k < 1 {
        return Err(Error::InvalidParams("k must be at least 1".into()));
    }
    let z = kapranov_zeta(x, k);
    Ok(compositions(k).iter().fold(LPoly::zero(), |acc, a| {
        let prod = a.iter().fold(LPoly::one(), |p, &ai| p * z.coeff(ai).clone());
        if a.len() % 2 == 0 {
            acc + prod
        } else {
            acc - prod
        }
    }))
}

/// `Z_X(t)^{-1}` at `t = L^{-n}`, keeping powers `L^0 .. L^{-keep}`.
pub fn stable_limit(x: &CellularVariety, n: i64, keep: i64) -> Result<LPoly> {
    if n < 1 {
        return Err(Error::InvalidParams("n must be at least 1".into()));
    }
    let exact = inverse_zeta_polynomial(x);
    Ok(exact
        .coeffs()
        .iter()
        .enumerate()
        .fold(LPoly::zero(), |acc, (k, c)| acc + c.shift(-n * k as i64))
        .truncate_below(-keep))
}
