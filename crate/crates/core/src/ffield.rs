//! Exhaustive counts over prime fields: squarefree polynomials, colored
//! configurations on the affine and projective line, smooth binary forms and
//! truncated inclusion-exclusion for the discriminant.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::motivic::{bigint_json, compositions, rational_json, config_gf, kapranov_zeta, stable_limit, CellularVariety, MotSeries};

/// Largest number of objects any single count may enumerate.
pub const MAX_ENUMERATION: u64 = 100_000_000;

pub fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

fn check_prime(q: u64) -> Result<()> {
    if is_prime(q) {
        Ok(())
    } else {
        Err(Error::NotPrime(q))
    }
}

/// `q^e`, or a cost-guard error past [`MAX_ENUMERATION`].
fn guarded_pow(q: u64, e: usize) -> Result<u64> {
    let mut acc: u64 = 1;
    for _ in 0..e {
        acc = acc.checked_mul(q).filter(|&v| v <= MAX_ENUMERATION).ok_or_else(|| {
            Error::CostGuard(format!("{q}^{e} exceeds the enumeration limit {MAX_ENUMERATION}"))
        })?;
    }
    Ok(acc)
}

fn inv_mod(a: u64, q: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a % q, q - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % q;
        }
        base = base * base % q;
        e >>= 1;
    }
    acc
}

/// Polynomial over `F_q`, coefficients low to high with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeFieldPoly {
    q: u64,
    coeffs: Vec<u64>,
}

impl PrimeFieldPoly {
    pub fn new(q: u64, coeffs: &[u64]) -> Result<Self> {
        check_prime(q)?;
        Ok(Self::raw(q, coeffs.iter().map(|c| c % q).collect()))
    }

    fn raw(q: u64, mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        PrimeFieldPoly { q, coeffs }
    }

    /// The monic polynomial of degree `d` whose lower coefficients are the
    /// base-`q` digits of `idx`.
    fn monic_from_index(q: u64, d: usize, mut idx: u64) -> Self {
        let mut c = Vec::with_capacity(d + 1);
        for _ in 0..d {
            c.push(idx % q);
            idx /= q;
        }
        c.push(1);
        PrimeFieldPoly { q, coeffs: c }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn derivative(&self) -> Self {
        let q = self.q;
        Self::raw(q, self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| (i as u64 % q) * c % q).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::raw(self.q, Vec::new());
        }
        let q = self.q;
        let mut c = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in o.coeffs.iter().enumerate() {
                c[i + j] = (c[i + j] + a * b) % q;
            }
        }
        Self::raw(q, c)
    }

    /// Remainder on division by a nonzero `m`.
    pub fn rem(&self, m: &Self) -> Self {
        let q = self.q;
        let dm = m.degree().expect("division by zero polynomial");
        let lead_inv = inv_mod(m.coeffs[dm], q);
        let mut r = self.coeffs.clone();
        while r.len() > dm {
            let top = r.len() - 1;
            let f = r[top] * lead_inv % q;
            if f != 0 {
                for (k, &c) in m.coeffs.iter().enumerate() {
                    let idx = top - dm + k;
                    r[idx] = (r[idx] + q - f * c % q) % q;
                }
            }
            r.pop();
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        Self::raw(q, r)
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&l) => {
                let inv = inv_mod(l, self.q);
                Self::raw(self.q, self.coeffs.iter().map(|c| c * inv % self.q).collect())
            }
        }
    }

    /// No repeated factor over the algebraic closure. A nonconstant `f` with
    /// `f' = 0` is a `p`-th power, hence not squarefree.
    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => {
                let d = self.derivative();
                !d.is_zero() && self.gcd(&d).degree() == Some(0)
            }
        }
    }
}

/// Binary form of degree `d`: `coeffs[i]` multiplies `X^i Y^{d-i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryForm {
    q: u64,
    coeffs: Vec<u64>,
}

impl BinaryForm {
    pub fn new(q: u64, coeffs: &[u64]) -> Result<Self> {
        check_prime(q)?;
        if coeffs.is_empty() {
            return Err(Error::InvalidParams("a form needs at least one coefficient".into()));
        }
        Ok(BinaryForm { q, coeffs: coeffs.iter().map(|c| c % q).collect() })
    }

    fn from_index(q: u64, d: usize, mut idx: u64) -> Self {
        let coeffs = (0..=d)
            .map(|_| {
                let c = idx % q;
                idx /= q;
                c
            })
            .collect();
        BinaryForm { q, coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// `F(x, 1)`.
    pub fn dehomogenize(&self) -> PrimeFieldPoly {
        PrimeFieldPoly::raw(self.q, self.coeffs.clone())
    }

    /// Nonzero with reduced vanishing locus on `P^1`: `Y^2` does not divide
    /// it and `F(x, 1)` is squarefree.
    pub fn is_smooth(&self) -> bool {
        let f = self.dehomogenize();
        match f.degree() {
            None => false,
            Some(e) => self.degree() - e <= 1 && f.is_squarefree(),
        }
    }
}

/// Monic squarefree polynomials of degree `d`; equals `#C^d(A^1)(F_q)`.
pub fn count_squarefree_monic(q: u64, d: usize) -> Result<u64> {
    check_prime(q)?;
    let n = guarded_pow(q, d)?;
    Ok((0..n).into_par_iter().filter(|&i| PrimeFieldPoly::monic_from_index(q, d, i).is_squarefree()).count() as u64)
}

/// Monic polynomials of degree `d`: effective divisors of degree `d` on `A^1`.
pub fn count_monic(q: u64, d: usize) -> Result<u64> {
    check_prime(q)?;
    guarded_pow(q, d)
}

/// Nonzero forms of degree `d` up to scalars: effective divisors on `P^1`.
pub fn count_forms_up_to_scalar(q: u64, d: usize) -> Result<u64> {
    check_prime(q)?;
    let n = guarded_pow(q, d + 1)?;
    let nonzero = (1..n).into_par_iter().filter(|&i| !BinaryForm::from_index(q, d, i).is_zero()).count() as u64;
    Ok(nonzero / (q - 1))
}

/// Reduced divisors of degree `d` on `P^1`: squarefree forms up to scalars.
pub fn count_smooth_forms_up_to_scalar(q: u64, d: usize) -> Result<u64> {
    Ok(count_smooth_sections_p1(q, d)? / (q - 1))
}

/// Tuples of monic `f_i` of degree `parts[i]` whose product is squarefree.
/// Parts of size zero contribute the constant 1.
fn colored_a1(q: u64, parts: &[usize]) -> Result<u64> {
    let total: usize = parts.iter().sum();
    let n = guarded_pow(q, total)?;
    Ok((0..n)
        .into_par_iter()
        .filter(|&idx| {
            let mut rest = idx;
            let mut prod = PrimeFieldPoly::raw(q, vec![1]);
            for &a in parts {
                let block = q.pow(a as u32);
                prod = prod.mul(&PrimeFieldPoly::monic_from_index(q, a, rest % block));
                rest /= block;
            }
            prod.is_squarefree()
        })
        .count() as u64)
}

fn check_parts(q: u64, parts: &[usize]) -> Result<()> {
    check_prime(q)?;
    if parts.is_empty() {
        return Err(Error::InvalidParams("composition must be nonempty".into()));
    }
    if parts.contains(&0) {
        return Err(Error::InvalidParams("composition parts must be positive".into()));
    }
    Ok(())
}

/// `#C^a(A^1)(F_q)`: ordered tuples of pairwise disjoint reduced divisors of
/// degrees `a_i`.
pub fn count_colored_configs(q: u64, parts: &[usize]) -> Result<u64> {
    check_parts(q, parts)?;
    colored_a1(q, parts)
}

/// `#C^a(P^1)(F_q)`: as on `A^1`, where at most one divisor may contain the
/// point at infinity.
pub fn count_colored_configs_p1(q: u64, parts: &[usize]) -> Result<u64> {
    check_parts(q, parts)?;
    let mut total = colored_a1(q, parts)?;
    for i in 0..parts.len() {
        let mut a = parts.to_vec();
        a[i] -= 1;
        total += colored_a1(q, &a)?;
    }
    Ok(total)
}

/// Nonzero binary forms of degree `d` with reduced vanishing locus.
pub fn count_smooth_sections_p1(q: u64, d: usize) -> Result<u64> {
    check_prime(q)?;
    if d < 1 {
        return Err(Error::InvalidParams("degree must be at least 1".into()));
    }
    let n = guarded_pow(q, d + 1)?;
    Ok((1..n).into_par_iter().filter(|&i| BinaryForm::from_index(q, d, i).is_smooth()).count() as u64)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VwReport {
    pub q: u64,
    /// `1 + sum over compositions of (-1)^{#parts} #C^a(A^1)(F_q) t^{|a|}`.
    pub counts: Vec<BigInt>,
    /// `Z_{A^1}(t)^{-1}` at `L = q`.
    pub motivic: Vec<BigInt>,
    pub passes: bool,
}

impl VwReport {
    pub fn to_json(&self) -> Value {
        json!({
            "q": self.q,
            "counts": self.counts.iter().map(bigint_json).collect::<Vec<_>>(),
            "motivic": self.motivic.iter().map(bigint_json).collect::<Vec<_>>(),
            "passes": self.passes,
        })
    }
}

pub fn vw_inversion_check(q: u64, n: usize) -> Result<VwReport> {
    check_prime(q)?;
    if n > 6 {
        return Err(Error::CostGuard(format!("N = {n} exceeds 6")));
    }
    let mut counts = vec![BigInt::one()];
    for k in 1..=n {
        let mut acc = BigInt::zero();
        for a in compositions(k) {
            let c = BigInt::from(count_colored_configs(q, &a)?);
            if a.len() % 2 == 1 {
                acc -= c;
            } else {
                acc += c;
            }
        }
        counts.push(acc);
    }
    let inv = kapranov_zeta(&CellularVariety::affine(1), n).invert()?;
    let motivic: Vec<BigInt> = inv.coeffs().iter().map(|c| c.eval_int(q as i64).expect("nonnegative powers")).collect();
    let passes = counts == motivic;
    Ok(VwReport { q, counts, motivic, passes })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedIe {
    pub truncated_sum: i128,
    pub exact: i128,
    pub residual: i128,
}

impl TruncatedIe {
    pub fn to_json(&self) -> Value {
        let n = |v: i128| bigint_json(&BigInt::from(v));
        json!({"truncated_sum": n(self.truncated_sum), "exact": n(self.exact), "residual": n(self.residual)})
    }
}

/// Singular sections of `O(d)` on `P^1` against the alternating sum over
/// compositions with `|a| <= k` of `(-1)^{#parts - 1} #C^a(P^1) q^{d+1-2|a|}`.
/// The zero section counts as singular.
pub fn truncated_ie_discriminant(q: u64, d: usize, k: usize) -> Result<TruncatedIe> {
    check_prime(q)?;
    if k < 1 || d < 2 * k + 1 {
        return Err(Error::InvalidParams(format!("need k >= 1 and d >= 2k + 1, got d = {d}, k = {k}")));
    }
    let all = guarded_pow(q, d + 1)? as i128;
    let exact = all - count_smooth_sections_p1(q, d)? as i128;
    let mut truncated_sum = 0i128;
    for s in 1..=k {
        let weight = (q as i128).pow((d + 1 - 2 * s) as u32);
        for a in compositions(s) {
            let c = count_colored_configs_p1(q, &a)? as i128 * weight;
            truncated_sum += if a.len() % 2 == 1 { c } else { -c };
        }
    }
    Ok(TruncatedIe { truncated_sum, exact, residual: exact - truncated_sum })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityRow {
    pub d: usize,
    pub smooth: u64,
    pub density: BigRational,
    pub equals_limit: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    pub q: u64,
    pub rows: Vec<DensityRow>,
    /// `(1 - 1/q)(1 - 1/q^2)`.
    pub limit: BigRational,
    /// The stable limit of the inverse zeta function of `P^1` at `n = 2`, `L = q`.
    pub motivic_limit: BigRational,
    /// First `d` from which every density in range equals the limit.
    pub first_exact: Option<usize>,
}

impl DensityReport {
    pub fn to_json(&self) -> Value {
        json!({
            "q": self.q,
            "rows": self.rows.iter().map(|r| json!({"d": r.d, "smooth": r.smooth, "density": rational_json(&r.density), "equals_limit": r.equals_limit})).collect::<Vec<_>>(),
            "limit": rational_json(&self.limit),
            "motivic_limit": rational_json(&self.motivic_limit),
            "first_exact": self.first_exact,
        })
    }
}

pub fn density_report(q: u64, ds: std::ops::RangeInclusive<usize>) -> Result<DensityReport> {
    check_prime(q)?;
    let qr = BigRational::from_integer(BigInt::from(q));
    let limit = (BigRational::one() - qr.recip()) * (BigRational::one() - (&qr * &qr).recip());
    let motivic_limit = stable_limit(&CellularVariety::projective(1), 2, 8)?.eval(&qr);
    let mut rows = Vec::new();
    for d in ds {
        let smooth = count_smooth_sections_p1(q, d)?;
        let density = BigRational::new(BigInt::from(smooth), BigInt::from(q).pow(d as u32 + 1));
        let equals_limit = density == limit;
        rows.push(DensityRow { d, smooth, density, equals_limit });
    }
    let first_exact = rows.iter().rposition(|r| !r.equals_limit).map_or(rows.first().map(|r| r.d), |i| rows.get(i + 1).map(|r| r.d));
    Ok(DensityReport { q, rows, limit, motivic_limit, first_exact })
}

/// Which line a point-count comparison runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Line {
    Affine,
    Projective,
}

impl Line {
    pub fn variety(self) -> CellularVariety {
        match self {
            Line::Affine => CellularVariety::affine(1),
            Line::Projective => CellularVariety::projective(1),
        }
    }
}

/// Coefficients of a series at `L = q`, as integers.
pub fn specialize_int(s: &MotSeries, q: u64) -> Vec<BigInt> {
    s.coeffs().iter().map(|c| c.eval_int(q as i64).expect("nonnegative powers of L")).collect()
}

/// Compares `config_gf` and `kapranov_zeta` at `L = q` with enumerated
/// counts of reduced and effective divisors of degrees `0..=k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointCountSquare {
    pub line: Line,
    pub q: u64,
    pub config_counts: Vec<u64>,
    pub config_motivic: Vec<BigInt>,
    pub divisor_counts: Vec<u64>,
    pub zeta_motivic: Vec<BigInt>,
}

impl PointCountSquare {
    pub fn passes(&self) -> bool {
        let same = |a: &[u64], b: &[BigInt]| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| BigInt::from(*x) == *y);
        same(&self.config_counts, &self.config_motivic) && same(&self.divisor_counts, &self.zeta_motivic)
    }
}

pub fn point_count_square(line: Line, q: u64, k: usize) -> Result<PointCountSquare> {
    check_prime(q)?;
    let x = line.variety();
    let mut config_counts = vec![1];
    let mut divisor_counts = vec![1];
    for d in 1..=k {
        match line {
            Line::Affine => {
                config_counts.push(count_squarefree_monic(q, d)?);
                divisor_counts.push(count_monic(q, d)?);
            }
            Line::Projective => {
                config_counts.push(count_smooth_forms_up_to_scalar(q, d)?);
                divisor_counts.push(count_forms_up_to_scalar(q, d)?);
            }
        }
    }
    Ok(PointCountSquare {
        line,
        q,
        config_counts,
        config_motivic: specialize_int(&config_gf(&x, k), q),
        divisor_counts,
        zeta_motivic: specialize_int(&kapranov_zeta(&x, k), q),
    })
}
