//! Closed-form quantities in exact rational arithmetic.
//!
//! Everything here is evaluated over [`Rational`] (arbitrary precision), never
//! floating point. Polynomial coefficients written with one decimal place are
//! carried as exact tenths.
//!
//! Throughout, `D(p) = 4p² − 11p + 8` and the construction modulus is
//! `p(p−1)D(p)`.

use crate::constructions::{delta, h1_guard_ok};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("parameter p = {0} must be at least 3")]
    SmallP(u64),
    #[error("n = {n} is not divisible by the modulus {modulus}")]
    NotDivisible { n: u64, modulus: u64 },
    #[error("clique density r must be positive")]
    ZeroDensity,
    #[error("n must be positive")]
    ZeroN,
    #[error("feasibility guard p(p-1)(3p-4)x > y fails for p={p}, x={x}, y={y}")]
    Guard { p: u64, x: u64, y: u64 },
}

/// Integer as a rational.
pub fn int<T: Into<BigInt>>(v: T) -> Rational {
    Rational::from_integer(v.into())
}

/// `num / den` reduced.
pub fn ratio<T: Into<BigInt>, U: Into<BigInt>>(num: T, den: U) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Renders as `a` or `a/b`.
pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `a`, `-a` or `a/b`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let den: BigInt = b.trim().parse().ok()?;
            if den.is_zero() {
                return None;
            }
            Some(Rational::new(a.trim().parse().ok()?, den))
        }
        None => Some(int(s.parse::<BigInt>().ok()?)),
    }
}

fn check_p(p: u64) -> Result<(), FormulaError> {
    if p < 3 {
        Err(FormulaError::SmallP(p))
    } else {
        Ok(())
    }
}

/// `4p² − 11p + 8`.
pub fn d_poly(p: u64) -> u64 {
    4 * p * p + 8 - 11 * p
}

/// `p(p−1)(4p² − 11p + 8)`, the vertex count of the unit construction.
pub fn construction_modulus(p: u64) -> u64 {
    p * (p - 1) * d_poly(p)
}

/// Leading coefficient of the minimum: `2(p−2)² / (p(4p²−11p+8))`.
pub fn main_term(p: u64) -> Result<Rational, FormulaError> {
    check_p(p)?;
    Ok(ratio(2 * (p - 2) * (p - 2), p * d_poly(p)))
}

/// Linear coefficient magnitude `(p−2)(2p−3) / (4p²−11p+8)`.
fn linear_term(p: u64) -> Rational {
    ratio((p - 2) * (2 * p - 3), d_poly(p))
}

/// Exact minimum over non-Turán extremal graphs when the modulus divides `n`:
/// `main_term·n² − (p−2)(2p−3)/(4p²−11p+8)·n`.
pub fn divisible_case_minimum(n: u64, p: u64) -> Result<Rational, FormulaError> {
    check_p(p)?;
    let modulus = construction_modulus(p);
    if n % modulus != 0 {
        return Err(FormulaError::NotDivisible { n, modulus });
    }
    let n = int(n);
    Ok(main_term(p)? * &n * &n - linear_term(p) * n)
}

/// Saturating-edge count of the `H₁` construction, four-term closed form in
/// `n = modulus·x + y`.
pub fn f_h1_closed(p: u64, x: u64, y: u64) -> Result<Rational, FormulaError> {
    check_p(p)?;
    if !h1_guard_ok(p, x, y) {
        return Err(FormulaError::Guard { p, x, y });
    }
    let d = d_poly(p);
    let n = int(construction_modulus(p) * x + y);
    let yq = int(y);
    Ok(main_term(p)? * &n * &n - linear_term(p) * &n
        + ratio(8 * (p - 1).pow(3), p * d) * &yq * &yq
        - ratio(2 * (p - 1).pow(2), d) * yq)
}

/// The same count as `C(|V₀|, 2) + (p−1)·C(|V_i|, 2)`.
pub fn f_h1_binomial(p: u64, x: u64, y: u64) -> Result<Rational, FormulaError> {
    check_p(p)?;
    if !h1_guard_ok(p, x, y) {
        return Err(FormulaError::Guard { p, x, y });
    }
    let v0 = 2 * (p - 1) * (p - 2) * (p - 2) * x + 2 * y;
    let vi = 4 * (p - 1) * (p - 1) * (p - 2) * x;
    Ok(int(crate::graph::choose2(v0)) + int(p - 1) * int(crate::graph::choose2(vi)))
}

/// Finite parts of the two-sided estimate for
/// `f_{p+1}(n, ex(n,K_p)+1) − main_term·n²`. The `O_p(1)` terms are not
/// modelled.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GpBracket {
    #[serde(serialize_with = "ser_rational")]
    pub lower: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub upper: Rational,
}

/// Coefficients `(lower, upper)` of `n` in the bracket.
pub fn gp_coefficients(p: u64) -> Result<(Rational, Rational), FormulaError> {
    check_p(p)?;
    let lower = -linear_term(p);
    let upper = -ratio((p - 2) * (2 * p * p + 4 - 5 * p), p * d_poly(p));
    Ok((lower, upper))
}

pub fn g_p_bracket(n: u64, p: u64) -> Result<GpBracket, FormulaError> {
    let (lo, hi) = gp_coefficients(p)?;
    Ok(GpBracket {
        lower: lo * int(n),
        upper: hi * int(n),
    })
}

/// `r` above which the bound on saturating edges touching the packing alone
/// settles the minimum: `2(p−2)(2p−3) / (p(4p²−11p+8))`.
pub fn r_upper_threshold(p: u64) -> Result<Rational, FormulaError> {
    check_p(p)?;
    Ok(ratio(2 * (p - 2) * (2 * p - 3), p * d_poly(p)))
}

/// `r` below which the remainder bound alone settles the minimum:
/// `1 / (40p(p−2)(2p−3))`.
pub fn r_lower_threshold(p: u64) -> Result<Rational, FormulaError> {
    check_p(p)?;
    Ok(ratio(1u64, 40 * p * (p - 2) * (2 * p - 3)))
}

fn check_rn(n: u64, r: &Rational) -> Result<(), FormulaError> {
    if n == 0 {
        return Err(FormulaError::ZeroN);
    }
    if !r.is_positive() {
        return Err(FormulaError::ZeroDensity);
    }
    Ok(())
}

/// Lower bound on `max_R e(R, H_ℛ)` for a maximum packing of density `r` in a
/// graph with exactly `ex(n, K_p)` edges:
/// `(p(p−2)/(p−1) − p(2p²−4p+1)/(2(p−1))·r)·n − δ/(rn)`.
pub fn rstar_edge_bound(n: u64, p: u64, r: &Rational, delta: &Rational) -> Result<Rational, FormulaError> {
    check_p(p)?;
    check_rn(n, r)?;
    let nq = int(n);
    let a = ratio(p * (p - 2), p - 1);
    let b = ratio(p * (2 * p * p + 1 - 4 * p), 2 * (p - 1));
    Ok((a - b * r) * &nq - delta / (r * nq))
}

/// Lower bound on `z_{p−1}(R*)`:
/// `(p−2)/(p−1) − p(2p−3)/(2(p−1))·r − δ/(rn²)`.
pub fn top_class_density_bound(n: u64, p: u64, r: &Rational, delta: &Rational) -> Result<Rational, FormulaError> {
    check_p(p)?;
    check_rn(n, r)?;
    let nq = int(n);
    Ok(ratio(p - 2, p - 1) - ratio(p * (2 * p - 3), 2 * (p - 1)) * r - delta / (r * &nq * &nq))
}

/// Lower bound on ℓ₁ (saturating edges touching the packing):
/// `((p−2)/(p−1)·r − p(p−2)/(2(p−1))·r²)·n² − (pr/2)·n − δ`.
pub fn ell1_lower_bound(n: u64, p: u64, r: &Rational, delta: &Rational) -> Result<Rational, FormulaError> {
    check_p(p)?;
    let nq = int(n);
    let quad = ratio(p - 2, p - 1) * r - ratio(p * (p - 2), 2 * (p - 1)) * r * r;
    Ok(quad * &nq * &nq - int(p) * r / int(2) * nq - delta)
}

/// `F(n, p, r, δ) = δ/(2(p−1)r²n²) − (p−2)/((p−1)²r) + p(2p−3)/(2(p−1)²) + 1/(2rn)`.
pub fn ell2_defect_coefficient(n: u64, p: u64, r: &Rational, delta: &Rational) -> Result<Rational, FormulaError> {
    check_p(p)?;
    check_rn(n, r)?;
    let nq = int(n);
    let pm1 = p - 1;
    Ok(delta / (int(2 * pm1) * r * r * &nq * &nq) - ratio(p - 2, pm1 * pm1) / r
        + ratio(p * (2 * p - 3), 2 * pm1 * pm1)
        + int(1) / (int(2) * r * nq))
}

/// The lower end `−(p−2)/((p−1)²r)` that `F` always dominates.
pub fn ell2_defect_floor(p: u64, r: &Rational) -> Result<Rational, FormulaError> {
    check_p(p)?;
    if !r.is_positive() {
        return Err(FormulaError::ZeroDensity);
    }
    Ok(-ratio(p - 2, (p - 1) * (p - 1)) / r)
}

/// Lower bound on ℓ₂ obtained by substituting the `z_{p−1}` bound into the
/// Jensen estimate:
/// `(2(p−2) − p(2p−3)r)²/(8(p−1)³)·n² − (2(p−2) − p(2p−3)r)/(4(p−1))·n + δ·F`.
pub fn ell2_lower_bound(n: u64, p: u64, r: &Rational, delta: &Rational) -> Result<Rational, FormulaError> {
    let f = ell2_defect_coefficient(n, p, r, delta)?;
    let nq = int(n);
    let s = int(2 * (p - 2)) - int(p * (2 * p - 3)) * r;
    Ok(&s * &s / int(8 * (p - 1).pow(3)) * &nq * &nq - s / int(4 * (p - 1)) * nq + delta * f)
}

/// Jensen estimate `h(z) = z²/(2(p−1))·n² − (z/2)·n` for `p−1` nonempty
/// classes of total density `z`.
pub fn jensen_pairs(n: u64, p: u64, z: &Rational) -> Rational {
    let nq = int(n);
    z * z / int(2 * (p - 1)) * &nq * &nq - z / int(2) * nq
}

/// The quadratic in `r` combining both ℓ bounds (before the δ terms):
/// `p(4p²−11p+8)n²/(8(p−1)³)·r² − (2(p−2)²n² + p(p−1)²n)/(4(p−1)³)·r
///  + (p−2)²/(2(p−1)³)·n² − (p−2)/(2(p−1))·n`.
pub fn combined_quadratic(n: u64, p: u64, r: &Rational) -> Rational {
    let nq = int(n);
    let c3 = int(8 * (p - 1).pow(3));
    let n2 = &nq * &nq;
    int(p * d_poly(p)) * &n2 / &c3 * r * r
        - (int(2 * (p - 2).pow(2)) * &n2 + int(p * (p - 1).pow(2)) * &nq) / int(4 * (p - 1).pow(3)) * r
        + int((p - 2).pow(2)) / int(2 * (p - 1).pow(3)) * n2
        - ratio(p - 2, 2 * (p - 1)) * nq
}

/// `8p(p−1)³(4p²−11p+8) · combined_quadratic`, written out in `r`.
pub fn scaled_quadratic(n: u64, p: u64, r: &Rational) -> Rational {
    let (a, b, c) = scaled_quadratic_coefficients(n, p);
    a * r * r - b * r + c
}

/// `(A, B, C)` with the scaled quadratic equal to `A r² − B r + C`.
pub fn scaled_quadratic_coefficients(n: u64, p: u64) -> (Rational, Rational, Rational) {
    let d = int(d_poly(p));
    let nq = int(n);
    let pq = int(p);
    let n2 = &nq * &nq;
    let a = &pq * &pq * &d * &d * &n2;
    let b = int(4) * &pq * int((p - 2).pow(2)) * &d * &n2
        + int(2) * &pq * &pq * int((p - 1).pow(2)) * &d * &nq;
    let c = int(4) * &pq * int((p - 2).pow(2)) * &d * n2
        - int(4) * &pq * int((p - 1).pow(2)) * int(p - 2) * d * nq;
    (a, b, c)
}

/// Minimiser `2(p−2)²/(p(4p²−11p+8)) + (p−1)²/((4p²−11p+8)n)` of the quadratic.
pub fn quadratic_minimizer(n: u64, p: u64) -> Rational {
    main_term(p).expect("p >= 3") + ratio((p - 1).pow(2), d_poly(p) * n)
}

/// Claimed minimum value
/// `16(p−1)³(p−2)²n² − 8p(p−1)³(p−2)(2p−3)n − p²(p−1)⁴`.
pub fn quadratic_minimum_value(n: u64, p: u64) -> Rational {
    let nq = int(n);
    int(16 * (p - 1).pow(3) * (p - 2).pow(2)) * &nq * &nq
        - int(8 * p * (p - 1).pow(3) * (p - 2) * (2 * p - 3)) * nq
        - int(p * p * (p - 1).pow(4))
}

/// Result of checking the minimum of the scaled quadratic exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadraticMinimumCheck {
    pub p: u64,
    pub n: u64,
    #[serde(serialize_with = "ser_rational")]
    pub minimizer: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub value_at_minimizer: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub claimed_value: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub derivative_at_minimizer: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub second_derivative: Rational,
    pub holds: bool,
}

pub fn quadratic_minimum_identity(p: u64, n: u64) -> Result<QuadraticMinimumCheck, FormulaError> {
    check_p(p)?;
    if n == 0 {
        return Err(FormulaError::ZeroN);
    }
    let (a, b, _) = scaled_quadratic_coefficients(n, p);
    let r = quadratic_minimizer(n, p);
    let value = scaled_quadratic(n, p, &r);
    let claimed = quadratic_minimum_value(n, p);
    let deriv = int(2) * &a * &r - b;
    let second = int(2) * a;
    let holds = value == claimed && deriv.is_zero() && second.is_positive();
    Ok(QuadraticMinimumCheck {
        p,
        n,
        minimizer: r,
        value_at_minimizer: value,
        claimed_value: claimed,
        derivative_at_minimizer: deriv,
        second_derivative: second,
        holds,
    })
}

/// Margin polynomial `f(p) = p(4p² − 16p + 15.9)(4p² − 11p + 8) − 16(p−1)³(p−2)²`.
pub fn margin_f(p: i64) -> Rational {
    let q = int(p);
    let inner = int(4) * &q * &q - int(16) * &q + ratio(159, 10);
    let d = int(4) * &q * &q - int(11) * &q + int(8);
    let pm1 = int(p - 1);
    let pm2 = int(p - 2);
    &q * inner * d - int(16) * &pm1 * &pm1 * &pm1 * &pm2 * &pm2
}

/// Expanded coefficients of `f`, constant term first.
pub fn margin_f_coefficients() -> Vec<Rational> {
    vec![int(64), ratio(-1288, 10), ratio(971, 10), ratio(-324, 10), int(4)]
}

/// Margin polynomial `g(p) = 120p·f(p) − (p−1)³(4p² + p − 8)`.
pub fn margin_g(p: i64) -> Rational {
    let pm1 = int(p - 1);
    int(120) * int(p) * margin_f(p) - &pm1 * &pm1 * &pm1 * int(4 * p * p + p - 8)
}

/// Expanded coefficients of `g`, constant term first.
pub fn margin_g_coefficients() -> Vec<Rational> {
    [-8i64, 7705, -15479, 11651, -3877, 476]
        .into_iter()
        .map(int)
        .collect()
}

/// Horner evaluation; coefficients constant term first.
pub fn eval_poly(coeffs: &[Rational], x: i64) -> Rational {
    let xq = int(x);
    coeffs
        .iter()
        .rev()
        .fold(Rational::zero(), |acc, c| acc * &xq + c)
}

/// Smallest integer `B >= 1` such that for every integer `p >= B` the leading
/// term strictly exceeds the sum of magnitudes of all lower terms, which makes
/// the polynomial positive for all `p >= B`. `None` if the leading coefficient
/// is not positive.
pub fn dominance_threshold(coeffs: &[Rational]) -> Option<u64> {
    let (lead, rest) = coeffs.split_last()?;
    if !lead.is_positive() {
        return None;
    }
    // lead·p^d > Σ|c_i| p^i  ⟸  lead > Σ |c_i| / p^(d-i), monotone in p
    let mut b = 1u64;
    loop {
        let bound: Rational = rest
            .iter()
            .enumerate()
            .map(|(i, c)| c.abs() / int(b).pow((rest.len() - i) as i32))
            .sum();
        if *lead > bound {
            return Some(b);
        }
        b += 1;
    }
}

/// First integer in `range` where `poly` is negative.
pub fn first_negative<F: Fn(i64) -> Rational>(poly: F, range: std::ops::RangeInclusive<i64>) -> Option<i64> {
    range.into_iter().find(|&p| poly(p).is_negative())
}

/// r-independent bounds for one `(n, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundSet {
    pub p: u64,
    pub n: u64,
    #[serde(serialize_with = "ser_rational")]
    pub delta: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub main_term_n2: Rational,
    pub bracket: GpBracket,
    #[serde(serialize_with = "ser_rational")]
    pub upper_r_threshold: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub lower_r_threshold: Rational,
}

/// Bounds that depend on the packing density `r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensityBounds {
    #[serde(serialize_with = "ser_rational")]
    pub r: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub rstar_edges: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub top_class_density: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub ell1: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub ell2: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub defect_coefficient: Rational,
}

impl BoundSet {
    pub fn new(n: u64, p: u64) -> Result<Self, FormulaError> {
        let nq = int(n);
        Ok(Self {
            p,
            n,
            delta: delta(n, p),
            main_term_n2: main_term(p)? * &nq * &nq,
            bracket: g_p_bracket(n, p)?,
            upper_r_threshold: r_upper_threshold(p)?,
            lower_r_threshold: r_lower_threshold(p)?,
        })
    }

    pub fn at(&self, r: &Rational) -> Result<DensityBounds, FormulaError> {
        let (n, p, d) = (self.n, self.p, &self.delta);
        Ok(DensityBounds {
            r: r.clone(),
            rstar_edges: rstar_edge_bound(n, p, r, d)?,
            top_class_density: top_class_density_bound(n, p, r, d)?,
            ell1: ell1_lower_bound(n, p, r, d)?,
            ell2: ell2_lower_bound(n, p, r, d)?,
            defect_coefficient: ell2_defect_coefficient(n, p, r, d)?,
        })
    }
}

/// One row of the CLI constants table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub p: u64,
    pub main_term: Rational,
    pub upper_r_threshold: Rational,
    pub lower_r_threshold: Rational,
    pub f: Rational,
    pub g: Rational,
}

pub fn table(p_min: u64, p_max: u64) -> Result<Vec<TableRow>, FormulaError> {
    (p_min.max(3)..=p_max)
        .map(|p| {
            Ok(TableRow {
                p,
                main_term: main_term(p)?,
                upper_r_threshold: r_upper_threshold(p)?,
                lower_r_threshold: r_lower_threshold(p)?,
                f: margin_f(p as i64),
                g: margin_g(p as i64),
            })
        })
        .collect()
}

pub fn table_csv(rows: &[TableRow]) -> String {
    let mut s = String::from("p,main_term,upper_r_threshold,lower_r_threshold,f,g\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.p,
            fmt_rational(&r.main_term),
            fmt_rational(&r.upper_r_threshold),
            fmt_rational(&r.lower_r_threshold),
            fmt_rational(&r.f),
            fmt_rational(&r.g)
        ));
    }
    s
}

/// Approximate value for human-facing output only.
pub fn to_f64(q: &Rational) -> f64 {
    q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn ser_rational<S: serde::Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(q))
}

#[allow(dead_code)]
pub(crate) fn is_one(q: &Rational) -> bool {
    q.is_one()
}
