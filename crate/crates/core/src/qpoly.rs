//! Exact polynomial arithmetic in q.
//!
//! [`QPoly`] stores rational coefficients keyed by exponents in an internal
//! variable `s` with `q = s^2`, so the hook-polynomial half powers
//! `q^{k/2}` (and their negative Laurent exponents) are representable while
//! they cancel. Public constructors only produce honest polynomials in q;
//! the half-exponent constructors are crate-internal.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::Sign;
use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational-coefficient polynomial (internally Laurent in s, q = s^2).
#[derive(Clone, PartialEq, Eq, Default)]
pub struct QPoly {
    /// s-exponent -> nonzero coefficient.
    c: BTreeMap<i64, BigRational>,
}

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(big(n), big(d))
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { c: BTreeMap::new() }
    }

    pub fn one() -> Self {
        QPoly::int(1)
    }

    /// The variable q.
    pub fn q() -> Self {
        QPoly::q_pow(1)
    }

    /// q^k for k >= 0.
    pub fn q_pow(k: i64) -> Self {
        QPoly::s_monomial(2 * k, BigRational::one())
    }

    pub fn int(n: i64) -> Self {
        QPoly::constant(BigRational::from_integer(big(n)))
    }

    pub fn constant(r: BigRational) -> Self {
        QPoly::s_monomial(0, r)
    }

    /// Crate-internal: a single term c * s^e (q^{e/2}); e may be negative.
    pub(crate) fn s_monomial(e: i64, coeff: BigRational) -> Self {
        let mut c = BTreeMap::new();
        if !coeff.is_zero() {
            c.insert(e, coeff);
        }
        QPoly { c }
    }

    /// Linear polynomial a*q + b.
    pub fn linear(a: i64, b: i64) -> Self {
        &(&QPoly::q() * &QPoly::int(a)) + &QPoly::int(b)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree in q (max s-exponent halved), None for the zero polynomial.
    /// Only meaningful when all exponents are even.
    pub fn degree(&self) -> Option<i64> {
        self.c.keys().next_back().map(|e| e.div_euclid(2))
    }

    /// All exponents even in s, nonnegative, and all coefficients integral.
    pub fn is_integer_polynomial(&self) -> bool {
        self.c
            .iter()
            .all(|(e, r)| *e >= 0 && e % 2 == 0 && r.denom().is_one())
    }

    /// Coefficient of q^k (exponent 2k in s).
    pub fn coeff_q(&self, k: i64) -> BigRational {
        self.c.get(&(2 * k)).cloned().unwrap_or_else(BigRational::zero)
    }

    fn insert_add(&mut self, e: i64, r: &BigRational) {
        if r.is_zero() {
            return;
        }
        let entry = self.c.entry(e).or_insert_with(BigRational::zero);
        *entry += r;
        if entry.is_zero() {
            self.c.remove(&e);
        }
    }

    pub fn scale(&self, r: &BigRational) -> QPoly {
        if r.is_zero() {
            return QPoly::zero();
        }
        QPoly {
            c: self.c.iter().map(|(e, v)| (*e, v * r)).collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> QPoly {
        self.scale(&BigRational::from_integer(big(n)))
    }

    pub fn pow(&self, mut k: u32) -> QPoly {
        let mut acc = QPoly::one();
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Exact division; errors if the remainder is nonzero.
    pub fn divexact(&self, d: &QPoly) -> Result<QPoly> {
        if d.is_zero() {
            return Err(Error::InexactDivision);
        }
        if self.is_zero() {
            return Ok(QPoly::zero());
        }
        // Shift so the divisor is an ordinary polynomial in s with nonzero
        // constant term, then long division.
        let dmin = *d.c.keys().next().unwrap();
        let nmin = *self.c.keys().next().unwrap();
        let ndeg = *self.c.keys().next_back().unwrap() - nmin;
        let ddeg = *d.c.keys().next_back().unwrap() - dmin;
        if ndeg < ddeg {
            return Err(Error::InexactDivision);
        }
        let mut num: Vec<BigRational> = vec![BigRational::zero(); (ndeg + 1) as usize];
        for (e, v) in &self.c {
            num[(*e - nmin) as usize] = v.clone();
        }
        let mut den: Vec<BigRational> = vec![BigRational::zero(); (ddeg + 1) as usize];
        for (e, v) in &d.c {
            den[(*e - dmin) as usize] = v.clone();
        }
        let lead = den[ddeg as usize].clone();
        let mut quot: Vec<BigRational> = vec![BigRational::zero(); (ndeg - ddeg + 1) as usize];
        for k in (0..=(ndeg - ddeg) as usize).rev() {
            let c = &num[k + ddeg as usize] / &lead;
            if !c.is_zero() {
                for (i, dv) in den.iter().enumerate() {
                    if !dv.is_zero() {
                        let t = &c * dv;
                        num[k + i] -= t;
                    }
                }
            }
            quot[k] = c;
        }
        if num.iter().any(|v| !v.is_zero()) {
            return Err(Error::InexactDivision);
        }
        let shift = nmin - dmin;
        let mut out = QPoly::zero();
        for (k, v) in quot.into_iter().enumerate() {
            if !v.is_zero() {
                out.c.insert(k as i64 + shift, v);
            }
        }
        Ok(out)
    }

    /// Evaluate at a rational q (exponents must be even; negative allowed
    /// when q != 0).
    pub fn eval(&self, q: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, v) in &self.c {
            assert!(e % 2 == 0, "cannot evaluate a half-exponent polynomial");
            let k = e / 2;
            let p = if k >= 0 {
                pow_rat(q, k as u64)
            } else {
                BigRational::one() / pow_rat(q, (-k) as u64)
            };
            acc += v * p;
        }
        acc
    }

    pub fn eval_u64(&self, q: u64) -> BigRational {
        self.eval(&BigRational::from_integer(BigInt::from(q)))
    }

    /// Evaluate at an integer q and require an integer result.
    pub fn eval_int(&self, q: u64) -> Result<BigInt> {
        let v = self.eval_u64(q);
        if v.denom().is_one() {
            Ok(v.numer().clone())
        } else {
            Err(Error::NonIntegerResult(format!(
                "value at q={} is {}",
                q, v
            )))
        }
    }

    /// Substitute q -> q^k (s-exponents scale by k).
    pub(crate) fn subst_q_pow(&self, k: i64) -> QPoly {
        QPoly {
            c: self.c.iter().map(|(e, v)| (e * k, v.clone())).collect(),
        }
    }

    /// Require an integer polynomial in q, else NonIntegerCoefficients.
    pub fn expect_integer_polynomial(self, what: &str) -> Result<QPoly> {
        if self.is_integer_polynomial() {
            Ok(self)
        } else {
            Err(Error::NonIntegerCoefficients(format!("{}: {}", what, self)))
        }
    }
}

fn pow_rat(q: &BigRational, k: u64) -> BigRational {
    let mut acc = BigRational::one();
    let mut base = q.clone();
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            acc *= &base;
        }
        base = &base.clone() * &base;
        k >>= 1;
    }
    acc
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let mut out = self.clone();
        for (e, v) in &rhs.c {
            out.insert_add(*e, v);
        }
        out
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        let mut out = self.clone();
        for (e, v) in &rhs.c {
            out.insert_add(*e, &-v.clone());
        }
        out
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        let mut out = QPoly::zero();
        for (e1, v1) in &self.c {
            for (e2, v2) in &rhs.c {
                out.insert_add(e1 + e2, &(v1 * v2));
            }
        }
        out
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly {
            c: self.c.iter().map(|(e, v)| (*e, -v.clone())).collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// Rendering and parsing. Canonical form: descending powers, explicit signs,
// `^` for powers, e.g. `q^3 - 6*q - 1`.
// ---------------------------------------------------------------------------

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, v) in self.c.iter().rev() {
            let neg = v.sign() == Sign::Minus;
            let a = v.abs();
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
            let show_coeff = *e == 0 || !a.is_one();
            if show_coeff {
                if a.denom().is_one() {
                    write!(f, "{}", a.numer())?;
                } else {
                    write!(f, "{}/{}", a.numer(), a.denom())?;
                }
            }
            if *e != 0 {
                if show_coeff {
                    write!(f, "*")?;
                }
                if e % 2 == 0 {
                    let k = e / 2;
                    if k == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{}", k)?;
                    }
                } else {
                    write!(f, "q^({}/2)", e)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly({})", self)
    }
}

impl FromStr for QPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<QPoly> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let bytes = s.as_bytes();
        let mut i = 0usize;
        let mut out = QPoly::zero();
        let mut sign = 1i64;
        if bytes[i] == b'+' || bytes[i] == b'-' {
            sign = if bytes[i] == b'-' { -1 } else { 1 };
            i += 1;
        }
        loop {
            // term: [number[/number]] ['*'] ['q' ['^' [-]digits]]
            let start = i;
            let mut num: Option<BigInt> = None;
            let mut den: Option<BigInt> = None;
            let ds = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i > ds {
                num = Some(
                    s[ds..i]
                        .parse::<BigInt>()
                        .map_err(|e| Error::Parse(e.to_string()))?,
                );
                if i < bytes.len() && bytes[i] == b'/' {
                    i += 1;
                    let ds2 = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if i == ds2 {
                        return Err(Error::Parse("missing denominator".into()));
                    }
                    den = Some(
                        s[ds2..i]
                            .parse::<BigInt>()
                            .map_err(|e| Error::Parse(e.to_string()))?,
                    );
                }
            }
            if i < bytes.len() && bytes[i] == b'*' {
                i += 1;
            }
            let mut exp: i64 = 0;
            if i < bytes.len() && bytes[i] == b'q' {
                i += 1;
                exp = 1;
                if i < bytes.len() && bytes[i] == b'^' {
                    i += 1;
                    let neg = i < bytes.len() && bytes[i] == b'-';
                    if neg {
                        i += 1;
                    }
                    let ds3 = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if i == ds3 {
                        return Err(Error::Parse("missing exponent".into()));
                    }
                    exp = s[ds3..i]
                        .parse::<i64>()
                        .map_err(|e| Error::Parse(e.to_string()))?;
                    if neg {
                        exp = -exp;
                    }
                }
            }
            if i == start {
                return Err(Error::Parse(format!("unexpected input at `{}`", &s[i..])));
            }
            let n = num.unwrap_or_else(|| big(1));
            let d = den.unwrap_or_else(|| big(1));
            if d.is_zero() {
                return Err(Error::Parse("zero denominator".into()));
            }
            let coeff = BigRational::new(n * big(sign), d);
            out.insert_add(2 * exp, &coeff);
            if i == bytes.len() {
                break;
            }
            sign = match bytes[i] {
                b'+' => 1,
                b'-' => -1,
                _ => return Err(Error::Parse(format!("expected sign at `{}`", &s[i..]))),
            };
            i += 1;
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// Lagrange interpolation and Euler characteristics.
// ---------------------------------------------------------------------------

/// Interpolate a polynomial of degree <= `degree_bound` through the given
/// (q, value) points. Uses the first `degree_bound + 1` points; any further
/// points must agree with the fit.
pub fn interpolate(points: &[(BigInt, BigInt)], degree_bound: usize) -> Result<QPoly> {
    let needed = degree_bound + 1;
    if points.len() < needed {
        return Err(Error::InsufficientPoints {
            needed,
            got: points.len(),
        });
    }
    for (i, (qi, _)) in points.iter().enumerate() {
        for (qj, _) in points.iter().skip(i + 1) {
            if qi == qj {
                return Err(Error::BadParams(format!("duplicate node q = {}", qi)));
            }
        }
    }
    let nodes = &points[..needed];
    let mut acc = QPoly::zero();
    for (i, (qi, vi)) in nodes.iter().enumerate() {
        let mut basis = QPoly::one();
        let mut denom = BigRational::one();
        for (j, (qj, _)) in nodes.iter().enumerate() {
            if i == j {
                continue;
            }
            let t = &QPoly::q() - &QPoly::constant(BigRational::from_integer(qj.clone()));
            basis = &basis * &t;
            denom *= BigRational::from_integer(qi - qj);
        }
        let w = BigRational::from_integer(vi.clone()) / denom;
        acc = &acc + &basis.scale(&w);
    }
    for (qk, vk) in points.iter().skip(needed) {
        let got = acc.eval(&BigRational::from_integer(qk.clone()));
        if got != BigRational::from_integer(vk.clone()) {
            return Err(Error::InconsistentPoints(qk.to_string()));
        }
    }
    Ok(acc)
}

/// E(1): the topological Euler characteristic of the variety the polynomial
/// counts.
pub fn euler_characteristic(p: &QPoly) -> BigRational {
    p.eval(&BigRational::one())
}

// ---------------------------------------------------------------------------
// Transcribed closed-form counting polynomials.
// ---------------------------------------------------------------------------

use crate::homcount::GroupFamily;
use crate::matgroup::Series;

fn half() -> BigRational {
    rat(1, 2)
}

/// q^3 - q, q^2 - q, ... building blocks.
fn qp(coeffs: &[(i64, i64)]) -> QPoly {
    // coeffs: list of (power, integer coefficient)
    let mut p = QPoly::zero();
    for (k, c) in coeffs {
        p = &p + &QPoly::q_pow(*k).scale_int(*c);
    }
    p
}

/// The closed-form count of reductive representation classes (equivalently
/// the E-polynomial of the complex character variety) for the supported
/// family/series/rank combinations.
pub fn closed_form_epoly(family: &GroupFamily, series: Series, rank: u8) -> Result<QPoly> {
    family.validate()?;
    let p = match (rank, family) {
        (2, GroupFamily::Free { r }) => free_rank2(*r, series),
        (2, GroupFamily::Orientable { g }) => orientable_rank2(*g, series),
        (2, GroupFamily::NonOrientable { k }) => {
            if *k < 2 {
                return Err(Error::BadParams(
                    "non-orientable closed form needs k >= 2".into(),
                ));
            }
            nonorientable_rank2(*k, series)
        }
        (2, GroupFamily::TorusKnot { a, b }) => torusknot_rank2(*a, *b, series),
        (3, GroupFamily::Orientable { g }) => {
            if *g < 2 {
                return Err(Error::BadGenus(*g, 2));
            }
            orientable_rank3(*g, series)
        }
        (3, _) => {
            return Err(Error::BadParams(
                "rank-3 closed forms cover orientable surfaces only".into(),
            ))
        }
        (r, _) => return Err(Error::UnsupportedRank(r)),
    };
    p.expect_integer_polynomial("closed-form count")
}

fn free_rank2(r: u32, series: Series) -> QPoly {
    let e = r - 1;
    let core = &(&qp(&[(3, 1), (1, -1)]).pow(e) - &qp(&[(2, 1), (1, -1)]).pow(e))
        + &(&QPoly::q()
            * &(&qp(&[(1, 1), (0, 1)]).pow(e).scale(&half())
                + &qp(&[(1, 1), (0, -1)]).pow(e).scale(&half())));
    match series {
        Series::Sl => core,
        Series::Gl => &qp(&[(1, 1), (0, -1)]).pow(r) * &core,
    }
}

fn orientable_rank2(g: u32, series: Series) -> QPoly {
    let e = 2 * g - 2;
    let q = QPoly::q();
    let q3q = qp(&[(3, 1), (1, -1)]);
    let q21 = qp(&[(2, 1), (0, -1)]);
    let q2pq = qp(&[(2, 1), (1, 1)]);
    let q2mq = qp(&[(2, 1), (1, -1)]);
    let qp1 = qp(&[(1, 1), (0, 1)]);
    let qm1 = qp(&[(1, 1), (0, -1)]);
    match series {
        Series::Gl => {
            // (q-1)^{2g} ( (q^3-q)^{2g-2} + (q^2-1)^{2g-2}
            //   + q( (q^2+q)^{2g-2}/2 + (q^2-q)^{2g-2}/2 )
            //   - q(q^2-q)^{2g-2} - q^{2g-2}
            //   + q( (q+1)^{2g-1}/2 + (q-1)^{2g-1}/2 ) )
            let inner = &(&(&(&(&q3q.pow(e) + &q21.pow(e))
                + &(&q * &(&q2pq.pow(e).scale(&half()) + &q2mq.pow(e).scale(&half()))))
                - &(&q * &q2mq.pow(e)))
                - &QPoly::q_pow(e as i64))
                + &(&q
                    * &(&qp1.pow(2 * g - 1).scale(&half()) + &qm1.pow(2 * g - 1).scale(&half())));
            &qm1.pow(2 * g) * &inner
        }
        Series::Sl => {
            let two2g = QPoly::int(2).pow(2 * g);
            let two2gm1 = QPoly::int(2).pow(2 * g - 1);
            let sum_pm = &q2pq.pow(e) + &q2mq.pow(e);
            &(&(&(&(&(&q3q.pow(e) + &q21.pow(e)) - &(&q * &q2mq.pow(e)))
                - &(&two2g * &QPoly::q_pow(e as i64)))
                + &(&qm1 * &sum_pm).scale(&half()))
                + &(&two2gm1 * &sum_pm))
                + &(&q
                    * &(&qp1.pow(2 * g - 1).scale(&half()) + &qm1.pow(2 * g - 1).scale(&half())))
        }
    }
}

fn nonorientable_rank2(k: u32, series: Series) -> QPoly {
    let e = k - 2;
    let q = QPoly::q();
    let q3q = qp(&[(3, 1), (1, -1)]);
    let q21 = qp(&[(2, 1), (0, -1)]);
    let q2pq = qp(&[(2, 1), (1, 1)]);
    let q2mq = qp(&[(2, 1), (1, -1)]);
    let qp1 = qp(&[(1, 1), (0, 1)]);
    let qm1 = qp(&[(1, 1), (0, -1)]);
    let qe = QPoly::q_pow(e as i64);
    match series {
        Series::Gl => {
            // (q-1)^{k-1} ( (q-1)/2 (q^2-q)^{k-2} + (q-1)/2 (q^2+q)^{k-2}
            //   + 2(q^3-q)^{k-2} + 2(q^2-1)^{k-2}
            //   + q( (q+1)^{k-2} + 2(q-1)^{k-2} )
            //   - 4(q-1)^{k-2} q^{k-2} - 2 q^{k-2} )
            let inner = &(&(&(&(&qm1.scale(&half()) * &(&q2mq.pow(e) + &q2pq.pow(e)))
                + &(&q3q.pow(e) + &q21.pow(e)).scale_int(2))
                + &(&q * &(&qp1.pow(e) + &qm1.pow(e).scale_int(2))))
                - &(&qm1.pow(e) * &qe).scale_int(4))
                - &qe.scale_int(2);
            &qm1.pow(k - 1) * &inner
        }
        Series::Sl => {
            if k % 2 == 0 {
                // (q^3-q)^{k-2} + (q^2-1)^{k-2}
                //   + ((q-1)/2 + 2^{k-1}) ((q^2+q)^{k-2} + (q^2-q)^{k-2})
                //   - 3(q^2-q)^{k-2} - 2^k q^{k-2} + q((q+1)^{k-2} + (q-1)^{k-2})
                let coef = &qm1.scale(&half()) + &QPoly::int(2).pow(k - 1);
                &(&(&(&(&q3q.pow(e) + &q21.pow(e)) + &(&coef * &(&q2pq.pow(e) + &q2mq.pow(e))))
                    - &q2mq.pow(e).scale_int(3))
                    - &(&QPoly::int(2).pow(k) * &qe))
                    + &(&q * &(&qp1.pow(e) + &qm1.pow(e)))
            } else {
                // (q^3-q)^{k-2} + (q^2-1)^{k-2} - 2^{k-1}(q^2+q)^{k-2}
                //   + (2^{k-1}-3)(q^2-q)^{k-2} + q((q+1)^{k-2} + (q-1)^{k-2})
                let c = &QPoly::int(2).pow(k - 1) - &QPoly::int(3);
                &(&(&(&q3q.pow(e) + &q21.pow(e)) - &(&QPoly::int(2).pow(k - 1) * &q2pq.pow(e)))
                    + &(&c * &q2mq.pow(e)))
                    + &(&q * &(&qp1.pow(e) + &qm1.pow(e)))
            }
        }
    }
}

fn torusknot_rank2(a: u32, b: u32, series: Series) -> QPoly {
    let q = QPoly::q();
    let qm1 = qp(&[(1, 1), (0, -1)]);
    // Exactly one of a, b can be even; put it first.
    let (a, b) = if b % 2 == 0 { (b, a) } else { (a, b) };
    match series {
        Series::Sl => {
            // q + (a-1)(b-1)(q-2)/2
            let c = rat(((a - 1) * (b - 1)) as i64, 2);
            &q + &qp(&[(1, 1), (0, -2)]).scale(&c)
        }
        Series::Gl => {
            if a % 2 == 0 {
                // (q-1)( q + (b-1)(aq - 3a + 4)/4 )
                let lin = qp(&[(1, a as i64), (0, -(3 * a as i64) + 4)]);
                let inner = &q + &lin.scale(&rat((b - 1) as i64, 4));
                &qm1 * &inner
            } else {
                // (q-1)( q + (a-1)(b-1)(q-2)/4 )
                let c = rat(((a - 1) * (b - 1)) as i64, 4);
                let inner = &q + &qp(&[(1, 1), (0, -2)]).scale(&c);
                &qm1 * &inner
            }
        }
    }
}

fn orientable_rank3(g: u32, series: Series) -> QPoly {
    let e = 2 * g - 2;
    let q = QPoly::q();
    let qm1 = qp(&[(1, 1), (0, -1)]);
    let third = rat(1, 3);
    let sixth = rat(1, 6);

    // Shared tail of both displays.
    let b1 = qp(&[(5, 1), (4, 1), (3, 1)]).pow(e); // (q^5+q^4+q^3)^{2g-2}
    let b2 = qp(&[(5, 1), (3, -1)]).pow(e); // (q^5-q^3)^{2g-2}
    let b3 = qp(&[(8, 1), (6, -1), (5, -1), (3, 1)]).pow(e);
    let b4 = qp(&[(6, 1), (5, -1), (3, -1), (2, 1)]).pow(e);
    let b5 = qp(&[(5, 1), (3, -1), (2, -1), (0, 1)]).pow(e);
    let b6 = qp(&[(6, 1), (5, -1), (4, -1), (3, 1)]).pow(e);
    let b7 = qp(&[(5, 1), (4, -1), (3, -1), (2, 1)]).pow(e);
    let b8 = qp(&[(5, 1), (4, -2), (3, 1)]).pow(e); // (q^5-2q^4+q^3)^{2g-2}
    let qc2 = qp(&[(2, 1), (1, 1)]); // q^2+q
    let qc2m = qp(&[(2, 1), (1, -1)]); // q^2-q
    let qm2 = qp(&[(1, 1), (0, -2)]); // q-2

    // (q - 2q^{4g-4}) (...) blocks
    let tw = &q - &QPoly::q_pow((4 * g - 4) as i64).scale_int(2);
    let blk1 = &(&qm2.scale(&half()) * &(&qc2m.pow(e) * &qm1.pow(2 * g - 1)))
        + &(&q.scale(&half()) * &(&qc2.pow(e) * &qm1.pow(2 * g - 1)));
    let blk2 = &(&qp(&[(3, 1), (1, -1)]).pow(e) * &qm1.pow(2 * g - 1))
        + &(&qp(&[(2, 1), (0, -1)]).pow(e) * &qm1.pow(2 * g - 1));

    let tail1 = &(&qc2 * &qp(&[(2, 1), (1, 1), (0, 1)]).pow(2 * g - 1)).scale(&third)
        + &(&qc2m * &qp(&[(2, 1), (0, -1)]).pow(2 * g - 1)).scale(&half());
    // ( (q^2+q)/6 + q^{6g-6} - q^{2g-1} )(q-1)^{4g-2}
    let tail2 = &(&(&qc2.scale(&sixth) + &QPoly::q_pow((6 * g - 6) as i64))
        - &QPoly::q_pow((2 * g - 1) as i64))
        * &qm1.pow(4 * g - 2);
    // ( q^{4g-6} - q^{2g-2} - q^{2g-4} )(q-1)^{2g}
    let tail3 = &(&(&QPoly::q_pow((4 * g - 6) as i64) - &QPoly::q_pow((2 * g - 2) as i64))
        - &QPoly::q_pow((2 * g - 4) as i64))
        * &qm1.pow(2 * g);
    // ( q^{2g-2} - 1 )( q^{2g-4} + q^{2g-1} - 2 )(q-1)^{2g-2}
    let tail4 = &(&(&QPoly::q_pow((2 * g - 2) as i64) - &QPoly::one())
        * &(&(&QPoly::q_pow((2 * g - 4) as i64) + &QPoly::q_pow((2 * g - 1) as i64))
            - &QPoly::int(2)))
        * &qm1.pow(2 * g - 2);

    let shared = &(&(&(&(&(&(&(&(&(&b3 + &b4) + &b5) + &(&qm2 * &b6)) + &(&qm2 * &b7))
        + &(&tw * &blk1))
        + &(&tw * &blk2))
        + &tail1)
        + &tail2)
        + &tail3)
        + &tail4;

    match series {
        Series::Gl => {
            // head: (q^2+q)/3 b1 + (q^2-q)/2 b2 + (q-2)(q-3)/6 b8 - q^{6g-6}
            let head = &(&(&(&qc2.scale(&third) * &b1) + &(&qc2m.scale(&half()) * &b2))
                + &(&(&qm2 * &qp(&[(1, 1), (0, -3)])).scale(&sixth) * &b8))
                - &QPoly::q_pow((6 * g - 6) as i64);
            &qm1.pow(2 * g) * &(&head + &shared)
        }
        Series::Sl => {
            // head: (2*3^{2g-1} + (q-1)(q+2)/3) b1 + (q^2-q)/2 b2
            //   + (3^{2g-1} + (q-1)(q-4)/6) b8 - q^{6g-6} 3^{2g}
            let t1 = &QPoly::int(2).scale_int(3i64.pow(2 * g - 1))
                + &(&qm1 * &qp(&[(1, 1), (0, 2)])).scale(&third);
            let t8 = &QPoly::int(3i64.pow(2 * g - 1).try_into().unwrap())
                + &(&qm1 * &qp(&[(1, 1), (0, -4)])).scale(&sixth);
            let head = &(&(&(&t1 * &b1) + &(&qc2m.scale(&half()) * &b2)) + &(&t8 * &b8))
                - &QPoly::q_pow((6 * g - 6) as i64).scale_int(3i64.pow(2 * g));
            &head + &shared
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> QPoly {
        s.parse().unwrap()
    }

    #[test]
    fn arithmetic_basics() {
        let qm1 = p("q - 1");
        let qp1 = p("q + 1");
        assert_eq!(&qm1 * &qp1, p("q^2 - 1"));
        assert_eq!(p("q^3 - q").divexact(&qm1).unwrap(), p("q^2 + q"));
        assert_eq!(
            p("q^2 + 1").divexact(&qm1).unwrap_err(),
            Error::InexactDivision
        );
    }

    #[test]
    fn display_canonical() {
        assert_eq!(p("q^3-6*q-1").to_string(), "q^3 - 6*q - 1");
        assert_eq!(QPoly::zero().to_string(), "0");
        assert_eq!(p("-q").to_string(), "-q");
        assert_eq!(p("3/2*q^2+1/2").to_string(), "3/2*q^2 + 1/2");
    }

    #[test]
    fn interpolate_square() {
        let pts = vec![
            (big(1), big(1)),
            (big(2), big(4)),
            (big(3), big(9)),
        ];
        assert_eq!(interpolate(&pts, 2).unwrap(), p("q^2"));
        assert!(matches!(
            interpolate(&pts[..2], 2),
            Err(Error::InsufficientPoints { needed: 3, got: 2 })
        ));
        let bad = vec![(big(1), big(1)), (big(2), big(4)), (big(3), big(10))];
        // bound 1 fits a line through the first two, third disagrees
        assert!(matches!(
            interpolate(&bad, 1),
            Err(Error::InconsistentPoints(_))
        ));
    }

    #[test]
    fn closed_forms_spot_values() {
        let nk3 = closed_form_epoly(&GroupFamily::NonOrientable { k: 3 }, Series::Sl, 2).unwrap();
        assert_eq!(nk3, p("q^3 - 6*q - 1"));
        let t1 = closed_form_epoly(&GroupFamily::Orientable { g: 1 }, Series::Sl, 2).unwrap();
        assert_eq!(t1, p("q^2 + 1"));
        let tk = closed_form_epoly(&GroupFamily::TorusKnot { a: 2, b: 3 }, Series::Gl, 2).unwrap();
        assert_eq!(tk, &p("q - 1") * &p("2*q - 1"));
        let f1 = closed_form_epoly(&GroupFamily::Free { r: 1 }, Series::Sl, 2).unwrap();
        assert_eq!(f1, p("q"));
        let f2 = closed_form_epoly(&GroupFamily::Free { r: 2 }, Series::Sl, 2).unwrap();
        assert_eq!(f2, p("q^3"));
        let k2 = closed_form_epoly(&GroupFamily::NonOrientable { k: 2 }, Series::Sl, 2).unwrap();
        assert_eq!(k2, p("3*q - 2"));
    }

    #[test]
    fn euler_characteristic_values() {
        // SL3 surfaces: 2*3^{4g-3} - 7*3^{2g-2}
        for g in 2..=4u32 {
            let e = euler_characteristic(
                &closed_form_epoly(&GroupFamily::Orientable { g }, Series::Sl, 3).unwrap(),
            );
            let expect = 2 * 3i64.pow(4 * g - 3) - 7 * 3i64.pow(2 * g - 2);
            assert_eq!(e, BigRational::from_integer(big(expect)), "g = {}", g);
        }
        // Non-orientable SL2
        for k in 4..=8u32 {
            let e = euler_characteristic(
                &closed_form_epoly(&GroupFamily::NonOrientable { k }, Series::Sl, 2).unwrap(),
            );
            let expect = if k % 2 == 0 {
                2i64.pow(2 * k - 3) - 3 * 2i64.pow(k - 2)
            } else {
                -2i64.pow(2 * k - 3) + 2i64.pow(k - 2)
            };
            assert_eq!(e, BigRational::from_integer(big(expect)), "k = {}", k);
        }
        // GL families vanish at q = 1
        let zero = BigRational::zero();
        for fam in [
            GroupFamily::Free { r: 3 },
            GroupFamily::Orientable { g: 2 },
            GroupFamily::NonOrientable { k: 5 },
            GroupFamily::TorusKnot { a: 2, b: 3 },
        ] {
            let e = euler_characteristic(&closed_form_epoly(&fam, Series::Gl, 2).unwrap());
            assert_eq!(e, zero);
        }
        let e3 = euler_characteristic(
            &closed_form_epoly(&GroupFamily::Orientable { g: 2 }, Series::Gl, 3).unwrap(),
        );
        assert_eq!(e3, zero);
    }

    #[test]
    fn degree_of_surface_sl2() {
        for g in 2..=5u32 {
            let pl = closed_form_epoly(&GroupFamily::Orientable { g }, Series::Sl, 2).unwrap();
            assert_eq!(pl.degree(), Some((6 * g - 6) as i64), "g = {}", g);
        }
    }

    #[test]
    fn rank3_needs_genus_two() {
        assert!(matches!(
            closed_form_epoly(&GroupFamily::Orientable { g: 1 }, Series::Gl, 3),
            Err(Error::BadGenus(1, 2))
        ));
    }

    proptest! {
        #[test]
        fn interpolation_roundtrip(coeffs in proptest::collection::vec(-50i64..50, 1..8)) {
            let mut poly = QPoly::zero();
            for (k, c) in coeffs.iter().enumerate() {
                poly = &poly + &QPoly::q_pow(k as i64).scale_int(*c);
            }
            let deg = coeffs.len() - 1;
            let pts: Vec<(BigInt, BigInt)> = (0..=deg as i64 + 2)
                .map(|x| {
                    let v = poly.eval(&BigRational::from_integer(big(x)));
                    (big(x), v.numer().clone())
                })
                .collect();
            let back = interpolate(&pts, deg).unwrap();
            prop_assert_eq!(back, poly);
        }

        #[test]
        fn render_parse_roundtrip(coeffs in proptest::collection::vec(-9i64..9, 1..6)) {
            let mut poly = QPoly::zero();
            for (k, c) in coeffs.iter().enumerate() {
                poly = &poly + &QPoly::q_pow(k as i64).scale_int(*c);
            }
            let s = poly.to_string();
            let back: QPoly = s.parse().unwrap();
            prop_assert_eq!(back, poly);
        }
    }
}
