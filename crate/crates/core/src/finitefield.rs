//! Exact arithmetic in F_q and its extensions F_{q^d}, d <= 3.
//!
//! A [`FieldCtx`] realises F_{p^(e*d)} as F_p[x]/(f) for the canonical
//! (lexicographically smallest) monic irreducible f, with a fixed
//! multiplicative generator and full discrete-log tables. Elements are
//! opaque packed indices ([`Fe`]); all operations go through the context.
//! The algebraic closure is never materialised: d <= 3 covers every
//! computation here.

use crate::error::{Error, Result};

pub const MAX_ORDER: u64 = 1 << 20;
const ADD_TABLE_MAX_ORDER: u64 = 2500;

/// A field element: packed index `sum c_i p^i` of its coefficient vector.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Fe(pub u32);

pub struct FieldCtx {
    p: u64,
    e: u32,
    d: u32,
    n: u32,
    q: u64,
    order: u64,
    modulus: Vec<u64>,
    pow_p: Vec<u64>,
    log: Vec<u32>,
    exp: Vec<u32>,
    neg: Vec<u32>,
    add_tbl: Option<Vec<u32>>,
}

impl FieldCtx {
    /// Build the context for F_{q^d} with q = p^e. Deterministic: the
    /// modulus is the lexicographically smallest monic irreducible of
    /// degree e*d, the generator the smallest element of full order.
    pub fn new(p: u64, e: u32, d: u32) -> Result<FieldCtx> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if !(1..=3).contains(&d) {
            return Err(Error::BadParams(format!("extension degree d = {}", d)));
        }
        if e == 0 {
            return Err(Error::BadParams("e must be positive".into()));
        }
        let q = checked_pow(p, e).ok_or_else(|| Error::TooLarge(format!("p^e with p={}", p)))?;
        if q > MAX_ORDER {
            return Err(Error::TooLarge(format!("q = {} exceeds 2^20", q)));
        }
        let n = e * d;
        let order =
            checked_pow(p, n).ok_or_else(|| Error::TooLarge(format!("p^(e*d), p={}", p)))?;
        if order > MAX_ORDER {
            return Err(Error::TooLarge(format!("q^d = {} exceeds 2^20", order)));
        }

        let mut pow_p = Vec::with_capacity(n as usize + 1);
        let mut t = 1u64;
        for _ in 0..=n {
            pow_p.push(t);
            t = t.saturating_mul(p);
        }

        let modulus = smallest_irreducible(p, n);

        // Raw packed-polynomial multiplication, used until tables exist.
        let mul_raw = |a: u64, b: u64| mul_packed(a, b, &modulus, p, &pow_p);

        let group = order - 1;
        let factors = prime_factors(group);
        let mut generator = 0u64;
        for cand in 2..order {
            let ok = factors
                .iter()
                .all(|f| pow_packed(cand, group / f, &modulus, p, &pow_p) != 1);
            if ok {
                generator = cand;
                break;
            }
        }
        // order = 2 has generator 1 (the trivial group case q^d = 2).
        if generator == 0 {
            generator = 1;
        }

        let mut exp = vec![0u32; group as usize];
        let mut log = vec![u32::MAX; order as usize];
        let mut cur = 1u64;
        for (k, slot) in exp.iter_mut().enumerate() {
            *slot = cur as u32;
            debug_assert!(log[cur as usize] == u32::MAX, "generator order too small");
            log[cur as usize] = k as u32;
            cur = mul_raw(cur, generator);
        }
        debug_assert_eq!(cur, 1, "generator order mismatch");

        let mut neg = vec![0u32; order as usize];
        for a in 0..order {
            let mut acc = 0u64;
            for i in 0..n {
                let digit = (a / pow_p[i as usize]) % p;
                let nd = (p - digit) % p;
                acc += nd * pow_p[i as usize];
            }
            neg[a as usize] = acc as u32;
        }

        let add_tbl = if order <= ADD_TABLE_MAX_ORDER {
            let mut t = vec![0u32; (order * order) as usize];
            for a in 0..order {
                for b in a..order {
                    let s = add_digits(a, b, p, &pow_p, n);
                    t[(a * order + b) as usize] = s as u32;
                    t[(b * order + a) as usize] = s as u32;
                }
            }
            Some(t)
        } else {
            None
        };

        Ok(FieldCtx {
            p,
            e,
            d,
            n,
            q,
            order,
            modulus,
            pow_p,
            log,
            exp,
            neg,
            add_tbl,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn d(&self) -> u32 {
        self.d
    }
    /// q = p^e.
    pub fn q(&self) -> u64 {
        self.q
    }
    /// The number of elements, q^d.
    pub fn order(&self) -> u64 {
        self.order
    }
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> Fe {
        Fe(0)
    }
    pub fn one(&self) -> Fe {
        Fe(1)
    }

    pub fn generator(&self) -> Fe {
        // exp[1] when the group is nontrivial, else 1.
        if self.order > 2 {
            Fe(self.exp[1])
        } else {
            Fe(1)
        }
    }

    pub fn elem(&self, packed: u64) -> Fe {
        assert!(packed < self.order);
        Fe(packed as u32)
    }

    /// The image of the integer c under Z -> F_p inside the field.
    pub fn from_int(&self, c: i64) -> Fe {
        let m = c.rem_euclid(self.p as i64) as u64;
        Fe(m as u32)
    }

    pub fn coeffs(&self, a: Fe) -> Vec<u64> {
        (0..self.n)
            .map(|i| (a.0 as u64 / self.pow_p[i as usize]) % self.p)
            .collect()
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if let Some(t) = &self.add_tbl {
            Fe(t[(a.0 as u64 * self.order + b.0 as u64) as usize])
        } else {
            Fe(add_digits(a.0 as u64, b.0 as u64, self.p, &self.pow_p, self.n) as u32)
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe(0);
        }
        let g = self.order - 1;
        let k = (self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64) % g;
        Fe(self.exp[k as usize])
    }

    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: Fe) -> Fe {
        assert!(a.0 != 0, "inverse of zero");
        let g = self.order - 1;
        let k = (g - self.log[a.0 as usize] as u64) % g;
        Fe(self.exp[k as usize])
    }

    pub fn pow(&self, a: Fe, k: u64) -> Fe {
        if a.0 == 0 {
            return if k == 0 { Fe(1) } else { Fe(0) };
        }
        let g = self.order - 1;
        let e = (self.log[a.0 as usize] as u128 * (k % g) as u128 % g as u128) as u64;
        Fe(self.exp[e as usize])
    }

    pub fn pow_signed(&self, a: Fe, k: i64) -> Fe {
        if k >= 0 {
            self.pow(a, k as u64)
        } else {
            self.inv(self.pow(a, (-k) as u64))
        }
    }

    /// The Frobenius map x -> x^q; applying it d times is the identity.
    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow(a, self.q)
    }

    /// Discrete log with respect to the fixed generator.
    pub fn dlog(&self, a: Fe) -> Result<u64> {
        if a.0 == 0 {
            return Err(Error::ZeroElement);
        }
        Ok(self.log[a.0 as usize] as u64)
    }

    /// generator^k.
    pub fn exp_gen(&self, k: u64) -> Fe {
        let g = self.order - 1;
        Fe(self.exp[(k % g) as usize])
    }

    /// Canonical total order index: 0 for zero, dlog + 1 otherwise.
    /// Field-representation independent (depends only on the generator).
    #[inline]
    pub fn ord_index(&self, a: Fe) -> u64 {
        if a.0 == 0 {
            0
        } else {
            self.log[a.0 as usize] as u64 + 1
        }
    }

    /// Elements in canonical order: 0, 1 = g^0, g, g^2, ...
    pub fn elements_ordered(&self) -> Vec<Fe> {
        let mut v = Vec::with_capacity(self.order as usize);
        v.push(Fe(0));
        v.extend(self.exp.iter().map(|&x| Fe(x)));
        v
    }

    pub fn is_square(&self, a: Fe) -> bool {
        if a.0 == 0 {
            return true;
        }
        if self.p == 2 {
            return true;
        }
        self.log[a.0 as usize] % 2 == 0
    }
}

/// An embedding of one context's field into a larger one (same p,
/// n_small | n_big), with its partial inverse.
pub struct Embedding {
    fwd: Vec<u32>,
    back: Vec<u32>,
}

impl Embedding {
    pub fn new(small: &FieldCtx, big: &FieldCtx) -> Result<Embedding> {
        if small.p != big.p || big.n % small.n != 0 {
            return Err(Error::BadParams(
                "embedding requires same characteristic and compatible degrees".into(),
            ));
        }
        // Smallest-packed root of the small modulus in the big field.
        let coeffs: Vec<Fe> = small.modulus.iter().map(|&c| big.from_int(c as i64)).collect();
        let mut root = None;
        for y in 0..big.order {
            let fy = horner(big, &coeffs, Fe(y as u32));
            if fy.0 == 0 {
                root = Some(Fe(y as u32));
                break;
            }
        }
        let r = root.ok_or_else(|| Error::BadParams("modulus has no root in extension".into()))?;
        let mut fwd = vec![0u32; small.order as usize];
        let mut back = vec![u32::MAX; big.order as usize];
        for a in 0..small.order {
            let cs: Vec<Fe> = small
                .coeffs(Fe(a as u32))
                .iter()
                .map(|&c| big.from_int(c as i64))
                .collect();
            let img = horner(big, &cs, r);
            fwd[a as usize] = img.0;
            back[img.0 as usize] = a as u32;
        }
        Ok(Embedding { fwd, back })
    }

    #[inline]
    pub fn fwd(&self, a: Fe) -> Fe {
        Fe(self.fwd[a.0 as usize])
    }

    /// Inverse image, if the element lies in the subfield.
    #[inline]
    pub fn back(&self, a: Fe) -> Option<Fe> {
        let v = self.back[a.0 as usize];
        if v == u32::MAX {
            None
        } else {
            Some(Fe(v))
        }
    }
}

fn horner(ctx: &FieldCtx, coeffs: &[Fe], x: Fe) -> Fe {
    let mut acc = ctx.zero();
    for &c in coeffs.iter().rev() {
        acc = ctx.add(ctx.mul(acc, x), c);
    }
    acc
}

// ---------------------------------------------------------------------------
// Packed polynomial arithmetic over F_p (context bootstrap only).
// ---------------------------------------------------------------------------

fn add_digits(a: u64, b: u64, p: u64, pow_p: &[u64], n: u32) -> u64 {
    let mut acc = 0u64;
    for i in 0..n as usize {
        let da = (a / pow_p[i]) % p;
        let db = (b / pow_p[i]) % p;
        acc += ((da + db) % p) * pow_p[i];
    }
    acc
}

fn unpack(a: u64, p: u64, n: usize) -> Vec<u64> {
    let mut v = vec![0u64; n];
    let mut a = a;
    for slot in v.iter_mut() {
        *slot = a % p;
        a /= p;
    }
    v
}

fn mul_packed(a: u64, b: u64, modulus: &[u64], p: u64, pow_p: &[u64]) -> u64 {
    let n = modulus.len() - 1;
    let av = unpack(a, p, n);
    let bv = unpack(b, p, n);
    let mut prod = vec![0u64; 2 * n];
    for (i, &ai) in av.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in bv.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    // reduce by the monic modulus
    for k in (n..2 * n).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for (i, &mi) in modulus.iter().enumerate().take(n) {
            let idx = k - n + i;
            prod[idx] = (prod[idx] + (p - mi % p) * c) % p;
        }
    }
    prod[..n]
        .iter()
        .enumerate()
        .map(|(i, &c)| c * pow_p[i])
        .sum()
}

fn pow_packed(a: u64, mut k: u64, modulus: &[u64], p: u64, pow_p: &[u64]) -> u64 {
    let mut acc = 1u64;
    let mut base = a;
    while k > 0 {
        if k & 1 == 1 {
            acc = mul_packed(acc, base, modulus, p, pow_p);
        }
        base = mul_packed(base, base, modulus, p, pow_p);
        k >>= 1;
    }
    acc
}

// ---------------------------------------------------------------------------
// Modulus search: dense polynomials over F_p as Vec<u64> (low to high).
// ---------------------------------------------------------------------------

fn poly_trim(v: &mut Vec<u64>) {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    let lead_inv = mod_inv(m[dm], p);
    while r.len() > dm && !(r.len() == 1 && r[0] == 0) {
        let k = r.len() - 1;
        let c = r[k] % p;
        if c != 0 {
            let f = c * lead_inv % p;
            for i in 0..=dm {
                let idx = k - dm + i;
                r[idx] = (r[idx] + (p - m[i] * f % p)) % p;
            }
        }
        r.pop();
        poly_trim(&mut r);
    }
    poly_trim(&mut r);
    r
}

fn poly_mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    poly_rem(&prod, m, p)
}

fn poly_pow_mod(a: &[u64], mut k: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut base = poly_rem(a, m, p);
    while k > 0 {
        if k & 1 == 1 {
            acc = poly_mul_mod(&acc, &base, m, p);
        }
        base = poly_mul_mod(&base, &base, m, p);
        k >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !(y.len() == 1 && y[0] == 0) {
        let r = poly_rem(&x, &monicize(&y, p), p);
        x = y;
        y = r;
    }
    x
}

fn monicize(a: &[u64], p: u64) -> Vec<u64> {
    let inv = mod_inv(*a.last().unwrap(), p);
    a.iter().map(|&c| c * inv % p).collect()
}

fn poly_sub_x(a: &[u64], p: u64) -> Vec<u64> {
    // a(x) - x
    let mut v = a.to_vec();
    if v.len() < 2 {
        v.resize(2, 0);
    }
    v[1] = (v[1] + p - 1) % p;
    poly_trim(&mut v);
    v
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    if n == 1 {
        return true;
    }
    // x^{p^k} mod f, incrementally
    let x = vec![0u64, 1];
    let mut t = x.clone();
    let mut powers = Vec::with_capacity(n);
    for _ in 1..=n {
        t = poly_pow_mod(&t, p, f, p);
        powers.push(t.clone());
    }
    // x^{p^n} == x
    if powers[n - 1] != poly_rem(&x, f, p) {
        return false;
    }
    for l in prime_factors(n as u64) {
        let k = n / l as usize;
        let diff = poly_sub_x(&powers[k - 1], p);
        if diff.len() == 1 && diff[0] == 0 {
            return false;
        }
        let g = poly_gcd(f, &diff, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn smallest_irreducible(p: u64, n: u32) -> Vec<u64> {
    let n = n as usize;
    if n == 1 {
        return vec![0, 1]; // x
    }
    let total = p.pow(n as u32);
    for packed in 0..total {
        let mut f = unpack(packed, p, n);
        f.push(1); // monic x^n
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomial of every degree exists")
}

// ---------------------------------------------------------------------------
// Integer helpers.
// ---------------------------------------------------------------------------

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= p {
        if p % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2u64;
    while f * f <= n {
        if n % f == 0 {
            out.push(f);
            while n % f == 0 {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Decompose a prime power q = p^e; errors otherwise.
pub fn prime_power(q: u64) -> Result<(u64, u32)> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let fs = prime_factors(q);
    if fs.len() != 1 {
        return Err(Error::NotPrimePower(q));
    }
    let p = fs[0];
    let mut e = 0u32;
    let mut t = q;
    while t > 1 {
        t /= p;
        e += 1;
    }
    Ok((p, e))
}

fn checked_pow(p: u64, e: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..e {
        acc = acc.checked_mul(p)?;
        if acc > (1 << 40) {
            return None;
        }
    }
    Some(acc)
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // p prime, a != 0 mod p
    let mut acc = 1u64;
    let mut base = a % p;
    let mut k = p - 2;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        k >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f3_generator_is_two() {
        let f3 = FieldCtx::new(3, 1, 1).unwrap();
        assert_eq!(f3.generator(), Fe(2));
        assert_eq!(f3.order(), 3);
    }

    #[test]
    fn not_prime_rejected() {
        assert!(matches!(FieldCtx::new(4, 1, 1), Err(Error::NotPrime(4))));
    }

    #[test]
    fn f25_generator_has_order_24() {
        let f = FieldCtx::new(5, 1, 2).unwrap();
        let g = f.generator();
        // exhaustive order check
        let mut seen = 0;
        let mut x = f.one();
        for k in 1..=24u64 {
            x = f.mul(x, g);
            if x == f.one() {
                seen = k;
                break;
            }
        }
        assert_eq!(seen, 24);
    }

    #[test]
    fn frobenius_basics() {
        let f9 = FieldCtx::new(3, 1, 2).unwrap();
        assert_eq!(f9.frobenius(f9.zero()), f9.zero());
        // subfield elements are fixed
        for c in 0..3 {
            let x = f9.from_int(c);
            assert_eq!(f9.frobenius(x), x);
        }
        let g = f9.generator();
        assert_eq!(f9.frobenius(g), f9.pow(g, 3));
        assert_eq!(f9.frobenius(f9.frobenius(g)), g);
    }

    #[test]
    fn frobenius_is_field_hom_exhaustive() {
        // exhaustive for q^d <= 625
        for (p, e, d) in [(3, 1, 2), (5, 1, 2), (3, 2, 1), (2, 2, 2)] {
            let f = FieldCtx::new(p, e, d).unwrap();
            let elems = f.elements_ordered();
            for &a in &elems {
                for &b in &elems {
                    assert_eq!(
                        f.frobenius(f.add(a, b)),
                        f.add(f.frobenius(a), f.frobenius(b))
                    );
                    assert_eq!(
                        f.frobenius(f.mul(a, b)),
                        f.mul(f.frobenius(a), f.frobenius(b))
                    );
                }
            }
        }
    }

    #[test]
    fn lagrange_and_dlog() {
        let f = FieldCtx::new(7, 1, 2).unwrap();
        let n = f.order() - 1;
        for k in 0..n {
            let x = f.exp_gen(k);
            assert_eq!(f.pow(x, n), f.one());
            assert_eq!(f.dlog(x).unwrap(), k);
        }
        assert!(matches!(f.dlog(f.zero()), Err(Error::ZeroElement)));
        assert_eq!(f.dlog(f.one()).unwrap(), 0);
        assert_eq!(f.dlog(f.generator()).unwrap(), 1);
    }

    #[test]
    fn dlog_in_f5() {
        let f = FieldCtx::new(5, 1, 1).unwrap();
        assert_eq!(f.generator(), Fe(2));
        assert_eq!(f.dlog(Fe(4)).unwrap(), 2);
    }

    #[test]
    fn embedding_is_field_hom() {
        let small = FieldCtx::new(3, 2, 1).unwrap(); // F_9
        let big = FieldCtx::new(3, 2, 2).unwrap(); // F_81
        let emb = Embedding::new(&small, &big).unwrap();
        let elems = small.elements_ordered();
        for &a in &elems {
            for &b in &elems {
                assert_eq!(
                    emb.fwd(small.add(a, b)),
                    big.add(emb.fwd(a), emb.fwd(b))
                );
                assert_eq!(
                    emb.fwd(small.mul(a, b)),
                    big.mul(emb.fwd(a), emb.fwd(b))
                );
            }
            assert_eq!(emb.back(emb.fwd(a)), Some(a));
        }
        // subfield = fixed points of frobenius^e over the base of big
        let mut count = 0;
        for y in 0..big.order() {
            let y = big.elem(y);
            if emb.back(y).is_some() {
                count += 1;
            }
        }
        assert_eq!(count, small.order());
    }

    #[test]
    fn canonical_modulus_f9() {
        // smallest monic irreducible of degree 2 over F_3 is x^2 + 1
        let f9 = FieldCtx::new(3, 1, 2).unwrap();
        assert_eq!(f9.modulus(), &[1, 0, 1]);
    }

    #[test]
    fn prime_power_decomposition() {
        assert_eq!(prime_power(9).unwrap(), (3, 2));
        assert_eq!(prime_power(13).unwrap(), (13, 1));
        assert!(prime_power(12).is_err());
        assert!(prime_power(1).is_err());
    }
}
