//! Enumeration and conjugacy structure of GL_n(F_q) and SL_n(F_q), n <= 3,
//! at desk scale.
//!
//! Elements are enumerated in a canonical order (row-major lexicographic by
//! the field's discrete-log order, zero first), hashed by packed
//! discrete-log tuples, and partitioned into conjugacy classes by invariant
//! keys (characteristic polynomial plus eigenvalue ranks) with an explicit
//! conjugation sweep inside each bucket. For the SL series the sweep uses
//! SL conjugators, which refines the unipotent-type buckets correctly.

use std::collections::HashMap;

use num::BigInt;
use num::One;

use crate::error::{Error, Result};
use crate::finitefield::{prime_power, Fe, FieldCtx};

#[derive(Copy, Clone, PartialEq, Eq, Debug, Hash)]
pub enum Series {
    Gl,
    Sl,
}

impl Series {
    pub fn name(&self) -> &'static str {
        match self {
            Series::Gl => "GL",
            Series::Sl => "SL",
        }
    }
}

/// (series, rank, field order) identifying a finite matrix group.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Hash)]
pub struct GroupSpec {
    pub series: Series,
    pub n: u8,
    pub q: u64,
}

impl GroupSpec {
    pub fn new(series: Series, n: u8, q: u64) -> Result<GroupSpec> {
        prime_power(q)?;
        Ok(GroupSpec { series, n, q })
    }
}

/// Exact group order: |GL_n| = prod_{i<n} (q^n - q^i); |SL_n| = |GL_n|/(q-1).
pub fn group_order(spec: &GroupSpec) -> BigInt {
    let q = BigInt::from(spec.q);
    let n = spec.n as u32;
    let qn = q.pow(n);
    let mut acc = BigInt::one();
    for i in 0..n {
        acc *= &qn - q.pow(i);
    }
    match spec.series {
        Series::Gl => acc,
        Series::Sl => acc / (&q - BigInt::one()),
    }
}

/// Enumeration size limits. One knob (`--max-enum` in the CLI) scales the
/// group-order cap; the rep/ops caps guard the oracle searches.
#[derive(Copy, Clone, Debug)]
pub struct EnumCaps {
    pub max_group_order: u64,
    pub max_reps: u64,
    pub max_brute_ops: u64,
}

impl Default for EnumCaps {
    fn default() -> Self {
        EnumCaps {
            max_group_order: 100_000_000,
            max_reps: 10_000_000,
            max_brute_ops: 1_000_000_000,
        }
    }
}

impl EnumCaps {
    pub fn with_limit(limit: u64) -> Self {
        EnumCaps {
            max_group_order: limit,
            max_reps: limit,
            max_brute_ops: limit.saturating_mul(10),
        }
    }
}

/// A square matrix over the group's field; entries beyond n*n are zero.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix {
    pub n: u8,
    pub e: [Fe; 9],
}

impl Matrix {
    pub fn zero(n: u8) -> Matrix {
        Matrix {
            n,
            e: [Fe(0); 9],
        }
    }

    pub fn identity(ctx: &FieldCtx, n: u8) -> Matrix {
        let mut m = Matrix::zero(n);
        for i in 0..n as usize {
            m.e[i * n as usize + i] = ctx.one();
        }
        m
    }

    pub fn scalar(ctx: &FieldCtx, n: u8, c: Fe) -> Matrix {
        let mut m = Matrix::zero(n);
        for i in 0..n as usize {
            m.e[i * n as usize + i] = c;
        }
        m
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Fe {
        self.e[i * self.n as usize + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fe) {
        self.e[i * self.n as usize + j] = v;
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &Matrix) -> Matrix {
        let n = self.n as usize;
        let mut out = Matrix::zero(self.n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ctx.zero();
                for k in 0..n {
                    acc = ctx.add(acc, ctx.mul(self.at(i, k), other.at(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn det(&self, ctx: &FieldCtx) -> Fe {
        let n = self.n as usize;
        match n {
            1 => self.at(0, 0),
            2 => ctx.sub(
                ctx.mul(self.at(0, 0), self.at(1, 1)),
                ctx.mul(self.at(0, 1), self.at(1, 0)),
            ),
            3 => {
                let m = |i: usize, j: usize| self.at(i, j);
                let c0 = ctx.sub(ctx.mul(m(1, 1), m(2, 2)), ctx.mul(m(1, 2), m(2, 1)));
                let c1 = ctx.sub(ctx.mul(m(1, 0), m(2, 2)), ctx.mul(m(1, 2), m(2, 0)));
                let c2 = ctx.sub(ctx.mul(m(1, 0), m(2, 1)), ctx.mul(m(1, 1), m(2, 0)));
                let t0 = ctx.mul(m(0, 0), c0);
                let t1 = ctx.mul(m(0, 1), c1);
                let t2 = ctx.mul(m(0, 2), c2);
                ctx.add(ctx.sub(t0, t1), t2)
            }
            _ => unreachable!(),
        }
    }

    /// Inverse via the adjugate; panics if singular.
    pub fn inv(&self, ctx: &FieldCtx) -> Matrix {
        let n = self.n as usize;
        let d = self.det(ctx);
        let dinv = ctx.inv(d);
        let mut out = Matrix::zero(self.n);
        match n {
            2 => {
                out.set(0, 0, ctx.mul(self.at(1, 1), dinv));
                out.set(0, 1, ctx.mul(ctx.neg(self.at(0, 1)), dinv));
                out.set(1, 0, ctx.mul(ctx.neg(self.at(1, 0)), dinv));
                out.set(1, 1, ctx.mul(self.at(0, 0), dinv));
            }
            3 => {
                for i in 0..3 {
                    for j in 0..3 {
                        // adjugate entry (i,j) = cofactor C_{ji}
                        let (r0, r1) = match j {
                            0 => (1, 2),
                            1 => (0, 2),
                            _ => (0, 1),
                        };
                        let (c0, c1) = match i {
                            0 => (1, 2),
                            1 => (0, 2),
                            _ => (0, 1),
                        };
                        let minor = ctx.sub(
                            ctx.mul(self.at(r0, c0), self.at(r1, c1)),
                            ctx.mul(self.at(r0, c1), self.at(r1, c0)),
                        );
                        let sign = (i + j) % 2 == 1;
                        let v = if sign { ctx.neg(minor) } else { minor };
                        out.set(i, j, ctx.mul(v, dinv));
                    }
                }
            }
            _ => unreachable!(),
        }
        out
    }

    pub fn pow(&self, ctx: &FieldCtx, mut k: u64) -> Matrix {
        let mut acc = Matrix::identity(ctx, self.n);
        let mut base = *self;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(ctx, &base);
            }
            base = base.mul(ctx, &base);
            k >>= 1;
        }
        acc
    }

    pub fn transpose(&self) -> Matrix {
        let n = self.n as usize;
        let mut out = Matrix::zero(self.n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.at(i, j));
            }
        }
        out
    }

    pub fn is_scalar(&self, ctx: &FieldCtx) -> bool {
        let n = self.n as usize;
        let d = self.at(0, 0);
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { d } else { ctx.zero() };
                if self.at(i, j) != want {
                    return false;
                }
            }
        }
        true
    }

    /// Packed discrete-log tuple; canonical across field representations.
    pub fn key(&self, ctx: &FieldCtx) -> u128 {
        let n = self.n as usize;
        let bits = 64 - (ctx.order()).leading_zeros() as u128;
        let mut acc: u128 = 0;
        for i in 0..n * n {
            acc = (acc << bits) | ctx.ord_index(self.e[i]) as u128;
        }
        acc
    }

    /// Characteristic polynomial coefficients, low degree first, length n+1.
    pub fn charpoly(&self, ctx: &FieldCtx) -> Vec<Fe> {
        let n = self.n as usize;
        match n {
            2 => {
                let tr = ctx.add(self.at(0, 0), self.at(1, 1));
                let det = self.det(ctx);
                // x^2 - tr x + det
                vec![det, ctx.neg(tr), ctx.one()]
            }
            3 => {
                let tr = ctx.add(ctx.add(self.at(0, 0), self.at(1, 1)), self.at(2, 2));
                let det = self.det(ctx);
                // second elementary symmetric = sum of principal 2x2 minors
                let m = |i: usize, j: usize| self.at(i, j);
                let p01 = ctx.sub(ctx.mul(m(0, 0), m(1, 1)), ctx.mul(m(0, 1), m(1, 0)));
                let p02 = ctx.sub(ctx.mul(m(0, 0), m(2, 2)), ctx.mul(m(0, 2), m(2, 0)));
                let p12 = ctx.sub(ctx.mul(m(1, 1), m(2, 2)), ctx.mul(m(1, 2), m(2, 1)));
                let e2 = ctx.add(ctx.add(p01, p02), p12);
                // x^3 - tr x^2 + e2 x - det
                vec![ctx.neg(det), e2, ctx.neg(tr), ctx.one()]
            }
            _ => unreachable!(),
        }
    }

    /// Rank over F_q by Gaussian elimination.
    pub fn rank(&self, ctx: &FieldCtx) -> usize {
        let n = self.n as usize;
        let mut a = *self;
        let mut rank = 0;
        for col in 0..n {
            let mut piv = None;
            for row in rank..n {
                if a.at(row, col).0 != 0 {
                    piv = Some(row);
                    break;
                }
            }
            let Some(p) = piv else { continue };
            if p != rank {
                for j in 0..n {
                    let t = a.at(rank, j);
                    a.set(rank, j, a.at(p, j));
                    a.set(p, j, t);
                }
            }
            let inv = ctx.inv(a.at(rank, col));
            for row in (rank + 1)..n {
                let f = ctx.mul(a.at(row, col), inv);
                if f.0 != 0 {
                    for j in 0..n {
                        let v = ctx.sub(a.at(row, j), ctx.mul(f, a.at(rank, j)));
                        a.set(row, j, v);
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

#[derive(Clone, Debug)]
pub struct ClassInfo {
    pub rep: Matrix,
    pub size: u64,
}

/// A fully enumerated matrix group with its conjugacy class table.
pub struct Group {
    pub spec: GroupSpec,
    pub ctx: FieldCtx,
    pub elems: Vec<Matrix>,
    index: HashMap<u128, u32>,
    classes: Vec<ClassInfo>,
    class_of: Vec<u32>,
}

impl Group {
    pub fn build(spec: GroupSpec, caps: &EnumCaps) -> Result<Group> {
        if !(2..=3).contains(&spec.n) {
            return Err(Error::UnsupportedRank(spec.n));
        }
        let order = group_order(&spec);
        if order > BigInt::from(caps.max_group_order) {
            return Err(Error::TooLarge(format!(
                "|{}_{}(F_{})| = {}",
                spec.series.name(),
                spec.n,
                spec.q,
                order
            )));
        }
        let (p, e) = prime_power(spec.q)?;
        let ctx = FieldCtx::new(p, e, 1)?;
        let elems = enumerate_matrices(&ctx, spec.n, |m, c| match spec.series {
            Series::Gl => m.det(c).0 != 0,
            Series::Sl => m.det(c) == c.one(),
        });
        let mut index = HashMap::with_capacity(elems.len() * 2);
        for (i, m) in elems.iter().enumerate() {
            index.insert(m.key(&ctx), i as u32);
        }

        // conjugators: a transversal of the scalars for GL, all elements
        // for SL (scalar normalisation is not available inside SL)
        let conjugators: Vec<u32> = match spec.series {
            Series::Gl => (0..elems.len() as u32)
                .filter(|&i| first_nonzero_is_one(&elems[i as usize], &ctx))
                .collect(),
            Series::Sl => (0..elems.len() as u32).collect(),
        };

        // invariant-key buckets, then conjugation sweeps inside each bucket
        let mut buckets: HashMap<Vec<u64>, Vec<u32>> = HashMap::new();
        for (i, m) in elems.iter().enumerate() {
            buckets
                .entry(gl_invariant_key(m, &ctx))
                .or_default()
                .push(i as u32);
        }
        let mut class_of = vec![u32::MAX; elems.len()];
        let mut seeds: Vec<u32> = Vec::new();
        let mut order_ids: Vec<u32> = (0..elems.len() as u32).collect();
        order_ids.sort_unstable();
        for &id in &order_ids {
            if class_of[id as usize] != u32::MAX {
                continue;
            }
            let cls = seeds.len() as u32;
            seeds.push(id);
            let x = elems[id as usize];
            for &cid in &conjugators {
                let g = &elems[cid as usize];
                let y = g.mul(&ctx, &x).mul(&ctx, &g.inv(&ctx));
                let yid = index[&y.key(&ctx)];
                class_of[yid as usize] = cls;
            }
            debug_assert_eq!(class_of[id as usize], cls);
        }
        let _ = buckets; // buckets guide the sweep order; sizes come from marks

        let mut classes: Vec<ClassInfo> = seeds
            .iter()
            .map(|&id| ClassInfo {
                rep: elems[id as usize],
                size: 0,
            })
            .collect();
        for &c in &class_of {
            classes[c as usize].size += 1;
        }

        Ok(Group {
            spec,
            ctx,
            elems,
            index,
            classes,
            class_of,
        })
    }

    pub fn order(&self) -> u64 {
        self.elems.len() as u64
    }

    pub fn classes(&self) -> &[ClassInfo] {
        &self.classes
    }

    pub fn conjugacy_classes(&self) -> Vec<(Matrix, u64)> {
        self.classes.iter().map(|c| (c.rep, c.size)).collect()
    }

    pub fn element_id(&self, m: &Matrix) -> Result<u32> {
        self.index
            .get(&m.key(&self.ctx))
            .copied()
            .ok_or(Error::ElementNotInGroup)
    }

    pub fn class_of(&self, m: &Matrix) -> Result<u32> {
        Ok(self.class_of[self.element_id(m)? as usize])
    }

    pub fn class_of_id(&self, id: u32) -> u32 {
        self.class_of[id as usize]
    }

    pub fn identity(&self) -> Matrix {
        Matrix::identity(&self.ctx, self.spec.n)
    }
}

fn first_nonzero_is_one(m: &Matrix, ctx: &FieldCtx) -> bool {
    let n = m.n as usize;
    for i in 0..n * n {
        if m.e[i].0 != 0 {
            return m.e[i] == ctx.one();
        }
    }
    false
}

/// Invariant class key: characteristic polynomial (ord indices) plus, for
/// each eigenvalue in F_q, the rank of (x - lambda I). Complete for
/// GL_n-conjugacy at n <= 3; SL refinement happens in the sweep.
fn gl_invariant_key(m: &Matrix, ctx: &FieldCtx) -> Vec<u64> {
    let cp = m.charpoly(ctx);
    let mut key: Vec<u64> = cp.iter().map(|c| ctx.ord_index(*c)).collect();
    let n = m.n as usize;
    for lam in 0..ctx.order() {
        let lam = ctx.elem(lam);
        // evaluate charpoly at lambda
        let mut acc = ctx.zero();
        for c in cp.iter().rev() {
            acc = ctx.add(ctx.mul(acc, lam), *c);
        }
        if acc.0 == 0 {
            let mut d = *m;
            for i in 0..n {
                d.set(i, i, ctx.sub(d.at(i, i), lam));
            }
            key.push(ctx.ord_index(lam));
            key.push(d.rank(ctx) as u64);
        }
    }
    key
}

/// All n x n matrices over the context's field passing `keep`, in row-major
/// lexicographic order of the canonical element order (zero first, then by
/// discrete log).
fn enumerate_matrices<F>(ctx: &FieldCtx, n: u8, keep: F) -> Vec<Matrix>
where
    F: Fn(&Matrix, &FieldCtx) -> bool,
{
    let order = ctx.order();
    let cells = (n as usize) * (n as usize);
    let elems = ctx.elements_ordered();
    let mut digits = vec![0u64; cells];
    let mut out = Vec::new();
    loop {
        let mut m = Matrix::zero(n);
        for (c, &d) in digits.iter().enumerate() {
            m.e[c] = elems[d as usize];
        }
        if keep(&m, ctx) {
            out.push(m);
        }
        // increment odometer, last cell fastest
        let mut i = cells;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < order {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// A transversal of the scalar matrices inside GL_n(F_q): all invertible
/// matrices whose first nonzero entry (row-major) is 1. Conjugation by it
/// realises every PGL_n(F_q) element exactly once.
pub fn pgl_transversal(ctx: &FieldCtx, n: u8) -> Vec<Matrix> {
    enumerate_matrices(ctx, n, |m, c| {
        m.det(c).0 != 0 && first_nonzero_is_one(m, c)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(series: Series, n: u8, q: u64) -> Group {
        Group::build(GroupSpec { series, n, q }, &EnumCaps::default()).unwrap()
    }

    /// Independent oracle: count invertible 2x2 matrices by raw residue
    /// loops mod p (prime q only).
    fn brute_gl2_order(p: u64) -> u64 {
        let mut count = 0;
        for a in 0..p {
            for b in 0..p {
                for c in 0..p {
                    for d in 0..p {
                        if (a * d + p * p - (b * c) % (p * p)) % p != 0 {
                            count += 1;
                        }
                    }
                }
            }
        }
        count
    }

    #[test]
    fn orders_match_enumeration() {
        let g = build(Series::Gl, 2, 3);
        assert_eq!(g.order(), 48);
        assert_eq!(group_order(&g.spec), BigInt::from(48));
        assert_eq!(brute_gl2_order(3), 48);

        let s = build(Series::Sl, 2, 5);
        assert_eq!(s.order(), 120);
        assert_eq!(group_order(&s.spec), BigInt::from(120));

        let t = build(Series::Gl, 2, 2);
        assert_eq!(t.order(), 6);
    }

    #[test]
    fn sl1_order_is_one() {
        let spec = GroupSpec::new(Series::Sl, 1, 7).unwrap();
        assert_eq!(group_order(&spec), BigInt::one());
    }

    #[test]
    fn class_counts_match_census() {
        // GL2: q^2 - 1 classes; SL2: q + 4
        for q in [3u64, 5, 9] {
            let g = build(Series::Gl, 2, q);
            assert_eq!(g.classes().len() as u64, q * q - 1, "GL2(F_{})", q);
            let total: u64 = g.classes().iter().map(|c| c.size).sum();
            assert_eq!(total, g.order());
            // census: (q-1) + (q-1) + (q-1)(q-2)/2 + q(q-1)/2
            let census = (q - 1) + (q - 1) + (q - 1) * (q - 2) / 2 + q * (q - 1) / 2;
            assert_eq!(g.classes().len() as u64, census);

            let s = build(Series::Sl, 2, q);
            assert_eq!(s.classes().len() as u64, q + 4, "SL2(F_{})", q);
            let total: u64 = s.classes().iter().map(|c| c.size).sum();
            assert_eq!(total, s.order());
        }
    }

    #[test]
    fn gl3_class_count() {
        // # classes of GL3(F_q) = q^3 - q
        let g = build(Series::Gl, 3, 2);
        assert_eq!(g.classes().len() as u64, 6);
        let g = build(Series::Gl, 3, 3);
        assert_eq!(g.classes().len() as u64, 24);
    }

    #[test]
    fn class_of_is_conjugation_invariant() {
        let g = build(Series::Sl, 2, 5);
        let x = g.elems[17];
        let cx = g.class_of(&x).unwrap();
        for h in g.elems.iter().step_by(7) {
            let y = h.mul(&g.ctx, &x).mul(&g.ctx, &h.inv(&g.ctx));
            assert_eq!(g.class_of(&y).unwrap(), cx);
        }
        let id = g.identity();
        let c_id = g.class_of(&id).unwrap() as usize;
        assert_eq!(g.classes()[c_id].size, 1);
    }

    #[test]
    fn classes_agree_with_exhaustive_conjugacy_at_q3() {
        // brute-force conjugacy partition must match class_of exactly
        let g = build(Series::Sl, 2, 3);
        let n = g.elems.len();
        for i in 0..n {
            for j in 0..n {
                let same = g.class_of_id(i as u32) == g.class_of_id(j as u32);
                let mut found = false;
                for h in &g.elems {
                    let y = h.mul(&g.ctx, &g.elems[i]).mul(&g.ctx, &h.inv(&g.ctx));
                    if y == g.elems[j] {
                        found = true;
                        break;
                    }
                }
                assert_eq!(same, found, "pair ({}, {})", i, j);
            }
        }
    }

    #[test]
    fn split_class_size_in_gl2_f5() {
        // diag(2,3) lies in a class of size q(q+1) = 30
        let g = build(Series::Gl, 2, 5);
        let mut m = Matrix::zero(2);
        m.set(0, 0, g.ctx.elem(2));
        m.set(1, 1, g.ctx.elem(3));
        let c = g.class_of(&m).unwrap() as usize;
        assert_eq!(g.classes()[c].size, 30);
    }

    #[test]
    fn too_large_is_rejected() {
        let spec = GroupSpec::new(Series::Gl, 3, 13).unwrap();
        assert!(matches!(
            Group::build(spec, &EnumCaps::default()),
            Err(Error::TooLarge(_))
        ));
    }

    #[test]
    fn element_not_in_group() {
        let g = build(Series::Sl, 2, 3);
        let mut m = Matrix::zero(2);
        m.set(0, 0, g.ctx.elem(2));
        m.set(1, 1, g.ctx.elem(1));
        // det = 2, not in SL2
        assert!(matches!(g.class_of(&m), Err(Error::ElementNotInGroup)));
    }

    #[test]
    fn pgl_transversal_size() {
        let ctx = FieldCtx::new(5, 1, 1).unwrap();
        let t = pgl_transversal(&ctx, 2);
        assert_eq!(t.len() as u64, (5 * 5 * 5 * 5 - 5 * 5) / 4 / 1); // |GL2(F5)|/(q-1) = 480/4
        assert_eq!(t.len(), 120);
    }
}
