//! Integer polynomials, Sturm sequences and exact real-root isolation.
//!
//! Coefficients are stored low to high. All sign evaluations at a rational
//! `p/q` use the homogenised integer `Σ c_k p^k q^{d-k}`, which has the
//! sign of the polynomial value because `q > 0`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    c: Vec<BigInt>,
}

fn sign_of(x: &BigInt) -> Ordering {
    x.cmp(&BigInt::zero())
}

impl IntPoly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        IntPoly { c }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { c: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    fn lc(&self) -> &BigInt {
        self.c.last().expect("nonzero polynomial")
    }

    /// `q^d · P(p/q)` for `q > 0`, `d` the degree.
    pub fn eval_homogeneous(&self, p: &BigInt, q: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        let mut qk = BigInt::one();
        for (k, ck) in self.c.iter().enumerate().rev() {
            if k + 1 == self.c.len() {
                acc = ck.clone();
            } else {
                qk *= q;
                acc = acc * p + ck * &qk;
            }
        }
        acc
    }

    pub fn sign_at(&self, x: &Rational) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        sign_of(&self.eval_homogeneous(x.numer(), x.denom()))
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for ck in self.c.iter().rev() {
            acc = acc * x + Rational::from_integer(ck.clone());
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.c.iter().enumerate().skip(1).map(|(k, ck)| ck * BigInt::from(k)).collect())
    }

    /// Positive gcd of the coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.c.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    /// Divides by the content and makes the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        IntPoly { c: self.c.iter().map(|x| x / &g).collect() }
    }

    /// Divides by the (positive) content, keeping the sign.
    fn reduce(self) -> Self {
        if self.is_zero() {
            return self;
        }
        let g = self.content();
        if g.is_one() {
            return self;
        }
        IntPoly { c: self.c.iter().map(|x| x / &g).collect() }
    }

    /// Splits off the factor `x^j`: returns `(j, P / x^j)`.
    pub fn strip_zero_roots(&self) -> (usize, Self) {
        let j = self.c.iter().take_while(|x| x.is_zero()).count();
        (j, IntPoly { c: self.c[j.min(self.c.len())..].to_vec() })
    }

    /// A positive multiple of the remainder of `self` modulo `b`.
    pub fn pseudo_rem(&self, b: &IntPoly) -> Self {
        let db = b.degree().expect("division by the zero polynomial");
        let lb = b.lc().clone();
        let mult = lb.abs();
        let sb = if lb.is_negative() { -BigInt::one() } else { BigInt::one() };
        let mut r = self.c.clone();
        while r.len() > db && !r.is_empty() {
            let lead = r.last().unwrap().clone();
            if lead.is_zero() {
                r.pop();
                continue;
            }
            let shift = r.len() - 1 - db;
            let q = &sb * &lead;
            for x in r.iter_mut() {
                *x *= &mult;
            }
            for (k, bk) in b.c.iter().enumerate() {
                r[k + shift] -= &q * bk;
            }
            r.pop();
        }
        IntPoly::new(r).reduce()
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, other: &IntPoly) -> Self {
        let (mut a, mut b) = (self.primitive(), other.primitive());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        a
    }

    /// Exact quotient `self / b` when `b` divides `self` over the rationals.
    /// The result is returned primitive.
    pub fn div_exact(&self, b: &IntPoly) -> Self {
        let b = b.primitive();
        let db = b.degree().expect("division by the zero polynomial");
        let a = self.primitive();
        let Some(da) = a.degree() else { return IntPoly::zero() };
        assert!(da >= db, "divisor degree exceeds dividend degree");
        let mut r = a.c.clone();
        let mut q = vec![BigInt::zero(); da - db + 1];
        for shift in (0..=da - db).rev() {
            let lead = &r[shift + db];
            let (qk, rem) = lead.div_rem(b.lc());
            assert!(rem.is_zero(), "inexact polynomial division");
            for (k, bk) in b.c.iter().enumerate() {
                r[k + shift] -= &qk * bk;
            }
            q[shift] = qk;
        }
        assert!(r.iter().all(|x| x.is_zero()), "inexact polynomial division");
        IntPoly::new(q).primitive()
    }

    pub fn divides(&self, a: &IntPoly) -> bool {
        a.pseudo_rem(self).is_zero()
    }

    /// Squarefree part `P / gcd(P, P')`, primitive.
    pub fn squarefree(&self) -> Self {
        match self.degree() {
            None | Some(0) => self.primitive(),
            Some(_) => {
                let g = self.gcd(&self.derivative());
                if g.degree() == Some(0) {
                    self.primitive()
                } else {
                    self.div_exact(&g)
                }
            }
        }
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut c = vec![BigInt::zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in other.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        IntPoly::new(c)
    }

    /// Removes the linear factor `den·x - num` of an exact rational root.
    fn deflate(&self, r: &Rational) -> Self {
        let lin = IntPoly::new(vec![-r.numer().clone(), r.denom().clone()]);
        self.div_exact(&lin)
    }
}

/// Sturm sequence of a squarefree polynomial.
#[derive(Debug, Clone)]
pub struct Sturm {
    chain: Vec<IntPoly>,
}

impl Sturm {
    pub fn new(p: &IntPoly) -> Self {
        let mut chain = vec![p.clone()];
        let d = p.derivative().reduce();
        if !d.is_zero() {
            chain.push(d);
        }
        while chain.len() >= 2 {
            let k = chain.len();
            let r = chain[k - 2].pseudo_rem(&chain[k - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(IntPoly { c: r.c.into_iter().map(|x| -x).collect() });
        }
        Sturm { chain }
    }

    pub fn variations(&self, x: &Rational) -> usize {
        let mut last = Ordering::Equal;
        let mut v = 0;
        for p in &self.chain {
            let s = p.sign_at(x);
            if s == Ordering::Equal {
                continue;
            }
            if last != Ordering::Equal && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    /// Number of distinct roots in `(a, b)`; `a` and `b` must not be roots.
    pub fn count(&self, a: &Rational, b: &Rational) -> usize {
        self.variations(a) - self.variations(b)
    }
}

/// A real root held either exactly or by an isolating interval.
#[derive(Debug, Clone, PartialEq)]
pub enum RealRoot {
    Exact(Rational),
    /// Exactly one root of the squarefree `poly` lies in the open interval
    /// `(lo, hi)`; `poly` is nonzero at both ends.
    Isolated { poly: IntPoly, lo: Rational, hi: Rational },
}

impl RealRoot {
    pub fn lo(&self) -> &Rational {
        match self {
            RealRoot::Exact(r) => r,
            RealRoot::Isolated { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> &Rational {
        match self {
            RealRoot::Exact(r) => r,
            RealRoot::Isolated { hi, .. } => hi,
        }
    }

    pub fn width(&self) -> Rational {
        self.hi() - self.lo()
    }

    pub fn approx(&self) -> f64 {
        crate::rational::to_f64(&((self.lo() + self.hi()) / BigInt::from(2)))
    }

    /// Halves an isolating interval, turning it exact if the midpoint is the root.
    pub fn bisect(&mut self) {
        if let RealRoot::Isolated { poly, lo, hi } = self {
            let mid = (&*lo + &*hi) / BigInt::from(2);
            let sm = poly.sign_at(&mid);
            if sm == Ordering::Equal {
                *self = RealRoot::Exact(mid);
            } else if sm == poly.sign_at(lo) {
                *lo = mid;
            } else {
                *hi = mid;
            }
        }
    }

    /// Refines to width at most `eps`, then tries the simplest rational
    /// inside the interval as an exact root.
    pub fn refine(&mut self, eps: &Rational) {
        while let RealRoot::Isolated { .. } = self {
            if self.width() <= *eps {
                break;
            }
            self.bisect();
        }
        if let RealRoot::Isolated { poly, lo, hi } = self {
            let cand = simplest_between(lo, hi);
            if poly.sign_at(&cand) == Ordering::Equal {
                *self = RealRoot::Exact(cand);
            }
        }
    }

    /// Whether the root is equal to `x`, decided exactly.
    pub fn equals(&self, x: &Rational) -> bool {
        match self {
            RealRoot::Exact(r) => r == x,
            RealRoot::Isolated { poly, lo, hi } => lo < x && x < hi && poly.sign_at(x) == Ordering::Equal,
        }
    }
}

/// Isolates the distinct real roots of a squarefree `p` in the open interval
/// `(a, b)`, in increasing order. `p` must be nonzero at `a` and `b`.
pub fn isolate_roots(p: &IntPoly, a: &Rational, b: &Rational) -> Vec<RealRoot> {
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) == 0 {
        return out;
    }
    let sturm = Sturm::new(p);
    let count = sturm.count(a, b);
    isolate_rec(p, &sturm, a.clone(), b.clone(), count, &mut out);
    out
}

fn isolate_rec(p: &IntPoly, sturm: &Sturm, lo: Rational, hi: Rational, count: usize, out: &mut Vec<RealRoot>) {
    match count {
        0 => {}
        1 => out.push(RealRoot::Isolated { poly: p.clone(), lo, hi }),
        _ => {
            let mid = (&lo + &hi) / BigInt::from(2);
            if p.sign_at(&mid) == Ordering::Equal {
                let q = p.deflate(&mid);
                let sq = Sturm::new(&q);
                let left = sq.count(&lo, &mid);
                isolate_rec(&q, &sq, lo, mid.clone(), left, out);
                out.push(RealRoot::Exact(mid.clone()));
                isolate_rec(&q, &sq, mid, hi, count - 1 - left, out);
            } else {
                let left = sturm.count(&lo, &mid);
                isolate_rec(p, sturm, lo, mid.clone(), left, out);
                isolate_rec(p, sturm, mid, hi, count - left, out);
            }
        }
    }
}

/// The rational with the smallest denominator in the open interval `(a, b)`.
pub fn simplest_between(a: &Rational, b: &Rational) -> Rational {
    assert!(a < b, "empty interval");
    if a.is_negative() {
        if b.is_positive() {
            return Rational::zero();
        }
        return -simplest_between(&-b, &-a);
    }
    let fl = a.floor();
    let next = &fl + Rational::one();
    if next < *b {
        return next;
    }
    if fl == *a {
        // x = fl + 1/y with y > 1/(b - fl)
        let y = (Rational::one() / (b - &fl)).floor() + Rational::one();
        return fl + Rational::one() / y;
    }
    let inner = simplest_between(&(Rational::one() / (b - &fl)), &(Rational::one() / (a - &fl)));
    fl + Rational::one() / inner
}

/// Whether two roots are the same real number, refining both as needed.
pub fn same_root(x: &mut RealRoot, y: &mut RealRoot) -> bool {
    loop {
        match (&*x, &*y) {
            (RealRoot::Exact(a), RealRoot::Exact(b)) => return a == b,
            (RealRoot::Exact(a), other) | (other, RealRoot::Exact(a)) => return other.equals(a),
            (RealRoot::Isolated { poly: p, lo: l1, hi: h1 }, RealRoot::Isolated { poly: q, lo: l2, hi: h2 }) => {
                if h1 <= l2 || h2 <= l1 {
                    return false;
                }
                let g = p.gcd(q);
                if g.degree().unwrap_or(0) == 0 {
                    return false;
                }
                let lo = l1.max(l2).clone();
                let hi = h1.min(h2).clone();
                // lo and hi are endpoints of intervals of p or q, so they are not roots of g.
                if Sturm::new(&g).count(&lo, &hi) == 1 {
                    let p_has = Sturm::new(p).count(&lo, &hi) == 1;
                    let q_has = Sturm::new(q).count(&lo, &hi) == 1;
                    if p_has && q_has {
                        return true;
                    }
                }
                x.bisect();
                y.bisect();
            }
        }
    }
}
