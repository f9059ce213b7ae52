//! `SL(2, Z)`, its generator words, the modular representation `D`, and
//! congruence subgroups.
//!
//! Matrices are written `[[a, b], [e, d]]`; the lower-left entry is called
//! `e` throughout.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclo::Rational;
use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::modular_data::{t_exponents, ModularData};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SL2ZMat {
    pub a: BigInt,
    pub b: BigInt,
    pub e: BigInt,
    pub d: BigInt,
}

impl SL2ZMat {
    /// `None` unless the determinant is 1.
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        e: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Option<Self> {
        let m = SL2ZMat {
            a: a.into(),
            b: b.into(),
            e: e.into(),
            d: d.into(),
        };
        m.det().is_one().then_some(m)
    }

    fn raw(a: BigInt, b: BigInt, e: BigInt, d: BigInt) -> Self {
        let m = SL2ZMat { a, b, e, d };
        debug_assert!(m.det().is_one());
        m
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.e
    }

    pub fn identity() -> Self {
        Self::raw(1.into(), 0.into(), 0.into(), 1.into())
    }

    pub fn minus_identity() -> Self {
        Self::raw((-1).into(), 0.into(), 0.into(), (-1).into())
    }

    pub fn s() -> Self {
        Self::raw(0.into(), (-1).into(), 1.into(), 0.into())
    }

    pub fn t_pow(k: impl Into<BigInt>) -> Self {
        Self::raw(1.into(), k.into(), 0.into(), 1.into())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::raw(
            &self.a * &o.a + &self.b * &o.e,
            &self.a * &o.b + &self.b * &o.d,
            &self.e * &o.a + &self.d * &o.e,
            &self.e * &o.b + &self.d * &o.d,
        )
    }

    pub fn inverse(&self) -> Self {
        Self::raw(self.d.clone(), -&self.b, -&self.e, self.a.clone())
    }

    pub fn neg(&self) -> Self {
        Self::raw(-&self.a, -&self.b, -&self.e, -&self.d)
    }

    pub fn max_abs_entry(&self) -> BigInt {
        [&self.a, &self.b, &self.e, &self.d]
            .into_iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_default()
    }
}

impl fmt::Display for SL2ZMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}, {}]", self.a, self.b, self.e, self.d)
    }
}

/// Wire form `[a, b, e, d]`.
impl Serialize for SL2ZMat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [&self.a, &self.b, &self.e, &self.d]
            .map(|x| x.to_string())
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SL2ZMat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = <[String; 4]>::deserialize(d)?;
        let p = |s: &str| s.parse::<BigInt>().map_err(serde::de::Error::custom);
        SL2ZMat::new(p(&v[0])?, p(&v[1])?, p(&v[2])?, p(&v[3])?)
            .ok_or_else(|| serde::de::Error::custom("determinant is not 1"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Token {
    S,
    T(BigInt),
}

/// `sign · w₁ w₂ … w_k` with each `w_i` either `s` or a power of `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenWord {
    pub tokens: Vec<Token>,
    /// `true` when the word carries the central factor `−I`.
    pub negative: bool,
}

impl GenWord {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Multiplies the word out over the integers.
    pub fn evaluate(&self) -> SL2ZMat {
        let mut m = if self.negative {
            SL2ZMat::minus_identity()
        } else {
            SL2ZMat::identity()
        };
        for tok in &self.tokens {
            m = match tok {
                Token::S => m.mul(&SL2ZMat::s()),
                Token::T(k) => m.mul(&SL2ZMat::t_pow(k.clone())),
            };
        }
        m
    }
}

impl fmt::Display for GenWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self
            .tokens
            .iter()
            .map(|t| match t {
                Token::S => "s".to_string(),
                Token::T(k) if k.is_one() => "t".to_string(),
                Token::T(k) => format!("t^{k}"),
            })
            .collect();
        let sign = if self.negative { "-" } else { "" };
        if body.is_empty() {
            write!(f, "{sign}1")
        } else {
            write!(f, "{sign}{}", body.join(" "))
        }
    }
}

/// `round(a/e)` with ties toward negative infinity.
fn nearest_quotient(a: &BigInt, e: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (&two * a + e.abs()).div_floor(&(&two * e.abs())) * e.signum()
}

/// Euclidean reduction of the bottom row by `m ↦ t^{−q}m` and `m ↦ s·m`
/// until `±t^k` remains.
pub fn decompose(m: &SL2ZMat) -> GenWord {
    let mut cur = m.clone();
    let mut tokens = Vec::new();
    let mut s_count = 0usize;
    while !cur.e.is_zero() {
        let q = nearest_quotient(&cur.a, &cur.e);
        if !q.is_zero() {
            cur = SL2ZMat::t_pow(-&q).mul(&cur);
            tokens.push(Token::T(q));
        }
        cur = SL2ZMat::s().mul(&cur);
        tokens.push(Token::S);
        s_count += 1;
    }
    // cur = a·t^{ab} with a = ±1
    let k = &cur.a * &cur.b;
    if !k.is_zero() {
        tokens.push(Token::T(k));
    }
    // each recorded s stands for s⁻¹ = −s
    let negative = (s_count % 2 == 1) != cur.a.is_negative();
    GenWord { tokens, negative }
}

/// `D(m)`: the product of `S` and `T` powers along `decompose(m)`, with `Ĉ`
/// for the sign.
pub fn rep_evaluate(md: &ModularData, m: &SL2ZMat) -> CMatrix {
    rep_evaluate_word(md, &decompose(m))
}

pub fn rep_evaluate_word(md: &ModularData, w: &GenWord) -> CMatrix {
    let n = md.t_order();
    let mut acc = if w.negative {
        md.conj_matrix()
    } else {
        CMatrix::identity(md.rank())
    };
    for tok in &w.tokens {
        acc = match tok {
            Token::S => acc.mul(md.s()),
            Token::T(k) => {
                let k = k.mod_floor(&BigInt::from(n));
                acc.phase_cols(&t_exponents(md, &Rational::from_integer(k)))
            }
        };
    }
    acc
}

/// Linear congruential generator with Knuth's MMIX constants.
#[derive(Clone, Debug)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub const MULTIPLIER: u64 = 6364136223846793005;
    pub const INCREMENT: u64 = 1442695040888963407;

    pub fn new(seed: u64) -> Self {
        Lcg { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(Self::MULTIPLIER)
            .wrapping_add(Self::INCREMENT);
        self.state
    }

    /// Uniform-ish value in `0..n` from the high 32 bits.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        ((self.next_u64() >> 32) * n) >> 32
    }

    /// Value in `lo..=hi`.
    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi);
        let span = (hi - lo) as u64 + 1;
        let r = if span <= u32::MAX as u64 {
            self.below(span)
        } else {
            self.next_u64() % span
        };
        lo + r as i64
    }
}

/// `(g, x, y)` with `a·x + b·y = g = gcd(a, b) ≥ 0`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Completes a coprime first column `(a, e)` to a matrix of determinant 1.
fn complete_column(a: BigInt, e: BigInt) -> SL2ZMat {
    let (g, x, y) = ext_gcd(&a, &e);
    debug_assert!(g.is_one());
    // a·x + e·y = 1, so d = x, b = −y
    SL2ZMat::raw(a, -y, e, x)
}

/// A pseudo-random element of `Γ(N)`.
pub fn sample_gamma(n: u64, rng: &mut Lcg) -> SL2ZMat {
    assert!(n >= 1);
    let nb = BigInt::from(n);
    let spread = (1_000 / n as i64).max(3);
    loop {
        let a = BigInt::one() + &nb * rng.range(-spread, spread);
        let e = &nb * rng.range(-spread, spread);
        if !a.gcd(&e).is_one() {
            continue;
        }
        let m0 = complete_column(a, e);
        // b0 + t·a ≡ 0 mod N, and a ≡ 1
        let t = (-&m0.b).mod_floor(&nb) + &nb * rng.range(-2, 2);
        let b = &m0.b + &t * &m0.a;
        let d = &m0.d + &t * &m0.e;
        let m = SL2ZMat::raw(m0.a, b, m0.e, d);
        debug_assert!(in_gamma(n, &m));
        return m;
    }
}

/// A pseudo-random element of `SL(2, Z)` with entries of size about `bound²`.
pub fn sample_sl2z(bound: i64, rng: &mut Lcg) -> SL2ZMat {
    loop {
        let a = BigInt::from(rng.range(-bound, bound));
        let e = BigInt::from(rng.range(-bound, bound));
        if !a.gcd(&e).is_one() {
            continue;
        }
        let m0 = complete_column(a, e);
        let t = BigInt::from(rng.range(-bound, bound));
        let b = &m0.b + &t * &m0.a;
        let d = &m0.d + &t * &m0.e;
        return SL2ZMat::raw(m0.a, b, m0.e, d);
    }
}

/// A pseudo-random element of `Γ₁(N)` outside `Γ(N)` (for `N ≥ 2`).
pub fn sample_gamma1_not_gamma(n: u64, rng: &mut Lcg) -> SL2ZMat {
    assert!(n >= 2);
    loop {
        let g = sample_gamma(n, rng);
        let k = rng.range(1, n as i64 - 1);
        let m = g.mul(&SL2ZMat::t_pow(k));
        if !in_gamma(n, &m) {
            return m;
        }
    }
}

fn congruent(x: &BigInt, y: i64, n: u64) -> bool {
    (x - y).mod_floor(&BigInt::from(n)).is_zero()
}

pub fn in_gamma(n: u64, m: &SL2ZMat) -> bool {
    in_gamma1(n, m) && congruent(&m.b, 0, n)
}

pub fn in_gamma1(n: u64, m: &SL2ZMat) -> bool {
    congruent(&m.a, 1, n) && congruent(&m.d, 1, n) && congruent(&m.e, 0, n)
}

/// An element of `SL₂(Z/N)`, entries in `0..N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModMat {
    pub n: u64,
    pub a: u64,
    pub b: u64,
    pub e: u64,
    pub d: u64,
}

impl ModMat {
    pub fn reduce(m: &SL2ZMat, n: u64) -> Self {
        let r = |x: &BigInt| x.mod_floor(&BigInt::from(n)).to_u64().unwrap_or(0);
        ModMat {
            n,
            a: r(&m.a),
            b: r(&m.b),
            e: r(&m.e),
            d: r(&m.d),
        }
    }
}

pub fn mod_inverse(l: i64, n: u64) -> Result<u64> {
    let (g, x, _) = ext_gcd(&BigInt::from(l), &BigInt::from(n));
    if !g.is_one() {
        return Err(Error::NotCoprime { l, modulus: n });
    }
    Ok(x.mod_floor(&BigInt::from(n)).to_u64().unwrap_or(0))
}

/// `τ_l(m) = [[a, l·b], [l̂·e, d]]` modulo `N`.
pub fn tau_l(m: &SL2ZMat, l: i64, n: u64) -> Result<ModMat> {
    tau_l_mod(&ModMat::reduce(m, n), l)
}

pub fn tau_l_mod(m: &ModMat, l: i64) -> Result<ModMat> {
    let n = m.n;
    let lhat = mod_inverse(l, n)? as u128;
    let lr = l.rem_euclid(n as i64) as u128;
    let nn = n as u128;
    Ok(ModMat {
        n,
        a: m.a,
        b: ((lr * m.b as u128) % nn) as u64,
        e: ((lhat * m.e as u128) % nn) as u64,
        d: m.d,
    })
}

/// Lifts an element of `SL₂(Z/N)` to `SL(2, Z)`.
///
/// The first column is made coprime by shifting `a` by multiples of `N`, it
/// is completed by extended Euclid, and then `b`, `d` are shifted by a
/// multiple of `(a, e)` to hit the target residues.
pub fn lift(m: &ModMat) -> SL2ZMat {
    let n = BigInt::from(m.n);
    let e = if m.e == 0 {
        n.clone()
    } else {
        BigInt::from(m.e)
    };
    let mut a = BigInt::from(m.a);
    while !a.gcd(&e).is_one() {
        a += &n;
    }
    let m0 = complete_column(a, e);
    let (b, d) = (BigInt::from(m.b), BigInt::from(m.d));
    let t = (&m0.d * &b - &m0.b * &d).mod_floor(&n);
    let b = &m0.b + &t * &m0.a;
    let d = &m0.d + &t * &m0.e;
    SL2ZMat::raw(m0.a, b, m0.e, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular_data::builtin_model;

    fn mat(a: i64, b: i64, e: i64, d: i64) -> SL2ZMat {
        SL2ZMat::new(a, b, e, d).unwrap()
    }

    #[test]
    fn small_decompositions() {
        let w = decompose(&SL2ZMat::identity());
        assert!(w.is_empty() && !w.negative);
        assert_eq!(decompose(&SL2ZMat::s()).to_string(), "s");
        assert_eq!(decompose(&mat(1, 3, 0, 1)).to_string(), "t^3");
        assert_eq!(decompose(&SL2ZMat::minus_identity()).to_string(), "-1");
        for m in [mat(2, 1, 1, 1), mat(0, 1, -1, 0), mat(-5, 3, 8, -5)] {
            assert_eq!(decompose(&m).evaluate(), m);
        }
    }

    #[test]
    fn representation_on_generators() {
        let md = builtin_model("su2:1").unwrap();
        assert!(rep_evaluate(&md, &SL2ZMat::identity()).is_identity());
        assert_eq!(rep_evaluate(&md, &SL2ZMat::s()), *md.s());
        assert_eq!(
            rep_evaluate(&md, &SL2ZMat::t_pow(1)),
            CMatrix::diag(&md.t())
        );
        assert_eq!(
            rep_evaluate(&md, &SL2ZMat::minus_identity()),
            md.conj_matrix()
        );
        assert!(rep_evaluate(&md, &SL2ZMat::t_pow(24)).is_identity());
    }

    #[test]
    fn lcg_is_reproducible() {
        let mut a = Lcg::new(7);
        let mut b = Lcg::new(7);
        for _ in 0..10 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let mut r = Lcg::new(0);
        assert_eq!(r.next_u64(), Lcg::INCREMENT);
    }

    #[test]
    fn gamma_membership() {
        for n in [1, 2, 7, 24] {
            assert!(in_gamma(n, &SL2ZMat::identity()));
            assert!(in_gamma(n, &mat(1, n as i64, 0, 1)));
        }
        let t = mat(1, 1, 0, 1);
        assert!(in_gamma1(2, &t) && !in_gamma(2, &t));
        let mut rng = Lcg::new(3);
        for n in [2, 16, 24] {
            for _ in 0..20 {
                assert!(in_gamma(n, &sample_gamma(n, &mut rng)));
                let m = sample_gamma1_not_gamma(n, &mut rng);
                assert!(in_gamma1(n, &m) && !in_gamma(n, &m));
            }
        }
    }

    #[test]
    fn tau_and_lift() {
        let n = 24;
        let t = SL2ZMat::t_pow(1);
        assert_eq!(
            tau_l(&t, 5, n).unwrap(),
            ModMat {
                n,
                a: 1,
                b: 5,
                e: 0,
                d: 1
            }
        );
        assert!(matches!(tau_l(&t, 4, n), Err(Error::NotCoprime { .. })));
        let mut rng = Lcg::new(11);
        for _ in 0..50 {
            let m = sample_sl2z(50, &mut rng);
            let r = ModMat::reduce(&m, n);
            assert_eq!(tau_l(&m, 1, n).unwrap(), r);
            let back = tau_l_mod(&tau_l(&m, 7, n).unwrap(), 7).unwrap();
            assert_eq!(back, r, "tau_7 is an involution mod 24");
            let lifted = lift(&r);
            assert_eq!(ModMat::reduce(&lifted, n), r);
        }
    }
}
