//! Exact arithmetic in cyclotomic fields `Q[ζ_M]`.
//!
//! A [`CycloNum`] stores an element of `Q[ζ_M]` in the power basis
//! `1, ζ_M, …, ζ_M^{φ(M)−1}` as an integer numerator vector over one positive
//! common denominator. Reduction modulo `Φ_M` keeps the representation
//! canonical, so two numbers of the same order are equal exactly when their
//! stored vectors are equal. Mixed-order operations lift both operands to the
//! least common multiple of their orders.

mod poly;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use poly::{cyclotomic_poly, divisors, prime_factors, totient};

pub type Rational = BigRational;

/// Parses `"p/q"` or `"p"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("malformed rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Largest exponent digits honoured by [`CycloNum::embed_complex`].
pub const MAX_EMBED_DIGITS: u32 = 15;

/// Numerators over one positive denominator, in lowest terms. The machine-word
/// form is used whenever everything fits, so equal values share a form.
#[derive(Clone, PartialEq, Eq)]
enum Coeffs {
    Small { num: Vec<i64>, den: i64 },
    Big { num: Vec<BigInt>, den: BigInt },
}

#[derive(Clone)]
pub struct CycloNum {
    order: u32,
    c: Coeffs,
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl CycloNum {
    pub fn zero(order: u32) -> Self {
        let f = poly::field(order);
        CycloNum {
            order,
            c: Coeffs::Small {
                num: vec![0; f.phi],
                den: 1,
            },
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_rational(q: &Rational) -> Self {
        Self::from_big(1, vec![q.numer().clone()], q.denom().clone())
    }

    pub fn from_int(n: i64) -> Self {
        CycloNum {
            order: 1,
            c: Coeffs::Small {
                num: vec![n],
                den: 1,
            },
        }
    }

    /// `ζ_M^j`.
    pub fn zeta(order: u32, j: i64) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        let mut wide = vec![0i128; order as usize];
        wide[j.rem_euclid(order as i64) as usize] = 1;
        Self::from_wide_i128(order, wide, 1)
    }

    /// The canonical element `Σ c·ζ_M^j` for the given `(j, c)` terms.
    pub fn make(order: u32, terms: &[(i64, Rational)]) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        let den = terms
            .iter()
            .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let mut wide = vec![BigInt::zero(); order as usize];
        for (j, c) in terms {
            let slot = j.rem_euclid(order as i64) as usize;
            wide[slot] += c.numer() * (&den / c.denom());
        }
        Self::from_wide_big(order, wide, den)
    }

    /// Builds from a numerator vector of any length (exponents taken mod M).
    fn from_wide_big(order: u32, mut wide: Vec<BigInt>, den: BigInt) -> Self {
        let f = poly::field(order);
        let m = order as usize;
        if wide.len() > m {
            let extra = wide.split_off(m);
            for (i, c) in extra.into_iter().enumerate() {
                wide[i % m] += c;
            }
        }
        poly::reduce_big(&f, &mut wide);
        Self::from_big(order, wide, den)
    }

    /// Like [`Self::from_wide_big`] but with `wide.len() ≤ M` assumed.
    fn from_wide_i128(order: u32, mut wide: Vec<i128>, den: i128) -> Self {
        let f = poly::field(order);
        let backup = wide.clone();
        match poly::reduce_i128(&f, &mut wide) {
            Some(()) => Self::from_i128(order, wide, den),
            None => Self::from_wide_big(
                order,
                backup.into_iter().map(BigInt::from).collect(),
                BigInt::from(den),
            ),
        }
    }

    fn from_big(order: u32, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        debug_assert!(!den.is_zero());
        if den.is_negative() {
            den = -den;
            for c in &mut num {
                *c = -&*c;
            }
        }
        if num.iter().all(Zero::is_zero) {
            den = BigInt::one();
        } else {
            let mut g = den.clone();
            for c in &num {
                if g.is_one() {
                    break;
                }
                if !c.is_zero() {
                    g = g.gcd(c);
                }
            }
            if !g.is_one() {
                den /= &g;
                for c in &mut num {
                    *c /= &g;
                }
            }
        }
        let small = num
            .iter()
            .map(|c| c.to_i64())
            .collect::<Option<Vec<_>>>()
            .zip(den.to_i64());
        let c = match small {
            Some((num, den)) => Coeffs::Small { num, den },
            None => Coeffs::Big { num, den },
        };
        CycloNum { order, c }
    }

    fn from_i128(order: u32, mut num: Vec<i128>, mut den: i128) -> Self {
        if den < 0 {
            den = -den;
            for c in &mut num {
                *c = -*c;
            }
        }
        if num.iter().all(|c| *c == 0) {
            den = 1;
        } else {
            let mut g = den;
            for &c in &num {
                if g == 1 {
                    break;
                }
                if c != 0 {
                    g = gcd_i128(g, c);
                }
            }
            if g != 1 {
                den /= g;
                for c in &mut num {
                    *c /= g;
                }
            }
        }
        let fits = |x: i128| i64::try_from(x).is_ok();
        if fits(den) && num.iter().all(|&c| fits(c)) {
            CycloNum {
                order,
                c: Coeffs::Small {
                    num: num.into_iter().map(|c| c as i64).collect(),
                    den: den as i64,
                },
            }
        } else {
            CycloNum {
                order,
                c: Coeffs::Big {
                    num: num.into_iter().map(BigInt::from).collect(),
                    den: BigInt::from(den),
                },
            }
        }
    }

    fn big_parts(&self) -> (Vec<BigInt>, BigInt) {
        match &self.c {
            Coeffs::Small { num, den } => (
                num.iter().map(|&c| BigInt::from(c)).collect(),
                BigInt::from(*den),
            ),
            Coeffs::Big { num, den } => (num.clone(), den.clone()),
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Power-basis coefficients as reduced rationals (length `φ(order)`).
    pub fn coeffs(&self) -> Vec<Rational> {
        let (num, den) = self.big_parts();
        num.into_iter()
            .map(|c| Rational::new(c, den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        match &self.c {
            Coeffs::Small { num, .. } => num.iter().all(|c| *c == 0),
            Coeffs::Big { num, .. } => num.iter().all(Zero::is_zero),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.c {
            Coeffs::Small { num, den } => {
                *den == 1 && num[0] == 1 && num[1..].iter().all(|c| *c == 0)
            }
            Coeffs::Big { .. } => false,
        }
    }

    /// `Some(q)` when the element is the rational `q`.
    pub fn as_rational(&self) -> Option<Rational> {
        match &self.c {
            Coeffs::Small { num, den } => num[1..]
                .iter()
                .all(|c| *c == 0)
                .then(|| Rational::new(num[0].into(), (*den).into())),
            Coeffs::Big { num, den } => num[1..]
                .iter()
                .all(Zero::is_zero)
                .then(|| Rational::new(num[0].clone(), den.clone())),
        }
    }

    /// `Some(n)` when the element is a rational integer.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|q| q.is_integer())
            .map(|q| q.to_integer())
    }

    /// Scatters coefficient `j` to position `(j·step + shift) mod M` and reduces.
    fn scatter(&self, order: u32, step: usize, shift: usize) -> Self {
        let m = order as usize;
        match &self.c {
            Coeffs::Small { num, den } => {
                let mut wide = vec![0i128; m];
                for (j, &c) in num.iter().enumerate() {
                    if c != 0 {
                        wide[(j * step + shift) % m] += c as i128;
                    }
                }
                Self::from_wide_i128(order, wide, *den as i128)
            }
            Coeffs::Big { num, den } => {
                let mut wide = vec![BigInt::zero(); m];
                for (j, c) in num.iter().enumerate() {
                    if !c.is_zero() {
                        wide[(j * step + shift) % m] += c;
                    }
                }
                Self::from_wide_big(order, wide, den.clone())
            }
        }
    }

    /// Re-expresses the element at a multiple of its order.
    pub(crate) fn lift_to(&self, order: u32) -> Self {
        if order == self.order {
            return self.clone();
        }
        debug_assert!(order.is_multiple_of(self.order));
        if let Some(q) = self.as_rational() {
            // constants need no reduction
            let mut out = Self::from_rational(&q).with_len(poly::field(order).phi);
            out.order = order;
            return out;
        }
        self.scatter(order, (order / self.order) as usize, 0)
    }

    /// Pads a constant's coefficient vector to the field degree.
    fn with_len(mut self, phi: usize) -> Self {
        match &mut self.c {
            Coeffs::Small { num, .. } => num.resize(phi, 0),
            Coeffs::Big { num, .. } => num.resize(phi, BigInt::zero()),
        }
        self
    }

    /// `self · exp(2πi r)`, computed by shifting exponents.
    pub fn times_root_of_unity(&self, r: &Rational) -> Self {
        let q = r.denom().to_u32().expect("root of unity order too large");
        let order = self.order.lcm(&q);
        let p = r.numer().mod_floor(r.denom()).to_u64().unwrap_or(0) as usize;
        let shift = p * (order / q) as usize;
        self.scatter(order, (order / self.order) as usize, shift)
    }

    fn common(a: &Self, b: &Self) -> (Self, Self, u32) {
        if a.order == b.order {
            return (a.clone(), b.clone(), a.order);
        }
        let l = a.order.lcm(&b.order);
        (a.lift_to(l), b.lift_to(l), l)
    }

    fn add_same(&self, other: &Self, negate: bool) -> Self {
        debug_assert_eq!(self.order, other.order);
        if let (Coeffs::Small { num: a, den: da }, Coeffs::Small { num: b, den: db }) =
            (&self.c, &other.c)
        {
            let (da, db) = (*da as i128, *db as i128);
            let num = a
                .iter()
                .zip(b)
                .map(|(&x, &y)| {
                    let y = if negate { -(y as i128) } else { y as i128 };
                    x as i128 * db + y * da
                })
                .collect();
            return Self::from_i128(self.order, num, da * db);
        }
        let (a, da) = self.big_parts();
        let (b, db) = other.big_parts();
        let num = a
            .iter()
            .zip(&b)
            .map(|(x, y)| {
                let t = y * &da;
                if negate {
                    x * &db - t
                } else {
                    x * &db + t
                }
            })
            .collect();
        Self::from_big(self.order, num, da * db)
    }

    fn mul_same(&self, other: &Self) -> Self {
        debug_assert_eq!(self.order, other.order);
        let f = poly::field(self.order);
        if let (Coeffs::Small { num: a, den: da }, Coeffs::Small { num: b, den: db }) =
            (&self.c, &other.c)
        {
            if let Some(num) = poly::mul_small(&f, a, b) {
                return Self::from_i128(self.order, num, *da as i128 * *db as i128);
            }
        }
        let (a, da) = self.big_parts();
        let (b, db) = other.big_parts();
        let num = poly::mul_big(&f, &a, &b);
        Self::from_big(self.order, num, da * db)
    }

    /// Multiplies by a rational without changing the order.
    fn scale_rational(&self, q: &Rational) -> Self {
        if let (Coeffs::Small { num, den }, Some(p), Some(d)) =
            (&self.c, q.numer().to_i64(), q.denom().to_i64())
        {
            let num = num.iter().map(|&c| c as i128 * p as i128).collect();
            return Self::from_i128(self.order, num, *den as i128 * d as i128);
        }
        let (num, den) = self.big_parts();
        let num = num.iter().map(|c| c * q.numer()).collect();
        Self::from_big(self.order, num, den * q.denom())
    }

    fn add_any(&self, other: &Self, negate: bool) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() && !negate {
            return other.clone();
        }
        let (a, b, _) = Self::common(self, other);
        a.add_same(&b, negate)
    }

    fn mul_any(&self, other: &Self) -> Self {
        if self.order == 1 {
            if let Some(q) = self.as_rational() {
                return other.scale_rational(&q);
            }
        }
        if other.order == 1 {
            if let Some(q) = other.as_rational() {
                return self.scale_rational(&q);
            }
        }
        let (a, b, _) = Self::common(self, other);
        a.mul_same(&b)
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inverse()?)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm over `Q`.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(&q.recip()).lift_to(self.order));
        }
        let f = poly::field(self.order);
        let modulus: Vec<Rational> = f
            .poly
            .iter()
            .map(|&c| Rational::from_integer(c.into()))
            .collect();
        let (g, s) = poly_ext_gcd(modulus, self.coeffs());
        // g is a nonzero constant because Φ_M is irreducible.
        debug_assert_eq!(poly_degree(&g), Some(0));
        let c = g[0].clone();
        let terms: Vec<(i64, Rational)> = s
            .into_iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (i as i64, x / &c))
            .collect();
        Ok(Self::make(self.order, &terms))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one().lift_to(self.order);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Applies `σ_l : ζ_M ↦ ζ_M^l`.
    pub fn galois(&self, l: i64) -> Result<Self> {
        let m = self.order as i64;
        if l.gcd(&m) != 1 {
            return Err(Error::NotCoprime {
                l,
                modulus: m as u64,
            });
        }
        Ok(self.galois_unchecked(l))
    }

    fn galois_unchecked(&self, l: i64) -> Self {
        let step = l.rem_euclid(self.order as i64) as usize;
        self.scatter(self.order, step, 0)
    }

    /// Complex conjugation, i.e. `σ_{−1}`.
    pub fn conj(&self) -> Self {
        self.galois_unchecked(-1)
    }

    fn is_fixed_by(&self, l: i64) -> bool {
        self.galois_unchecked(l) == *self
    }

    /// Whether the element lies in `Q[ζ_n]` for a divisor `n` of the order.
    fn lies_in(&self, n: u32) -> bool {
        let m = self.order;
        if n == m {
            return true;
        }
        for g in kernel_generators(m, n) {
            if !self.is_fixed_by(g as i64) {
                return false;
            }
        }
        true
    }

    /// Smallest divisor `n` of the order with the element in `Q[ζ_n]`.
    pub fn minimal_order(&self) -> u32 {
        if self.as_rational().is_some() {
            return 1;
        }
        let mut n = self.order;
        'descend: loop {
            for (p, _) in prime_factors(n as u64) {
                let cand = n / p as u32;
                if self.lies_in(cand) {
                    n = cand;
                    continue 'descend;
                }
            }
            return n;
        }
    }

    /// Re-expresses the element in `Q[ζ_{new_order}]`.
    pub fn coerce(&self, new_order: u32) -> Result<Self> {
        if new_order == 0 {
            return Err(Error::NotEmbeddable {
                order: self.order,
                target: new_order,
            });
        }
        if new_order.is_multiple_of(self.order) {
            return Ok(self.lift_to(new_order));
        }
        let min = self.minimal_order();
        if !new_order.is_multiple_of(min) {
            return Err(Error::NotEmbeddable {
                order: self.order,
                target: new_order,
            });
        }
        Ok(self.descend(min).lift_to(new_order))
    }

    /// Rewrites an element known to lie in `Q[ζ_n]` (n | order) at order n.
    fn descend(&self, n: u32) -> Self {
        if n == self.order {
            return self.clone();
        }
        let small_phi = poly::field(n).phi;
        let step = (self.order / n) as i64;
        // Columns: images of ζ_n^j, j < φ(n), in the big power basis.
        let cols: Vec<Vec<Rational>> = (0..small_phi)
            .map(|j| Self::zeta(self.order, j as i64 * step).coeffs())
            .collect();
        let target = self.coeffs();
        let sol = solve_columns(&cols, &target).expect("element does not lie in the subfield");
        let terms: Vec<(i64, Rational)> = sol
            .into_iter()
            .enumerate()
            .map(|(i, x)| (i as i64, x))
            .collect();
        Self::make(n, &terms)
    }

    /// Reduces to the smallest field containing the element.
    pub fn to_minimal_field(&self) -> Self {
        self.descend(self.minimal_order())
    }

    /// `exp(2πi r)` as an exact root of unity of order `denominator(r)`.
    pub fn root_of_unity(r: &Rational) -> Self {
        let q = r.denom().to_u32().expect("root of unity order too large");
        let p = r.numer().mod_floor(r.denom()).to_i64().unwrap_or(0);
        Self::zeta(q, p)
    }

    /// Nonnegative square root of a nonnegative rational, built from Gauss sums.
    pub fn sqrt_nonneg_rational(q: &Rational) -> Result<Self> {
        if q.is_negative() {
            return Err(Error::NegativeRadicand);
        }
        if q.is_zero() {
            return Ok(Self::from_int(0));
        }
        // √(p/d) = √(p·d)/d
        let radicand = q.numer() * q.denom();
        let r = radicand
            .to_u64()
            .expect("radicand exceeds the supported range");
        let mut square = 1u64;
        let mut root = Self::one();
        for (p, e) in prime_factors(r) {
            square *= p.pow(e / 2);
            if e % 2 == 1 {
                root = &root * &sqrt_prime(p);
            }
        }
        let scale = Rational::new(BigInt::from(square), q.denom().clone());
        let mut out = &root * &Self::from_rational(&scale);
        if out.embed_complex().re < 0.0 {
            out = -&out;
        }
        debug_assert!((&out * &out) == Self::from_rational(q));
        Ok(out)
    }

    /// Floating-point image under `ζ_M ↦ exp(2πi/M)`.
    pub fn embed_complex(&self) -> Complex64 {
        let m = self.order as f64;
        let (num, den): (Vec<f64>, f64) = match &self.c {
            Coeffs::Small { num, den } => (num.iter().map(|&c| c as f64).collect(), *den as f64),
            Coeffs::Big { num, den } => (
                num.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect(),
                den.to_f64().unwrap_or(f64::INFINITY),
            ),
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, c) in num.into_iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let w = c / den;
            let theta = std::f64::consts::TAU * j as f64 / m;
            acc += Complex64::new(w * theta.cos(), w * theta.sin());
        }
        acc
    }

    /// [`Self::embed_complex`] rounded to `digits` decimals.
    pub fn embed_rounded(&self, digits: u32) -> Complex64 {
        let z = self.embed_complex();
        let scale = 10f64.powi(digits.min(MAX_EMBED_DIGITS) as i32);
        let r = |x: f64| {
            let y = (x * scale).round() / scale;
            if y == 0.0 {
                0.0
            } else {
                y
            }
        };
        Complex64::new(r(z.re), r(z.im))
    }

    /// Decimal rendering used in reports, e.g. `0.7071067812-0.7071067812i`.
    pub fn approx_string(&self, digits: u32) -> String {
        let z = self.embed_rounded(digits);
        let d = digits.min(MAX_EMBED_DIGITS) as usize;
        if z.im == 0.0 {
            format!("{:.*}", d, z.re)
        } else {
            format!("{:.*}{:+.*}i", d, z.re, d, z.im)
        }
    }
}

impl PartialEq for CycloNum {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.c == other.c;
        }
        let (a, b, _) = Self::common(self, other);
        a.c == b.c
    }
}

impl Eq for CycloNum {}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (j, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => write!(f, "z{}^{j}", self.order)?,
                (_, false) => write!(f, "{a}*z{}^{j}", self.order)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&CycloNum> for &CycloNum {
            type Output = CycloNum;
            fn $m(self, rhs: &CycloNum) -> CycloNum {
                let f: fn(&CycloNum, &CycloNum) -> CycloNum = $body;
                f(self, rhs)
            }
        }
        impl $tr<CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $m(self, rhs: CycloNum) -> CycloNum {
                (&self).$m(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| a.add_any(b, false));
binop!(Sub, sub, |a, b| a.add_any(b, true));
binop!(Mul, mul, |a, b| a.mul_any(b));

impl Div<&CycloNum> for &CycloNum {
    type Output = CycloNum;
    /// Panics on division by zero; use [`CycloNum::checked_div`] otherwise.
    fn div(self, rhs: &CycloNum) -> CycloNum {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        let c = match &self.c {
            Coeffs::Small { num, den } if num.iter().all(|&x| x != i64::MIN) => Coeffs::Small {
                num: num.iter().map(|&x| -x).collect(),
                den: *den,
            },
            _ => {
                let (num, den) = self.big_parts();
                return CycloNum::from_big(self.order, num.iter().map(|x| -x).collect(), den);
            }
        };
        CycloNum {
            order: self.order,
            c,
        }
    }
}

impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        -&self
    }
}

impl std::iter::Sum for CycloNum {
    fn sum<I: Iterator<Item = CycloNum>>(iter: I) -> CycloNum {
        iter.fold(CycloNum::from_int(0), |a, b| a.add_any(&b, false))
    }
}

/// `√p` for a prime `p`: `ζ_8 + ζ_8⁻¹` for 2, a quadratic Gauss sum otherwise.
fn sqrt_prime(p: u64) -> CycloNum {
    if p == 2 {
        return CycloNum::make(8, &[(1, Rational::one()), (7, Rational::one())]);
    }
    let order = u32::try_from(p).expect("prime too large for a cyclotomic order");
    let terms: Vec<(i64, Rational)> = (1..p)
        .map(|a| {
            let chi = legendre(a, p);
            (a as i64, Rational::from_integer(chi.into()))
        })
        .collect();
    let gauss = CycloNum::make(order, &terms);
    let root = if p % 4 == 1 {
        gauss
    } else {
        // gauss = i√p
        &gauss * &CycloNum::zeta(4, 3)
    };
    if root.embed_complex().re < 0.0 {
        -root
    } else {
        root
    }
}

fn legendre(a: u64, p: u64) -> i64 {
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    if result == 1 {
        1
    } else if result == 0 {
        0
    } else {
        -1
    }
}

/// Generators of `{ j ∈ (Z/m)^* : j ≡ 1 mod n }`.
fn kernel_generators(m: u32, n: u32) -> Vec<u32> {
    let members: Vec<u32> = (1..=m)
        .filter(|&j| (j as u64).gcd(&(m as u64)) == 1 && (j % n) == 1 % n)
        .map(|j| j % m)
        .collect();
    let mut span: std::collections::BTreeSet<u32> = [1 % m.max(1)].into_iter().collect();
    let mut gens = Vec::new();
    for &j in &members {
        if span.contains(&j) {
            continue;
        }
        gens.push(j);
        // close the span under multiplication by all generators
        let mut frontier: Vec<u32> = span.iter().copied().collect();
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = ((x as u64 * g as u64) % m as u64) as u32;
                if span.insert(y) {
                    frontier.push(y);
                }
            }
        }
    }
    gens
}

fn poly_degree(p: &[Rational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

fn poly_trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_sub_mul(a: &[Rational], q: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let len = a.len().max(q.len() + b.len());
    let mut out = vec![Rational::zero(); len];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in q.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] -= x * y;
        }
    }
    poly_trim(out)
}

fn poly_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let db = poly_degree(b).expect("division by zero polynomial");
    let mut rem = a.to_vec();
    let Some(da) = poly_degree(&rem) else {
        return (vec![Rational::zero()], rem);
    };
    if da < db {
        return (vec![Rational::zero()], rem);
    }
    let lead = b[db].clone();
    let mut quot = vec![Rational::zero(); da - db + 1];
    for i in (0..=da - db).rev() {
        let c = &rem[i + db] / &lead;
        if c.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(db + 1) {
            rem[i + j] -= &c * y;
        }
        quot[i] = c;
    }
    (poly_trim(quot), poly_trim(rem))
}

/// Returns `(g, s)` with `s·a ≡ g (mod m)`, `g = gcd(m, a)`.
fn poly_ext_gcd(m: Vec<Rational>, a: Vec<Rational>) -> (Vec<Rational>, Vec<Rational>) {
    let (mut r0, mut r1) = (poly_trim(m), poly_trim(a));
    let (mut s0, mut s1) = (vec![Rational::zero()], vec![Rational::one()]);
    while poly_degree(&r1).is_some_and(|d| d > 0) {
        let (q, r) = poly_divmod(&r0, &r1);
        let s = poly_sub_mul(&s0, &q, &s1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    (r1, s1)
}

/// Solves `Σ x_j cols[j] = target` exactly; `None` if inconsistent.
fn solve_columns(cols: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let rows = target.len();
    let ncols = cols.len();
    let mut a: Vec<Vec<Rational>> = (0..rows)
        .map(|i| {
            let mut row: Vec<Rational> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let pivot = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row[c..].iter_mut().zip(&pivot[c..]) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if a[r..].iter().any(|row| !row[ncols].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = a[i][ncols].clone();
    }
    Some(x)
}

/// Wire form `{"order": M, "coeffs": ["p/q", ...]}` with exactly `φ(M)` entries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycloRepr {
    pub order: u32,
    pub coeffs: Vec<String>,
}

impl From<&CycloNum> for CycloRepr {
    fn from(a: &CycloNum) -> Self {
        CycloRepr {
            order: a.order,
            coeffs: a.coeffs().iter().map(|c| c.to_string()).collect(),
        }
    }
}

impl TryFrom<&CycloRepr> for CycloNum {
    type Error = Error;

    fn try_from(r: &CycloRepr) -> Result<Self> {
        if r.order == 0 {
            return Err(Error::Parse("cyclotomic order must be positive".into()));
        }
        let phi = poly::field(r.order).phi;
        if r.coeffs.len() != phi {
            return Err(Error::Parse(format!(
                "order {} needs {} coefficients, got {}",
                r.order,
                phi,
                r.coeffs.len()
            )));
        }
        let terms = r
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, s)| Ok((j as i64, parse_rational(s)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(CycloNum::make(r.order, &terms))
    }
}

impl Serialize for CycloNum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycloRepr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloNum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = CycloRepr::deserialize(d)?;
        CycloNum::try_from(&r).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Rational {
        rat(p, d)
    }

    fn coeffs_i(a: &CycloNum) -> Vec<Rational> {
        a.coeffs()
    }

    #[test]
    fn make_reduces_powers() {
        let m = CycloNum::make(4, &[(2, q(1, 1))]);
        assert_eq!(coeffs_i(&m), vec![q(-1, 1), q(0, 1)]);
        let z = CycloNum::make(3, &[(0, q(1, 1)), (1, q(1, 1)), (2, q(1, 1))]);
        assert!(z.is_zero());
        let e = CycloNum::make(8, &[(1, q(1, 1)), (7, q(1, 1))]);
        assert_eq!(coeffs_i(&e), vec![q(0, 1), q(1, 1), q(0, 1), q(-1, 1)]);
    }

    #[test]
    fn basic_field_operations() {
        let i = CycloNum::zeta(4, 1);
        assert_eq!(&i * &i, CycloNum::from_int(-1));
        let s2 = CycloNum::make(8, &[(1, q(1, 1)), (-1, q(1, 1))]);
        assert_eq!(&s2 * &s2, CycloNum::from_int(2));
        let w = CycloNum::zeta(3, 1);
        assert_eq!(&CycloNum::one() / &w, CycloNum::zeta(3, 2));
        assert!(matches!(
            CycloNum::one().checked_div(&CycloNum::zero(5)),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn conjugation_and_galois() {
        assert_eq!(CycloNum::zeta(5, 1).conj(), CycloNum::zeta(5, 4));
        let r = CycloNum::from_rational(&q(3, 7));
        assert_eq!(r.conj(), r);
        let s2 = CycloNum::make(8, &[(1, q(1, 1)), (-1, q(1, 1))]);
        assert_eq!(s2.conj(), s2);
        assert_eq!(
            CycloNum::zeta(8, 1).galois(5).unwrap(),
            CycloNum::zeta(8, 5)
        );
        assert_eq!(s2.galois(5).unwrap(), -&s2);
        assert!(matches!(s2.galois(2), Err(Error::NotCoprime { .. })));
        assert_eq!(r.galois(1).unwrap(), r);
    }

    #[test]
    fn coercion_and_minimal_order() {
        assert_eq!(
            CycloNum::zeta(4, 1).coerce(8).unwrap().coeffs(),
            CycloNum::zeta(8, 2).coeffs()
        );
        let s2 = CycloNum::make(8, &[(1, q(1, 1)), (-1, q(1, 1))]);
        let big = s2.coerce(24).unwrap();
        assert_eq!(big.order(), 24);
        assert_eq!(big.minimal_order(), 8);
        let back = big.coerce(8).unwrap();
        assert_eq!(back.order(), 8);
        assert_eq!(back.coeffs(), s2.coeffs());
        assert_eq!(CycloNum::from_rational(&q(1, 2)).minimal_order(), 1);
        assert_eq!(CycloNum::zeta(6, 1).minimal_order(), 3);
        assert_eq!(CycloNum::zeta(4, 1).minimal_order(), 4);
        assert!(matches!(
            CycloNum::zeta(4, 1).coerce(6),
            Err(Error::NotEmbeddable { .. })
        ));
    }

    #[test]
    fn square_roots() {
        assert!(CycloNum::sqrt_nonneg_rational(&q(0, 1)).unwrap().is_zero());
        assert_eq!(
            CycloNum::sqrt_nonneg_rational(&q(9, 4)).unwrap(),
            CycloNum::from_rational(&q(3, 2))
        );
        let s5 = CycloNum::sqrt_nonneg_rational(&q(5, 1)).unwrap();
        let gauss = CycloNum::make(
            5,
            &[(1, q(1, 1)), (2, q(-1, 1)), (3, q(-1, 1)), (4, q(1, 1))],
        );
        assert_eq!(s5, gauss);
        assert!(matches!(
            CycloNum::sqrt_nonneg_rational(&q(-1, 1)),
            Err(Error::NegativeRadicand)
        ));
        for n in [2i64, 3, 6, 7, 11, 12, 15, 98] {
            let r = CycloNum::sqrt_nonneg_rational(&q(n, 3)).unwrap();
            assert_eq!(&r * &r, CycloNum::from_rational(&q(n, 3)));
            let z = r.embed_complex();
            assert!(z.re > 0.0 && z.im.abs() < 1e-10);
        }
    }

    #[test]
    fn roots_of_unity() {
        assert!(CycloNum::root_of_unity(&q(0, 1)).is_one());
        assert_eq!(CycloNum::root_of_unity(&q(1, 2)), CycloNum::from_int(-1));
        let p = &CycloNum::root_of_unity(&q(-1, 24)) * &CycloNum::root_of_unity(&q(1, 24));
        assert!(p.is_one());
    }

    #[test]
    fn embedding() {
        let z = CycloNum::zeta(4, 1).embed_rounded(10);
        assert_eq!((z.re, z.im), (0.0, 1.0));
        let s2 = CycloNum::make(8, &[(1, q(1, 1)), (-1, q(1, 1))]);
        assert_eq!(s2.approx_string(10), "1.4142135624");
        assert_eq!(CycloNum::zero(7).approx_string(10), "0.0000000000");
    }

    #[test]
    fn serde_round_trip() {
        let s2 = CycloNum::make(8, &[(1, q(1, 2)), (-1, q(1, 1))]);
        let text = serde_json::to_string(&s2).unwrap();
        assert_eq!(text, r#"{"order":8,"coeffs":["0","1/2","0","-1"]}"#);
        let back: CycloNum = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s2);
        let short = r#"{"order":8,"coeffs":["0","1"]}"#;
        assert!(serde_json::from_str::<CycloNum>(short).is_err());
    }

    #[test]
    fn kernel_generators_span_the_subgroup() {
        // {j mod 24 : j ≡ 1 mod 8} ∩ units = {1, 17}
        assert_eq!(kernel_generators(24, 8), vec![17]);
        assert!(kernel_generators(24, 24).is_empty());
    }
}
