//! Cyclotomic polynomials and the reduction kernel behind [`super::CycloNum`].
//!
//! Every field `Q[ζ_M]` that is touched gets a [`Field`] record holding `Φ_M`
//! both densely and as a sparse tail. Records are built once and shared
//! through a process-wide table; they are never mutated after insertion.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::Zero;

pub(crate) struct Field {
    pub phi: usize,
    /// Coefficients of `Φ_M`, lowest degree first; monic of degree `phi`.
    pub poly: Vec<i64>,
    /// Nonzero terms of `Φ_M` below the leading one, as `(degree, coeff)`.
    pub tail: Vec<(usize, i64)>,
}

static FIELDS: OnceLock<RwLock<HashMap<u32, Arc<Field>>>> = OnceLock::new();

pub(crate) fn field(order: u32) -> Arc<Field> {
    assert!(order >= 1, "cyclotomic order must be positive");
    let table = FIELDS.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(f) = table.read().expect("field table poisoned").get(&order) {
        return Arc::clone(f);
    }
    let poly = cyclotomic_poly(order);
    let phi = poly.len() - 1;
    let tail = poly[..phi]
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0)
        .map(|(i, c)| (i, *c))
        .collect();
    let f = Arc::new(Field { phi, poly, tail });
    table
        .write()
        .expect("field table poisoned")
        .entry(order)
        .or_insert(f)
        .clone()
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn totient(n: u64) -> u64 {
    prime_factors(n)
        .iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// `Φ_n` by dividing `x^n − 1` by `Φ_d` for every proper divisor `d`.
pub fn cyclotomic_poly(n: u32) -> Vec<i64> {
    let mut num = vec![0i128; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in divisors(n as u64) {
        if d == n as u64 {
            continue;
        }
        let divisor = field(d as u32);
        num = exact_div_monic(&num, &divisor.poly);
    }
    num.into_iter()
        .map(|c| i64::try_from(c).expect("cyclotomic coefficient overflows i64"))
        .collect()
}

fn exact_div_monic(num: &[i128], den: &[i64]) -> Vec<i128> {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dd;
    let mut quot = vec![0i128; qlen];
    for i in (0..qlen).rev() {
        let q = rem[i + dd];
        quot[i] = q;
        if q != 0 {
            for (j, &c) in den.iter().enumerate() {
                rem[i + j] -= q * c as i128;
            }
        }
    }
    debug_assert!(rem.iter().all(|c| *c == 0), "inexact cyclotomic division");
    quot
}

/// Reduces `c` modulo `Φ_M` in place; `None` on i128 overflow.
pub(crate) fn reduce_i128(f: &Field, c: &mut Vec<i128>) -> Option<()> {
    let phi = f.phi;
    for i in (phi..c.len()).rev() {
        let q = c[i];
        if q == 0 {
            continue;
        }
        c[i] = 0;
        let base = i - phi;
        for &(j, p) in &f.tail {
            let slot = &mut c[base + j];
            *slot = slot.checked_sub(q.checked_mul(p as i128)?)?;
        }
    }
    c.resize(phi, 0);
    Some(())
}

pub(crate) fn reduce_big(f: &Field, c: &mut Vec<BigInt>) {
    let phi = f.phi;
    for i in (phi..c.len()).rev() {
        if c[i].is_zero() {
            continue;
        }
        let q = std::mem::take(&mut c[i]);
        let base = i - phi;
        for &(j, p) in &f.tail {
            c[base + j] -= &q * p;
        }
    }
    c.resize(phi, BigInt::zero());
}

/// Schoolbook product of two coefficient vectors followed by reduction.
pub(crate) fn mul_small(f: &Field, a: &[i64], b: &[i64]) -> Option<Vec<i128>> {
    if a.is_empty() || b.is_empty() {
        return Some(vec![0; f.phi]);
    }
    let mut c = vec![0i128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        let x = x as i128;
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                c[i + j] = c[i + j].checked_add(x * y as i128)?;
            }
        }
    }
    reduce_i128(f, &mut c)?;
    Some(c)
}

pub(crate) fn mul_big(f: &Field, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); (a.len() + b.len()).saturating_sub(1).max(f.phi)];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                c[i + j] += x * y;
            }
        }
    }
    reduce_big(f, &mut c);
    c
}
