//! Independent product oracle: schoolbook multiplication followed by long
//! division by a cyclotomic polynomial computed from `x^M − 1`.

use modata::modrep::Lcg;
use modata::{CycloNum, Rational};
use num_bigint::BigInt;
use num_traits::Zero;

/// `Φ_M` from `x^M − 1 = Π_{d | M} Φ_d`, by exact division.
pub fn phi_poly(m: usize) -> Vec<i128> {
    let mut num = vec![0i128; m + 1];
    num[0] = -1;
    num[m] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            num = divide_exact(&num, &phi_poly(d));
        }
    }
    num
}

fn divide_exact(num: &[i128], den: &[i128]) -> Vec<i128> {
    let (q, r) = long_division(num, den);
    assert!(r.iter().all(|c| c.is_zero()), "inexact division");
    q
}

/// Quotient and remainder of polynomials with a monic divisor.
fn long_division<T>(num: &[T], den: &[i128]) -> (Vec<T>, Vec<T>)
where
    T: Clone + Zero + std::ops::Sub<Output = T> + std::ops::Mul<i128, Output = T>,
{
    let dn = den.len() - 1;
    assert_eq!(den[dn], 1, "divisor must be monic");
    let mut rem = num.to_vec();
    if rem.len() <= dn {
        rem.resize(dn, T::zero());
        return (vec![T::zero()], rem);
    }
    let mut quot = vec![T::zero(); rem.len() - dn];
    for i in (dn..rem.len()).rev() {
        let lead = rem[i].clone();
        if lead.is_zero() {
            continue;
        }
        quot[i - dn] = lead.clone();
        for (j, &c) in den.iter().enumerate() {
            let k = i - dn + j;
            rem[k] = rem[k].clone() - lead.clone() * c;
        }
    }
    rem.truncate(dn);
    (quot, rem)
}

#[derive(Clone, Debug, PartialEq)]
struct Q(Rational);

impl Zero for Q {
    fn zero() -> Self {
        Q(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}
impl std::ops::Add for Q {
    type Output = Q;
    fn add(self, o: Q) -> Q {
        Q(self.0 + o.0)
    }
}
impl std::ops::Sub for Q {
    type Output = Q;
    fn sub(self, o: Q) -> Q {
        Q(self.0 - o.0)
    }
}
impl std::ops::Mul<i128> for Q {
    type Output = Q;
    fn mul(self, c: i128) -> Q {
        Q(self.0 * Rational::from_integer(BigInt::from(c)))
    }
}

fn random_terms(m: usize, rng: &mut Lcg) -> Vec<(i64, Rational)> {
    let count = 1 + rng.below(6) as usize;
    (0..count)
        .map(|_| {
            let j = rng.below(m as u64) as i64;
            let num = rng.range(-9, 9);
            let den = rng.range(1, 4);
            (j, Rational::new(num.into(), den.into()))
        })
        .collect()
}

fn as_poly(m: usize, terms: &[(i64, Rational)]) -> Vec<Q> {
    let mut p = vec![Q::zero(); m];
    for (j, c) in terms {
        let k = *j as usize;
        p[k] = p[k].clone() + Q(c.clone());
    }
    p
}

fn schoolbook(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + Q(&x.0 * &y.0);
        }
    }
    out
}

/// Compares `cases` random products of order at most `max_order` with the
/// oracle; returns the first disagreement.
pub fn compare_products(cases: usize, max_order: usize, seed: u64) -> Result<(), String> {
    let mut rng = Lcg::new(seed);
    let phis: Vec<Vec<i128>> = (0..=max_order)
        .map(|m| if m == 0 { vec![] } else { phi_poly(m) })
        .collect();
    for case in 0..cases {
        let m = 1 + rng.below(max_order as u64) as usize;
        let ta = random_terms(m, &mut rng);
        let tb = random_terms(m, &mut rng);
        let prod = schoolbook(&as_poly(m, &ta), &as_poly(m, &tb));
        let (_, rem) = long_division(&prod, &phis[m]);
        let field = &CycloNum::make(m as u32, &ta) * &CycloNum::make(m as u32, &tb);
        let got = field.coerce(m as u32).map_err(|e| e.to_string())?.coeffs();
        let expect: Vec<Rational> = rem.into_iter().map(|q| q.0).collect();
        if got != expect {
            return Err(format!("case {case}, M = {m}: {got:?} vs {expect:?}"));
        }
    }
    Ok(())
}
