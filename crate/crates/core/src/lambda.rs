//! Bantay's `Λ(r)` matrices, the phase function `g`, and the corrected
//! matrices `Λ̂(r) = exp(2πi g(r))·Λ(r)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cyclo::{rat, Rational};
use crate::error::{Error, Result};
use crate::matrix::{mismatch, CMatrix};
use crate::modrep::{ext_gcd, rep_evaluate, SL2ZMat};
use crate::modular_data::{t_exponents, ModularData};
use crate::report::Report;

/// `r = k/n` in lowest terms with Bezout data `k·x − n·y = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedFraction {
    pub k: BigInt,
    pub n: BigInt,
    pub x: BigInt,
    pub y: BigInt,
}

impl ReducedFraction {
    pub fn r(&self) -> Rational {
        Rational::new(self.k.clone(), self.n.clone())
    }

    /// `r* = x/n`.
    pub fn dual(&self) -> Rational {
        Rational::new(self.x.clone(), self.n.clone())
    }

    /// `[[k, y], [n, x]]`.
    pub fn matrix(&self) -> SL2ZMat {
        SL2ZMat::new(
            self.k.clone(),
            self.y.clone(),
            self.n.clone(),
            self.x.clone(),
        )
        .expect("Bezout data has determinant 1")
    }

    /// The other Bezout pair `(x + n·t, y + k·t)`.
    pub fn shifted(&self, t: i64) -> Self {
        ReducedFraction {
            k: self.k.clone(),
            n: self.n.clone(),
            x: &self.x + &self.n * t,
            y: &self.y + &self.k * t,
        }
    }
}

/// Bezout data with `0 ≤ x < n`.
pub fn bezout(r: &Rational) -> ReducedFraction {
    let k = r.numer().clone();
    let n = r.denom().clone();
    let (_, u, _) = ext_gcd(&k, &n);
    let x = u.mod_floor(&n);
    let y = (&k * &x - BigInt::one()) / &n;
    ReducedFraction { k, n, x, y }
}

/// `r*` reduced into `[0, 1)`.
pub fn dual(r: &Rational) -> Rational {
    frac(&bezout(r).dual())
}

/// Representative of `q` mod 1 in `[0, 1)`.
pub fn frac(q: &Rational) -> Rational {
    q - q.floor()
}

/// `Λ(r) = T^{−r} D(m) T^{−r*}`.
pub fn lambda_mat(md: &ModularData, r: &Rational) -> CMatrix {
    lambda_with(md, &bezout(r))
}

pub fn lambda_with(md: &ModularData, b: &ReducedFraction) -> CMatrix {
    rep_evaluate(md, &b.matrix())
        .phase_rows(&t_exponents(md, &-b.r()))
        .phase_cols(&t_exponents(md, &-b.dual()))
}

/// `−(c − c₀)/24 · (3nk − (n² + k² + 1)/(nk))`.
pub fn reciprocity_rhs(c: &Rational, c0: &Rational, k: &BigInt, n: &BigInt) -> Rational {
    let nk = k * n;
    let inner = Rational::from_integer(BigInt::from(3) * &nk)
        - Rational::new(n * n + k * k + BigInt::one(), nk);
    -(c - c0) / Rational::from_integer(24.into()) * inner
}

fn check_phase_constraint(c: &Rational, c0: &Rational) -> Result<()> {
    let diff = c - c0;
    if (&diff / Rational::from_integer(4.into())).is_integer() {
        Ok(())
    } else {
        Err(Error::PhaseConstraint(diff.to_string()))
    }
}

/// `g(r)` in `[0, 1)` by the Euclidean recursion on `[0, 1)` representatives.
pub fn phase_g(c: &Rational, c0: &Rational, r: &Rational) -> Result<Rational> {
    check_phase_constraint(c, c0)?;
    let mut acc = Rational::zero();
    let mut sign = Rational::one();
    let mut cur = frac(r);
    while !cur.is_zero() {
        // cur = k/n with 0 < k < n; g(k/n) = R(k, n) − g(n/k)
        let (k, n) = (cur.numer().clone(), cur.denom().clone());
        acc += &sign * reciprocity_rhs(c, c0, &k, &n);
        sign = -sign;
        cur = frac(&Rational::new(n, k));
    }
    Ok(frac(&acc))
}

/// `g(r)` by a recursion on centred representatives in `(−1/2, 1/2]`.
pub fn phase_g_centered(c: &Rational, c0: &Rational, r: &Rational) -> Result<Rational> {
    check_phase_constraint(c, c0)?;
    let half = rat(1, 2);
    let centre = |q: &Rational| {
        let f = frac(q);
        if f > half {
            f - Rational::one()
        } else {
            f
        }
    };
    let mut acc = Rational::zero();
    let mut sign = Rational::one();
    let mut cur = centre(r);
    while !cur.is_zero() {
        let (k, n) = (cur.numer().clone(), cur.denom().clone());
        acc += &sign * reciprocity_rhs(c, c0, &k, &n);
        sign = -sign;
        cur = centre(&Rational::new(n, k));
    }
    Ok(frac(&acc))
}

/// `Λ̂(r) = exp(2πi g(r))·Λ(r)`, and `S` at integers.
pub fn lambda_hat(md: &ModularData, c: &Rational, r: &Rational) -> Result<CMatrix> {
    if r.is_integer() {
        check_phase_constraint(c, md.c0())?;
        return Ok(md.s().clone());
    }
    let g = phase_g(c, md.c0(), r)?;
    Ok(lambda_mat(md, r).map(|x| x.times_root_of_unity(&g)))
}

fn record(rep: &mut Report, check: &str, params: &str, res: Option<String>) {
    rep.push(
        "lambda",
        check,
        params,
        res.is_none(),
        res.unwrap_or_default(),
    );
}

fn record_eq(rep: &mut Report, check: &str, params: &str, lhs: &CMatrix, rhs: &CMatrix) {
    record(rep, check, params, mismatch(lhs, rhs));
}

/// The exact identity suite for `Λ` and `Λ̂` at `r`.
pub fn verify_lambda_identities(md: &ModularData, c: &Rational, r: &Rational) -> Result<Report> {
    let mut rep = Report::new();
    let p = format!("r={r}");
    let s = md.s();
    let s_inv = md.s_inv();
    let n_rank = md.rank();
    let lam = lambda_mat(md, r);
    let b = bezout(r);

    record_eq(
        &mut rep,
        "Lambda(0) = S",
        "",
        &lambda_mat(md, &Rational::zero()),
        s,
    );
    record_eq(
        &mut rep,
        "Lambda(r+1) = Lambda(r)",
        &p,
        &lambda_mat(md, &(r + Rational::one())),
        &lam,
    );
    for t in [1, -3] {
        record_eq(
            &mut rep,
            "Bezout independence",
            &format!("{p} t={t}"),
            &lambda_with(md, &b.shifted(t)),
            &lam,
        );
    }
    if r.is_positive() && r.numer().is_one() {
        // Λ(1/n) = T^{−1/n} S⁻¹ T^{−n} S T^{−1/n}
        let n = Rational::from_integer(r.denom().clone());
        let edge = t_exponents(md, &-r.clone());
        let rhs = s_inv
            .phase_cols(&t_exponents(md, &-n))
            .mul(s)
            .phase_rows(&edge)
            .phase_cols(&edge);
        record_eq(&mut rep, "Lambda(1/n)", &p, &lam, &rhs);
    }
    if r.is_positive() {
        // Λ(−1/r) = T^{1/r} S T^r Λ(r) T^{1/(kn)}
        let inv_r = r.recip();
        let kn = Rational::new(BigInt::one(), r.numer() * r.denom());
        let lhs = lambda_mat(md, &-inv_r.clone());
        let rhs = s
            .phase_cols(&t_exponents(md, r))
            .mul(&lam)
            .phase_rows(&t_exponents(md, &inv_r))
            .phase_cols(&t_exponents(md, &kn));
        record_eq(&mut rep, "functional equation", &p, &lhs, &rhs);
    }
    record_eq(
        &mut rep,
        "Lambda(r*) = Lambda(r)^T",
        &p,
        &lambda_mat(md, &b.dual()),
        &lam.transpose(),
    );
    let cm = md.conj_matrix();
    record_eq(
        &mut rep,
        "Lambda(-r) = C conj(Lambda(r))",
        &p,
        &lambda_mat(md, &-r.clone()),
        &cm.mul(&lam.conj()),
    );

    let hat = lambda_hat(md, c, r)?;
    record_eq(
        &mut rep,
        "Lambda-hat unitary",
        &p,
        &hat.mul(&hat.dagger()),
        &CMatrix::identity(n_rank),
    );
    record_eq(
        &mut rep,
        "Lambda-hat(r) = Lambda-hat(r*)^T",
        &p,
        &hat,
        &lambda_hat(md, c, &b.dual())?.transpose(),
    );
    record_eq(
        &mut rep,
        "Lambda-hat(1-r) = conj(C Lambda-hat(r))",
        &p,
        &lambda_hat(md, c, &(Rational::one() - r))?,
        &cm.mul(&hat).conj(),
    );

    let c0 = md.c0();
    let g = phase_g(c, c0, r)?;
    let g_dual = phase_g(c, c0, &b.dual())?;
    let g_neg = phase_g(c, c0, &-r.clone())?;
    let g_alt = phase_g_centered(c, c0, r)?;
    let show = |x: &Rational, y: &Rational| (x != y).then(|| format!("{x} vs {y}"));
    record(&mut rep, "g(r*) = g(r)", &p, show(&g_dual, &g));
    record(
        &mut rep,
        "g(-r) = -g(r)",
        &p,
        show(&g_neg, &frac(&-g.clone())),
    );
    record(&mut rep, "g path independence", &p, show(&g_alt, &g));
    Ok(rep)
}

/// The functional equation for `Λ̂`:
/// `Λ̂(−n/k) = E·T^{n/k} S T^{k/n} Λ̂(k/n) T^{1/(kn)}` with
/// `E = exp(2πi (c − c₀)(3nk − (n² + k² + 1)/(nk))/24)`.
pub fn keyeq_check(md: &ModularData, c: &Rational, k: i64, n: i64) -> Result<Report> {
    let mut rep = Report::new();
    let p = format!("k={k} n={n}");
    let r = rat(k, n);
    let e = -reciprocity_rhs(c, md.c0(), &BigInt::from(k), &BigInt::from(n));
    let lhs = lambda_hat(md, c, &rat(-n, k))?;
    let rhs = md
        .s()
        .phase_cols(&t_exponents(md, &r))
        .mul(&lambda_hat(md, c, &r)?)
        .phase_rows(&t_exponents(md, &rat(n, k)))
        .phase_cols(&t_exponents(md, &rat(1, k * n)))
        .map(|x| x.times_root_of_unity(&e));
    record_eq(&mut rep, "Lambda-hat functional equation", &p, &lhs, &rhs);
    Ok(rep)
}

/// Integer `n` with `r = k/n`, as `u64`.
pub fn denominator(r: &Rational) -> u64 {
    r.denom().to_u64().expect("denominator too large")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular_data::builtin_model;

    #[test]
    fn bezout_examples() {
        let b = bezout(&rat(2, 5));
        assert_eq!(
            (b.k.clone(), b.n.clone(), b.x.clone(), b.y.clone()),
            (2.into(), 5.into(), 3.into(), 1.into())
        );
        assert_eq!(b.dual(), rat(3, 5));
        assert_eq!(bezout(&Rational::zero()).matrix(), SL2ZMat::s());
        let b = bezout(&rat(1, 7));
        assert_eq!(b.matrix(), SL2ZMat::new(1, 0, 7, 1).unwrap());
        let b = bezout(&rat(-3, 4));
        assert!(b.matrix().det().is_one());
    }

    #[test]
    fn phase_values() {
        let (c, c0) = (rat(5, 1), rat(1, 1));
        assert_eq!(
            phase_g(&c, &c0, &Rational::zero()).unwrap(),
            Rational::zero()
        );
        assert_eq!(phase_g(&c, &c0, &rat(1, 2)).unwrap(), rat(1, 2));
        // x = (c − c₀)/4 = 1
        assert_eq!(phase_g(&c, &c0, &rat(1, 3)).unwrap(), frac(&rat(-8, 9)));
        assert_eq!(phase_g(&c, &c0, &rat(2, 3)).unwrap(), rat(8, 9));
        assert_eq!(phase_g(&c, &c0, &rat(2, 5)).unwrap(), Rational::zero());
        assert_eq!(phase_g(&c, &c0, &rat(3, 5)).unwrap(), Rational::zero());
        for r in [rat(1, 3), rat(5, 7), rat(-2, 9)] {
            assert_eq!(phase_g(&c0, &c0, &r).unwrap(), Rational::zero());
        }
        assert!(matches!(
            phase_g(&rat(1, 1), &rat(0, 1), &rat(1, 2)),
            Err(Error::PhaseConstraint(_))
        ));
    }

    #[test]
    fn lambda_basics() {
        let md = builtin_model("su2:1").unwrap();
        assert_eq!(lambda_mat(&md, &Rational::zero()), *md.s());
        assert_eq!(lambda_hat(&md, md.c(), &rat(3, 1)).unwrap(), *md.s());
        let rep = verify_lambda_identities(&md, md.c(), &rat(1, 2)).unwrap();
        assert!(rep.all_pass(), "{}", rep.failure_summary());
    }
}
