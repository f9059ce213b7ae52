//! The Galois action on modular data: `σ_l` on matrices, the signed
//! permutations `G_l`, the congruence kernel and the diagonal matrices
//! `Z_l(r)` relating `σ_l(Λ̂(r))` to `Λ̂(lr)`.

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclo::{CycloNum, Rational};
use crate::error::{Error, Result};
use crate::lambda::{denominator, dual, lambda_hat};
use crate::matrix::{mismatch, CMatrix};
use crate::modrep::{
    in_gamma, lift, mod_inverse, rep_evaluate, sample_gamma, sample_gamma1_not_gamma, sample_sl2z,
    tau_l, Lcg, SL2ZMat,
};
use crate::modular_data::{t_exponents, t_power, ModularData};
use crate::report::Report;

/// How far past `l` the lift search runs before giving up.
const LIFT_SEARCH: i64 = 100_000;

/// Smallest `l' ≥ l` with `l' ≡ l mod modulus` and `gcd(l', w) = 1`.
pub fn sigma_lift(l: i64, modulus: u64, w: u64) -> Result<i64> {
    if l.gcd(&(modulus as i64)) != 1 {
        return Err(Error::NotCoprime { l, modulus });
    }
    let step = modulus as i64;
    let mut cand = l;
    for _ in 0..LIFT_SEARCH {
        if cand.gcd(&(w as i64)) == 1 {
            return Ok(cand);
        }
        cand += step;
    }
    Err(Error::LiftNotFound {
        l,
        modulus,
        order: w,
    })
}

/// `σ_l` applied entrywise, where `l` only matters modulo `conductor`.
///
/// The entries are assumed to lie in `Q[ζ_conductor]`; the actual
/// automorphism used is `σ_{l'}` on the ambient order of the matrix.
pub fn sigma_matrix(l: i64, m: &CMatrix, conductor: u64) -> Result<CMatrix> {
    let w = m.order() as u64;
    let lp = sigma_lift(l, conductor, w)?;
    m.galois(lp)
}

/// A signed permutation matrix `(G)_{λμ} = ε(μ)·δ_{λ,π(μ)}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialSignedPerm {
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
}

impl MonomialSignedPerm {
    pub fn identity(n: usize) -> Self {
        MonomialSignedPerm {
            perm: (0..n).collect(),
            signs: vec![1; n],
        }
    }

    pub fn to_matrix(&self) -> CMatrix {
        let n = self.perm.len();
        CMatrix::from_fn(n, |i, j| {
            if self.perm[j] == i {
                CycloNum::from_int(self.signs[j] as i64)
            } else {
                CycloNum::from_int(0)
            }
        })
    }

    /// The signed permutation of the product `self · other`.
    pub fn compose(&self, other: &Self) -> Self {
        let perm = other.perm.iter().map(|&j| self.perm[j]).collect();
        let signs = other
            .perm
            .iter()
            .zip(&other.signs)
            .map(|(&j, &s)| self.signs[j] * s)
            .collect();
        MonomialSignedPerm { perm, signs }
    }

    pub fn inverse(&self) -> Self {
        let n = self.perm.len();
        let mut perm = vec![0; n];
        let mut signs = vec![1; n];
        for (j, &i) in self.perm.iter().enumerate() {
            perm[i] = j;
            signs[i] = self.signs[j];
        }
        MonomialSignedPerm { perm, signs }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p) && self.signs.iter().all(|&s| s == 1)
    }
}

/// Finds `π_l`, `ε_l` with `σ_l(S_{λμ}) = ε_l(μ)·S_{λ,π_l(μ)}` and checks
/// `σ_l(S) = S·G_l = G_l⁻¹·S`.
pub fn parity_decompose(md: &ModularData, l: i64) -> Result<MonomialSignedPerm> {
    let n = md.t_order();
    let s = md.s();
    let sl = sigma_matrix(l, s, n)?;
    let rank = md.rank();
    let col = |m: &CMatrix, j: usize| -> Vec<CycloNum> {
        (0..rank).map(|i| m.get(i, j).clone()).collect()
    };
    let s_cols: Vec<Vec<CycloNum>> = (0..rank).map(|j| col(s, j)).collect();
    let neg_cols: Vec<Vec<CycloNum>> = s_cols
        .iter()
        .map(|c| c.iter().map(|x| -x).collect())
        .collect();
    let mut perm = Vec::with_capacity(rank);
    let mut signs = Vec::with_capacity(rank);
    for mu in 0..rank {
        let target = col(&sl, mu);
        let mut hits = Vec::new();
        for nu in 0..rank {
            if target == s_cols[nu] {
                hits.push((nu, 1i8));
            }
            if target == neg_cols[nu] {
                hits.push((nu, -1i8));
            }
        }
        match hits.as_slice() {
            [(nu, e)] => {
                perm.push(*nu);
                signs.push(*e);
            }
            _ => return Err(Error::NoMonomialStructure(l)),
        }
    }
    let mut seen = vec![false; rank];
    for &p in &perm {
        if std::mem::replace(&mut seen[p], true) {
            return Err(Error::NoMonomialStructure(l));
        }
    }
    let g = MonomialSignedPerm { perm, signs };
    let gm = g.to_matrix();
    if s.mul(&gm) != sl || g.inverse().to_matrix().mul(s) != sl {
        return Err(Error::NoMonomialStructure(l));
    }
    Ok(g)
}

/// `G_{lm} = G_l·G_m` as a report record.
pub fn multiplicativity_check(md: &ModularData, l: i64, m: i64) -> Report {
    let mut rep = Report::new();
    let p = format!("l={l} m={m}");
    let res = (|| -> Result<Option<String>> {
        let n = md.t_order() as i64;
        let gl = parity_decompose(md, l)?;
        let gm = parity_decompose(md, m)?;
        let glm = parity_decompose(md, (l * m).rem_euclid(n))?;
        let prod = gl.compose(&gm);
        Ok((prod != glm).then(|| format!("{:?} vs {:?}", prod, glm)))
    })();
    let (pass, w) = match res {
        Ok(None) => (true, String::new()),
        Ok(Some(w)) => (false, w),
        Err(e) => (false, e.to_string()),
    };
    rep.push("galois", "G_lm = G_l G_m", p, pass, w);
    rep
}

fn record(rep: &mut Report, suite: &str, check: &str, params: &str, res: Option<String>) {
    rep.push(suite, check, params, res.is_none(), res.unwrap_or_default());
}

/// `σ_l(T) = T^l`, `G_l⁻¹TG_l = T^{l²}` and `G_l = S⁻¹T^lST^{l̂}ST^l`.
pub fn verify_galois_identities(md: &ModularData, l: i64) -> Report {
    let mut rep = Report::new();
    let suite = "galois";
    let p = format!("l={l}");
    let n = md.t_order();
    let t = CMatrix::diag(&md.t());
    let lr = Rational::from_integer(l.into());
    let t_l = t_power(md, &lr);
    match sigma_matrix(l, &t, n) {
        Ok(st) => record(
            &mut rep,
            suite,
            "sigma_l(T) = T^l",
            &p,
            mismatch(&st, &CMatrix::diag(&t_l)),
        ),
        Err(e) => rep.push(suite, "sigma_l(T) = T^l", p.clone(), false, e.to_string()),
    }
    let g = match parity_decompose(md, l) {
        Ok(g) => g,
        Err(e) => {
            rep.push(
                suite,
                "parity decomposition",
                p.clone(),
                false,
                e.to_string(),
            );
            return rep;
        }
    };
    rep.push(suite, "parity decomposition", p.clone(), true, "");
    let gm = g.to_matrix();
    let ginv = g.inverse().to_matrix();
    let conj_t = ginv.mul(&t).mul(&gm);
    let t_l2 = CMatrix::diag(&t_power(md, &Rational::from_integer((l * l).into())));
    record(
        &mut rep,
        suite,
        "G_l^-1 T G_l = T^(l^2)",
        &p,
        mismatch(&conj_t, &t_l2),
    );

    let lhat = mod_inverse(l, n).expect("coprimality checked by parity_decompose");
    let e_l = t_exponents(md, &lr);
    let e_lhat = t_exponents(md, &Rational::from_integer(lhat.into()));
    let s = md.s();
    let rhs = md
        .s_inv()
        .phase_cols(&e_l)
        .mul(s)
        .phase_cols(&e_lhat)
        .mul(s)
        .phase_cols(&e_l);
    record(
        &mut rep,
        suite,
        "G_l = S^-1 T^l S T^lhat S T^l",
        &p,
        mismatch(&gm, &rhs),
    );
    rep
}

/// Outcome of [`kernel_test`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelOutcome {
    /// `D(m) = I`.
    pub direct: bool,
    /// `σ_d(S)·T^b = T^e·S`, when `gcd(d, N) = 1`.
    pub criterion: Option<bool>,
    /// `σ_d(D(m)) = T^b·S⁻¹·T^{−e}·σ_d(S)`, when `gcd(d, N) = 1`.
    pub dm3: Option<bool>,
}

fn residue(x: &num_bigint::BigInt, n: u64) -> i64 {
    x.mod_floor(&n.into()).to_i64().unwrap_or(0)
}

pub fn kernel_test(md: &ModularData, m: &SL2ZMat) -> KernelOutcome {
    let n = md.t_order();
    let dm = rep_evaluate(md, m);
    let direct = dm.is_identity();
    let d = residue(&m.d, n);
    if d.gcd(&(n as i64)) != 1 {
        return KernelOutcome {
            direct,
            criterion: None,
            dm3: None,
        };
    }
    let b = Rational::from_integer(residue(&m.b, n).into());
    let e = Rational::from_integer(residue(&m.e, n).into());
    let s = md.s();
    let sd = sigma_matrix(d, s, n).expect("d coprime to the conductor");
    let criterion = sd.phase_cols(&t_exponents(md, &b)) == s.phase_rows(&t_exponents(md, &e));
    let lhs = sigma_matrix(d, &dm, n).expect("d coprime to the conductor");
    let rhs = md
        .s_inv()
        .phase_rows(&t_exponents(md, &b))
        .phase_cols(&t_exponents(md, &-e))
        .mul(&sd);
    KernelOutcome {
        direct,
        criterion: Some(criterion),
        dm3: Some(lhs == rhs),
    }
}

/// Sample counts for [`congruence_suite`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceConfig {
    /// Elements of `Γ(N)` checked to act trivially.
    pub gamma_samples: usize,
    /// Random elements with `gcd(d, N) = 1` for the kernel criterion.
    pub kernel_samples: usize,
    /// Random elements per `l` for `σ_l∘D = D∘τ_l`.
    pub equivariance_samples: usize,
    /// Elements of `Γ₁(N) \ Γ(N)` checked to act nontrivially.
    pub gamma1_samples: usize,
    pub ls: Vec<i64>,
    pub seed: u64,
}

impl CongruenceConfig {
    pub fn uniform(samples: usize, seed: u64, ls: Vec<i64>) -> Self {
        CongruenceConfig {
            gamma_samples: samples,
            kernel_samples: samples,
            equivariance_samples: samples,
            gamma1_samples: samples,
            ls,
            seed,
        }
    }
}

/// Entry size bound for random `SL(2, Z)` elements.
const SAMPLE_BOUND: i64 = 40;

/// Seeded checks of the congruence property of the kernel of `D`.
pub fn congruence_suite(md: &ModularData, cfg: &CongruenceConfig) -> Report {
    let mut rep = Report::new();
    let suite = "congruence";
    let n = md.t_order();
    let mut rng = Lcg::new(cfg.seed);

    let mut fails = Vec::new();
    for i in 0..cfg.gamma_samples {
        let m = sample_gamma(n, &mut rng);
        if !rep_evaluate(md, &m).is_identity() {
            fails.push(format!("#{i} {m}"));
        }
    }
    push_batch(
        &mut rep,
        suite,
        "Gamma(N) acts trivially",
        n,
        cfg.gamma_samples,
        fails,
    );

    // Every fourth element comes from Γ(N) so that both sides of the
    // equivalence occur.
    let (mut fails, mut dm3_fails, mut hits) = (Vec::new(), Vec::new(), 0usize);
    let mut i = 0;
    while i < cfg.kernel_samples {
        let m = if i % 4 == 3 {
            sample_gamma(n, &mut rng)
        } else {
            sample_sl2z(SAMPLE_BOUND, &mut rng)
        };
        let out = kernel_test(md, &m);
        let (Some(crit), Some(dm3)) = (out.criterion, out.dm3) else {
            continue;
        };
        hits += out.direct as usize;
        if crit != out.direct {
            fails.push(format!("#{i} {m} direct={} criterion={crit}", out.direct));
        }
        if !dm3 {
            dm3_fails.push(format!("#{i} {m}"));
        }
        i += 1;
    }
    push_batch(
        &mut rep,
        suite,
        "kernel criterion equivalence",
        n,
        cfg.kernel_samples,
        fails,
    );
    push_batch(
        &mut rep,
        suite,
        "sigma_d(D(m)) identity",
        n,
        cfg.kernel_samples,
        dm3_fails,
    );
    rep.notice(
        suite,
        format!("N={n}"),
        format!(
            "{hits} of {} kernel samples act trivially",
            cfg.kernel_samples
        ),
    );

    for &l in &cfg.ls {
        if l.gcd(&(n as i64)) != 1 {
            rep.notice(
                suite,
                format!("N={n} l={l}"),
                format!("l={l} skipped, not coprime to {n}"),
            );
            continue;
        }
        let mut fails = Vec::new();
        for i in 0..cfg.equivariance_samples {
            let m = sample_sl2z(SAMPLE_BOUND, &mut rng);
            let lhs = sigma_matrix(l, &rep_evaluate(md, &m), n).expect("l coprime to N");
            let tm = lift(&tau_l(&m, l, n).expect("l coprime to N"));
            if lhs != rep_evaluate(md, &tm) {
                fails.push(format!("#{i} {m}"));
            }
        }
        push_batch(
            &mut rep,
            suite,
            "sigma_l D = D tau_l",
            n,
            cfg.equivariance_samples,
            fails,
        );
    }

    if n >= 2 {
        let mut fails = Vec::new();
        for i in 0..cfg.gamma1_samples {
            let m = sample_gamma1_not_gamma(n, &mut rng);
            debug_assert!(!in_gamma(n, &m));
            if rep_evaluate(md, &m).is_identity() {
                fails.push(format!("#{i} {m}"));
            }
        }
        push_batch(
            &mut rep,
            suite,
            "Gamma1(N) minus Gamma(N) acts nontrivially",
            n,
            cfg.gamma1_samples,
            fails,
        );
    } else {
        rep.notice(suite, "N=1", "Gamma1(1) = Gamma(1), nothing to sample");
    }
    rep
}

fn push_batch(
    rep: &mut Report,
    suite: &str,
    check: &str,
    n: u64,
    count: usize,
    fails: Vec<String>,
) {
    let witness = match fails.first() {
        Some(f) => format!("{} failures, first {f}", fails.len()),
        None => String::new(),
    };
    rep.push(
        suite,
        check,
        format!("N={n} samples={count}"),
        fails.is_empty(),
        witness,
    );
}

/// Modulus that fixes `σ_l` on the entries of `Λ̂(r)`.
fn lambda_modulus(md: &ModularData, r: &Rational) -> u64 {
    let den = denominator(r);
    (den * md.t_order()).lcm(&(24 * den))
}

/// `σ_l` on `Λ̂(r)`; `l` must be coprime to `denominator(r)·N` and to 6.
fn sigma_lambda_hat(md: &ModularData, c: &Rational, l: i64, r: &Rational) -> Result<CMatrix> {
    let hat = lambda_hat(md, c, r)?;
    let modulus = lambda_modulus(md, r);
    let lp = sigma_lift(l, modulus, hat.order() as u64)?;
    hat.galois(lp)
}

/// `Z_l(ρ)`, extracted from `σ_l(Λ̂(r)) = Λ̂(lr)·G_l·Z_l(r*)` at `r = ρ*`.
pub fn z_matrix(md: &ModularData, c: &Rational, l: i64, rho: &Rational) -> Result<CMatrix> {
    let r = dual(rho);
    let lr = Rational::from_integer(l.into()) * &r;
    let g = parity_decompose(md, l)?;
    let sl = sigma_lambda_hat(md, c, l, &r)?;
    let z = g
        .inverse()
        .to_matrix()
        .mul(&lambda_hat(md, c, &lr)?.dagger())
        .mul(&sl);
    if !z.is_diagonal() {
        return Err(Error::NotDiagonal(format!("Z_{l}({rho})")));
    }
    let den = denominator(rho) as i64;
    for (i, x) in z.diagonal().iter().enumerate() {
        if !x.pow(den)?.is_one() {
            return Err(Error::NotDiagonal(format!(
                "Z_{l}({rho}) entry {i} has order not dividing {den}"
            )));
        }
    }
    Ok(z)
}

fn diag_pow(z: &CMatrix, e: i64) -> Result<CMatrix> {
    let d = z
        .diagonal()
        .iter()
        .map(|x| x.pow(e))
        .collect::<Result<Vec<_>>>()?;
    Ok(CMatrix::diag(&d))
}

/// The identities of the `Z_l` matrices at `(l, m, r)`: extraction,
/// periodicity, cocycle and power law.
pub fn z_report(md: &ModularData, c: &Rational, l: i64, m: i64, r: &Rational) -> Report {
    let mut rep = Report::new();
    let suite = "zmatrix";
    let p = format!("l={l} m={m} r={r}");
    let res = (|| -> Result<()> {
        let zl = z_matrix(md, c, l, r)?;
        rep.push(
            suite,
            "Z_l(r) diagonal of order dividing den(r)",
            p.clone(),
            true,
            "",
        );

        let n_rank = md.rank();
        let z0 = z_matrix(md, c, l, &Rational::zero())?;
        record(
            &mut rep,
            suite,
            "Z_l(0) = I",
            &p,
            mismatch(&z0, &CMatrix::identity(n_rank)),
        );
        let z1 = z_matrix(md, c, l, &(r + Rational::from_integer(1.into())))?;
        record(&mut rep, suite, "Z_l(r+1) = Z_l(r)", &p, mismatch(&z1, &zl));

        let den = denominator(r);
        let lhat = mod_inverse(l, den)? as i64;
        let g = parity_decompose(md, l)?.to_matrix();
        let ginv = g.transpose();
        let zm = z_matrix(md, c, m, &(Rational::from_integer(lhat.into()) * r))?;
        let lhs = ginv.mul(&zm).mul(&g);
        let zlm = z_matrix(md, c, l * m, r)?;
        let rhs = zlm.mul(&diag_pow(&zl, -m)?);
        record(&mut rep, suite, "Z cocycle", &p, mismatch(&lhs, &rhs));

        for k in [-1i64, 2, 5, 7, 11, 13] {
            if k.gcd(&(den as i64)) != 1 {
                continue;
            }
            let lhs = diag_pow(&zl, k)?;
            let rhs = z_matrix(md, c, l, &(Rational::from_integer(k.into()) * r))?;
            record(
                &mut rep,
                suite,
                "Z power law",
                &format!("{p} n={k}"),
                mismatch(&lhs, &rhs),
            );
        }
        Ok(())
    })();
    if let Err(e) = res {
        rep.push(suite, "Z extraction", p, false, e.to_string());
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::rat;
    use crate::modular_data::builtin_model;

    #[test]
    fn sigma_examples() {
        let md = builtin_model("su2:1").unwrap();
        let n = md.t_order();
        assert_eq!(n, 24);
        assert_eq!(sigma_matrix(1, md.s(), n).unwrap(), *md.s());
        assert_eq!(sigma_matrix(5, md.s(), n).unwrap(), md.s().neg());
        let rational = CMatrix::identity(3).scale(&CycloNum::from_rational(&rat(2, 3)));
        assert_eq!(sigma_matrix(7, &rational, n).unwrap(), rational);
        assert!(matches!(
            sigma_matrix(4, md.s(), n),
            Err(Error::NotCoprime { .. })
        ));
    }

    #[test]
    fn parity_examples() {
        let md = builtin_model("su2:1").unwrap();
        assert!(parity_decompose(&md, 1).unwrap().is_identity());
        let g5 = parity_decompose(&md, 5).unwrap();
        assert_eq!(g5.perm, vec![0, 1]);
        assert_eq!(g5.signs, vec![-1, -1]);

        let md = builtin_model("su2:2").unwrap();
        let g7 = parity_decompose(&md, 7).unwrap();
        assert!(g7.compose(&g7).is_identity());
        assert!(parity_decompose(&md, 49 % 16).unwrap().is_identity());
        assert!(multiplicativity_check(&md, 3, 7).all_pass());
    }

    #[test]
    fn galois_identities_small() {
        for (name, ls) in [
            ("su2:1", vec![1, 5, 7, 11, 13]),
            ("su2:2", vec![3, 5, 7, 9, 15]),
        ] {
            let md = builtin_model(name).unwrap();
            for l in ls {
                let rep = verify_galois_identities(&md, l);
                assert!(rep.all_pass(), "{name} {}", rep.failure_summary());
            }
        }
    }

    #[test]
    fn kernel_examples() {
        let md = builtin_model("su2:1").unwrap();
        let out = kernel_test(&md, &SL2ZMat::t_pow(24));
        assert!(out.direct && out.criterion == Some(true) && out.dm3 == Some(true));
        assert!(kernel_test(&md, &SL2ZMat::minus_identity()).direct);
        let out = kernel_test(&md, &SL2ZMat::s());
        assert!(!out.direct);
    }

    #[test]
    fn congruence_small() {
        let md = builtin_model("su2:1").unwrap();
        let rep = congruence_suite(&md, &CongruenceConfig::uniform(20, 1, vec![5, 7, 4]));
        assert!(rep.all_pass(), "{}", rep.failure_summary());
        assert!(rep
            .records
            .iter()
            .any(|r| r.witness.contains("l=4 skipped")));
        let triv = builtin_model("trivial").unwrap();
        assert!(congruence_suite(&triv, &CongruenceConfig::uniform(5, 1, vec![1])).all_pass());
    }

    #[test]
    fn z_examples() {
        let md = builtin_model("su2:1").unwrap();
        let z = z_matrix(&md, md.c(), 5, &rat(1, 2)).unwrap();
        for x in z.diagonal() {
            assert!(x == CycloNum::from_int(1) || x == CycloNum::from_int(-1));
        }
        let rep = z_report(&md, md.c(), 5, 7, &rat(1, 2));
        assert!(rep.all_pass(), "{}", rep.failure_summary());
    }
}
