//! Sector data of the cyclic permutation orbifold of order `N`: the labels
//! `(λ, gⁿ, k)`, the `S` entries with at least one twist coprime to `N`,
//! twisted `T` entries and quantum dimensions, and the multiplicities of the
//! `n`-th power of the fundamental soliton.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclo::{CycloNum, Rational};
use crate::error::{Error, Result};
use crate::lambda::lambda_hat;
use crate::matrix::{mismatch, CMatrix};
use crate::modrep::mod_inverse;
use crate::modular_data::{qdim, simple_current_action, verlinde, ModularData};
use crate::report::Report;

/// A sector `(λ, gⁿ, k)` with `0 ≤ twist, charge < N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrbLabel {
    pub base: usize,
    pub twist: u64,
    pub charge: u64,
}

impl OrbLabel {
    pub fn new(base: usize, twist: u64, charge: u64) -> Self {
        OrbLabel {
            base,
            twist,
            charge,
        }
    }
}

impl std::fmt::Display for OrbLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},g^{},{})", self.base, self.twist, self.charge)
    }
}

/// Which twist feeds the `Λ̂` argument of an entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// `(1/N)ζ_N^{−(km+ln)}Λ̂_{λμ}(m·n̂/N)` with `n` the row twist.
    Row,
    /// The same formula applied to the transposed entry.
    Column,
}

/// The `N`-cycle orbifold over a parent datum.
#[derive(Debug)]
pub struct OrbSlice {
    parent: ModularData,
    order: u64,
    c: Rational,
    tau_action: Vec<usize>,
    hats: Vec<OnceLock<CMatrix>>,
}

impl OrbSlice {
    /// Uses the parent's central charge.
    pub fn new(parent: ModularData, order: u64) -> Result<Self> {
        let c = parent.c().clone();
        Self::with_c(parent, order, c)
    }

    pub fn with_c(parent: ModularData, order: u64, c: Rational) -> Result<Self> {
        if order < 2 {
            return Err(Error::OutOfScope(format!("cycle order {order} < 2")));
        }
        let tau = if order.is_multiple_of(2) {
            parent.tau2()
        } else {
            0
        };
        let tau_action = simple_current_action(&parent, tau).ok_or_else(|| {
            Error::OutOfScope(format!("label {tau} does not act as a simple current"))
        })?;
        Ok(OrbSlice {
            parent,
            order,
            c,
            tau_action,
            hats: (0..order).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn parent(&self) -> &ModularData {
        &self.parent
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    /// `c₀` of the orbifold, `N` times that of the parent.
    pub fn c0(&self) -> Rational {
        self.parent.c0() * Rational::from_integer(self.order.into())
    }

    /// The label playing the role of `τ_N`.
    pub fn tau(&self) -> usize {
        if self.order.is_multiple_of(2) {
            self.parent.tau2()
        } else {
            0
        }
    }

    /// Human-readable description of the active `τ_N` convention.
    pub fn tau_convention(&self) -> String {
        if self.order.is_multiple_of(2) {
            format!("tau_N = tau2 = {}", self.parent.labels()[self.tau()])
        } else {
            "tau_N = vacuum (N odd)".to_string()
        }
    }

    /// Cyclotomic order large enough for `T^{1/N}`, `ζ_N` charges and the
    /// `(c − c₀)` phases.
    pub fn working_order(&self) -> u64 {
        let n = self.order;
        let nt = self.parent.t_order();
        (nt * n).lcm(&(2 * n * n)).lcm(&(6 * n))
    }

    fn coprime(&self, twist: u64) -> bool {
        twist.gcd(&self.order) == 1
    }

    /// `Λ̂(j/N)`, cached by `j mod N`.
    pub fn lambda_hat_at(&self, j: u64) -> Result<&CMatrix> {
        let j = j % self.order;
        if let Some(m) = self.hats[j as usize].get() {
            return Ok(m);
        }
        let r = Rational::new(BigInt::from(j), BigInt::from(self.order));
        let m = lambda_hat(&self.parent, &self.c, &r)?;
        Ok(self.hats[j as usize].get_or_init(|| m))
    }

    fn zeta(&self, e: i128) -> Rational {
        let n = self.order as i128;
        Rational::new(BigInt::from(e.rem_euclid(n)), BigInt::from(n))
    }

    fn check_label(&self, a: &OrbLabel) -> Result<()> {
        if a.base >= self.parent.rank() {
            return Err(Error::BadLabel(a.base));
        }
        if a.twist >= self.order || a.charge >= self.order {
            return Err(Error::OutOfScope(format!(
                "label {a} has twist or charge outside 0..{}",
                self.order
            )));
        }
        Ok(())
    }
}

/// `𝒥` and the subset `𝒥₀` of labels whose twist is coprime to `N`.
pub fn sector_set(slice: &OrbSlice) -> (Vec<OrbLabel>, Vec<OrbLabel>) {
    let n = slice.order;
    let mut all = Vec::new();
    for base in 0..slice.parent.rank() {
        for twist in 0..n {
            for charge in 0..n {
                all.push(OrbLabel::new(base, twist, charge));
            }
        }
    }
    let coprime = all
        .iter()
        .copied()
        .filter(|a| slice.coprime(a.twist))
        .collect();
    (all, coprime)
}

/// `S_{a,b}` for `a`, `b` in `𝒥`, at least one of them in `𝒥₀`.
pub fn orb_s_entry(slice: &OrbSlice, a: &OrbLabel, b: &OrbLabel) -> Result<CycloNum> {
    slice.check_label(a)?;
    slice.check_label(b)?;
    if slice.coprime(a.twist) {
        orb_s_entry_routed(slice, a, b, Route::Row)
    } else if slice.coprime(b.twist) {
        orb_s_entry_routed(slice, a, b, Route::Column)
    } else {
        Err(Error::OutOfScope(format!(
            "S entry {a},{b}: no twist coprime to {}",
            slice.order
        )))
    }
}

/// `S_{a,b}` along a chosen route; the routing twist must be coprime to `N`.
pub fn orb_s_entry_routed(
    slice: &OrbSlice,
    a: &OrbLabel,
    b: &OrbLabel,
    route: Route,
) -> Result<CycloNum> {
    let (row, col) = match route {
        Route::Row => (a, b),
        Route::Column => (b, a),
    };
    let n = slice.order;
    if !slice.coprime(row.twist) {
        return Err(Error::NotCoprime {
            l: row.twist as i64,
            modulus: n,
        });
    }
    let inv_n = Rational::new(BigInt::one(), BigInt::from(n));
    let base = if col.twist == 0 {
        // untwisted column: S_{τ_N λ, μ}
        let (l, k) = (slice.tau_action[row.base], col.base);
        slice.parent.s().get(l, k).clone()
    } else {
        let nhat = mod_inverse(row.twist as i64, n)?;
        let j = (col.twist as u128 * nhat as u128 % n as u128) as u64;
        slice.lambda_hat_at(j)?.get(row.base, col.base).clone()
    };
    let e = row.charge as i128 * col.twist as i128 + col.charge as i128 * row.twist as i128;
    Ok(base.times_root_of_unity(&slice.zeta(-e)).scale_by(&inv_n))
}

trait ScaleBy {
    fn scale_by(&self, q: &Rational) -> CycloNum;
}

impl ScaleBy for CycloNum {
    fn scale_by(&self, q: &Rational) -> CycloNum {
        self * &CycloNum::from_rational(q)
    }
}

/// `T_{(λ,gⁿ,k)} = ζ_N^{nk}·T_λ^{1/N}·exp(2πi(c − c₀)(N − 1/N)/24)`.
pub fn orb_t_entry(slice: &OrbSlice, a: &OrbLabel) -> Result<CycloNum> {
    slice.check_label(a)?;
    if !slice.coprime(a.twist) {
        return Err(Error::OutOfScope(format!(
            "T entry at {a}: twist not coprime"
        )));
    }
    Ok(CycloNum::root_of_unity(&orb_t_exponent(slice, a)))
}

fn orb_t_exponent(slice: &OrbSlice, a: &OrbLabel) -> Rational {
    let md = &slice.parent;
    let n = Rational::from_integer(slice.order.into());
    let c0 = md.c0();
    let h = &md.delta()[a.base] - c0 / Rational::from_integer(24.into());
    let shift = (&slice.c - c0) / Rational::from_integer(24.into()) * (&n - n.recip());
    slice.zeta(a.twist as i128 * a.charge as i128) + h / &n + shift
}

/// Quantum dimension: `d(λ)·μ^{(N−1)/2}` for coprime twist, `d(λ)^N` for
/// untwisted sectors.
pub fn orb_qdim(slice: &OrbSlice, a: &OrbLabel) -> Result<CycloNum> {
    slice.check_label(a)?;
    let md = &slice.parent;
    let d = qdim(md, a.base);
    let n = slice.order as i64;
    if a.twist == 0 {
        return d.pow(n);
    }
    if !slice.coprime(a.twist) {
        return Err(Error::OutOfScope(format!("quantum dimension at {a}")));
    }
    // μ^{1/2} = 1/S₁₁
    Ok(&d * &md.s().get(0, 0).pow(1 - n)?)
}

/// `Σ_{𝒥₀} d² = φ(N)·N·μ^N`, a share of the total `N²μ^N`.
pub fn mu_scaling_check(slice: &OrbSlice) -> Report {
    let mut rep = Report::new();
    let suite = "orbifold";
    let n = slice.order;
    let p = format!("N={n}");
    let res = (|| -> Result<(CycloNum, CycloNum)> {
        let (_, j0) = sector_set(slice);
        let mut sum = CycloNum::from_int(0);
        for a in &j0 {
            let d = orb_qdim(slice, a)?;
            sum = &sum + &(&d * &d);
        }
        let mu = crate::modular_data::mu_index(&slice.parent);
        let mu_n = mu.pow(n as i64)?;
        let phi = j0.len() as i64 / slice.parent.rank() as i64 / n as i64;
        Ok((sum, &mu_n * &CycloNum::from_int(phi * n as i64)))
    })();
    match res {
        Ok((sum, expect)) => {
            let w = format!("{} vs {}", sum.approx_string(6), expect.approx_string(6));
            rep.push(
                suite,
                "sum of d^2 over J0 = phi(N) N mu^N",
                p.clone(),
                sum == expect,
                w,
            );
            let total = (n * n) as f64
                * crate::modular_data::mu_index(&slice.parent)
                    .embed_complex()
                    .re
                    .powi(n as i32);
            let part = sum.embed_complex().re;
            rep.push(
                suite,
                "partial sum <= N^2 mu^N",
                p,
                part <= total * (1.0 + 1e-12),
                format!("{part:.6} <= {total:.6}"),
            );
        }
        Err(e) => rep.push(
            suite,
            "sum of d^2 over J0 = phi(N) N mu^N",
            p,
            false,
            e.to_string(),
        ),
    }
    rep
}

/// Genus attached to the `n`-th power of the fundamental soliton.
pub fn th94_genus(n: usize) -> i64 {
    let n = n as i64;
    (n - 1) * (n - 2) / 2
}

/// `M = Σ_λ S_{1λ}^{2−2g}·Π_i S_{λ_iλ}/S_{1λ}` with `g = (n−1)(n−2)/2`.
pub fn th94_multiplicity(md: &ModularData, labels: &[usize]) -> Result<u64> {
    let n = labels.len();
    if n < 2 {
        return Err(Error::OutOfScope("multiplicity needs n >= 2".to_string()));
    }
    for &l in labels {
        if l >= md.rank() {
            return Err(Error::BadLabel(l));
        }
    }
    let s = md.s();
    let exp = 2 - 2 * th94_genus(n) - n as i64;
    let mut total = CycloNum::from_int(0);
    for lam in 0..md.rank() {
        let mut term = s.get(0, lam).pow(exp)?;
        for &li in labels {
            term = &term * s.get(li, lam);
        }
        total = &total + &term;
    }
    match total.as_integer() {
        Some(v) if !v.is_negative() => v
            .to_u64()
            .ok_or_else(|| Error::NonIntegralMultiplicity(v.to_string())),
        _ => Err(Error::NonIntegralMultiplicity(total.approx_string(6))),
    }
}

/// The same multiplicity as `Tr(N_{λ₁}⋯N_{λₙ}·Ω^{g−1})`, where `N_λ` are the
/// fusion matrices and `Ω = Σ_μ N_μN_μ̄`; needs `g ≥ 1`.
pub fn th94_trace(md: &ModularData, labels: &[usize]) -> Option<BigInt> {
    let g = th94_genus(labels.len());
    if g < 1 {
        return None;
    }
    let r = md.rank();
    let fusion = |l: usize| -> Vec<Vec<BigInt>> {
        (0..r)
            .map(|m| (0..r).map(|k| BigInt::from(md.fusion(l, m, k))).collect())
            .collect()
    };
    let mut acc = identity_int(r);
    for &l in labels {
        acc = mul_int(&acc, &fusion(l));
    }
    let mut omega = vec![vec![BigInt::zero(); r]; r];
    for m in 0..r {
        let prod = mul_int(&fusion(m), &fusion(md.conj()[m]));
        for i in 0..r {
            for j in 0..r {
                omega[i][j] += &prod[i][j];
            }
        }
    }
    for _ in 0..g - 1 {
        acc = mul_int(&acc, &omega);
    }
    Some((0..r).map(|i| acc[i][i].clone()).sum())
}

fn identity_int(r: usize) -> Vec<Vec<BigInt>> {
    (0..r)
        .map(|i| (0..r).map(|j| BigInt::from((i == j) as u8)).collect())
        .collect()
}

fn mul_int(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let r = a.len();
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| (0..r).map(|k| &a[i][k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// All tuples in `0..rank` of length `n`, in lexicographic order.
pub fn label_tuples(rank: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..rank).map(move |l| {
                    let mut t = t.clone();
                    t.push(l);
                    t
                })
            })
            .collect();
    }
    out
}

/// Integrality of the multiplicities over the given tuples, with the
/// `n = 2` delta identity, the `n = 3` fusion comparison and the trace
/// formula as oracles.
pub fn th94_report(md: &ModularData, tuples: &[Vec<usize>]) -> Report {
    let mut rep = Report::new();
    let suite = "th94";
    let mut by_n: std::collections::BTreeMap<usize, [Vec<String>; 4]> = Default::default();
    let mut counts: std::collections::BTreeMap<usize, usize> = Default::default();
    for t in tuples {
        let n = t.len();
        *counts.entry(n).or_default() += 1;
        let fails = by_n.entry(n).or_default();
        let tag = format!("{t:?}");
        let m = match th94_multiplicity(md, t) {
            Ok(m) => m,
            Err(e) => {
                fails[0].push(format!("{tag}: {e}"));
                continue;
            }
        };
        if n == 2 && (m == 1) != (md.conj()[t[0]] == t[1]) {
            fails[1].push(format!("{tag}: M={m}"));
        }
        if n == 3 {
            match verlinde(md, t[0], t[1], md.conj()[t[2]]) {
                Ok(v) if v == m => {}
                Ok(v) => fails[2].push(format!("{tag}: M={m} fusion={v}")),
                Err(e) => fails[2].push(format!("{tag}: {e}")),
            }
        }
        if let Some(tr) = th94_trace(md, t) {
            if tr != BigInt::from(m) {
                fails[3].push(format!("{tag}: M={m} trace={tr}"));
            }
        }
    }
    let names = [
        "nonnegative integer",
        "n=2 equals delta(l1, conj l2)",
        "n=3 equals fusion N_{l1 l2}^{conj l3}",
        "trace formula",
    ];
    for (n, fails) in by_n {
        let p = format!("n={n} g={} tuples={}", th94_genus(n), counts[&n]);
        for (i, f) in fails.iter().enumerate() {
            let applies = match i {
                1 => n == 2,
                2 => n == 3,
                3 => th94_genus(n) >= 1,
                _ => true,
            };
            if !applies {
                continue;
            }
            let w = match f.first() {
                Some(x) => format!("{} failures, first {x}", f.len()),
                None => String::new(),
            };
            rep.push(suite, names[i], p.clone(), f.is_empty(), w);
        }
    }
    rep
}

fn record(rep: &mut Report, check: &str, params: &str, res: Option<String>) {
    rep.push(
        "orbifold",
        check,
        params,
        res.is_none(),
        res.unwrap_or_default(),
    );
}

fn show(x: &CycloNum, y: &CycloNum) -> Option<String> {
    (x != y).then(|| format!("{} vs {}", x.approx_string(6), y.approx_string(6)))
}

/// Pairs `(k, n)` with `k·n = N`, both odd, coprime and greater than 1.
pub fn odd_coprime_splittings(order: u64) -> Vec<(u64, u64)> {
    (3..order)
        .filter(|k| order.is_multiple_of(*k))
        .map(|k| (k, order / k))
        .filter(|&(k, n)| k % 2 == 1 && n % 2 == 1 && n > 1 && k.gcd(&n) == 1)
        .collect()
}

/// `S_{(λ,gⁿ,0),(μ,gᵏ,0)}` for `N = kn`, via the `k`-cycle orbifold of the
/// `n`-fold product: `(1/n)` times its entry between the twisted sector
/// over `λ` and the untwisted sector over `μ`, taken from the `Λ̂(0)` form.
pub fn nested_entry(slice: &OrbSlice, k: u64, n: u64, lam: usize, mu: usize) -> Result<CycloNum> {
    let inner = OrbSlice::with_c(slice.parent.clone(), k, slice.c.clone())?;
    let hat0 = inner.lambda_hat_at(0)?;
    let inner_entry = hat0
        .get(lam, mu)
        .scale_by(&Rational::new(BigInt::one(), BigInt::from(k)));
    Ok(inner_entry.scale_by(&Rational::new(BigInt::one(), BigInt::from(n))))
}

/// The cross-checks available on `𝒥₀`: definitional closure, path
/// independence, the `N = kn` odd case and unitarity of each `Λ̂(i/N)`.
pub fn consistency_report(slice: &OrbSlice) -> Report {
    let mut rep = Report::new();
    let suite = "orbifold";
    let n = slice.order;
    let rank = slice.parent.rank();
    rep.notice(suite, format!("N={n}"), slice.tau_convention());
    let nr = CycloNum::from_int(n as i64);
    let coprime: Vec<u64> = (1..n).filter(|&i| slice.coprime(i)).collect();

    let res = (|| -> Result<()> {
        // (i)
        let mut fail = None;
        for &i in &coprime {
            let hat = slice.lambda_hat_at(i)?.clone();
            let r = Rational::new(BigInt::from(i), BigInt::from(n));
            let direct = lambda_hat(&slice.parent, &slice.c, &r)?;
            if let Some(w) = mismatch(&hat, &direct) {
                fail.get_or_insert(format!("i={i} {w}"));
            }
            for lam in 0..rank {
                for mu in 0..rank {
                    let a = OrbLabel::new(lam, 1, 0);
                    let b = OrbLabel::new(mu, i, 0);
                    let v = &orb_s_entry(slice, &a, &b)? * &nr;
                    if let Some(w) = show(&v, direct.get(lam, mu)) {
                        fail.get_or_insert(format!("i={i} ({lam},{mu}) {w}"));
                    }
                }
            }
        }
        record(
            &mut rep,
            "N S((l,g,0),(m,g^i,0)) = Lambda-hat(i/N)",
            &format!("N={n}"),
            fail,
        );

        // (ii)
        let mut fail = None;
        let mut count = 0usize;
        for &i1 in &coprime {
            for &i2 in &coprime {
                for lam in 0..rank {
                    for mu in 0..rank {
                        let a = OrbLabel::new(lam, i1, 0);
                        let b = OrbLabel::new(mu, i2, 0);
                        let x = orb_s_entry_routed(slice, &a, &b, Route::Row)?;
                        let y = orb_s_entry_routed(slice, &a, &b, Route::Column)?;
                        count += 1;
                        if let Some(w) = show(&x, &y) {
                            fail.get_or_insert(format!("{a},{b} {w}"));
                        }
                    }
                }
            }
        }
        record(
            &mut rep,
            "path independence",
            &format!("N={n} entries={count}"),
            fail,
        );

        // (iii)
        let splits = odd_coprime_splittings(n);
        if splits.is_empty() {
            rep.notice(suite, format!("N={n}"), "no odd coprime splitting N = kn");
        }
        for (k, m) in splits {
            let mut fail = None;
            for lam in 0..rank {
                for mu in 0..rank {
                    let lhs = nested_entry(slice, k, m, lam, mu)?;
                    let rhs = slice
                        .parent
                        .s()
                        .get(lam, mu)
                        .scale_by(&Rational::new(BigInt::one(), BigInt::from(n)));
                    if let Some(w) = show(&lhs, &rhs) {
                        fail.get_or_insert(format!("({lam},{mu}) {w}"));
                    }
                }
            }
            record(
                &mut rep,
                "S((l,g^n,0),(m,g^k,0)) = S_lm / N",
                &format!("N={n} k={k} n={m}"),
                fail,
            );
        }

        // (iv)
        let mut fail = None;
        for &i in &coprime {
            let hat = slice.lambda_hat_at(i)?;
            if let Some(w) = mismatch(&hat.mul(&hat.dagger()), &CMatrix::identity(rank)) {
                fail.get_or_insert(format!("i={i} {w}"));
            }
        }
        record(&mut rep, "Lambda-hat(i/N) unitary", &format!("N={n}"), fail);
        Ok(())
    })();
    if let Err(e) = res {
        rep.push(suite, "consistency", format!("N={n}"), false, e.to_string());
    }
    rep
}

/// Charge transport, symmetry of `S` where both routes exist, and the
/// charge shift of `T`.
pub fn invariants_report(slice: &OrbSlice) -> Report {
    let mut rep = Report::new();
    let n = slice.order;
    let p = format!("N={n}");
    let rank = slice.parent.rank();
    let (all, j0) = sector_set(slice);
    let res = (|| -> Result<()> {
        let mut transport = None;
        let mut symmetry = None;
        for a in &j0 {
            if a.charge != 0 {
                continue;
            }
            for b in all.iter().filter(|b| b.charge == 0) {
                let base = orb_s_entry(slice, a, b)?;
                for (j1, j2) in [(1u64, 0u64), (0, 1), (1, n - 1), (n / 2, n - 1)] {
                    let (j1, j2) = (j1 % n, j2 % n);
                    let a2 = OrbLabel::new(a.base, a.twist, j1);
                    let b2 = OrbLabel::new(b.base, b.twist, j2);
                    let e = -(a.twist as i128 * j2 as i128 + b.twist as i128 * j1 as i128);
                    let expect = base.times_root_of_unity(&slice.zeta(e));
                    if let Some(w) = show(&orb_s_entry(slice, &a2, &b2)?, &expect) {
                        transport.get_or_insert(format!("{a2},{b2} {w}"));
                    }
                    if slice.coprime(b.twist) || b.twist == 0 {
                        let x = orb_s_entry(slice, &b2, &a2)?;
                        if let Some(w) = show(&x, &orb_s_entry(slice, &a2, &b2)?) {
                            symmetry.get_or_insert(format!("{a2},{b2} {w}"));
                        }
                    }
                }
            }
        }
        record(&mut rep, "charge transport", &p, transport);
        record(&mut rep, "S symmetric", &p, symmetry);

        let mut shift = None;
        let zeta = CycloNum::root_of_unity(&slice.zeta(1));
        for lam in 0..rank {
            for &tw in j0
                .iter()
                .map(|a| a.twist)
                .collect::<std::collections::BTreeSet<_>>()
                .iter()
            {
                for k in 0..n {
                    let t0 = orb_t_entry(slice, &OrbLabel::new(lam, tw, k))?;
                    let t1 = orb_t_entry(slice, &OrbLabel::new(lam, tw, (k + 1) % n))?;
                    let expect = &t0 * &zeta.pow(tw as i64)?;
                    if let Some(w) = show(&t1, &expect) {
                        shift.get_or_insert(format!("({lam},g^{tw},{k}) {w}"));
                    }
                }
            }
        }
        record(&mut rep, "T charge shift", &p, shift);
        Ok(())
    })();
    if let Err(e) = res {
        rep.push("orbifold", "invariants", p, false, e.to_string());
    }
    rep.extend(mu_scaling_check(slice));
    rep
}
