//! Modular data: labels, an exact `S` matrix, conformal weights and central
//! charges, with the derived `T`, conjugation and fusion rules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclo::{parse_rational, rat, CycloNum, Rational};
use crate::error::{Error, Result};
use crate::matrix::{mismatch, CMatrix};
use crate::report::Report;

const SUITE: &str = "modular_data";

/// Unchecked input for [`validate`].
#[derive(Clone, Debug)]
pub struct RawDatum {
    pub name: String,
    pub labels: Vec<String>,
    pub s: CMatrix,
    pub delta: Vec<Rational>,
    pub c: Rational,
    pub c0: Rational,
    pub tau2: Option<usize>,
}

/// A validated modular datum. Index 0 is the vacuum.
#[derive(Clone, Debug)]
pub struct ModularData {
    name: String,
    labels: Vec<String>,
    s: CMatrix,
    delta: Vec<Rational>,
    c: Rational,
    c0: Rational,
    tau2: usize,
    conj: Vec<usize>,
    t_order: u64,
    /// `N_{λμ}^ν` at `[(λ·n + μ)·n + ν]`.
    fusion: Vec<u64>,
}

impl ModularData {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn s(&self) -> &CMatrix {
        &self.s
    }

    /// `S⁻¹ = S†`, which for symmetric `S` is the entrywise conjugate.
    pub fn s_inv(&self) -> CMatrix {
        self.s.conj()
    }

    pub fn delta(&self) -> &[Rational] {
        &self.delta
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    pub fn c0(&self) -> &Rational {
        &self.c0
    }

    pub fn tau2(&self) -> usize {
        self.tau2
    }

    /// `conj()[λ] = λ̄`.
    pub fn conj(&self) -> &[usize] {
        &self.conj
    }

    pub fn conj_matrix(&self) -> CMatrix {
        CMatrix::permutation(&self.conj)
    }

    /// Order of `T`, i.e. the conductor `N`.
    pub fn t_order(&self) -> u64 {
        self.t_order
    }

    pub fn t(&self) -> Vec<CycloNum> {
        t_power(self, &Rational::one())
    }

    pub fn fusion(&self, l: usize, m: usize, n: usize) -> u64 {
        let r = self.rank();
        self.fusion[(l * r + m) * r + n]
    }

    /// `(N_λ)_{μν} = N_{λμ}^ν`.
    pub fn fusion_matrix(&self, l: usize) -> CMatrix {
        CMatrix::from_fn(self.rank(), |m, n| {
            CycloNum::from_int(self.fusion(l, m, n) as i64)
        })
    }

    /// The same datum with another `c₀` representative; revalidated.
    pub fn with_c0(&self, c0: Rational) -> Result<ModularData> {
        let mut raw = self.to_raw();
        raw.c0 = c0;
        validate(raw)
    }

    pub fn with_tau2(&self, tau2: usize) -> Result<ModularData> {
        let mut raw = self.to_raw();
        raw.tau2 = Some(tau2);
        validate(raw)
    }

    pub fn to_raw(&self) -> RawDatum {
        RawDatum {
            name: self.name.clone(),
            labels: self.labels.clone(),
            s: self.s.clone(),
            delta: self.delta.clone(),
            c: self.c.clone(),
            c0: self.c0.clone(),
            tau2: Some(self.tau2),
        }
    }

    pub fn label_index(&self, label: usize) -> Result<usize> {
        if label < self.rank() {
            Ok(label)
        } else {
            Err(Error::BadLabel(label))
        }
    }
}

/// Diagonal of `T^r`: `exp(2πi(Δ_λ − c₀/24)r)`.
pub fn t_power(md: &ModularData, r: &Rational) -> Vec<CycloNum> {
    t_power_raw(&md.delta, &md.c0, r)
}

/// Exponents `(Δ_λ − c₀/24)·r` of `T^r`, for use with the phase helpers of
/// [`CMatrix`].
pub fn t_exponents(md: &ModularData, r: &Rational) -> Vec<Rational> {
    let shift = &md.c0 / Rational::from_integer(24.into());
    md.delta.iter().map(|d| (d - &shift) * r).collect()
}

fn t_power_raw(delta: &[Rational], c0: &Rational, r: &Rational) -> Vec<CycloNum> {
    let shift = c0 / Rational::from_integer(24.into());
    delta
        .iter()
        .map(|d| CycloNum::root_of_unity(&((d - &shift) * r)))
        .collect()
}

fn denom_u64(q: &Rational) -> u64 {
    q.denom().to_u64().expect("denominator too large")
}

fn t_order_raw(delta: &[Rational], c0: &Rational) -> u64 {
    let shift = c0 / Rational::from_integer(24.into());
    delta
        .iter()
        .fold(1u64, |acc, d| acc.lcm(&denom_u64(&(d - &shift))))
}

/// `Σ_δ S_{λδ}S_{μδ}S*_{νδ}/S_{1δ}` evaluated exactly.
fn verlinde_sum(s: &CMatrix, inv_s1: &[CycloNum], l: usize, m: usize, n: usize) -> CycloNum {
    (0..s.n())
        .map(|d| &(&(s.get(l, d) * s.get(m, d)) * &s.get(n, d).conj()) * &inv_s1[d])
        .sum()
}

/// `N_{λμ}^ν` via the Verlinde formula; errors unless a nonnegative integer.
pub fn verlinde(md: &ModularData, l: usize, m: usize, n: usize) -> Result<u64> {
    for x in [l, m, n] {
        md.label_index(x)?;
    }
    let inv = inverse_first_row(&md.s)?;
    fusion_value(&md.s, &inv, l, m, n)
}

fn fusion_value(s: &CMatrix, inv_s1: &[CycloNum], l: usize, m: usize, n: usize) -> Result<u64> {
    let v = verlinde_sum(s, inv_s1, l, m, n);
    match v.as_integer().and_then(|k| k.to_u64()) {
        Some(k) => Ok(k),
        None => Err(Error::NonIntegralFusion(l, m, n, v.approx_string(6))),
    }
}

fn inverse_first_row(s: &CMatrix) -> Result<Vec<CycloNum>> {
    (0..s.n()).map(|d| s.get(0, d).inverse()).collect()
}

/// `d(λ) = S_{1λ}/S_{11}`.
pub fn qdim(md: &ModularData, l: usize) -> CycloNum {
    md.s.get(0, l) / md.s.get(0, 0)
}

pub fn qdims(md: &ModularData) -> Vec<CycloNum> {
    (0..md.rank()).map(|l| qdim(md, l)).collect()
}

/// `μ = Σ_λ d(λ)²`.
pub fn mu_index(md: &ModularData) -> CycloNum {
    qdims(md).iter().map(|d| d * d).sum()
}

/// Conjugation permutation and flattened fusion table.
type Derived = (Vec<usize>, Vec<u64>);

fn axiom_report(raw: &RawDatum) -> (Report, Option<Derived>) {
    let mut rep = Report::new();
    let n = raw.s.n();
    let shape_ok = n > 0 && raw.labels.len() == n && raw.delta.len() == n;
    rep.push(
        SUITE,
        "shape",
        format!("rank={n}"),
        shape_ok,
        if shape_ok {
            String::new()
        } else {
            format!(
                "S is {n}x{n}, {} labels, {} weights",
                raw.labels.len(),
                raw.delta.len()
            )
        },
    );
    if !shape_ok {
        return (rep, None);
    }
    let s = &raw.s;

    let st = s.transpose();
    let sym = mismatch(s, &st);
    let sym_ok = sym.is_none();
    rep.push(SUITE, "S symmetric", "", sym_ok, sym.unwrap_or_default());

    let unit = mismatch(&s.mul(&s.dagger()), &CMatrix::identity(n));
    let unit_ok = unit.is_none();
    rep.push(SUITE, "S unitary", "", unit_ok, unit.unwrap_or_default());

    let s2 = s.mul(s);
    let conj = conjugation_from(&s2);
    let conj_ok = conj.as_ref().is_some_and(|p| (0..n).all(|i| p[p[i]] == i));
    rep.push(
        SUITE,
        "S^2 is a conjugation",
        "",
        conj_ok,
        if conj_ok {
            String::new()
        } else {
            "S^2 is not an involutive permutation matrix".to_string()
        },
    );

    let vac = raw.delta[0].is_zero();
    rep.push(
        SUITE,
        "vacuum weight zero",
        "",
        vac,
        if vac {
            String::new()
        } else {
            format!("Delta_0 = {}", raw.delta[0])
        },
    );

    let cc = &raw.c - &raw.c0;
    let four = Rational::from_integer(4.into());
    let c_ok = (&cc / &four).is_integer();
    rep.push(
        SUITE,
        "c - c0 in 4Z",
        format!("c={} c0={}", raw.c, raw.c0),
        c_ok,
        if c_ok {
            String::new()
        } else {
            format!("c - c0 = {cc}")
        },
    );

    let t = t_power_raw(&raw.delta, &raw.c0, &Rational::one());
    let t_inv: Vec<CycloNum> = t.iter().map(CycloNum::conj).collect();
    let sts = s.mul_diag(&t).mul(s);
    let rhs = CMatrix::diag_mul(&t_inv, &s.mul_diag(&t_inv));
    let rel = mismatch(&sts, &rhs);
    rep.push(
        SUITE,
        "STS = T^-1 S T^-1",
        "",
        rel.is_none(),
        rel.unwrap_or_default(),
    );

    if let Some(p) = conj.as_ref().filter(|_| conj_ok) {
        let bad = (0..n).find(|&i| raw.delta[i] != raw.delta[p[i]]);
        rep.push(
            SUITE,
            "T C = C T",
            "",
            bad.is_none(),
            bad.map(|i| format!("label {i}")).unwrap_or_default(),
        );
    }

    let bad_row = (0..n).find(|&j| {
        let x = s.get(0, j);
        *x != x.conj() || x.embed_complex().re <= 0.0
    });
    rep.push(
        SUITE,
        "S_1l real positive",
        "",
        bad_row.is_none(),
        bad_row.map(|j| format!("column {j}")).unwrap_or_default(),
    );

    // Fusion rules only make sense once S is invertible with a nonvanishing first row.
    if !(sym_ok && unit_ok && bad_row.is_none() && conj_ok) {
        return (rep, None);
    }
    let inv_s1 = match inverse_first_row(s) {
        Ok(v) => v,
        Err(_) => return (rep, None),
    };
    let mut fusion = vec![0u64; n * n * n];
    let mut integral = Ok(());
    'outer: for l in 0..n {
        for m in 0..n {
            for k in 0..n {
                match fusion_value(s, &inv_s1, l, m, k) {
                    Ok(v) => fusion[(l * n + m) * n + k] = v,
                    Err(e) => {
                        integral = Err(e.to_string());
                        break 'outer;
                    }
                }
            }
        }
    }
    rep.push(
        SUITE,
        "Verlinde integrality",
        format!("triples={}", n * n * n),
        integral.is_ok(),
        integral.clone().err().unwrap_or_default(),
    );
    if integral.is_err() {
        return (rep, None);
    }

    let mut diag_fail = None;
    for l in 0..n {
        let nl = CMatrix::from_fn(n, |m, k| {
            CycloNum::from_int(fusion[(l * n + m) * n + k] as i64)
        });
        let eig: Vec<CycloNum> = (0..n).map(|m| s.get(l, m) * &inv_s1[m]).collect();
        if let Some(w) = mismatch(&nl.mul(s), &s.mul_diag(&eig)) {
            diag_fail = Some(format!("label {l}: {w}"));
            break;
        }
    }
    rep.push(
        SUITE,
        "S diagonalizes fusion",
        "",
        diag_fail.is_none(),
        diag_fail.unwrap_or_default(),
    );

    let tau2 = raw.tau2.unwrap_or(0);
    let tau_ok = tau2 < n && s.get(0, tau2) == s.get(0, 0) && fusion[(tau2 * n + tau2) * n] == 1;
    rep.push(
        SUITE,
        "tau2 is an order-2 simple current",
        format!("tau2={tau2}"),
        tau_ok,
        if tau_ok {
            String::new()
        } else {
            "needs d = 1 and tau2 x tau2 = vacuum".to_string()
        },
    );

    (rep, conj.map(|c| (c, fusion)))
}

/// `Some(p)` when `m` is a permutation matrix, with `m[p[j]][j] = 1`.
fn conjugation_from(m: &CMatrix) -> Option<Vec<usize>> {
    let n = m.n();
    let one = CycloNum::one();
    let mut p = Vec::with_capacity(n);
    for j in 0..n {
        let mut hit = None;
        for i in 0..n {
            let x = m.get(i, j);
            if x.is_zero() {
                continue;
            }
            if *x != one || hit.is_some() {
                return None;
            }
            hit = Some(i);
        }
        p.push(hit?);
    }
    Some(p)
}

/// Checks every axiom and derives conjugation and fusion rules.
pub fn validate(raw: RawDatum) -> Result<ModularData> {
    let (rep, derived) = axiom_report(&raw);
    match derived {
        Some((conj, fusion)) if rep.all_pass() => {
            let t_order = t_order_raw(&raw.delta, &raw.c0);
            Ok(ModularData {
                name: raw.name,
                labels: raw.labels,
                s: raw.s,
                delta: raw.delta,
                c: raw.c,
                c0: raw.c0,
                tau2: raw.tau2.unwrap_or(0),
                conj,
                t_order,
                fusion,
            })
        }
        _ => Err(Error::AxiomViolation(Box::new(rep))),
    }
}

/// The axiom records for a datum that may be invalid.
pub fn validation_report(raw: &RawDatum) -> Report {
    axiom_report(raw).0
}

/// `a = Σ_λ d(λ)² ω_λ⁻¹`.
pub fn gauss_sum_a(s: &CMatrix, delta: &[Rational]) -> CycloNum {
    let s11 = s.get(0, 0);
    (0..s.n())
        .map(|l| {
            let d = s.get(0, l) / s11;
            &(&d * &d) * &CycloNum::root_of_unity(&-delta[l].clone())
        })
        .sum()
}

/// The representative in `[0, 8)` of `c₀` defined by `a = |a|·exp(−2πi c₀/8)`.
pub fn c0_class(s: &CMatrix, delta: &[Rational]) -> Result<Rational> {
    let a = gauss_sum_a(s, delta);
    // |a| = 1/S_11 for unitary S
    let unit = &a * s.get(0, 0);
    let w = unit.order().lcm(&2) as i64;
    let theta = unit.embed_complex().arg() / std::f64::consts::TAU;
    let k = (theta * w as f64).round() as i64;
    let guess = rat(k, w);
    if CycloNum::root_of_unity(&guess) != unit {
        return Err(Error::AxiomViolation(Box::new({
            let mut r = Report::new();
            r.push(
                SUITE,
                "a/|a| is a root of unity",
                "",
                false,
                unit.approx_string(6),
            );
            r
        })));
    }
    let c0 = -(guess * Rational::from_integer(8.into()));
    let eight = BigInt::from(8);
    let num = c0.numer().mod_floor(&(&eight * c0.denom()));
    Ok(Rational::new(num, c0.denom().clone()))
}

/// `|a|² = μ`, `a·exp(2πi c₀/8) = |a|`, and the second formula for `Y`.
pub fn c0_consistency(md: &ModularData) -> Report {
    let mut rep = Report::new();
    let suite = "c0";
    let a = gauss_sum_a(&md.s, &md.delta);
    let mu = mu_index(md);
    let mod_sq = &a * &a.conj();
    rep.push(
        suite,
        "|a|^2 = sum d^2",
        "",
        mod_sq == mu,
        format!(
            "|a|^2 = {}, mu = {}",
            mod_sq.approx_string(8),
            mu.approx_string(8)
        ),
    );
    // |a| = 1/S_11, which is real and positive after validation
    let abs_a = md.s.get(0, 0).inverse().expect("vacuum entry is nonzero");
    let abs_sq = &abs_a * &abs_a;
    rep.push(
        suite,
        "mu = 1/S_11^2",
        "",
        abs_sq == mu,
        format!("1/S_11^2 = {}", abs_sq.approx_string(8)),
    );
    let phase = CycloNum::root_of_unity(&(&md.c0 / Rational::from_integer(8.into())));
    let rotated = &a * &phase;
    rep.push(
        suite,
        "a = |a| exp(-2 pi i c0/8)",
        format!("c0={}", md.c0),
        rotated == abs_a,
        if rotated == abs_a {
            String::new()
        } else {
            format!("a exp(2 pi i c0/8) = {}", rotated.approx_string(8))
        },
    );
    let n = md.rank();
    let omega: Vec<CycloNum> = md.delta.iter().map(CycloNum::root_of_unity).collect();
    let d = qdims(md);
    let y = CMatrix::from_fn(n, |l, m| {
        (0..n)
            .filter(|&k| md.fusion(l, m, k) != 0)
            .map(|k| {
                let w = &(&omega[l] * &omega[m]) / &omega[k];
                &(&w * &d[k]) * &CycloNum::from_int(md.fusion(l, m, k) as i64)
            })
            .sum()
    });
    let expect = md.s.scale(&abs_a);
    let w = mismatch(&y, &expect);
    rep.push(suite, "Y = |a| S", "", w.is_none(), w.unwrap_or_default());
    rep
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conductor {
    pub n: u64,
    pub n0: u64,
    pub e: u64,
}

/// `N` = order of `T`, `N₀` = order of `ω₀⁻¹T`, `e = N/N₀`; checks that every
/// entry of `S` lies in `Q[ζ_N]`.
pub fn conductor(md: &ModularData) -> Result<Conductor> {
    let n = md.t_order;
    for i in 0..md.rank() {
        for j in 0..md.rank() {
            let needed = md.s.get(i, j).minimal_order();
            if !n.is_multiple_of(needed as u64) {
                return Err(Error::ConductorMismatch {
                    row: i,
                    col: j,
                    needed,
                    conductor: n,
                });
            }
        }
    }
    let n0 = md.delta.iter().fold(1u64, |acc, d| acc.lcm(&denom_u64(d)));
    Ok(Conductor { n, n0, e: n / n0 })
}

/// The arithmetic properties of the conductor as report records.
pub fn conductor_report(md: &ModularData) -> Report {
    let mut rep = Report::new();
    let suite = "conductor";
    let cd = match conductor(md) {
        Ok(c) => c,
        Err(e) => {
            rep.push(
                suite,
                "S entries in Q[z_N]",
                format!("N={}", md.t_order),
                false,
                e.to_string(),
            );
            return rep;
        }
    };
    let params = format!("N={} N0={} e={}", cd.n, cd.n0, cd.e);
    rep.push(suite, "S entries in Q[z_N]", params.clone(), true, "");
    rep.push(suite, "N0 e = N", params.clone(), cd.n0 * cd.e == cd.n, "");
    rep.push(suite, "e divides 12", params.clone(), 12 % cd.e == 0, "");
    let g = cd.e.gcd(&cd.n0);
    rep.push(
        suite,
        "gcd(e, N0) in {1,2}",
        params.clone(),
        g == 1 || g == 2,
        format!("gcd = {g}"),
    );
    let n0c = Rational::from_integer(cd.n0.into()) * &md.c;
    let even = n0c.is_integer() && n0c.to_integer().is_even();
    rep.push(suite, "N0 c even", params, even, format!("N0 c = {n0c}"));
    rep
}

/// `τ·λ`: the unique `ν` with `N_{τλ}^ν = 1`, for a simple current `τ`.
pub fn simple_current_action(md: &ModularData, tau: usize) -> Option<Vec<usize>> {
    (0..md.rank())
        .map(|l| {
            let hits: Vec<usize> = (0..md.rank())
                .filter(|&k| md.fusion(tau, l, k) != 0)
                .collect();
            match hits.as_slice() {
                [k] if md.fusion(tau, l, *k) == 1 => Some(*k),
                _ => None,
            }
        })
        .collect()
}

/// Checks that `S_{τλ,μ} = G(μ)·S_{λμ}` with `G(μ)` independent of `λ` and a
/// root of unity.
pub fn automorphism_action_check(md: &ModularData, tau: usize) -> Report {
    let mut rep = Report::new();
    let suite = "automorphism";
    let params = format!("tau={tau}");
    if tau >= md.rank() || !qdim(md, tau).is_one() {
        rep.push(suite, "d(tau) = 1", params, false, "");
        return rep;
    }
    let Some(act) = simple_current_action(md, tau) else {
        rep.push(suite, "tau acts by permutation", params, false, "");
        return rep;
    };
    let mut ratios = Vec::new();
    let mut fail = None;
    for m in 0..md.rank() {
        // S_{1μ} ≠ 0, so the vacuum row fixes the ratio
        let g = md.s.get(act[0], m) / md.s.get(0, m);
        for (l, &al) in act.iter().enumerate() {
            if *md.s.get(al, m) != &g * md.s.get(l, m) {
                fail.get_or_insert(format!("mu={m} lambda={l}"));
            }
        }
        let w = g.order().lcm(&2);
        if !g.pow(w as i64).is_ok_and(|x| x.is_one()) {
            fail.get_or_insert(format!("ratio at mu={m} is not a root of unity"));
        }
        ratios.push(g.approx_string(6));
    }
    rep.push(
        suite,
        "ratio independent of lambda",
        params,
        fail.is_none(),
        fail.unwrap_or_else(|| format!("ratios [{}]", ratios.join(", "))),
    );
    rep
}

/// Built-in families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    Trivial,
    Su2(u32),
    CyclicOdd(u32),
}

impl Builtin {
    /// Parses `trivial`, `su2:k` or `cyclic_odd:n`.
    pub fn parse(spec: &str) -> Result<Builtin> {
        let unsupported = || Error::UnsupportedModel(spec.to_string());
        let (name, param) = match spec.split_once(':') {
            Some((a, b)) => (a, Some(b.parse::<u32>().map_err(|_| unsupported())?)),
            None => (spec, None),
        };
        match (name, param) {
            ("trivial", None) => Ok(Builtin::Trivial),
            ("su2", Some(k)) if k >= 1 => Ok(Builtin::Su2(k)),
            ("cyclic_odd", Some(n)) if n >= 3 && n % 2 == 1 => Ok(Builtin::CyclicOdd(n)),
            _ => Err(unsupported()),
        }
    }
}

pub fn builtin_model(spec: &str) -> Result<ModularData> {
    builtin(Builtin::parse(spec)?)
}

pub fn builtin(b: Builtin) -> Result<ModularData> {
    let raw = match b {
        Builtin::Trivial => RawDatum {
            name: "trivial".into(),
            labels: vec!["1".into()],
            s: CMatrix::identity(1),
            delta: vec![Rational::zero()],
            c: Rational::zero(),
            c0: Rational::zero(),
            tau2: None,
        },
        Builtin::Su2(k) => su2_raw(k)?,
        Builtin::CyclicOdd(n) => cyclic_raw(n)?,
    };
    validate(raw)
}

/// `sin(πm/q)` as `(ζ_{2q}^m − ζ_{2q}^{−m})/(2i)`.
fn sin_pi(m: i64, q: i64) -> CycloNum {
    let order = u32::try_from(2 * q).expect("order too large");
    let diff = CycloNum::make(order, &[(m, Rational::one()), (-m, -Rational::one())]);
    &diff * &CycloNum::make(4, &[(3, rat(1, 2))])
}

fn su2_raw(k: u32) -> Result<RawDatum> {
    let k = k as i64;
    let q = k + 2;
    let norm = CycloNum::sqrt_nonneg_rational(&rat(2, q))?;
    let s = CMatrix::from_fn(k as usize + 1, |a, b| {
        &norm * &sin_pi((a as i64 + 1) * (b as i64 + 1), q)
    });
    let delta: Vec<Rational> = (0..=k).map(|a| rat(a * (a + 2), 4 * q)).collect();
    let c0 = c0_class(&s, &delta)?;
    Ok(RawDatum {
        name: format!("su2:{k}"),
        labels: (0..=k).map(|a| a.to_string()).collect(),
        s,
        delta,
        c: rat(3 * k, q),
        c0,
        tau2: None,
    })
}

fn cyclic_raw(n: u32) -> Result<RawDatum> {
    let ni = n as i64;
    let norm = CycloNum::sqrt_nonneg_rational(&rat(1, ni))?;
    let s = CMatrix::from_fn(n as usize, |j, k| {
        &norm * &CycloNum::zeta(n, -2 * (j as i64) * (k as i64))
    });
    let delta: Vec<Rational> = (0..ni).map(|j| rat((j * j) % ni, ni)).collect();
    let c0 = c0_class(&s, &delta)?;
    Ok(RawDatum {
        name: format!("cyclic_odd:{n}"),
        labels: (0..n).map(|j| j.to_string()).collect(),
        s,
        delta,
        c: c0.clone(),
        c0,
        tau2: None,
    })
}

/// On-disk form of a datum. All `S` entries are written at the ambient order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelFile {
    pub name: String,
    pub labels: Vec<String>,
    pub order: u32,
    #[serde(rename = "S")]
    pub s: Vec<Vec<CycloNum>>,
    pub delta: Vec<String>,
    pub c: String,
    pub c0: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau2: Option<usize>,
}

impl ModelFile {
    pub fn from_datum(md: &ModularData) -> Result<ModelFile> {
        let order = md.s.order();
        let s =
            md.s.rows()
                .into_iter()
                .map(|r| {
                    r.iter()
                        .map(|x| x.coerce(order))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
        Ok(ModelFile {
            name: md.name.clone(),
            labels: md.labels.clone(),
            order,
            s,
            delta: md.delta.iter().map(|d| d.to_string()).collect(),
            c: md.c.to_string(),
            c0: md.c0.to_string(),
            tau2: (md.tau2 != 0).then_some(md.tau2),
        })
    }

    pub fn to_raw(&self) -> Result<RawDatum> {
        if self.order == 0 {
            return Err(Error::Parse("ambient order must be positive".into()));
        }
        for x in self.s.iter().flatten() {
            if !self.order.is_multiple_of(x.order()) {
                return Err(Error::Parse(format!(
                    "entry of order {} outside the ambient order {}",
                    x.order(),
                    self.order
                )));
            }
        }
        let s = CMatrix::from_rows(self.s.clone())
            .ok_or_else(|| Error::Parse("S is not square".into()))?;
        let delta = self
            .delta
            .iter()
            .map(|d| parse_rational(d))
            .collect::<Result<Vec<_>>>()?;
        Ok(RawDatum {
            name: self.name.clone(),
            labels: self.labels.clone(),
            s,
            delta,
            c: parse_rational(&self.c)?,
            c0: parse_rational(&self.c0)?,
            tau2: self.tau2,
        })
    }

    pub fn parse(text: &str) -> Result<ModelFile> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Canonical pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model serialization");
        s.push('\n');
        s
    }
}
