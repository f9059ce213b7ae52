//! Dense square matrices over cyclotomic numbers.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::cyclo::{CycloNum, Rational};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CMatrix {
    n: usize,
    data: Vec<CycloNum>,
}

impl CMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> CycloNum) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        CMatrix { n, data }
    }

    /// Builds from rows; `None` if the rows do not form a square.
    pub fn from_rows(rows: Vec<Vec<CycloNum>>) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(CMatrix {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| CycloNum::from_int((i == j) as i64))
    }

    pub fn diag(d: &[CycloNum]) -> Self {
        Self::from_fn(d.len(), |i, j| {
            if i == j {
                d[i].clone()
            } else {
                CycloNum::from_int(0)
            }
        })
    }

    /// The permutation matrix with a 1 at `(perm[j], j)`.
    pub fn permutation(perm: &[usize]) -> Self {
        Self::from_fn(perm.len(), |i, j| CycloNum::from_int((perm[j] == i) as i64))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &CycloNum {
        &self.data[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<CycloNum>> {
        self.data
            .chunks(self.n.max(1))
            .map(|r| r.to_vec())
            .collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &CycloNum> {
        self.data.iter()
    }

    pub fn map(&self, f: impl Fn(&CycloNum) -> CycloNum) -> Self {
        CMatrix {
            n: self.n,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Least common multiple of the entry orders.
    pub fn order(&self) -> u32 {
        self.data.iter().fold(1u32, |acc, x| acc.lcm(&x.order()))
    }

    fn lifted(&self, order: u32) -> Self {
        self.map(|x| x.lift_to(order))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let order = self.order().lcm(&other.order());
        let a = self.lifted(order);
        let b = other.lifted(order);
        let n = self.n;
        Self::from_fn(n, |i, j| {
            let mut acc = CycloNum::zero(order);
            for k in 0..n {
                let x = a.get(i, k);
                let y = b.get(k, j);
                if x.is_zero() || y.is_zero() {
                    continue;
                }
                acc = &acc + &(x * y);
            }
            acc
        })
    }

    /// `self · diag(d)`.
    pub fn mul_diag(&self, d: &[CycloNum]) -> Self {
        assert_eq!(self.n, d.len(), "dimension mismatch");
        Self::from_fn(self.n, |i, j| self.get(i, j) * &d[j])
    }

    /// `diag(d) · self`.
    pub fn diag_mul(d: &[CycloNum], m: &Self) -> Self {
        assert_eq!(m.n, d.len(), "dimension mismatch");
        Self::from_fn(m.n, |i, j| &d[i] * m.get(i, j))
    }

    /// `diag(exp(2πi e)) · self`.
    pub fn phase_rows(&self, e: &[Rational]) -> Self {
        assert_eq!(self.n, e.len(), "dimension mismatch");
        Self::from_fn(self.n, |i, j| self.get(i, j).times_root_of_unity(&e[i]))
    }

    /// `self · diag(exp(2πi e))`.
    pub fn phase_cols(&self, e: &[Rational]) -> Self {
        assert_eq!(self.n, e.len(), "dimension mismatch");
        Self::from_fn(self.n, |i, j| self.get(i, j).times_root_of_unity(&e[j]))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn conj(&self) -> Self {
        self.map(CycloNum::conj)
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, c: &CycloNum) -> Self {
        self.map(|x| x * c)
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x)
    }

    /// Entrywise `σ_l`; each entry's order must be coprime to `l`.
    pub fn galois(&self, l: i64) -> Result<Self> {
        let data = self
            .data
            .iter()
            .map(|x| x.galois(l))
            .collect::<Result<Vec<_>>>()?;
        Ok(CMatrix { n: self.n, data })
    }

    /// Rows and columns permuted: `out[i][j] = self[p[i]][p[j]]`.
    pub fn permute(&self, p: &[usize]) -> Self {
        Self::from_fn(self.n, |i, j| self.get(p[i], p[j]).clone())
    }

    pub fn is_identity(&self) -> bool {
        self.first_difference(&Self::identity(self.n)).is_none()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn diagonal(&self) -> Vec<CycloNum> {
        (0..self.n).map(|i| self.get(i, i).clone()).collect()
    }

    /// First `(row, col)` where the matrices differ.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        if self.n != other.n {
            return Some((0, 0));
        }
        (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .find(|&(i, j)| self.get(i, j) != other.get(i, j))
    }

    /// Text rendering, one row per line; exact or with `digits` decimals.
    pub fn render(&self, digits: Option<u32>) -> String {
        let mut out = String::new();
        for i in 0..self.n {
            let cells: Vec<String> = (0..self.n)
                .map(|j| match digits {
                    Some(d) => self.get(i, j).approx_string(d),
                    None => self.get(i, j).to_string(),
                })
                .collect();
            out.push_str(&format!("[{}]\n", cells.join(", ")));
        }
        out
    }
}

/// Describes the first mismatch of an expected matrix identity.
pub fn mismatch(lhs: &CMatrix, rhs: &CMatrix) -> Option<String> {
    lhs.first_difference(rhs).map(|(i, j)| {
        if lhs.n() != rhs.n() {
            return format!("dimension {} vs {}", lhs.n(), rhs.n());
        }
        format!(
            "entry ({i},{j}): {} vs {}",
            lhs.get(i, j).approx_string(6),
            rhs.get(i, j).approx_string(6)
        )
    })
}

impl Serialize for CMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<CycloNum>>::deserialize(d)?;
        CMatrix::from_rows(rows).ok_or_else(|| serde::de::Error::custom("matrix is not square"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products_and_adjoints() {
        let i = CycloNum::zeta(4, 1);
        let m = CMatrix::from_rows(vec![
            vec![CycloNum::from_int(0), i.clone()],
            vec![CycloNum::from_int(1), CycloNum::from_int(0)],
        ])
        .unwrap();
        let mm = m.mul(&m.dagger());
        assert!(mm.is_identity());
        assert_eq!(m.transpose().get(0, 1), &CycloNum::from_int(1));
        assert!(CMatrix::diag(&[i.clone(), i]).is_diagonal());
        assert!(!m.is_diagonal());
    }

    #[test]
    fn permutation_convention() {
        let p = CMatrix::permutation(&[1, 2, 0]);
        assert_eq!(p.get(1, 0), &CycloNum::from_int(1));
        assert!(p.mul(&p.transpose()).is_identity());
    }
}
