//! Small dense matrices over the rationals and over polynomials.

use crate::error::{Error, Result};
use crate::poly::{Poly, Registry};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Row-major construction; panics if `data.len() != rows * cols`.
    pub fn from_rows(rows: usize, cols: usize, data: Vec<Rational>) -> Self {
        assert_eq!(data.len(), rows * cols);
        RatMatrix { rows, cols, data }
    }

    /// `E_ij`: one in row `i`, column `j`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m.set(i, j, Rational::one());
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> RatMatrix {
        RatMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn commutator(&self, other: &RatMatrix) -> RatMatrix {
        self.mul(other).add(&other.mul(self).scale(&Rational::from_int(-1)))
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).fold(Rational::zero(), |acc, i| acc + self.get(i, i))
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let piv = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if piv != col {
                for j in 0..n {
                    a.data.swap(piv * n + j, col * n + j);
                    inv.data.swap(piv * n + j, col * n + j);
                }
            }
            let p = a.get(col, col).recip()?;
            for j in 0..n {
                let v = a.get(col, j) * &p;
                a.set(col, j, v);
                let w = inv.get(col, j) * &p;
                inv.set(col, j, w);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = a.get(r, j) - &(&f * a.get(col, j));
                    a.set(r, j, v);
                    let w = inv.get(r, j) - &(&f * inv.get(col, j));
                    inv.set(r, j, w);
                }
            }
        }
        Some(inv)
    }
}

/// Recovers basis coordinates of matrices lying in the span of a set of
/// linearly independent basis matrices.
#[derive(Debug, Clone)]
pub struct SpanCoordinates {
    n: usize,
    basis: Vec<RatMatrix>,
    /// Flattened entry positions whose restriction of the basis is invertible.
    pivots: Vec<usize>,
    /// Inverse of the `pivots x basis` submatrix.
    solve: RatMatrix,
}

impl SpanCoordinates {
    /// Fails when the basis matrices are linearly dependent.
    pub fn new(basis: &[RatMatrix]) -> Result<Self> {
        let dim = basis.len();
        let n = basis.first().map(RatMatrix::rows).unwrap_or(0);
        // Greedy pivot selection: row-reduce the (n^2 x dim) matrix of entries.
        let entries = n * n;
        let mut chosen: Vec<usize> = Vec::new();
        let mut reduced: Vec<Vec<Rational>> = Vec::new();
        for pos in 0..entries {
            let mut row: Vec<Rational> = basis.iter().map(|b| b.entries()[pos].clone()).collect();
            for (r, &lead) in reduced.iter().zip(&pivot_leads(&reduced)) {
                let f = row[lead].clone();
                if !f.is_zero() {
                    for (x, y) in row.iter_mut().zip(r) {
                        *x = &*x - &(&f * y);
                    }
                }
            }
            if let Some(lead) = row.iter().position(|x| !x.is_zero()) {
                let p = row[lead].recip().expect("nonzero");
                for x in row.iter_mut() {
                    *x = &*x * &p;
                }
                // keep earlier rows reduced against the new lead
                for r in reduced.iter_mut() {
                    let f = r[lead].clone();
                    if !f.is_zero() {
                        for (x, y) in r.iter_mut().zip(&row) {
                            *x = &*x - &(&f * y);
                        }
                    }
                }
                reduced.push(row);
                chosen.push(pos);
                if chosen.len() == dim {
                    break;
                }
            }
        }
        if chosen.len() != dim {
            return Err(Error::Invalid("representation matrices are linearly dependent".into()));
        }
        let mut sub = RatMatrix::zeros(dim, dim);
        for (r, &pos) in chosen.iter().enumerate() {
            for (c, b) in basis.iter().enumerate() {
                sub.set(r, c, b.entries()[pos].clone());
            }
        }
        let solve = sub.inverse().expect("pivot submatrix is invertible");
        Ok(SpanCoordinates { n, basis: basis.to_vec(), pivots: chosen, solve })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Coordinates of a rational matrix, or `None` if it is outside the span.
    pub fn coords(&self, m: &RatMatrix) -> Option<Vec<Rational>> {
        let rhs: Vec<Rational> = self.pivots.iter().map(|&p| m.entries()[p].clone()).collect();
        let c: Vec<Rational> = (0..self.dim())
            .map(|i| (0..self.dim()).fold(Rational::zero(), |acc, j| acc + &(self.solve.get(i, j) * &rhs[j])))
            .collect();
        let mut back = RatMatrix::zeros(self.n, self.n);
        for (ci, b) in c.iter().zip(&self.basis) {
            back = back.add(&b.scale(ci));
        }
        (back == *m).then_some(c)
    }

    /// Coordinates of a polynomial matrix, or `None` if it is outside the span.
    pub fn poly_coords(&self, m: &PolyMatrix) -> Option<Vec<Poly>> {
        let reg = m.registry().clone();
        let rhs: Vec<&Poly> = self.pivots.iter().map(|&p| &m.data[p]).collect();
        let mut c = vec![Poly::zero(&reg); self.dim()];
        for (i, ci) in c.iter_mut().enumerate() {
            for (j, r) in rhs.iter().enumerate() {
                ci.add_assign_unchecked(r, self.solve.get(i, j));
            }
        }
        // membership: every entry must be reproduced
        for pos in 0..self.n * self.n {
            let mut v = Poly::zero(&reg);
            for (ci, b) in c.iter().zip(&self.basis) {
                v.add_assign_unchecked(ci, &b.entries()[pos]);
            }
            if v != m.data[pos] {
                return None;
            }
        }
        Some(c)
    }
}

fn pivot_leads(rows: &[Vec<Rational>]) -> Vec<usize> {
    rows.iter()
        .map(|r| r.iter().position(|x| !x.is_zero()).expect("reduced rows are nonzero"))
        .collect()
}

/// Square matrix with polynomial entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    n: usize,
    reg: Registry,
    data: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zeros(reg: &Registry, n: usize) -> Self {
        PolyMatrix { n, reg: reg.clone(), data: vec![Poly::zero(reg); n * n] }
    }

    pub fn identity(reg: &Registry, n: usize) -> Self {
        let mut m = Self::zeros(reg, n);
        for i in 0..n {
            m.data[i * n + i] = Poly::one(reg);
        }
        m
    }

    pub fn from_rational(reg: &Registry, m: &RatMatrix) -> Self {
        assert_eq!(m.rows(), m.cols());
        PolyMatrix {
            n: m.rows(),
            reg: reg.clone(),
            data: m.entries().iter().map(|c| Poly::constant(reg, c.clone())).collect(),
        }
    }

    /// Row-major; all entries must share `reg`.
    pub fn from_entries(reg: &Registry, n: usize, data: Vec<Poly>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::LengthMismatch { expected: n * n, got: data.len() });
        }
        if data.iter().any(|p| p.registry() != reg) {
            return Err(Error::RegistryMismatch);
        }
        Ok(PolyMatrix { n, reg: reg.clone(), data })
    }

    /// `Σ_a coeffs[a] * basis[a]`.
    pub fn combine(reg: &Registry, coeffs: &[Poly], basis: &[RatMatrix]) -> Self {
        let n = basis.first().map(RatMatrix::rows).unwrap_or(0);
        let mut m = Self::zeros(reg, n);
        for (c, b) in coeffs.iter().zip(basis) {
            if c.is_zero() {
                continue;
            }
            for (pos, e) in b.entries().iter().enumerate() {
                m.data[pos].add_assign_unchecked(c, e);
            }
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn registry(&self) -> &Registry {
        &self.reg
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.data[i * self.n + j]
    }

    pub fn entries(&self) -> &[Poly] {
        &self.data
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(&self.reg, n);
        let one = Rational::one();
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.data[k * n + j];
                    if !b.is_zero() {
                        out.data[i * n + j].add_product(a, b, &one);
                    }
                }
            }
        }
        out
    }

    pub fn add_scaled(&mut self, other: &PolyMatrix, c: &Rational) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            a.add_assign_unchecked(b, c);
        }
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> PolyMatrix {
        PolyMatrix { n: self.n, reg: self.reg.clone(), data: self.data.iter().map(f).collect() }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(&self.reg, self.n)
    }

    /// Entries depend on no variable.
    pub fn as_constant(&self) -> Option<RatMatrix> {
        let mut out = RatMatrix::zeros(self.n, self.n);
        for (pos, p) in self.data.iter().enumerate() {
            if p.total_degree() > 0 {
                return None;
            }
            out.data[pos] = p.constant_term();
        }
        Some(out)
    }

    pub fn rebase(&self, target: &Registry) -> Result<PolyMatrix> {
        Ok(PolyMatrix {
            n: self.n,
            reg: target.clone(),
            data: self.data.iter().map(|p| p.rebase(target)).collect::<Result<_>>()?,
        })
    }
}
