use crate::error::{Error, Result};
use crate::matrix::{PolyMatrix, RatMatrix, SpanCoordinates};
use crate::poly::Poly;
use crate::rational::Rational;

use super::report::{AxiomCheck, Witness};

/// Finite-dimensional Lie algebra given by structure constants
/// `[X_a, X_b] = Σ_c f[a][b][c] X_c`, optionally with a faithful matrix
/// representation.
#[derive(Debug, Clone)]
pub struct LieAlgebra {
    name: String,
    names: Vec<String>,
    /// Sparse bracket table indexed by `a * dim + b`.
    table: Vec<Vec<(usize, Rational)>>,
    rep: Option<Representation>,
}

#[derive(Debug, Clone)]
struct Representation {
    mats: Vec<RatMatrix>,
    span: SpanCoordinates,
}

impl LieAlgebra {
    /// `consts` holds `(a, b, c, value)` with zero-based indices. Entries are
    /// taken literally, so both `(a, b)` and `(b, a)` must be listed.
    pub fn new(
        name: impl Into<String>,
        names: Vec<String>,
        consts: impl IntoIterator<Item = (usize, usize, usize, Rational)>,
        rep: Option<Vec<RatMatrix>>,
    ) -> Result<Self> {
        let name = name.into();
        let dim = names.len();
        if dim == 0 {
            return Err(Error::Invalid(format!("Lie algebra `{name}` has dimension zero")));
        }
        let mut dense = vec![Rational::zero(); dim * dim * dim];
        for (a, b, c, v) in consts {
            if a >= dim || b >= dim || c >= dim {
                return Err(Error::Invalid(format!("structure constant index out of range in `{name}`")));
            }
            let slot = &mut dense[(a * dim + b) * dim + c];
            *slot = &*slot + &v;
        }
        let table = (0..dim * dim)
            .map(|ab| {
                (0..dim)
                    .filter_map(|c| {
                        let v = &dense[ab * dim + c];
                        (!v.is_zero()).then(|| (c, v.clone()))
                    })
                    .collect()
            })
            .collect();
        let rep = match rep {
            None => None,
            Some(mats) => {
                if mats.len() != dim {
                    return Err(Error::LengthMismatch { expected: dim, got: mats.len() });
                }
                let n = mats[0].rows();
                if mats.iter().any(|m| m.rows() != n || m.cols() != n) {
                    return Err(Error::Invalid(format!("representation of `{name}` has mixed matrix sizes")));
                }
                let span = SpanCoordinates::new(&mats)?;
                Some(Representation { mats, span })
            }
        };
        Ok(LieAlgebra { name, names, table, rep })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn basis_name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Nonzero entries of `[X_a, X_b]`.
    pub fn bracket_basis(&self, a: usize, b: usize) -> &[(usize, Rational)] {
        &self.table[a * self.dim() + b]
    }

    pub fn structure_constant(&self, a: usize, b: usize, c: usize) -> Rational {
        self.bracket_basis(a, b)
            .iter()
            .find(|(k, _)| *k == c)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// All nonzero `(a, b, c, f[a][b][c])`.
    pub fn structure_constants(&self) -> Vec<(usize, usize, usize, Rational)> {
        let dim = self.dim();
        (0..dim * dim)
            .flat_map(|ab| self.table[ab].iter().map(move |(c, v)| (ab / dim, ab % dim, *c, v.clone())))
            .collect()
    }

    /// Copy with `f[a][b][c]` replaced by `value` and nothing else changed.
    pub fn with_structure_constant(&self, a: usize, b: usize, c: usize, value: Rational) -> Result<Self> {
        let mut consts: Vec<_> = self.structure_constants().into_iter().filter(|k| (k.0, k.1, k.2) != (a, b, c)).collect();
        consts.push((a, b, c, value));
        let rep = self.rep.as_ref().map(|r| r.mats.clone());
        LieAlgebra::new(self.name.clone(), self.names.clone(), consts, rep)
    }

    pub fn is_abelian(&self) -> bool {
        self.table.iter().all(Vec::is_empty)
    }

    pub fn basis_vector(&self, a: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim()];
        v[a] = Rational::one();
        v
    }

    pub fn bracket(&self, u: &[Rational], v: &[Rational]) -> Result<Vec<Rational>> {
        self.check_len(u)?;
        self.check_len(v)?;
        let mut out = vec![Rational::zero(); self.dim()];
        for (a, ua) in u.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (b, vb) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                let uv = ua * vb;
                for (c, f) in self.bracket_basis(a, b) {
                    out[*c] += &(&uv * f);
                }
            }
        }
        Ok(out)
    }

    pub(crate) fn check_len(&self, v: &[Rational]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::LengthMismatch { expected: self.dim(), got: v.len() });
        }
        Ok(())
    }

    pub fn representation(&self) -> Option<&[RatMatrix]> {
        self.rep.as_ref().map(|r| r.mats.as_slice())
    }

    pub fn rep_size(&self) -> Option<usize> {
        self.rep.as_ref().map(|r| r.span.size())
    }

    fn rep_or_err(&self) -> Result<&Representation> {
        self.rep.as_ref().ok_or_else(|| Error::MissingRepresentation(self.name.clone()))
    }

    pub fn to_matrix(&self, v: &[Rational]) -> Result<RatMatrix> {
        self.check_len(v)?;
        let rep = self.rep_or_err()?;
        let n = rep.span.size();
        let mut m = RatMatrix::zeros(n, n);
        for (c, mat) in v.iter().zip(&rep.mats) {
            if !c.is_zero() {
                m = m.add(&mat.scale(c));
            }
        }
        Ok(m)
    }

    /// Basis coordinates of a matrix in the represented span.
    pub fn from_matrix(&self, m: &RatMatrix) -> Result<Vec<Rational>> {
        let rep = self.rep_or_err()?;
        rep.span.coords(m).ok_or_else(|| Error::ProductNotClosed(self.name.clone()))
    }

    pub fn to_poly_matrix(&self, v: &[Poly]) -> Result<PolyMatrix> {
        let rep = self.rep_or_err()?;
        let reg = v.first().map(|p| p.registry().clone()).ok_or(Error::LengthMismatch {
            expected: self.dim(),
            got: 0,
        })?;
        if v.len() != self.dim() {
            return Err(Error::LengthMismatch { expected: self.dim(), got: v.len() });
        }
        Ok(PolyMatrix::combine(&reg, v, &rep.mats))
    }

    pub fn from_poly_matrix(&self, m: &PolyMatrix) -> Result<Vec<Poly>> {
        let rep = self.rep_or_err()?;
        rep.span.poly_coords(m).ok_or_else(|| Error::ProductNotClosed(self.name.clone()))
    }

    /// `P v P⁻¹` computed in the representation.
    pub fn conjugate(&self, p: &RatMatrix, p_inv: &RatMatrix, v: &[Rational]) -> Result<Vec<Rational>> {
        let m = self.to_matrix(v)?;
        self.from_matrix(&p.mul(&m).mul(p_inv))
    }

    pub(crate) fn check_antisymmetry(&self) -> AxiomCheck {
        let d = self.dim();
        for a in 0..d {
            for b in a..d {
                for c in 0..d {
                    let s = self.structure_constant(a, b, c) + self.structure_constant(b, a, c);
                    if !s.is_zero() {
                        return AxiomCheck::fail("antisymmetry", Witness::new(&self.name, [a, b, c], self.labels([a, b, c])));
                    }
                }
            }
        }
        AxiomCheck::pass("antisymmetry")
    }

    pub(crate) fn check_jacobi(&self) -> AxiomCheck {
        let d = self.dim();
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    // [a,[b,c]] + [b,[c,a]] + [c,[a,b]]
                    let mut acc = vec![Rational::zero(); d];
                    for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                        for (e, f) in self.bracket_basis(y, z) {
                            for (g, h) in self.bracket_basis(x, *e) {
                                acc[*g] += &(f * h);
                            }
                        }
                    }
                    if acc.iter().any(|v| !v.is_zero()) {
                        return AxiomCheck::fail("jacobi", Witness::new(&self.name, [a, b, c], self.labels([a, b, c])));
                    }
                }
            }
        }
        AxiomCheck::pass("jacobi")
    }

    pub(crate) fn check_representation(&self) -> Option<AxiomCheck> {
        let rep = self.rep.as_ref()?;
        let d = self.dim();
        for a in 0..d {
            for b in 0..d {
                let lhs = rep.mats[a].commutator(&rep.mats[b]);
                let rhs = self
                    .to_matrix(&{
                        let mut v = vec![Rational::zero(); d];
                        for (c, f) in self.bracket_basis(a, b) {
                            v[*c] = f.clone();
                        }
                        v
                    })
                    .expect("representation present");
                if lhs != rhs {
                    return Some(AxiomCheck::fail(
                        "representation",
                        Witness::new(&self.name, [a, b], self.labels([a, b])),
                    ));
                }
            }
        }
        Some(AxiomCheck::pass("representation"))
    }

    pub(crate) fn labels<const N: usize>(&self, idx: [usize; N]) -> Vec<String> {
        idx.iter().map(|&i| self.names[i].clone()).collect()
    }

    /// Antisymmetry, Jacobi and, when present, the representation homomorphism.
    pub fn validate(&self) -> Vec<AxiomCheck> {
        let mut out = vec![self.check_antisymmetry(), self.check_jacobi()];
        out.extend(self.check_representation());
        out
    }
}
