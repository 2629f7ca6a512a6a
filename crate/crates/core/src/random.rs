//! Seeded random fixtures: polynomials, connections, gauge pairs and
//! invertible matrices with small rational coefficients.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::DifferentialCrossedModule;
use crate::error::Result;
use crate::forms::{BiGradedForm, ValueKind};
use crate::gauge::{GaugePair, TwoConnection};
use crate::matrix::{PolyMatrix, RatMatrix};
use crate::poly::{Exponents, Poly, Registry};
use crate::rational::Rational;

pub type FixtureRng = ChaCha8Rng;

pub fn rng(seed: u64) -> FixtureRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform over `{−2, …, 2} / {1, 2}`.
pub fn small_rational(rng: &mut impl Rng) -> Rational {
    Rational::new(rng.gen_range(-2..=2), rng.gen_range(1..=2))
}

fn nonzero_rational(rng: &mut impl Rng) -> Rational {
    loop {
        let r = small_rational(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

/// Exponent vectors of all spacetime monomials of total degree `≤ degree`.
fn spacetime_monomials(reg: &Registry, degree: u32) -> Vec<Exponents> {
    monomials_in(reg, reg.nx(), degree)
}

/// Monomials in the first `nvars` registry variables.
fn monomials_in(reg: &Registry, nvars: usize, degree: u32) -> Vec<Exponents> {
    fn rec(pos: usize, nx: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if pos == nx {
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur[pos] = k as u16;
            rec(pos + 1, nx, left - k, cur, out);
        }
        cur[pos] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0u16; reg.arity()];
    rec(0, nvars, degree, &mut cur, &mut out);
    out
}

/// Shape of random coefficient polynomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolyShape {
    pub degree: u32,
    /// Maximum number of monomials drawn per coefficient.
    pub terms: usize,
}

impl PolyShape {
    pub fn new(degree: u32, terms: usize) -> Self {
        PolyShape { degree, terms }
    }
}

impl Default for PolyShape {
    fn default() -> Self {
        PolyShape { degree: 2, terms: 3 }
    }
}

/// Random polynomial in the spacetime variables with up to `shape.terms`
/// monomials of degree `≤ shape.degree`.
pub fn random_poly(rng: &mut impl Rng, reg: &Registry, shape: PolyShape) -> Poly {
    let monos = spacetime_monomials(reg, shape.degree);
    let mut out = Poly::zero(reg);
    for e in monos.choose_multiple(rng, shape.terms.min(monos.len())) {
        out = &out + &Poly::monomial(reg, e.clone(), small_rational(rng));
    }
    out
}

/// Random polynomial in all registry variables, parameters included.
pub fn random_poly_all(rng: &mut impl Rng, reg: &Registry, shape: PolyShape) -> Poly {
    let monos = monomials_in(reg, reg.arity(), shape.degree);
    let mut out = Poly::zero(reg);
    for e in monos.choose_multiple(rng, shape.terms.min(monos.len())) {
        out = &out + &Poly::monomial(reg, e.clone(), small_rational(rng));
    }
    out
}

/// Random scalar form of bidegree `(p, q)` whose coefficients depend on both
/// spacetime and parameters.
pub fn random_parameter_form(rng: &mut impl Rng, reg: &Registry, p: usize, q: usize, shape: PolyShape) -> Result<BiGradedForm> {
    let mut out = BiGradedForm::scalar_zero(reg);
    for tmask in 0u32..(1 << reg.nt()) {
        if tmask.count_ones() as usize != q {
            continue;
        }
        for xmask in 0u32..(1 << reg.nx()) {
            if xmask.count_ones() as usize != p {
                continue;
            }
            let dt: Vec<usize> = (0..reg.nt()).filter(|i| tmask & (1 << i) != 0).collect();
            let dx: Vec<usize> = (0..reg.nx()).filter(|i| xmask & (1 << i) != 0).collect();
            out = out.add(&BiGradedForm::scalar(reg, &dt, &dx, random_poly_all(rng, reg, shape))?)?;
        }
    }
    Ok(out)
}

/// Random homogeneous `p`-form in `dx` with values of the given kind.
pub fn random_form(rng: &mut impl Rng, reg: &Registry, kind: ValueKind, dim: usize, p: usize, shape: PolyShape) -> Result<BiGradedForm> {
    let mut out = BiGradedForm::zero(reg, kind, dim);
    for mask in 0u32..(1 << reg.nx()) {
        if mask.count_ones() as usize != p {
            continue;
        }
        let dx: Vec<usize> = (0..reg.nx()).filter(|i| mask & (1 << i) != 0).collect();
        let coeffs = (0..dim).map(|_| random_poly(rng, reg, shape)).collect();
        out = out.add(&BiGradedForm::monomial(reg, kind, &[], &dx, coeffs)?)?;
    }
    Ok(out)
}

pub fn random_connection(rng: &mut impl Rng, cm: &DifferentialCrossedModule, reg: &Registry, shape: PolyShape) -> Result<TwoConnection> {
    let a = random_form(rng, reg, ValueKind::G, cm.g().dim(), 1, shape)?;
    let b = random_form(rng, reg, ValueKind::H, cm.h().dim(), 2, shape)?;
    TwoConnection::new(cm, a, b)
}

/// Random invertible `n × n` matrix with small rational entries.
pub fn random_invertible(rng: &mut impl Rng, n: usize) -> RatMatrix {
    loop {
        let data = (0..n * n).map(|_| small_rational(rng)).collect();
        let m = RatMatrix::from_rows(n, n, data);
        if m.inverse().is_some() {
            return m;
        }
    }
}

/// Constant group element and a random `φ`. A generic invertible matrix is
/// tried first; algebras it does not preserve get the Cayley transform
/// `(I − X)(I + X)⁻¹` of a random algebra element instead.
pub fn random_constant_gauge(rng: &mut impl Rng, cm: &DifferentialCrossedModule, reg: &Registry, shape: PolyShape, with_phi: bool) -> Result<GaugePair> {
    let n = cm.g().rep_size().ok_or_else(|| crate::Error::MissingRepresentation(cm.g().name().into()))?;
    let phi = random_phi(rng, cm, reg, shape, with_phi)?;
    let gp = GaugePair::constant(reg, &random_invertible(rng, n), phi.clone())?;
    if gp.preserves(cm) {
        return Ok(gp);
    }
    for _ in 0..32 {
        let coeffs: Vec<Rational> = (0..cm.g().dim()).map(|_| small_rational(rng)).collect();
        let x = cm.g().to_matrix(&coeffs)?;
        let id = RatMatrix::identity(n);
        let Some(inv) = id.add(&x).inverse() else { continue };
        let g = id.add(&x.scale(&Rational::from_int(-1))).mul(&inv);
        let gp = GaugePair::constant(reg, &g, phi.clone())?;
        if gp.preserves(cm) {
            return Ok(gp);
        }
    }
    Err(crate::Error::UnsupportedAction(format!("no constant group elements found for `{}`", cm.name())))
}

/// `g = C (I + N) C⁻¹` with `N` strictly upper triangular with polynomial
/// entries and `C` a random constant frame, plus a random `φ`. Fails when the
/// result leaves the algebra, as for compact algebras.
pub fn random_unipotent_gauge(rng: &mut impl Rng, cm: &DifferentialCrossedModule, reg: &Registry, shape: PolyShape, with_phi: bool) -> Result<GaugePair> {
    let n = cm.g().rep_size().ok_or_else(|| crate::Error::MissingRepresentation(cm.g().name().into()))?;
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            entries.push(if j > i { random_poly(rng, reg, shape) } else { Poly::zero(reg) });
        }
    }
    let nil = PolyMatrix::from_entries(reg, n, entries)?;
    let phi = random_phi(rng, cm, reg, shape, with_phi)?;
    let gp = GaugePair::unipotent(&nil, phi)?.conjugated_by(&random_invertible(rng, n))?;
    if !gp.preserves(cm) {
        return Err(crate::Error::UnsupportedAction(format!("unipotent elements leave `{}`", cm.name())));
    }
    Ok(gp)
}

fn random_phi(rng: &mut impl Rng, cm: &DifferentialCrossedModule, reg: &Registry, shape: PolyShape, with_phi: bool) -> Result<BiGradedForm> {
    if with_phi {
        random_form(rng, reg, ValueKind::H, cm.h().dim(), 1, shape)
    } else {
        Ok(BiGradedForm::zero(reg, ValueKind::H, cm.h().dim()))
    }
}

/// Random rational point for spot checks, one value per registry variable.
pub fn random_point(rng: &mut impl Rng, reg: &Registry) -> Vec<Rational> {
    (0..reg.arity()).map(|_| Rational::new(rng.gen_range(-9..=9), rng.gen_range(1..=7))).collect()
}

/// Evaluates a residual at `count` random points and returns how many
/// evaluations were nonzero.
pub fn spot_check(residual: &BiGradedForm, rng: &mut impl Rng, count: usize) -> Result<usize> {
    let mut bad = 0;
    for _ in 0..count {
        let pt = random_point(rng, residual.registry());
        if !residual.eval_at(&pt)?.is_empty() {
            bad += 1;
        }
    }
    Ok(bad)
}

/// Random nonzero rational, for scaling fixtures.
pub fn random_nonzero(rng: &mut impl Rng) -> Rational {
    nonzero_rational(rng)
}
