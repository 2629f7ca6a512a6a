//! Differential forms on `R^m × (simplex parameters)` with values in `g`,
//! `h` or the scalars.
//!
//! A basis element is `dt^J ∧ dx^I` with both multi-indices ascending and all
//! `dt` factors to the left. Every sign below is a shuffle sign relative to
//! that order.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{DifferentialCrossedModule, InvariantPolynomial, LieAlgebra};
use crate::error::{Error, Result};
use crate::matrix::{PolyMatrix, RatMatrix};
use crate::poly::{Poly, Registry};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValueKind {
    G,
    H,
    Scalar,
}

impl ValueKind {
    pub fn label(self) -> &'static str {
        match self {
            ValueKind::G => "g-valued",
            ValueKind::H => "h-valued",
            ValueKind::Scalar => "scalar",
        }
    }
}

/// `(dt mask, dx mask)`; bit `j` of the first is `dt^{j+1}`, bit `i` of the
/// second is `dx^{i+1}`.
pub type Key = (u32, u32);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiGradedForm {
    reg: Registry,
    kind: ValueKind,
    dim: usize,
    comps: BTreeMap<Key, Vec<Poly>>,
}

fn parity(n: u32) -> Rational {
    if n % 2 == 0 {
        Rational::one()
    } else {
        Rational::from_int(-1)
    }
}

/// Sign of sorting the concatenation `a ++ b` of two ascending index sets.
fn shuffle_parity(a: u32, b: u32) -> u32 {
    let mut n = 0;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        n += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    n
}

/// Product key and sign of `(dt^J1 dx^I1) ∧ (dt^J2 dx^I2)`.
fn wedge_key(k1: Key, k2: Key) -> Option<(Key, u32)> {
    if k1.0 & k2.0 != 0 || k1.1 & k2.1 != 0 {
        return None;
    }
    let n = k1.1.count_ones() * k2.0.count_ones() + shuffle_parity(k1.0, k2.0) + shuffle_parity(k1.1, k2.1);
    Some(((k1.0 | k2.0, k1.1 | k2.1), n))
}

fn mask_from(indices: &[usize], bound: usize, what: &str) -> Result<Option<(u32, u32)>> {
    let mut mask = 0u32;
    let mut swaps = 0u32;
    for &i in indices {
        if i >= bound || i >= 32 {
            return Err(Error::Invalid(format!("{what} index {} out of range", i + 1)));
        }
        if mask & (1 << i) != 0 {
            return Ok(None);
        }
        swaps += (mask >> (i + 1)).count_ones();
        mask |= 1 << i;
    }
    Ok(Some((mask, swaps)))
}

fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |b| mask & (1 << b) != 0)
}

impl BiGradedForm {
    pub fn zero(reg: &Registry, kind: ValueKind, dim: usize) -> Self {
        BiGradedForm { reg: reg.clone(), kind, dim, comps: BTreeMap::new() }
    }

    pub fn scalar_zero(reg: &Registry) -> Self {
        Self::zero(reg, ValueKind::Scalar, 1)
    }

    /// `coeffs · dt^{dt[0]} ∧ … ∧ dx^{dx[0]} ∧ …` with zero-based indices in
    /// any order; repeated indices give zero.
    pub fn monomial(
        reg: &Registry,
        kind: ValueKind,
        dt: &[usize],
        dx: &[usize],
        coeffs: Vec<Poly>,
    ) -> Result<Self> {
        if kind == ValueKind::Scalar && coeffs.len() != 1 {
            return Err(Error::LengthMismatch { expected: 1, got: coeffs.len() });
        }
        if coeffs.iter().any(|p| p.registry() != reg) {
            return Err(Error::RegistryMismatch);
        }
        let mut out = Self::zero(reg, kind, coeffs.len());
        let (Some((tm, ts)), Some((xm, xs))) = (mask_from(dt, reg.nt(), "dt")?, mask_from(dx, reg.nx(), "dx")?)
        else {
            return Ok(out);
        };
        let s = parity(ts + xs);
        out.add_component((tm, xm), coeffs.iter().map(|p| p.scale(&s)).collect());
        Ok(out)
    }

    pub fn scalar(reg: &Registry, dt: &[usize], dx: &[usize], coeff: Poly) -> Result<Self> {
        Self::monomial(reg, ValueKind::Scalar, dt, dx, vec![coeff])
    }

    /// Zero-form with the given coefficient vector.
    pub fn function(reg: &Registry, kind: ValueKind, coeffs: Vec<Poly>) -> Result<Self> {
        Self::monomial(reg, kind, &[], &[], coeffs)
    }

    pub fn registry(&self) -> &Registry {
        &self.reg
    }

    pub fn kind(&self) -> ValueKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> impl Iterator<Item = (&Key, &Vec<Poly>)> {
        self.comps.iter()
    }

    pub fn component(&self, dt_mask: u32, dx_mask: u32) -> Option<&[Poly]> {
        self.comps.get(&(dt_mask, dx_mask)).map(Vec::as_slice)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Number of nonzero polynomial terms over all components and values.
    pub fn term_count(&self) -> usize {
        self.comps.values().flat_map(|v| v.iter().map(Poly::len)).sum()
    }

    /// `(dx degree, dt degree)` pairs present.
    pub fn bidegrees(&self) -> Vec<(u32, u32)> {
        let mut v: Vec<(u32, u32)> = self.comps.keys().map(|k| (k.1.count_ones(), k.0.count_ones())).collect();
        v.sort();
        v.dedup();
        v
    }

    /// `(p, q)` when every component has dx degree `p` and dt degree `q`.
    pub fn bidegree(&self) -> Option<(u32, u32)> {
        match self.bidegrees().as_slice() {
            [single] => Some(*single),
            _ => None,
        }
    }

    pub(crate) fn add_component(&mut self, key: Key, coeffs: Vec<Poly>) {
        debug_assert_eq!(coeffs.len(), self.dim);
        match self.comps.get_mut(&key) {
            Some(existing) => {
                for (a, b) in existing.iter_mut().zip(&coeffs) {
                    a.add_assign_unchecked(b, &Rational::one());
                }
                if existing.iter().all(Poly::is_zero) {
                    self.comps.remove(&key);
                }
            }
            None => {
                if coeffs.iter().any(|p| !p.is_zero()) {
                    self.comps.insert(key, coeffs);
                }
            }
        }
    }

    fn from_map(reg: &Registry, kind: ValueKind, dim: usize, mut comps: BTreeMap<Key, Vec<Poly>>) -> Self {
        comps.retain(|_, v| v.iter().any(|p| !p.is_zero()));
        BiGradedForm { reg: reg.clone(), kind, dim, comps }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.reg != other.reg {
            return Err(Error::RegistryMismatch);
        }
        if self.kind != other.kind {
            return Err(Error::KindMismatch { expected: self.kind.label(), got: other.kind.label() });
        }
        if self.dim != other.dim {
            return Err(Error::LengthMismatch { expected: self.dim, got: other.dim });
        }
        Ok(())
    }

    fn expect_kind(&self, kind: ValueKind, dim: usize) -> Result<()> {
        if self.kind != kind {
            return Err(Error::KindMismatch { expected: kind.label(), got: self.kind.label() });
        }
        if self.dim != dim {
            return Err(Error::LengthMismatch { expected: dim, got: self.dim });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, &Rational::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, &Rational::from_int(-1))
    }

    /// `self + c · other`.
    pub fn add_scaled(&self, other: &Self, c: &Rational) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (k, v) in &other.comps {
            out.add_component(*k, v.iter().map(|p| p.scale(c)).collect());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.reg, self.kind, self.dim);
        }
        let comps = self.comps.iter().map(|(k, v)| (*k, v.iter().map(|p| p.scale(c)).collect())).collect();
        BiGradedForm { reg: self.reg.clone(), kind: self.kind, dim: self.dim, comps }
    }

    pub fn neg(&self) -> Self {
        self.scale(&Rational::from_int(-1))
    }

    /// Multiply every coefficient by a polynomial function.
    pub fn mul_poly(&self, f: &Poly) -> Result<Self> {
        if f.registry() != &self.reg {
            return Err(Error::RegistryMismatch);
        }
        let comps = self
            .comps
            .iter()
            .map(|(k, v)| {
                (*k, v.iter().map(|p| {
                    let mut out = Poly::zero(&self.reg);
                    out.add_product(p, f, &Rational::one());
                    out
                }).collect())
            })
            .collect();
        Ok(Self::from_map(&self.reg, self.kind, self.dim, comps))
    }

    /// Apply a linear map to each coefficient vector.
    pub(crate) fn map_values(&self, kind: ValueKind, dim: usize, f: impl Fn(&[Poly]) -> Vec<Poly>) -> Self {
        let comps = self.comps.iter().map(|(k, v)| (*k, f(v))).collect();
        Self::from_map(&self.reg, kind, dim, comps)
    }

    /// Coefficient `a` as a scalar form.
    pub fn scalar_component(&self, a: usize) -> Self {
        let comps = self.comps.iter().map(|(k, v)| (*k, vec![v[a].clone()])).collect();
        Self::from_map(&self.reg, ValueKind::Scalar, 1, comps)
    }

    /// Keep only the components of the given bidegree `(dx, dt)`.
    pub fn homogeneous_part(&self, p: u32, q: u32) -> Self {
        let comps = self
            .comps
            .iter()
            .filter(|(k, _)| k.1.count_ones() == p && k.0.count_ones() == q)
            .map(|(k, v)| (*k, v.clone()))
            .collect();
        BiGradedForm { reg: self.reg.clone(), kind: self.kind, dim: self.dim, comps }
    }

    /// Exterior derivative in the spacetime variables.
    pub fn d_x(&self) -> Self {
        let nx = self.reg.nx();
        let mut out = Self::zero(&self.reg, self.kind, self.dim);
        for (&(tm, xm), v) in &self.comps {
            for i in 0..nx {
                if xm & (1 << i) != 0 {
                    continue;
                }
                let dv: Vec<Poly> = v.iter().map(|p| p.diff_index(i)).collect();
                if dv.iter().all(Poly::is_zero) {
                    continue;
                }
                // dx^i moves past dt^J, then into place among dx^I
                let n = tm.count_ones() + (xm & ((1 << i) - 1)).count_ones();
                let s = parity(n);
                out.add_component((tm, xm | (1 << i)), dv.iter().map(|p| p.scale(&s)).collect());
            }
        }
        out
    }

    /// Exterior derivative in the simplex parameters.
    pub fn d_t(&self) -> Self {
        let nt = self.reg.nt();
        let mut out = Self::zero(&self.reg, self.kind, self.dim);
        for (&(tm, xm), v) in &self.comps {
            for j in 0..nt {
                if tm & (1 << j) != 0 {
                    continue;
                }
                let idx = self.reg.t_index(j);
                let dv: Vec<Poly> = v.iter().map(|p| p.diff_index(idx)).collect();
                if dv.iter().all(Poly::is_zero) {
                    continue;
                }
                let s = parity((tm & ((1 << j) - 1)).count_ones());
                out.add_component((tm | (1 << j), xm), dv.iter().map(|p| p.scale(&s)).collect());
            }
        }
        out
    }

    /// Shared wedge kernel: `combine(u, v, sign, out)` accumulates the value
    /// product of two coefficient vectors.
    fn wedge_with(
        a: &Self,
        b: &Self,
        kind: ValueKind,
        dim: usize,
        combine: impl Fn(&[Poly], &[Poly], &Rational, &mut [Poly]),
    ) -> Result<Self> {
        if a.reg != b.reg {
            return Err(Error::RegistryMismatch);
        }
        let mut acc: BTreeMap<Key, Vec<Poly>> = BTreeMap::new();
        for (&k1, u) in &a.comps {
            for (&k2, v) in &b.comps {
                let Some((k, n)) = wedge_key(k1, k2) else { continue };
                let slot = acc.entry(k).or_insert_with(|| vec![Poly::zero(&a.reg); dim]);
                combine(u, v, &parity(n), slot);
            }
        }
        Ok(Self::from_map(&a.reg, kind, dim, acc))
    }

    /// Wedge of two scalar forms.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.expect_kind(ValueKind::Scalar, 1)?;
        other.expect_kind(ValueKind::Scalar, 1)?;
        Self::wedge_with(self, other, ValueKind::Scalar, 1, |u, v, s, out| out[0].add_product(&u[0], &v[0], s))
    }

    /// `s ∧ ω` for a scalar form `s`.
    pub fn scalar_wedge(s: &Self, omega: &Self) -> Result<Self> {
        s.expect_kind(ValueKind::Scalar, 1)?;
        Self::wedge_with(s, omega, omega.kind, omega.dim, |u, v, sg, out| {
            for (o, p) in out.iter_mut().zip(v) {
                o.add_product(&u[0], p, sg);
            }
        })
    }

    /// `ω ∧ s` for a scalar form `s`.
    pub fn wedge_scalar(omega: &Self, s: &Self) -> Result<Self> {
        s.expect_kind(ValueKind::Scalar, 1)?;
        Self::wedge_with(omega, s, omega.kind, omega.dim, |u, v, sg, out| {
            for (o, p) in out.iter_mut().zip(u) {
                o.add_product(p, &v[0], sg);
            }
        })
    }

    /// `Σ ω1^a ∧ ω2^b [X_a, X_b]`; both forms take values in `alg`.
    pub fn wedge_bracket(alg: &LieAlgebra, w1: &Self, w2: &Self) -> Result<Self> {
        if w1.kind == ValueKind::Scalar {
            return Err(Error::KindMismatch { expected: ValueKind::G.label(), got: w1.kind.label() });
        }
        w1.expect_kind(w1.kind, alg.dim())?;
        w2.expect_kind(w1.kind, alg.dim())?;
        Self::wedge_with(w1, w2, w1.kind, alg.dim(), |u, v, s, out| {
            bilinear_into(u, v, s, out, |a, b| alg.bracket_basis(a, b))
        })
    }

    /// `Σ ω^a ∧ η^i X_a ▷ Y_i`.
    pub fn wedge_action(cm: &DifferentialCrossedModule, w: &Self, eta: &Self) -> Result<Self> {
        w.expect_kind(ValueKind::G, cm.g().dim())?;
        eta.expect_kind(ValueKind::H, cm.h().dim())?;
        Self::wedge_with(w, eta, ValueKind::H, cm.h().dim(), |u, v, s, out| {
            bilinear_into(u, v, s, out, |a, i| cm.act_basis(a, i))
        })
    }

    /// `Σ ω1^a ∧ ω2^b X_a X_b`, the product taken in the representation of
    /// `alg` and expressed back in its basis.
    pub fn wedge_matrix(alg: &LieAlgebra, w1: &Self, w2: &Self) -> Result<Self> {
        if w1.kind == ValueKind::Scalar {
            return Err(Error::KindMismatch { expected: ValueKind::G.label(), got: w1.kind.label() });
        }
        w1.expect_kind(w1.kind, alg.dim())?;
        w2.expect_kind(w1.kind, alg.dim())?;
        let reps = alg.representation().ok_or_else(|| Error::MissingRepresentation(alg.name().to_string()))?;
        let n = reps[0].rows();
        let products: Vec<Vec<RatMatrix>> =
            reps.iter().map(|x| reps.iter().map(|y| x.mul(y)).collect()).collect();
        let entries = Self::wedge_with(w1, w2, w1.kind, n * n, |u, v, s, out| {
            for (a, ua) in u.iter().enumerate().filter(|(_, p)| !p.is_zero()) {
                for (b, vb) in v.iter().enumerate().filter(|(_, p)| !p.is_zero()) {
                    let nz: Vec<(usize, &Rational)> =
                        products[a][b].entries().iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
                    match nz.as_slice() {
                        [] => {}
                        [(pos, c)] => out[*pos].add_product(ua, vb, &(s * *c)),
                        _ => {
                            let mut prod = Poly::zero(ua.registry());
                            prod.add_product(ua, vb, s);
                            for (pos, c) in nz {
                                out[pos].add_assign_unchecked(&prod, c);
                            }
                        }
                    }
                }
            }
        })?;
        let mut comps = BTreeMap::new();
        for (k, v) in entries.comps {
            let m = PolyMatrix::from_entries(&w1.reg, n, v)?;
            comps.insert(k, alg.from_poly_matrix(&m)?);
        }
        Ok(Self::from_map(&w1.reg, w1.kind, alg.dim(), comps))
    }

    /// Apply `α` to an `h`-valued form.
    pub fn alpha_push(cm: &DifferentialCrossedModule, eta: &Self) -> Result<Self> {
        eta.expect_kind(ValueKind::H, cm.h().dim())?;
        let dg = cm.g().dim();
        Ok(eta.map_values(ValueKind::G, dg, |v| {
            let mut out = vec![Poly::zero(&eta.reg); dg];
            for (i, p) in v.iter().enumerate().filter(|(_, p)| !p.is_zero()) {
                for (a, c) in cm.alpha_col(i) {
                    out[*a].add_assign_unchecked(p, c);
                }
            }
            out
        }))
    }

    /// `⟨ω_1 ∧ ⋯ ∧ ω_n, η⟩`: the scalar form `Σ T[a][i] ω_1^{a_1} ∧ ⋯ ∧ ω_n^{a_n} ∧ η^i`.
    pub fn pair(p: &InvariantPolynomial, omegas: &[&Self], eta: &Self) -> Result<Self> {
        if omegas.len() != p.arity() {
            return Err(Error::ArityMismatch { expected: p.arity(), got: omegas.len() });
        }
        for w in omegas {
            w.expect_kind(ValueKind::G, p.dim_g())?;
            if w.reg != eta.reg {
                return Err(Error::RegistryMismatch);
            }
        }
        eta.expect_kind(ValueKind::H, p.dim_h())?;
        let reg = &eta.reg;
        if eta.is_zero() || omegas.iter().any(|w| w.is_zero()) {
            return Ok(Self::scalar_zero(reg));
        }
        let eta_parts: Vec<Self> = (0..p.dim_h()).map(|i| eta.scalar_component(i)).collect();
        // contract the h slot first, then wedge the g arguments in from the right
        let mut level: BTreeMap<Vec<usize>, Self> = BTreeMap::new();
        for t in p.g_tuples() {
            let mut acc = Self::scalar_zero(reg);
            for (i, part) in eta_parts.iter().enumerate() {
                let c = p.get(&t, i);
                if !c.is_zero() && !part.is_zero() {
                    acc = acc.add_scaled(part, c)?;
                }
            }
            if !acc.is_zero() {
                level.insert(t, acc);
            }
        }
        for k in (0..p.arity()).rev() {
            let parts: Vec<Self> = (0..p.dim_g()).map(|a| omegas[k].scalar_component(a)).collect();
            let mut next: BTreeMap<Vec<usize>, Self> = BTreeMap::new();
            for (t, s) in level {
                let part = &parts[t[k]];
                if part.is_zero() {
                    continue;
                }
                let w = part.wedge(&s)?;
                let prefix = t[..k].to_vec();
                match next.get_mut(&prefix) {
                    Some(e) => *e = e.add(&w)?,
                    None => {
                        next.insert(prefix, w);
                    }
                }
            }
            level = next;
        }
        Ok(level.remove(&Vec::new()).unwrap_or_else(|| Self::scalar_zero(reg)))
    }

    /// Integral over the standard simplex spanned by all parameters of the
    /// registry. Only the component carrying `dt^1 ∧ ⋯ ∧ dt^k` contributes;
    /// the result lives on the spacetime-only registry.
    pub fn simplex_integrate_form(&self) -> Self {
        let k = self.reg.nt();
        let top: u32 = if k == 0 { 0 } else { (1u32 << k) - 1 };
        let target = self.reg.spacetime_only();
        let idxs: Vec<usize> = (0..k).map(|j| self.reg.t_index(j)).collect();
        let comps = self
            .comps
            .iter()
            .filter(|(key, _)| key.0 == top)
            .map(|(key, v)| ((0, key.1), v.iter().map(|p| p.integrate_onto(&idxs, &target)).collect()))
            .collect();
        Self::from_map(&target, self.kind, self.dim, comps)
    }

    /// Integrate the coefficients of a form without `dt` components over the
    /// standard simplex in the named parameters, which are removed from the
    /// registry.
    pub fn integrate_coefficients(&self, params: &[&str]) -> Result<Self> {
        if self.comps.keys().any(|k| k.0 != 0) {
            return Err(Error::Invalid("coefficient integration expects a form without dt components".into()));
        }
        let mut idxs = Vec::new();
        for name in params {
            let idx = self.reg.index_of(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
            if idx < self.reg.nx() {
                return Err(Error::NotSimplexVariable(name.to_string()));
            }
            if idxs.contains(&idx) {
                return Err(Error::Invalid(format!("parameter `{name}` listed twice")));
            }
            idxs.push(idx);
        }
        let kept: Vec<String> =
            self.reg.t_vars().iter().filter(|v| !params.contains(&v.as_str())).cloned().collect();
        let target = self.reg.with_params(kept)?;
        let comps = self
            .comps
            .iter()
            .map(|(k, v)| (*k, v.iter().map(|p| p.integrate_onto(&idxs, &target)).collect()))
            .collect();
        Ok(Self::from_map(&target, self.kind, self.dim, comps))
    }

    /// Restriction to face `i` of the `k`-simplex of parameters, pulled back to
    /// the standard `(k-1)`-simplex with its own orientation.
    pub fn face_restrict(&self, i: usize) -> Result<Self> {
        let k = self.reg.nt();
        if k == 0 || i > k {
            return Err(Error::InvalidFace { index: i, dim: k });
        }
        let target = self.reg.with_simplex(k - 1);
        let nx = self.reg.nx();
        let last = k - 1;
        let (elim, sign) = if i == 0 { (last, parity(k as u32 + 1)) } else { (i - 1, Rational::one()) };
        let map: Vec<Option<usize>> = (0..self.reg.arity())
            .map(|v| match v.checked_sub(nx) {
                None => Some(v),
                Some(j) if j == elim => None,
                Some(j) if j > elim => Some(v - 1),
                Some(_) => Some(v),
            })
            .collect();
        let shift = |tm: u32| -> u32 {
            let low = tm & ((1 << elim) - 1);
            let high = (tm >> (elim + 1)) << elim;
            low | high
        };
        let value = if i == 0 {
            let mut p = Poly::one(&self.reg);
            for j in 0..last {
                p = &p - &Poly::var(&self.reg, self.reg.t_index(j));
            }
            p
        } else {
            Poly::zero(&self.reg)
        };
        let elim_idx = self.reg.t_index(elim);
        let mut out = Self::zero(&target, self.kind, self.dim);
        for (&(tm, xm), v) in &self.comps {
            let restricted: Vec<Poly> = v
                .iter()
                .map(|p| Ok(p.substitute(elim_idx, &value)?.reindex(&target, &map).scale(&sign)))
                .collect::<Result<_>>()?;
            if tm & (1 << elim) == 0 {
                out.add_component((shift(tm), xm), restricted);
            } else if i == 0 {
                // dt^k = -Σ_{j<k} dt^j; dt^k is the last dt factor
                let rest = tm & !(1 << elim);
                for j in bits(!rest & ((1 << last) - 1)) {
                    let n = 1 + (rest >> (j + 1)).count_ones();
                    let s = parity(n);
                    out.add_component((shift(rest | (1 << j)), xm), restricted.iter().map(|p| p.scale(&s)).collect());
                }
            }
        }
        Ok(out)
    }

    /// Substitute a polynomial for a parameter. The parameter stays in the
    /// registry; components carrying its `dt` are dropped since the
    /// substitution is only used for constant values.
    pub fn substitute_param(&self, name: &str, value: &Poly) -> Result<Self> {
        let idx = self.reg.index_of(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        if idx < self.reg.nx() {
            return Err(Error::NotSimplexVariable(name.to_string()));
        }
        if value.total_degree() > 0 {
            return Err(Error::Invalid("only constant parameter values are supported".into()));
        }
        let bit = 1u32 << (idx - self.reg.nx());
        let mut out = Self::zero(&self.reg, self.kind, self.dim);
        for (&key, v) in &self.comps {
            if key.0 & bit != 0 {
                continue;
            }
            out.add_component(key, v.iter().map(|p| p.substitute(idx, value)).collect::<Result<_>>()?);
        }
        Ok(out)
    }

    /// Move to another registry, matching variables by name.
    pub fn rebase(&self, target: &Registry) -> Result<Self> {
        if &self.reg == target {
            return Ok(self.clone());
        }
        if self.reg.x_vars() != target.x_vars() {
            return Err(Error::RegistryMismatch);
        }
        let tmap: Vec<Option<usize>> = self.reg.t_vars().iter().map(|n| target.t_vars().iter().position(|m| m == n)).collect();
        let mut out = Self::zero(target, self.kind, self.dim);
        for (&(tm, xm), v) in &self.comps {
            let mut new_tm = 0u32;
            let mut order = Vec::new();
            for j in bits(tm) {
                let nj = tmap[j].ok_or_else(|| Error::UnknownVariable(self.reg.t_vars()[j].clone()))?;
                new_tm |= 1 << nj;
                order.push(nj);
            }
            let (_, swaps) = mask_from(&order, 32, "dt")?.expect("distinct");
            let s = parity(swaps);
            out.add_component((new_tm, xm), v.iter().map(|p| Ok(p.rebase(target)?.scale(&s))).collect::<Result<_>>()?);
        }
        Ok(out)
    }

    /// Coefficients evaluated at a full rational point.
    pub fn eval_at(&self, point: &[Rational]) -> Result<BTreeMap<Key, Vec<Rational>>> {
        let mut out = BTreeMap::new();
        for (k, v) in &self.comps {
            let vals: Vec<Rational> = v.iter().map(|p| p.eval(point)).collect::<Result<_>>()?;
            if vals.iter().any(|x| !x.is_zero()) {
                out.insert(*k, vals);
            }
        }
        Ok(out)
    }
}

/// `out[c] += s · u[a] v[b] · table(a, b)[c]`.
fn bilinear_into<'t>(
    u: &[Poly],
    v: &[Poly],
    s: &Rational,
    out: &mut [Poly],
    table: impl Fn(usize, usize) -> &'t [(usize, Rational)],
) {
    for (a, ua) in u.iter().enumerate().filter(|(_, p)| !p.is_zero()) {
        for (b, vb) in v.iter().enumerate().filter(|(_, p)| !p.is_zero()) {
            match table(a, b) {
                [] => {}
                [(c, f)] => out[*c].add_product(ua, vb, &(s * f)),
                many => {
                    let mut prod = Poly::zero(ua.registry());
                    prod.add_product(ua, vb, s);
                    for (c, f) in many {
                        out[*c].add_assign_unchecked(&prod, f);
                    }
                }
            }
        }
    }
}

impl fmt::Display for BiGradedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(tm, xm), v) in &self.comps {
            let basis: Vec<String> = bits(tm)
                .map(|j| format!("d{}", self.reg.t_vars()[j]))
                .chain(bits(xm).map(|i| format!("d{}", self.reg.x_vars()[i])))
                .collect();
            let basis = if basis.is_empty() { String::new() } else { format!(" {}", basis.join("^")) };
            for (a, p) in v.iter().enumerate().filter(|(_, p)| !p.is_zero()) {
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                match self.kind {
                    ValueKind::Scalar => write!(f, "({p}){basis}")?,
                    _ => write!(f, "({p})[{}]{basis}", a + 1)?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin;
    use crate::poly::{parse_poly, VarRegistry};

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn poly(reg: &Registry, s: &str) -> Poly {
        parse_poly(reg, s).unwrap()
    }

    fn unit(reg: &Registry, dim: usize, a: usize, p: Poly) -> Vec<Poly> {
        (0..dim).map(|b| if a == b { p.clone() } else { Poly::zero(reg) }).collect()
    }

    #[test]
    fn d_x_examples() {
        let reg = VarRegistry::spacetime(3);
        let w = BiGradedForm::scalar(&reg, &[], &[0], poly(&reg, "x2")).unwrap();
        let expect = BiGradedForm::scalar(&reg, &[], &[0, 1], poly(&reg, "-1")).unwrap();
        assert_eq!(w.d_x(), expect);
        let c = BiGradedForm::scalar(&reg, &[], &[1], poly(&reg, "5")).unwrap();
        assert!(c.d_x().is_zero());
        let v = BiGradedForm::scalar(&reg, &[], &[2], poly(&reg, "x1*x2")).unwrap();
        assert!(!v.d_x().is_zero());
        assert!(v.d_x().d_x().is_zero());
    }

    #[test]
    fn d_t_examples() {
        let reg = VarRegistry::simplex(2, 2);
        let w = BiGradedForm::scalar(&reg, &[], &[0], poly(&reg, "t1")).unwrap();
        let expect = BiGradedForm::scalar(&reg, &[0], &[0], poly(&reg, "1")).unwrap();
        assert_eq!(w.d_t(), expect);
        let x = BiGradedForm::scalar(&reg, &[], &[1], poly(&reg, "x1")).unwrap();
        assert!(x.d_t().is_zero());
        let f = BiGradedForm::scalar(&reg, &[], &[], poly(&reg, "t1*t2")).unwrap();
        assert!(f.d_t().d_t().is_zero());
    }

    #[test]
    fn anticommuting_differentials() {
        let reg = VarRegistry::simplex(3, 2);
        let w = BiGradedForm::scalar(&reg, &[1], &[2], poly(&reg, "x1*t1^2 + x2*x3*t1*t2 - t2")).unwrap();
        let lhs = w.d_x().d_t().add(&w.d_t().d_x()).unwrap();
        assert!(lhs.is_zero());
    }

    #[test]
    fn monomial_ordering_sign() {
        let reg = VarRegistry::simplex(3, 2);
        let a = BiGradedForm::scalar(&reg, &[1, 0], &[2, 0], poly(&reg, "1")).unwrap();
        // dt2 dt1 dx3 dx1 = (+1) dt1 dt2 dx1 dx3
        assert_eq!(a.component(0b11, 0b101).unwrap()[0], poly(&reg, "1"));
        let b = BiGradedForm::scalar(&reg, &[], &[1, 1], poly(&reg, "1")).unwrap();
        assert!(b.is_zero());
    }

    #[test]
    fn wedge_moves_dt_left() {
        let reg = VarRegistry::simplex(2, 1);
        let dx1 = BiGradedForm::scalar(&reg, &[], &[0], Poly::one(&reg)).unwrap();
        let dt1 = BiGradedForm::scalar(&reg, &[0], &[], Poly::one(&reg)).unwrap();
        let w = dx1.wedge(&dt1).unwrap();
        assert_eq!(w.component(1, 1).unwrap()[0], poly(&reg, "-1"));
    }

    #[test]
    fn so3_bracket_of_one_forms_is_symmetric() {
        let reg = VarRegistry::spacetime(2);
        let so3 = builtin::so3();
        let w1 = BiGradedForm::monomial(&reg, ValueKind::G, &[], &[0], unit(&reg, 3, 0, Poly::one(&reg))).unwrap();
        let w2 = BiGradedForm::monomial(&reg, ValueKind::G, &[], &[1], unit(&reg, 3, 1, Poly::one(&reg))).unwrap();
        let expect = BiGradedForm::monomial(&reg, ValueKind::G, &[], &[0, 1], unit(&reg, 3, 2, Poly::one(&reg))).unwrap();
        assert_eq!(BiGradedForm::wedge_bracket(&so3, &w1, &w2).unwrap(), expect);
        assert_eq!(BiGradedForm::wedge_bracket(&so3, &w2, &w1).unwrap(), expect);
    }

    #[test]
    fn matrix_wedge_of_elementary_matrices() {
        let reg = VarRegistry::spacetime(2);
        let gl2 = builtin::gl(2);
        let a = BiGradedForm::monomial(&reg, ValueKind::G, &[], &[0], unit(&reg, 4, 1, Poly::one(&reg))).unwrap();
        let b = BiGradedForm::monomial(&reg, ValueKind::G, &[], &[1], unit(&reg, 4, 2, Poly::one(&reg))).unwrap();
        let expect = BiGradedForm::monomial(&reg, ValueKind::G, &[], &[0, 1], unit(&reg, 4, 0, Poly::one(&reg))).unwrap();
        assert_eq!(BiGradedForm::wedge_matrix(&gl2, &a, &b).unwrap(), expect);
    }

    #[test]
    fn matrix_wedge_of_so3_one_forms_closes() {
        let reg = VarRegistry::spacetime(2);
        let so3 = builtin::so3();
        let a = BiGradedForm::monomial(&reg, ValueKind::G, &[], &[0], vec![poly(&reg, "x2"), poly(&reg, "1"), poly(&reg, "x1")])
            .unwrap()
            .add(&BiGradedForm::monomial(&reg, ValueKind::G, &[], &[1], vec![poly(&reg, "1"), poly(&reg, "-2"), poly(&reg, "0")]).unwrap())
            .unwrap();
        let aa = BiGradedForm::wedge_matrix(&so3, &a, &a).unwrap();
        let half = BiGradedForm::wedge_bracket(&so3, &a, &a).unwrap().scale(&Rational::new(1, 2));
        assert_eq!(aa, half);
        // a single so(3) generator squared leaves the algebra
        let b = BiGradedForm::function(&reg, ValueKind::G, unit(&reg, 3, 0, Poly::one(&reg))).unwrap();
        assert!(matches!(BiGradedForm::wedge_matrix(&so3, &b, &b), Err(Error::ProductNotClosed(_))));
    }

    #[test]
    fn poincare_wedge_action() {
        let reg = VarRegistry::spacetime(2);
        let cm = builtin::poincare2();
        let m12 = cm.g().index_of("M12").unwrap();
        let p2 = cm.h().index_of("P2").unwrap();
        let p1 = cm.h().index_of("P1").unwrap();
        let w = BiGradedForm::monomial(&reg, ValueKind::G, &[], &[0], unit(&reg, 6, m12, Poly::one(&reg))).unwrap();
        let eta = BiGradedForm::monomial(&reg, ValueKind::H, &[], &[1], unit(&reg, 4, p2, Poly::one(&reg))).unwrap();
        let expect = BiGradedForm::monomial(&reg, ValueKind::H, &[], &[0, 1], unit(&reg, 4, p1, Poly::one(&reg))).unwrap();
        assert_eq!(BiGradedForm::wedge_action(&cm, &w, &eta).unwrap(), expect);
        assert!(BiGradedForm::alpha_push(&cm, &eta).unwrap().is_zero());
        assert!(matches!(
            BiGradedForm::wedge_action(&cm, &eta, &w),
            Err(Error::KindMismatch { .. })
        ));
    }

    #[test]
    fn pairing_example() {
        let reg = VarRegistry::spacetime(3);
        let cm = builtin::adjoint_module(builtin::gl(2)).unwrap();
        let p = InvariantPolynomial::from_trace(&cm, 1).unwrap();
        let w = BiGradedForm::monomial(&reg, ValueKind::G, &[], &[0], unit(&reg, 4, 1, Poly::one(&reg))).unwrap();
        let eta = BiGradedForm::monomial(&reg, ValueKind::H, &[], &[1, 2], unit(&reg, 4, 2, Poly::one(&reg))).unwrap();
        let expect = BiGradedForm::scalar(&reg, &[], &[0, 1, 2], Poly::one(&reg)).unwrap();
        assert_eq!(BiGradedForm::pair(&p, &[&w], &eta).unwrap(), expect);
        let zero = BiGradedForm::zero(&reg, ValueKind::G, 4);
        assert!(BiGradedForm::pair(&p, &[&zero], &eta).unwrap().is_zero());
        assert!(matches!(BiGradedForm::pair(&p, &[], &eta), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn simplex_integration_examples() {
        let reg = VarRegistry::simplex(2, 1);
        let w = BiGradedForm::scalar(&reg, &[0], &[1], poly(&reg, "t1*x1")).unwrap();
        let expect = BiGradedForm::scalar(&reg.spacetime_only(), &[], &[1], parse_poly(&reg.spacetime_only(), "1/2*x1").unwrap()).unwrap();
        assert_eq!(w.simplex_integrate_form(), expect);
        let f = BiGradedForm::scalar(&reg, &[], &[], poly(&reg, "t1^2")).unwrap();
        let i = f.d_t().simplex_integrate_form();
        assert_eq!(i.component(0, 0).unwrap()[0], Poly::one(&reg.spacetime_only()));
        let reg2 = VarRegistry::simplex(2, 2);
        let partial = BiGradedForm::scalar(&reg2, &[0], &[], poly(&reg2, "t2")).unwrap();
        assert!(partial.simplex_integrate_form().is_zero());
    }

    #[test]
    fn faces_of_an_interval() {
        let reg = VarRegistry::simplex(1, 1);
        let w = BiGradedForm::scalar(&reg, &[], &[0], poly(&reg, "3*t1^2 + x1")).unwrap();
        let pt = reg.spacetime_only();
        let f0 = w.face_restrict(0).unwrap();
        let f1 = w.face_restrict(1).unwrap();
        assert_eq!(f0, BiGradedForm::scalar(&pt, &[], &[0], parse_poly(&pt, "3 + x1").unwrap()).unwrap());
        assert_eq!(f1, BiGradedForm::scalar(&pt, &[], &[0], parse_poly(&pt, "x1").unwrap()).unwrap());
        assert!(matches!(w.face_restrict(2), Err(Error::InvalidFace { index: 2, dim: 1 })));
        let c = BiGradedForm::scalar(&reg, &[], &[], Poly::constant(&reg, q(7))).unwrap();
        assert_eq!(c.face_restrict(1).unwrap(), BiGradedForm::scalar(&pt, &[], &[], Poly::constant(&pt, q(7))).unwrap());
    }

    #[test]
    fn stokes_on_triangle_for_t1_dt2() {
        let reg = VarRegistry::simplex(1, 2);
        let w = BiGradedForm::scalar(&reg, &[1], &[], poly(&reg, "t1")).unwrap();
        let rhs = w.d_t().simplex_integrate_form();
        let mut lhs = BiGradedForm::scalar_zero(&reg.spacetime_only());
        for i in 0..=2 {
            let s = parity(i as u32);
            lhs = lhs.add_scaled(&w.face_restrict(i).unwrap().simplex_integrate_form(), &s).unwrap();
        }
        assert_eq!(lhs, rhs);
        assert!(!rhs.is_zero());
    }

    #[test]
    fn rebase_permutes_dt_factors() {
        let reg = VarRegistry::simplex(1, 2);
        let w = BiGradedForm::scalar(&reg, &[0, 1], &[], Poly::one(&reg)).unwrap();
        let swapped = reg.with_params(["t2", "t1"]).unwrap();
        let r = w.rebase(&swapped).unwrap();
        assert_eq!(r.component(0b11, 0).unwrap()[0], Poly::constant(&swapped, q(-1)));
    }
}
