//! Formal expressions `⟨X_1 ⋯ X_n, Y⟩` in the family generators, the
//! homotopy derivation `l_t`, the formal `d_t`, evaluation into concrete forms,
//! and the identity checks built on them.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::algebra::{DifferentialCrossedModule, InvariantPolynomial};
use crate::error::{Error, Result};
use crate::forms::{BiGradedForm, ValueKind};
use crate::gauge::{
    b_form, chsas_form, family_curvature, invariant_form_p, q_boundary, transgression_q, ConnectionFamily,
    TwoConnection,
};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    At,
    Bt,
    Ft,
    Gt,
    DtAt,
    DtBt,
    DtFt,
    DtGt,
}

impl Generator {
    pub const ALL: [Generator; 8] = [
        Generator::At,
        Generator::Bt,
        Generator::Ft,
        Generator::Gt,
        Generator::DtAt,
        Generator::DtBt,
        Generator::DtFt,
        Generator::DtGt,
    ];

    /// `(dx degree, dt degree)`.
    pub fn bidegree(self) -> (u32, u32) {
        match self {
            Generator::At => (1, 0),
            Generator::Bt | Generator::Ft => (2, 0),
            Generator::Gt => (3, 0),
            Generator::DtAt => (1, 1),
            Generator::DtBt | Generator::DtFt => (2, 1),
            Generator::DtGt => (3, 1),
        }
    }

    pub fn degree(self) -> u32 {
        let (p, q) = self.bidegree();
        p + q
    }

    pub fn kind(self) -> ValueKind {
        match self {
            Generator::At | Generator::Ft | Generator::DtAt | Generator::DtFt => ValueKind::G,
            _ => ValueKind::H,
        }
    }

    /// `l_tF_t = d_tA_t`, `l_tG_t = d_tB_t`, zero on everything else.
    pub fn lt(self) -> Option<Generator> {
        match self {
            Generator::Ft => Some(Generator::DtAt),
            Generator::Gt => Some(Generator::DtBt),
            _ => None,
        }
    }

    /// `d_t` on generators; `d_t² = 0`.
    pub fn dt(self) -> Option<Generator> {
        match self {
            Generator::At => Some(Generator::DtAt),
            Generator::Bt => Some(Generator::DtBt),
            Generator::Ft => Some(Generator::DtFt),
            Generator::Gt => Some(Generator::DtGt),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Generator::At => "At",
            Generator::Bt => "Bt",
            Generator::Ft => "Ft",
            Generator::Gt => "Gt",
            Generator::DtAt => "DtAt",
            Generator::DtBt => "DtBt",
            Generator::DtFt => "DtFt",
            Generator::DtGt => "DtGt",
        }
    }
}

/// `⟨g_1 ⋯ g_n, h⟩` with the `g` slots in canonical (sorted) order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    g: Vec<Generator>,
    h: Generator,
}

impl Monomial {
    pub fn g_slots(&self) -> &[Generator] {
        &self.g
    }

    pub fn h_slot(&self) -> Generator {
        self.h
    }

    pub fn bidegree(&self) -> (u32, u32) {
        self.g.iter().chain(std::iter::once(&self.h)).fold((0, 0), |acc, g| {
            let (p, q) = g.bidegree();
            (acc.0 + p, acc.1 + q)
        })
    }

    /// Sort the `g` slots, returning the Koszul sign, or `None` when two equal
    /// odd generators collide.
    fn canonical(mut g: Vec<Generator>, h: Generator) -> Option<(Monomial, bool)> {
        let mut negative = false;
        for i in 1..g.len() {
            let mut j = i;
            while j > 0 && g[j - 1] > g[j] {
                if g[j - 1].degree() % 2 == 1 && g[j].degree() % 2 == 1 {
                    negative = !negative;
                }
                g.swap(j - 1, j);
                j -= 1;
            }
        }
        if g.windows(2).any(|w| w[0] == w[1] && w[0].degree() % 2 == 1) {
            return None;
        }
        Some((Monomial { g, h }, negative))
    }
}

/// Formal linear combination of paired monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomotopyExpr {
    arity: usize,
    terms: BTreeMap<Monomial, Rational>,
}

/// A derivation of the pairing algebra given on generators, of the stated
/// total degree; Leibniz signs are `(−1)^{degree · (degree of skipped factors)}`.
struct Derivation {
    degree: u32,
    on: fn(Generator) -> Option<Generator>,
}

const LT: Derivation = Derivation { degree: 0, on: Generator::lt };
const DT: Derivation = Derivation { degree: 1, on: Generator::dt };

impl HomotopyExpr {
    pub fn zero(arity: usize) -> Self {
        HomotopyExpr { arity, terms: BTreeMap::new() }
    }

    /// `Π = ⟨F_t^n, G_t⟩`.
    pub fn pi(n: usize) -> Self {
        Self::monomial(Rational::one(), vec![Generator::Ft; n], Generator::Gt).expect("well-formed")
    }

    pub fn monomial(coeff: Rational, g: Vec<Generator>, h: Generator) -> Result<Self> {
        if g.is_empty() {
            return Err(Error::ArityMismatch { expected: 1, got: 0 });
        }
        if let Some(bad) = g.iter().find(|x| x.kind() != ValueKind::G) {
            return Err(Error::KindMismatch { expected: ValueKind::G.label(), got: bad.kind().label() });
        }
        if h.kind() != ValueKind::H {
            return Err(Error::KindMismatch { expected: ValueKind::H.label(), got: h.kind().label() });
        }
        let mut out = Self::zero(g.len());
        out.add_term(coeff, g, h);
        Ok(out)
    }

    fn add_term(&mut self, coeff: Rational, g: Vec<Generator>, h: Generator) {
        if coeff.is_zero() {
            return;
        }
        let Some((m, negative)) = Monomial::canonical(g, h) else { return };
        let c = if negative { -coeff } else { coeff };
        let slot = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common bidegree of all terms, if homogeneous.
    pub fn bidegree(&self) -> Option<(u32, u32)> {
        let mut it = self.terms.keys().map(Monomial::bidegree);
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, &Rational::one())
    }

    pub fn add_scaled(&self, other: &Self, c: &Rational) -> Result<Self> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: other.arity });
        }
        let mut out = self.clone();
        for (m, v) in &other.terms {
            out.add_term(v * c, m.g.clone(), m.h);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.arity);
        for (m, v) in &self.terms {
            out.add_term(v * c, m.g.clone(), m.h);
        }
        out
    }

    fn apply(&self, d: &Derivation) -> Self {
        let mut out = Self::zero(self.arity);
        for (m, v) in &self.terms {
            let mut skipped = 0u32;
            let slots = m.g.len() + 1;
            for k in 0..slots {
                let gen = if k < m.g.len() { m.g[k] } else { m.h };
                if let Some(image) = (d.on)(gen) {
                    let c = if (d.degree * skipped) % 2 == 1 { -v.clone() } else { v.clone() };
                    if k < m.g.len() {
                        let mut g = m.g.clone();
                        g[k] = image;
                        out.add_term(c, g, m.h);
                    } else {
                        out.add_term(c, m.g.clone(), image);
                    }
                }
                skipped += gen.degree();
            }
        }
        out
    }

    /// The homotopy derivation `l_t`.
    pub fn lt_apply(&self) -> Self {
        self.apply(&LT)
    }

    /// The formal parameter differential `d_t`.
    pub fn dt_apply(&self) -> Self {
        self.apply(&DT)
    }

    /// `l_t^p(self) / p!`.
    pub fn lt_power(&self, p: u32) -> Self {
        let mut e = self.clone();
        for _ in 0..p {
            e = e.lt_apply();
        }
        e.scale(&Rational::factorial(p).recip().expect("nonzero"))
    }
}

impl fmt::Display for HomotopyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let g: Vec<&str> = m.g.iter().map(|x| x.name()).collect();
            write!(f, "{c}<{}, {}>", g.join(" "), m.h.name())?;
        }
        Ok(())
    }
}

/// `l_t^p Π / p!` assembled combinatorially: each slot takes at most one
/// `l_t`, choosing `j` of the `n` curvature slots and possibly the `G` slot.
pub fn lt_power_closed_form(n: usize, p: usize) -> HomotopyExpr {
    let mut out = HomotopyExpr::zero(n);
    for j in 0..=n.min(p) {
        let h = match p - j {
            0 => Generator::Gt,
            1 => Generator::DtBt,
            _ => continue,
        };
        let mut g = vec![Generator::DtAt; j];
        g.extend(std::iter::repeat(Generator::Ft).take(n - j));
        out.add_term(binomial(n, j), g, h);
    }
    out
}

fn binomial(n: usize, k: usize) -> Rational {
    &(&Rational::factorial(n as u32) / &Rational::factorial(k as u32)) / &Rational::factorial((n - k) as u32)
}

/// Concrete values of the generators on a connection family.
pub struct FamilyValues {
    values: BTreeMap<Generator, BiGradedForm>,
}

impl FamilyValues {
    pub fn new(fam: &ConnectionFamily, cm: &DifferentialCrossedModule) -> Result<Self> {
        let k = family_curvature(fam, cm)?;
        let mut values = BTreeMap::new();
        values.insert(Generator::DtAt, fam.a_t().d_t());
        values.insert(Generator::DtBt, fam.b_t().d_t());
        values.insert(Generator::DtFt, k.f.d_t());
        values.insert(Generator::DtGt, k.g.d_t());
        values.insert(Generator::At, fam.a_t().clone());
        values.insert(Generator::Bt, fam.b_t().clone());
        values.insert(Generator::Ft, k.f);
        values.insert(Generator::Gt, k.g);
        Ok(FamilyValues { values })
    }

    pub fn get(&self, g: Generator) -> &BiGradedForm {
        &self.values[&g]
    }
}

/// Substitute concrete forms for the generators and contract under `p`.
pub fn expr_eval(e: &HomotopyExpr, vals: &FamilyValues, p: &InvariantPolynomial) -> Result<BiGradedForm> {
    if e.arity() != p.arity() {
        return Err(Error::ArityMismatch { expected: p.arity(), got: e.arity() });
    }
    let reg = vals.get(Generator::At).registry().clone();
    let terms: Vec<(&Monomial, &Rational)> = e.terms().collect();
    let parts: Vec<BiGradedForm> = terms
        .par_iter()
        .map(|(m, c)| {
            let args: Vec<&BiGradedForm> = m.g.iter().map(|&g| vals.get(g)).collect();
            Ok(BiGradedForm::pair(p, &args, vals.get(m.h))?.scale(c))
        })
        .collect::<Result<_>>()?;
    parts.iter().try_fold(BiGradedForm::scalar_zero(&reg), |acc, x| acc.add(x))
}

/// Evaluate on a family built from `members`.
pub fn expr_eval_on(
    e: &HomotopyExpr,
    fam: &ConnectionFamily,
    p: &InvariantPolynomial,
    cm: &DifferentialCrossedModule,
) -> Result<BiGradedForm> {
    expr_eval(e, &FamilyValues::new(fam, cm)?, p)
}

/// A residual written as `Σ_k s_k T_k`, kept termwise so a failing identity
/// can be probed for a single misplaced sign.
#[derive(Debug, Clone)]
pub struct SignedSum {
    pub labels: Vec<&'static str>,
    pub terms: Vec<BiGradedForm>,
    pub residual: BiGradedForm,
}

impl SignedSum {
    pub fn new(parts: Vec<(&'static str, i64, BiGradedForm)>) -> Result<Self> {
        let reg = parts.first().map(|p| p.2.registry().clone()).ok_or_else(|| Error::Invalid("empty sum".into()))?;
        let mut residual = BiGradedForm::scalar_zero(&reg);
        let mut labels = Vec::new();
        let mut terms = Vec::new();
        for (label, s, t) in parts {
            let signed = t.scale(&Rational::from_int(s));
            residual = residual.add(&signed)?;
            labels.push(label);
            terms.push(signed);
        }
        Ok(SignedSum { labels, terms, residual })
    }

    pub fn is_zero(&self) -> bool {
        self.residual.is_zero()
    }

    /// Terms whose sign flip alone makes the residual vanish.
    pub fn single_sign_flips(&self) -> Vec<&'static str> {
        if self.is_zero() {
            return Vec::new();
        }
        self.labels
            .iter()
            .zip(&self.terms)
            .filter(|(_, t)| !t.is_zero() && self.residual.add_scaled(t, &Rational::from_int(-2)).map(|r| r.is_zero()).unwrap_or(false))
            .map(|(l, _)| *l)
            .collect()
    }
}

fn p_form(p: &InvariantPolynomial, cm: &DifferentialCrossedModule, c: &TwoConnection, n: usize) -> Result<BiGradedForm> {
    Ok(invariant_form_p(p, cm, c, n)?.0)
}

/// The descent identity at level `p` for `Π = ⟨F_t^n, G_t⟩` on a family of
/// `p + 2` connections:
/// `Σ_i (−1)^i ∫_{T_p} face_i(l_t^p Π / p!) − (−1)^p d ∫_{T_{p+1}} l_t^{p+1} Π / (p+1)!`.
pub fn echf_check(
    level: usize,
    fam: &ConnectionFamily,
    p: &InvariantPolynomial,
    cm: &DifferentialCrossedModule,
    n: usize,
) -> Result<SignedSum> {
    if fam.members().len() != level + 2 {
        return Err(Error::FamilySize { expected: level + 2, got: fam.members().len() });
    }
    if level > 2 * n + 3 {
        return Err(Error::Invalid(format!("descent level {level} exceeds 2n+3 = {}", 2 * n + 3)));
    }
    let vals = FamilyValues::new(fam, cm)?;
    let pi = HomotopyExpr::pi(n);
    let lower = expr_eval(&pi.lt_power(level as u32), &vals, p)?;
    let upper = expr_eval(&pi.lt_power(level as u32 + 1), &vals, p)?;
    let mut faces = BiGradedForm::scalar_zero(&fam.registry().spacetime_only());
    for i in 0..=level + 1 {
        let s = Rational::from_int(if i % 2 == 0 { 1 } else { -1 });
        faces = faces.add_scaled(&lower.face_restrict(i)?.simplex_integrate_form(), &s)?;
    }
    let exact = upper.simplex_integrate_form().d_x();
    let sign = if level % 2 == 0 { -1 } else { 1 };
    SignedSum::new(vec![("boundary faces", 1, faces), ("exact term", sign, exact)])
}

/// Operator identities on `X ∈ {Π, l_tΠ}` evaluated on a family.
pub fn graded_relations_check(
    fam: &ConnectionFamily,
    p: &InvariantPolynomial,
    cm: &DifferentialCrossedModule,
    n: usize,
) -> Result<Vec<(&'static str, BiGradedForm)>> {
    let vals = FamilyValues::new(fam, cm)?;
    let pi = HomotopyExpr::pi(n);
    let l_pi = pi.lt_apply();
    let l2_pi = l_pi.lt_apply();
    let lt_dt_pi = pi.dt_apply().lt_apply();
    let lt_dt_l_pi = l_pi.dt_apply().lt_apply();
    let x0 = expr_eval(&pi, &vals, p)?;
    let x1 = expr_eval(&l_pi, &vals, p)?;
    let x2 = expr_eval(&l2_pi, &vals, p)?;
    let e_lt_dt_pi = expr_eval(&lt_dt_pi, &vals, p)?;
    let e_lt_dt_l_pi = expr_eval(&lt_dt_l_pi, &vals, p)?;

    let mut out = Vec::new();
    let d2 = x0.d_x().d_x().add(&x1.d_x().d_x())?;
    out.push(("d^2", d2));
    let dt2 = x0.d_t().d_t().add(&x1.d_t().d_t())?;
    out.push(("d_t^2", dt2));
    let anti = x0.d_x().d_t().add(&x0.d_t().d_x())?.add(&x1.d_x().d_t())?.add(&x1.d_t().d_x())?;
    out.push(("d d_t + d_t d", anti));
    // On Π: l_t dΠ vanishes because dΠ = 0, which is kept in the residual.
    // On l_tΠ: d(l_tΠ) = −d_tΠ from the first line, so l_t d(l_tΠ) = −l_t d_t Π.
    let on_pi = x0.d_x().sub(&x1.d_x())?.sub(&x0.d_t())?;
    let on_l_pi = e_lt_dt_pi.neg().sub(&x2.d_x())?.sub(&x1.d_t())?;
    out.push(("l_t d - d l_t - d_t", on_pi.add(&on_l_pi)?));
    let comm = e_lt_dt_pi.sub(&x1.d_t())?.add(&e_lt_dt_l_pi.sub(&x2.d_t())?)?;
    out.push(("l_t d_t - d_t l_t", comm));
    Ok(out)
}

/// `l_t d_t − d_t l_t` on `Π` and `l_tΠ` at the formal level.
pub fn formal_commutator_vanishes(n: usize) -> bool {
    let pi = HomotopyExpr::pi(n);
    let l_pi = pi.lt_apply();
    [pi, l_pi].iter().all(|x| {
        x.dt_apply()
            .lt_apply()
            .add_scaled(&x.lt_apply().dt_apply(), &Rational::from_int(-1))
            .map(|r| r.is_zero())
            .unwrap_or(false)
    })
}

/// Residuals `∫_{T_1} l_tΠ − Q(c0, c1)` and `dQ − (P(c1) − P(c0))`.
pub fn chern_weil_check(
    p: &InvariantPolynomial,
    cm: &DifferentialCrossedModule,
    c0: &TwoConnection,
    c1: &TwoConnection,
    n: usize,
) -> Result<(BiGradedForm, BiGradedForm)> {
    let fam = ConnectionFamily::new(vec![c0.clone(), c1.clone()])?;
    let engine = expr_eval_on(&HomotopyExpr::pi(n).lt_apply(), &fam, p, cm)?.simplex_integrate_form();
    let q = transgression_q(p, cm, c0, c1, n)?;
    let r1 = engine.sub(&q)?;
    let r2 = q.d_x().sub(&p_form(p, cm, c1, n)?.sub(&p_form(p, cm, c0, n)?)?)?;
    Ok((r1, r2))
}

/// `Q(c0,c2) − Q(c1,c2) − Q(c0,c1) + d Q^{2n+1}(c0,c1,c2)`.
pub fn triangle_check(
    p: &InvariantPolynomial,
    cm: &DifferentialCrossedModule,
    c0: &TwoConnection,
    c1: &TwoConnection,
    c2: &TwoConnection,
    n: usize,
) -> Result<SignedSum> {
    SignedSum::new(vec![
        ("Q(c0,c2)", 1, transgression_q(p, cm, c0, c2, n)?),
        ("Q(c1,c2)", -1, transgression_q(p, cm, c1, c2, n)?),
        ("Q(c0,c1)", -1, transgression_q(p, cm, c0, c1, n)?),
        ("dQ3(c0,c1,c2)", 1, q_boundary(p, cm, c0, c1, c2, n)?.d_x()),
    ])
}

/// Triangle equation with the third connection zero:
/// `Q(c0,c1) − C(c1) + C(c0) − d Q^{2n+1}(c0,c1,0)`.
pub fn chsas_difference_check(
    p: &InvariantPolynomial,
    cm: &DifferentialCrossedModule,
    c0: &TwoConnection,
    c1: &TwoConnection,
    n: usize,
) -> Result<SignedSum> {
    let zero = TwoConnection::zero(cm, c0.registry());
    SignedSum::new(vec![
        ("Q(c0,c1)", 1, transgression_q(p, cm, c0, c1, n)?),
        ("C(c1)", -1, chsas_form(p, cm, c1, n)?),
        ("C(c0)", 1, chsas_form(p, cm, c0, n)?),
        ("dQ3(c0,c1,0)", -1, q_boundary(p, cm, c0, c1, &zero, n)?.d_x()),
    ])
}

/// `Q(c0,c1) − C(c1) + C(c0) + d B_{2n+1}(c0,c1)`.
pub fn cartan_homotopy_check(
    p: &InvariantPolynomial,
    cm: &DifferentialCrossedModule,
    c0: &TwoConnection,
    c1: &TwoConnection,
    n: usize,
) -> Result<SignedSum> {
    SignedSum::new(vec![
        ("Q(c0,c1)", 1, transgression_q(p, cm, c0, c1, n)?),
        ("C(c1)", -1, chsas_form(p, cm, c1, n)?),
        ("C(c0)", 1, chsas_form(p, cm, c0, n)?),
        ("dB(c0,c1)", 1, b_form(p, cm, c0, c1, n)?.d_x()),
    ])
}

/// `d C(c) − ⟨F^n, G⟩`.
pub fn chsas_check(
    p: &InvariantPolynomial,
    cm: &DifferentialCrossedModule,
    c: &TwoConnection,
    n: usize,
) -> Result<BiGradedForm> {
    chsas_form(p, cm, c, n)?.d_x().sub(&p_form(p, cm, c, n)?)
}

/// `∫_{T_k} d_t ω − Σ_i (−1)^i ∫_{T_{k−1}} face_i ω` for a form over the
/// parameters of a `k`-simplex.
pub fn stokes_residual(omega: &BiGradedForm) -> Result<BiGradedForm> {
    let k = omega.registry().nt();
    let mut faces = BiGradedForm::zero(&omega.registry().spacetime_only(), omega.kind(), omega.dim());
    for i in 0..=k {
        let s = Rational::from_int(if i % 2 == 0 { 1 } else { -1 });
        faces = faces.add_scaled(&omega.face_restrict(i)?.simplex_integrate_form(), &s)?;
    }
    omega.d_t().simplex_integrate_form().sub(&faces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Generator::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn lt_on_pi() {
        for n in 1..=3 {
            let got = HomotopyExpr::pi(n).lt_apply();
            let mut g = vec![DtAt];
            g.extend(std::iter::repeat(Ft).take(n - 1));
            let expect = HomotopyExpr::monomial(q(n as i64), g, Gt)
                .unwrap()
                .add(&HomotopyExpr::monomial(q(1), vec![Ft; n], DtBt).unwrap())
                .unwrap();
            assert_eq!(got, expect);
        }
    }

    #[test]
    fn lt_kills_connection_slots() {
        let e = HomotopyExpr::monomial(q(1), vec![At], Bt).unwrap();
        assert!(e.lt_apply().is_zero());
        let e = HomotopyExpr::monomial(q(1), vec![At, Ft], Gt).unwrap();
        let expect = HomotopyExpr::monomial(q(1), vec![At, DtAt], Gt)
            .unwrap()
            .add(&HomotopyExpr::monomial(q(1), vec![At, Ft], DtBt).unwrap())
            .unwrap();
        assert_eq!(e.lt_apply(), expect);
    }

    #[test]
    fn lt_squared_for_n1() {
        let e = HomotopyExpr::pi(1).lt_apply().lt_apply();
        assert_eq!(e, HomotopyExpr::monomial(q(2), vec![DtAt], DtBt).unwrap());
        assert!(e.lt_apply().is_zero());
    }

    #[test]
    fn closed_form_matches_repeated_application() {
        for n in 1..=3 {
            for p in 0..=3u32 {
                assert_eq!(HomotopyExpr::pi(n).lt_power(p), lt_power_closed_form(n, p as usize), "n={n} p={p}");
            }
        }
    }

    #[test]
    fn odd_generators_anticommute() {
        let a = HomotopyExpr::monomial(q(1), vec![Ft, At], Gt).unwrap();
        let b = HomotopyExpr::monomial(q(1), vec![At, Ft], Gt).unwrap();
        assert_eq!(a, b);
        let c = HomotopyExpr::monomial(q(1), vec![DtFt, At], Gt).unwrap();
        let d = HomotopyExpr::monomial(q(-1), vec![At, DtFt], Gt).unwrap();
        assert_eq!(c, d);
        assert!(HomotopyExpr::monomial(q(1), vec![At, At], Gt).unwrap().is_zero());
    }

    #[test]
    fn dt_leibniz_signs() {
        // d_t⟨A, B⟩ = ⟨DtA, B⟩ − ⟨A, DtB⟩ since A has odd degree
        let e = HomotopyExpr::monomial(q(1), vec![At], Bt).unwrap();
        let expect = HomotopyExpr::monomial(q(1), vec![DtAt], Bt)
            .unwrap()
            .add(&HomotopyExpr::monomial(q(-1), vec![At], DtBt).unwrap())
            .unwrap();
        assert_eq!(e.dt_apply(), expect);
        assert!(e.dt_apply().dt_apply().is_zero());
    }

    #[test]
    fn bidegrees_are_homogeneous() {
        for n in 1..=2 {
            let pi = HomotopyExpr::pi(n);
            let d = 2 * n as u32 + 3;
            assert_eq!(pi.bidegree(), Some((d, 0)));
            assert_eq!(pi.lt_apply().bidegree(), Some((d - 1, 1)));
            assert_eq!(pi.dt_apply().bidegree(), Some((d, 1)));
        }
    }

    #[test]
    fn formal_commutator() {
        assert!(formal_commutator_vanishes(1));
        assert!(formal_commutator_vanishes(2));
    }

    #[test]
    fn stokes_on_random_forms() {
        use crate::poly::VarRegistry;
        use crate::random::{random_parameter_form, rng, PolyShape};
        let mut r = rng(11);
        for k in 1..=3 {
            let reg = VarRegistry::simplex(2, k);
            for p in 0..=2 {
                let w = random_parameter_form(&mut r, &reg, p, k - 1, PolyShape::new(3, 4)).unwrap();
                assert!(stokes_residual(&w).unwrap().is_zero(), "k={k} p={p}");
            }
        }
    }

    #[test]
    fn rejects_misplaced_generators() {
        assert!(HomotopyExpr::monomial(q(1), vec![Gt], Gt).is_err());
        assert!(HomotopyExpr::monomial(q(1), vec![Ft], Ft).is_err());
        assert!(HomotopyExpr::monomial(q(1), vec![], Gt).is_err());
    }
}
