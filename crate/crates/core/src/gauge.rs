//! 2-connections, their curvatures and gauge transformations, connection
//! families over parameter simplices, and the transgression-type forms built
//! from them.

use crate::algebra::{DifferentialCrossedModule, InvariantPolynomial, LieAlgebra};
use crate::error::{Error, Result};
use crate::forms::{BiGradedForm, ValueKind};
use crate::matrix::{PolyMatrix, RatMatrix};
use crate::poly::{Poly, Registry};
use crate::rational::Rational;

/// `A` a `g`-valued 1-form and `B` an `h`-valued 2-form on spacetime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoConnection {
    a: BiGradedForm,
    b: BiGradedForm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoCurvature {
    pub f: BiGradedForm,
    pub g: BiGradedForm,
}

fn expect_degree(w: &BiGradedForm, p: u32, what: &str) -> Result<()> {
    match w.bidegree() {
        None if w.is_zero() => Ok(()),
        Some((dx, 0)) if dx == p => Ok(()),
        _ => Err(Error::Invalid(format!("{what} must be a pure {p}-form in dx"))),
    }
}

impl TwoConnection {
    pub fn new(cm: &DifferentialCrossedModule, a: BiGradedForm, b: BiGradedForm) -> Result<Self> {
        if a.kind() != ValueKind::G || a.dim() != cm.g().dim() {
            return Err(Error::KindMismatch { expected: ValueKind::G.label(), got: a.kind().label() });
        }
        if b.kind() != ValueKind::H || b.dim() != cm.h().dim() {
            return Err(Error::KindMismatch { expected: ValueKind::H.label(), got: b.kind().label() });
        }
        if a.registry() != b.registry() {
            return Err(Error::RegistryMismatch);
        }
        if a.registry().nt() != 0 {
            return Err(Error::Invalid("a 2-connection lives on spacetime only".into()));
        }
        expect_degree(&a, 1, "A")?;
        expect_degree(&b, 2, "B")?;
        Ok(TwoConnection { a, b })
    }

    pub fn zero(cm: &DifferentialCrossedModule, reg: &Registry) -> Self {
        TwoConnection {
            a: BiGradedForm::zero(reg, ValueKind::G, cm.g().dim()),
            b: BiGradedForm::zero(reg, ValueKind::H, cm.h().dim()),
        }
    }

    pub fn a(&self) -> &BiGradedForm {
        &self.a
    }

    pub fn b(&self) -> &BiGradedForm {
        &self.b
    }

    pub fn registry(&self) -> &Registry {
        self.a.registry()
    }
}

/// `ω ∧ ω` for a 1-form: the matrix wedge when a representation exists,
/// otherwise `½ ω ∧^{[,]} ω`.
pub fn square_one_form(alg: &LieAlgebra, w: &BiGradedForm) -> Result<BiGradedForm> {
    if alg.representation().is_some() {
        BiGradedForm::wedge_matrix(alg, w, w)
    } else {
        Ok(BiGradedForm::wedge_bracket(alg, w, w)?.scale(&Rational::new(1, 2)))
    }
}

/// `F = dA + ½ A ∧^{[,]} A − α(B)` and `G = dB + A ∧^▷ B` for arbitrary
/// (possibly parameter-dependent) forms.
pub fn curvature_forms(cm: &DifferentialCrossedModule, a: &BiGradedForm, b: &BiGradedForm) -> Result<TwoCurvature> {
    let half = Rational::new(1, 2);
    let f = a
        .d_x()
        .add_scaled(&BiGradedForm::wedge_bracket(cm.g(), a, a)?, &half)?
        .sub(&BiGradedForm::alpha_push(cm, b)?)?;
    let g = b.d_x().add(&BiGradedForm::wedge_action(cm, a, b)?)?;
    Ok(TwoCurvature { f, g })
}

pub fn curvature(cm: &DifferentialCrossedModule, c: &TwoConnection) -> Result<TwoCurvature> {
    curvature_forms(cm, &c.a, &c.b)
}

/// `dF + A ∧^{[,]} F + α(G)` and `dG + A ∧^▷ G − F ∧^▷ B` for a supplied
/// curvature pair, so corrupted curvatures can be tested as well.
pub fn bianchi_residuals_for(
    cm: &DifferentialCrossedModule,
    c: &TwoConnection,
    curv: &TwoCurvature,
) -> Result<(BiGradedForm, BiGradedForm)> {
    let r1 = curv
        .f
        .d_x()
        .add(&BiGradedForm::wedge_bracket(cm.g(), &c.a, &curv.f)?)?
        .add(&BiGradedForm::alpha_push(cm, &curv.g)?)?;
    let r2 = curv
        .g
        .d_x()
        .add(&BiGradedForm::wedge_action(cm, &c.a, &curv.g)?)?
        .sub(&BiGradedForm::wedge_action(cm, &curv.f, &c.b)?)?;
    Ok((r1, r2))
}

pub fn bianchi_residuals(cm: &DifferentialCrossedModule, c: &TwoConnection) -> Result<(BiGradedForm, BiGradedForm)> {
    bianchi_residuals_for(cm, c, &curvature(cm, c)?)
}

pub fn is_fake_flat(cm: &DifferentialCrossedModule, c: &TwoConnection) -> Result<bool> {
    Ok(curvature(cm, c)?.f.is_zero())
}

pub fn is_flat(cm: &DifferentialCrossedModule, c: &TwoConnection) -> Result<bool> {
    let k = curvature(cm, c)?;
    Ok(k.f.is_zero() && k.g.is_zero())
}

/// A group element with exact polynomial inverse together with an
/// `h`-valued 1-form.
#[derive(Debug, Clone)]
pub struct GaugePair {
    g: PolyMatrix,
    g_inv: PolyMatrix,
    phi: BiGradedForm,
}

impl GaugePair {
    pub fn new(g: PolyMatrix, g_inv: PolyMatrix, phi: BiGradedForm) -> Result<Self> {
        if g.registry() != phi.registry() || g_inv.registry() != phi.registry() {
            return Err(Error::RegistryMismatch);
        }
        if phi.kind() != ValueKind::H {
            return Err(Error::KindMismatch { expected: ValueKind::H.label(), got: phi.kind().label() });
        }
        expect_degree(&phi, 1, "phi")?;
        if !g.mul(&g_inv).is_identity() || !g_inv.mul(&g).is_identity() {
            return Err(Error::NotInvertible("g * g_inv is not the identity".into()));
        }
        Ok(GaugePair { g, g_inv, phi })
    }

    pub fn identity(cm: &DifferentialCrossedModule, reg: &Registry) -> Result<Self> {
        let n = cm.g().rep_size().ok_or_else(|| Error::MissingRepresentation(cm.g().name().to_string()))?;
        Self::new(
            PolyMatrix::identity(reg, n),
            PolyMatrix::identity(reg, n),
            BiGradedForm::zero(reg, ValueKind::H, cm.h().dim()),
        )
    }

    /// Constant invertible matrix.
    pub fn constant(reg: &Registry, m: &RatMatrix, phi: BiGradedForm) -> Result<Self> {
        let inv = m.inverse().ok_or_else(|| Error::NotInvertible("singular matrix".into()))?;
        Self::new(PolyMatrix::from_rational(reg, m), PolyMatrix::from_rational(reg, &inv), phi)
    }

    /// `g = I + N` for nilpotent `N`, inverted by the finite geometric series.
    pub fn unipotent(n: &PolyMatrix, phi: BiGradedForm) -> Result<Self> {
        let reg = n.registry().clone();
        let size = n.size();
        let mut g = PolyMatrix::identity(&reg, size);
        g.add_scaled(n, &Rational::one());
        let mut inv = PolyMatrix::identity(&reg, size);
        let mut power = PolyMatrix::identity(&reg, size);
        for k in 1..=size {
            power = power.mul(n);
            if power.entries().iter().all(Poly::is_zero) {
                break;
            }
            if k == size {
                return Err(Error::NotInvertible("matrix is not nilpotent".into()));
            }
            inv.add_scaled(&power, &Rational::from_int(if k % 2 == 0 { 1 } else { -1 }));
        }
        Self::new(g, inv, phi)
    }

    /// `self` acting after a constant change of frame: `C g C⁻¹`.
    pub fn conjugated_by(&self, c: &RatMatrix) -> Result<Self> {
        let c_inv = c.inverse().ok_or_else(|| Error::NotInvertible("singular matrix".into()))?;
        let reg = self.g.registry();
        let (pc, pci) = (PolyMatrix::from_rational(reg, c), PolyMatrix::from_rational(reg, &c_inv));
        Self::new(pc.mul(&self.g).mul(&pci), pc.mul(&self.g_inv).mul(&pci), self.phi.clone())
    }

    /// Whether conjugation by `g` maps both algebras into themselves and
    /// `g⁻¹dg` lies in `g`.
    pub fn preserves(&self, cm: &DifferentialCrossedModule) -> bool {
        let keeps = |alg: &LieAlgebra| match alg.representation() {
            None => false,
            Some(mats) => mats.iter().all(|m| {
                let pm = PolyMatrix::from_rational(self.g.registry(), m);
                alg.from_poly_matrix(&self.g_inv.mul(&pm).mul(&self.g)).is_ok()
            }),
        };
        keeps(cm.g()) && keeps(cm.h()) && maurer_cartan(cm.g(), self).is_ok()
    }

    pub fn g(&self) -> &PolyMatrix {
        &self.g
    }

    pub fn g_inv(&self) -> &PolyMatrix {
        &self.g_inv
    }

    pub fn phi(&self) -> &BiGradedForm {
        &self.phi
    }
}

/// `g⁻¹ ω g` computed componentwise in the representation of `alg`.
pub fn conjugate_form(alg: &LieAlgebra, gp: &GaugePair, w: &BiGradedForm) -> Result<BiGradedForm> {
    let mut out = BiGradedForm::zero(w.registry(), w.kind(), w.dim());
    for (&key, v) in w.components() {
        let m = alg.to_poly_matrix(v)?;
        let c = alg.from_poly_matrix(&gp.g_inv.mul(&m).mul(&gp.g))?;
        out.add_component(key, c);
    }
    Ok(out)
}

/// `g⁻¹ dg` as a `g`-valued 1-form.
pub fn maurer_cartan(alg: &LieAlgebra, gp: &GaugePair) -> Result<BiGradedForm> {
    let reg = gp.g.registry();
    let mut out = BiGradedForm::zero(reg, ValueKind::G, alg.dim());
    for i in 0..reg.nx() {
        let dg = gp.g.map(|p| p.diff_index(i));
        let c = alg.from_poly_matrix(&gp.g_inv.mul(&dg))?;
        out.add_component((0, 1 << i), c);
    }
    Ok(out)
}

fn require_conjugation(cm: &DifferentialCrossedModule) -> Result<()> {
    if !cm.supports_conjugation() {
        return Err(Error::UnsupportedAction(cm.name().to_string()));
    }
    Ok(())
}

/// `A' = g⁻¹Ag + g⁻¹dg + α(φ)`,
/// `B' = g⁻¹▷B + dφ + A' ∧^▷ φ − φ ∧ φ` with `φ ∧ φ` the matrix wedge in `h`.
pub fn gauge_transform(cm: &DifferentialCrossedModule, c: &TwoConnection, gp: &GaugePair) -> Result<TwoConnection> {
    require_conjugation(cm)?;
    if gp.g.registry() != c.registry() {
        return Err(Error::RegistryMismatch);
    }
    let a2 = conjugate_form(cm.g(), gp, &c.a)?
        .add(&maurer_cartan(cm.g(), gp)?)?
        .add(&BiGradedForm::alpha_push(cm, &gp.phi)?)?;
    let b2 = conjugate_form(cm.h(), gp, &c.b)?
        .add(&gp.phi.d_x())?
        .add(&BiGradedForm::wedge_action(cm, &a2, &gp.phi)?)?
        .sub(&square_one_form(cm.h(), &gp.phi)?)?;
    TwoConnection::new(cm, a2, b2)
}

/// `F(c') − g⁻¹F(c)g` and `G(c') − (g⁻¹▷G(c) + F(c') ∧^▷ φ)`.
pub fn verify_gauge_covariance(
    cm: &DifferentialCrossedModule,
    c: &TwoConnection,
    gp: &GaugePair,
) -> Result<(BiGradedForm, BiGradedForm)> {
    let c2 = gauge_transform(cm, c, gp)?;
    let k = curvature(cm, c)?;
    let k2 = curvature(cm, &c2)?;
    let r1 = k2.f.sub(&conjugate_form(cm.g(), gp, &k.f)?)?;
    let expected_g = conjugate_form(cm.h(), gp, &k.g)?.add(&BiGradedForm::wedge_action(cm, &k2.f, &gp.phi)?)?;
    let r2 = k2.g.sub(&expected_g)?;
    Ok((r1, r2))
}

/// `⟨F^n, G⟩` for a curvature pair.
pub fn pair_curvature(p: &InvariantPolynomial, k: &TwoCurvature) -> Result<BiGradedForm> {
    let fs: Vec<&BiGradedForm> = std::iter::repeat(&k.f).take(p.arity()).collect();
    BiGradedForm::pair(p, &fs, &k.g)
}

fn check_arity(p: &InvariantPolynomial, n: usize) -> Result<()> {
    if p.arity() != n {
        return Err(Error::ArityMismatch { expected: p.arity(), got: n });
    }
    Ok(())
}

/// `P_{2n+3} = ⟨F^n, G⟩` and its exterior derivative.
pub fn invariant_form_p(
    p: &InvariantPolynomial,
    cm: &DifferentialCrossedModule,
    c: &TwoConnection,
    n: usize,
) -> Result<(BiGradedForm, BiGradedForm)> {
    check_arity(p, n)?;
    let form = pair_curvature(p, &curvature(cm, c)?)?;
    let d = form.d_x();
    Ok((form, d))
}

/// `⟨F'^n, G'⟩ − ⟨F^n, G⟩` for the gauge-transformed connection.
pub fn invariance_check_p(
    p: &InvariantPolynomial,
    cm: &DifferentialCrossedModule,
    c: &TwoConnection,
    gp: &GaugePair,
    n: usize,
) -> Result<BiGradedForm> {
    check_arity(p, n)?;
    let before = pair_curvature(p, &curvature(cm, c)?)?;
    let after = pair_curvature(p, &curvature(cm, &gauge_transform(cm, c, gp)?)?)?;
    after.sub(&before)
}

/// Affine interpolation `A_t = A_0 + Σ_j t^j (A_j − A_0)` of `k + 1`
/// connections over the parameters `t1..tk`.
#[derive(Debug, Clone)]
pub struct ConnectionFamily {
    members: Vec<TwoConnection>,
    reg: Registry,
    a_t: BiGradedForm,
    b_t: BiGradedForm,
}

impl ConnectionFamily {
    pub fn new(members: Vec<TwoConnection>) -> Result<Self> {
        let first = members.first().ok_or(Error::FamilySize { expected: 1, got: 0 })?;
        let base = first.registry().clone();
        if members.iter().any(|c| c.registry() != &base) {
            return Err(Error::RegistryMismatch);
        }
        let k = members.len() - 1;
        let reg = base.with_simplex(k);
        Self::over(members, &reg, &(0..k).map(|j| reg.t_vars()[j].clone()).collect::<Vec<_>>())
    }

    /// Family over an explicit registry, interpolating along the named
    /// parameters (one per member after the first).
    pub fn over(members: Vec<TwoConnection>, reg: &Registry, params: &[String]) -> Result<Self> {
        if members.len() != params.len() + 1 {
            return Err(Error::FamilySize { expected: params.len() + 1, got: members.len() });
        }
        let a0 = members[0].a.rebase(reg)?;
        let b0 = members[0].b.rebase(reg)?;
        let (mut a_t, mut b_t) = (a0.clone(), b0.clone());
        for (c, name) in members[1..].iter().zip(params) {
            let t = Poly::var_named(reg, name)?;
            a_t = a_t.add(&c.a.rebase(reg)?.sub(&a0)?.mul_poly(&t)?)?;
            b_t = b_t.add(&c.b.rebase(reg)?.sub(&b0)?.mul_poly(&t)?)?;
        }
        Ok(ConnectionFamily { members, reg: reg.clone(), a_t, b_t })
    }

    pub fn members(&self) -> &[TwoConnection] {
        &self.members
    }

    pub fn registry(&self) -> &Registry {
        &self.reg
    }

    /// Number of simplex parameters.
    pub fn simplex_dim(&self) -> usize {
        self.members.len() - 1
    }

    pub fn a_t(&self) -> &BiGradedForm {
        &self.a_t
    }

    pub fn b_t(&self) -> &BiGradedForm {
        &self.b_t
    }
}

/// `F_t = dA_t + ½ A_t ∧^{[,]} A_t − α(B_t)`, `G_t = dB_t + A_t ∧^▷ B_t`.
pub fn family_curvature(fam: &ConnectionFamily, cm: &DifferentialCrossedModule) -> Result<TwoCurvature> {
    curvature_forms(cm, &fam.a_t, &fam.b_t)
}

/// `⟨ω_1 ∧ ⋯ ∧ ω_k ∧ F^{n-k}, η⟩`.
fn pair_with_f(p: &InvariantPolynomial, lead: &[&BiGradedForm], f: &BiGradedForm, eta: &BiGradedForm) -> Result<BiGradedForm> {
    if lead.len() > p.arity() {
        return Ok(BiGradedForm::scalar_zero(eta.registry()));
    }
    let mut args: Vec<&BiGradedForm> = lead.to_vec();
    args.extend(std::iter::repeat(f).take(p.arity() - lead.len()));
    BiGradedForm::pair(p, &args, eta)
}

/// `∫₀¹ dt { n⟨θ ∧ F_t^{n−1}, G_t⟩ + ⟨F_t^n, Φ⟩ }` with `θ = A_1 − A_0`,
/// `Φ = B_1 − B_0`.
pub fn transgression_q(
    p: &InvariantPolynomial,
    cm: &DifferentialCrossedModule,
    c0: &TwoConnection,
    c1: &TwoConnection,
    n: usize,
) -> Result<BiGradedForm> {
    check_arity(p, n)?;
    let fam = ConnectionFamily::new(vec![c0.clone(), c1.clone()])?;
    let reg = fam.registry();
    let k = family_curvature(&fam, cm)?;
    let theta = c1.a.sub(&c0.a)?.rebase(reg)?;
    let phi = c1.b.sub(&c0.b)?.rebase(reg)?;
    let integrand = pair_with_f(p, &[&theta], &k.f, &k.g)?
        .scale(&Rational::from_int(n as i64))
        .add(&pair_with_f(p, &[], &k.f, &phi)?)?;
    integrand.integrate_coefficients(&["t1"])
}

/// `∫₀¹ dt { n⟨A ∧ F_t^{n−1}, G_t⟩ + ⟨F_t^n, B⟩ }` with
/// `F_t = t dA + t² A∧A − t α(B)` and `G_t = t dB + t² A ∧^▷ B`.
pub fn chsas_form(
    p: &InvariantPolynomial,
    cm: &DifferentialCrossedModule,
    c: &TwoConnection,
    n: usize,
) -> Result<BiGradedForm> {
    check_arity(p, n)?;
    let reg = c.registry().with_simplex(1);
    let t = Poly::var_named(&reg, "t1")?;
    let t2 = &t * &t;
    let a = c.a.rebase(&reg)?;
    let b = c.b.rebase(&reg)?;
    let f_t = a
        .d_x()
        .sub(&BiGradedForm::alpha_push(cm, &b)?)?
        .mul_poly(&t)?
        .add(&square_one_form(cm.g(), &a)?.mul_poly(&t2)?)?;
    let g_t = b.d_x().mul_poly(&t)?.add(&BiGradedForm::wedge_action(cm, &a, &b)?.mul_poly(&t2)?)?;
    let integrand = pair_with_f(p, &[&a], &f_t, &g_t)?
        .scale(&Rational::from_int(n as i64))
        .add(&pair_with_f(p, &[], &f_t, &b)?)?;
    integrand.integrate_coefficients(&["t1"])
}

/// The boundary term of the triangle equation:
/// `∫_{T_2} { n(n−1)⟨θ_1 ∧ θ_2 ∧ F_t^{n−2}, G_t⟩ + n⟨θ_1 ∧ F_t^{n−1}, Φ_2⟩ − n⟨θ_2 ∧ F_t^{n−1}, Φ_1⟩ }`
/// with `θ_j = A_j − A_0`, `Φ_j = B_j − B_0`.
pub fn q_boundary(
    p: &InvariantPolynomial,
    cm: &DifferentialCrossedModule,
    c0: &TwoConnection,
    c1: &TwoConnection,
    c2: &TwoConnection,
    n: usize,
) -> Result<BiGradedForm> {
    check_arity(p, n)?;
    let fam = ConnectionFamily::new(vec![c0.clone(), c1.clone(), c2.clone()])?;
    let reg = fam.registry();
    let k = family_curvature(&fam, cm)?;
    let th1 = c1.a.sub(&c0.a)?.rebase(reg)?;
    let th2 = c2.a.sub(&c0.a)?.rebase(reg)?;
    let ph1 = c1.b.sub(&c0.b)?.rebase(reg)?;
    let ph2 = c2.b.sub(&c0.b)?.rebase(reg)?;
    let nn = Rational::from_int(n as i64);
    let mut integrand = pair_with_f(p, &[&th1], &k.f, &ph2)?
        .sub(&pair_with_f(p, &[&th2], &k.f, &ph1)?)?
        .scale(&nn);
    if n >= 2 {
        let c = Rational::from_int((n * (n - 1)) as i64);
        integrand = integrand.add_scaled(&pair_with_f(p, &[&th1, &th2], &k.f, &k.g)?, &c)?;
    }
    integrand.integrate_coefficients(&["t1", "t2"])
}

/// Registry with the interpolation parameter `t1` and the scaling parameter `s`.
pub fn scaling_registry(base: &Registry) -> Result<Registry> {
    base.with_params(["t1", "s"])
}

/// `F_st = s F_t + (s² − s) A_t ∧ A_t` and `G_st = s G_t + (s² − s) A_t ∧^▷ B_t`
/// for a two-member family over [`scaling_registry`].
pub fn scaled_curvature(cm: &DifferentialCrossedModule, fam: &ConnectionFamily) -> Result<TwoCurvature> {
    let reg = fam.registry();
    if fam.simplex_dim() != 1 {
        return Err(Error::FamilySize { expected: 2, got: fam.members().len() });
    }
    let s = Poly::var_named(reg, "s")?;
    let s2s = &(&s * &s) - &s;
    let k = family_curvature(fam, cm)?;
    let f = k.f.mul_poly(&s)?.add(&square_one_form(cm.g(), &fam.a_t)?.mul_poly(&s2s)?)?;
    let g = k.g.mul_poly(&s)?.add(&BiGradedForm::wedge_action(cm, &fam.a_t, &fam.b_t)?.mul_poly(&s2s)?)?;
    Ok(TwoCurvature { f, g })
}

/// Two-member family over [`scaling_registry`].
pub fn scaling_family(c0: &TwoConnection, c1: &TwoConnection) -> Result<ConnectionFamily> {
    let reg = scaling_registry(c0.registry())?;
    ConnectionFamily::over(vec![c0.clone(), c1.clone()], &reg, &["t1".to_string()])
}

/// `−∫₀¹dt ∫₀¹ds  n s { (n−1)⟨A_t ∧ θ ∧ F_st^{n−2}, G_st⟩ + ⟨A_t ∧ F_st^{n−1}, Φ⟩ − ⟨θ ∧ F_st^{n−1}, B_t⟩ }`.
pub fn b_form(
    p: &InvariantPolynomial,
    cm: &DifferentialCrossedModule,
    c0: &TwoConnection,
    c1: &TwoConnection,
    n: usize,
) -> Result<BiGradedForm> {
    check_arity(p, n)?;
    let fam = scaling_family(c0, c1)?;
    let reg = fam.registry();
    let k = scaled_curvature(cm, &fam)?;
    let theta = c1.a.sub(&c0.a)?.rebase(reg)?;
    let phi = c1.b.sub(&c0.b)?.rebase(reg)?;
    let a_t = fam.a_t();
    let mut inner = pair_with_f(p, &[a_t], &k.f, &phi)?.sub(&pair_with_f(p, &[&theta], &k.f, fam.b_t())?)?;
    if n >= 2 {
        let c = Rational::from_int(n as i64 - 1);
        inner = inner.add_scaled(&pair_with_f(p, &[a_t, &theta], &k.f, &k.g)?, &c)?;
    }
    let s = Poly::var_named(reg, "s")?;
    let integrand = inner.mul_poly(&s)?.scale(&Rational::from_int(-(n as i64)));
    integrand.integrate_coefficients(&["s"])?.integrate_coefficients(&["t1"])
}
