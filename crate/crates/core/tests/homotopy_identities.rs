mod common;

use common::{so3, Fixture};
use hgauge::forms::BiGradedForm;
use hgauge::gauge::*;
use hgauge::homotopy::*;
use hgauge::random::PolyShape;
use hgauge::Rational;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// `⟨A, ½dB + ⅓A∧^▷B⟩ + ⟨½dA + ⅓A∧A − ½α(B), B⟩`, the n = 1 closed form.
fn chsas_n1_oracle(f: &Fixture, c: &TwoConnection) -> BiGradedForm {
    let (a, b) = (c.a(), c.b());
    let h_arg = b.d_x().scale(&q(1, 2)).add(&BiGradedForm::wedge_action(&f.cm, a, b).unwrap().scale(&q(1, 3))).unwrap();
    let g_arg = a
        .d_x()
        .scale(&q(1, 2))
        .add(&square_one_form(f.cm.g(), a).unwrap().scale(&q(1, 3)))
        .unwrap()
        .sub(&BiGradedForm::alpha_push(&f.cm, b).unwrap().scale(&q(1, 2)))
        .unwrap();
    BiGradedForm::pair(&f.p, &[a], &h_arg).unwrap().add(&BiGradedForm::pair(&f.p, &[&g_arg], b).unwrap()).unwrap()
}

#[test]
fn chern_weil_residuals_vanish() {
    let mut f = Fixture::desk(101);
    for _ in 0..3 {
        let (c0, c1) = (f.connection(), f.connection());
        let (r1, r2) = chern_weil_check(&f.p, &f.cm, &c0, &c1, 1).unwrap();
        assert!(r1.is_zero() && r2.is_zero());
    }
}

#[test]
fn chern_weil_on_so3() {
    let mut f = Fixture::with(so3(), 1, 5, PolyShape::new(2, 3), 7);
    let (c0, c1) = (f.connection(), f.connection());
    let (r1, r2) = chern_weil_check(&f.p, &f.cm, &c0, &c1, 1).unwrap();
    assert!(r1.is_zero() && r2.is_zero());
    assert!(cartan_homotopy_check(&f.p, &f.cm, &c0, &c1, 1).unwrap().is_zero());
}

#[test]
fn transgression_basics() {
    let mut f = Fixture::desk(103);
    let (c0, c1) = (f.connection(), f.connection());
    assert!(transgression_q(&f.p, &f.cm, &c0, &c0, 1).unwrap().is_zero());
    let zero = TwoConnection::zero(&f.cm, &f.reg);
    assert_eq!(transgression_q(&f.p, &f.cm, &zero, &c1, 1).unwrap(), chsas_form(&f.p, &f.cm, &c1, 1).unwrap());
    let round = transgression_q(&f.p, &f.cm, &c0, &c1, 1).unwrap().add(&transgression_q(&f.p, &f.cm, &c1, &c0, 1).unwrap()).unwrap();
    assert!(round.d_x().is_zero());
}

#[test]
fn chsas_identity_and_closed_form() {
    let mut f = Fixture::desk(107);
    for _ in 0..3 {
        let c = f.connection();
        assert!(chsas_check(&f.p, &f.cm, &c, 1).unwrap().is_zero());
        assert_eq!(chsas_form(&f.p, &f.cm, &c, 1).unwrap(), chsas_n1_oracle(&f, &c));
    }
}

#[test]
fn triangle_and_corollary() {
    let mut f = Fixture::desk(109);
    for _ in 0..2 {
        let cs = f.connections(3);
        let t = triangle_check(&f.p, &f.cm, &cs[0], &cs[1], &cs[2], 1).unwrap();
        assert!(t.is_zero(), "flips {:?}", t.single_sign_flips());
        assert!(chsas_difference_check(&f.p, &f.cm, &cs[0], &cs[1], 1).unwrap().is_zero());
    }
}

#[test]
fn sign_flip_diagnosis_names_the_culprit() {
    let mut f = Fixture::desk(113);
    let cs = f.connections(3);
    let t = triangle_check(&f.p, &f.cm, &cs[0], &cs[1], &cs[2], 1).unwrap();
    let mut terms: Vec<(&'static str, i64, BiGradedForm)> =
        t.labels.iter().zip(&t.terms).map(|(l, x)| (*l, 1, x.clone())).collect();
    terms[3].1 = -1;
    let broken = SignedSum::new(terms).unwrap();
    assert!(!broken.is_zero());
    assert_eq!(broken.single_sign_flips(), vec!["dQ3(c0,c1,c2)"]);
}

#[test]
fn cartan_decomposition() {
    let mut f = Fixture::desk(127);
    for _ in 0..2 {
        let (c0, c1) = (f.connection(), f.connection());
        assert!(cartan_homotopy_check(&f.p, &f.cm, &c0, &c1, 1).unwrap().is_zero());
    }
    let (c0, c1) = (f.connection(), f.connection());
    assert_eq!(b_form(&f.p, &f.cm, &c0, &c1, 1).unwrap().bidegree(), Some((3, 0)));
}

#[test]
fn descent_equations_n1() {
    let mut f = Fixture::desk(131);
    for level in 0..=2 {
        for _ in 0..2 {
            let fam = ConnectionFamily::new(f.connections(level + 2)).unwrap();
            let s = echf_check(level, &fam, &f.p, &f.cm, 1).unwrap();
            assert!(s.is_zero(), "level {level}, flips {:?}", s.single_sign_flips());
        }
    }
}

#[test]
fn descent_rejects_wrong_family_size() {
    let mut f = Fixture::desk(137);
    let fam = ConnectionFamily::new(f.connections(2)).unwrap();
    assert!(echf_check(1, &fam, &f.p, &f.cm, 1).is_err());
}

#[test]
fn descent_level_zero_is_chern_weil() {
    let mut f = Fixture::desk(139);
    let cs = f.connections(2);
    let fam = ConnectionFamily::new(cs.clone()).unwrap();
    let s = echf_check(0, &fam, &f.p, &f.cm, 1).unwrap();
    // the faces are P(c1) − P(c0); the exact term is −dQ
    let faces = invariant_form_p(&f.p, &f.cm, &cs[1], 1).unwrap().0.sub(&invariant_form_p(&f.p, &f.cm, &cs[0], 1).unwrap().0).unwrap();
    assert_eq!(s.terms[0], faces);
    assert_eq!(s.terms[1], transgression_q(&f.p, &f.cm, &cs[0], &cs[1], 1).unwrap().d_x().neg());
}

#[test]
fn graded_relations_hold() {
    let mut f = Fixture::desk(149);
    let fam = ConnectionFamily::new(f.connections(3)).unwrap();
    for (name, r) in graded_relations_check(&fam, &f.p, &f.cm, 1).unwrap() {
        assert!(r.is_zero(), "{name}");
    }
}

#[test]
fn single_member_family_reproduces_p() {
    let mut f = Fixture::desk(151);
    let c = f.connection();
    let fam = ConnectionFamily::new(vec![c.clone()]).unwrap();
    let e = expr_eval_on(&HomotopyExpr::pi(1), &fam, &f.p, &f.cm).unwrap();
    assert_eq!(e.rebase(&f.reg).unwrap(), invariant_form_p(&f.p, &f.cm, &c, 1).unwrap().0);
}

#[test]
fn dt_of_connection_is_the_difference() {
    let mut f = Fixture::desk(157);
    let cs = f.connections(2);
    let fam = ConnectionFamily::new(cs.clone()).unwrap();
    let vals = FamilyValues::new(&fam, &f.cm).unwrap();
    let reg = fam.registry();
    let theta = cs[1].a().sub(cs[0].a()).unwrap().rebase(reg).unwrap();
    let dt1 = BiGradedForm::scalar(reg, &[0], &[], hgauge::Poly::one(reg)).unwrap();
    // dt factors sit to the left: d_t A_t = dt1 ∧ θ = −θ ∧ dt1
    assert_eq!(vals.get(Generator::DtAt), &BiGradedForm::scalar_wedge(&dt1, &theta).unwrap());
    assert_eq!(vals.get(Generator::DtAt), &BiGradedForm::wedge_scalar(&theta, &dt1).unwrap().neg());
}

#[test]
fn lt_evaluation_matches_direct_substitution() {
    let mut f = Fixture::desk(163);
    let cs = f.connections(2);
    let fam = ConnectionFamily::new(cs.clone()).unwrap();
    let reg = fam.registry();
    let k = family_curvature(&fam, &f.cm).unwrap();
    let dt1 = BiGradedForm::scalar(reg, &[0], &[], hgauge::Poly::one(reg)).unwrap();
    let theta = cs[1].a().sub(cs[0].a()).unwrap().rebase(reg).unwrap();
    let phi = cs[1].b().sub(cs[0].b()).unwrap().rebase(reg).unwrap();
    let direct = BiGradedForm::pair(&f.p, &[&BiGradedForm::scalar_wedge(&dt1, &theta).unwrap()], &k.g)
        .unwrap()
        .add(&BiGradedForm::pair(&f.p, &[&k.f], &BiGradedForm::scalar_wedge(&dt1, &phi).unwrap()).unwrap())
        .unwrap();
    let engine = expr_eval_on(&HomotopyExpr::pi(1).lt_apply(), &fam, &f.p, &f.cm).unwrap();
    assert_eq!(engine, direct);
}

#[test]
fn evaluation_is_linear() {
    let mut f = Fixture::desk(167);
    let fam = ConnectionFamily::new(f.connections(3)).unwrap();
    let vals = FamilyValues::new(&fam, &f.cm).unwrap();
    let e1 = HomotopyExpr::pi(1).lt_apply();
    let e2 = HomotopyExpr::monomial(Rational::one(), vec![Generator::At], Generator::DtGt).unwrap();
    let c = q(-3, 2);
    let combined = expr_eval(&e1.add_scaled(&e2, &c).unwrap(), &vals, &f.p).unwrap();
    let separate = expr_eval(&e1, &vals, &f.p).unwrap().add_scaled(&expr_eval(&e2, &vals, &f.p).unwrap(), &c).unwrap();
    assert_eq!(combined, separate);
}

#[test]
fn stress_tier_chern_weil_and_descent() {
    let mut f = Fixture::stress(173);
    let cs = f.connections(2);
    let (r1, r2) = chern_weil_check(&f.p, &f.cm, &cs[0], &cs[1], 2).unwrap();
    assert!(r1.is_zero() && r2.is_zero());
    let fam = ConnectionFamily::new(f.connections(3)).unwrap();
    assert!(echf_check(1, &fam, &f.p, &f.cm, 2).unwrap().is_zero());
}
