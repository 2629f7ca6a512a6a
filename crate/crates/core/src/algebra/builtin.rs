//! Shipped example algebras and crossed modules.

use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::rational::Rational;

use super::crossed::DifferentialCrossedModule;
use super::lie::LieAlgebra;

/// Structure constants read off a set of matrices closed under commutators.
fn from_matrices(name: &str, names: Vec<String>, mats: Vec<RatMatrix>) -> LieAlgebra {
    let probe = LieAlgebra::new(name, names.clone(), Vec::new(), Some(mats.clone())).expect("independent basis");
    let mut consts = Vec::new();
    for a in 0..mats.len() {
        for b in 0..mats.len() {
            let c = probe.from_matrix(&mats[a].commutator(&mats[b])).expect("closed under commutators");
            consts.extend(c.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(k, v)| (a, b, k, v)));
        }
    }
    LieAlgebra::new(name, names, consts, Some(mats)).expect("valid construction")
}

/// `gl(N)` with basis `E_ij` in row-major order, represented by itself.
pub fn gl(n: usize) -> LieAlgebra {
    assert!(n >= 1);
    let mut names = Vec::new();
    let mut mats = Vec::new();
    for i in 0..n {
        for j in 0..n {
            names.push(format!("E{}{}", i + 1, j + 1));
            mats.push(RatMatrix::unit(n, i, j));
        }
    }
    from_matrices(&format!("gl({n})"), names, mats)
}

/// `so(3)` with `[e_i, e_j] = ε_ijk e_k`.
pub fn so3() -> LieAlgebra {
    let mats = (0..3)
        .map(|i| {
            let mut m = RatMatrix::zeros(3, 3);
            for j in 0..3 {
                for k in 0..3 {
                    let e = levi_civita(i, j, k);
                    if e != 0 {
                        m.set(j, k, Rational::from_int(-e));
                    }
                }
            }
            m
        })
        .collect();
    from_matrices("so(3)", vec!["e1".into(), "e2".into(), "e3".into()], mats)
}

fn levi_civita(i: usize, j: usize, k: usize) -> i64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

/// `k`-dimensional abelian algebra, represented by diagonal matrices.
pub fn abelian(k: usize) -> LieAlgebra {
    assert!(k >= 1);
    let names = (1..=k).map(|i| format!("e{i}")).collect();
    let mats = (0..k).map(|i| RatMatrix::unit(k, i, i)).collect();
    LieAlgebra::new(format!("u(1)^{k}"), names, Vec::new(), Some(mats)).expect("valid construction")
}

const ETA: [i64; 4] = [-1, 1, 1, 1];

fn eta(a: usize, b: usize) -> i64 {
    if a == b {
        ETA[a]
    } else {
        0
    }
}

fn lorentz_pairs() -> Vec<(usize, usize)> {
    (0..4).flat_map(|a| (a + 1..4).map(move |b| (a, b))).collect()
}

/// `so(3,1)` with generators `M_ab`, `a < b`, metric `diag(-1, 1, 1, 1)`,
/// represented on `R^4` by `M_ab ▷ P_c = η_bc P_a − η_ac P_b`.
pub fn so31() -> LieAlgebra {
    let pairs = lorentz_pairs();
    let index = |a: usize, b: usize| -> Option<(usize, i64)> {
        match a.cmp(&b) {
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Less => Some((pairs.iter().position(|&p| p == (a, b)).unwrap(), 1)),
            std::cmp::Ordering::Greater => Some((pairs.iter().position(|&p| p == (b, a)).unwrap(), -1)),
        }
    };
    let mut consts = Vec::new();
    for (x, &(a, b)) in pairs.iter().enumerate() {
        for (y, &(c, d)) in pairs.iter().enumerate() {
            let terms = [
                (eta(a, d), b, c),
                (eta(b, c), a, d),
                (-eta(a, c), b, d),
                (-eta(b, d), a, c),
            ];
            for (coef, p, r) in terms {
                if coef == 0 {
                    continue;
                }
                if let Some((z, s)) = index(p, r) {
                    consts.push((x, y, z, Rational::from_int(coef * s)));
                }
            }
        }
    }
    let names = pairs.iter().map(|(a, b)| format!("M{a}{b}")).collect();
    let mats = pairs.iter().map(|&(a, b)| lorentz_vector_matrix(a, b)).collect();
    LieAlgebra::new("so(3,1)", names, consts, Some(mats)).expect("valid construction")
}

fn lorentz_vector_matrix(a: usize, b: usize) -> RatMatrix {
    let mut m = RatMatrix::zeros(4, 4);
    for c in 0..4 {
        let v = m.get(a, c) + &Rational::from_int(eta(b, c));
        m.set(a, c, v);
        let w = m.get(b, c) - &Rational::from_int(eta(a, c));
        m.set(b, c, w);
    }
    m
}

/// The Poincaré 2-algebra: `g = so(3,1)`, `h = R^4` abelian, `α = 0` and the
/// vector action on translations.
pub fn poincare2() -> DifferentialCrossedModule {
    let g = so31();
    let names = (0..4).map(|a| format!("P{a}")).collect();
    let mats = (0..4).map(|i| RatMatrix::unit(4, i, i)).collect();
    let h = LieAlgebra::new("R^4", names, Vec::new(), Some(mats)).expect("valid construction");
    let mut action = Vec::new();
    for (x, &(a, b)) in lorentz_pairs().iter().enumerate() {
        let m = lorentz_vector_matrix(a, b);
        for c in 0..4 {
            for j in 0..4 {
                let v = m.get(j, c);
                if !v.is_zero() {
                    action.push((x, c, j, v.clone()));
                }
            }
        }
    }
    DifferentialCrossedModule::new("poincare2", g, h, Vec::new(), action).expect("valid construction")
}

/// `g = h = L`, `α = id`, `▷ = ad`.
pub fn adjoint_module(l: LieAlgebra) -> Result<DifferentialCrossedModule> {
    if l.representation().is_none() {
        return Err(Error::MissingRepresentation(l.name().to_string()));
    }
    let d = l.dim();
    let mut action = Vec::new();
    for a in 0..d {
        for i in 0..d {
            action.extend(l.bracket_basis(a, i).iter().map(|(j, v)| (a, i, *j, v.clone())));
        }
    }
    let alpha = (0..d).map(|i| (i, i, Rational::one()));
    let name = format!("adjoint {}", l.name());
    DifferentialCrossedModule::new(name, l.clone(), l, alpha, action)
}
