use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::rational::Rational;

use super::crossed::DifferentialCrossedModule;
use super::report::{AxiomCheck, ValidationReport, Witness};

/// Multilinear pairing `⟨X_{a_1} ⋯ X_{a_n}, Y_i⟩ = T[a_1]…[a_n][i]`,
/// symmetric in the `g` slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantPolynomial {
    arity: usize,
    dim_g: usize,
    dim_h: usize,
    data: Vec<Rational>,
}

impl InvariantPolynomial {
    pub fn zero(arity: usize, dim_g: usize, dim_h: usize) -> Result<Self> {
        if arity == 0 {
            return Err(Error::Invalid("invariant polynomial arity must be positive".into()));
        }
        let len = dim_g
            .checked_pow(arity as u32)
            .and_then(|x| x.checked_mul(dim_h))
            .filter(|&l| l <= 1 << 24)
            .ok_or_else(|| Error::Invalid("coefficient tensor too large".into()))?;
        Ok(InvariantPolynomial { arity, dim_g, dim_h, data: vec![Rational::zero(); len] })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim_g(&self) -> usize {
        self.dim_g
    }

    pub fn dim_h(&self) -> usize {
        self.dim_h
    }

    fn offset(&self, g_idx: &[usize], i: usize) -> usize {
        debug_assert_eq!(g_idx.len(), self.arity);
        g_idx.iter().fold(0, |acc, &a| acc * self.dim_g + a) * self.dim_h + i
    }

    pub fn get(&self, g_idx: &[usize], i: usize) -> &Rational {
        &self.data[self.offset(g_idx, i)]
    }

    pub fn set(&mut self, g_idx: &[usize], i: usize, v: Rational) {
        let o = self.offset(g_idx, i);
        self.data[o] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    /// All g-index tuples in lexicographic order.
    pub fn g_tuples(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        let total = self.dim_g.pow(self.arity as u32);
        (0..total).map(move |mut k| {
            let mut t = vec![0; self.arity];
            for slot in t.iter_mut().rev() {
                *slot = k % self.dim_g;
                k /= self.dim_g;
            }
            t
        })
    }

    /// Full contraction against vectors.
    pub fn contract(&self, xs: &[&[Rational]], y: &[Rational]) -> Result<Rational> {
        if xs.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: xs.len() });
        }
        for x in xs {
            if x.len() != self.dim_g {
                return Err(Error::LengthMismatch { expected: self.dim_g, got: x.len() });
            }
        }
        if y.len() != self.dim_h {
            return Err(Error::LengthMismatch { expected: self.dim_h, got: y.len() });
        }
        let mut acc = Rational::zero();
        for t in self.g_tuples() {
            let mut w = Rational::one();
            for (x, &a) in xs.iter().zip(&t) {
                w = &w * &x[a];
                if w.is_zero() {
                    break;
                }
            }
            if w.is_zero() {
                continue;
            }
            for (i, yi) in y.iter().enumerate() {
                let c = self.get(&t, i);
                if !c.is_zero() && !yi.is_zero() {
                    acc += &(&w * &(c * yi));
                }
            }
        }
        Ok(acc)
    }

    /// Symmetrized trace over the `n + 1` factors
    /// `R(X_{a_1}), …, R(X_{a_n}), R(α(Y_i))`.
    pub fn from_trace(cm: &DifferentialCrossedModule, n: usize) -> Result<Self> {
        let g = cm.g();
        let reps = g.representation().ok_or_else(|| Error::MissingRepresentation(g.name().to_string()))?;
        let mut p = Self::zero(n, g.dim(), cm.h().dim())?;
        let alpha_mats: Vec<RatMatrix> = (0..cm.h().dim())
            .map(|i| g.to_matrix(&cm.alpha_apply(&cm.h().basis_vector(i)).expect("lengths")))
            .collect::<Result<_>>()?;
        let perms = permutations(n + 1);
        let norm = Rational::factorial(n as u32 + 1).recip().expect("nonzero");
        let tuples: Vec<Vec<usize>> = p.g_tuples().collect();
        for t in tuples {
            if t.windows(2).any(|w| w[0] > w[1]) {
                continue;
            }
            for (i, am) in alpha_mats.iter().enumerate() {
                if am.is_zero() {
                    continue;
                }
                let factors: Vec<&RatMatrix> = t.iter().map(|&a| &reps[a]).chain(std::iter::once(am)).collect();
                let mut sum = Rational::zero();
                for perm in &perms {
                    let mut prod = factors[perm[0]].clone();
                    for &k in &perm[1..] {
                        prod = prod.mul(factors[k]);
                    }
                    sum += &prod.trace();
                }
                let v = &sum * &norm;
                for s in permutations(n) {
                    let st: Vec<usize> = s.iter().map(|&k| t[k]).collect();
                    p.set(&st, i, v.clone());
                }
            }
        }
        Ok(p)
    }

    fn check_dims(&self, cm: &DifferentialCrossedModule) -> Result<()> {
        if self.dim_g != cm.g().dim() {
            return Err(Error::LengthMismatch { expected: cm.g().dim(), got: self.dim_g });
        }
        if self.dim_h != cm.h().dim() {
            return Err(Error::LengthMismatch { expected: cm.h().dim(), got: self.dim_h });
        }
        Ok(())
    }

    fn witness(&self, cm: &DifferentialCrossedModule, extra_g: &[usize], t: &[usize], hs: &[usize]) -> Witness {
        let indices: Vec<usize> = extra_g.iter().chain(t).chain(hs).copied().collect();
        let labels = extra_g
            .iter()
            .chain(t)
            .map(|&a| cm.g().basis_name(a).to_string())
            .chain(hs.iter().map(|&i| cm.h().basis_name(i).to_string()))
            .collect();
        Witness::from_vec("pairing", indices, labels)
    }

    fn check_symmetry(&self, cm: &DifferentialCrossedModule) -> AxiomCheck {
        for t in self.g_tuples() {
            for k in 0..self.arity.saturating_sub(1) {
                let mut s = t.clone();
                s.swap(k, k + 1);
                for i in 0..self.dim_h {
                    if self.get(&t, i) != self.get(&s, i) {
                        return AxiomCheck::fail("symmetry", self.witness(cm, &[], &t, &[i]));
                    }
                }
            }
        }
        AxiomCheck::pass("symmetry")
    }

    /// `⟨X_1⋯X_n, X▷Y⟩ + Σ_k ⟨X_1⋯[X,X_k]⋯X_n, Y⟩ = 0`.
    fn check_ad_invariance(&self, cm: &DifferentialCrossedModule) -> AxiomCheck {
        let g = cm.g();
        for b in 0..self.dim_g {
            for t in self.g_tuples() {
                for i in 0..self.dim_h {
                    let mut acc = Rational::zero();
                    for (j, v) in cm.act_basis(b, i) {
                        acc += &(v * self.get(&t, *j));
                    }
                    for k in 0..self.arity {
                        let mut s = t.clone();
                        for (c, f) in g.bracket_basis(b, t[k]) {
                            s[k] = *c;
                            acc += &(f * self.get(&s, i));
                        }
                    }
                    if !acc.is_zero() {
                        return AxiomCheck::fail("ad-invariance", self.witness(cm, &[b], &t, &[i]));
                    }
                }
            }
        }
        AxiomCheck::pass("ad-invariance")
    }

    /// `⟨X_1⋯α(Y_i)⋯X_n, Y_j⟩ = ⟨X_1⋯α(Y_j)⋯X_n, Y_i⟩` in every slot.
    fn check_alpha_exchange(&self, cm: &DifferentialCrossedModule) -> AxiomCheck {
        for t in self.g_tuples() {
            for k in 0..self.arity {
                for i in 0..self.dim_h {
                    for j in (i + 1)..self.dim_h {
                        let side = |p: usize, q: usize| {
                            let mut s = t.clone();
                            let mut acc = Rational::zero();
                            for (c, v) in cm.alpha_col(p) {
                                s[k] = *c;
                                acc += &(v * self.get(&s, q));
                            }
                            acc
                        };
                        if side(i, j) != side(j, i) {
                            return AxiomCheck::fail("alpha-exchange", self.witness(cm, &[], &t, &[i, j]));
                        }
                    }
                }
            }
        }
        AxiomCheck::pass("alpha-exchange")
    }

    /// Exhaustive symmetry, ad-invariance and α-exchange checks.
    pub fn validate(&self, cm: &DifferentialCrossedModule) -> Result<ValidationReport> {
        self.check_dims(cm)?;
        Ok(ValidationReport {
            checks: vec![self.check_symmetry(cm), self.check_ad_invariance(cm), self.check_alpha_exchange(cm)],
        })
    }
}

/// All permutations of `0..n` in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin;

    fn gl2_module() -> DifferentialCrossedModule {
        builtin::adjoint_module(builtin::gl(2)).unwrap()
    }

    #[test]
    fn trace_pairing_values() {
        let cm = gl2_module();
        let p = InvariantPolynomial::from_trace(&cm, 1).unwrap();
        let (e11, e12, e21, e22) = (0, 1, 2, 3);
        assert_eq!(*p.get(&[e12], e21), Rational::one());
        assert!(p.get(&[e11], e22).is_zero());
        assert_eq!(*p.get(&[e11], e11), Rational::one());
    }

    #[test]
    fn trace_pairings_validate() {
        let cm = gl2_module();
        for n in 1..=2 {
            let p = InvariantPolynomial::from_trace(&cm, n).unwrap();
            assert!(p.validate(&cm).unwrap().all_pass());
        }
    }

    #[test]
    fn poincare_pairing_vanishes() {
        let cm = builtin::poincare2();
        for n in 1..=2 {
            let p = InvariantPolynomial::from_trace(&cm, n).unwrap();
            assert!(p.is_zero());
            assert!(p.validate(&cm).unwrap().all_pass());
        }
    }

    #[test]
    fn perturbed_entry_breaks_invariance() {
        let cm = gl2_module();
        let mut p = InvariantPolynomial::from_trace(&cm, 1).unwrap();
        let v = p.get(&[1], 2) + &Rational::one();
        p.set(&[1], 2, v);
        let r = p.validate(&cm).unwrap();
        let inv = r.get("ad-invariance").unwrap();
        assert!(!inv.pass);
        assert!(inv.witness.is_some());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let p = InvariantPolynomial::zero(1, 3, 3).unwrap();
        assert!(p.validate(&gl2_module()).is_err());
        assert!(matches!(p.contract(&[], &[]), Err(Error::ArityMismatch { expected: 1, got: 0 })));
    }

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(0).len(), 1);
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(4).len(), 24);
    }
}
