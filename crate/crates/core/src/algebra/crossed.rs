use crate::error::{Error, Result};
use crate::rational::Rational;

use super::lie::LieAlgebra;
use super::report::{AxiomCheck, ValidationReport, Witness};

/// Differential crossed module `(h, g; α, ▷)` with `α: h → g` and a
/// left action of `g` on `h` by derivations.
#[derive(Debug, Clone)]
pub struct DifferentialCrossedModule {
    name: String,
    g: LieAlgebra,
    h: LieAlgebra,
    /// `alpha_cols[i]` holds the nonzero `(a, v)` of `α(Y_i) = Σ_a v X_a`.
    alpha_cols: Vec<Vec<(usize, Rational)>>,
    /// `action[a * dim_h + i]` holds the nonzero `(j, v)` of `X_a ▷ Y_i`.
    action: Vec<Vec<(usize, Rational)>>,
    conjugation: bool,
}

impl DifferentialCrossedModule {
    /// `alpha` entries are `(a, i, v)`, `action` entries `(a, i, j, v)`, all zero-based.
    pub fn new(
        name: impl Into<String>,
        g: LieAlgebra,
        h: LieAlgebra,
        alpha: impl IntoIterator<Item = (usize, usize, Rational)>,
        action: impl IntoIterator<Item = (usize, usize, usize, Rational)>,
    ) -> Result<Self> {
        let (dg, dh) = (g.dim(), h.dim());
        let mut alpha_dense = vec![Rational::zero(); dg * dh];
        for (a, i, v) in alpha {
            if a >= dg || i >= dh {
                return Err(Error::Invalid("alpha index out of range".into()));
            }
            alpha_dense[i * dg + a] += &v;
        }
        let mut act_dense = vec![Rational::zero(); dg * dh * dh];
        for (a, i, j, v) in action {
            if a >= dg || i >= dh || j >= dh {
                return Err(Error::Invalid("action index out of range".into()));
            }
            act_dense[(a * dh + i) * dh + j] += &v;
        }
        let alpha_cols = (0..dh)
            .map(|i| sparse_row(&alpha_dense[i * dg..(i + 1) * dg]))
            .collect();
        let action = (0..dg * dh)
            .map(|ai| sparse_row(&act_dense[ai * dh..(ai + 1) * dh]))
            .collect();
        let mut cm = DifferentialCrossedModule { name: name.into(), g, h, alpha_cols, action, conjugation: false };
        cm.conjugation = cm.detect_conjugation();
        Ok(cm)
    }

    /// Same `α` and `▷` over replacement algebras of equal dimensions.
    pub fn with_algebras(&self, g: LieAlgebra, h: LieAlgebra) -> Result<Self> {
        if g.dim() != self.g.dim() || h.dim() != self.h.dim() {
            return Err(Error::Invalid("replacement algebras change dimensions".into()));
        }
        let alpha: Vec<_> = self.alpha_entries();
        let action: Vec<_> = self.action_entries();
        Self::new(self.name.clone(), g, h, alpha, action)
    }

    /// Nonzero `(a, i, v)` with `α(Y_i) ∋ v X_a`.
    pub fn alpha_entries(&self) -> Vec<(usize, usize, Rational)> {
        self.alpha_cols
            .iter()
            .enumerate()
            .flat_map(|(i, col)| col.iter().map(move |(a, v)| (*a, i, v.clone())))
            .collect()
    }

    /// Nonzero `(a, i, j, v)` with `X_a ▷ Y_i ∋ v Y_j`.
    pub fn action_entries(&self) -> Vec<(usize, usize, usize, Rational)> {
        let dh = self.h.dim();
        self.action
            .iter()
            .enumerate()
            .flat_map(|(ai, row)| row.iter().map(move |(j, v)| (ai / dh, ai % dh, *j, v.clone())))
            .collect()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn g(&self) -> &LieAlgebra {
        &self.g
    }

    pub fn h(&self) -> &LieAlgebra {
        &self.h
    }

    pub fn alpha_col(&self, i: usize) -> &[(usize, Rational)] {
        &self.alpha_cols[i]
    }

    pub fn act_basis(&self, a: usize, i: usize) -> &[(usize, Rational)] {
        &self.action[a * self.h.dim() + i]
    }

    pub fn alpha_is_zero(&self) -> bool {
        self.alpha_cols.iter().all(Vec::is_empty)
    }

    pub fn act(&self, x: &[Rational], y: &[Rational]) -> Result<Vec<Rational>> {
        self.g.check_len(x)?;
        self.h.check_len(y)?;
        let mut out = vec![Rational::zero(); self.h.dim()];
        for (a, xa) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (i, yi) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let c = xa * yi;
                for (j, r) in self.act_basis(a, i) {
                    out[*j] += &(&c * r);
                }
            }
        }
        Ok(out)
    }

    pub fn alpha_apply(&self, y: &[Rational]) -> Result<Vec<Rational>> {
        self.h.check_len(y)?;
        let mut out = vec![Rational::zero(); self.g.dim()];
        for (i, yi) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (a, v) in self.alpha_col(i) {
                out[*a] += &(yi * v);
            }
        }
        Ok(out)
    }

    /// Whether group elements act on both `g` and `h` by matrix conjugation
    /// compatibly with `▷` and `α`, as for adjoint-type modules.
    pub fn supports_conjugation(&self) -> bool {
        self.conjugation
    }

    fn detect_conjugation(&self) -> bool {
        let (Some(ng), Some(nh)) = (self.g.rep_size(), self.h.rep_size()) else {
            return false;
        };
        if ng != nh {
            return false;
        }
        let (dg, dh) = (self.g.dim(), self.h.dim());
        for a in 0..dg {
            let xa = self.g.to_matrix(&self.g.basis_vector(a)).expect("rep present");
            for i in 0..dh {
                let yi = self.h.to_matrix(&self.h.basis_vector(i)).expect("rep present");
                let act = self.act(&self.g.basis_vector(a), &self.h.basis_vector(i)).expect("lengths match");
                if self.h.to_matrix(&act).expect("rep present") != xa.commutator(&yi) {
                    return false;
                }
            }
        }
        if self.alpha_is_zero() {
            return true;
        }
        (0..dh).all(|i| {
            let y = self.h.basis_vector(i);
            let ay = self.alpha_apply(&y).expect("lengths match");
            self.g.to_matrix(&ay).expect("rep present") == self.h.to_matrix(&y).expect("rep present")
        })
    }

    fn h_bracket_basis(&self, i: usize, j: usize) -> Vec<Rational> {
        self.h.bracket(&self.h.basis_vector(i), &self.h.basis_vector(j)).expect("basis lengths")
    }

    fn act_vec(&self, a: usize, y: &[Rational]) -> Vec<Rational> {
        self.act(&self.g.basis_vector(a), y).expect("basis lengths")
    }

    fn label(&self, g_idx: &[usize], h_idx: &[usize]) -> Vec<String> {
        g_idx
            .iter()
            .map(|&a| self.g.basis_name(a).to_string())
            .chain(h_idx.iter().map(|&i| self.h.basis_name(i).to_string()))
            .collect()
    }

    fn check_derivation(&self) -> AxiomCheck {
        let (dg, dh) = (self.g.dim(), self.h.dim());
        for a in 0..dg {
            for i in 0..dh {
                let ai = self.act_vec(a, &self.h.basis_vector(i));
                for j in 0..dh {
                    let lhs = self.act_vec(a, &self.h_bracket_basis(i, j));
                    let aj = self.act_vec(a, &self.h.basis_vector(j));
                    let r1 = self.h.bracket(&ai, &self.h.basis_vector(j)).expect("lengths");
                    let r2 = self.h.bracket(&self.h.basis_vector(i), &aj).expect("lengths");
                    if lhs.iter().zip(r1.iter().zip(&r2)).any(|(l, (x, y))| *l != x + y) {
                        return AxiomCheck::fail(
                            "derivation",
                            Witness::new(&self.name, [a, i, j], self.label(&[a], &[i, j])),
                        );
                    }
                }
            }
        }
        AxiomCheck::pass("derivation")
    }

    fn check_morphism(&self) -> AxiomCheck {
        let (dg, dh) = (self.g.dim(), self.h.dim());
        for a in 0..dg {
            for b in 0..dg {
                let ab = self.g.bracket(&self.g.basis_vector(a), &self.g.basis_vector(b)).expect("lengths");
                for i in 0..dh {
                    let y = self.h.basis_vector(i);
                    let lhs = self.act(&ab, &y).expect("lengths");
                    let r1 = self.act_vec(a, &self.act_vec(b, &y));
                    let r2 = self.act_vec(b, &self.act_vec(a, &y));
                    if lhs.iter().zip(r1.iter().zip(&r2)).any(|(l, (x, y))| *l != x - y) {
                        return AxiomCheck::fail(
                            "morphism",
                            Witness::new(&self.name, [a, b, i], self.label(&[a, b], &[i])),
                        );
                    }
                }
            }
        }
        AxiomCheck::pass("morphism")
    }

    fn check_equivariance(&self) -> AxiomCheck {
        let (dg, dh) = (self.g.dim(), self.h.dim());
        for a in 0..dg {
            for i in 0..dh {
                let lhs = self.alpha_apply(&self.act_vec(a, &self.h.basis_vector(i))).expect("lengths");
                let ai = self.alpha_apply(&self.h.basis_vector(i)).expect("lengths");
                let rhs = self.g.bracket(&self.g.basis_vector(a), &ai).expect("lengths");
                if lhs != rhs {
                    return AxiomCheck::fail("equivariance", Witness::new(&self.name, [a, i], self.label(&[a], &[i])));
                }
            }
        }
        AxiomCheck::pass("equivariance")
    }

    fn check_peiffer(&self) -> AxiomCheck {
        let dh = self.h.dim();
        for i in 0..dh {
            let ai = self.alpha_apply(&self.h.basis_vector(i)).expect("lengths");
            for j in 0..dh {
                let lhs = self.act(&ai, &self.h.basis_vector(j)).expect("lengths");
                if lhs != self.h_bracket_basis(i, j) {
                    return AxiomCheck::fail("peiffer", Witness::new(&self.name, [i, j], self.label(&[], &[i, j])));
                }
            }
        }
        AxiomCheck::pass("peiffer")
    }

    /// Exhaustive check of every axiom family over basis tuples.
    pub fn validate(&self) -> ValidationReport {
        let merge = |x: AxiomCheck, y: AxiomCheck| if x.pass { y } else { x };
        let mut checks = vec![
            merge(self.g.check_antisymmetry(), self.h.check_antisymmetry()),
            merge(self.g.check_jacobi(), self.h.check_jacobi()),
        ];
        let reps: Vec<AxiomCheck> =
            self.g.check_representation().into_iter().chain(self.h.check_representation()).collect();
        if let Some(r) = reps.into_iter().reduce(merge) {
            checks.push(r);
        }
        checks.extend([self.check_derivation(), self.check_morphism(), self.check_equivariance(), self.check_peiffer()]);
        ValidationReport { checks }
    }
}

fn sparse_row(row: &[Rational]) -> Vec<(usize, Rational)> {
    row.iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(k, v)| (k, v.clone()))
        .collect()
}
