#![allow(dead_code)]

use hgauge::algebra::{builtin, DifferentialCrossedModule, InvariantPolynomial};
use hgauge::gauge::TwoConnection;
use hgauge::random::{random_connection, rng, FixtureRng, PolyShape};
use hgauge::{Registry, VarRegistry};

pub fn gl2() -> DifferentialCrossedModule {
    builtin::adjoint_module(builtin::gl(2)).unwrap()
}

pub fn so3() -> DifferentialCrossedModule {
    builtin::adjoint_module(builtin::so3()).unwrap()
}

pub fn trace_pairing(cm: &DifferentialCrossedModule, n: usize) -> InvariantPolynomial {
    InvariantPolynomial::from_trace(cm, n).unwrap()
}

pub struct Fixture {
    pub cm: DifferentialCrossedModule,
    pub p: InvariantPolynomial,
    pub reg: Registry,
    pub rng: FixtureRng,
    pub shape: PolyShape,
    pub n: usize,
}

impl Fixture {
    /// n = 1 over five dimensions with quadratic coefficients.
    pub fn desk(seed: u64) -> Self {
        Self::with(gl2(), 1, 5, PolyShape::new(2, 3), seed)
    }

    /// n = 2 over seven dimensions with linear coefficients.
    pub fn stress(seed: u64) -> Self {
        Self::with(gl2(), 2, 7, PolyShape::new(1, 3), seed)
    }

    pub fn with(cm: DifferentialCrossedModule, n: usize, m: usize, shape: PolyShape, seed: u64) -> Self {
        let p = trace_pairing(&cm, n);
        Fixture { cm, p, reg: VarRegistry::spacetime(m), rng: rng(seed), shape, n }
    }

    pub fn connection(&mut self) -> TwoConnection {
        random_connection(&mut self.rng, &self.cm, &self.reg, self.shape).unwrap()
    }

    pub fn connections(&mut self, k: usize) -> Vec<TwoConnection> {
        (0..k).map(|_| self.connection()).collect()
    }
}
