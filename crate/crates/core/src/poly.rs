//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Variables come from a [`VarRegistry`]: spacetime coordinates `x1..xm`
//! followed by simplex parameters. Exponent vectors are dense over the
//! registry, term maps are sparse and never hold a zero coefficient.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Ordered variable names: spacetime coordinates first, then simplex parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarRegistry {
    x_vars: Vec<String>,
    t_vars: Vec<String>,
}

pub type Registry = Arc<VarRegistry>;

impl VarRegistry {
    pub fn new(x_vars: Vec<String>, t_vars: Vec<String>) -> Result<Registry> {
        if x_vars.is_empty() {
            return Err(Error::Invalid("registry needs at least one spacetime variable".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for v in x_vars.iter().chain(&t_vars) {
            if !seen.insert(v.as_str()) {
                return Err(Error::Invalid(format!("duplicate variable `{v}`")));
            }
        }
        Ok(Arc::new(VarRegistry { x_vars, t_vars }))
    }

    /// `x1..xm` with no simplex parameters.
    pub fn spacetime(m: usize) -> Registry {
        Self::simplex(m, 0)
    }

    /// `x1..xm` and `t1..tk`.
    pub fn simplex(m: usize, k: usize) -> Registry {
        let x = (1..=m).map(|i| format!("x{i}")).collect();
        let t = (1..=k).map(|i| format!("t{i}")).collect();
        Self::new(x, t).expect("generated names are unique")
    }

    /// Same spacetime variables, replacing the parameters.
    pub fn with_params<S: Into<String>>(&self, t_vars: impl IntoIterator<Item = S>) -> Result<Registry> {
        Self::new(self.x_vars.clone(), t_vars.into_iter().map(Into::into).collect())
    }

    /// Same spacetime variables, parameters renamed `t1..tk`.
    pub fn with_simplex(&self, k: usize) -> Registry {
        self.with_params((1..=k).map(|i| format!("t{i}"))).expect("generated names are unique")
    }

    pub fn spacetime_only(&self) -> Registry {
        self.with_simplex(0)
    }

    pub fn x_vars(&self) -> &[String] {
        &self.x_vars
    }

    pub fn t_vars(&self) -> &[String] {
        &self.t_vars
    }

    pub fn nx(&self) -> usize {
        self.x_vars.len()
    }

    pub fn nt(&self) -> usize {
        self.t_vars.len()
    }

    pub fn arity(&self) -> usize {
        self.x_vars.len() + self.t_vars.len()
    }

    /// Position of a variable in the exponent vector.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.x_vars
            .iter()
            .chain(&self.t_vars)
            .position(|v| v == name)
    }

    pub fn name(&self, idx: usize) -> &str {
        if idx < self.nx() {
            &self.x_vars[idx]
        } else {
            &self.t_vars[idx - self.nx()]
        }
    }

    /// Exponent-vector position of the `j`-th parameter (0-based).
    pub fn t_index(&self, j: usize) -> usize {
        self.nx() + j
    }
}

pub type Exponents = Vec<u16>;

#[derive(Clone)]
pub struct Poly {
    reg: Registry,
    terms: BTreeMap<Exponents, Rational>,
}

fn same_registry(a: &Registry, b: &Registry) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Poly {
    pub fn zero(reg: &Registry) -> Self {
        Poly { reg: reg.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(reg: &Registry, c: Rational) -> Self {
        let mut p = Self::zero(reg);
        if !c.is_zero() {
            p.terms.insert(vec![0; reg.arity()], c);
        }
        p
    }

    pub fn one(reg: &Registry) -> Self {
        Self::constant(reg, Rational::one())
    }

    /// The variable at exponent position `idx`.
    pub fn var(reg: &Registry, idx: usize) -> Self {
        let mut e = vec![0; reg.arity()];
        e[idx] = 1;
        Self::monomial(reg, e, Rational::one())
    }

    pub fn var_named(reg: &Registry, name: &str) -> Result<Self> {
        let idx = reg.index_of(name).ok_or_else(|| Error::UnknownVariable(name.into()))?;
        Ok(Self::var(reg, idx))
    }

    pub fn monomial(reg: &Registry, exps: Exponents, c: Rational) -> Self {
        assert_eq!(exps.len(), reg.arity(), "exponent arity");
        let mut p = Self::zero(reg);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn registry(&self) -> &Registry {
        &self.reg
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Constant term, zero if absent.
    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&vec![0; self.reg.arity()])
            .cloned()
            .unwrap_or_default()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&k| k as u32).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, idx: usize) -> u16 {
        self.terms.keys().map(|e| e[idx]).max().unwrap_or(0)
    }

    fn check_reg(&self, other: &Poly) -> Result<()> {
        if same_registry(&self.reg, &other.reg) {
            Ok(())
        } else {
            Err(Error::RegistryMismatch)
        }
    }

    fn add_term(&mut self, e: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.check_reg(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other, &Rational::one());
        Ok(out)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_reg(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other, &Rational::from_int(-1));
        Ok(out)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_reg(other)?;
        let mut out = Poly::zero(&self.reg);
        out.add_product(self, other, &Rational::one());
        Ok(out)
    }

    /// `self += c * other`; registries are assumed equal.
    pub(crate) fn add_assign_unchecked(&mut self, other: &Poly, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (e, v) in &other.terms {
            let v = if c.is_one() { v.clone() } else { v * c };
            self.add_term(e.clone(), v);
        }
    }

    /// `self += c * a * b`; registries are assumed equal.
    pub(crate) fn add_product(&mut self, a: &Poly, b: &Poly, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let n = self.reg.arity();
        let mut e = vec![0u16; n];
        for (ea, va) in &a.terms {
            let vac = if c.is_one() { va.clone() } else { va * c };
            for (eb, vb) in &b.terms {
                for k in 0..n {
                    e[k] = ea[k] + eb[k];
                }
                self.add_term(e.clone(), &vac * vb);
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.reg);
        }
        Poly {
            reg: self.reg.clone(),
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(&self.reg);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative by the variable named `var`.
    pub fn diff(&self, var: &str) -> Result<Poly> {
        let idx = self.reg.index_of(var).ok_or_else(|| Error::UnknownVariable(var.into()))?;
        Ok(self.diff_index(idx))
    }

    pub fn diff_index(&self, idx: usize) -> Poly {
        let mut out = Poly::zero(&self.reg);
        for (e, v) in &self.terms {
            let k = e[idx];
            if k == 0 {
                continue;
            }
            let mut f = e.clone();
            f[idx] -= 1;
            out.terms.insert(f, v * &Rational::from_int(k as i64));
        }
        out
    }

    /// Substitute `value` for the variable at `idx` (kept in the registry with
    /// exponent zero afterwards).
    pub fn substitute(&self, idx: usize, value: &Poly) -> Result<Poly> {
        self.check_reg(value)?;
        let max = self.degree_in(idx) as usize;
        let mut powers = Vec::with_capacity(max + 1);
        powers.push(Poly::one(&self.reg));
        for k in 1..=max {
            let next = &powers[k - 1] * value;
            powers.push(next);
        }
        let mut out = Poly::zero(&self.reg);
        for (e, v) in &self.terms {
            let k = e[idx] as usize;
            let mut f = e.clone();
            f[idx] = 0;
            let rest = Poly::monomial(&self.reg, f, v.clone());
            out.add_product(&rest, &powers[k], &Rational::one());
        }
        Ok(out)
    }

    /// Evaluate at a full point (one value per registry variable).
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.reg.arity() {
            return Err(Error::LengthMismatch { expected: self.reg.arity(), got: point.len() });
        }
        let mut acc = Rational::zero();
        for (e, v) in &self.terms {
            let mut term = v.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    term *= &x.pow(k as u32);
                }
            }
            acc += &term;
        }
        Ok(acc)
    }

    /// Move to another registry, matching variables by name. Fails if a
    /// variable this polynomial actually depends on is absent from `target`.
    pub fn rebase(&self, target: &Registry) -> Result<Poly> {
        if same_registry(&self.reg, target) {
            return Ok(self.clone());
        }
        let map: Vec<Option<usize>> = (0..self.reg.arity())
            .map(|i| target.index_of(self.reg.name(i)))
            .collect();
        let mut out = Poly::zero(target);
        for (e, v) in &self.terms {
            let mut f = vec![0u16; target.arity()];
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => f[j] = k,
                    None => return Err(Error::UnknownVariable(self.reg.name(i).to_string())),
                }
            }
            out.add_term(f, v.clone());
        }
        Ok(out)
    }

    /// Exact integral over the standard simplex `{t_i >= 0, sum t_i <= 1}` in
    /// the listed parameters, using
    /// `∫ t1^a1 ... tk^ak dt = a1! ... ak! / (a1 + ... + ak + k)!`.
    /// The integrated parameters are removed from the result's registry.
    pub fn simplex_integrate(&self, t_subset: &[&str]) -> Result<Poly> {
        let mut idxs = Vec::with_capacity(t_subset.len());
        for name in t_subset {
            let idx = self
                .reg
                .index_of(name)
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
            if idx < self.reg.nx() {
                return Err(Error::NotSimplexVariable(name.to_string()));
            }
            if idxs.contains(&idx) {
                return Err(Error::Invalid(format!("parameter `{name}` listed twice")));
            }
            idxs.push(idx);
        }
        let kept: Vec<String> = self
            .reg
            .t_vars()
            .iter()
            .filter(|v| !t_subset.contains(&v.as_str()))
            .cloned()
            .collect();
        let target = self.reg.with_params(kept)?;
        Ok(self.integrate_onto(&idxs, &target))
    }

    /// Simplex integral over the parameters at positions `idxs`; `target` must
    /// be this registry with exactly those variables removed.
    pub(crate) fn integrate_onto(&self, idxs: &[usize], target: &Registry) -> Poly {
        let keep_idx: Vec<usize> = (0..self.reg.arity()).filter(|i| !idxs.contains(i)).collect();
        debug_assert_eq!(keep_idx.len(), target.arity());
        let k = idxs.len() as u32;
        let mut out = Poly::zero(target);
        for (e, v) in &self.terms {
            let mut num = Rational::one();
            let mut total = 0u32;
            for &i in idxs {
                num *= &Rational::factorial(e[i] as u32);
                total += e[i] as u32;
            }
            let w = &num / &Rational::factorial(total + k);
            let f: Exponents = keep_idx.iter().map(|&i| e[i]).collect();
            out.add_term(f, v * &w);
        }
        out
    }

    /// Positional move to `target`: variable `i` goes to `map[i]`. Variables
    /// mapped to `None` must not occur.
    pub(crate) fn reindex(&self, target: &Registry, map: &[Option<usize>]) -> Poly {
        let mut out = Poly::zero(target);
        for (e, v) in &self.terms {
            let mut f = vec![0u16; target.arity()];
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    f[map[i].expect("variable eliminated before reindexing")] = k;
                }
            }
            out.add_term(f, v.clone());
        }
        out
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        same_registry(&self.reg, &other.reg) && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    /// Panics on a registry mismatch; use [`Poly::try_add`] to handle it.
    fn add(self, rhs: &'a Poly) -> Poly {
        self.try_add(rhs).expect("poly registry mismatch")
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        self.try_sub(rhs).expect("poly registry mismatch")
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        self.try_mul(rhs).expect("poly registry mismatch")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&Rational::from_int(-1))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest total degree first reads more naturally.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().map(|&k| k as u32).sum();
            let db: u32 = b.0.iter().map(|&k| k as u32).sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (n, (e, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        self.reg.name(i).to_string()
                    } else {
                        format!("{}^{}", self.reg.name(i), k)
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

/// Parse a polynomial such as `2*x1^2*t1 - 1/2*x2 + 3` over `reg`.
///
/// Grammar: a sum of signed terms; each term is a `*`-separated product of
/// rational literals and `name` or `name^k` factors. No parentheses.
pub fn parse_poly(reg: &Registry, src: &str) -> Result<Poly> {
    let err = |col: usize, msg: String| Error::Parse { path: String::new(), line: 1, col, msg };
    let mut out = Poly::zero(reg);
    let bytes: Vec<char> = src.chars().collect();
    let mut i = 0usize;
    let skip_ws = |i: &mut usize| {
        while *i < bytes.len() && bytes[*i].is_whitespace() {
            *i += 1;
        }
    };
    skip_ws(&mut i);
    if i == bytes.len() {
        return Err(err(1, "empty polynomial".into()));
    }
    let mut first = true;
    while i < bytes.len() {
        skip_ws(&mut i);
        let mut sign = Rational::one();
        if i < bytes.len() && (bytes[i] == '+' || bytes[i] == '-') {
            if bytes[i] == '-' {
                sign = -sign;
            }
            i += 1;
        } else if !first {
            return Err(err(i + 1, format!("expected `+` or `-`, found `{}`", bytes[i])));
        }
        first = false;
        let mut coeff = sign;
        let mut exps = vec![0u16; reg.arity()];
        loop {
            skip_ws(&mut i);
            let start = i;
            if i < bytes.len() && bytes[i].is_ascii_digit() {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == '/') {
                    i += 1;
                }
                let lit: String = bytes[start..i].iter().collect();
                let r: Rational = lit
                    .parse()
                    .map_err(|_| err(start + 1, format!("bad number `{lit}`")))?;
                coeff *= &r;
            } else if i < bytes.len() && (bytes[i].is_alphabetic() || bytes[i] == '_') {
                while i < bytes.len() && (bytes[i].is_alphanumeric() || bytes[i] == '_') {
                    i += 1;
                }
                let name: String = bytes[start..i].iter().collect();
                let idx = reg
                    .index_of(&name)
                    .ok_or_else(|| err(start + 1, format!("unknown variable `{name}`")))?;
                let mut k = 1u16;
                skip_ws(&mut i);
                if i < bytes.len() && bytes[i] == '^' {
                    i += 1;
                    skip_ws(&mut i);
                    let s = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    let lit: String = bytes[s..i].iter().collect();
                    k = lit.parse().map_err(|_| err(s + 1, "expected exponent".into()))?;
                }
                exps[idx] += k;
            } else {
                let found = bytes.get(i).map(|c| c.to_string()).unwrap_or_else(|| "end of input".into());
                return Err(err(i + 1, format!("expected number or variable, found `{found}`")));
            }
            skip_ws(&mut i);
            if i < bytes.len() && bytes[i] == '*' {
                i += 1;
                continue;
            }
            break;
        }
        out.add_term(exps, coeff);
        skip_ws(&mut i);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn reg() -> Registry {
        VarRegistry::simplex(3, 3)
    }

    fn p(s: &str) -> Poly {
        parse_poly(&reg(), s).unwrap()
    }

    #[test]
    fn add_examples() {
        assert!((&p("x1") + &p("-x1")).is_zero());
        assert_eq!(&p("x1*t1") + &p("x1*t1"), p("2*x1*t1"));
        assert_eq!(&p("x1^2 + 1/2") + &p("x1"), p("x1^2 + x1 + 1/2"));
    }

    #[test]
    fn mul_examples() {
        assert!((&p("x1 + 3") * &Poly::zero(&reg())).is_zero());
        assert_eq!(&p("x1 + t1") * &p("x1 - t1"), p("x1^2 - t1^2"));
        assert_eq!(&Poly::one(&reg()) * &p("x2*t3 - 5"), p("x2*t3 - 5"));
    }

    #[test]
    fn diff_examples() {
        assert_eq!(p("x1^2").diff("x1").unwrap(), p("2*x1"));
        assert_eq!(p("x1*t1").diff("t1").unwrap(), p("x1"));
        assert_eq!(p("x2^3 + t1*x2").diff("x2").unwrap(), p("3*x2^2 + t1"));
        assert_eq!(p("x1").diff("y"), Err(Error::UnknownVariable("y".into())));
    }

    #[test]
    fn registry_mismatch_is_an_error() {
        let other = VarRegistry::spacetime(3);
        let q = Poly::var(&other, 0);
        assert_eq!(p("x1").try_add(&q), Err(Error::RegistryMismatch));
        assert_eq!(p("x1").try_mul(&q), Err(Error::RegistryMismatch));
    }

    #[test]
    fn simplex_integrate_examples() {
        let one_d = VarRegistry::simplex(1, 1);
        let t = Poly::var(&one_d, 1);
        let i = t.simplex_integrate(&["t1"]).unwrap();
        assert_eq!(i.constant_term(), r(1, 2));
        assert_eq!(i.registry().nt(), 0);

        let two = VarRegistry::simplex(1, 2);
        let vol = Poly::one(&two).simplex_integrate(&["t1", "t2"]).unwrap();
        assert_eq!(vol.constant_term(), r(1, 2));
        let t1t2 = parse_poly(&two, "t1*t2").unwrap();
        assert_eq!(t1t2.simplex_integrate(&["t1", "t2"]).unwrap().constant_term(), r(1, 24));
    }

    #[test]
    fn simplex_integrate_keeps_x_dependence() {
        let q = p("3*x1*t1^2 + x2");
        let i = q.simplex_integrate(&["t1"]).unwrap();
        let target = reg().with_params(["t2", "t3"]).unwrap();
        assert_eq!(i, parse_poly(&target, "x1 + x2").unwrap());
    }

    #[test]
    fn simplex_integrate_errors() {
        assert_eq!(p("x1").simplex_integrate(&["x1"]), Err(Error::NotSimplexVariable("x1".into())));
        assert_eq!(p("x1").simplex_integrate(&["s"]), Err(Error::UnknownVariable("s".into())));
    }

    #[test]
    fn substitute_linear() {
        let reg = reg();
        let one_minus = parse_poly(&reg, "1 - t1").unwrap();
        let q = p("t2^2*x1 + t2");
        let s = q.substitute(reg.index_of("t2").unwrap(), &one_minus).unwrap();
        assert_eq!(s, p("x1 - 2*x1*t1 + x1*t1^2 + 1 - t1"));
    }

    #[test]
    fn eval_and_display() {
        let q = p("x1^2 - 1/2*t1 + 3");
        let mut pt = vec![Rational::zero(); 6];
        pt[0] = r(2, 1);
        pt[3] = r(1, 3);
        assert_eq!(q.eval(&pt).unwrap(), r(41, 6));
        assert_eq!(q.to_string(), "x1^2 - 1/2*t1 + 3");
    }

    #[test]
    fn parse_errors_have_columns() {
        match parse_poly(&reg(), "x1 + y2") {
            Err(Error::Parse { col, .. }) => assert_eq!(col, 6),
            other => panic!("{other:?}"),
        }
        assert!(parse_poly(&reg(), "x1 x2").is_err());
        assert!(parse_poly(&reg(), "").is_err());
    }

    #[test]
    fn rebase_by_name() {
        let q = p("x1*t2");
        let target = VarRegistry::new(vec!["x1".into(), "x2".into(), "x3".into()], vec!["t2".into()]).unwrap();
        let moved = q.rebase(&target).unwrap();
        assert_eq!(moved.to_string(), "x1*t2");
        assert!(p("t1").rebase(&target).is_err());
    }
}
