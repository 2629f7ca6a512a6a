//! Plain-text descriptions of crossed modules and pairings.
//!
//! Whitespace separated, one directive per line, `#` starts a comment.
//! Indices are 1-based and values are rationals such as `-3/2`.
//!
//! ```text
//! name       my-module
//! g.names    X1 X2 X3
//! g.const    a b c v        # [X_a, X_b] has coefficient v on X_c
//! g.rep_size N
//! g.rep      a row col v    # entry of the matrix representing X_a
//! h.names    Y1 Y2
//! h.const    ...            # same directives with the h prefix
//! alpha      a i v          # α(Y_i) has coefficient v on X_a
//! action     a i j v        # X_a ▷ Y_i has coefficient v on Y_j
//! ```
//!
//! Brackets are read literally; both orders of an antisymmetric pair must be
//! listed, and the validator reports anything missing.
//!
//! Pairing files hold `arity n` followed by `entry a_1 … a_n i v` lines.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::rational::Rational;

use super::crossed::DifferentialCrossedModule;
use super::invpoly::InvariantPolynomial;
use super::lie::LieAlgebra;

struct Line<'a> {
    path: &'a str,
    no: usize,
    tokens: Vec<(usize, &'a str)>,
}

impl<'a> Line<'a> {
    fn err(&self, col: usize, msg: impl Into<String>) -> Error {
        Error::Parse { path: self.path.to_string(), line: self.no, col, msg: msg.into() }
    }

    fn expect_len(&self, n: usize) -> Result<()> {
        if self.tokens.len() != n {
            let col = self.tokens.get(n.min(self.tokens.len().saturating_sub(1))).map_or(1, |t| t.0);
            return Err(self.err(col, format!("`{}` takes {} arguments, found {}", self.tokens[0].1, n - 1, self.tokens.len() - 1)));
        }
        Ok(())
    }

    fn index(&self, k: usize, bound: Option<usize>) -> Result<usize> {
        let (col, tok) = self.tokens[k];
        let v: usize = tok.parse().map_err(|_| self.err(col, format!("expected a positive index, found `{tok}`")))?;
        if v == 0 || bound.is_some_and(|b| v > b) {
            return Err(self.err(col, format!("index {v} out of range")));
        }
        Ok(v - 1)
    }

    fn rational(&self, k: usize) -> Result<Rational> {
        let (col, tok) = self.tokens[k];
        tok.parse().map_err(|e| self.err(col, format!("{e}")))
    }
}

fn lines<'a>(path: &'a str, src: &'a str) -> impl Iterator<Item = Line<'a>> {
    src.lines().enumerate().filter_map(move |(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (pos, ch) in body.char_indices().chain(std::iter::once((body.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(pos),
                (true, Some(s)) => {
                    tokens.push((s + 1, &body[s..pos]));
                    start = None;
                }
                _ => {}
            }
        }
        (!tokens.is_empty()).then_some(Line { path, no: i + 1, tokens })
    })
}

#[derive(Default)]
struct AlgebraSpec {
    names: Option<(usize, Vec<String>)>,
    consts: Vec<(usize, usize, usize, Rational, usize, usize)>,
    rep_size: Option<usize>,
    rep: Vec<(usize, usize, usize, Rational, usize, usize)>,
}

impl AlgebraSpec {
    fn dim(&self) -> Option<usize> {
        self.names.as_ref().map(|(_, n)| n.len())
    }

    fn build(self, path: &str, label: &str) -> Result<LieAlgebra> {
        let missing = || Error::Parse { path: path.into(), line: 0, col: 0, msg: format!("missing `{label}.names`") };
        let (_, names) = self.names.ok_or_else(missing)?;
        let dim = names.len();
        let mut consts = Vec::new();
        for (a, b, c, v, line, col) in self.consts {
            if a >= dim || b >= dim || c >= dim {
                return Err(Error::Parse { path: path.into(), line, col, msg: "index out of range".into() });
            }
            consts.push((a, b, c, v));
        }
        let rep = match self.rep_size {
            None => {
                if let Some(&(.., line, col)) = self.rep.first() {
                    return Err(Error::Parse { path: path.into(), line, col, msg: format!("`{label}.rep` before `{label}.rep_size`") });
                }
                None
            }
            Some(n) => {
                let mut mats = vec![RatMatrix::zeros(n, n); dim];
                for (a, r, c, v, line, col) in self.rep {
                    if a >= dim || r >= n || c >= n {
                        return Err(Error::Parse { path: path.into(), line, col, msg: "index out of range".into() });
                    }
                    mats[a].set(r, c, v);
                }
                Some(mats)
            }
        };
        LieAlgebra::new(label, names, consts, rep)
    }
}

/// Parses a crossed-module description; `path` only labels diagnostics.
pub fn parse_crossed_module(path: &str, src: &str) -> Result<DifferentialCrossedModule> {
    let mut name = String::from("custom");
    let mut specs: BTreeMap<&str, AlgebraSpec> = BTreeMap::new();
    let mut alpha = Vec::new();
    let mut action = Vec::new();
    for line in lines(path, src) {
        let head = line.tokens[0].1;
        let (prefix, key) = match head.split_once('.') {
            Some((p @ ("g" | "h"), k)) => (Some(p), k),
            _ => (None, head),
        };
        match (prefix, key) {
            (None, "name") => {
                line.expect_len(2)?;
                name = line.tokens[1].1.to_string();
            }
            (Some(p), "names") => {
                if line.tokens.len() < 2 {
                    return Err(line.err(line.tokens[0].0, "expected at least one basis name"));
                }
                let spec = specs.entry(p).or_default();
                if spec.names.is_some() {
                    return Err(line.err(line.tokens[0].0, format!("`{p}.names` given twice")));
                }
                spec.names = Some((line.no, line.tokens[1..].iter().map(|t| t.1.to_string()).collect()));
            }
            (Some(p), "const") => {
                line.expect_len(5)?;
                let entry = (line.index(1, None)?, line.index(2, None)?, line.index(3, None)?, line.rational(4)?, line.no, line.tokens[1].0);
                specs.entry(p).or_default().consts.push(entry);
            }
            (Some(p), "rep_size") => {
                line.expect_len(2)?;
                let n = line.index(1, None)? + 1;
                specs.entry(p).or_default().rep_size = Some(n);
            }
            (Some(p), "rep") => {
                line.expect_len(5)?;
                let entry = (line.index(1, None)?, line.index(2, None)?, line.index(3, None)?, line.rational(4)?, line.no, line.tokens[1].0);
                specs.entry(p).or_default().rep.push(entry);
            }
            (None, "alpha") => {
                line.expect_len(4)?;
                let dg = specs.get("g").and_then(AlgebraSpec::dim);
                let dh = specs.get("h").and_then(AlgebraSpec::dim);
                alpha.push((line.index(1, dg)?, line.index(2, dh)?, line.rational(3)?));
            }
            (None, "action") => {
                line.expect_len(5)?;
                let dg = specs.get("g").and_then(AlgebraSpec::dim);
                let dh = specs.get("h").and_then(AlgebraSpec::dim);
                action.push((line.index(1, dg)?, line.index(2, dh)?, line.index(3, dh)?, line.rational(4)?));
            }
            _ => return Err(line.err(line.tokens[0].0, format!("unknown directive `{head}`"))),
        }
    }
    let g = specs.remove("g").unwrap_or_default().build(path, "g")?;
    let h = specs.remove("h").unwrap_or_default().build(path, "h")?;
    for &(a, i, _) in &alpha {
        if a >= g.dim() || i >= h.dim() {
            return Err(Error::Parse { path: path.into(), line: 0, col: 0, msg: "alpha index out of range".into() });
        }
    }
    DifferentialCrossedModule::new(name, g, h, alpha, action)
}

/// Renders a crossed module in the format read by [`parse_crossed_module`].
/// Whitespace in the module name becomes `-`.
pub fn write_crossed_module(cm: &DifferentialCrossedModule) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let name: Vec<&str> = cm.name().split_whitespace().collect();
    writeln!(out, "name {}", name.join("-")).unwrap();
    for (p, l) in [("g", cm.g()), ("h", cm.h())] {
        writeln!(out, "{p}.names {}", l.names().join(" ")).unwrap();
        for (a, b, c, v) in l.structure_constants() {
            writeln!(out, "{p}.const {} {} {} {v}", a + 1, b + 1, c + 1).unwrap();
        }
        if let Some(mats) = l.representation() {
            writeln!(out, "{p}.rep_size {}", mats[0].rows()).unwrap();
            for (a, m) in mats.iter().enumerate() {
                for r in 0..m.rows() {
                    for c in 0..m.cols() {
                        let v = m.get(r, c);
                        if !v.is_zero() {
                            writeln!(out, "{p}.rep {} {} {} {v}", a + 1, r + 1, c + 1).unwrap();
                        }
                    }
                }
            }
        }
    }
    for (a, i, v) in cm.alpha_entries() {
        writeln!(out, "alpha {} {} {v}", a + 1, i + 1).unwrap();
    }
    for (a, i, j, v) in cm.action_entries() {
        writeln!(out, "action {} {} {} {v}", a + 1, i + 1, j + 1).unwrap();
    }
    out
}

/// Parses a pairing tensor. Entries are literal; symmetry is not imposed.
pub fn parse_pairing(path: &str, src: &str, cm: &DifferentialCrossedModule) -> Result<InvariantPolynomial> {
    let mut p: Option<InvariantPolynomial> = None;
    for line in lines(path, src) {
        match line.tokens[0].1 {
            "arity" => {
                line.expect_len(2)?;
                if p.is_some() {
                    return Err(line.err(line.tokens[0].0, "`arity` given twice"));
                }
                let n = line.index(1, Some(8))? + 1;
                p = Some(InvariantPolynomial::zero(n, cm.g().dim(), cm.h().dim()).map_err(|e| line.err(line.tokens[1].0, e.to_string()))?);
            }
            "entry" => {
                let Some(poly) = p.as_mut() else {
                    return Err(line.err(line.tokens[0].0, "`entry` before `arity`"));
                };
                let n = poly.arity();
                line.expect_len(n + 3)?;
                let g_idx = (1..=n).map(|k| line.index(k, Some(cm.g().dim()))).collect::<Result<Vec<_>>>()?;
                let i = line.index(n + 1, Some(cm.h().dim()))?;
                let v = line.rational(n + 2)?;
                poly.set(&g_idx, i, v);
            }
            other => return Err(line.err(line.tokens[0].0, format!("unknown directive `{other}`"))),
        }
    }
    p.ok_or_else(|| Error::Parse { path: path.into(), line: 0, col: 0, msg: "missing `arity`".into() })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SU2_LIKE: &str = "
        # so(3) as an adjoint module
        name so3-file
        g.names e1 e2 e3
        g.const 1 2 3 1
        g.const 2 1 3 -1
        g.const 2 3 1 1
        g.const 3 2 1 -1
        g.const 3 1 2 1
        g.const 1 3 2 -1
        h.names f1 f2 f3
        h.const 1 2 3 1
        h.const 2 1 3 -1
        h.const 2 3 1 1
        h.const 3 2 1 -1
        h.const 3 1 2 1
        h.const 1 3 2 -1
        alpha 1 1 1
        alpha 2 2 1
        alpha 3 3 1
        action 1 2 3 1
        action 2 1 3 -1
        action 2 3 1 1
        action 3 2 1 -1
        action 3 1 2 1
        action 1 3 2 -1
    ";

    #[test]
    fn parses_and_validates() {
        let cm = parse_crossed_module("so3.txt", SU2_LIKE).unwrap();
        assert_eq!(cm.name(), "so3-file");
        assert!(cm.validate().all_pass());
        assert!(!cm.supports_conjugation());
    }

    #[test]
    fn missing_antisymmetric_partner_is_caught() {
        let src = SU2_LIKE.replace("g.const 2 1 3 -1", "");
        let cm = parse_crossed_module("x", &src).unwrap();
        assert!(!cm.validate().get("antisymmetry").unwrap().pass);
    }

    #[test]
    fn diagnostics_carry_position() {
        let err = parse_crossed_module("f.txt", "g.names a b\ng.const 1 2 x 1\n").unwrap_err();
        assert_eq!(err, Error::Parse { path: "f.txt".into(), line: 2, col: 13, msg: "expected a positive index, found `x`".into() });
        let err = parse_crossed_module("f.txt", "g.names a\nbogus 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, col: 1, .. }));
        let err = parse_crossed_module("f.txt", "g.names a\ng.const 1 1 1 1/0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, col: 15, .. }));
    }

    #[test]
    fn representation_directives() {
        let src = "g.names z\ng.rep_size 1\ng.rep 1 1 1 1\nh.names w\nh.rep_size 1\nh.rep 1 1 1 1\nalpha 1 1 1\n";
        let cm = parse_crossed_module("u1", src).unwrap();
        assert!(cm.supports_conjugation());
        assert!(cm.validate().all_pass());
    }

    #[test]
    fn pairing_file() {
        let cm = parse_crossed_module("so3.txt", SU2_LIKE).unwrap();
        let src = "arity 1\nentry 1 1 -2\nentry 2 2 -2\nentry 3 3 -2\n";
        let p = parse_pairing("p.txt", src, &cm).unwrap();
        assert!(p.validate(&cm).unwrap().all_pass());
        let err = parse_pairing("p.txt", "entry 1 1 1\n", &cm).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_pairing("p.txt", "arity 1\nentry 1 4 1\n", &cm).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, col: 9, .. }));
    }
}
