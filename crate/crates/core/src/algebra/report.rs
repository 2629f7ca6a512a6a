use std::fmt;

/// First basis tuple on which an axiom fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub algebra: String,
    pub indices: Vec<usize>,
    pub labels: Vec<String>,
}

impl Witness {
    pub fn new<const N: usize>(algebra: &str, indices: [usize; N], labels: Vec<String>) -> Self {
        Witness { algebra: algebra.to_string(), indices: indices.to_vec(), labels }
    }

    pub fn from_vec(algebra: &str, indices: Vec<usize>, labels: Vec<String>) -> Self {
        Witness { algebra: algebra.to_string(), indices, labels }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ({})", self.algebra, self.labels.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomCheck {
    pub axiom: &'static str,
    pub pass: bool,
    pub witness: Option<Witness>,
}

impl AxiomCheck {
    pub fn pass(axiom: &'static str) -> Self {
        AxiomCheck { axiom, pass: true, witness: None }
    }

    pub fn fail(axiom: &'static str, witness: Witness) -> Self {
        AxiomCheck { axiom, pass: false, witness: Some(witness) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<AxiomCheck>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, axiom: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }

    pub fn first_failure(&self) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| !c.pass)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match &c.witness {
                None => writeln!(f, "{:<16} pass", c.axiom)?,
                Some(w) => writeln!(f, "{:<16} FAIL at {w}", c.axiom)?,
            }
        }
        Ok(())
    }
}
