//! Scenario files, suite orchestration and reports for the identity checks.

pub mod report;
pub mod scenario;
pub mod suite;

pub use report::{CheckRecord, Report, SpotCheck};
pub use scenario::{parse_scenario, Overrides, Scenario, ScenarioError, ScenarioSpec, Suite};
pub use suite::run_suite;

/// Shipped scenarios, embedded so the binary runs without a scenario file.
pub mod shipped {
    pub const DEFAULT: &str = include_str!("../scenarios/default.scn");
    pub const STRESS: &str = include_str!("../scenarios/stress.scn");
    pub const POINCARE: &str = include_str!("../scenarios/poincare.scn");
    pub const SO3: &str = include_str!("../scenarios/so3.scn");
}
