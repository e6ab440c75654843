//! Reproduction experiments: convergence reports, second-order checks and
//! verification suites.

pub mod examples;
pub mod report;
pub mod second_order;
pub mod suites;

pub use examples::{example_target, run_convergence, run_example, ClosedForm, ExampleSpec, FIT_TOLERANCE, RAMANUJAN_CAP};
pub use report::{ConvergenceReport, Fit, Row, Verdict};
pub use second_order::{second_order_check, SecondOrder, SecondOrderCheck, SECOND_ORDER_TOLERANCE};
pub use suites::{run_suite, Suite, SuiteReport};
