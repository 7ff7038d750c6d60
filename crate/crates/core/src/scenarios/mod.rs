//! Config-driven scenarios: JSON schema, runner, reports and the built-in catalogue.

mod builtins;
pub mod config;
pub mod report;
mod run;
pub mod sweeps;

pub use builtins::{builtin, list_builtins, BuiltinInfo};
pub use config::{load_path, parse_scenarios, BodyDesc, Check, Expectation, NormDesc, Scenario, SpaceDesc};
pub use report::{to_csv, Report, Status};
pub use run::{is_config_error, run_all, run_scenario};
