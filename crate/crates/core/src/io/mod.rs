//! Configuration, serialization and run orchestration.

mod checkpoint;
mod config;
mod run;
mod timeseries;

pub use checkpoint::{checkpoint_read, checkpoint_write, Checkpoint, MAGIC};
pub use config::{load_config, parse_config, InitialCondition, RunConfig};
pub use run::{initial_field, run_ineq_lab, run_simulation, write_ratio_reports, Simulation};
pub use timeseries::{header, read_timeseries, write_timeseries, TimeSeries, TimeSeriesWriter};
