//! Library side of the `stbc-limits` command: settings resolution, the four
//! commands and their output encodings. `main.rs` only parses flags.

pub mod checkpoint;
pub mod commands;
pub mod error;
pub mod settings;

pub use commands::{cmd_bounds, cmd_diversity, cmd_plot, cmd_simulate, render_curves, render_slopes, SlopeReport};
pub use error::CliError;
pub use settings::{parse_grid, run_specs, Command, Format, Recipe, RunSpec, Settings};
