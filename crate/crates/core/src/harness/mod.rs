//! File formats, experiment orchestration and plot data.

pub mod config;
mod emit;
mod experiment;
mod matrix_market;
mod records;

pub use config::{parse_config, parse_criterion, parse_init, parse_u32_list, read_config};
pub use emit::{emit_error_history, emit_residual_map_grid, residual_map_grid, ErrorHistory, ResidualMapSample};
pub use experiment::{run_experiment, ExperimentConfig, ExperimentResult, PRECISION_MAX_ITER};
pub use matrix_market::{format_matrix_market, parse_matrix_market, read_matrix_market, write_matrix_market};
pub use records::{
    fmt_float, read_aggregate_rows, read_bench_rows, write_aggregate_rows, write_bench_rows, AggregateRow, BenchRow,
    AGGREGATE_HEADER, BENCH_HEADER,
};
