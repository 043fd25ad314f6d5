//! Independent oracles, seeded parameter/argument sweeps with margin
//! reports, the sub-additivity checker and the extremal probe.

mod extremal;
mod oracles;
mod spec;
mod subadditivity;
mod sweep;

pub use extremal::{probe_infimum_d_f, ExtremalResult, TracePoint};
pub use oracles::{oracle_binomial, oracle_elliptic_agm, oracle_log, oracle_series_hq};
pub use spec::{
    AllKeyword, Axis, ParamGrid, Perturbation, PointGrid, Scale, SweepSpec, TheoremSelection, ToleranceOverride,
    DEFAULT_SEED, SPEC_VERSION,
};
pub use subadditivity::{
    default_t_grid, log_grid, subadditivity_check, subadditivity_scan, Direction, PairOutcome, SubadditivityReport,
};
pub use sweep::{
    run_sweep, run_sweep_with, write_records_csv, ErrorRecord, MinMargin, Outcome, Side, SweepReport, Totals, Witness,
    CSV_HEADER,
};
