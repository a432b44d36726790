//! Dataset loading, experiment configuration and the `(algorithm × k × seed)`
//! runner with CSV output.

mod config;
mod load;
mod results;
mod run;

pub use config::{Algorithm, ExperimentConfig, ObjectiveKind, StreamOrder};
pub use load::{
    load_costs, load_edge_list, load_matrix, load_scores, load_stream_order, write_edge_list, write_id_map,
    write_matrix, LoadedGraph,
};
pub use results::{
    emit_results, emit_rounds, format_sig, read_results, results_csv, rounds_path, ResultRow, RoundRow,
    RESULT_HEADER, ROUND_HEADER,
};
pub use run::{load_dataset, run_experiment, run_on_dataset, Dataset, ExperimentOutput};
