mod ring_arithmetic {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/ring_arithmetic.rs"));
}

#[test]
fn ring_arithmetic_runs() {
    ring_arithmetic::run_example().expect("ring_arithmetic example should run");
}

mod sample_matrices {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/sample_matrices.rs"));
}

#[test]
fn sample_matrices_runs() {
    sample_matrices::run_example().expect("sample_matrices example should run");
}

mod cokernel_types {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/cokernel_types.rs"));
}

#[test]
fn cokernel_types_runs() {
    cokernel_types::run_example().expect("cokernel_types example should run");
}

mod theory_table {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/theory_table.rs"));
}

#[test]
fn theory_table_runs() {
    theory_table::run_example().expect("theory_table example should run");
}

mod oracles {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/oracles.rs"));
}

#[test]
fn oracles_runs() {
    oracles::run_example().expect("oracles example should run");
}

mod classify_matrix {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/classify_matrix.rs"));
}

#[test]
fn classify_matrix_runs() {
    classify_matrix::run_example().expect("classify_matrix example should run");
}

mod distribution_experiment {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/distribution_experiment.rs"));
}

#[test]
fn distribution_experiment_runs() {
    distribution_experiment::run_example().expect("distribution_experiment example should run");
}

mod moment_experiment {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/moment_experiment.rs"));
}

#[test]
fn moment_experiment_runs() {
    moment_experiment::run_example().expect("moment_experiment example should run");
}

mod universality_sweep {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/universality_sweep.rs"));
}

#[test]
fn universality_sweep_runs() {
    universality_sweep::run_example().expect("universality_sweep example should run");
}
