use umtlab_core::experiments::{
    aggregate, plan_cells, preset, run_cell, run_cells, run_experiment, CellParams, SampleCount,
};
use umtlab_core::Error;

#[test]
fn cell_order_does_not_matter() {
    for name in ["cn-smoke", "rt-demo", "kg-smoke"] {
        let cells = plan_cells(&preset(name).unwrap()).unwrap();
        let forward = run_cells(&cells).unwrap();
        let mut reversed_cells = cells.clone();
        reversed_cells.reverse();
        let mut backward = run_cells(&reversed_cells).unwrap();
        backward.reverse();
        assert_eq!(forward, backward, "{name}");
        backward.rotate_left(3);
        assert_eq!(aggregate(&forward).unwrap(), aggregate(&backward).unwrap(), "{name}");
    }
}

#[test]
fn thread_counts_agree() {
    let cfg = preset("cn-smoke").unwrap();
    let a = run_experiment(&cfg, Some(1)).unwrap();
    let b = run_experiment(&cfg, Some(4)).unwrap();
    assert_eq!(a.cells, b.cells);
    assert_eq!(a.aggregate, b.aggregate);
    assert!(matches!(run_experiment(&cfg, Some(0)), Err(Error::Config(_))));
}

#[test]
fn error_metrics_stay_in_unit_interval() {
    for name in ["cn-smoke", "rt-demo", "kg-smoke"] {
        let out = run_experiment(&preset(name).unwrap(), None).unwrap();
        for cell in &out.cells {
            assert!(cell.measurements.iter().all(|r| (0.0..=1.0).contains(&r.value)));
        }
    }
}

#[test]
fn lower_bound_cells_record_both_metrics() {
    let mut cfg = preset("lb-floor").unwrap();
    cfg.replicates = 3;
    let cells = plan_cells(&cfg).unwrap();
    assert!(matches!(cells[0].params, CellParams::Lb { .. }));
    let result = run_cell(&cells[0]).unwrap();
    let layout: Vec<(SampleCount, &str)> = result.measurements.iter().map(|r| (r.m, r.metric)).collect();
    assert_eq!(
        layout,
        [
            (SampleCount::Finite(40), "full_rows"),
            (SampleCount::Finite(40), "mle_error"),
            (SampleCount::Finite(80), "full_rows"),
            (SampleCount::Finite(80), "mle_error"),
        ]
    );
    // Extra samples can only fix rows.
    assert!(result.measurements[3].value <= result.measurements[1].value);
}

#[test]
fn inadmissible_lower_bound_cells_fail() {
    let mut cfg = preset("lb-floor").unwrap();
    cfg.checkpoints = umtlab_core::experiments::Checkpoints::List(vec![10]);
    let e = run_experiment(&cfg, None).unwrap_err();
    assert!(matches!(e.root(), Error::Admissibility(_)), "{e}");
}
