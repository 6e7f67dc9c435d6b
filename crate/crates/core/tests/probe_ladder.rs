//! Temporary diagnostics for the homogenization ladder (deleted once the
//! acceptance thresholds are pinned).

use thinwire_core::homogenize::{limit_consistency, DensityField};
use thinwire_core::{IncidentWave, Rect};

#[test]
fn probe_ladder_across_seeds() {
    let field = DensityField::constant(Rect::unit_square(), 0.5);
    let wave = IncidentWave::new(1.0).unwrap();
    let ladder = [1e-3, 1e-6, 1e-9, 1e-12];
    for seed in [1u64, 2, 3, 5, 7, 11, 42, 1234] {
        let report = limit_consistency(&field, &wave, &ladder, seed, 32).unwrap();
        let vals: Vec<String> = report
            .rows
            .iter()
            .map(|r| format!("a={:.0e} M={} dev={:.4}", r.a, r.count, r.max_discrepancy))
            .collect();
        println!(
            "seed {seed:>5}: {}  nonincreasing={}",
            vals.join(" | "),
            report.nonincreasing()
        );
    }
}
