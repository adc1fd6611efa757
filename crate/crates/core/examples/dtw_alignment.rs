//! Aligns two short series, prints the optimal path and checks it against
//! exhaustive enumeration. Also shows a Sakoe-Chiba band and a custom step
//! pattern.
//!
//! cargo run --example dtw_alignment

use twp::dtw::{brute_force_dtw, dtw_align, dtw_distance, StepPattern};
use twp::series::{validate_path, TimeSeries};

fn main() -> twp::Result<()> {
    let s1 = TimeSeries::new(vec![0.0, 1.0, 3.0, 2.0, 0.0, 0.0])?;
    let s2 = TimeSeries::new(vec![0.0, 0.0, 1.0, 3.0, 2.0, 0.0])?;

    let best = dtw_align(&s1, &s2, &StepPattern::basic(), None)?;
    println!("cost {} along {:?}", best.cost, best.path.pairs());
    validate_path(&best.path, s1.len(), s2.len()).expect("optimal paths are valid");

    let oracle = brute_force_dtw(&s1, &s2)?;
    println!("exhaustive search agrees: {}", oracle.cost == best.cost && oracle.path == best.path);
    println!("two-row distance: {}", dtw_distance(&s1, &s2));

    for w in [0, 1, 2] {
        let banded = dtw_align(&s1, &s2, &StepPattern::basic(), Some(w))?;
        println!("band {w}: cost {}", banded.cost);
    }

    let pattern = StepPattern::new(vec![(1, 1), (1, 2), (2, 1)])?;
    let longer = TimeSeries::new(vec![0.0, 0.5, 1.0, 3.0, 2.5, 2.0, 1.0, 0.0, 0.0])?;
    let r = dtw_align(&s1, &longer, &pattern, None)?;
    println!("pattern {:?}: cost {} along {:?}", pattern.steps(), r.cost, r.path.pairs());
    Ok(())
}
