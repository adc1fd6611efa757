//! Averages each class of a UCR-format file with the iterative TWP method
//! and prints the mean, its phase standard deviation and the convergence
//! trace.
//!
//! cargo run --release --example twp_average [file.tsv] [thr_ratio]

use twp::averaging::{efficiency_ratio, twp_average, AveragingConfig};
use twp::cli::Normalization;
use twp::io::load_ucr;

fn main() -> twp::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/bumps.tsv").into());
    let ratio: f64 = args.next().map_or(0.0005, |r| r.parse().expect("threshold ratio"));
    let data = Normalization::Z.apply(&load_ucr(&path)?);

    for (label, group) in data.group_by_label() {
        let result = twp_average(&group, &AveragingConfig::new(ratio))?;
        let n = group.len();
        let len = result.mean.len();
        let verdict = efficiency_ratio(&result, n, len, 15);
        println!("class {label}: {n} series, {} merges, converged = {}", result.iterations, result.converged);
        println!(
            "  f = {:.2}, break-even with 15 DBA passes at {:.2}: TWP cheaper = {}",
            verdict.f, verdict.threshold, verdict.twp_wins
        );
        let peak = result.mean.argmax();
        println!("  mean peaks at sample {peak} with phase sigma {:.2} samples", result.sigma[peak]);
        let ratios: Vec<String> = result.trace.iter().take(8).map(|e| format!("{:.3}", e.max_ratio)).collect();
        println!("  first trace entries (max distance / MSS): {}", ratios.join(" "));
    }
    Ok(())
}
