//! Compares the TWP mean of each class with DBA means from several seeds
//! and with PSA, by within-group sum of squares under three distances.
//!
//! cargo run --release --example baselines_comparison [file.tsv]

use twp::averaging::{twp_average, AveragingConfig};
use twp::baselines::{dba_average, psa_average, wgss, WgssMetric};
use twp::cli::{geometric_mean, Normalization};
use twp::io::load_ucr;

fn main() -> twp::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/cbf.tsv").into());
    let data = Normalization::Z.apply(&load_ucr(&path)?);
    for (label, group) in data.group_by_label() {
        let twp = twp_average(&group, &AveragingConfig::new(0.10))?.mean;
        let psa = psa_average(&group);
        println!("class {label} ({} series)", group.len());
        for metric in WgssMetric::ALL {
            let own = wgss(&group, &twp, metric);
            let dba: Vec<f64> = (0..6)
                .map(|seed| dba_average(&group, 15, seed).map(|m| own / wgss(&group, &m, metric)))
                .collect::<twp::Result<_>>()?;
            println!(
                "  {:<5} TWP/DBA geometric mean {:.3} (min {:.3}, max {:.3}), TWP/PSA {:.3}",
                metric.name(),
                geometric_mean(dba.iter().copied()),
                dba.iter().copied().fold(f64::INFINITY, f64::min),
                dba.iter().copied().fold(0.0, f64::max),
                own / wgss(&group, &psa, metric)
            );
        }
    }
    Ok(())
}
