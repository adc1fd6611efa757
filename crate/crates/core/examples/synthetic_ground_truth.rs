//! Averages a synthetic dataset whose true mean is known and compares the
//! TWP mean against DBA and PSA.
//!
//! cargo run --release --example synthetic_ground_truth [N] [seed]

use std::time::Instant;

use twp::averaging::{twp_average, AveragingConfig};
use twp::baselines::{dba_average, psa_average};
use twp::synth::{gen_dataset, locate_landmarks, noise_threshold, NoiseMetric, ShapeSpec};

fn main() -> twp::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(50, |a| a.parse().expect("N"));
    let seed: u64 = args.next().map_or(1, |a| a.parse().expect("seed"));

    let spec = ShapeSpec::default();
    let (data, truth) = gen_dataset(&spec, n, seed)?;

    let started = Instant::now();
    let twp = twp_average(&data, &AveragingConfig::default())?;
    println!(
        "TWP: {} merges (f = {:.2}), converged = {}, {:.1?}",
        twp.iterations,
        twp.f_ratio(n),
        twp.converged,
        started.elapsed()
    );
    let dba = dba_average(&data, 15, seed)?;
    let psa = psa_average(&data);

    println!("\nlandmark  truth t  TWP t  truth sigma  TWP sigma");
    let found = locate_landmarks(&twp.mean, &spec, &truth.landmark_mean_times);
    for (k, &t) in found.iter().enumerate() {
        println!(
            "{k:>8}  {:>7.1}  {t:>5}  {:>11.2}  {:>9.2}",
            truth.landmark_mean_times[k], truth.landmark_time_sigmas[k], twp.sigma[t]
        );
    }

    println!("\nmetric     threshold   TWP/thr   DBA/thr   PSA/thr");
    for metric in [NoiseMetric::Euclidean, NoiseMetric::Dtw, NoiseMetric::Phase, NoiseMetric::Tam] {
        let thr = noise_threshold(&spec, metric, 500, seed)?;
        let ratio = |m| metric.distance(m, &truth.theoretical_mean) / thr;
        println!(
            "{:<9}  {thr:>9.3}  {:>8.2}  {:>8.2}  {:>8.2}",
            format!("{metric:?}"),
            ratio(&twp.mean),
            ratio(&dba),
            ratio(&psa)
        );
    }
    Ok(())
}
