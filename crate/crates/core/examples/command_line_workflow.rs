//! Drives the same commands as the `twp` binary from code: generate a
//! synthetic set, average it, and reload the written mean.
//!
//! cargo run --release --example command_line_workflow [out_dir]

use twp::baselines::{wgss, WgssMetric};
use twp::cli::{cmd_average, cmd_synth, AverageOptions, Method, SynthOptions};
use twp::io::{load_ucr, read_series_csv};
use twp::series::TimeSeries;

fn main() -> twp::Result<()> {
    let out = std::env::args().nth(1).map_or_else(|| std::env::temp_dir().join("twp-workflow"), Into::into);
    let synth = cmd_synth(&SynthOptions { n: 20, n_rep: 50, ..SynthOptions::new(out.join("synth")) })?;
    println!("noise thresholds: {:?}", synth.noise_thresholds);

    let dataset = out.join("synth/dataset.tsv");
    let report = cmd_average(&AverageOptions::new(&dataset, Method::Twp, out.join("twp")))?;
    print!("{}", report.summary());

    let rows = read_series_csv(out.join("twp/means.csv"))?;
    let mean = TimeSeries::new(rows[0].values.clone())?;
    let data = load_ucr(&dataset)?;
    println!(
        "reloaded mean reproduces WGSS|phase: {} vs {}",
        wgss(&data, &mean, WgssMetric::Phase),
        report.classes[0].wgss["phase"]
    );
    println!("artifacts in {}", out.display());
    Ok(())
}
