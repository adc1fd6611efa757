//! Averages two impulses along the in-phase time scale and compares the
//! result with the uniformly rescaled path average used by PSA.
//!
//! cargo run --example pairwise_mean

use twp::averaging::pairwise_mean;
use twp::baselines::psa_pairwise_mean;
use twp::series::TimeSeries;

fn impulse(len: usize, at: usize) -> TimeSeries {
    let mut v = vec![0.0; len];
    v[at] = 1.0;
    TimeSeries::new(v).expect("finite")
}

fn main() {
    let a = impulse(50, 10);
    let b = impulse(50, 20);
    let twp = pairwise_mean(&a, &b);
    let psa = psa_pairwise_mean(&a, &b);
    println!("peaks at 10 and 20, expected mean location 15");
    println!("TWP pairwise mean: peak at {} ({} samples)", twp.argmax(), twp.len());
    println!("PSA pairwise mean: peak at {} ({} samples)", psa.argmax(), psa.len());

    let early = TimeSeries::new((0..60).map(|t| if (15..30).contains(&t) { 1.0 } else { 0.0 }).collect()).unwrap();
    let late = TimeSeries::new((0..60).map(|t| if (25..35).contains(&t) { 1.0 } else { 0.0 }).collect()).unwrap();
    let m = pairwise_mean(&early, &late);
    let on: Vec<usize> = (0..m.len()).filter(|&t| m[t] > 0.5).collect();
    println!(
        "pulses [15,30) and [25,35): mean pulse spans [{}, {}], duration {}",
        on[0],
        on[on.len() - 1] + 1,
        on.len()
    );
}
