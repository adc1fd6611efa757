//! Phase distance and the generalized time alignment measurement (TAM) for
//! pairs with increasing amounts of warping.
//!
//! cargo run --example phase_and_tam

use twp::phase::{phase_distance, profile_of, tam_generalized, tam_original};
use twp::dtw::align;
use twp::series::TimeSeries;

fn bump(len: usize, center: f64, width: f64) -> TimeSeries {
    TimeSeries::new((0..len).map(|t| (-0.5 * ((t as f64 - center) / width).powi(2)).exp()).collect())
        .expect("finite")
}

fn main() -> twp::Result<()> {
    let reference = bump(100, 40.0, 6.0);
    println!("{:>6} {:>10} {:>8} {:>8} {:>8} {:>8}", "shift", "phase", "gamma", "g_min", "g_warp", "orig");
    for shift in [0.0, 2.0, 5.0, 10.0, 20.0] {
        let other = bump(100, 40.0 + shift, 6.0);
        let profile = profile_of(&reference, &other);
        let tam = tam_generalized(&profile)?;
        let original = tam_original(&align(&reference, &other).path)?;
        println!(
            "{shift:>6} {:>10.2} {:>8.4} {:>8.4} {:>8.4} {:>8.4}",
            phase_distance(&reference, &other),
            tam.gamma,
            tam.gamma_min,
            tam.gamma_w,
            original
        );
    }

    // Unequal lengths: part of the TAM is the unavoidable stretch.
    let short = bump(70, 28.0, 4.2);
    let tam = tam_generalized(&profile_of(&reference, &short))?;
    println!("\nlengths 100 vs 70: gamma {:.4}, of which stretch {:.4} = 30/99", tam.gamma, tam.gamma_min);
    Ok(())
}
