//! Converts warping paths into time warp profiles: the lag between the two
//! series at every point of the in-phase time scale.
//!
//! cargo run --example time_warp_profile

use twp::dtw::align;
use twp::phase::{twp_basic, twp_general};
use twp::series::{TimeSeries, WarpingPath};

fn main() -> twp::Result<()> {
    // S2 lags S1 by two samples in the middle.
    let s1 = TimeSeries::new(vec![0.0, 0.0, 1.0, 4.0, 1.0, 0.0, 0.0, 0.0])?;
    let s2 = TimeSeries::new(vec![0.0, 0.0, 0.0, 0.0, 1.0, 4.0, 1.0, 0.0])?;
    let path = align(&s1, &s2).path;
    let profile = twp_basic(&path)?;
    println!("path    {:?}", path.pairs());
    println!("profile {:?}", profile.phi);
    println!("length {} = {} + {} - 1, final lag {}", profile.len(), s1.len(), s2.len(), profile.final_lag());

    // The general conversion interpolates over multi-sample steps and agrees
    // with the basic one on basic paths.
    assert_eq!(twp_general(&path)?, profile);
    let stretched = WarpingPath::from_pairs(vec![(0, 0), (1, 2), (3, 3)]);
    println!("interpolated over {:?}: {:?}", stretched.pairs(), twp_general(&stretched)?.phi);

    // Swapping the series negates the profile.
    let back = twp_basic(&path.transposed())?;
    println!("transposed {:?}", back.phi);
    Ok(())
}
