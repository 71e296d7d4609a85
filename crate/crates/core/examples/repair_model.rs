//! Increasingly imperfect repairs: each repair samples the new level from a
//! truncated normal on [x_m, x], and x_m ratchets up to the new level.
//!
//!     cargo run --example repair_model

use cbm_rl::env::apply_repair;
use cbm_rl::{RepairSpread, RngStream, SystemState};

fn main() -> cbm_rl::Result<()> {
    let mut rng = RngStream::new(7, 0);
    let mut s = SystemState::new(6.0, 0.0)?;
    println!("{:>6} {:>8} {:>8}", "repair", "x before", "x after");
    for n in 1..=8 {
        let before = s.x;
        s = apply_repair(s, RepairSpread::Sum, &mut rng);
        println!("{n:>6} {before:>8.3} {:>8.3}", s.x);
        // Let the unit wear between repairs.
        s = SystemState::new(s.x + 1.0, s.x_m)?;
    }

    println!("\nspread of 10000 repairs from {{6, 0}}:");
    for spread in [RepairSpread::Sum, RepairSpread::Width] {
        let xs: Vec<f64> = (0..10_000).map(|_| apply_repair(SystemState { x: 6.0, x_m: 0.0 }, spread, &mut rng).x).collect();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let (lo, hi) = xs.iter().fold((f64::MAX, f64::MIN), |(a, b), &x| (a.min(x), b.max(x)));
        println!("  {spread:?}: mean {mean:.3}, range [{lo:.3}, {hi:.3}]");
    }
    Ok(())
}
