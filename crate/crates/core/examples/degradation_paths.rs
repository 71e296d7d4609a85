//! Unmaintained gamma-process paths and increment moments against theory.
//!
//!     cargo run --release --example degradation_paths

use cbm_rl::degradation::unmaintained_path;
use cbm_rl::eval::mean_sd;
use cbm_rl::{CaseConfig, RngStream};

fn main() -> cbm_rl::Result<()> {
    let case = CaseConfig::builtin(2)?;
    let p = case.process();
    let mut rng = RngStream::new(42, 0);

    println!("first passage over L = {} for five unmaintained units:", case.failure_threshold);
    for unit in 0..5 {
        let path = unmaintained_path(&p, 200, &mut rng)?;
        let hit = path.iter().position(|&x| x >= case.failure_threshold);
        let shown: Vec<String> = path.iter().take(8).map(|x| format!("{x:.2}")).collect();
        println!("  unit {unit}: {} ... fails at inspection {:?}", shown.join(" "), hit.map(|i| i + 1));
    }

    let sampler = p.sampler()?;
    let draws: Vec<f64> = (0..200_000).map(|_| sampler.sample(&mut rng)).collect();
    let (m, sd) = mean_sd(&draws);
    println!("\nincrement per inspection, shape {:.3}, rate {}:", p.increment_shape(), p.beta);
    println!("  mean      {m:.5}  (theory {:.5})", p.increment_mean());
    println!("  variance  {:.5}  (theory {:.5})", sd * sd, p.increment_variance());
    for x in [0.1, 0.5, 1.0] {
        let empirical = draws.iter().filter(|&&d| d <= x).count() as f64 / draws.len() as f64;
        println!("  P(dX <= {x}) = {empirical:.4}  (theory {:.4})", p.increment_cdf(x)?);
    }
    Ok(())
}
