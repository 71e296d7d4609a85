//! Writes a 250-inspection trace of a threshold policy as CSV, for plotting
//! deterioration paths with maintenance markers.
//!
//!     cargo run --example export_trace -- trace.csv

use std::path::PathBuf;

use cbm_rl::pipeline::{cmd_trace, PolicySource};
use cbm_rl::{BaselineSpec, CaseConfig, Event};

fn main() -> cbm_rl::Result<()> {
    let out = std::env::args().nth(1).map_or_else(|| std::env::temp_dir().join("cbm_trace.csv"), PathBuf::from);
    let case = CaseConfig::builtin(2)?;
    let tbm = BaselineSpec::Tbm { repair_threshold: 6.0, replacement_threshold: 7.0 };
    let trace = cmd_trace(&case, &PolicySource::Baseline(tbm), 250, 1, &out)?;

    let count = |e: Event| trace.iter().filter(|s| s.event == e).count();
    println!(
        "{} inspections: {} repairs, {} preventive and {} corrective replacements",
        trace.len(),
        count(Event::Repair),
        count(Event::PreventiveReplacement),
        count(Event::CorrectiveReplacement)
    );
    println!("written to {}", out.display());
    Ok(())
}
