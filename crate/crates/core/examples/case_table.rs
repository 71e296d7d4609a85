//! The seven built-in case studies, plus a custom case loaded from TOML.
//!
//!     cargo run --example case_table

use std::path::Path;

use cbm_rl::CaseConfig;

fn main() -> cbm_rl::Result<()> {
    println!("{:<5} {:<26} {:>5} {:>6} {:>7} {:>4} {:>6}  hash", "case", "label", "beta", "C_P", "C_down", "L", "dt");
    for c in CaseConfig::all_builtin() {
        println!(
            "{:<5} {:<26} {:>5} {:>6} {:>7} {:>4} {:>6}  {}",
            c.id, c.label, c.beta, c.c_p, c.c_down, c.failure_threshold, c.delta_t, c.config_hash()
        );
    }

    // Fields left out fall back to C_R = 3500, v = 0.0115, 200 x 1000 inspections.
    let custom = CaseConfig::from_toml_str(
        r#"
id = "heavy"
label = "Fast degradation, cheap repairs"
beta = 3.5
c_p = 400
c_down = 2000
failure_threshold = 8
delta_t = 100
"#,
        Path::new("heavy.toml"),
    )?;
    println!("\ncustom case as TOML:\n{}", custom.to_toml_string());

    let broken = CaseConfig::from_toml_str("id = \"x\"\nbeta = \"fast\"\n", Path::new("broken.toml"));
    println!("malformed file -> {}", broken.unwrap_err());
    Ok(())
}
