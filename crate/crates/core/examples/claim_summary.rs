//! Prints one line per claim for a reduced sweep.
//!
//! `cargo run --release --example claim_summary`

use oblong::claims::{full_report, ClaimConfig};

fn main() -> oblong::Result<()> {
    let config = ClaimConfig {
        l_values: vec![5.0, 10.0, 20.0, 40.0, 80.0],
        ..ClaimConfig::default()
    };
    let report = full_report(&config, None)?;
    for c in &report.claims {
        let status = if c.pass { "pass" } else { "FAIL" };
        println!("{status:4}  {:30} margin {:+.3e}  {}", c.id, c.margin, c.anchor);
    }
    Ok(())
}
