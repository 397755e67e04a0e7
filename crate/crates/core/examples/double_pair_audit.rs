//! How often a same-source double pair fakes a Bell-state signature, for
//! the polarizing analyzer and for a bare beam splitter.

use swapsim::experiment::{double_pair_audit, ExperimentConfig};

fn main() -> swapsim::Result<()> {
    let report = double_pair_audit(&ExperimentConfig::default())?;
    println!(
        "{:<10} {:<10} {:>8} {:>8} {:>7}",
        "term", "signature", "pbs", "bare", "ratio"
    );
    for r in &report.rows {
        let flag = if r.within_factor_two() {
            ""
        } else {
            "  <- above 1/2"
        };
        println!(
            "{:<10} {:<10} {:>8.5} {:>8.5} {:>7.4}{flag}",
            r.term.name(),
            r.signature,
            r.pbs_acceptance,
            r.bare_acceptance,
            r.ratio
        );
    }
    for (term, leak) in &report.fourfold_leak {
        println!("four-fold acceptance of {}: {leak:.3e}", term.name());
    }
    Ok(())
}
