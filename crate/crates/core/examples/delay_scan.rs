//! Conditional correlation at 45°/45° against the b-c delay.

use swapsim::analysis::delay_scan;
use swapsim::experiment::ExperimentConfig;

fn main() -> swapsim::Result<()> {
    let delays: Vec<f64> = (-16..=16).map(|k| k as f64 * 0.25).collect();
    let points = delay_scan(&ExperimentConfig::default(), &delays, 1.0)?;
    println!(
        "{:>6} {:>8} {:>10} {:>10}",
        "delay", "overlap", "E(psi-)", "E(psi+)"
    );
    for p in points {
        println!(
            "{:>6.2} {:>8.4} {:>+10.4} {:>+10.4}",
            p.delay, p.overlap, p.e_psi_minus, p.e_psi_plus
        );
    }
    Ok(())
}
