//! Which Bell states the beam splitter plus polarizing analyzer can tell
//! apart, with and without imperfect overlap.

use swapsim::experiment::{bsa_identification, BellState, ExperimentConfig};

fn print_matrix(title: &str, config: &ExperimentConfig) -> swapsim::Result<()> {
    println!("{title}");
    println!("  {:<10} {:>10} {:>10}", "input", "psi_minus", "psi_plus");
    for (state, row) in BellState::ALL.iter().zip(bsa_identification(config)?) {
        println!("  {:<10} {:>10.6} {:>10.6}", state.name(), row[0], row[1]);
    }
    Ok(())
}

fn main() -> swapsim::Result<()> {
    print_matrix("ideal", &ExperimentConfig::default())?;
    print_matrix(
        "overlap 0.9",
        &ExperimentConfig {
            overlap: 0.9,
            ..ExperimentConfig::default()
        },
    )?;
    Ok(())
}
