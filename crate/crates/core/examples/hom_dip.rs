//! Two-photon interference on a 50:50 beam splitter as the relative delay
//! of the photons is scanned.

use swapsim::fock::{FockVector, ModeLabel, Path, Polarization};
use swapsim::optics;

fn main() -> swapsim::Result<()> {
    let sigma = 1.0;
    let input = FockVector::vacuum()
        .apply_creation(ModeLabel::early(Path::B, Polarization::H))?
        .apply_creation(ModeLabel::early(Path::C, Polarization::H))?;
    let bs = optics::beam_splitter(Path::B, Path::C, Path::Bsa1, Path::Bsa2)?;

    println!("{:>6} {:>8} {:>12}", "delay", "overlap", "coincidence");
    for k in -12..=12 {
        let delay = k as f64 * 0.25;
        let v = optics::delay_overlap(delay, sigma)?;
        let circuit = optics::delay_decompose(Path::C, v)?.then(&bs)?;
        let p: f64 = input
            .apply_mode_map(&circuit)
            .iter()
            .filter(|(occ, _)| occ.photons_on(Path::Bsa1) == 1 && occ.photons_on(Path::Bsa2) == 1)
            .fold(0.0, |acc, (_, amp)| acc + amp.norm_sqr());
        println!("{delay:>6.2} {v:>8.4} {p:>12.6}");
    }
    Ok(())
}
