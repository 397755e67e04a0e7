//! Drives the batch front end in-process: parse a config, run a command and
//! print the CSV it would write.

use swapsim::cli::{self, Command};

const CONFIG: &str = "\
# calibrated working point
overlap = 0.953
misalignment_deg = 4.5
seed = 42
duration_s = 10000
rate_hz = 0.0325
";

fn main() {
    let config = match cli::parse_config(CONFIG) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    };
    for command in [Command::Chsh, Command::BsaAudit] {
        match cli::execute(command, &config) {
            Ok(out) => println!("{}", out.csv),
            Err(e) => {
                eprintln!("{e}");
                std::process::exit(e.exit_code());
            }
        }
    }
}
