use zonefit::synth::generate;
use zonefit::SynthConfig;

use crate::commands::read_json;
use crate::error::{CliError, Result};
use crate::output::{write_atomic, Manifest};
use crate::SimulateArgs;

/// Writes the synthetic CSV and `<out>.manifest.json` beside it.
pub fn run(a: &SimulateArgs, seed: Option<u64>) -> Result<()> {
    let mut cfg: SynthConfig = read_json(&a.config)?;
    if let Some(n) = a.n {
        cfg.n = n;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let mut manifest = Manifest::new("simulate", cfg.seed);
    manifest.input(&a.config)?;
    manifest.config(&cfg)?;

    let d = generate(&cfg)?;
    write_atomic(&a.out, |w| {
        d.write_csv(w)
            .map_err(|e| CliError::internal(e.to_string()))
    })?;
    manifest.output(&a.out);

    let mut name = a.out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    manifest.write(&a.out.with_file_name(name))?;
    println!("wrote {} pitches to {}", d.row_count(), a.out.display());
    Ok(())
}
