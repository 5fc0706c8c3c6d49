pub mod compare;
pub mod contour;
pub mod fit;
pub mod ratios;
pub mod simulate;
pub mod validate;

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use zonefit::analysis::BandSide;
use zonefit::data::load_csv;
use zonefit::{BandLabel, CsvSchema, Dataset, FitConfig, ZoneBand};

use crate::error::{CliError, Result};
use crate::output::Manifest;
use crate::{FitOverrides, SchemaArg};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::input(format!("{}: invalid JSON: {e}", path.display())))
}

pub fn load_schema(arg: &SchemaArg, manifest: &mut Manifest) -> Result<CsvSchema> {
    match &arg.schema {
        Some(path) => {
            manifest.input(path)?;
            read_json(path)
        }
        None => Ok(CsvSchema::default()),
    }
}

/// Strict load of a pitch CSV, recorded in the manifest.
pub fn load_pitches(path: &Path, schema: &CsvSchema, manifest: &mut Manifest) -> Result<Dataset> {
    manifest.input(path)?;
    load_csv(path, schema).map_err(|e| CliError::from(e).context(path.display()))
}

/// Fit configuration from file, then flags, then the global seed.
pub fn fit_config(
    o: &FitOverrides,
    seed: Option<u64>,
    manifest: &mut Manifest,
) -> Result<FitConfig> {
    let mut cfg = match &o.config {
        Some(path) => {
            manifest.input(path)?;
            read_json(path)?
        }
        None => FitConfig::default(),
    };
    if let Some(v) = o.n_starts {
        cfg.n_starts = v;
    }
    if let Some(v) = o.n_bootstrap {
        cfg.n_bootstrap = v;
    }
    if let Some(v) = o.max_iters {
        cfg.max_iters = v;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Parses band selectors: `all` expands to the eight bands followed by the
/// four pooled sides; `Low` pools Low1 and Low2.
pub fn parse_bands(items: &[String]) -> Result<Vec<BandLabel>> {
    let mut out = Vec::new();
    for item in items {
        let s = item.trim();
        if s.eq_ignore_ascii_case("all") {
            out.extend(ZoneBand::ALL.map(BandLabel::Band));
            out.extend(BandSide::ALL.map(BandLabel::Pooled));
            continue;
        }
        let side = s.strip_suffix("(1+2)").unwrap_or(s);
        if let Some(side) = BandSide::ALL
            .into_iter()
            .find(|b| b.as_str().eq_ignore_ascii_case(side))
        {
            out.push(BandLabel::Pooled(side));
            continue;
        }
        let band: ZoneBand = s.parse().map_err(CliError::input)?;
        out.push(BandLabel::Band(band));
    }
    let mut seen = Vec::new();
    out.retain(|b| {
        let fresh = !seen.contains(b);
        seen.push(*b);
        fresh
    });
    if out.is_empty() {
        return Err(CliError::input("no bands selected"));
    }
    Ok(out)
}

/// File-name-safe version of a group label.
pub fn slug(label: &str) -> String {
    label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '.' {
                c
            } else {
                '_'
            }
        })
        .collect()
}
