use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::Serialize;
use zonefit::fit::fit_point;
use zonefit::grid::{grid_difference, probability_grid, CSV_CORNER};
use zonefit::{CsvSchema, Extent, FitConfig, FitResult, GridError, ProbabilityGrid, RulebookZone};

use crate::commands::{fit_config, load_pitches, load_schema, read_json};
use crate::error::{CliError, Result};
use crate::output::{write_atomic, write_text, Manifest, OutDir};
use crate::svg::difference_heatmap;
use crate::CompareArgs;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
enum InputKind {
    FitJson,
    Grid,
    Pitches,
}

#[derive(Serialize)]
struct CompareEcho {
    extent: Extent,
    step: f64,
    inputs: [InputKind; 2],
    /// Used only for pitch-CSV inputs, which are fitted without intervals.
    fit: FitConfig,
}

/// A `{` starts a fit JSON, a `y\x` corner cell a grid CSV; anything else is
/// taken as pitches.
fn detect(path: &Path) -> Result<InputKind> {
    let file = File::open(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let mut first = String::new();
    BufReader::new(file)
        .read_line(&mut first)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let first = first.trim_start_matches('\u{feff}').trim_start();
    Ok(if first.starts_with('{') {
        InputKind::FitJson
    } else if first.split(',').next().map(str::trim) == Some(CSV_CORNER) {
        InputKind::Grid
    } else {
        InputKind::Pitches
    })
}

fn load_grid(
    path: &Path,
    kind: InputKind,
    extent: Extent,
    step: f64,
    cfg: &FitConfig,
    schema: &CsvSchema,
    manifest: &mut Manifest,
) -> Result<ProbabilityGrid> {
    let grid = match kind {
        InputKind::Grid => {
            manifest.input(path)?;
            let file = File::open(path)
                .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
            ProbabilityGrid::read_csv(BufReader::new(file))
                .map_err(|e| CliError::from(e).context(path.display()))?
        }
        InputKind::FitJson => {
            manifest.input(path)?;
            let fit: FitResult = read_json(path)?;
            fit.params
                .validate()
                .map_err(|e| CliError::from(e).context(path.display()))?;
            probability_grid(&fit.params, extent, step)?
        }
        InputKind::Pitches => {
            let d = load_pitches(path, schema, manifest)?;
            let r = fit_point(&d, cfg).map_err(|e| CliError::from(e).context(path.display()))?;
            probability_grid(&r.params, extent, step)?
        }
    };
    Ok(grid)
}

/// Writes `difference.csv` and `difference.svg` holding `a - b`.
pub fn run(a: &CompareArgs, seed: Option<u64>) -> Result<()> {
    let mut manifest = Manifest::new("compare", 0);
    let schema = load_schema(&a.schema, &mut manifest)?;
    let cfg = fit_config(&a.fit, seed, &mut manifest)?;
    manifest.seed = cfg.seed;
    let extent = a.extent.unwrap_or_default();
    let kinds = [detect(&a.a)?, detect(&a.b)?];
    manifest.config(&CompareEcho {
        extent,
        step: a.step,
        inputs: kinds,
        fit: cfg,
    })?;

    let ga = load_grid(&a.a, kinds[0], extent, a.step, &cfg, &schema, &mut manifest)?;
    let gb = load_grid(&a.b, kinds[1], extent, a.step, &cfg, &schema, &mut manifest)?;
    let diff = grid_difference(&ga, &gb).map_err(|e| match e {
        GridError::GridMismatch => CliError::input(format!(
            "{} and {} do not share a grid extent and step",
            a.a.display(),
            a.b.display()
        )),
        other => other.into(),
    })?;

    let mut out = OutDir::new(&a.out, manifest)?;
    write_atomic(&out.file("difference.csv"), |w| {
        diff.write_csv(w).map_err(CliError::from)
    })?;
    let name = |p: &Path| {
        p.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default()
    };
    let title = format!(
        "Strike probability difference: {} - {}",
        name(&a.a),
        name(&a.b)
    );
    write_text(
        &out.file("difference.svg"),
        &difference_heatmap(&title, &diff, &RulebookZone::default()),
    )?;
    let (lo, hi) = diff.min_max();
    println!(
        "difference range [{lo:.4}, {hi:.4}] written to {}",
        a.out.display()
    );
    out.finish()
}
