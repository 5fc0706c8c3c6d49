use serde::Serialize;
use zonefit::zone::{contour, Contour};
use zonefit::{FitResult, RulebookZone, ZoneError};

use crate::commands::read_json;
use crate::error::{CliError, Result};
use crate::output::{write_csv_rows, write_text, Manifest, OutDir};
use crate::svg::contour_plot;
use crate::ContourArgs;

#[derive(Serialize)]
struct VertexRow {
    level: f64,
    vertex: usize,
    x: f64,
    y: f64,
}

#[derive(Serialize)]
struct ContourEcho<'a> {
    levels: &'a [f64],
    points: usize,
}

/// Writes `contours.svg` and `contours.csv`. Levels the fitted zone never
/// reaches are skipped with a warning.
pub fn run(a: &ContourArgs, seed: Option<u64>) -> Result<()> {
    let mut manifest = Manifest::new("contour", seed.unwrap_or(0));
    manifest.input(&a.fit)?;
    manifest.config(&ContourEcho {
        levels: &a.levels,
        points: a.points,
    })?;
    let fit: FitResult = read_json(&a.fit)?;
    let params = fit.params;
    params
        .validate()
        .map_err(|e| CliError::from(e).context(a.fit.display()))?;
    let mut out = OutDir::new(&a.out, manifest)?;

    let mut contours: Vec<Contour> = Vec::new();
    for &level in &a.levels {
        match contour(&params, level, a.points) {
            Ok(c) => contours.push(c),
            Err(ZoneError::EmptyContour { level, radius }) => out.manifest.warn(format!(
                "level {level} is not reached (contour radius {radius}); skipped"
            )),
            Err(e) => return Err(e.into()),
        }
    }
    if contours.is_empty() {
        return Err(CliError::input(
            "none of the requested levels has a contour",
        ));
    }

    let rows: Vec<VertexRow> = contours
        .iter()
        .flat_map(|c| {
            c.points
                .iter()
                .enumerate()
                .map(|(vertex, &(x, y))| VertexRow {
                    level: c.level,
                    vertex,
                    x,
                    y,
                })
        })
        .collect();
    write_csv_rows(
        &out.file("contours.csv"),
        &rows,
        &["level", "vertex", "x", "y"],
    )?;

    let stem = a
        .fit
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let svg = contour_plot(
        &format!("Strike probability contours: {stem}"),
        &contours,
        &RulebookZone::default(),
    );
    write_text(&out.file("contours.svg"), &svg)?;
    println!("{} contours written to {}", contours.len(), a.out.display());
    out.finish()
}
