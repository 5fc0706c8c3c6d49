use serde::Serialize;
use zonefit::analysis::per_umpire_fits;
use zonefit::fit::fit;
use zonefit::grid::{probability_grid, DEFAULT_STEP};
use zonefit::{Extent, FilterSpec, FitConfig, FitError, FitResult};

use crate::commands::{fit_config, load_pitches, load_schema, slug};
use crate::error::{CliError, Result};
use crate::output::{write_atomic, write_csv_rows, write_json, Manifest, OutDir};
use crate::{FitArgs, FitGrouping};

#[derive(Serialize)]
struct TrendRow<'a> {
    group: &'a str,
    param: &'a str,
    estimate: f64,
    lo: Option<f64>,
    hi: Option<f64>,
}

#[derive(Serialize)]
struct ErrorRow<'a> {
    group: &'a str,
    error: String,
}

#[derive(Serialize)]
struct SkippedRow {
    group: String,
    called: usize,
}

#[derive(Serialize)]
struct FitEcho {
    group_by: &'static str,
    min_called: usize,
    fit: FitConfig,
}

/// Fits each group and writes `fit_<group>.json`, `grid_<group>.csv`,
/// `trend.csv` and, when any occur, `errors.csv` and `skipped.csv`.
pub fn run(a: &FitArgs, seed: Option<u64>) -> Result<()> {
    let mut manifest = Manifest::new("fit", 0);
    let schema = load_schema(&a.schema, &mut manifest)?;
    let cfg = fit_config(&a.fit, seed, &mut manifest)?;
    manifest.seed = cfg.seed;
    let d = load_pitches(&a.input, &schema, &mut manifest)?;
    manifest.config(&FitEcho {
        group_by: match a.group_by {
            FitGrouping::Season => "season",
            FitGrouping::Umpire => "umpire",
            FitGrouping::None => "none",
        },
        min_called: a.min_called,
        fit: cfg,
    })?;
    let mut out = OutDir::new(&a.out, manifest)?;

    let mut fits: Vec<(String, FitResult)> = Vec::new();
    let mut errors: Vec<(String, FitError)> = Vec::new();
    let mut skipped: Vec<SkippedRow> = Vec::new();
    match a.group_by {
        FitGrouping::None => match fit(&d, &cfg) {
            Ok(r) => fits.push(("all".into(), r)),
            Err(e) => errors.push(("all".into(), e)),
        },
        FitGrouping::Season => {
            for season in d.summary().per_season.keys() {
                let spec = FilterSpec {
                    seasons: Some(vec![*season]),
                    ..Default::default()
                };
                match fit(&d.filter(&spec), &cfg) {
                    Ok(r) => fits.push((season.to_string(), r)),
                    Err(e) => errors.push((season.to_string(), e)),
                }
            }
        }
        FitGrouping::Umpire => {
            let res = per_umpire_fits(&d, a.min_called, &cfg)?;
            let label = |(u, s): &(String, i32)| format!("{u}@{s}");
            fits.extend(res.fits.iter().map(|(k, r)| (label(k), r.clone())));
            errors.extend(res.errors.iter().map(|(k, e)| (label(k), e.clone())));
            skipped.extend(res.skipped.iter().map(|(k, called)| SkippedRow {
                group: label(k),
                called: *called,
            }));
        }
    }

    let mut trend = Vec::new();
    for (group, r) in &fits {
        write_json(&out.file(&format!("fit_{}.json", slug(group))), r)?;
        let grid = probability_grid(&r.params, Extent::default(), DEFAULT_STEP)?;
        write_atomic(&out.file(&format!("grid_{}.csv", slug(group))), |w| {
            grid.write_csv(w).map_err(CliError::from)
        })?;
        for (param, estimate, iv) in r.estimate_rows() {
            trend.push(TrendRow {
                group,
                param,
                estimate,
                lo: iv.map(|i| i.lo),
                hi: iv.map(|i| i.hi),
            });
        }
        println!(
            "{group}: {} called pitches, nll {:.4}",
            r.n_pitches_used, r.nll
        );
    }
    write_csv_rows(
        &out.file("trend.csv"),
        &trend,
        &["group", "param", "estimate", "lo", "hi"],
    )?;

    if !skipped.is_empty() {
        for s in &skipped {
            out.manifest.warn(format!(
                "skipped {}: {} called pitches below minimum {}",
                s.group, s.called, a.min_called
            ));
        }
        write_csv_rows(&out.file("skipped.csv"), &skipped, &["group", "called"])?;
    }
    if !errors.is_empty() {
        let rows: Vec<ErrorRow> = errors
            .iter()
            .map(|(g, e)| ErrorRow {
                group: g,
                error: e.to_string(),
            })
            .collect();
        for r in &rows {
            out.manifest
                .warn(format!("fit failed for {}: {}", r.group, r.error));
        }
        write_csv_rows(&out.file("errors.csv"), &rows, &["group", "error"])?;
    }
    let n_fits = fits.len();
    out.finish()?;
    if n_fits == 0 {
        return Err(CliError::input("no group could be fitted"));
    }
    Ok(())
}
