//! Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::Rng;
use zonefit::analysis::{
    decision_pitch_mix, hit_attempt_ratio, jeffreys_interval, strike_ratio, BandClassifier,
    BandSide,
};
use zonefit::fit::{fit, fit_point, PARAM_NAMES};
use zonefit::rng;
use zonefit::synth::generate;
use zonefit::zone::contour;
use zonefit::{
    BandLabel, BatterHand, Dataset, FitConfig, GroupKey, GroupKeyField, Outcome, Pitch, PitchType,
    RulebookZone, SynthConfig, ZoneBand, ZoneCall, ZoneParams,
};

const LEVELS: [f64; 5] = [0.1, 0.25, 0.5, 0.75, 0.9];

struct Verdict {
    pass: bool,
    summary: String,
    details: Vec<String>,
}

fn verdict(pass: bool, summary: impl Into<String>, details: Vec<String>) -> Verdict {
    Verdict {
        pass,
        summary: summary.into(),
        details,
    }
}

fn truth() -> ZoneParams {
    ZoneParams::new(0.0, 2.5, 0.9, 1.11, 20.0, 8.0).unwrap()
}

fn value(p: &ZoneParams, name: &str) -> f64 {
    zonefit::fit::param_value(p, name).unwrap()
}

// 1. Parameter recovery at 50,000 pitches over 10 seeds.
fn parameter_recovery() -> Verdict {
    let t = truth();
    let mut good = 0;
    let mut slowest = 0.0f64;
    let mut details = Vec::new();
    for seed in 0..10u64 {
        let d = generate(&SynthConfig::new(t, 50_000, seed)).unwrap();
        let cfg = FitConfig {
            seed,
            ..Default::default()
        };
        let start = Instant::now();
        let r = fit(&d, &cfg).unwrap();
        let secs = start.elapsed().as_secs_f64();
        slowest = slowest.max(secs);
        let p = r.params;
        let misses: Vec<&str> = [
            ("x0", (p.x0 - t.x0).abs() <= 0.02),
            ("y0", (p.y0 - t.y0).abs() <= 0.02),
            ("alpha", (p.alpha - t.alpha).abs() <= 0.02),
            ("lambda", (p.lambda / t.lambda - 1.0).abs() <= 0.02),
            ("beta", (p.beta / t.beta - 1.0).abs() <= 0.15),
            ("r", (p.r / t.r - 1.0).abs() <= 0.25),
        ]
        .into_iter()
        .filter(|(_, ok)| !ok)
        .map(|(n, _)| n)
        .collect();
        good += misses.is_empty() as usize;
        details.push(format!(
            "seed {seed}: x0={:.4} y0={:.4} alpha={:.4} lambda={:.4} beta={:.2} r={:.2} in {secs:.1} s{}",
            p.x0,
            p.y0,
            p.alpha,
            p.lambda,
            p.beta,
            p.r,
            if misses.is_empty() { String::new() } else { format!(" (outside: {})", misses.join(", ")) }
        ));
    }
    verdict(
        good >= 9 && slowest < 60.0,
        format!("{good}/10 seeds within tolerance, slowest full fit {slowest:.1} s"),
        details,
    )
}

// 2. Rule-book fits are steeper and more rectangular than beta = 5 fits.
fn rectilinearity_ordering() -> Verdict {
    let human = ZoneParams {
        beta: 5.0,
        ..truth()
    };
    let mut ordered = 0;
    let mut details = Vec::new();
    for seed in 0..10u64 {
        let cfg = FitConfig {
            seed,
            n_bootstrap: 0,
            ..Default::default()
        };
        let rb = fit_point(
            &generate(&SynthConfig::rulebook(20_000, seed)).unwrap(),
            &cfg,
        )
        .unwrap()
        .params;
        let hu = fit_point(
            &generate(&SynthConfig::new(human, 20_000, seed)).unwrap(),
            &cfg,
        )
        .unwrap()
        .params;
        let ok = rb.beta > hu.beta && rb.r > hu.r;
        ordered += ok as usize;
        details.push(format!(
            "seed {seed}: rule-book beta={:.1} r={:.2}; human beta={:.2} r={:.2}",
            rb.beta, rb.r, hu.beta, hu.r
        ));
    }
    verdict(
        ordered == 10,
        format!("{ordered}/10 seeds ordered"),
        details,
    )
}

fn oracle_distance(p: &ZoneParams, x: f64, y: f64) -> f64 {
    let u = (x - p.x0).abs();
    let v = ((y - p.y0) / p.lambda).abs();
    (u.powf(p.r) + v.powf(p.r)).powf(1.0 / p.r)
}

fn oracle_probability(p: &ZoneParams, x: f64, y: f64) -> f64 {
    1.0 / (1.0 + (p.beta * (oracle_distance(p, x, y) - p.alpha)).exp())
}

// 3. Contour vertices sit on their level and contours nest.
fn contour_consistency() -> Verdict {
    let mut rng = rng::stream(3, 0);
    let mut worst = 0.0f64;
    let mut nest_failures = 0;
    let mut vertices = 0;
    for _ in 0..100 {
        let p = ZoneParams::new(
            rng.random_range(-0.3..0.3),
            rng.random_range(2.0..3.0),
            rng.random_range(0.5..1.5),
            rng.random_range(0.7..1.5),
            rng.random_range(5.0..200.0),
            rng.random_range(1.2..64.0),
        )
        .unwrap();
        let contours: Vec<_> = LEVELS
            .iter()
            .map(|&q| contour(&p, q, 360).unwrap())
            .collect();
        for c in &contours {
            for &(x, y) in &c.points {
                worst = worst.max((oracle_probability(&p, x, y) - c.level).abs());
                vertices += 1;
            }
        }
        for (i, outer) in contours.iter().enumerate() {
            let outer_radius = p.alpha - (outer.level / (1.0 - outer.level)).ln() / p.beta;
            for inner in &contours[i + 1..] {
                let inner_radius = p.alpha - (inner.level / (1.0 - inner.level)).ln() / p.beta;
                let inside = inner
                    .points
                    .iter()
                    .all(|&(x, y)| oracle_distance(&p, x, y) < outer_radius);
                let outside = outer
                    .points
                    .iter()
                    .all(|&(x, y)| oracle_distance(&p, x, y) > inner_radius);
                nest_failures += !(inside && outside) as usize;
            }
        }
    }
    verdict(
        worst < 1e-9 && nest_failures == 0,
        format!(
            "{vertices} vertices, max |P - level| = {worst:.2e}, {nest_failures} nesting failures"
        ),
        Vec::new(),
    )
}

/// ln Gamma(m + 1/2) for integer m >= 0.
fn ln_gamma_half(m: u64) -> f64 {
    0.5 * std::f64::consts::PI.ln() + (1..=m).map(|j| (j as f64 - 0.5).ln()).sum::<f64>()
}

/// Regularized incomplete beta I_x(k + 1/2, n - k + 1/2), lifted from the
/// arcsine law I_x(1/2, 1/2) = (2/pi) asin(sqrt x) one unit step at a time.
fn oracle_beta_cdf(k: u64, n: u64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let (lx, l1x) = (x.ln(), (1.0 - x).ln());
    let mut i = std::f64::consts::FRAC_2_PI * x.sqrt().asin();
    let (mut a, mut b) = (0.5f64, 0.5f64);
    // ln B(1/2, 1/2) = ln pi
    let mut ln_b = std::f64::consts::PI.ln();
    for _ in 0..(n - k) {
        i += (a * lx + b * l1x - b.ln() - ln_b).exp();
        ln_b += (b / (a + b)).ln();
        b += 1.0;
    }
    for _ in 0..k {
        i -= (a * lx + b * l1x - a.ln() - ln_b).exp();
        ln_b += (a / (a + b)).ln();
        a += 1.0;
    }
    i
}

fn oracle_quantile(k: u64, n: u64, q: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if oracle_beta_cdf(k, n, mid) < q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

// 4. Jeffreys intervals against the oracle, bootstrap coverage.
fn interval_oracles() -> Verdict {
    // the lifted CDF differentiates to the Beta(3.5, 5.5) density
    let ln_b =
        ln_gamma_half(3) + ln_gamma_half(5) - (1..=8u64).map(|j| (j as f64).ln()).sum::<f64>();
    let direct = (2.5 * 0.3f64.ln() + 4.5 * 0.7f64.ln() - ln_b).exp();
    let h = 1e-6;
    let numeric = (oracle_beta_cdf(3, 8, 0.3 + h) - oracle_beta_cdf(3, 8, 0.3 - h)) / (2.0 * h);
    let density_ok = ((numeric - direct) / direct).abs() < 1e-6;

    let mut worst = 0.0f64;
    let mut pairs = 0;
    for n in 1..=200u64 {
        for k in 0..=n {
            let iv = jeffreys_interval(k, n).unwrap();
            let lo = if k == 0 {
                0.0
            } else {
                oracle_quantile(k, n, 0.025)
            };
            let hi = if k == n {
                1.0
            } else {
                oracle_quantile(k, n, 0.975)
            };
            worst = worst.max((iv.lo - lo).abs()).max((iv.hi - hi).abs());
            pairs += 1;
        }
    }
    let jeffreys_ok = density_ok && worst < 1e-8;

    let t = truth();
    let trials = 50u64;
    let mut covered = [0u32; 6];
    for trial in 0..trials {
        let d = generate(&SynthConfig::new(t, 20_000, 10_000 + trial)).unwrap();
        let cfg = FitConfig {
            seed: trial,
            ..Default::default()
        };
        let iv = fit(&d, &cfg).unwrap().intervals.unwrap();
        for (i, name) in PARAM_NAMES.iter().enumerate() {
            covered[i] += iv.params.get(name).unwrap().contains(value(&t, name)) as u32;
        }
    }
    let min_cov = *covered.iter().min().unwrap() as f64 / trials as f64;
    let coverage: Vec<String> = PARAM_NAMES
        .iter()
        .zip(covered)
        .map(|(n, c)| format!("{n} {c}/{trials}"))
        .collect();
    verdict(
        jeffreys_ok && min_cov >= 0.9,
        format!(
            "Jeffreys max deviation {worst:.2e} over {pairs} (k, n) pairs; bootstrap coverage min {:.0}%",
            100.0 * min_cov
        ),
        vec![format!("coverage: {}", coverage.join(", "))],
    )
}

fn band_members(cls: &BandClassifier, x: f64, y: f64, hand: BatterHand) -> Vec<ZoneBand> {
    cls.classify(x, y, hand).iter().collect()
}

/// Edge of `band` along the segment from `inside` to `outside` (membership
/// true at `inside`, false at `outside`), found by bisection.
fn edge(member: impl Fn(f64) -> bool, mut inside: f64, mut outside: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (inside + outside);
        if mid == inside || mid == outside {
            break;
        }
        if member(mid) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    0.5 * (inside + outside)
}

// 5. Exhaustive band scan at 0.01 ft.
fn band_correctness() -> Verdict {
    let cls = BandClassifier::default();
    let zone = RulebookZone::default();
    let mut errors = Vec::new();
    let mut cells = 0;
    for i in -200..200 {
        for j in 0..500 {
            let (x, y) = ((i as f64 + 0.5) / 100.0, (j as f64 + 0.5) / 100.0);
            for hand in [BatterHand::Right, BatterHand::Left] {
                let bands = band_members(&cls, x, y, hand);
                for b in &bands {
                    let expected = if b.is_inside() {
                        ZoneCall::Strike
                    } else {
                        ZoneCall::Ball
                    };
                    if zone.call(x, y) != expected {
                        errors.push(format!(
                            "{b} at ({x}, {y}) is a rule-book {:?}",
                            zone.call(x, y)
                        ));
                    }
                }
                let other = match hand {
                    BatterHand::Right => BatterHand::Left,
                    BatterHand::Left => BatterHand::Right,
                };
                if bands != band_members(&cls, -x, y, other) {
                    errors.push(format!("mirror mismatch at ({x}, {y})"));
                }
                cells += 1;
            }
        }
    }

    // widths: 25 cells along a line through each band, and bisected edges
    let mut widths = Vec::new();
    for hand in [BatterHand::Right, BatterHand::Left] {
        for band in ZoneBand::ALL {
            let vertical = matches!(band.side(), BandSide::High | BandSide::Low);
            let has = |t: f64| {
                let (x, y) = if vertical { (0.005, t) } else { (t, 2.505) };
                cls.classify(x, y, hand).contains(band)
            };
            let (lo, hi) = if vertical { (0.0, 5.0) } else { (-2.0, 2.0) };
            let count = (0..((hi - lo) * 100.0) as i64)
                .filter(|&c| has(lo + (c as f64 + 0.5) / 100.0))
                .count();
            let centre = (0..((hi - lo) * 100.0) as i64)
                .map(|c| lo + (c as f64 + 0.5) / 100.0)
                .find(|&t| has(t))
                .map(|t| t + 0.12)
                .unwrap_or(f64::NAN);
            let width = edge(has, centre, hi) - edge(has, centre, lo);
            if count != 25 || (width - 0.25).abs() > 1e-9 {
                errors.push(format!(
                    "{band} ({hand}): {count} cells, measured width {width:.12}"
                ));
            }
            widths.push(width);
        }
    }
    let max_dev = widths.iter().map(|w| (w - 0.25).abs()).fold(0.0, f64::max);
    let mut details = errors.clone();
    details.truncate(10);
    verdict(
        errors.is_empty(),
        format!(
            "{cells} cell checks, 16 band widths within {max_dev:.1e} of 0.25 ft, {} errors",
            errors.len()
        ),
        details,
    )
}

fn random_pitches(seed: u64, n: usize) -> Dataset {
    let mut rng = rng::stream(seed, 0);
    let outcomes = [
        Outcome::CalledStrike,
        Outcome::CalledBall,
        Outcome::SwingingStrike,
        Outcome::Foul,
        Outcome::InPlay,
        Outcome::Bunt,
        Outcome::BuntFoul,
        Outcome::HitByPitch,
        Outcome::Other,
    ];
    let edges = [
        -1.15, -0.9, -0.65, 0.65, 0.9, 1.15, 1.25, 1.5, 1.75, 3.25, 3.5, 3.75,
    ];
    let pitches = (0..n)
        .map(|i| {
            let two_two = rng.random_bool(0.4);
            let mut x = rng.random_range(-1.4..1.4);
            let mut y = rng.random_range(1.0..4.0);
            if rng.random_bool(0.05) {
                x = edges[rng.random_range(0..6)];
            }
            if rng.random_bool(0.05) {
                y = edges[rng.random_range(6..12)];
            }
            Pitch {
                season: 2022 + rng.random_range(0..3),
                game_id: format!("G{}", i / 40),
                umpire_id: format!("U{}", rng.random_range(0..4)),
                pitcher_id: format!("P{}", rng.random_range(0..10)),
                batter_id: format!("B{}", rng.random_range(0..30)),
                batter_hand: if rng.random_bool(0.5) {
                    BatterHand::Right
                } else {
                    BatterHand::Left
                },
                pitch_type: PitchType::ALL[rng.random_range(0..PitchType::ALL.len())],
                x,
                y,
                balls: if two_two { 2 } else { rng.random_range(0..4) },
                strikes: if two_two { 2 } else { rng.random_range(0..3) },
                outcome: outcomes[rng.random_range(0..outcomes.len())],
            }
        })
        .collect();
    Dataset::new("random", pitches)
}

/// Band membership written out from the band definitions, for recounts.
fn in_band(band: ZoneBand, p: &Pitch) -> bool {
    let (xh, lo, hi, w) = (0.9, 1.5, 3.5, 0.25);
    let u = if p.batter_hand == BatterHand::Right {
        p.x
    } else {
        -p.x
    };
    let inside_x = p.x > -xh && p.x < xh;
    let inside_y = p.y > lo && p.y < hi;
    match band {
        ZoneBand::High1 => inside_x && p.y >= hi - w && p.y < hi,
        ZoneBand::High2 => inside_x && p.y >= hi && p.y < hi + w,
        ZoneBand::Low1 => inside_x && p.y > lo && p.y <= lo + w,
        ZoneBand::Low2 => inside_x && p.y > lo - w && p.y <= lo,
        ZoneBand::In1 => inside_y && u > -xh && u <= -xh + w,
        ZoneBand::In2 => inside_y && u > -xh - w && u <= -xh,
        ZoneBand::Out1 => inside_y && u >= xh - w && u < xh,
        ZoneBand::Out2 => inside_y && u >= xh && u < xh + w,
    }
}

fn in_label(label: BandLabel, p: &Pitch) -> bool {
    match label {
        BandLabel::Band(b) => in_band(b, p),
        BandLabel::Pooled(side) => side.bands().iter().any(|&b| in_band(b, p)),
    }
}

fn key(p: &Pitch, fields: &[GroupKeyField]) -> GroupKey {
    GroupKey {
        season: fields.contains(&GroupKeyField::Season).then_some(p.season),
        pitch_type: fields
            .contains(&GroupKeyField::PitchType)
            .then_some(p.pitch_type),
        batter_hand: fields
            .contains(&GroupKeyField::Hand)
            .then_some(p.batter_hand),
        umpire_id: fields
            .contains(&GroupKeyField::Umpire)
            .then(|| p.umpire_id.clone()),
    }
}

fn recount(
    d: &Dataset,
    label: BandLabel,
    fields: &[GroupKeyField],
    include: impl Fn(&Pitch) -> bool,
    success: impl Fn(&Pitch) -> bool,
) -> Vec<(GroupKey, u64, u64, f64)> {
    let mut cells: BTreeMap<GroupKey, (u64, u64)> = BTreeMap::new();
    for p in &d.pitches {
        if include(p) && in_label(label, p) {
            let c = cells.entry(key(p, fields)).or_default();
            c.0 += 1;
            c.1 += success(p) as u64;
        }
    }
    cells
        .into_iter()
        .map(|(g, (n, k))| (g, n, k, k as f64 / n as f64))
        .collect()
}

// 6. Analysis tables against linear-scan recounts.
fn analysis_oracles() -> Verdict {
    let cls = BandClassifier::default();
    let groupings: [&[GroupKeyField]; 5] = [
        &[],
        &[GroupKeyField::Season],
        &[
            GroupKeyField::Season,
            GroupKeyField::PitchType,
            GroupKeyField::Hand,
        ],
        &[GroupKeyField::Umpire],
        &[
            GroupKeyField::Umpire,
            GroupKeyField::Season,
            GroupKeyField::Hand,
        ],
    ];
    let labels: Vec<BandLabel> = ZoneBand::ALL
        .map(BandLabel::Band)
        .into_iter()
        .chain(BandSide::ALL.map(BandLabel::Pooled))
        .collect();
    let called = |p: &Pitch| matches!(p.outcome, Outcome::CalledStrike | Outcome::CalledBall);
    let attempt = |p: &Pitch| {
        matches!(
            p.outcome,
            Outcome::SwingingStrike
                | Outcome::Foul
                | Outcome::InPlay
                | Outcome::Bunt
                | Outcome::BuntFoul
        )
    };
    let mut mismatches = Vec::new();
    let mut tables = 0;
    for seed in 0..20 {
        let d = random_pitches(seed, 1000);
        for fields in groupings {
            for &label in &labels {
                let got = |rows: Vec<zonefit::RatioReport>| -> Vec<(GroupKey, u64, u64, f64)> {
                    rows.into_iter()
                        .map(|r| (r.group, r.n, r.k, r.ratio))
                        .collect()
                };
                let sr = got(strike_ratio(&d, &cls, label, fields));
                let sr_oracle = recount(&d, label, fields, called, |p| {
                    p.outcome == Outcome::CalledStrike
                });
                let ha = got(hit_attempt_ratio(&d, &cls, label, fields));
                let ha_oracle = recount(&d, label, fields, |_| true, attempt);
                if sr != sr_oracle {
                    mismatches.push(format!("seed {seed} strike_ratio {label} {fields:?}"));
                }
                if ha != ha_oracle {
                    mismatches.push(format!("seed {seed} hit_attempt_ratio {label} {fields:?}"));
                }
                tables += 2;
            }
        }
        for band in ZoneBand::ALL {
            let mut counts = [0u64; PitchType::ALL.len()];
            for p in d
                .pitches
                .iter()
                .filter(|p| p.balls == 2 && p.strikes == 2 && in_band(band, p))
            {
                counts[PitchType::ALL
                    .iter()
                    .position(|&t| t == p.pitch_type)
                    .unwrap()] += 1;
            }
            let total: u64 = counts.iter().sum();
            let t = decision_pitch_mix(&d, &cls, band).unwrap();
            let same = t.total == total
                && t.rows
                    .iter()
                    .zip(PitchType::ALL)
                    .zip(counts)
                    .all(|((r, ty), c)| {
                        r.pitch_type == ty && r.count == c && r.frequency == c as f64 / total as f64
                    });
            if !same {
                mismatches.push(format!("seed {seed} decision_pitch_mix {band}"));
            }
            tables += 1;
        }
    }
    let mut details = mismatches.clone();
    details.truncate(10);
    verdict(
        mismatches.is_empty(),
        format!(
            "{tables} tables on 20 datasets of 1000 pitches, {} mismatches",
            mismatches.len()
        ),
        details,
    )
}

fn run_cli(dir: &Path, args: &[&str]) -> (i32, Vec<u8>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_zonefit"))
        .args(args)
        .current_dir(dir)
        .env("ZONEFIT_THREADS", "0")
        .output()
        .expect("run zonefit");
    (out.status.code().unwrap_or(-1), out.stdout, out.stderr)
}

fn collect_files(root: &Path, dir: &Path, out: &mut BTreeMap<String, Vec<u8>>) {
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.is_dir() {
            collect_files(root, &path, out);
        } else {
            let rel = path
                .strip_prefix(root)
                .unwrap()
                .to_string_lossy()
                .into_owned();
            out.insert(rel, fs::read(&path).unwrap());
        }
    }
}

// 7. Every command twice, byte-identical outputs.
fn determinism() -> Verdict {
    let mut synth = SynthConfig::new(
        ZoneParams {
            beta: 8.0,
            ..truth()
        },
        4000,
        0,
    );
    synth.metadata.swing_share = 0.3;
    let synth_json = serde_json::to_string_pretty(&synth).unwrap();
    let rulebook_json = serde_json::to_string_pretty(&SynthConfig::rulebook(4000, 0)).unwrap();
    let commands: Vec<Vec<&str>> = vec![
        vec![
            "--seed",
            "7",
            "simulate",
            "synth.json",
            "--out",
            "pitches.csv",
        ],
        vec![
            "--seed",
            "8",
            "simulate",
            "rulebook.json",
            "--out",
            "rulebook.csv",
        ],
        vec!["validate", "pitches.csv"],
        vec![
            "--seed",
            "3",
            "fit",
            "pitches.csv",
            "--n-bootstrap",
            "20",
            "--out",
            "fit",
        ],
        vec!["contour", "fit/fit_2023.json", "--out", "contour"],
        vec![
            "compare",
            "fit/fit_2023.json",
            "rulebook.csv",
            "--out",
            "compare",
        ],
        vec![
            "zones",
            "pitches.csv",
            "--group-by",
            "season,pitch_type,hand",
            "--out",
            "zones",
        ],
        vec![
            "attempts",
            "pitches.csv",
            "--band",
            "Low2,High,In1",
            "--out",
            "attempts",
        ],
        vec!["mix", "pitches.csv", "--by-season", "--out", "mix"],
    ];
    let root = tempfile::tempdir().unwrap();
    let mut runs = Vec::new();
    for name in ["a", "b"] {
        let dir = root.path().join(name);
        fs::create_dir(&dir).unwrap();
        fs::write(dir.join("synth.json"), &synth_json).unwrap();
        fs::write(dir.join("rulebook.json"), &rulebook_json).unwrap();
        let results: Vec<_> = commands.iter().map(|args| run_cli(&dir, args)).collect();
        let mut files = BTreeMap::new();
        collect_files(&dir, &dir, &mut files);
        runs.push((results, files));
    }
    let mut problems = Vec::new();
    for (i, args) in commands.iter().enumerate() {
        let (a, b) = (&runs[0].0[i], &runs[1].0[i]);
        if a.0 != 0 {
            problems.push(format!(
                "`{}` exited {}: {}",
                args.join(" "),
                a.0,
                String::from_utf8_lossy(&a.2).trim()
            ));
        }
        if a != b {
            problems.push(format!(
                "`{}` exit status or console output differs",
                args.join(" ")
            ));
        }
    }
    let (fa, fb) = (&runs[0].1, &runs[1].1);
    if fa.keys().ne(fb.keys()) {
        problems.push("runs produced different file sets".into());
    }
    let differing: Vec<&String> = fa
        .iter()
        .filter(|(k, v)| fb.get(*k) != Some(*v))
        .map(|(k, _)| k)
        .collect();
    problems.extend(differing.iter().map(|k| format!("{k} differs")));
    verdict(
        problems.is_empty(),
        format!(
            "{} commands, {} output files compared",
            commands.len(),
            fa.len()
        ),
        problems,
    )
}

type Criterion = (u32, &'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 7] = [
        (1, "parameter recovery", parameter_recovery),
        (2, "rectilinearity ordering", rectilinearity_ordering),
        (3, "contour consistency", contour_consistency),
        (4, "interval oracles", interval_oracles),
        (5, "band correctness", band_correctness),
        (6, "analysis oracles", analysis_oracles),
        (7, "determinism", determinism),
    ];
    let only: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (id, name, check) in criteria {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let start = Instant::now();
        let o = check();
        println!(
            "{} criterion {id} ({name}): {} [{:.1} s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.summary,
            start.elapsed().as_secs_f64()
        );
        for d in &o.details {
            println!("    {d}");
        }
        std::io::stdout().flush().unwrap();
        failed += !o.pass as usize;
    }
    if only.is_none() || only == Some(8) {
        println!("SKIP criterion 8 (dataset-conditional): the released KBO pitch dataset is not available");
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
