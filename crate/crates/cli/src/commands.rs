//! One function per subcommand.

use std::path::PathBuf;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use chainsynth::distsim::{self, ControlMode, TimelineConfig};
use chainsynth::quantum::{self, MeasurementSettings, Observable, SettingsVariant};
use chainsynth::strategy::{enumerate_deterministic, Strategy};
use chainsynth::{overlay, BiphotonState, Chain};

use crate::output::{csv_bytes, fmt9, write_payload, CliError, Report};
use crate::{Command, FormatArg, GeometryArgs, ModeArg, SettingsArg};

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Chsh { settings } => cmd_chsh(settings),
        Command::Bound => cmd_bound(),
        Command::Exact { strategy } => cmd_exact(&strategy),
        Command::Simulate {
            strategy,
            steps,
            seed,
            out,
            format,
            dump_chains,
        } => cmd_simulate(&strategy, steps, seed, out, format, dump_chains),
        Command::Timeline {
            mode,
            strategy,
            geometry,
            steps,
            seed,
            out,
            format,
        } => cmd_timeline(mode, strategy, geometry, steps, seed, out, format),
        Command::Compare {
            geometry,
            steps,
            seed,
        } => cmd_compare(geometry, steps, seed),
        Command::Sweep {
            from,
            to,
            points,
            out,
        } => cmd_sweep(from, to, points, out),
        Command::Overlay { chain1, chain2 } => cmd_overlay(&chain1, &chain2),
    }
}

fn warn_paper_verbatim() {
    eprintln!(
        "note: paper-verbatim settings yield S = -2*sqrt(2) on |Phi+>; \
         see README.md, section \"Measurement settings variants\", for the sign analysis"
    );
}

fn warn_if_paper_verbatim(strategy: &Strategy) {
    if let Strategy::Quantum(q) = strategy {
        if q.settings().variant() == SettingsVariant::PaperVerbatim {
            warn_paper_verbatim();
        }
    }
}

fn parse_strategy(spec: &str) -> Result<Strategy, CliError> {
    let s = Strategy::parse(spec)?;
    warn_if_paper_verbatim(&s);
    Ok(s)
}

fn require_steps(steps: u64) -> Result<usize, CliError> {
    if steps < 1 {
        return Err(CliError::usage("steps must be ≥ 1"));
    }
    Ok(steps as usize)
}

fn cmd_chsh(settings: SettingsArg) -> Result<(), CliError> {
    let settings = match settings {
        SettingsArg::Corrected => MeasurementSettings::corrected(),
        SettingsArg::PaperVerbatim => {
            warn_paper_verbatim();
            MeasurementSettings::paper_verbatim()
        }
    };
    let s = quantum::chsh(&BiphotonState::phi_plus(), &settings);
    println!("{}", fmt9(s));
    Ok(())
}

fn cmd_bound() -> Result<(), CliError> {
    let table = enumerate_deterministic();
    println!("{:<5} {:<10} {:>12} {:>12}", "index", "strategy", "chsh_S", "exact_noncr");
    for (i, (d, v)) in table.iter().enumerate() {
        println!(
            "{:<5} {:<10} {:>12} {:>12}",
            i,
            d.spec_string(),
            fmt9(v.chsh_s),
            fmt9(v.exact_noncr)
        );
    }
    let max = table.iter().map(|(_, v)| v.exact_noncr).fold(0.0, f64::max);
    let min = table.iter().map(|(_, v)| v.exact_noncr).fold(1.0, f64::min);
    println!("max exact_noncr: {}", fmt9(max));
    println!("min exact_noncr: {}", fmt9(min));
    Ok(())
}

fn cmd_exact(spec: &str) -> Result<(), CliError> {
    let strategy = parse_strategy(spec)?;
    let v = strategy.exact_value();
    println!("strategy: {strategy}");
    println!("exact_noncr: {}", fmt9(v.exact_noncr));
    println!("chsh_S: {}", fmt9(v.chsh_s));
    Ok(())
}

fn chain_rows(chains: &(Chain, Chain)) -> Vec<Vec<String>> {
    chains
        .0
        .blocks()
        .iter()
        .zip(chains.1.blocks())
        .enumerate()
        .map(|(step, (&(c1, s1), &(c2, s2)))| {
            let cr = chainsynth::criticality(&chainsynth::SegmentPair::new(c1, c2, s1, s2));
            vec![
                step.to_string(),
                c1.to_string(),
                c2.to_string(),
                s1.sign().to_string(),
                s2.sign().to_string(),
                cr.to_string(),
            ]
        })
        .collect()
}

fn dump_chain_files(prefix: &std::path::Path, chains: &(Chain, Chain)) -> Result<(), CliError> {
    for (suffix, chain) in [("chain1", &chains.0), ("chain2", &chains.1)] {
        let mut path = prefix.as_os_str().to_owned();
        path.push(format!(".{suffix}.txt"));
        let path = PathBuf::from(path);
        std::fs::write(&path, chain.to_text()).map_err(|e| CliError::io(&path, e))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_simulate(
    spec: &str,
    steps: u64,
    seed: u64,
    out: Option<PathBuf>,
    format: FormatArg,
    dump_chains: Option<PathBuf>,
) -> Result<(), CliError> {
    let steps = require_steps(steps)?;
    let strategy = parse_strategy(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chains = strategy.run_assembly(steps, &mut rng);
    let report = overlay(&chains.0, &chains.1)?;
    let mean = report.noncr_fraction();
    let payload = match format {
        FormatArg::Csv => csv_bytes(
            &["step", "type1", "type2", "s1", "s2", "cr"],
            &chain_rows(&chains),
        ),
        FormatArg::Json => Report {
            strategy: strategy.to_string(),
            steps: steps as u64,
            seed,
            noncr_fraction: mean,
            stderr: (mean * (1.0 - mean) / steps as f64).sqrt(),
            chsh_s: Some(strategy.exact_value().chsh_s),
            makespan_s: None,
        }
        .to_json()
        .into_bytes(),
    };
    write_payload(out.as_ref(), &payload)?;
    if let Some(prefix) = dump_chains {
        dump_chain_files(&prefix, &chains)?;
    }
    Ok(())
}

fn build_config(geometry: &GeometryArgs, steps: usize) -> Result<TimelineConfig, CliError> {
    let config = TimelineConfig {
        d1: geometry.d1,
        d2: geometry.d2,
        d12: geometry.d12,
        signal_speed: geometry.signal_speed,
        cadence: geometry.cadence,
        steps,
    };
    config.validate()?;
    Ok(config)
}

fn build_mode(mode: ModeArg, strategy: Option<String>) -> Result<ControlMode, CliError> {
    match mode {
        ModeArg::OneWayClassical => {
            let spec = strategy.unwrap_or_else(|| "det:++++".to_string());
            Ok(ControlMode::OneWayClassical(parse_strategy(&spec)?))
        }
        ModeArg::OneWayQuantum => {
            let spec = strategy.unwrap_or_else(|| "quantum:corrected".to_string());
            Ok(ControlMode::OneWayQuantum(parse_strategy(&spec)?))
        }
        ModeArg::TwoWayFeedback => {
            if strategy.is_some() {
                return Err(CliError::usage("two-way-feedback takes no --strategy"));
            }
            Ok(ControlMode::TwoWayFeedback)
        }
    }
}

fn cmd_timeline(
    mode: ModeArg,
    strategy: Option<String>,
    geometry: GeometryArgs,
    steps: u64,
    seed: u64,
    out: Option<PathBuf>,
    format: FormatArg,
) -> Result<(), CliError> {
    let steps = require_steps(steps)?;
    let config = build_config(&geometry, steps)?;
    let mode = build_mode(mode, strategy)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let result = distsim::run_timeline(&config, &mode, &mut rng)?;
    let payload = match format {
        FormatArg::Csv => {
            let events = distsim::event_log(&config, &mode, &result.chains);
            let rows: Vec<Vec<String>> = events
                .iter()
                .map(|e| {
                    vec![
                        e.step.to_string(),
                        fmt9(e.emit_time),
                        fmt9(e.arrive1_time),
                        fmt9(e.arrive2_time),
                        e.type1.to_string(),
                        e.type2.to_string(),
                        e.s1.to_string(),
                        e.s2.to_string(),
                        e.cr.to_string(),
                    ]
                })
                .collect();
            csv_bytes(
                &[
                    "step",
                    "emit_time",
                    "arrive1_time",
                    "arrive2_time",
                    "type1",
                    "type2",
                    "s1",
                    "s2",
                    "cr",
                ],
                &rows,
            )
        }
        FormatArg::Json => {
            let report = result.report.expect("steps >= 1");
            let mean = report.noncr_fraction();
            let (label, chsh_s) = match &mode {
                ControlMode::OneWayClassical(s) | ControlMode::OneWayQuantum(s) => {
                    (s.to_string(), Some(s.exact_value().chsh_s))
                }
                ControlMode::TwoWayFeedback => ("two-way-feedback".to_string(), None),
            };
            Report {
                strategy: label,
                steps: steps as u64,
                seed,
                noncr_fraction: mean,
                stderr: (mean * (1.0 - mean) / steps as f64).sqrt(),
                chsh_s,
                makespan_s: Some(result.makespan_s),
            }
            .to_json()
            .into_bytes()
        }
    };
    write_payload(out.as_ref(), &payload)
}

fn cmd_compare(geometry: GeometryArgs, steps: u64, seed: u64) -> Result<(), CliError> {
    let config = build_config(&geometry, steps as usize)?;
    let report = distsim::compare_modes(&config, seed)?;
    println!(
        "{:<18} {:<18} {:>12} {:>15} {:>16}",
        "mode", "strategy", "exact_noncr", "measured_noncr", "makespan_s"
    );
    for row in &report.rows {
        println!(
            "{:<18} {:<18} {:>12} {:>15} {:>16}",
            row.mode,
            row.strategy.as_deref().unwrap_or("-"),
            fmt9(row.exact_noncr),
            row.measured_noncr
                .map(fmt9)
                .unwrap_or_else(|| "undefined".to_string()),
            fmt9(row.makespan_s)
        );
    }
    println!("quality ratio (quantum/classical): {}", fmt9(report.quality_ratio));
    Ok(())
}

/// Site-2 observables for the sweep family: a2 = cos t * sx - sin t * sz,
/// b2 = cos t * sx + sin t * sz; t = pi/4 recovers the corrected settings.
fn sweep_observables(theta: f64) -> (Observable, Observable) {
    let a2 = Observable::from_bloch([theta.cos(), 0.0, -theta.sin()])
        .expect("cos/sin Bloch vector is unit");
    let b2 = Observable::from_bloch([theta.cos(), 0.0, theta.sin()])
        .expect("cos/sin Bloch vector is unit");
    (a2, b2)
}

fn cmd_sweep(from: f64, to: f64, points: u64, out: Option<PathBuf>) -> Result<(), CliError> {
    if points < 1 {
        return Err(CliError::usage("points must be ≥ 1"));
    }
    if !from.is_finite() || !to.is_finite() {
        return Err(CliError::usage("angles must be finite"));
    }
    let state = BiphotonState::phi_plus();
    let a1 = Observable::sigma_x();
    let b1 = Observable::sigma_z();
    let mut rows = Vec::with_capacity(points as usize);
    for i in 0..points {
        let theta = if points == 1 {
            from
        } else {
            from + (to - from) * i as f64 / (points - 1) as f64
        };
        let (a2, b2) = sweep_observables(theta);
        let s = quantum::chsh_observables(&state, &a1, &b1, &a2, &b2);
        let noncr = (1.0 + s / 4.0) / 2.0;
        rows.push(vec![fmt9(theta), fmt9(s), fmt9(noncr)]);
    }
    let payload = csv_bytes(&["theta", "chsh_S", "noncr"], &rows);
    write_payload(out.as_ref(), &payload)
}

fn cmd_overlay(chain1: &PathBuf, chain2: &PathBuf) -> Result<(), CliError> {
    let read = |path: &PathBuf| -> Result<Chain, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Ok(Chain::parse(&text)?)
    };
    let c1 = read(chain1)?;
    let c2 = read(chain2)?;
    let report = overlay(&c1, &c2)?;
    println!("length: {}", report.length());
    println!("noncritical_count: {}", report.noncritical_count());
    println!("cr_sum: {}", report.cr_sum());
    println!("noncr_fraction: {}", fmt9(report.noncr_fraction()));
    Ok(())
}
