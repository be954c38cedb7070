//! Subcommand implementations. Every command returns its main output as text
//! plus an exit status; `main` only does the writing.

use std::path::Path;

use potlab_core::condenser::{asymptotic_capacity, condenser_capacity, residual_study};
use potlab_core::geometry::SpherePoint;
use potlab_core::robin::{robin_capacity, robin_function, robin_function_extrapolated};
use potlab_distortion::runner::{default_workers, run_all};
use potlab_distortion::verify::Status;
use potlab_distortion::{corpus, Scenario, VerificationReport};

use crate::args::{Cli, Command, FieldArgs, Format};
use crate::error::{CliError, Result};
use crate::export::{export_field, Field};
use crate::input::{load_domain, read};
use crate::record::{to_csv, to_json_lines, Cell, Record};
use crate::study::Study;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub code: i32,
    /// Human-oriented summary for stderr.
    pub summary: Option<String>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome {
            text,
            code: EXIT_OK,
            summary: None,
        }
    }
}

fn render(records: &[Record], format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(to_json_lines(records)),
        Format::Csv => to_csv(records),
    }
}

fn export(field: Field, args: &FieldArgs) -> Result<()> {
    if let Some(path) = &args.field_csv {
        export_field(&field, args.grid, args.bbox, path)?;
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let h = cli.h;
    if !(h > 0.0 && h.is_finite()) {
        return Err(CliError::Usage(format!("--h must be positive, got {h}")));
    }
    let format = cli.format.unwrap_or(match cli.command {
        Command::Asymptotics { .. } => Format::Csv,
        _ => Format::Json,
    });
    match &cli.command {
        Command::Robin {
            domain,
            gamma,
            pole,
            richardson,
            field,
        } => {
            let file = load_domain(domain)?;
            let region = file.region(gamma.as_deref())?;
            let r = if *richardson {
                robin_function_extrapolated(&region, pole.0, h)?
            } else {
                robin_function(&region, pole.0, h)?
            };
            export(Field::Robin(&r), field)?;
            let rec = Record::new()
                .text("domain", file.id.clone())
                .text("gamma", gamma.clone().unwrap_or_else(|| "full".into()))
                .with("pole", Cell::Point(r.pole))
                .num("radius", r.radius)
                .num("capacity", r.capacity)
                .num("log_radius", r.log_radius())
                .num("h", r.h)
                .with(
                    "richardson_estimate",
                    r.richardson_estimate.map_or(Cell::Missing, Cell::Num),
                );
            Ok(Outcome::ok(render(&[rec], format)?))
        }
        Command::Green {
            domain,
            pole,
            at,
            field,
        } => {
            let file = load_domain(domain)?;
            let region = file.region(None)?;
            let r = robin_function(&region, pole.0, h)?;
            export(Field::Robin(&r), field)?;
            let base = |z: SpherePoint, g: f64| {
                Record::new()
                    .text("domain", file.id.clone())
                    .with("pole", Cell::Point(r.pole))
                    .with("z", Cell::Point(z))
                    .num("g", g)
                    .num("radius", r.radius)
                    .num("h", r.h)
            };
            let records = if at.is_empty() {
                vec![base(r.pole, f64::INFINITY)]
            } else {
                at.iter()
                    .map(|p| Ok(base(p.0, r.g(p.0)?)))
                    .collect::<Result<Vec<_>>>()?
            };
            Ok(Outcome::ok(render(&records, format)?))
        }
        Command::Capacity {
            domain,
            gamma,
            pole,
        } => {
            let file = load_domain(domain)?;
            let region = file.region(gamma.as_deref())?;
            let p = pole.map_or(SpherePoint::Infinity, |p| p.0);
            let cap = robin_capacity(&region, p, h)?;
            let rec = Record::new()
                .text("domain", file.id.clone())
                .text("gamma", gamma.clone().unwrap_or_else(|| "full".into()))
                .with("pole", Cell::Point(p))
                .num("capacity", cap)
                .num("radius", 1.0 / cap)
                .num("h", h);
            Ok(Outcome::ok(render(&[rec], format)?))
        }
        Command::Condenser { study, r, field } => {
            let s = Study::load(study)?;
            let r = r.or_else(|| s.r.first().copied()).ok_or_else(|| {
                CliError::Usage("no plate scale: pass --r or list r in the study file".into())
            })?;
            let res = condenser_capacity(&s.condenser(r), h)?;
            export(Field::Potential(&res.potential), field)?;
            let asym = if r < (-1.0f64).exp() {
                asymptotic_capacity(&s.plates, &s.robin_data(h)?, r)?
            } else {
                f64::NAN
            };
            let rec = Record::new()
                .text("study", s.id.clone())
                .num("r", r)
                .num("h", h)
                .num("capacity", res.capacity)
                .num("asymptotic", asym)
                .num("difference", res.capacity - asym);
            Ok(Outcome::ok(render(&[rec], format)?))
        }
        Command::Asymptotics { study, r, strict } => {
            let s = Study::load(study)?;
            let list = if r.is_empty() { s.r.clone() } else { r.clone() };
            let data = s.robin_data(h)?;
            let st = residual_study(&s.condenser(list[0]), &data, &list, h)?;
            let records: Vec<Record> = st
                .rows
                .iter()
                .map(|row| {
                    Record::new()
                        .num("r", row.r)
                        .num("direct_cap", row.direct)
                        .num("asym_cap", row.asymptotic)
                        .num("residual", row.residual)
                        .num("residual_times_log2r", row.residual_times_log2r)
                })
                .collect();
            Ok(Outcome {
                text: render(&records, format)?,
                code: if *strict && !st.pass { EXIT_FAILED } else { EXIT_OK },
                summary: Some(format!(
                    "{}: |residual·log²r| {} strictly decreasing",
                    s.id,
                    if st.pass { "is" } else { "is NOT" }
                )),
            })
        }
        Command::Oracle { name, args } => {
            let value = name.evaluate(args)?;
            let shown: Vec<String> = args.iter().map(|a| format!("{a}")).collect();
            let rec = Record::new()
                .text("oracle", name.name())
                .text("args", shown.join(" "))
                .num("value", value);
            Ok(Outcome::ok(render(&[rec], format)?))
        }
        Command::Verify {
            scenario,
            all,
            strict,
            budget,
        } => verify(scenario, *all, *strict, *budget, format),
        Command::Report { input } => report(input, format),
    }
}

/// A scenario file, or the name or id of a bundled scenario.
pub fn resolve_scenario(p: &Path) -> Result<Scenario> {
    if p.exists() {
        return Scenario::load(p).map_err(|e| CliError::Input {
            path: p.display().to_string(),
            message: e.to_string(),
        });
    }
    let name = p.to_string_lossy();
    corpus::find(&name).ok_or_else(|| CliError::Input {
        path: name.to_string(),
        message: "no such file or bundled scenario".into(),
    })
}

fn report_record(r: &VerificationReport) -> Record {
    Record::new()
        .text("id", r.id.clone())
        .text("kind", r.kind.name())
        .text("status", status_name(r.status))
        .num("lhs", r.lhs)
        .num("rhs", r.rhs)
        .num("margin", r.margin)
        .num("budget", r.budget)
        .num("h", r.h)
        .with("satisfied", Cell::Bool(r.satisfied))
        .with("equality", Cell::Bool(r.equality))
        .with(
            "hypothesis",
            r.hypothesis.clone().map_or(Cell::Missing, Cell::Text),
        )
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Holds => "holds",
        Status::Violated => "violated",
        Status::HypothesisFailed => "hypothesis-failed",
    }
}

fn verify(
    paths: &[std::path::PathBuf],
    all: bool,
    strict: bool,
    budget: Option<f64>,
    format: Format,
) -> Result<Outcome> {
    if !all && paths.is_empty() {
        return Err(CliError::Usage("verify needs --scenario FILE or --all".into()));
    }
    if let Some(b) = budget {
        if !(b >= 0.0 && b.is_finite()) {
            return Err(CliError::Usage(format!("--budget must be non-negative, got {b}")));
        }
    }
    let mut scenarios = if all { corpus::bundled()? } else { Vec::new() };
    for p in paths {
        scenarios.push(resolve_scenario(p)?);
    }
    let items = run_all(&scenarios, default_workers())?;

    let (mut holds, mut violated, mut failed, mut errors) = (0, 0, 0, 0);
    let mut json = String::new();
    let mut records = Vec::new();
    let mut messages = Vec::new();
    for item in items {
        match item.result {
            Ok(r) => {
                let r = match budget {
                    Some(b) if !r.exact => r.with_budget(b),
                    _ => r,
                };
                match r.status {
                    Status::Holds => holds += 1,
                    Status::Violated => violated += 1,
                    Status::HypothesisFailed => failed += 1,
                }
                json.push_str(&r.to_json());
                json.push('\n');
                records.push(report_record(&r));
            }
            Err(e) => {
                errors += 1;
                let rec = Record::new()
                    .text("id", item.id.clone())
                    .text("status", "error")
                    .text("error", e.to_string());
                json.push_str(&rec.to_json());
                json.push('\n');
                messages.push(format!("{}: {e}", item.id));
            }
        }
    }
    let text = match format {
        Format::Json => json,
        Format::Csv => to_csv(&records)?,
    };
    let code = if errors > 0 {
        EXIT_INPUT
    } else if violated > 0 || (strict && failed > 0) {
        EXIT_FAILED
    } else {
        EXIT_OK
    };
    let mut summary = format!(
        "{} scenario(s): {holds} hold, {violated} violated, {failed} hypothesis failed, {errors} error(s)",
        holds + violated + failed + errors
    );
    for m in messages {
        summary.push('\n');
        summary.push_str(&m);
    }
    Ok(Outcome {
        text,
        code,
        summary: Some(summary),
    })
}

fn report(input: &Path, format: Format) -> Result<Outcome> {
    let text = read(input)?;
    let mut rows = Vec::new();
    let (mut holds, mut violated, mut failed, mut errors, mut equality) = (0, 0, 0, 0, 0);
    let mut worst: Option<(f64, String)> = None;
    for (n, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let v: serde_json::Value = serde_json::from_str(line).map_err(|e| CliError::Input {
            path: input.display().to_string(),
            message: format!("line {}, column {}: {e}", n + 1, e.column()),
        })?;
        let id = v["id"].as_str().unwrap_or("").to_string();
        let status = v["status"].as_str().unwrap_or("error").to_string();
        match status.as_str() {
            "holds" => holds += 1,
            "violated" => violated += 1,
            "hypothesis-failed" => failed += 1,
            _ => errors += 1,
        }
        let eq = v["equality"].as_bool().unwrap_or(false);
        if eq {
            equality += 1;
        }
        let margin = v["margin"].as_f64().unwrap_or(f64::NAN);
        if margin.is_finite() && worst.as_ref().is_none_or(|(m, _)| margin < *m) {
            worst = Some((margin, id.clone()));
        }
        rows.push(
            Record::new()
                .text("id", id)
                .text("kind", v["kind"].as_str().unwrap_or(""))
                .text("status", status)
                .num("margin", margin)
                .num("budget", v["budget"].as_f64().unwrap_or(f64::NAN))
                .with("equality", Cell::Bool(eq)),
        );
    }
    let out = match format {
        Format::Csv => to_csv(&rows)?,
        Format::Json => {
            let (wm, wid) = worst.unwrap_or((f64::NAN, String::new()));
            Record::new()
                .with("total", Cell::Int(rows.len()))
                .with("holds", Cell::Int(holds))
                .with("violated", Cell::Int(violated))
                .with("hypothesis_failed", Cell::Int(failed))
                .with("errors", Cell::Int(errors))
                .with("equality", Cell::Int(equality))
                .num("worst_margin", wm)
                .text("worst_id", wid)
                .to_json()
                + "\n"
        }
    };
    Ok(Outcome {
        text: out,
        code: if violated > 0 || errors > 0 { EXIT_FAILED } else { EXIT_OK },
        summary: None,
    })
}
