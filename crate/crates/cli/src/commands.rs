use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use rga_core::audit::temperature_scenario_for;
use rga_core::fixtures::{self, FixtureData};
use rga_core::pairing::{FlagKind, PairedLoop};
use rga_core::tf::{self, TransferMatrix};
use rga_core::{
    audit_with, fuzz, recommend, rga_with, AuditOptions, AuditVerdict, Error, FuzzReport,
    GainMatrix, InverseMethod, Pair, PairingReport, PairingRules, RgaOptions, RgaResult,
    UnitScenario,
};
use serde::Serialize;

use crate::cli::{
    AuditArgs, FixturesCommand, MethodChoice, NumericArgs, OutputFormat, PairArgs, ParseArgs,
    RgaArgs, RuleArgs,
};
use crate::error::{CliError, Result};
use crate::input::{self, Loaded};
use crate::report::{self, input_label, output_label, ReportDocument};

const PROPERTY_TOL: f64 = 1e-8;

fn load(args: &crate::cli::InputArgs) -> Result<Loaded> {
    input::load(args.path.as_ref(), args.fixture.as_deref(), args.input_format)
}

fn rga_options(numeric: &NumericArgs) -> RgaOptions {
    RgaOptions {
        rank_tol: numeric.rank_tol,
        ..Default::default()
    }
}

#[derive(Debug, Serialize)]
struct Skipped {
    method: InverseMethod,
    reason: String,
}

/// Methods to run; `all` drops EXACT when the plant is not square and
/// nonsingular.
fn run_methods(
    g: &GainMatrix,
    choice: MethodChoice,
    opts: &RgaOptions,
) -> Result<(Vec<RgaResult>, Vec<Skipped>)> {
    let (m, n) = g.matrix.shape();
    let single = |method| -> Result<Vec<RgaResult>> {
        if method == InverseMethod::Exact && m != n {
            return Err(CliError::Usage(format!(
                "the exact method needs a square plant, this one is {m}x{n}"
            )));
        }
        Ok(vec![rga_with(&g.matrix, method, opts)?])
    };
    match choice {
        MethodChoice::Mp => Ok((single(InverseMethod::Mp)?, Vec::new())),
        MethodChoice::Uc => Ok((single(InverseMethod::Uc)?, Vec::new())),
        MethodChoice::Exact => Ok((single(InverseMethod::Exact)?, Vec::new())),
        MethodChoice::All => {
            let mut done = Vec::new();
            let mut skipped = Vec::new();
            for method in InverseMethod::ALL {
                match rga_with(&g.matrix, method, opts) {
                    Ok(r) => done.push(r),
                    Err(Error::MethodMismatch(reason)) if method == InverseMethod::Exact => {
                        skipped.push(Skipped { method, reason })
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            Ok((done, skipped))
        }
    }
}

fn notes_for(loaded: &Loaded, skipped: &[Skipped]) -> Vec<String> {
    let mut notes: Vec<String> = loaded.fixture_note.iter().cloned().collect();
    for s in skipped {
        notes.push(format!("{} skipped: {}", s.method, s.reason));
    }
    notes
}

#[derive(Debug, Serialize)]
struct MethodRga {
    #[serde(flatten)]
    result: RgaResult,
    property_violations: Vec<String>,
}

#[derive(Debug, Serialize)]
struct RgaParams {
    method: MethodChoice,
    rank_tol: Option<f64>,
}

#[derive(Debug, Serialize)]
struct RgaResults {
    plant: GainMatrix,
    methods: Vec<MethodRga>,
    skipped: Vec<Skipped>,
}

pub fn rga(args: &RgaArgs) -> Result<String> {
    let loaded = load(&args.input)?;
    let g = &loaded.gain;
    if args.output.format == OutputFormat::Csv && args.method == MethodChoice::All {
        return Err(CliError::Usage(
            "csv output holds a single matrix; choose --method mp, uc or exact".into(),
        ));
    }
    let (results, skipped) = run_methods(g, args.method, &rga_options(&args.numeric))?;
    match args.output.format {
        OutputFormat::Csv => {
            let r = &results[0];
            report::matrix_csv(&r.lambda, g, &[format!("{} relative gain array", r.method)])
        }
        OutputFormat::Json => {
            let notes = notes_for(&loaded, &skipped);
            let methods = results
                .into_iter()
                .map(|r| MethodRga {
                    property_violations: r.property_violations(PROPERTY_TOL),
                    result: r,
                })
                .collect();
            let mut doc = ReportDocument::new(
                "rga",
                Some(loaded.info.clone()),
                RgaParams {
                    method: args.method,
                    rank_tol: args.numeric.rank_tol,
                },
                RgaResults {
                    plant: g.clone(),
                    methods,
                    skipped,
                },
            );
            doc.notes = notes;
            Ok(doc.to_json())
        }
        OutputFormat::Table => {
            let prec = report::precision()?;
            let mut out = String::new();
            for r in &results {
                let _ = writeln!(out, "{}-RGA", r.method);
                out.push_str(&report::matrix_table(&r.lambda, g, prec));
                let _ = writeln!(out, "row sums     {}", report::list(&r.row_sums, prec));
                let _ = writeln!(out, "column sums  {}", report::list(&r.col_sums, prec));
                let _ = writeln!(out, "total {:.prec$}, rank {}", r.total_sum, r.rank);
                for v in r.property_violations(PROPERTY_TOL) {
                    let _ = writeln!(out, "warning: {v}");
                }
                out.push('\n');
            }
            for note in notes_for(&loaded, &skipped) {
                let _ = writeln!(out, "note: {note}");
            }
            Ok(out)
        }
    }
}

fn resolve_input(g: &GainMatrix, token: &str) -> Result<usize> {
    let n = g.matrix.cols();
    if let Some(labels) = &g.col_labels {
        if let Some(j) = labels.iter().position(|l| l == token) {
            return Ok(j);
        }
    }
    match token.parse::<usize>() {
        Ok(k) if (1..=n).contains(&k) => Ok(k - 1),
        _ => Err(CliError::Usage(format!(
            "--require-input '{token}' is neither an input label nor an index in 1..={n}"
        ))),
    }
}

fn pairing_rules(args: &RuleArgs, g: &GainMatrix) -> Result<PairingRules> {
    let mut required = args
        .require_input
        .iter()
        .map(|t| resolve_input(g, t))
        .collect::<Result<Vec<_>>>()?;
    required.sort_unstable();
    required.dedup();
    let rules = PairingRules {
        forbid_nonpositive: !args.allow_nonpositive,
        large_lambda_warn_threshold: args.large_lambda,
        infeasible_penalty: args.penalty,
        tie_epsilon: args.tie_epsilon,
        required_inputs: required,
    };
    rules.validate()?;
    Ok(rules)
}

fn pair_name(g: &GainMatrix, output: usize, input: usize) -> String {
    format!("{}-{}", output_label(g, output), input_label(g, input))
}

fn loops_text(g: &GainMatrix, loops: &[PairedLoop]) -> String {
    let names: Vec<String> = loops.iter().map(|p| pair_name(g, p.output, p.input)).collect();
    format!("{{{}}}", names.join(", "))
}

fn pairs_text(g: &GainMatrix, pairs: &[Pair]) -> String {
    let names: Vec<String> = pairs.iter().map(|p| pair_name(g, p.output, p.input)).collect();
    format!("{{{}}}", names.join(", "))
}

fn flag_text(kind: FlagKind) -> &'static str {
    match kind {
        FlagKind::NegativeForced => "negative-forced",
        FlagKind::LargeLambda => "large-lambda",
        FlagKind::NearTie => "near-tie",
    }
}

fn pairing_table(out: &mut String, g: &GainMatrix, p: &PairingReport, prec: usize) {
    let _ = writeln!(out, "recommended pairing (total cost {:.prec$}):", p.total_cost);
    for l in &p.assignments {
        let flags: Vec<&str> = p
            .flags_for(Pair::new(l.output, l.input))
            .into_iter()
            .map(flag_text)
            .collect();
        let tail = if flags.is_empty() {
            String::new()
        } else {
            format!("  [{}]", flags.join(", "))
        };
        let _ = writeln!(
            out,
            "  {} <- {}  lambda {:.prec$}  cost {:.prec$}{tail}",
            output_label(g, l.output),
            input_label(g, l.input),
            l.lambda,
            l.cost
        );
    }
    if !p.unmatched_inputs.is_empty() {
        let names: Vec<String> = p.unmatched_inputs.iter().map(|&j| input_label(g, j)).collect();
        let _ = writeln!(out, "unpaired inputs: {}", names.join(", "));
    }
    if !p.unmatched_outputs.is_empty() {
        let names: Vec<String> = p.unmatched_outputs.iter().map(|&i| output_label(g, i)).collect();
        let _ = writeln!(out, "unpaired outputs: {}", names.join(", "));
    }
    let _ = writeln!(out, "ranked pairings:");
    for alt in &p.alternatives {
        let _ = writeln!(
            out,
            "  {}. cost {:.prec$}  {}",
            alt.rank,
            alt.total_cost,
            loops_text(g, &alt.pairs)
        );
    }
    match p.runner_up_gap {
        Some(gap) => {
            let verdict = if p.near_tie { "near tie" } else { "clear" };
            let _ = writeln!(out, "runner-up gap {gap:.prec$} ({verdict})");
        }
        None => {
            let _ = writeln!(out, "no alternative pairing exists");
        }
    }
    if let Some(u) = &p.most_confident_unchosen {
        let _ = writeln!(
            out,
            "most confident gain left out: {} <- {}  lambda {:.prec$}",
            output_label(g, u.output),
            input_label(g, u.input),
            u.lambda
        );
    }
}

#[derive(Debug, Serialize)]
struct PairParams {
    method: MethodChoice,
    k: usize,
    rules: PairingRules,
    rank_tol: Option<f64>,
}

#[derive(Debug, Serialize)]
struct MethodPairing {
    method: InverseMethod,
    rga: RgaResult,
    pairing: PairingReport,
}

#[derive(Debug, Serialize)]
struct PairResults {
    plant: GainMatrix,
    methods: Vec<MethodPairing>,
    skipped: Vec<Skipped>,
}

pub fn pair(args: &PairArgs) -> Result<String> {
    let loaded = load(&args.input)?;
    let g = &loaded.gain;
    if args.k == 0 {
        return Err(CliError::Usage("-k must be at least 1".into()));
    }
    let rules = pairing_rules(&args.rules, g)?;
    let (results, skipped) = run_methods(g, args.method, &rga_options(&args.numeric))?;
    let methods = results
        .into_iter()
        .map(|r| {
            Ok(MethodPairing {
                method: r.method,
                pairing: recommend(&r.lambda, &rules, args.k)?,
                rga: r,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    match args.output.format {
        OutputFormat::Json => {
            let mut doc = ReportDocument::new(
                "pair",
                Some(loaded.info.clone()),
                PairParams {
                    method: args.method,
                    k: args.k,
                    rules,
                    rank_tol: args.numeric.rank_tol,
                },
                PairResults {
                    plant: g.clone(),
                    methods,
                    skipped: Vec::new(),
                },
            );
            doc.notes = notes_for(&loaded, &skipped);
            doc.results.skipped = skipped;
            Ok(doc.to_json())
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| CliError::Usage(e.to_string());
            w.write_record(["method", "rank", "total_cost", "output", "input", "lambda", "cost"])
                .map_err(io)?;
            for m in &methods {
                for alt in &m.pairing.alternatives {
                    for l in &alt.pairs {
                        w.write_record([
                            m.method.to_string(),
                            alt.rank.to_string(),
                            alt.total_cost.to_string(),
                            output_label(g, l.output),
                            input_label(g, l.input),
                            l.lambda.to_string(),
                            l.cost.to_string(),
                        ])
                        .map_err(io)?;
                    }
                }
            }
            let body = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(String::from_utf8(body).expect("csv output is UTF-8"))
        }
        OutputFormat::Table => {
            let prec = report::precision()?;
            let mut out = String::new();
            for m in &methods {
                let _ = writeln!(out, "{}-RGA", m.method);
                out.push_str(&report::matrix_table(&m.rga.lambda, g, prec));
                pairing_table(&mut out, g, &m.pairing, prec);
                out.push('\n');
            }
            for note in notes_for(&loaded, &skipped) {
                let _ = writeln!(out, "note: {note}");
            }
            Ok(out)
        }
    }
}

fn builtin_scenario(name: &str, g: &GainMatrix) -> Result<Option<UnitScenario>> {
    let (m, n) = g.matrix.shape();
    Ok(match name {
        "identity" => Some(UnitScenario::identity(m, n)),
        "seconds-to-minutes" => {
            let mut cols = vec![1.0; n];
            cols[0] = 1.0 / 60.0;
            Some(UnitScenario::new(
                "seconds-to-minutes",
                vec![1.0; m],
                cols,
                "first input switches from a per-second to a per-minute basis",
            )?)
        }
        "temperature-decimation" => Some(temperature_scenario_for(g, 10.0)?),
        _ => None,
    })
}

fn load_scenario(spec: &str, g: &GainMatrix) -> Result<UnitScenario> {
    if let Some(s) = builtin_scenario(spec, g)? {
        return Ok(s);
    }
    let path = Path::new(spec);
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let s: UnitScenario = serde_json::from_str(&text).map_err(|e| CliError::Format {
        path: spec.to_string(),
        message: e.to_string(),
    })?;
    s.validate()?;
    Ok(s)
}

#[derive(Debug, Serialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
enum AuditParams {
    Scenario {
        scenario: String,
        k: usize,
        rules: PairingRules,
        rank_tol: Option<f64>,
    },
    Fuzz {
        trials: usize,
        seed: u64,
        factor_range: (f64, f64),
        rules: PairingRules,
        rank_tol: Option<f64>,
    },
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
enum AuditResults {
    Scenario {
        plant: GainMatrix,
        scenario: UnitScenario,
        verdicts: Vec<AuditVerdict>,
    },
    Fuzz {
        plant: GainMatrix,
        fuzz: FuzzReport,
    },
}

pub fn audit(args: &AuditArgs) -> Result<String> {
    let loaded = load(&args.input)?;
    let g = &loaded.gain;
    if args.output.format == OutputFormat::Csv {
        return Err(CliError::Usage("audit reports support table or json output".into()));
    }
    if args.k == 0 {
        return Err(CliError::Usage("-k must be at least 1".into()));
    }
    let rules = pairing_rules(&args.rules, g)?;
    let rank_tol = args.numeric.rank_tol;
    let opts = AuditOptions {
        k: args.k,
        rga: rga_options(&args.numeric),
        ..Default::default()
    };
    let (params, results) = if let Some(trials) = args.fuzz {
        if rank_tol.is_some() {
            return Err(CliError::Usage("--rank-tol is not used by --fuzz".into()));
        }
        let range = (args.factor_min, args.factor_max);
        let report = fuzz(g, trials, args.seed, range, &rules)?;
        (
            AuditParams::Fuzz {
                trials,
                seed: args.seed,
                factor_range: range,
                rules,
                rank_tol,
            },
            AuditResults::Fuzz {
                plant: g.clone(),
                fuzz: report,
            },
        )
    } else {
        let (label, scenario) = match (&args.scenario, args.temperature_factor) {
            (Some(spec), None) => (spec.clone(), load_scenario(spec, g)?),
            (None, Some(f)) => (
                format!("temperature-factor {f}"),
                temperature_scenario_for(g, f)?,
            ),
            _ => unreachable!("clap enforces exactly one audit mode"),
        };
        let verdicts = [InverseMethod::Mp, InverseMethod::Uc]
            .iter()
            .map(|&m| audit_with(g, &scenario, m, &rules, &opts))
            .collect::<rga_core::Result<Vec<_>>>()?;
        (
            AuditParams::Scenario {
                scenario: label,
                k: args.k,
                rules,
                rank_tol,
            },
            AuditResults::Scenario {
                plant: g.clone(),
                scenario,
                verdicts,
            },
        )
    };
    match args.output.format {
        OutputFormat::Json => {
            let mut doc = ReportDocument::new("audit", Some(loaded.info.clone()), params, results);
            doc.notes = notes_for(&loaded, &[]);
            Ok(doc.to_json())
        }
        _ => {
            let prec = report::precision()?;
            let mut out = String::new();
            match &results {
                AuditResults::Scenario {
                    scenario, verdicts, ..
                } => {
                    let _ = writeln!(out, "scenario: {}", scenario.name);
                    if !scenario.description.is_empty() {
                        let _ = writeln!(out, "  {}", scenario.description);
                    }
                    let _ = writeln!(out, "  output factors {}", report::list(&scenario.row_factors, prec));
                    let _ = writeln!(out, "  input factors  {}", report::list(&scenario.col_factors, prec));
                    for v in verdicts {
                        audit_table(&mut out, g, v, prec);
                    }
                }
                AuditResults::Fuzz { fuzz, .. } => {
                    let _ = writeln!(
                        out,
                        "{} random rescalings, seed {}, factors in [{}, {}]",
                        fuzz.trials, fuzz.seed, fuzz.factor_range.0, fuzz.factor_range.1
                    );
                    for s in &fuzz.methods {
                        let _ = writeln!(
                            out,
                            "{}: pairing changed in {} trials ({:.prec$}), max |delta lambda| {:.3e}",
                            s.method, s.pairing_changed_trials, s.pairing_changed_fraction, s.max_entry_delta
                        );
                    }
                }
            }
            for note in notes_for(&loaded, &[]) {
                let _ = writeln!(out, "note: {note}");
            }
            Ok(out)
        }
    }
}

fn audit_table(out: &mut String, g: &GainMatrix, v: &AuditVerdict, prec: usize) {
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "{}: pairing {}, relative gains {} (max |delta lambda| {:.3e})",
        v.method,
        if v.pairing_changed { "CHANGED" } else { "unchanged" },
        if v.rga_changed { "changed" } else { "unchanged" },
        v.max_entry_delta
    );
    let _ = writeln!(out, "  baseline  {}", pairs_text(g, &v.baseline_pairing));
    let _ = writeln!(out, "  scenario  {}", pairs_text(g, &v.scenario_pairing));
    match v.scenario_matches_baseline_rank {
        Some(r) => {
            let _ = writeln!(out, "  scenario pairing is baseline option {}", r + 1);
        }
        None => {
            let _ = writeln!(
                out,
                "  scenario pairing matches none of the {} ranked baseline options",
                v.baseline_alternatives.len()
            );
        }
    }
    if v.rga_changed {
        let _ = writeln!(out, "  relative gains after the change:");
        for line in report::matrix_table(&v.scenario_lambda, g, prec).lines() {
            let _ = writeln!(out, "    {line}");
        }
    }
}

fn parse_complex(text: &str) -> Result<Complex64> {
    let bad = || CliError::Usage(format!("--at expects RE or RE,IM, got '{text}'"));
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let num = |s: &str| s.parse::<f64>().map_err(|_| bad());
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(bad()),
    }
}

#[derive(Debug, Serialize)]
struct Evaluation {
    s: [f64; 2],
    values: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Serialize)]
struct ParseParams {
    at: Option<[f64; 2]>,
}

#[derive(Debug, Serialize)]
struct ParseResults {
    transfer: TransferMatrix,
    canonical: String,
    steady_state: GainMatrix,
    #[serde(skip_serializing_if = "Option::is_none")]
    evaluation: Option<Evaluation>,
}

pub fn parse(args: &ParseArgs) -> Result<String> {
    let loaded = load(&args.input)?;
    let tm = loaded.transfer.clone().ok_or_else(|| {
        CliError::Usage("parse needs transfer-function input (.tf file or --input-format tf)".into())
    })?;
    let at = args.at.as_deref().map(parse_complex).transpose()?;
    let evaluation = match at {
        Some(s) => Some(Evaluation {
            s: [s.re, s.im],
            values: tf::evaluate(&tm, s)?
                .into_iter()
                .map(|row| row.into_iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }),
        None => None,
    };
    let results = ParseResults {
        canonical: tm.to_dsl(),
        transfer: tm,
        steady_state: loaded.gain.clone(),
        evaluation,
    };
    match args.output.format {
        OutputFormat::Json => {
            let mut doc = ReportDocument::new(
                "parse",
                Some(loaded.info.clone()),
                ParseParams {
                    at: at.map(|s| [s.re, s.im]),
                },
                results,
            );
            doc.notes = notes_for(&loaded, &[]);
            Ok(doc.to_json())
        }
        OutputFormat::Csv => report::matrix_csv(
            &results.steady_state.matrix,
            &results.steady_state,
            &["steady-state gains".to_string()],
        ),
        OutputFormat::Table => {
            let prec = report::precision()?;
            let mut out = results.canonical.clone();
            let _ = writeln!(out, "\nsteady-state gains G(0):");
            out.push_str(&report::matrix_table(
                &results.steady_state.matrix,
                &results.steady_state,
                prec,
            ));
            if let Some(e) = &results.evaluation {
                let _ = writeln!(out, "\nG(s) at s = {}{:+}i:", e.s[0], e.s[1]);
                for row in &e.values {
                    let cells: Vec<String> = row
                        .iter()
                        .map(|z| {
                            let im = report::fixed(z[1], prec);
                            let sign = if im.starts_with('-') { "" } else { "+" };
                            format!("{}{sign}{im}i", report::fixed(z[0], prec))
                        })
                        .collect();
                    let _ = writeln!(out, "  {}", cells.join("  "));
                }
            }
            Ok(out)
        }
    }
}

#[derive(Debug, Serialize)]
struct FixtureSummary {
    name: &'static str,
    kind: &'static str,
    rows: usize,
    cols: usize,
    description: &'static str,
}

fn kind_of(data: &FixtureData) -> &'static str {
    match data {
        FixtureData::Matrix { .. } => "matrix",
        FixtureData::TransferFunction { .. } => "transfer-function",
    }
}

#[derive(Debug, Serialize)]
struct FixtureShow {
    fixture: fixtures::Fixture,
    gain: GainMatrix,
}

pub fn fixtures_cmd(cmd: &FixturesCommand) -> Result<String> {
    match cmd {
        FixturesCommand::List { output } => {
            let list = fixtures::all()
                .into_iter()
                .map(|f| {
                    let g = f.gain()?;
                    Ok(FixtureSummary {
                        name: f.name,
                        kind: kind_of(&f.data),
                        rows: g.matrix.rows(),
                        cols: g.matrix.cols(),
                        description: f.description,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            match output.format {
                OutputFormat::Json => {
                    Ok(ReportDocument::new("fixtures list", None, (), list).to_json())
                }
                OutputFormat::Csv => Err(CliError::Usage(
                    "fixtures list supports table or json output".into(),
                )),
                OutputFormat::Table => {
                    let w = list.iter().map(|f| f.name.len()).max().unwrap_or(0);
                    let mut out = String::new();
                    for f in &list {
                        let _ = writeln!(
                            out,
                            "{:<w$}  {:>2}x{:<2}  {:<17}  {}",
                            f.name, f.rows, f.cols, f.kind, f.description
                        );
                    }
                    Ok(out)
                }
            }
        }
        FixturesCommand::Show { name, output } => {
            let f = fixtures::get(name)?;
            let g = f.gain()?;
            match output.format {
                OutputFormat::Json => Ok(ReportDocument::new(
                    "fixtures show",
                    None,
                    serde_json::json!({ "name": name }),
                    FixtureShow { fixture: f, gain: g },
                )
                .to_json()),
                OutputFormat::Csv => report::matrix_csv(&g.matrix, &g, &[f.description.to_string()]),
                OutputFormat::Table => {
                    let prec = report::precision()?;
                    let mut out = format!("{}: {}\n", f.name, f.description);
                    if let FixtureData::TransferFunction { text } = &f.data {
                        out.push('\n');
                        out.push_str(text);
                        let _ = writeln!(out, "\nsteady-state gains G(0):");
                    }
                    out.push_str(&report::matrix_table(&g.matrix, &g, prec));
                    Ok(out)
                }
            }
        }
    }
}
