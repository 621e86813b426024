//! `flexcurve`: command-line access to the bounds, the cover pipeline, the
//! Brown invariant tables and the genus table.
//!
//! Exit codes: 0 success, 1 a constraint failed or a Guillou–Marin check
//! found a contradiction, 2 usage, parse or domain error.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use flexcurve_core::bounds::{
    compare_range, evaluate_bound, format_rational, mp_sequence, Bound, BoundValue,
};
use flexcurve_core::cover::{pipeline, CoverReport};
use flexcurve_core::genus::{
    genus_tilde, gm_obstruction, plan_construction, Construction, GenusValue,
};
use flexcurve_core::quad_forms::{
    brown, enumerate_betas, guillou_marin_check, FormData, GmStatus, GmVerdict, Preset,
    QuadraticForm,
};
use flexcurve_core::scheme::{enumerate_schemes, parse_scheme};
use flexcurve_core::verdict::{check, check_batch, Overall, VerdictReport};
use flexcurve_core::{Ambient, CurveAmbient, CurveSpec, Degree, Execution};

#[derive(Parser, Debug)]
#[command(name = "flexcurve", version, about = "Topological bounds on real schemes of flexible curves")]
struct Cli {
    /// Print a single JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Run batch work on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a real scheme against every applicable bound.
    Check(CheckArgs),
    /// Evaluate the bounds for one odd degree.
    Bounds(BoundsArgs),
    /// Compare VZ, S and Zvonilov over a degree range, or print an m_p certificate.
    Compare(CompareArgs),
    /// Run the branched-cover pipeline.
    Pipeline(CurveArgs),
    /// Brown invariants of a preset or of a form read from JSON.
    Brown(BrownArgs),
    /// The non-orientable genus table and constructions.
    Genus(GenusArgs),
    /// List every scheme with a given number of ovals.
    Enumerate(EnumerateArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AmbientArg {
    Cp2,
    Hyperboloid,
    Ellipsoid,
}

#[derive(Args, Debug)]
struct CurveArgs {
    #[arg(long, value_enum, default_value = "cp2")]
    ambient: AmbientArg,
    /// Degree (cp2, ellipsoid).
    #[arg(long, conflicts_with = "bidegree")]
    degree: Option<BigUint>,
    /// Bidegree `A,B` (hyperboloid).
    #[arg(long)]
    bidegree: Option<Bidegree>,
    /// The curve is non-orientable (cp2 only).
    #[arg(long)]
    nonorientable: bool,
    /// Euler characteristic of a non-orientable curve.
    #[arg(long, requires = "nonorientable", conflicts_with = "extremal", allow_hyphen_values = true)]
    chi: Option<BigInt>,
    /// Use the extremal Euler characteristic `g~(m^2)`.
    #[arg(long, requires = "nonorientable")]
    extremal: bool,
    /// Drop the Q-flexibility hypothesis (only bounds for flexible curves apply).
    #[arg(long)]
    no_q_flexible: bool,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    curve: CurveArgs,
    /// Scheme in angle-bracket notation, e.g. "<J + 2 + 1<1>>".
    #[arg(long, allow_hyphen_values = true)]
    scheme: String,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long)]
    degree: BigUint,
    /// Also list bounds whose hypotheses `m` does not meet.
    #[arg(long)]
    all: bool,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct CompareArgs {
    /// Odd degrees in `LO:HI`.
    #[arg(long)]
    degrees: Option<Span<u64>>,
    /// Index `p` of the sequence `m_p = 1287 * 429^(12p+1)`.
    #[arg(long)]
    mp: Option<u32>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PresetArg {
    Rp2,
    Klein,
}

#[derive(Args, Debug)]
struct BrownArgs {
    #[arg(long, value_enum, conflicts_with = "form", required_unless_present = "form")]
    preset: Option<PresetArg>,
    /// JSON file `{"rank", "bilinear", "phi"}`.
    #[arg(long)]
    form: Option<PathBuf>,
    /// Every refinement of the pairing instead of the given one.
    #[arg(long)]
    enumerate: bool,
    /// Guillou–Marin test `SIGMA:E` against the resulting Brown invariants.
    #[arg(long, allow_hyphen_values = true)]
    gm: Option<Span<i64>>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct GenusArgs {
    /// Arguments in `LO:HI`.
    #[arg(long, allow_hyphen_values = true)]
    range: Option<Span<i64>>,
    /// Build a surface with this normal Euler number.
    #[arg(long, allow_hyphen_values = true)]
    construct: Option<i64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FilterArg {
    Pass,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[arg(long)]
    ovals: usize,
    /// Plane curve degree; its parity decides whether `J` is present.
    #[arg(long)]
    degree: Option<u64>,
    #[arg(long, value_enum, requires = "degree")]
    filter: Option<FilterArg>,
}

#[derive(Clone, Copy, Debug)]
struct Bidegree(u64, u64);

impl FromStr for Bidegree {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s.split_once(',').ok_or("expected A,B")?;
        let parse = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("{t:?}: {e}"));
        Ok(Bidegree(parse(a)?, parse(b)?))
    }
}

#[derive(Clone, Copy, Debug)]
struct Span<T>(T, T);

impl<T: FromStr + PartialOrd> FromStr for Span<T>
where
    T::Err: std::fmt::Display,
{
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s.split_once(':').ok_or("expected LO:HI")?;
        let parse = |t: &str| t.trim().parse::<T>().map_err(|e| format!("{t:?}: {e}"));
        Ok(Span(parse(a)?, parse(b)?))
    }
}

/// A failure that maps to exit code 2.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

/// What a subcommand produced: text, a JSON value, and whether something
/// failed.
struct Output {
    text: String,
    json: serde_json::Value,
    failed: bool,
}

impl Output {
    fn new(text: String, json: impl Serialize, failed: bool) -> Result<Self, Usage> {
        Ok(Output {
            text,
            json: serde_json::to_value(json)?,
            failed,
        })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(u8::try_from(e.exit_code()).unwrap_or(2));
        }
    };
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let result = match &cli.command {
        Command::Check(args) => run_check(args),
        Command::Bounds(args) => run_bounds(args),
        Command::Compare(args) => run_compare(args, exec),
        Command::Pipeline(args) => run_pipeline(args),
        Command::Brown(args) => run_brown(args, exec),
        Command::Genus(args) => run_genus(args),
        Command::Enumerate(args) => run_enumerate(args, exec),
    };
    match result {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            // A closed pipe downstream is not an error of ours.
            let _ = if cli.json {
                writeln!(stdout, "{}", serde_json::to_string_pretty(&out.json).expect("values serialise"))
            } else {
                stdout.write_all(out.text.as_bytes())
            };
            if out.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn curve_spec(args: &CurveArgs) -> Result<CurveSpec, Usage> {
    let (ambient, degree) = match (args.ambient, &args.degree, args.bidegree) {
        (AmbientArg::Hyperboloid, None, Some(Bidegree(a, b))) => {
            (CurveAmbient::Hyperboloid, Degree::Bi(a.into(), b.into()))
        }
        (AmbientArg::Hyperboloid, _, _) => return Err(Usage("the hyperboloid needs --bidegree A,B".into())),
        (AmbientArg::Cp2, Some(m), None) => (CurveAmbient::ProjectivePlane, Degree::Single(m.clone())),
        (AmbientArg::Ellipsoid, Some(m), None) => (CurveAmbient::Ellipsoid, Degree::Single(m.clone())),
        _ => return Err(Usage("cp2 and ellipsoid need --degree M".into())),
    };
    let spec = CurveSpec {
        ambient,
        degree,
        orientable: !args.nonorientable,
        chi_f: args.chi.clone(),
        q_flexible: !args.no_q_flexible,
        extremal_chi: args.extremal,
    };
    spec.validate()?;
    Ok(spec)
}

fn run_check(args: &CheckArgs) -> Result<Output, Usage> {
    let spec = curve_spec(&args.curve)?;
    let ambient = match spec.scheme_ambient() {
        // Without a J the scheme is read as even; the verdict reports it.
        Ambient::ProjectivePlaneOdd if !args.scheme.contains('J') => Ambient::ProjectivePlaneEven,
        a => a,
    };
    let scheme = parse_scheme(&args.scheme, ambient)?;
    let verdict = check(&spec, &scheme)?;
    let report = verdict.report();
    let text = verdict_text(&report);
    Output::new(text, &report, verdict.overall == Overall::Fail)
}

fn verdict_text(r: &VerdictReport) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "curve: {} degree {}", r.spec.ambient, r.spec.degree);
    let _ = writeln!(t, "scheme: {}", r.scheme);
    let s = &r.stats;
    let _ = writeln!(
        t,
        "ovals {}  l+ {}  l0 {}  l- {}  b0 {}",
        s.l, s.l_plus, s.l_zero, s.l_minus, s.b0
    );
    for c in &r.constraints {
        let _ = writeln!(
            t,
            "  {:<22} bound {:>12}  observed {:>6}  {:?}",
            c.id, c.bound, c.observed, c.status
        );
        if let Some(note) = &c.note {
            let _ = writeln!(t, "  {:<22} ({note})", "");
        }
    }
    if let Some(b) = &r.combined_bound {
        let _ = writeln!(t, "combined bound on l0 + l-: {b}");
    }
    for n in &r.notes {
        let _ = writeln!(t, "note: {n}");
    }
    let _ = writeln!(t, "overall: {:?}", r.overall);
    t
}

#[derive(Serialize)]
struct BoundRow {
    id: &'static str,
    value: Option<String>,
    note: String,
}

fn run_bounds(args: &BoundsArgs) -> Result<Output, Usage> {
    let m = BigInt::from(args.degree.clone());
    let bounds = [
        Bound::HarnackOrientable { m: m.clone() },
        Bound::VZ { m: m.clone() },
        Bound::S { m: m.clone() },
        Bound::Zvonilov { m: m.clone() },
        Bound::Ellipsoid { m: m.clone() },
    ];
    let mut rows = Vec::new();
    for b in &bounds {
        match evaluate_bound(b) {
            Ok(BoundValue { value, kind, note }) => rows.push(BoundRow {
                id: kind.id(),
                value: Some(format_rational(&value)),
                note,
            }),
            Err(e) if args.all => rows.push(BoundRow {
                id: b.kind().id(),
                value: None,
                note: e.to_string(),
            }),
            Err(_) => {}
        }
    }
    let mut t = format!("degree {m}\n");
    for r in &rows {
        let value = r.value.as_deref().unwrap_or("n/a");
        let _ = writeln!(t, "  {:<10} {:>14}  {}", r.id, value, r.note);
    }
    Output::new(t, &rows, false)
}

#[derive(Serialize)]
struct CompareView {
    m: String,
    h: String,
    vz: String,
    s: String,
    zvonilov: String,
    min: String,
}

#[derive(Serialize)]
struct MpView {
    p: u32,
    m: String,
    nu5_of_m_plus_2: u64,
    nu7_of_m_plus_2: u64,
    divisible_by_35: bool,
    h: String,
    vz_minus_s: String,
}

fn run_compare(args: &CompareArgs, exec: Execution) -> Result<Output, Usage> {
    if let Some(p) = args.mp {
        let c = mp_sequence(p)?;
        let view = MpView {
            p,
            m: c.m.to_string(),
            nu5_of_m_plus_2: c.nu5_of_m_plus_2,
            nu7_of_m_plus_2: c.nu7_of_m_plus_2,
            divisible_by_35: c.divisible(),
            h: c.h.to_string(),
            vz_minus_s: format_rational(&c.vz_minus_s),
        };
        let text = format!(
            "m_{p} = {}\n  v5(m+2) = {}, v7(m+2) = {}, 35 | m+2: {}\n  h(m) = {}\n  VZ - S = {}\n",
            view.m, view.nu5_of_m_plus_2, view.nu7_of_m_plus_2, view.divisible_by_35, view.h, view.vz_minus_s
        );
        return Output::new(text, &view, false);
    }
    let Span(lo, hi) = args.degrees.expect("clap enforces one of the group");
    let rows: Vec<CompareView> = compare_range(lo, hi, exec)?
        .iter()
        .map(|r| CompareView {
            m: r.m.to_string(),
            h: r.h.to_string(),
            vz: format_rational(&r.vz),
            s: format_rational(&r.s),
            zvonilov: format_rational(&r.zvonilov),
            min: format_rational(r.min()),
        })
        .collect();
    let mut t = format!("{:>8} {:>8} {:>12} {:>12} {:>12} {:>12}\n", "m", "h(m)", "VZ", "S", "Zvonilov", "min");
    for r in &rows {
        let _ = writeln!(t, "{:>8} {:>8} {:>12} {:>12} {:>12} {:>12}", r.m, r.h, r.vz, r.s, r.zvonilov, r.min);
    }
    Output::new(t, &rows, false)
}

fn run_pipeline(args: &CurveArgs) -> Result<Output, Usage> {
    let spec = curve_spec(args)?;
    let r: CoverReport = pipeline(&spec)?;
    let mut t = String::new();
    for s in &r.steps {
        let _ = writeln!(t, "  {:<24} chi {:>8}  e {:>8}", s.label, s.chi, s.e.to_string());
    }
    let _ = writeln!(
        t,
        "Y: chi {}  sigma {}  b2 {}  b2+ {}  b2- {}",
        r.chi_y, r.sigma_y, r.b2, r.b2_plus, r.b2_minus
    );
    Output::new(t, &r, false)
}

#[derive(Serialize)]
struct BrownView {
    rank: usize,
    betas: Vec<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gauss_sum: Option<(i64, i64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    guillou_marin: Option<GmVerdict>,
}

fn run_brown(args: &BrownArgs, exec: Execution) -> Result<Output, Usage> {
    let (rows, phi_choices) = match (args.preset, &args.form) {
        (Some(p), _) => {
            let preset = match p {
                PresetArg::Rp2 => Preset::Rp2,
                PresetArg::Klein => Preset::Klein,
            };
            (preset.rows(), preset.phi_choices())
        }
        (None, Some(path)) => {
            let data: FormData = serde_json::from_str(&fs::read_to_string(path)?)?;
            let q = QuadraticForm::from_data(&data)?;
            let choices = q.phi().iter().map(|&p| vec![p, (p + 2) % 4]).collect();
            (q.rows().to_vec(), choices)
        }
        (None, None) => unreachable!("clap requires one of --preset and --form"),
    };
    let mut view = BrownView {
        rank: rows.len(),
        betas: Vec::new(),
        gauss_sum: None,
        guillou_marin: None,
    };
    if args.enumerate {
        view.betas = enumerate_betas(&rows, &phi_choices, exec)?.into_iter().collect();
    } else {
        let phi: Vec<u8> = phi_choices.iter().map(|c| c[0]).collect();
        let b = brown(&QuadraticForm::from_rows(rows, &phi)?, exec)?;
        view.betas = vec![b.beta];
        view.gauss_sum = Some((b.gauss_sum.re, b.gauss_sum.im));
    }
    if let Some(Span(sigma, e)) = args.gm {
        let set = view.betas.iter().copied().collect();
        view.guillou_marin = Some(guillou_marin_check(sigma, e, &set)?);
    }
    let mut t = format!("rank {}\nbeta: {:?}\n", view.rank, view.betas);
    if let Some((re, im)) = view.gauss_sum {
        let _ = writeln!(t, "gauss sum: {re} + {im}i");
    }
    if let Some(gm) = &view.guillou_marin {
        let _ = writeln!(t, "guillou-marin: beta must be {} mod 8: {:?}", gm.required, gm.status);
    }
    let failed = view
        .guillou_marin
        .is_some_and(|gm| gm.status == GmStatus::Contradiction);
    Output::new(t, &view, failed)
}

#[derive(Serialize)]
struct GenusRow {
    m: i64,
    #[serde(flatten)]
    value: GenusValue,
}

#[derive(Serialize)]
struct ConstructionView {
    #[serde(flatten)]
    construction: Construction,
    target_chi: i64,
    local_admissible: bool,
    /// Guillou–Marin verdicts for the larger `chi` the refinement tables cover.
    obstructions: Vec<ObstructionView>,
}

#[derive(Serialize)]
struct ObstructionView {
    chi: i64,
    #[serde(flatten)]
    verdict: GmVerdict,
}

fn run_genus(args: &GenusArgs) -> Result<Output, Usage> {
    if let Some(Span(lo, hi)) = args.range {
        if lo > hi || hi - lo > 1_000_000 {
            return Err(Usage(format!("range {lo}:{hi} is empty or too long")));
        }
        let rows: Vec<GenusRow> = (lo..=hi).map(|m| GenusRow { m, value: genus_tilde(m) }).collect();
        let mut t = String::new();
        for r in &rows {
            let status = match r.value.status {
                flexcurve_core::genus::GenusStatus::Exact => "exact",
                flexcurve_core::genus::GenusStatus::LowerBoundOnly => "lower bound",
            };
            let _ = writeln!(t, "{:>8} {:>8}  {status}", r.m, r.value.value);
        }
        return Output::new(t, &rows, false);
    }
    let e = args.construct.expect("clap enforces one of the group");
    let target = genus_tilde(e);
    let c = plan_construction(e);
    let view = ConstructionView {
        local_admissible: c.local_admissible(),
        target_chi: target.value,
        obstructions: (target.value + 1..=1)
            .filter_map(|chi| gm_obstruction(e, chi).map(|verdict| ObstructionView { chi, verdict }))
            .collect(),
        construction: c,
    };
    let mut t = format!("e = {e}: chi = {} ({:?})\n", view.target_chi, target.status);
    for p in &view.construction.pieces {
        let _ = writeln!(t, "  {p:?}");
    }
    let _ = writeln!(
        t,
        "achieved (e, chi) = ({}, {}); local pieces admissible: {}",
        view.construction.achieved_e, view.construction.achieved_chi, view.local_admissible
    );
    for o in &view.obstructions {
        let _ = writeln!(
            t,
            "chi = {} at e = {e}: beta must be {} mod 8: {:?}",
            o.chi, o.verdict.required, o.verdict.status
        );
    }
    Output::new(t, &view, false)
}

#[derive(Serialize)]
struct EnumerateView {
    ovals: usize,
    count: usize,
    schemes: Vec<String>,
}

fn run_enumerate(args: &EnumerateArgs, exec: Execution) -> Result<Output, Usage> {
    let spec = args.degree.map(CurveSpec::plane);
    let ambient = spec.as_ref().map_or(Ambient::ProjectivePlaneEven, CurveSpec::scheme_ambient);
    let schemes = enumerate_schemes(args.ovals, ambient, exec)?;
    let texts: Vec<String> = match (&spec, args.filter) {
        (Some(spec), Some(FilterArg::Pass)) => check_batch(spec, &schemes, exec)
            .into_iter()
            .filter_map(|v| v.ok())
            .filter(|v| v.overall == Overall::Pass)
            .map(|v| v.scheme)
            .collect(),
        _ => schemes.iter().map(ToString::to_string).collect(),
    };
    let view = EnumerateView {
        ovals: args.ovals,
        count: texts.len(),
        schemes: texts,
    };
    let mut t = view.schemes.join("\n");
    if !t.is_empty() {
        t.push('\n');
    }
    let _ = writeln!(t, "count: {}", view.count);
    Output::new(t, &view, false)
}
