use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use l2alpha::io::{alpha_tuples_csv, samples_csv};
use l2alpha::quotients::{fmt_f64, SpectralModel};
use l2alpha::{
    baker_summary, builtin, counterexample_polynomial, group_matrix_from_value, laurent_to_value, matrix_from_value,
    net_report, restrict_to_z, smith_normal_form, unit_circle_roots, CounterexampleConfig, CounterexampleReport,
    GroupSpecJson, LaurentMatrix, NsValue, Tolerances, VcGroupSpec, BUILTIN_NAMES,
};

const SNF_NOTE: &str = "invariant factors are normalized to valuation 0 with leading coefficient 1; \
the circle-dominance normalization |p_(l+1)| <= |p_l| is not applied, which changes finite-level \
values for multi-factor matrices but not Novikov-Shubin numbers";

#[derive(Parser, Debug)]
#[command(name = "l2alpha", version, about = "Novikov-Shubin numbers and alpha numbers of finite quotients")]
#[command(after_help = SNF_NOTE)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Novikov-Shubin number, invariant factors and unit-circle roots.
    Ns {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Alpha numbers of finite quotients, one row per level.
    Alpha {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        levels: LevelArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Net liminf/limsup estimates over the divisibility order.
    Net {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        net: NetArgs,
        #[command(flatten)]
        levels: LevelArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Step spectral distribution function of one quotient.
    Sdf {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        sdf: SdfArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Full report for 5z^2 - 6z + 5.
    Counterexample {
        #[command(flatten)]
        net: NetArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Matrix JSON file, or a built-in name: z-1, counterexample, dinf-xt.
    input: String,
    /// Group: Z, Dinf, ZxZ2, ZxZ3, or a group spec JSON file. The matrix is then read as group-ring terms.
    #[arg(long)]
    group: Option<String>,
}

#[derive(Args, Debug)]
struct LevelArgs {
    /// Inclusive level range `a..b`.
    #[arg(long)]
    levels: Option<String>,
    /// Comma-separated levels.
    #[arg(long = "level-list", value_delimiter = ',')]
    level_list: Vec<u64>,
}

#[derive(Args, Debug)]
struct SdfArgs {
    #[arg(long)]
    level: u64,
}

#[derive(Args, Debug)]
struct NetArgs {
    #[arg(long = "K-set", value_delimiter = ',', default_values_t = vec![1u64, 2, 3])]
    k_set: Vec<u64>,
    #[arg(long = "i-max")]
    i_max: Option<u64>,
    #[arg(long = "n-max")]
    n_max: Option<u64>,
    /// First level counted by the net estimate.
    #[arg(long = "net-min-level")]
    net_min_level: Option<u64>,
    /// Baker constant for the liminf floor and circle-runner check.
    #[arg(long = "baker-D")]
    baker_d: Option<f64>,
}

#[derive(Args, Debug)]
struct CommonArgs {
    #[arg(long = "tol-rank")]
    tol_rank: Option<f64>,
    #[arg(long = "tol-cluster")]
    tol_cluster: Option<f64>,
    #[arg(long = "precision-bits")]
    precision_bits: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
    Tsv,
}

/// Resolved settings, echoed at the top of every output.
#[derive(Serialize)]
struct JobConfig {
    command: &'static str,
    input: Option<String>,
    group: Option<String>,
    group_order_factor: u64,
    levels: Option<Vec<u64>>,
    k_set: Option<Vec<u64>>,
    i_max: Option<u64>,
    n_max: Option<u64>,
    net_min_level: Option<u64>,
    baker_d: Option<f64>,
    tol_rank: f64,
    tol_cluster: f64,
    precision_bits: usize,
    format: Format,
    version: &'static str,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<l2alpha::Error> for Failure {
    fn from(e: l2alpha::Error) -> Self {
        let code = match e {
            l2alpha::Error::InvalidArgument(_) | l2alpha::Error::Parse(_) => 2,
            l2alpha::Error::Precision(_) => 3,
            l2alpha::Error::Hypothesis(_) => 4,
            l2alpha::Error::Resource(_) | l2alpha::Error::Internal(_) => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn input_error(msg: impl Into<String>) -> Failure {
    Failure { code: 2, message: msg.into() }
}

type Res<T> = std::result::Result<T, Failure>;

fn read_json(path: &Path) -> Res<Value> {
    let text = fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn resolve_group(g: &str) -> Res<VcGroupSpec> {
    if let Some(spec) = VcGroupSpec::builtin(g) {
        return Ok(spec);
    }
    let v = read_json(Path::new(g))?;
    let j: GroupSpecJson = serde_json::from_value(v).map_err(|e| input_error(format!("{g}: {e}")))?;
    Ok(VcGroupSpec::from_json(&j)?)
}

/// The Laurent matrix to work with and the index of `Z` in the group.
fn resolve_input(args: &InputArgs) -> Res<(LaurentMatrix, u64)> {
    if let Some(b) = builtin(&args.input)? {
        if args.group.is_some() {
            return Err(input_error("--group cannot be combined with a built-in input"));
        }
        return Ok((b.laurent, b.spec.n() as u64));
    }
    let path = Path::new(&args.input);
    if !path.exists() {
        return Err(input_error(format!(
            "{}: no such file and not a built-in ({})",
            args.input,
            BUILTIN_NAMES.join(", ")
        )));
    }
    let v = read_json(path)?;
    match &args.group {
        None => Ok((matrix_from_value(&v)?, 1)),
        Some(g) => {
            let spec = resolve_group(g)?;
            let report = l2alpha::validate_group(&spec);
            if !report.is_valid() {
                return Err(input_error(format!("group spec violates the group axioms: {:?}", report.violations)));
            }
            let m = group_matrix_from_value(&v, &spec)?;
            Ok((restrict_to_z(&m, &spec)?, spec.n() as u64))
        }
    }
}

fn tolerances(c: &CommonArgs) -> Res<Tolerances> {
    let mut t = Tolerances::default();
    if let Some(x) = c.tol_rank {
        t.tol_rank = x;
    }
    if let Some(x) = c.tol_cluster {
        t.tol_cluster = x;
    }
    if let Some(b) = c.precision_bits {
        t.precision_bits = b;
    }
    if !(t.tol_rank > 0.0 && t.tol_rank < 1.0 && t.tol_cluster > 0.0 && t.tol_cluster < 1.0) {
        return Err(input_error("tolerances must lie in (0, 1)"));
    }
    if !(64..=16384).contains(&t.precision_bits) {
        return Err(input_error("--precision-bits must lie in 64..=16384"));
    }
    Ok(t)
}

fn parse_levels(l: &LevelArgs, required: bool) -> Res<Vec<u64>> {
    let mut out = l.level_list.clone();
    if let Some(r) = &l.levels {
        let (a, b) = r.split_once("..").ok_or_else(|| input_error(format!("--levels expects a..b, got {r}")))?;
        let a: u64 = a.trim().parse().map_err(|_| input_error(format!("bad level range {r}")))?;
        let b: u64 = b.trim().parse().map_err(|_| input_error(format!("bad level range {r}")))?;
        if a == 0 || a > b {
            return Err(input_error(format!("level range {r} must satisfy 1 <= a <= b")));
        }
        if b - a > 1_000_000 {
            return Err(input_error("level range holds more than 10^6 levels"));
        }
        out.extend(a..=b);
    }
    if out.contains(&0) {
        return Err(input_error("levels must be positive"));
    }
    if required && out.is_empty() {
        return Err(input_error("give --levels a..b or --level-list"));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn job(command: &'static str, input: Option<&InputArgs>, c: &CommonArgs, t: &Tolerances, format: Format) -> JobConfig {
    JobConfig {
        command,
        input: input.map(|i| i.input.clone()),
        group: input.and_then(|i| i.group.clone()),
        group_order_factor: 1,
        levels: None,
        k_set: None,
        i_max: None,
        n_max: None,
        net_min_level: None,
        baker_d: None,
        tol_rank: t.tol_rank,
        tol_cluster: t.tol_cluster,
        precision_bits: c.precision_bits.unwrap_or(t.precision_bits),
        format,
        version: env!("CARGO_PKG_VERSION"),
    }
}

fn comment_header(cfg: &JobConfig) -> String {
    let v = serde_json::to_value(cfg).expect("config serializes");
    let mut s = String::new();
    for (k, x) in v.as_object().expect("object") {
        if !x.is_null() {
            let _ = writeln!(s, "# {k}: {x}");
        }
    }
    s
}

fn to_json(cfg: &JobConfig, body: Value) -> String {
    let mut v = json!({ "config": cfg });
    if let (Some(o), Value::Object(b)) = (v.as_object_mut(), body) {
        o.extend(b);
    }
    let mut s = serde_json::to_string_pretty(&v).expect("report serializes");
    s.push('\n');
    s
}

fn ns_text(ns: &NsValue) -> Value {
    json!({ "display": ns.to_string(), "value": ns.as_f64() })
}

fn cmd_ns(input: &InputArgs, c: &CommonArgs) -> Res<String> {
    let t = tolerances(c)?;
    let format = c.format.unwrap_or(Format::Json);
    let (a, n) = resolve_input(input)?;
    let mut cfg = job("ns", Some(input), c, &t, format);
    cfg.group_order_factor = n;
    let (factors, ns, roots) = if a.is_zero() {
        (Vec::new(), NsValue::InfinityPlus, Vec::new())
    } else {
        let snf = smith_normal_form(&a)?;
        let last = snf.last_factor().expect("nonzero matrix").clone();
        let roots = unit_circle_roots(&last)?;
        let ns = l2alpha::ns_number(&last)?;
        (snf.factors, ns, roots)
    };
    Ok(match format {
        Format::Json => to_json(
            &cfg,
            json!({
                "ns": ns,
                "ns_text": ns_text(&ns),
                "rank": factors.len(),
                "invariant_factors": factors.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                "invariant_factors_terms": factors.iter().map(laurent_to_value).collect::<Vec<_>>(),
                "unit_circle_roots": roots,
                "note": SNF_NOTE,
            }),
        ),
        Format::Csv | Format::Tsv => {
            let sep = if format == Format::Csv { "," } else { "\t" };
            let mut s = comment_header(&cfg);
            let _ = writeln!(s, "# ns: {ns}");
            let _ = writeln!(s, "# rank: {}", factors.len());
            for (j, p) in factors.iter().enumerate() {
                let _ = writeln!(s, "# invariant_factor_{}: {p}", j + 1);
            }
            let _ = writeln!(s, "# note: {SNF_NOTE}");
            let _ = writeln!(s, "{}", ["re", "im", "turns", "multiplicity", "root_of_unity_order"].join(sep));
            for r in &roots {
                let _ = writeln!(
                    s,
                    "{}",
                    [
                        fmt_f64(r.approx.re),
                        fmt_f64(r.approx.im),
                        fmt_f64(r.turns),
                        r.multiplicity.to_string(),
                        r.root_of_unity_order.map(|o| o.to_string()).unwrap_or_default(),
                    ]
                    .join(sep)
                );
            }
            s
        }
    })
}

fn cmd_alpha(input: &InputArgs, l: &LevelArgs, c: &CommonArgs) -> Res<String> {
    let t = tolerances(c)?;
    let format = c.format.unwrap_or(Format::Csv);
    if format == Format::Tsv {
        return Err(input_error("alpha emits csv or json"));
    }
    let (a, n) = resolve_input(input)?;
    let levels = parse_levels(l, true)?;
    let model = SpectralModel::new(&a, t)?;
    let samples = levels.iter().map(|&i| model.sample(i, i * n)).collect::<l2alpha::Result<Vec<_>>>()?;
    let mut cfg = job("alpha", Some(input), c, &t, format);
    cfg.group_order_factor = n;
    cfg.levels = Some(levels);
    Ok(match format {
        Format::Json => to_json(&cfg, json!({ "samples": samples })),
        _ => comment_header(&cfg) + &samples_csv(&samples),
    })
}

fn cmd_sdf(input: &InputArgs, sa: &SdfArgs, c: &CommonArgs) -> Res<String> {
    let t = tolerances(c)?;
    let format = c.format.unwrap_or(Format::Tsv);
    if format == Format::Csv {
        return Err(input_error("sdf emits tsv or json"));
    }
    if sa.level == 0 {
        return Err(input_error("--level must be positive"));
    }
    let (a, n) = resolve_input(input)?;
    let sdf = SpectralModel::new(&a, t)?.sdf(sa.level, sa.level * n)?;
    let mut cfg = job("sdf", Some(input), c, &t, format);
    cfg.group_order_factor = n;
    cfg.levels = Some(vec![sa.level]);
    Ok(match format {
        Format::Json => to_json(&cfg, json!({ "sdf": sdf })),
        _ => comment_header(&cfg) + &sdf.to_tsv(),
    })
}

fn net_config(na: &NetArgs, extra: Vec<u64>, t: Tolerances) -> Res<CounterexampleConfig> {
    let mut cfg = CounterexampleConfig { tolerances: t, extra_levels: extra, ..CounterexampleConfig::default() };
    if na.k_set.is_empty() || na.k_set.contains(&0) {
        return Err(input_error("--K-set must list positive integers"));
    }
    cfg.k_set = na.k_set.clone();
    if let Some(x) = na.i_max {
        cfg.i_max = x;
    }
    if let Some(x) = na.n_max {
        cfg.n_max = x;
    }
    if let Some(x) = na.net_min_level {
        cfg.net_min_level = x;
    }
    cfg.net_min_level = cfg.net_min_level.min(cfg.i_max);
    if cfg.i_max == 0 {
        return Err(input_error("--i-max must be positive"));
    }
    cfg.separated_range.1 = cfg.separated_range.1.min(cfg.i_max);
    cfg.separated_range.0 = cfg.separated_range.0.min(cfg.separated_range.1);
    if let Some(d) = na.baker_d {
        if !(d.is_finite() && d >= 1.0) {
            return Err(input_error("--baker-D must be a real number >= 1"));
        }
    }
    Ok(cfg)
}

fn report_output(
    cfg: &mut JobConfig,
    na: &NetArgs,
    rc: &CounterexampleConfig,
    report: &CounterexampleReport,
    format: Format,
) -> Res<String> {
    cfg.k_set = Some(rc.k_set.clone());
    cfg.i_max = Some(rc.i_max);
    cfg.n_max = Some(rc.n_max);
    cfg.net_min_level = Some(rc.net_min_level);
    cfg.baker_d = na.baker_d;
    let baker = na.baker_d.map(|d| baker_summary(report, d)).transpose()?;
    Ok(match format {
        Format::Json => to_json(
            cfg,
            json!({
                "ns": report.ns,
                "ns_text": ns_text(&report.ns),
                "maximal_invariant_factor": report.polynomial,
                "unit_circle_roots": report.roots,
                "exact_roots": report.exact_roots.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
                "flags": report.flags,
                "budgets": report.config,
                "min_window_alpha": report.min_alpha(),
                "records": report.records,
                "separated": report.separated,
                "samples": report.samples,
                "net_estimate": report.net_estimate,
                "baker": baker,
            }),
        ),
        Format::Csv => comment_header(cfg) + &alpha_tuples_csv(report),
        Format::Tsv => {
            let mut s = comment_header(cfg);
            let _ = writeln!(s, "# ns: {}", report.ns);
            let _ = writeln!(s, "# maximal_invariant_factor: {}", report.polynomial);
            for f in &report.flags {
                let _ = writeln!(s, "# flag: {f}");
            }
            let e = &report.net_estimate;
            let _ = writeln!(s, "# liminf_est: {} (K = {}, i = {})", fmt_f64(e.liminf_est), e.liminf_witness.0, e.liminf_witness.1);
            let _ = writeln!(s, "# limsup_est: {} (K = {}, i = {})", fmt_f64(e.limsup_est), e.limsup_witness.0, e.limsup_witness.1);
            if let Some(m) = report.min_alpha() {
                let _ = writeln!(s, "# min_window_alpha: {}", fmt_f64(m));
            }
            if let Some(b) = &baker {
                let _ = writeln!(s, "# baker_D: {}", fmt_f64(b.d));
                let _ = writeln!(s, "# liminf_floor: {}", fmt_f64(b.liminf_floor));
                if let Some(x) = b.empirical_exponent {
                    let _ = writeln!(s, "# empirical_baker_exponent: {}", fmt_f64(x));
                }
                let pass = b.circle_runner.iter().all(|r| r.all_pass());
                let _ = writeln!(s, "# circle_runner_pass: {pass}");
            }
            s.push_str("K\tn\ti\tdistance\talpha\n");
            for t in &report.records {
                for r in &t.samples {
                    let _ = writeln!(
                        s,
                        "{}\t{}\t{}\t{}\t{}",
                        r.k,
                        r.exponent,
                        r.level,
                        fmt_f64(r.float_distance),
                        r.alpha.map(fmt_f64).unwrap_or_default()
                    );
                }
            }
            s
        }
    })
}

fn cmd_net(input: &InputArgs, na: &NetArgs, l: &LevelArgs, c: &CommonArgs) -> Res<String> {
    let t = tolerances(c)?;
    let format = c.format.unwrap_or(Format::Json);
    let (a, n) = resolve_input(input)?;
    let rc = net_config(na, parse_levels(l, false)?, t)?;
    let report = net_report(&a, n, &rc).map_err(|e| match e {
        l2alpha::Error::Hypothesis(m) => Failure {
            code: 4,
            message: format!("{m}; hypothesis violated: net estimates need a finite Novikov-Shubin number"),
        },
        other => other.into(),
    })?;
    let mut cfg = job("net", Some(input), c, &t, format);
    cfg.group_order_factor = n;
    cfg.levels = (!rc.extra_levels.is_empty()).then(|| rc.extra_levels.clone());
    report_output(&mut cfg, na, &rc, &report, format)
}

fn cmd_counterexample(na: &NetArgs, c: &CommonArgs) -> Res<String> {
    let t = tolerances(c)?;
    let format = c.format.unwrap_or(Format::Json);
    let rc = net_config(na, Vec::new(), t)?;
    let report = l2alpha::counterexample_report(&counterexample_polynomial(), &rc)?;
    let mut cfg = job("counterexample", None, c, &t, format);
    cfg.input = Some("counterexample".into());
    report_output(&mut cfg, na, &rc, &report, format)
}

fn run(cli: Cli) -> Res<()> {
    let (text, out) = match &cli.command {
        Command::Ns { input, common } => (cmd_ns(input, common)?, &common.out),
        Command::Alpha { input, levels, common } => (cmd_alpha(input, levels, common)?, &common.out),
        Command::Net { input, net, levels, common } => (cmd_net(input, net, levels, common)?, &common.out),
        Command::Sdf { input, sdf, common } => (cmd_sdf(input, sdf, common)?, &common.out),
        Command::Counterexample { net, common } => (cmd_counterexample(net, common)?, &common.out),
    };
    match out {
        Some(p) => fs::write(p, text).map_err(|e| input_error(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
