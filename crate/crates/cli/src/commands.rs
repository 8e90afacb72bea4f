use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use darboux_core::expr::{parse_exp_rational, parse_expr, Q};
use darboux_core::oracle::{run_property_suite, OracleConfig};
use darboux_core::{
    corresponding_x_invariant, corresponding_y_invariant, darboux, kernel_from_x_invariant,
    kernel_from_y_invariant, laplace_invariants, pair_invariants, residual, transport_x_under_x,
    transport_x_under_y, transport_y_under_x, transport_y_under_y, verify_transport_closure,
    x_residual, y_residual, BasePoint, DarbouxKind, DarbouxOptions, JetSymbol, Lpdo,
    RationalExpr,
};
use serde_json::{json, Value};

use crate::report::{Format, Report};

#[derive(Debug, Parser)]
#[command(name = "darboux", version, about = "Invariants and Darboux transformations of DxDy + a*Dx + b*Dy + c")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Operator, as text or as a JSON object with a "coeffs" map.
    #[arg(long, global = true)]
    pub op: Option<String>,
    /// Generator of an X-transformation.
    #[arg(long, global = true)]
    pub r0: Option<String>,
    /// Generator of a Y-transformation.
    #[arg(long, global = true)]
    pub q0: Option<String>,
    /// Kernel element.
    #[arg(long, global = true)]
    pub z: Option<String>,
    /// Gauge factor.
    #[arg(long, global = true)]
    pub g: Option<String>,
    /// X-invariant.
    #[arg(long, global = true)]
    pub r: Option<String>,
    /// Y-invariant.
    #[arg(long, global = true)]
    pub q: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Lower limits of integration, e.g. `1/2,0`.
    #[arg(long, global = true, value_name = "X0,Y0")]
    pub base_point: Option<String>,
    /// Reject extensions outside the core feature set.
    #[arg(long, global = true)]
    pub strict: bool,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Skip the check that the generator is an invariant.
    #[arg(long, global = true)]
    pub unchecked: bool,
    #[arg(long, global = true)]
    pub l1: Option<String>,
    #[arg(long, global = true)]
    pub m: Option<String>,
    #[arg(long, global = true)]
    pub m1: Option<String>,
    /// Which invariant to transport.
    #[arg(long, global = true, value_enum)]
    pub of: Option<Side>,
    /// Number of random instances for `property-check`.
    #[arg(long, global = true, default_value_t = 200)]
    pub count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Side {
    X,
    Y,
}

#[derive(Clone, Copy, Debug, Subcommand)]
pub enum Command {
    /// Laplace invariants h and k.
    Invariants,
    /// X- and Y-invariants of a kernel element (--z).
    PairInvariants,
    /// Residual of the X-invariant equation for --r.
    CheckXinv,
    /// Residual of the Y-invariant equation for --q.
    CheckYinv,
    /// Kernel element from an X-invariant (--r).
    KernelFromR,
    /// Kernel element from a Y-invariant (--q).
    KernelFromQ,
    /// The invariant paired with --r or --q.
    Corresponding,
    /// X-transformation generated by --r0.
    DarbouxX,
    /// Y-transformation generated by --q0.
    DarbouxY,
    /// Image of an invariant under the transformation generated by --r0 or --q0.
    Transport,
    /// Closure of the X-transport formula by jet reduction.
    VerifyTransport,
    /// Residual M1∘L − L1∘M of --m1, --op, --l1, --m.
    VerifyIntertwine,
    /// Gauge and invariant identities on random operators.
    PropertyCheck,
}

type Outcome = Result<Report, String>;

fn required<'a>(value: &'a Option<String>, flag: &str) -> Result<&'a str, String> {
    value.as_deref().ok_or_else(|| format!("missing --{flag}"))
}

fn expr(value: &Option<String>, flag: &str) -> Result<RationalExpr, String> {
    parse_expr(required(value, flag)?).map_err(|e| format!("--{flag}: {e}"))
}

fn operator(value: &Option<String>, flag: &str) -> Result<Lpdo, String> {
    Lpdo::parse(required(value, flag)?).map_err(|e| format!("--{flag}: {e}"))
}

/// The operator under study; must be in hyperbolic normal form.
fn hyperbolic(cli: &Cli) -> Result<Lpdo, String> {
    let l = operator(&cli.op, "op")?;
    if !l.is_hyperbolic_normal() {
        return Err("--op: operator is not of the form DxDy + a*Dx + b*Dy + c".into());
    }
    Ok(l)
}

fn base_point(cli: &Cli) -> Result<BasePoint, String> {
    let Some(text) = &cli.base_point else {
        return Ok(BasePoint::default());
    };
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [x0, y0] = parts[..] else {
        return Err(format!("--base-point: expected X0,Y0, got `{text}`"));
    };
    let num = |s: &str| Q::from_str(s).map_err(|_| format!("--base-point: `{s}` is not a rational number"));
    Ok(BasePoint::new(num(x0)?, num(y0)?))
}

fn lib<T>(r: darboux_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn op_field(report: Report, key: &str, l: &Lpdo) -> Report {
    report.both(key, l.to_string(), l.to_json())
}

pub fn run(cli: &Cli) -> Outcome {
    match cli.command {
        Command::Invariants => invariants(cli),
        Command::PairInvariants => pair(cli),
        Command::CheckXinv => check(cli, Side::X),
        Command::CheckYinv => check(cli, Side::Y),
        Command::KernelFromR => kernel(cli, Side::X),
        Command::KernelFromQ => kernel(cli, Side::Y),
        Command::Corresponding => corresponding(cli),
        Command::DarbouxX => darboux_step(cli, DarbouxKind::X),
        Command::DarbouxY => darboux_step(cli, DarbouxKind::Y),
        Command::Transport => transport(cli),
        Command::VerifyTransport => verify_transport(cli),
        Command::VerifyIntertwine => verify_intertwine(cli),
        Command::PropertyCheck => property_check(cli),
    }
}

/// With `--g`, also checks that gauging by `g` leaves `h` and `k` unchanged.
fn invariants(cli: &Cli) -> Outcome {
    let l = hyperbolic(cli)?;
    let inv = lib(laplace_invariants(&l))?;
    let report = Report::new().field("h", &inv.h).field("k", &inv.k);
    if cli.g.is_none() {
        return Ok(report);
    }
    let gauged = lib(l.gauge(&expr(&cli.g, "g")?))?;
    let same = lib(laplace_invariants(&gauged))? == inv;
    Ok(report.verdict("gauge_invariant", same))
}

fn pair(cli: &Cli) -> Outcome {
    let l = hyperbolic(cli)?;
    let z = parse_exp_rational(required(&cli.z, "z")?).map_err(|e| format!("--z: {e}"))?;
    let p = lib(pair_invariants(&l, &z))?;
    Ok(Report::new().field("r", &p.r).field("q", &p.q))
}

fn check(cli: &Cli, side: Side) -> Outcome {
    let inv = lib(laplace_invariants(&hyperbolic(cli)?))?;
    let res = match side {
        Side::X => lib(x_residual(&expr(&cli.r, "r")?, &inv.h, &inv.k))?,
        Side::Y => lib(y_residual(&expr(&cli.q, "q")?, &inv.h, &inv.k))?,
    };
    let holds = res.is_zero();
    Ok(Report::new().field("residual", &res).verdict("holds", holds))
}

fn kernel(cli: &Cli, side: Side) -> Outcome {
    let l = hyperbolic(cli)?;
    let base = base_point(cli)?;
    let z = match side {
        Side::X => lib(kernel_from_x_invariant(&l, &expr(&cli.r, "r")?, &base))?,
        Side::Y => lib(kernel_from_y_invariant(&l, &expr(&cli.q, "q")?, &base))?,
    };
    Ok(Report::new().field("z", &z))
}

fn corresponding(cli: &Cli) -> Outcome {
    let l = hyperbolic(cli)?;
    let base = base_point(cli)?;
    match (&cli.r, &cli.q) {
        (Some(_), None) => {
            let q = lib(corresponding_y_invariant(&l, &expr(&cli.r, "r")?, &base))?;
            Ok(Report::new().field("q", &q))
        }
        (None, Some(_)) => {
            let r = lib(corresponding_x_invariant(&l, &expr(&cli.q, "q")?, &base))?;
            Ok(Report::new().field("r", &r))
        }
        _ => Err("give exactly one of --r and --q".into()),
    }
}

fn darboux_step(cli: &Cli, kind: DarbouxKind) -> Outcome {
    let l = hyperbolic(cli)?;
    let generator = match kind {
        DarbouxKind::X => expr(&cli.r0, "r0")?,
        DarbouxKind::Y => expr(&cli.q0, "q0")?,
    };
    let opts = DarbouxOptions {
        check_generator: !cli.unchecked,
    };
    let t = lib(darboux(&l, &generator, kind, &opts))?;
    let zero = lib(t.residual())?.is_zero();
    let report = Report::new().field("kind", kind);
    let report = op_field(report, "l1", &t.l1);
    let report = op_field(report, "m", &t.m);
    let report = op_field(report, "m1", &t.m1);
    Ok(report.verdict("residual_zero", zero))
}

/// `--r`/`--q` if given, otherwise the symbolic jet `r`/`q`.
fn invariant_or_jet(value: &Option<String>, flag: &str) -> Result<RationalExpr, String> {
    match value {
        Some(_) => expr(value, flag),
        None => Ok(RationalExpr::jet(JetSymbol::base(flag))),
    }
}

fn transport(cli: &Cli) -> Outcome {
    let (kind, generator) = match (&cli.r0, &cli.q0) {
        (Some(_), None) => (DarbouxKind::X, expr(&cli.r0, "r0")?),
        (None, Some(_)) => (DarbouxKind::Y, expr(&cli.q0, "q0")?),
        _ => return Err("give exactly one of --r0 and --q0".into()),
    };
    let side = cli.of.unwrap_or(match kind {
        DarbouxKind::X => Side::X,
        DarbouxKind::Y => Side::Y,
    });
    let r = invariant_or_jet(&cli.r, "r")?;
    let q = invariant_or_jet(&cli.q, "q")?;
    let value = match (kind, side) {
        (DarbouxKind::X, Side::X) => lib(transport_x_under_x(&r, &generator))?,
        (DarbouxKind::Y, Side::Y) => lib(transport_y_under_y(&q, &generator))?,
        (DarbouxKind::Y, Side::X) => {
            let h = lib(laplace_invariants(&hyperbolic(cli)?))?.h;
            lib(transport_x_under_y(&r, &q, &generator, &h))?
        }
        (DarbouxKind::X, Side::Y) => {
            let k = lib(laplace_invariants(&hyperbolic(cli)?))?.k;
            lib(transport_y_under_x(&q, &r, &generator, &k, cli.strict))?
        }
    };
    let name = match side {
        Side::X => "r1",
        Side::Y => "q1",
    };
    Ok(Report::new().field("kind", kind).field(name, &value))
}

fn verify_transport(cli: &Cli) -> Outcome {
    let l = hyperbolic(cli)?;
    let holds = lib(verify_transport_closure(&l, &expr(&cli.r0, "r0")?))?;
    Ok(Report::new().verdict("closure", holds))
}

fn verify_intertwine(cli: &Cli) -> Outcome {
    let l = operator(&cli.op, "op")?;
    let l1 = operator(&cli.l1, "l1")?;
    let m = operator(&cli.m, "m")?;
    let m1 = operator(&cli.m1, "m1")?;
    let res = lib(residual(&m1, &l, &l1, &m))?;
    let holds = res.is_zero();
    Ok(op_field(Report::new(), "residual", &res).verdict("holds", holds))
}

fn property_check(cli: &Cli) -> Outcome {
    let report = run_property_suite(cli.seed, cli.count, &OracleConfig::default());
    let failures: Vec<Value> = report
        .failures
        .iter()
        .map(|f| {
            json!({
                "index": f.index,
                "seed": f.seed,
                "operator": f.operator,
                "kernel": f.kernel,
                "failed": f.failed,
            })
        })
        .collect();
    let summary = report
        .failures
        .iter()
        .map(|f| format!("#{} (seed {}): {}", f.index, f.seed, f.failed.join(", ")))
        .collect::<Vec<_>>()
        .join("; ");
    Ok(Report::new()
        .both("seed", report.seed.to_string(), json!(report.seed))
        .both("instances", report.instances.to_string(), json!(report.instances))
        .both("failures", summary, Value::Array(failures))
        .verdict("holds", report.passed()))
}
