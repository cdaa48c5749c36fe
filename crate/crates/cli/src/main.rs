//! `zhat`: compute and cross-check q-series invariants of plumbed
//! three-manifolds from the command line.
//!
//! Exit codes: 0 success, 2 precondition violated, 3 cross-check mismatch,
//! 4 input/output failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use zhat::indefinite::{zhat_reversed_with, IndefThetaSpec};
use zhat::modular::{
    asymptotic_coeffs, minimum_order, radial_extrapolate_with, wrt_radial, zhat_series, PeriodicSign,
    RadialReport,
};
use zhat::plumbing::PlumbingGraph;
use zhat::surgery::{figure_eight_fk, surgery_zhat, KnotSeries, SurgerySlope};
use zhat::zhat::{three_star_false_theta_combination, zhat_negative_definite, zhat_three_star};
use zhat::{parse_exp, Error, Exp, QSeries};

#[derive(Parser)]
#[command(name = "zhat", version, about = "q-series invariants of plumbed three-manifolds")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Zhat of a negative-definite plumbing by the lattice sum.
    Compute(Opts),
    /// Zhat of the orientation-reversed three-star manifold.
    Reversed(Opts),
    /// Zhat of a Dehn surgery from two-variable knot data.
    Surgery(Opts),
    /// Evaluate near a rational cusp and extrapolate the radial limit.
    Radial(Opts),
    /// Three-star closed-form parameters.
    Params(Opts),
    /// False-theta decomposition and its asymptotic coefficients.
    Falsetheta(Opts),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Args)]
struct Opts {
    /// Plumbing graph JSON (knot series JSON for `surgery`).
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Series JSON to evaluate instead of a graph (`radial` only).
    #[arg(long)]
    series: Option<PathBuf>,
    /// Truncation order, `p` or `p/q`.
    #[arg(long)]
    order: Option<String>,
    /// Spin^c label index (`compute`), or the label offset `a` (`surgery`).
    #[arg(long, allow_hyphen_values = true)]
    spinc: Option<String>,
    /// Surgery slope `P/R`.
    #[arg(long, default_value = "-1", allow_hyphen_values = true)]
    slope: String,
    /// Cone vectors `c1,c2;c1',c2'`.
    #[arg(long, allow_hyphen_values = true)]
    cone: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// Working precision in bits.
    #[arg(long, default_value_t = 128)]
    precision: u32,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Run a second engine and compare.
    #[arg(long)]
    cross_check: bool,
    /// Compare the reversed series with figure-eight surgery.
    #[arg(long)]
    against_surgery: bool,
    /// Cusp `x` for `radial`.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    x: String,
    /// Comma-separated t values for `radial`.
    #[arg(long, default_value = "1/10,1/20,1/40")]
    tgrid: String,
    /// Report the WRT normalization at `x = 1/k` (`radial`).
    #[arg(long)]
    wrt: bool,
}

enum Failure {
    Precondition(String),
    Mismatch(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) | Error::Parse(_) => Failure::Io(e.to_string()),
            _ => Failure::Precondition(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Compute(o) => validate(o).and_then(|_| compute(o)),
        Cmd::Reversed(o) => validate(o).and_then(|_| reversed(o)),
        Cmd::Surgery(o) => validate(o).and_then(|_| surgery(o)),
        Cmd::Radial(o) => validate(o).and_then(|_| radial(o)),
        Cmd::Params(o) => validate(o).and_then(|_| params(o)),
        Cmd::Falsetheta(o) => validate(o).and_then(|_| falsetheta(o)),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Precondition(m)) => {
            eprintln!("error[precondition]: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Mismatch(m)) => {
            eprintln!("error[mismatch]: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Io(m)) => {
            eprintln!("error[io]: {m}");
            ExitCode::from(4)
        }
    }
}

fn validate(o: &Opts) -> Result<(), Failure> {
    if o.precision < 64 {
        return Err(Failure::Precondition(format!("precision must be at least 64 bits, got {}", o.precision)));
    }
    if o.jobs == 0 {
        return Err(Failure::Precondition("jobs must be at least 1".into()));
    }
    if let Some(ord) = &o.order {
        if !parse_exp(ord)?.is_positive() {
            return Err(Failure::Precondition(format!("order must be positive, got {ord}")));
        }
    }
    Ok(())
}

fn order_or(o: &Opts, default: i64) -> Result<Exp, Failure> {
    match &o.order {
        Some(s) => Ok(parse_exp(s)?),
        None => Ok(Exp::from_integer(default)),
    }
}

fn load_graph(o: &Opts) -> Result<PlumbingGraph, Failure> {
    let path = o
        .graph
        .as_ref()
        .ok_or_else(|| Failure::Precondition("--graph is required".into()))?;
    Ok(PlumbingGraph::load(path)?)
}

fn big(e: Exp) -> BigRational {
    BigRational::new((*e.numer()).into(), (*e.denom()).into())
}

fn emit_series(s: &QSeries, format: Format, extra: Vec<(&str, Value)>, notes: &[String]) -> String {
    match format {
        Format::Json => {
            let mut v = json!({"series": s.to_json()});
            for (k, x) in extra {
                v[k] = x;
            }
            pretty(&v)
        }
        Format::Csv => s.to_csv(),
        Format::Plain => {
            let mut out = format!("{s}\n");
            for n in notes {
                out.push_str(n);
                out.push('\n');
            }
            out
        }
    }
}

fn pretty(v: &Value) -> String {
    format!("{}\n", serde_json::to_string_pretty(v).expect("json value serializes"))
}

/// First exponent below `bound` where the two series differ.
fn first_difference(a: &QSeries, b: &QSeries, bound: Exp) -> Option<Exp> {
    let mut exps: Vec<Exp> = a.iter().chain(b.iter()).map(|(e, _)| *e).filter(|e| *e < bound).collect();
    exps.sort();
    exps.dedup();
    exps.into_iter().find(|e| a.coeff(*e) != b.coeff(*e))
}

fn compute(o: &Opts) -> Outcome {
    let g = load_graph(o)?;
    let order = order_or(o, 10)?;
    let label = match &o.spinc {
        None => g.canonical_label()?,
        Some(idx) => {
            let i: usize = idx
                .parse()
                .map_err(|_| Failure::Precondition(format!("--spinc expects a label index, got {idx:?}")))?;
            let labels = g.spinc_labels()?;
            labels.get(i).cloned().ok_or_else(|| {
                Failure::Precondition(format!("spinc index {i} out of range, graph has {} labels", labels.len()))
            })?
        }
    };
    let s = zhat_negative_definite(&g, &label, order, o.jobs)?;
    let mut extra = vec![("spinc", json!(label.a.iter().map(|x| x.to_string()).collect::<Vec<_>>()))];
    let mut notes = Vec::new();
    if o.cross_check {
        if label != g.canonical_label()? {
            return Err(Failure::Precondition("cross-check compares the canonical label only".into()));
        }
        let t = zhat_three_star(&g, order)
            .map_err(|e| Failure::Precondition(format!("cross-check needs the three-star closed form: {e}")))?;
        if let Some(e) = first_difference(&s, &t, order) {
            return Err(Failure::Mismatch(format!("engines differ at q^{e}")));
        }
        let msg = format!("engines agree to q^{order}");
        extra.push(("cross_check", json!(msg)));
        notes.push(msg);
    }
    Ok(emit_series(&s, o.format, extra, &notes))
}

fn parse_cone(s: &str) -> Result<([BigRational; 2], [BigRational; 2]), Failure> {
    let bad = || Failure::Precondition(format!("--cone expects \"c1,c2;d1,d2\", got {s:?}"));
    let vecs: Vec<[BigRational; 2]> = s
        .split(';')
        .map(|v| {
            let parts: Vec<&str> = v.split(',').collect();
            if parts.len() != 2 {
                return Err(bad());
            }
            Ok([big(parse_exp(parts[0]).map_err(|_| bad())?), big(parse_exp(parts[1]).map_err(|_| bad())?)])
        })
        .collect::<Result<_, _>>()?;
    match <[[BigRational; 2]; 2]>::try_from(vecs) {
        Ok([c, d]) => Ok((c, d)),
        Err(_) => Err(bad()),
    }
}

fn reversed(o: &Opts) -> Outcome {
    let g = load_graph(o)?;
    let order = order_or(o, 10)?;
    let data = g
        .three_star_params()
        .map_err(|e| Failure::Precondition(format!("three-star four-node unimodular required: {e}")))?;
    let spec = match &o.cone {
        Some(c) => {
            let (c, d) = parse_cone(c)?;
            IndefThetaSpec::new(&data, c, d)?
        }
        None => IndefThetaSpec::with_default_cone(&data)?,
    };
    let s = zhat_reversed_with(&g, &spec, order)?;
    let mut extra = Vec::new();
    let mut notes = Vec::new();
    if o.against_surgery {
        let slope = SurgerySlope::parse(&o.slope)?;
        let res = surgery_zhat(&figure_eight_fk(), slope, Exp::zero(), order + Exp::from_integer(64))?;
        let (e_s, c_s, n_s) = res
            .normalized()
            .ok_or_else(|| Failure::Precondition("surgery series is empty".into()))?;
        let e_r = s
            .min_exponent()
            .ok_or_else(|| Failure::Precondition("reversed series is empty".into()))?;
        let c_r = s.coeff(e_r);
        let n_r = s.shift(-e_r).scale(&c_r.recip());
        let bound = (res.guaranteed_order - e_s).min(order - e_r);
        if let Some(e) = first_difference(&n_s, &n_r, bound) {
            return Err(Failure::Mismatch(format!("surgery and reversed series differ at q^{e} (relative)")));
        }
        let sign = if (c_s / c_r).is_positive() { "+1" } else { "-1" };
        let last = n_r
            .iter()
            .chain(n_s.iter())
            .map(|(e, _)| *e)
            .filter(|e| *e < bound)
            .max()
            .unwrap_or_else(Exp::zero);
        let msg = format!("match through q^{last} (sign {sign})");
        extra.push(("against_surgery", json!(msg)));
        notes.push(msg);
    }
    Ok(emit_series(&s, o.format, extra, &notes))
}

fn surgery(o: &Opts) -> Outcome {
    let knot = match &o.graph {
        Some(p) => KnotSeries::load(p)?,
        None => figure_eight_fk(),
    };
    let slope = SurgerySlope::parse(&o.slope)?;
    let a = match &o.spinc {
        Some(s) => parse_exp(s)?,
        None => Exp::zero(),
    };
    let order = order_or(o, 12)?;
    let res = surgery_zhat(&knot, slope, a, order)?;
    let g = res.guaranteed_order;
    let mut notes = vec![format!("guaranteed order: q^{g}")];
    let mut extra = vec![("guaranteed_order", json!(g.to_string())), ("slope", json!(slope.to_string()))];
    if let Some((e0, c0, n)) = res.normalized() {
        notes.push(format!("normalized: {c0} * q^{e0} * ({n})"));
        extra.push(("normalized", json!({"exponent": e0.to_string(), "coefficient": c0.to_string(), "series": n.to_json()})));
    }
    Ok(emit_series(&res.series, o.format, extra, &notes))
}

fn parse_grid(s: &str) -> Result<Vec<BigRational>, Failure> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| Ok(big(parse_exp(t)?)))
        .collect()
}

fn emit_radial(r: &RadialReport, format: Format) -> String {
    match format {
        Format::Json => pretty(&r.to_json()),
        Format::Csv => r.to_csv(),
        Format::Plain => r.to_plain(),
    }
}

fn radial(o: &Opts) -> Outcome {
    let x = big(parse_exp(&o.x)?);
    let grid = parse_grid(&o.tgrid)?;
    let tmin = grid
        .iter()
        .min()
        .cloned()
        .ok_or_else(|| Failure::Precondition("--tgrid is empty".into()))?;
    if o.wrt {
        let g = load_graph(o)?;
        if x.is_zero() || !x.numer().is_one() || !x.is_positive() {
            return Err(Failure::Precondition(format!("--wrt needs x = 1/k, got {x}")));
        }
        let k: u64 = x.denom().try_into().map_err(|_| Failure::Precondition("k too large".into()))?;
        let rep = wrt_radial(&g, k, &grid, o.precision, o.jobs)?;
        return Ok(match o.format {
            Format::Json => pretty(&rep.to_json()),
            Format::Csv => rep.radial.to_csv(),
            Format::Plain => {
                let mut out = rep.radial.to_plain();
                out.push_str(&format!("Z(k={k}) without X_00: {} {}\n", rep.display.re.to_decimal_string(24), rep.display.im.to_decimal_string(24)));
                if let Some(w) = &rep.with_x00 {
                    out.push_str(&format!("Z(k={k}) with X_00: {} {}\n", w.re.to_decimal_string(24), w.im.to_decimal_string(24)));
                }
                out
            }
        });
    }
    let s = match (&o.series, &o.graph) {
        (Some(p), _) => {
            let text = std::fs::read_to_string(p).map_err(Error::from)?;
            let v: Value = serde_json::from_str(&text).map_err(|e| Failure::Io(format!("series document: {e}")))?;
            QSeries::from_json(&v)?
        }
        (None, Some(_)) => {
            let g = load_graph(o)?;
            let order = match &o.order {
                Some(s) => parse_exp(s)?,
                None => minimum_order(&tmin, o.precision, 4.0 * g.len() as f64) + Exp::one(),
            };
            zhat_series(&g, order, o.jobs)?
        }
        (None, None) => return Err(Failure::Precondition("--graph or --series is required".into())),
    };
    let r = radial_extrapolate_with(&s, &x, &grid, o.precision, o.jobs)?;
    Ok(emit_radial(&r, o.format))
}

fn params(o: &Opts) -> Outcome {
    let g = load_graph(o)?;
    let t = g.three_star_params()?;
    let four = BigRational::from_integer(4.into());
    let pairs: Vec<(String, String)> = t
        .b
        .iter()
        .zip(&t.c)
        .map(|(b, c)| (b.to_string(), (c * &four).to_string()))
        .collect();
    let ids: Vec<i64> = t.legs.iter().chain([&t.centre]).map(|&i| g.vertices()[i].id).collect();
    Ok(match o.format {
        Format::Json => pretty(&json!({
            "m": t.m.to_string(),
            "vertices": ids,
            "b": t.b.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "four_c": pairs.iter().map(|p| p.1.clone()).collect::<Vec<_>>(),
            "d": t.d.to_string(),
            "prefactor_exponent": t.c_pref.to_string(),
            "sign": t.sign,
        })),
        Format::Csv => {
            let mut out = String::from("vertex,b,four_c\n");
            for (id, (b, c)) in ids.iter().zip(&pairs) {
                out.push_str(&format!("{id},{b},{c}\n"));
            }
            out
        }
        Format::Plain => {
            let mut out = format!("m = {}\n", t.m);
            for (id, (b, c)) in ids.iter().zip(&pairs) {
                out.push_str(&format!("vertex {id}: (b, 4c) = ({b}, {c})\n"));
            }
            out.push_str(&format!("d = {}\nprefactor exponent = {}\nsign = {}\n", t.d, t.c_pref, t.sign));
            out
        }
    })
}

fn falsetheta(o: &Opts) -> Outcome {
    let g = load_graph(o)?;
    let order = order_or(o, 10)?;
    let (m, combo, poly) = three_star_false_theta_combination(&g, order)?;
    let pattern = PeriodicSign::from_false_theta_combination(m, &combo)?;
    let alpha = match asymptotic_coeffs(&pattern, m, 3) {
        Ok(a) => a.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        Err(e) => vec![e.to_string()],
    };
    let theta = pattern.theta_series(m, order);
    Ok(match o.format {
        Format::Json => pretty(&json!({
            "m": m,
            "residues": combo,
            "polynomial": poly.to_json(),
            "theta": theta.to_json(),
            "alpha": alpha,
        })),
        Format::Csv => theta.to_csv(),
        Format::Plain => {
            let terms: Vec<String> = combo.iter().map(|(r, s)| format!("{s}*theta~({m},{r})")).collect();
            let mut out = format!("{}\n", terms.join(" + "));
            out.push_str(&format!("polynomial: {poly}\n"));
            out.push_str(&format!("theta: {theta}\n"));
            for (n, a) in alpha.iter().enumerate() {
                out.push_str(&format!("alpha({n}) = {a}\n"));
            }
            out
        }
    })
}
