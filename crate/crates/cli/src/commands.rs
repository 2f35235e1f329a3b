use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;

use seqsteer::{
    chain_radii, classify, four_party_region, run_chain, sweep, two_way_sharing_window, ChainConfigF64, Link, Method,
    MixturePair, StateParamsF64, SteeringClass, StrategySpec, SweepSpec, SweepVar,
};

use crate::args::{ChainArgs, MethodArgs, RadiusArgs, RegionArgs, Scenario, SweepArgs};
use crate::output::{sig, Meta, Table, Value};
use crate::strategy::{bob_from_weights, describe, parse_bob, parse_bob_list, strategy_spec, Bob};
use crate::CliError;

pub const SWEEP_SCHEMA: &str = "seqsteer.sweep.v1";
pub const RADIUS_SCHEMA: &str = "seqsteer.radius.v1";
pub const CHAIN_SCHEMA: &str = "seqsteer.chain.v1";
pub const FOUR_PARTY_SCHEMA: &str = "seqsteer.region.four_party.v1";
pub const WINDOW_SCHEMA: &str = "seqsteer.region.window.v1";

/// A finished command: the table to write and, possibly, a failure to
/// report after writing it.
pub struct Report {
    pub table: Table,
    pub meta: Meta,
    pub failure: Option<CliError>,
}

impl Report {
    fn ok(table: Table, meta: Meta) -> Self {
        Self { table, meta, failure: None }
    }
}

fn class_label(c: Option<SteeringClass>) -> Value {
    c.map_or(Value::Empty, |c| c.label().into())
}

fn links_text(links: &[Link]) -> String {
    links.iter().map(|l| l.as_str()).collect::<Vec<_>>().join(",")
}

pub fn radius(a: &RadiusArgs) -> Result<Report, CliError> {
    let params = StateParamsF64::new(a.state.w, a.state.theta_rad())?;
    let spec = strategy_spec(&a.strategy, false)?;
    spec.mixture()?;
    let method = a.method.resolve(Method::Numeric);
    let links = a.link.map_or_else(|| Link::ALL.to_vec(), |l| vec![l]);
    let analytic = match method {
        Method::Numeric => None,
        _ => Some(chain_radii(params, &spec, &links, false)?),
    };
    let numeric = match method {
        Method::Analytic => None,
        _ => Some(chain_radii(params, &spec, &links, true)?),
    };
    let strategy = describe(&spec);
    let mut table =
        Table::new(RADIUS_SCHEMA, &["strategy", "link", "W", "theta", "method", "R_analytic", "R_numeric", "abs_diff"]);
    for &link in &links {
        let an = analytic.and_then(|r| r[link as usize]);
        let nu = numeric.and_then(|r| r[link as usize]);
        let diff = an.zip(nu).map(|(x, y)| (x - y).abs());
        table.push(vec![
            strategy.as_str().into(),
            link.as_str().into(),
            params.w.into(),
            params.theta.into(),
            method_name(method).into(),
            an.into(),
            nu.into(),
            diff.into(),
        ]);
    }
    let meta = Meta::new("radius")
        .with("W", sig(params.w))
        .with("theta", sig(params.theta))
        .with("strategy", &strategy)
        .with("links", links_text(&links))
        .with("method", method_name(method));
    Ok(Report::ok(table, meta))
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Analytic => "analytic",
        Method::Numeric => "numeric",
        Method::Both => "both",
    }
}

pub fn sweep_cmd(a: &SweepArgs) -> Result<Report, CliError> {
    let angle = |x: f64| if a.var == SweepVar::Theta { a.state.to_radians(x) } else { x };
    let lo = a.from.map_or(0.0, angle);
    let hi = a.to.map_or(if a.var == SweepVar::Theta { FRAC_PI_4 } else { 1.0 }, angle);
    let theta = a.state.theta_rad();
    let w = a.state.w;
    // the swept coordinate is validated per row
    let params = StateParamsF64 {
        w: if a.var == SweepVar::W { 1.0 } else { w },
        theta: if a.var == SweepVar::Theta { FRAC_PI_4 } else { theta },
    };
    params.check()?;
    let strategy = strategy_spec(&a.strategy, a.var == SweepVar::P)?;
    if a.var == SweepVar::P && a.strategy.p.is_some() {
        return Err(CliError::Usage("--p is the swept variable; drop it".into()));
    }
    let links = if a.links.is_empty() { Link::ALL.to_vec() } else { a.links.clone() };
    let method = a.method.resolve(Method::Numeric);
    let spec = SweepSpec { variable: a.var, lo, hi, steps: a.steps, params, strategy, links, method };
    let rows = sweep(&spec)?;

    let mut table = Table::new(
        SWEEP_SCHEMA,
        &["param_name", "param_value", "R_AB", "R_BA", "R_AC", "R_CA", "class_AB", "class_AC", "method", "status"],
    );
    for r in &rows {
        let status = match &r.error {
            None => "ok".to_string(),
            Some(e) => format!("error: {e}"),
        };
        let mut row = vec![a.var.name().into(), r.param.into()];
        row.extend(r.radii.iter().map(|&x| Value::from(x)));
        row.extend([class_label(r.class_ab), class_label(r.class_ac), r.kind.label().into(), status.into()]);
        table.push(row);
    }
    let mut meta = Meta::new("sweep")
        .with("var", a.var.name())
        .with("from", sig(lo))
        .with("to", sig(hi))
        .with("steps", a.steps)
        .with("strategy", describe(&strategy))
        .with("links", links_text(&spec.links))
        .with("method", method_name(method));
    if a.var != SweepVar::W {
        meta = meta.with("W", sig(w));
    }
    if a.var != SweepVar::Theta {
        meta = meta.with("theta", sig(theta));
    }
    let failure = if rows.iter().any(|r| r.ok()) {
        None
    } else {
        let first = rows.iter().find_map(|r| r.error.clone()).unwrap_or_default();
        Some(CliError::Solver(format!("no sweep row succeeded; first error: {first}")))
    };
    Ok(Report { table, meta, failure })
}

fn indexed(entries: &[String], flag: &str) -> Result<BTreeMap<usize, String>, CliError> {
    let mut out = BTreeMap::new();
    for e in entries {
        let (n, v) = e.split_once('=').ok_or_else(|| CliError::Usage(format!("--{flag}N needs a value")))?;
        let n: usize = n
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Usage(format!("--{flag}{n}: Bobs are numbered from 1")))?;
        if out.insert(n, v.to_string()).is_some() {
            return Err(CliError::Usage(format!("--{flag}{n} given twice")));
        }
    }
    Ok(out)
}

fn number(flag: &str, n: usize, v: &str) -> Result<f64, CliError> {
    v.trim().parse().map_err(|_| CliError::Usage(format!("--{flag}{n}: `{v}` is not a number")))
}

/// Bobs from `--bobs`, `--bobN` and `--pN`/`--qN`.
fn chain_bobs(a: &ChainArgs) -> Result<Vec<Bob>, CliError> {
    let joined = a.bobs.join(" ");
    let mut bobs: Vec<Option<Bob>> = match joined.trim().parse::<usize>() {
        Ok(n) => vec![None; n],
        Err(_) if a.bobs.is_empty() => Vec::new(),
        Err(_) => parse_bob_list(&a.bobs)?.into_iter().map(Some).collect(),
    };
    let counted = joined.trim().parse::<usize>().is_ok();
    for (n, spec) in indexed(&a.bob_at, "bob")? {
        if bobs.len() < n {
            bobs.resize(n, None);
        }
        bobs[n - 1] = Some(parse_bob(&spec)?);
    }
    let ps = indexed(&a.p_at, "p")?;
    let qs = indexed(&a.q_at, "q")?;
    let weighted: std::collections::BTreeSet<usize> = ps.keys().chain(qs.keys()).copied().collect();
    for n in weighted {
        if !counted && n <= bobs.len() && bobs[n - 1].is_some() {
            return Err(CliError::Usage(format!("Bob {n} is already described; --p{n}/--q{n} apply to `--bobs N`")));
        }
        let p = ps.get(&n).map_or(Ok(0.0), |v| number("p", n, v))?;
        let q = qs.get(&n).map_or(Ok(0.0), |v| number("q", n, v))?;
        if bobs.len() < n {
            bobs.resize(n, None);
        }
        bobs[n - 1] = Some(bob_from_weights([p, q, 1.0 - p - q])?);
    }
    if counted {
        // a counted Bob without weights measures case 3
        for b in bobs.iter_mut().filter(|b| b.is_none()) {
            *b = Some(bob_from_weights([0.0, 0.0, 1.0])?);
        }
    }
    if bobs.is_empty() {
        return Err(CliError::Usage("describe the Bobs with --bobs or --bob1 …".into()));
    }
    bobs.into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| CliError::Usage(format!("Bob {} is not described", i + 1))))
        .collect()
}

pub fn chain(a: &ChainArgs) -> Result<Report, CliError> {
    let params = StateParamsF64::new(a.state.w, a.state.theta_rad())?;
    let bobs = chain_bobs(a)?;
    let config =
        ChainConfigF64::new(params, bobs.iter().map(|b| b.mixture.clone()).collect()).with_disclosure(a.disclosure);
    let report = run_chain(&config)?;
    let mut table = Table::new(
        CHAIN_SCHEMA,
        &["index", "party", "strategy", "R_forward", "R_backward", "class", "certificate_residual"],
    );
    for (i, link) in report.links.iter().enumerate() {
        let strategy = bobs.get(i).map_or(Value::Empty, |b| b.label.as_str().into());
        table.push(vec![
            Value::Num((i + 1) as f64),
            link.party.as_str().into(),
            strategy,
            link.r_forward.into(),
            link.r_backward.into(),
            link.class.label().into(),
            link.residual.into(),
        ]);
    }
    let labels: Vec<&str> = bobs.iter().map(|b| b.label.as_str()).collect();
    let meta = Meta::new("chain")
        .with("W", sig(params.w))
        .with("theta", sig(params.theta))
        .with("bobs", labels.join(";"))
        .with("disclosure", a.disclosure);
    Ok(Report::ok(table, meta))
}

fn method_given(m: &MethodArgs) -> bool {
    m.method.is_some() || m.analytic || m.numeric || m.both
}

pub fn region(a: &RegionArgs) -> Result<Report, CliError> {
    match a.scenario {
        Scenario::FourParty => four_party(a),
        Scenario::Window => window(a),
    }
}

fn four_party(a: &RegionArgs) -> Result<Report, CliError> {
    if a.mix.is_some() || method_given(&a.method) {
        return Err(CliError::Usage("--mix and method flags apply to --scenario window".into()));
    }
    if a.state.w != 1.0 || a.state.theta.is_some() {
        return Err(CliError::Usage("the four-party scenario is fixed at W = 1, θ = π/4".into()));
    }
    let r = four_party_region(a.disclosure)?;
    let mut table = Table::new(
        FOUR_PARTY_SCHEMA,
        &[
            "record", "p1", "p2", "p2_lo", "p2_hi", "R_AB1", "R_B1A", "R_AB2", "R_B2A", "R_AC", "R_CA", "margin",
            "verified",
        ],
    );
    let blank = |n: usize| vec![Value::Empty; n];
    let mut bound = vec!["p1_upper".into(), r.p1_upper.into()];
    bound.extend(blank(11));
    table.push(bound);
    for s in &r.slices {
        let mut row = vec!["slice".into(), s.p1.into(), Value::Empty, s.p2_lo.into(), s.p2_hi.into()];
        row.extend(blank(8));
        table.push(row);
    }
    let w = &r.witness;
    let numeric_margin = w.numeric.iter().map(|x| x - 1.0).fold(f64::INFINITY, f64::min);
    for (record, radii, margin) in
        [("witness_closed_form", &w.closed_form, w.margin), ("witness_numeric", &w.numeric, numeric_margin)]
    {
        let mut row = vec![record.into(), w.p1.into(), w.p2.into(), Value::Empty, Value::Empty];
        row.extend(radii.iter().map(|&x| Value::from(x)));
        row.extend([margin.into(), w.verified.into()]);
        table.push(row);
    }
    let meta = Meta::new("region").with("scenario", "four-party").with("disclosure", a.disclosure);
    Ok(Report::ok(table, meta))
}

fn window(a: &RegionArgs) -> Result<Report, CliError> {
    if a.disclosure {
        return Err(CliError::Usage("--disclosure applies to --scenario four-party".into()));
    }
    let params = StateParamsF64::new(a.state.w, a.state.theta_rad())?;
    let text = a.mix.as_deref().unwrap_or("1,3");
    let pair: MixturePair = text
        .strip_prefix("mix:")
        .unwrap_or(text)
        .parse()
        .map_err(|e: seqsteer::Error| CliError::Usage(e.to_string()))?;
    let method = a.method.resolve(Method::Numeric);
    let found = two_way_sharing_window(params, pair, method)?;
    let mut table = Table::new(
        WINDOW_SCHEMA,
        &["pair", "W", "theta", "record", "p", "p_lo", "p_hi", "R_AB", "R_BA", "R_AC", "R_CA", "class_AB", "class_AC"],
    );
    let head =
        |record: &str| -> Vec<Value> { vec![pair.label().into(), params.w.into(), params.theta.into(), record.into()] };
    match found {
        None => {
            let mut row = head("empty");
            row.extend(vec![Value::Empty; 9]);
            table.push(row);
        }
        Some((lo, hi)) => {
            let mut row = head("window");
            row.extend([Value::Empty, lo.into(), hi.into()]);
            row.extend(vec![Value::Empty; 6]);
            table.push(row);
            let mid = 0.5 * (lo + hi);
            let r = chain_radii(params, &StrategySpec::Pair(pair, mid), &Link::ALL, method != Method::Analytic)?;
            let radii: Vec<f64> = r.iter().map(|x| x.expect("all links")).collect();
            let mut row = head("witness");
            row.extend([mid.into(), Value::Empty, Value::Empty]);
            row.extend(radii.iter().map(|&x| Value::from(x)));
            row.extend([classify(radii[0], radii[1]).label().into(), classify(radii[2], radii[3]).label().into()]);
            table.push(row);
        }
    }
    let meta = Meta::new("region")
        .with("scenario", "window")
        .with("pair", pair.label())
        .with("W", sig(params.w))
        .with("theta", sig(params.theta))
        .with("method", method_name(method));
    Ok(Report::ok(table, meta))
}
