//! Strategy and Bob syntax: `case3`, `mix:1@0.2,3`, `mix:1@p,2@q,3`, `1,3`.

use seqsteer::{CaseId, MixturePair, StrategyMixtureF64, StrategySpec};

use crate::args::StrategyArgs;
use crate::output::sig;
use crate::CliError;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn case_id(s: &str) -> Result<CaseId, CliError> {
    let n: u32 = s.trim().parse().map_err(|_| usage(format!("`{s}` is not a case number")))?;
    CaseId::try_from(n).map_err(|e| usage(e.to_string()))
}

/// Weights of cases 1, 2, 3 from `1@0.2,3`-style text; the one case without
/// a weight takes the remainder.
pub fn parse_weights(body: &str) -> Result<[f64; 3], CliError> {
    let mut w = [None; 3];
    let mut rest = None;
    for part in body.split(',') {
        let (case, weight) = match part.split_once('@') {
            Some((c, p)) => {
                let p: f64 = p.trim().parse().map_err(|_| usage(format!("bad weight in `{part}`")))?;
                (case_id(c)?, Some(p))
            }
            None => (case_id(part)?, None),
        };
        let k = case.number() as usize - 1;
        if w[k].is_some() || rest == Some(k) {
            return Err(usage(format!("case {} appears twice in `{body}`", k + 1)));
        }
        match weight {
            Some(p) => w[k] = Some(p),
            None if rest.is_none() => rest = Some(k),
            None => return Err(usage(format!("`{body}` leaves more than one weight open"))),
        }
    }
    let given: f64 = w.iter().flatten().sum();
    let mut out = w.map(|x| x.unwrap_or(0.0));
    if let Some(k) = rest {
        out[k] = 1.0 - given;
    }
    if out.iter().any(|&x| x.is_nan() || x < 0.0) || (out.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
        return Err(usage(format!("weights of `{body}` must be non-negative and sum to 1")));
    }
    Ok(out)
}

/// Strategy from `--case` / `--mix` / `--p`. `p_swept` allows a pair without `--p`.
pub fn strategy_spec(args: &StrategyArgs, p_swept: bool) -> Result<StrategySpec, CliError> {
    match (args.case, &args.mix) {
        (Some(n), None) => {
            if args.p.is_some() {
                return Err(usage("--p applies to --mix only"));
            }
            Ok(StrategySpec::Case(CaseId::try_from(n).map_err(|e| usage(e.to_string()))?))
        }
        (None, Some(mix)) => {
            let body = mix.strip_prefix("mix:").unwrap_or(mix);
            if body.contains('@') {
                if args.p.is_some() {
                    return Err(usage("--p conflicts with weights given in --mix"));
                }
                let [p, q, _] = parse_weights(body)?;
                return Ok(StrategySpec::Weights { p, q });
            }
            let pair: MixturePair = body.parse().map_err(|e: seqsteer::Error| usage(e.to_string()))?;
            match args.p {
                Some(p) => Ok(StrategySpec::Pair(pair, p)),
                None if p_swept => Ok(StrategySpec::Pair(pair, 0.0)),
                None => Err(usage(format!("--mix {body} needs --p"))),
            }
        }
        (None, None) => Err(usage("choose a strategy with --case or --mix")),
        (Some(_), Some(_)) => Err(usage("--case and --mix are exclusive")),
    }
}

/// Canonical text of a strategy, used in output and hashes.
pub fn describe(spec: &StrategySpec) -> String {
    match spec {
        StrategySpec::Case(c) => c.to_string(),
        StrategySpec::Pair(pair, p) => format!("mix:{}@{p},{}", &pair.label()[..1], &pair.label()[2..]),
        StrategySpec::Weights { p, q } => format!("mix:1@{p},2@{q},3"),
    }
}

/// One Bob of a chain with its canonical label.
#[derive(Clone, Debug)]
pub struct Bob {
    pub label: String,
    pub mixture: StrategyMixtureF64,
}

pub fn parse_bob(spec: &str) -> Result<Bob, CliError> {
    let s = spec.trim();
    let weights = if let Some(body) = s.strip_prefix("mix:") {
        parse_weights(body)?
    } else {
        let n = s.strip_prefix("case").unwrap_or(s);
        let mut w = [0.0; 3];
        w[case_id(n)?.number() as usize - 1] = 1.0;
        w
    };
    bob_from_weights(weights)
}

pub fn bob_from_weights(w: [f64; 3]) -> Result<Bob, CliError> {
    let cases = [CaseId::One, CaseId::Two, CaseId::Three];
    let pairs: Vec<(f64, CaseId)> = w.iter().copied().zip(cases).collect();
    let mixture = StrategyMixtureF64::from_cases(&pairs).map_err(|e| usage(e.to_string()))?;
    let label = match w.iter().position(|&x| x == 1.0) {
        Some(k) => format!("case{}", k + 1),
        None => format!("mix:1@{},2@{},3@{}", sig(w[0]), sig(w[1]), sig(w[2])),
    };
    Ok(Bob { label, mixture })
}

/// The `--bobs` list. Items are comma separated; a mixture keeps the
/// comma-separated parts that follow it, and `xN` repeats an item.
pub fn parse_bob_list(words: &[String]) -> Result<Vec<Bob>, CliError> {
    let text = words.join(" ");
    let mut items: Vec<String> = Vec::new();
    for part in text.split(',') {
        let starts_with_case = part.trim_start().starts_with(|c: char| c.is_ascii_digit());
        match items.last_mut() {
            Some(prev) if starts_with_case && prev.trim_start().starts_with("mix:") => {
                prev.push(',');
                prev.push_str(part.trim());
            }
            _ => items.push(part.trim().to_string()),
        }
    }
    let mut bobs = Vec::new();
    for item in items {
        // `mix:1@0.2,3 x4`: the repeat follows the last part
        let mut words = item.split_whitespace();
        let spec = words.next().ok_or_else(|| usage("empty entry in --bobs"))?;
        let times = match words.next() {
            None => 1,
            Some(r) => r
                .strip_prefix('x')
                .or_else(|| r.strip_prefix('×'))
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|&n| n > 0)
                .ok_or_else(|| usage(format!("`{r}` is not a repeat count like x20")))?,
        };
        if let Some(extra) = words.next() {
            return Err(usage(format!("unexpected `{extra}` in --bobs")));
        }
        let bob = parse_bob(spec)?;
        bobs.extend(std::iter::repeat_n(bob, times));
    }
    Ok(bobs)
}
