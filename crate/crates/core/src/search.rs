//! Thresholds, parameter sweeps, sharing windows and the four-party region.
//! Works in `f64`; sweeps and grids are evaluated in parallel with rayon.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measurements::{luders_update, CaseId, StrategyMixture};
use crate::qmath::BlochVector;
use crate::scenario::{four_party_radii, run_chain, ChainConfig, FourPartyRadii};
use crate::states::{state_family, StateParams};
use crate::steering::{
    analytic_radius, assemblage_from_directions, assemblage_from_mixture, classify, mixture_radius, steering_radius,
    Link, Side, SteeringClass,
};

/// How radii are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// Closed forms.
    Analytic,
    /// Local-hidden-state solver.
    Numeric,
    /// Both, plus their absolute difference.
    Both,
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(Method::Analytic),
            "numeric" => Ok(Method::Numeric),
            "both" => Ok(Method::Both),
            _ => Err(Error::InvalidParams(format!("unknown method '{s}'"))),
        }
    }
}

/// The two-strategy mixtures studied for sharing windows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MixturePair {
    /// Case 1 with weight `p`, case 3 with `1 − p`.
    OneThree,
    /// Case 1 with weight `p`, case 2 with `1 − p`.
    OneTwo,
    /// Case 2 with weight `p`, case 3 with `1 − p`.
    TwoThree,
}

impl MixturePair {
    /// `(p, q)`: weights of cases 1 and 2 for the pair parameter `p`.
    pub fn weights(self, p: f64) -> (f64, f64) {
        match self {
            MixturePair::OneThree => (p, 0.0),
            MixturePair::OneTwo => (p, 1.0 - p),
            MixturePair::TwoThree => (0.0, p),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            MixturePair::OneThree => "1,3",
            MixturePair::OneTwo => "1,2",
            MixturePair::TwoThree => "2,3",
        }
    }
}

impl FromStr for MixturePair {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut ids: Vec<&str> = s.split([',', '&']).map(str::trim).collect();
        ids.sort_unstable();
        match ids.as_slice() {
            ["1", "3"] => Ok(MixturePair::OneThree),
            ["1", "2"] => Ok(MixturePair::OneTwo),
            ["2", "3"] => Ok(MixturePair::TwoThree),
            _ => Err(Error::InvalidParams(format!("unknown mixture pair '{s}'"))),
        }
    }
}

impl fmt::Display for MixturePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Bob's strategy in a three-party chain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StrategySpec {
    Case(CaseId),
    /// Pair mixture at parameter `p`.
    Pair(MixturePair, f64),
    /// Cases 1, 2, 3 with weights `p`, `q`, `1 − p − q`.
    Weights {
        p: f64,
        q: f64,
    },
}

impl StrategySpec {
    /// Weights `(p, q)` of cases 1 and 2.
    pub fn weights(&self) -> (f64, f64) {
        match *self {
            StrategySpec::Case(CaseId::One) => (1.0, 0.0),
            StrategySpec::Case(CaseId::Two) => (0.0, 1.0),
            StrategySpec::Case(CaseId::Three) => (0.0, 0.0),
            StrategySpec::Pair(pair, p) => pair.weights(p),
            StrategySpec::Weights { p, q } => (p, q),
        }
    }

    pub fn mixture(&self) -> Result<StrategyMixture<f64>> {
        match *self {
            StrategySpec::Case(c) => Ok(StrategyMixture::case(c)),
            _ => {
                let (p, q) = self.weights();
                StrategyMixture::from_pq(p, q)
            }
        }
    }

    /// Same strategy with the mixture parameter replaced by `p`.
    fn with_p(&self, p: f64) -> Result<Self> {
        match *self {
            StrategySpec::Pair(pair, _) => Ok(StrategySpec::Pair(pair, p)),
            StrategySpec::Weights { q, .. } => Ok(StrategySpec::Weights { p, q }),
            StrategySpec::Case(_) => Err(Error::InvalidParams("cannot sweep p for a pure case".into())),
        }
    }
}

/// Radii of the four links `[AB, BA, AC, CA]` of Alice – Bob – Charlie.
pub fn chain_radii(
    params: StateParams<f64>,
    strategy: &StrategySpec,
    links: &[Link],
    numeric: bool,
) -> Result<[Option<f64>; 4]> {
    let mut out = [None; 4];
    if numeric {
        let xz = [BlochVector::unit_x(), BlochVector::unit_z()];
        let rho = state_family(params)?;
        let mixture = strategy.mixture()?;
        let rho_ac = luders_update(&rho, &mixture);
        for &link in links {
            let asm = match link {
                Link::AB => assemblage_from_directions(&rho, Side::A, &xz)?,
                Link::BA => assemblage_from_mixture(&rho, &mixture),
                Link::AC => assemblage_from_directions(&rho_ac, Side::A, &xz)?,
                Link::CA => assemblage_from_directions(&rho_ac, Side::B, &xz)?,
            };
            let r = steering_radius(&asm).map_err(|e| e.at_link(link.as_str()))?;
            out[link as usize] = Some(r.radius);
        }
    } else {
        for &link in links {
            out[link as usize] = Some(match *strategy {
                StrategySpec::Case(c) => analytic_radius(c, link, params)?,
                _ => {
                    let (p, q) = strategy.weights();
                    mixture_radius(link, p, q, params)?
                }
            });
        }
    }
    Ok(out)
}

/// Swept variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SweepVar {
    W,
    P,
    Theta,
}

impl SweepVar {
    pub fn name(self) -> &'static str {
        match self {
            SweepVar::W => "W",
            SweepVar::P => "p",
            SweepVar::Theta => "theta",
        }
    }
}

impl FromStr for SweepVar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "W" | "w" => Ok(SweepVar::W),
            "p" | "P" => Ok(SweepVar::P),
            "theta" => Ok(SweepVar::Theta),
            _ => Err(Error::InvalidParams(format!("unknown sweep variable '{s}'"))),
        }
    }
}

/// A one-dimensional sweep over the three-party chain.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVar,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
    /// Values of the variables that are not swept.
    pub params: StateParams<f64>,
    pub strategy: StrategySpec,
    pub links: Vec<Link>,
    pub method: Method,
}

impl SweepSpec {
    pub fn check(&self) -> Result<()> {
        if !(self.lo < self.hi) || self.steps < 2 {
            return Err(Error::InvalidParams(format!(
                "sweep needs lo < hi and steps >= 2 (got {}..{} in {} steps)",
                self.lo, self.hi, self.steps
            )));
        }
        if self.variable == SweepVar::P && matches!(self.strategy, StrategySpec::Case(_)) {
            return Err(Error::InvalidParams("a p-sweep needs a mixture".into()));
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        let n = self.steps - 1;
        (0..=n).map(|i| self.lo + (self.hi - self.lo) * i as f64 / n as f64).collect()
    }

    fn point(&self, x: f64) -> Result<(StateParams<f64>, StrategySpec)> {
        let mut params = self.params;
        let mut strategy = self.strategy;
        match self.variable {
            SweepVar::W => params.w = x,
            SweepVar::Theta => params.theta = x,
            SweepVar::P => strategy = strategy.with_p(x)?,
        }
        params.check()?;
        Ok((params, strategy))
    }
}

/// What a sweep row holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RowKind {
    Analytic,
    Numeric,
    AbsDiff,
}

impl RowKind {
    pub fn label(self) -> &'static str {
        match self {
            RowKind::Analytic => "analytic",
            RowKind::Numeric => "numeric",
            RowKind::AbsDiff => "abs_diff",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub param: f64,
    pub kind: RowKind,
    /// `[AB, BA, AC, CA]`; `None` for links not requested or not computed.
    pub radii: [Option<f64>; 4],
    pub class_ab: Option<SteeringClass>,
    pub class_ac: Option<SteeringClass>,
    /// `None` on success, otherwise the failure message.
    pub error: Option<String>,
}

impl SweepRow {
    fn new(param: f64, kind: RowKind, radii: Result<[Option<f64>; 4]>) -> Self {
        match radii {
            Ok(radii) => {
                let pair = |f: usize, b: usize| match (radii[f], radii[b]) {
                    (Some(x), Some(y)) if kind != RowKind::AbsDiff => Some(classify(x, y)),
                    _ => None,
                };
                Self { param, kind, radii, class_ab: pair(0, 1), class_ac: pair(2, 3), error: None }
            }
            Err(e) => {
                Self { param, kind, radii: [None; 4], class_ab: None, class_ac: None, error: Some(e.to_string()) }
            }
        }
    }

    pub fn ok(&self) -> bool {
        self.error.is_none()
    }

    /// All requested radii strictly above 1.
    pub fn all_steer(&self) -> bool {
        self.ok() && self.radii.iter().flatten().all(|&r| r > 1.0)
    }
}

/// Evaluates the sweep; rows come back in ascending parameter order, and per
/// parameter in the order analytic, numeric, abs_diff.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.check()?;
    let grid = spec.grid();
    let rows: Vec<Vec<SweepRow>> = grid
        .par_iter()
        .map(|&x| {
            let point = spec.point(x);
            let eval = |numeric: bool| -> Result<[Option<f64>; 4]> {
                let (params, strategy) = point.clone()?;
                chain_radii(params, &strategy, &spec.links, numeric)
            };
            match spec.method {
                Method::Analytic => vec![SweepRow::new(x, RowKind::Analytic, eval(false))],
                Method::Numeric => vec![SweepRow::new(x, RowKind::Numeric, eval(true))],
                Method::Both => {
                    let a = eval(false);
                    let n = eval(true);
                    let diff = match (&a, &n) {
                        (Ok(a), Ok(n)) => {
                            let mut d = [None; 4];
                            for k in 0..4 {
                                if let (Some(x), Some(y)) = (a[k], n[k]) {
                                    d[k] = Some((x - y).abs());
                                }
                            }
                            Ok(d)
                        }
                        (Err(e), _) | (_, Err(e)) => Err(e.clone()),
                    };
                    vec![
                        SweepRow::new(x, RowKind::Analytic, a),
                        SweepRow::new(x, RowKind::Numeric, n),
                        SweepRow::new(x, RowKind::AbsDiff, diff),
                    ]
                }
            }
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

const SCAN_POINTS: usize = 200;

/// Bisects a sign change of `f` between `a` (where `f` is `fa`) and `b`.
fn bisect_bool(f: impl Fn(f64) -> Result<bool>, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)> {
    let fa = f(a)?;
    while (b - a).abs() > tol {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        if f(m)? == fa {
            a = m;
        } else {
            b = m;
        }
    }
    Ok((a, b))
}

/// Parameter at which `radius_fn` crosses 1 on `[lo, hi]`, to within 1e-9.
///
/// The function is sampled on a 200-point grid first; it must be monotone
/// there (up to 1e-9 jitter) and change sides of 1 exactly once.
pub fn threshold_scan(radius_fn: impl Fn(f64) -> Result<f64> + Sync, lo: f64, hi: f64) -> Result<f64> {
    if !(lo < hi) {
        return Err(Error::InvalidParams(format!("empty range [{lo}, {hi}]")));
    }
    let xs: Vec<f64> = (0..SCAN_POINTS).map(|i| lo + (hi - lo) * i as f64 / (SCAN_POINTS - 1) as f64).collect();
    let rs: Vec<f64> = xs.par_iter().map(|&x| radius_fn(x)).collect::<Result<_>>()?;
    let jitter = 1e-9;
    let up = rs.windows(2).all(|w| w[1] >= w[0] - jitter);
    let down = rs.windows(2).all(|w| w[1] <= w[0] + jitter);
    if !up && !down {
        return Err(Error::NonMonotone);
    }
    let above: Vec<bool> = rs.iter().map(|&r| r > 1.0).collect();
    let k = above.windows(2).position(|w| w[0] != w[1]).ok_or(Error::NoCrossing { lo, hi })?;
    let (a, b) = bisect_bool(|x| Ok(radius_fn(x)? > 1.0), xs[k], xs[k + 1], 1e-10)?;
    Ok(0.5 * (a + b))
}

/// Maximal `p`-interval in `[0, 1]` on which both Alice–Bob and
/// Alice–Charlie steer two-way; `None` if there is none.
pub fn two_way_sharing_window(
    params: StateParams<f64>,
    pair: MixturePair,
    method: Method,
) -> Result<Option<(f64, f64)>> {
    params.check()?;
    let numeric = method == Method::Numeric;
    let pred = |p: f64| -> Result<bool> {
        let r = chain_radii(params, &StrategySpec::Pair(pair, p), &Link::ALL, numeric)?;
        let r = r.map(|x| x.expect("all links requested"));
        Ok(classify(r[0], r[1]) == SteeringClass::TwoWay && classify(r[2], r[3]) == SteeringClass::TwoWay)
    };
    let n = SCAN_POINTS;
    let xs: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
    let flags: Vec<bool> = xs.par_iter().map(|&p| pred(p)).collect::<Result<_>>()?;

    // longest run of grid points inside the window
    let mut best: Option<(usize, usize)> = None;
    let mut i = 0;
    while i <= n {
        if flags[i] {
            let start = i;
            while i < n && flags[i + 1] {
                i += 1;
            }
            if best.is_none_or(|(s, e)| i - start > e - s) {
                best = Some((start, i));
            }
        }
        i += 1;
    }
    let Some((s, e)) = best else {
        return Ok(None);
    };
    let tol = 1e-7;
    let lo = if s == 0 { 0.0 } else { bisect_bool(pred, xs[s - 1], xs[s], tol)?.1 };
    let hi = if e == n { 1.0 } else { bisect_bool(pred, xs[e], xs[e + 1], tol)?.0 };
    Ok(Some((lo, hi)))
}

/// `p₂` interval admitting all six strict inequalities at one `p₁`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegionSlice {
    pub p1: f64,
    pub p2_lo: f64,
    pub p2_hi: f64,
}

/// Interior point of the region with its radii.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub p1: f64,
    pub p2: f64,
    pub closed_form: [f64; 6],
    /// Radii recomputed by the chain simulation with the LHS solver.
    pub numeric: [f64; 6],
    /// Smallest `R − 1` of the closed forms.
    pub margin: f64,
    /// All six numeric radii agree on "R > 1".
    pub verified: bool,
}

/// Four-party sharing region in the `(p₁, p₂)` plane at `q₁ = q₂ = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct RegionResult {
    pub disclosure: bool,
    /// Supremum of `p₁` with a non-empty `p₂` interval.
    pub p1_upper: f64,
    pub slices: Vec<RegionSlice>,
    pub witness: Witness,
}

fn region_margin(p1: f64, p2: f64, disclosure: bool) -> f64 {
    four_party_radii(p1, 0.0, p2, 0.0, disclosure)
        .map(|r: FourPartyRadii<f64>| r.min_margin())
        .unwrap_or(f64::NEG_INFINITY)
}

/// Best `p₂` for `p₁` by golden-section search on the smallest margin,
/// which is unimodal in `p₂` because every radius is monotone in it.
fn best_p2(p1: f64, disclosure: bool) -> (f64, f64) {
    let f = |p2: f64| region_margin(p1, p2, disclosure);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (0.0, 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-13 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

pub fn four_party_region(disclosure: bool) -> Result<RegionResult> {
    let n = SCAN_POINTS;
    let (lmin, lmax) = (1e-6f64.ln(), 0.0f64);
    let p1s: Vec<f64> = (0..n).map(|i| (lmin + (lmax - lmin) * i as f64 / (n - 1) as f64).exp()).collect();
    let best: Vec<(f64, f64)> = p1s.par_iter().map(|&p1| best_p2(p1, disclosure)).collect();

    let last = best.iter().rposition(|&(_, m)| m > 0.0).ok_or(Error::NoCrossing { lo: p1s[0], hi: 1.0 })?;
    let p1_upper = if last + 1 == n {
        1.0
    } else {
        let (a, _) = bisect_bool(|p1| Ok(best_p2(p1, disclosure).1 > 0.0), p1s[last], p1s[last + 1], 1e-12)?;
        a
    };

    let mut slices = Vec::new();
    for (&p1, &(p2, m)) in p1s.iter().zip(&best) {
        if m <= 0.0 {
            continue;
        }
        let inside = |x: f64| Ok(region_margin(p1, x, disclosure) > 0.0);
        let p2_lo = if inside(0.0)? { 0.0 } else { bisect_bool(inside, 0.0, p2, 1e-12)?.1 };
        let p2_hi = if inside(1.0)? { 1.0 } else { bisect_bool(inside, p2, 1.0, 1e-12)?.0 };
        slices.push(RegionSlice { p1, p2_lo, p2_hi });
    }

    let (wi, &(wp2, margin)) =
        best.iter().enumerate().max_by(|a, b| a.1 .1.partial_cmp(&b.1 .1).unwrap()).expect("non-empty grid");
    let wp1 = p1s[wi];
    let closed_form = four_party_radii(wp1, 0.0, wp2, 0.0, disclosure)?.as_array();
    let params = StateParams::new(1.0, std::f64::consts::FRAC_PI_4)?;
    let bobs = vec![StrategyMixture::from_pq(wp1, 0.0)?, StrategyMixture::from_pq(wp2, 0.0)?];
    let report = run_chain(&ChainConfig::new(params, bobs).with_disclosure(disclosure))?;
    let radii = report.radii();
    let numeric: [f64; 6] = std::array::from_fn(|k| radii[k]);
    let verified = numeric.iter().zip(&closed_form).all(|(a, b)| (*a > 1.0) == (*b > 1.0));
    Ok(RegionResult {
        disclosure,
        p1_upper,
        slices,
        witness: Witness { p1: wp1, p2: wp2, closed_form, numeric, margin, verified },
    })
}
