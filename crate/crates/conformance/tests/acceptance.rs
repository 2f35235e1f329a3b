//! Acceptance run: one line per criterion, non-zero exit on any failure.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, FRAC_PI_8};
use std::process::ExitCode;
use std::time::Instant;

use seqsteer::*;
use seqsteer_conformance::*;

fn params(w: f64, th: f64) -> StateParamsF64 {
    StateParamsF64::new(w, th).unwrap()
}

fn xz() -> [BlochVectorF64; 2] {
    [BlochVector::unit_x(), BlochVector::unit_z()]
}

/// Assemblage of one link of Alice – Bob – Charlie with Bob using `case`.
fn link_assemblage(case: CaseId, link: Link, p: StateParamsF64) -> Result<AssemblageF64> {
    let rho = state_family(p)?;
    let mixture = StrategyMixture::case(case);
    match link {
        Link::AB => assemblage_from_directions(&rho, Side::A, &xz()),
        Link::BA => Ok(assemblage_from_mixture(&rho, &mixture)),
        Link::AC => assemblage_from_directions(&luders_update(&rho, &mixture), Side::A, &xz()),
        Link::CA => assemblage_from_directions(&luders_update(&rho, &mixture), Side::B, &xz()),
    }
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut worst = (0.0f64, String::new());
    let mut above = 0;
    let mut total = 0;
    let mut errors = Vec::new();
    // where the certificate is not pinned to a single cell's length
    let mut free_worst = 0.0f64;
    let mut free_count = 0;
    let mut overshoot = f64::NEG_INFINITY;
    for case in CaseId::ALL {
        for link in Link::ALL {
            for &w in &oracle_ws() {
                for &th in &oracle_thetas() {
                    let p = params(w, th);
                    let numeric = link_assemblage(case, link, p).and_then(|a| Ok((steering_radius(&a)?, a)));
                    let analytic = analytic_radius(case, link, p);
                    let ((r, asm), want) = match (numeric, analytic) {
                        (Ok(n), Ok(a)) => (n, a),
                        (Err(e), _) | (_, Err(e)) => {
                            errors.push(format!("{case} {link} W={w} θ={th:.4}: {e}"));
                            continue;
                        }
                    };
                    total += 1;
                    let d = (r.radius - want).abs();
                    if d > ORACLE_TOL {
                        above += 1;
                    }
                    if d > worst.0 {
                        worst =
                            (d, format!("{case} {link} at W={w:.1}, θ={:.0}π/16", th * 16.0 / std::f64::consts::PI));
                    }
                    overshoot = overshoot.max(r.radius - want);
                    if r.radius - asm.max_cell_length() > 1e-6 {
                        free_count += 1;
                        free_worst = free_worst.max(d);
                    }
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    println!(
        "INFO [1] equal-length regime ({free_count} radii above every cell length): max |Δ| = {free_worst:.2e}; \
         numeric − closed form never exceeds {overshoot:.2e}"
    );
    let pass = errors.is_empty() && above == 0 && secs < ORACLE_BUDGET_S;
    let mut detail = format!(
        "max |Δ| = {:.3e} ({}), {above}/{total} radii above {ORACLE_TOL:e}; grid took {secs:.2} s (budget {ORACLE_BUDGET_S} s)",
        worst.0, worst.1
    );
    if !errors.is_empty() {
        detail.push_str(&format!("; {} errors, first: {}", errors.len(), errors[0]));
    }
    Outcome { id: 1, name: "oracle equivalence", pass, detail }
}

fn numeric_radius(case: CaseId, link: Link, p: StateParamsF64) -> Result<f64> {
    let r = chain_radii(p, &StrategySpec::Case(case), &[link], true)?;
    Ok(r[link as usize].expect("requested link"))
}

fn thresholds() -> Outcome {
    let targets = [
        (CaseId::One, Link::AB, FRAC_PI_4, FRAC_1_SQRT_2, "case1 AB θ=π/4"),
        (CaseId::Three, Link::AC, FRAC_PI_4, 2.0 / 5f64.sqrt(), "case3 AC θ=π/4"),
        (CaseId::One, Link::BA, FRAC_PI_8, (2.0f64 / 3.0).sqrt(), "case1 BA θ=π/8"),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (case, link, th, want, label) in targets {
        let analytic = threshold_scan(|w| analytic_radius(case, link, params(w, th)), 0.0, 1.0);
        let numeric = threshold_scan(|w| numeric_radius(case, link, params(w, th)), 0.0, 1.0);
        match (analytic, numeric) {
            (Ok(a), Ok(n)) => {
                let d = (a - want).abs().max((n - want).abs());
                pass &= d <= THRESHOLD_TOL;
                parts.push(format!("{label} W*={n:.9} (|Δ| ≤ {d:.1e})"));
            }
            (Err(e), _) | (_, Err(e)) => {
                pass = false;
                parts.push(format!("{label}: {e}"));
            }
        }
    }
    Outcome { id: 2, name: "thresholds", pass, detail: format!("{}; tol {THRESHOLD_TOL:e}", parts.join(", ")) }
}

fn windows() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    let expected = [(FRAC_PI_4, 2.0 - 3f64.sqrt(), "π/4"), (FRAC_PI_8, 2.0 - 3.5f64.sqrt(), "π/8")];
    for method in [Method::Analytic, Method::Numeric] {
        let tag = if method == Method::Analytic { "closed form" } else { "numeric" };
        for &(th, hi_want, label) in &expected {
            match two_way_sharing_window(params(1.0, th), MixturePair::OneThree, method) {
                Ok(Some((lo, hi))) => {
                    let d = lo.abs().max((hi - hi_want).abs());
                    pass &= d <= WINDOW_TOL;
                    parts.push(format!("{tag} 1&3 {label} ({lo:.2e}, {hi:.7})"));
                }
                other => {
                    pass = false;
                    parts.push(format!("{tag} 1&3 {label}: {other:?}"));
                }
            }
            for pair in [MixturePair::OneTwo, MixturePair::TwoThree] {
                match two_way_sharing_window(params(1.0, th), pair, method) {
                    Ok(None) => {}
                    other => {
                        pass = false;
                        parts.push(format!("{tag} {pair} {label}: expected empty, got {other:?}"));
                    }
                }
            }
        }
    }
    parts.push("1&2 and 2&3 empty".into());
    Outcome { id: 3, name: "mixture windows", pass, detail: format!("{}; tol {WINDOW_TOL:e}", parts.join(", ")) }
}

fn list(r: Result<FourPartyRadii<f64>>) -> [f64; 6] {
    r.map(|r| r.as_array()).unwrap_or([f64::NAN; 6])
}

fn four_party() -> Outcome {
    let und = list(four_party_radii(0.000097, 0.0, 0.045, 0.0, false));
    let dis = list(four_party_radii(0.0009, 0.0, 0.06, 0.0, true));
    let d_und = max_abs_diff(&und, &UNDISCLOSED_LIST);
    let d_dis = max_abs_diff(&dis, &DISCLOSED_LIST);
    let (u_upper, d_upper) = match (four_party_region(false), four_party_region(true)) {
        (Ok(u), Ok(d)) => (u.p1_upper, d.p1_upper),
        _ => (f64::NAN, f64::NAN),
    };
    let ok_und = d_und <= GOLDEN_TOL;
    let ok_dis = d_dis <= GOLDEN_TOL;
    let ok_u = (u_upper - REGION_UPPER_UNDISCLOSED).abs() <= REGION_TOL_UNDISCLOSED;
    let ok_d = (d_upper - REGION_UPPER_DISCLOSED).abs() <= REGION_TOL_DISCLOSED;

    let corrected = list(four_party_radii(0.00097, 0.0, 0.0625, 0.0, false));
    let numeric = run_chain(&ChainConfig::new(
        params(1.0, FRAC_PI_4),
        vec![StrategyMixture::from_pq(0.00097, 0.0).unwrap(), StrategyMixture::from_pq(0.0625, 0.0).unwrap()],
    ))
    .map(|r| r.radii())
    .unwrap_or_default();
    let numeric_d = if numeric.len() == 6 { max_abs_diff(&numeric, &UNDISCLOSED_LIST) } else { f64::NAN };
    println!(
        "INFO [4] undisclosed list at (p1, p2) = (0.00097, 0.0625): closed form |Δ| = {:.1e}, chain simulation |Δ| = {numeric_d:.1e}",
        max_abs_diff(&corrected, &UNDISCLOSED_LIST)
    );
    println!("INFO [4] closed form at (0.000097, 0.045) = {und:.7?}");

    let mark = |ok: bool| if ok { "ok" } else { "MISS" };
    let detail = format!(
        "undisclosed list |Δ| = {d_und:.2e} [{}], disclosed list |Δ| = {d_dis:.2e} [{}] (tol {GOLDEN_TOL:e}); \
         p1 bounds {u_upper:.7} [{}] and {d_upper:.7} [{}]",
        mark(ok_und),
        mark(ok_dis),
        mark(ok_u),
        mark(ok_d)
    );
    Outcome { id: 4, name: "four-party golden values", pass: ok_und && ok_dis && ok_u && ok_d, detail }
}

fn unbounded_chain() -> Outcome {
    let th = FRAC_PI_4;
    let start = Instant::now();
    let config = ChainConfig::new(params(1.0, th), vec![StrategyMixture::case(CaseId::Three); CHAIN_LENGTH]);
    let report = run_chain(&config);
    let secs = start.elapsed().as_secs_f64();
    let report = match report {
        Ok(r) => r,
        Err(e) => return Outcome { id: 5, name: "unbounded chain", pass: false, detail: e.to_string() },
    };
    let s2 = (2.0 * th).sin().powi(2);
    let mut fwd = 0.0f64;
    let mut back = 0.0f64;
    for (i, link) in report.links.iter().take(CHAIN_LENGTH).enumerate() {
        let want = (1.0 + s2 / 4f64.powi(i as i32)).sqrt();
        fwd = fwd.max((link.r_forward - want).abs());
        back = back.max((link.r_backward - 1.0).abs());
    }
    let pass = report.links.len() == CHAIN_LENGTH + 1 && fwd <= CHAIN_TOL && back <= CHAIN_TOL && secs < CHAIN_BUDGET_S;
    let detail = format!(
        "{CHAIN_LENGTH} Bobs: max |Δ R_AB| = {fwd:.2e}, max |R_BA − 1| = {back:.2e} (tol {CHAIN_TOL:e}); {secs:.2} s (budget {CHAIN_BUDGET_S} s)"
    );
    Outcome { id: 5, name: "unbounded chain", pass, detail }
}

/// Post-measurement state after a case-1 Bob, written out entrywise.
fn printed_case1(w: f64, th: f64) -> Mat4F64 {
    let (c, s) = ((2.0 * th).cos(), (2.0 * th).sin());
    Mat4F64::from_real([
        [2.0 + w + (1.0 + 2.0 * w) * c, 0.0, 0.0, w * s],
        [0.0, 2.0 - w - (1.0 - 2.0 * w) * c, w * s, 0.0],
        [0.0, w * s, 2.0 - w + (1.0 - 2.0 * w) * c, 0.0],
        [w * s, 0.0, 0.0, 2.0 + w - (1.0 + 2.0 * w) * c],
    ])
    .scale(0.125)
}

fn printed_case3(w: f64, th: f64) -> Mat4F64 {
    let (c, s) = (th.cos(), th.sin());
    Mat4F64::from_real([
        [(1.0 + w) * c * c, 0.0, 0.0, w * s * c],
        [0.0, (1.0 - w) * s * s, 0.0, 0.0],
        [0.0, 0.0, (1.0 - w) * c * c, 0.0],
        [w * s * c, 0.0, 0.0, (1.0 + w) * s * s],
    ])
    .scale(0.5)
}

fn channel_matrices() -> Outcome {
    let mut worst = 0.0f64;
    for (w, th) in [(0.5, FRAC_PI_8), (1.0, FRAC_PI_4)] {
        let rho = state_family(params(w, th)).unwrap();
        let one = luders_update(&rho, &StrategyMixture::case(CaseId::One));
        let three = luders_update(&rho, &StrategyMixture::case(CaseId::Three));
        worst = worst.max(one.rho().max_abs_diff(&printed_case1(w, th)));
        worst = worst.max(three.rho().max_abs_diff(&printed_case3(w, th)));
    }
    Outcome {
        id: 6,
        name: "channel golden matrices",
        pass: worst <= CHANNEL_TOL,
        detail: format!("cases 1 and 3 at (0.5, π/8), (1, π/4): max entry |Δ| = {worst:.2e} (tol {CHANNEL_TOL:e})"),
    }
}

fn experiments() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for e in EXPERIMENTS {
        let spec = StrategySpec::Pair(MixturePair::OneThree, e.p);
        let mut dev = 0.0f64;
        let mut theory = [0.0; 4];
        for numeric in [false, true] {
            match chain_radii(params(e.w, e.theta), &spec, &Link::ALL, numeric) {
                Ok(r) => {
                    for (k, (got, want)) in r.iter().zip(e.measured).enumerate() {
                        let got = got.expect("all links requested");
                        dev = dev.max((got - want).abs() / want);
                        if numeric {
                            theory[k] = got;
                        }
                    }
                }
                Err(err) => {
                    pass = false;
                    parts.push(format!("W={}: {err}", e.w));
                }
            }
        }
        pass &= dev <= EXPERIMENT_BAND;
        parts.push(format!("W={} p={}: theory {theory:.5?}, max relative deviation {:.2}%", e.w, e.p, 100.0 * dev));
    }
    Outcome {
        id: 7,
        name: "experimental consistency",
        pass,
        detail: format!("{}; band ±{}%", parts.join("; "), 100.0 * EXPERIMENT_BAND),
    }
}

fn mixtures() -> Vec<StrategyMixtureF64> {
    let mut out = Vec::new();
    for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
        for q in [0.0, 0.25, 0.5] {
            if p + q <= 1.0 {
                out.push(StrategyMixture::from_pq(p, q).unwrap());
            }
        }
    }
    out
}

fn properties() -> Outcome {
    let slanted =
        [BlochVector::new(FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2), BlochVector::unit_y(), BlochVector::new(0.6, 0.0, 0.8)];
    let mut ns = 0.0f64;
    let mut trace = 0.0f64;
    let mut min_eig = f64::INFINITY;
    let mut cert = 0.0f64;
    let (mut n_asm, mut n_chan, mut n_radii) = (0, 0, 0);
    let mut errors = Vec::new();
    let mut states = vec![(0.0, 0.0), (1.0, std::f64::consts::FRAC_PI_2), (0.35, 1.1)];
    for &w in &oracle_ws() {
        for &th in &oracle_thetas() {
            states.push((w, th));
        }
    }
    for (w, th) in states {
        let rho = state_family(params(w, th)).unwrap();
        for m in mixtures() {
            let out = luders_update(&rho, &m);
            let v = validate(&out);
            trace = trace.max(v.trace_deviation);
            min_eig = min_eig.min(v.min_eigenvalue);
            n_chan += 1;
            let mut asms = vec![assemblage_from_mixture(&rho, &m), assemblage_from_mixture_on(&rho, Side::A, &m)];
            for dirs in [&xz()[..], &slanted[..]] {
                for side in [Side::A, Side::B] {
                    asms.push(assemblage_from_directions(&out, side, dirs).unwrap());
                }
            }
            for (k, asm) in asms.iter().enumerate() {
                ns = ns.max(asm.no_signaling_residual());
                n_asm += 1;
                // radii on the hidden-strategy and the x/z assemblages
                if k == 0 || k == 2 {
                    match steering_radius(asm) {
                        Ok(r) => {
                            cert = cert.max(r.residual).max(r.ensemble.reconstruction_residual(asm));
                            n_radii += 1;
                        }
                        Err(e) => errors.push(format!("W={w} θ={th}: {e}")),
                    }
                }
            }
        }
    }
    let crafted = [
        (classify(1.0, 1.0), SteeringClass::NoWay),
        (classify(1.0f32, 1.0f32), SteeringClass::NoWay),
        (classify(1.0 + 1e-12, 1.0), SteeringClass::OneWayForward),
        (classify(1.0, 1.0 + 1e-12), SteeringClass::OneWayBackward),
        (classify(1.0 - 1e-12, 1.0 - 1e-12), SteeringClass::NoWay),
        (classify(1.0 + 1e-12, 1.0 + 1e-12), SteeringClass::TwoWay),
    ];
    let boundary = crafted.iter().all(|(got, want)| got == want);
    let pass = errors.is_empty()
        && ns <= NO_SIGNALING_TOL
        && trace <= TRACE_TOL
        && min_eig >= MIN_EIGENVALUE_FLOOR
        && cert <= CERTIFICATE_TOL
        && boundary;
    let mut detail = format!(
        "no-signalling {ns:.1e} over {n_asm} assemblages (tol {NO_SIGNALING_TOL:e}); \
         {n_chan} channel outputs: trace {trace:.1e} (tol {TRACE_TOL:e}), min eigenvalue {min_eig:.1e} (floor {MIN_EIGENVALUE_FLOOR:e}); \
         certificate residual {cert:.1e} over {n_radii} radii (tol {CERTIFICATE_TOL:e}); classify boundary {}",
        if boundary { "ok" } else { "WRONG" }
    );
    if !errors.is_empty() {
        detail.push_str(&format!("; {} solver errors, first: {}", errors.len(), errors[0]));
    }
    Outcome { id: 8, name: "property suites", pass, detail }
}

fn main() -> ExitCode {
    let criteria: [fn() -> Outcome; 8] = [
        oracle_equivalence,
        thresholds,
        windows,
        four_party,
        unbounded_chain,
        channel_matrices,
        experiments,
        properties,
    ];
    let mut failed = 0;
    for criterion in criteria {
        let outcome = criterion();
        println!("{outcome}");
        failed += usize::from(!outcome.pass);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
