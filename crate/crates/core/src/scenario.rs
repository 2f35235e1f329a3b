//! Sequential chains Alice – Bob₁ … Bobₙ – Charlie.

use crate::error::{Error, Result};
use crate::measurements::{check_pq, luders_update, StrategyMixture};
use crate::qmath::BlochVector;
use crate::scalar::Real;
use crate::states::{state_family, StateParams, TwoQubitState};
use crate::steering::{
    assemblage_from_directions, assemblage_from_mixture, bracket_over_c, classify, product_corner, steering_radius,
    Side, SteeringClass,
};

/// Wiring of one sequential chain.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainConfig<T> {
    pub initial: StateParams<T>,
    pub bobs: Vec<StrategyMixture<T>>,
    pub alice_directions: Vec<BlochVector<T>>,
    pub charlie_directions: Vec<BlochVector<T>>,
    /// Bobs announce which strategy branch they used.
    pub disclosure: bool,
}

impl<T: Real> ChainConfig<T> {
    /// Chain with the default `{x̂, ẑ}` directions and no disclosure.
    pub fn new(initial: StateParams<T>, bobs: Vec<StrategyMixture<T>>) -> Self {
        let xz = vec![BlochVector::unit_x(), BlochVector::unit_z()];
        Self { initial, bobs, alice_directions: xz.clone(), charlie_directions: xz, disclosure: false }
    }

    pub fn with_disclosure(mut self, disclosure: bool) -> Self {
        self.disclosure = disclosure;
        self
    }
}

/// Radii between Alice and one later party.
#[derive(Clone, Debug, PartialEq)]
pub struct LinkRecord<T> {
    /// `"Bob1"`, `"Bob2"`, …, `"Charlie"`.
    pub party: String,
    /// Alice steering the party.
    pub r_forward: T,
    /// The party steering Alice.
    pub r_backward: T,
    pub class: SteeringClass,
    /// Shared state the party receives, before its own measurement.
    pub state: TwoQubitState<T>,
    /// Largest certificate residual among the radii of this link.
    pub residual: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainReport<T> {
    pub links: Vec<LinkRecord<T>>,
}

impl<T: Real> ChainReport<T> {
    /// Radii in chain order: forward then backward for every link.
    pub fn radii(&self) -> Vec<T> {
        self.links.iter().flat_map(|l| [l.r_forward, l.r_backward]).collect()
    }
}

/// Runs the chain: Alice's radii on every Bob's incoming state, each Bob's
/// radius towards Alice, then the Lüders update; Charlie closes the chain.
pub fn run_chain<T: Real>(config: &ChainConfig<T>) -> Result<ChainReport<T>> {
    let mut state = state_family(config.initial)?;
    let mut links = Vec::with_capacity(config.bobs.len() + 1);
    let forward = |state: &TwoQubitState<T>, label: &str| -> Result<(T, T)> {
        let asm = assemblage_from_directions(state, Side::A, &config.alice_directions)
            .map_err(|e| e.at_link(format!("A->{label}")))?;
        let r = steering_radius(&asm).map_err(|e| e.at_link(format!("A->{label}")))?;
        Ok((r.radius, r.residual))
    };

    for (i, mixture) in config.bobs.iter().enumerate() {
        let party = format!("Bob{}", i + 1);
        let ctx = |e: Error| e.at_link(format!("{party}->A"));
        let (r_forward, res_f) = forward(&state, &party)?;
        let (r_backward, res_b) = if config.disclosure {
            let mut total = T::zero();
            let mut res = T::zero();
            for (p, strategy) in mixture.branches() {
                let asm = assemblage_from_mixture(&state, &StrategyMixture::pure(*strategy));
                let r = steering_radius(&asm).map_err(ctx)?;
                total += *p * r.radius;
                res = res.max(r.residual);
            }
            (total, res)
        } else {
            let r = steering_radius(&assemblage_from_mixture(&state, mixture)).map_err(ctx)?;
            (r.radius, r.residual)
        };
        links.push(LinkRecord {
            party,
            r_forward,
            r_backward,
            class: classify(r_forward, r_backward),
            state,
            residual: res_f.max(res_b),
        });
        state = luders_update(&state, mixture);
    }

    let (r_forward, res_f) = forward(&state, "Charlie")?;
    let asm =
        assemblage_from_directions(&state, Side::B, &config.charlie_directions).map_err(|e| e.at_link("Charlie->A"))?;
    let back = steering_radius(&asm).map_err(|e| e.at_link("Charlie->A"))?;
    links.push(LinkRecord {
        party: "Charlie".into(),
        r_forward,
        r_backward: back.radius,
        class: classify(r_forward, back.radius),
        state,
        residual: res_f.max(back.residual),
    });
    Ok(ChainReport { links })
}

/// Radii of the chain Alice – Bob₁ – Bob₂ – Charlie at `W = 1`, `θ = π/4`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourPartyRadii<T> {
    pub ab1: T,
    pub b1a: T,
    pub ab2: T,
    pub b2a: T,
    pub ac: T,
    pub ca: T,
}

impl<T: Real> FourPartyRadii<T> {
    pub fn as_array(&self) -> [T; 6] {
        [self.ab1, self.b1a, self.ab2, self.b2a, self.ac, self.ca]
    }

    /// Smallest `R − 1` over the six links.
    pub fn min_margin(&self) -> T {
        self.as_array().iter().map(|&r| r - T::one()).fold(T::infinity(), T::min)
    }
}

/// Closed-form four-party radii for Bobs mixing cases 1, 2, 3 with weights
/// `(p1, q1, 1 − p1 − q1)` and `(p2, q2, 1 − p2 − q2)`.
pub fn four_party_radii<T: Real>(p1: T, q1: T, p2: T, q2: T, disclosure: bool) -> Result<FourPartyRadii<T>> {
    check_pq(p1, q1)?;
    check_pq(p2, q2)?;
    let one = T::one();
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let a1 = two - p1;
    let b1 = one + q1;
    let ab1 = T::SQRT_2();
    let ab2 = half * (a1 * a1 + b1 * b1).sqrt();
    let cc = T::lit(0.25) * ((a1 * (two - p2)).powi(2) + (b1 * (one + q2)).powi(2)).sqrt();
    let (b1a, b2a) = if disclosure {
        (T::SQRT_2() * p1 + (one - p1 - q1), p2 * ab2 + (one - p2 - q2) * (one - p1 * half))
    } else {
        ((p1 * p1 + (one - q1) * (one - q1)).sqrt(), half * ((a1 * (one - q2)).powi(2) + (p2 * b1).powi(2)).sqrt())
    };
    Ok(FourPartyRadii { ab1, b1a, ab2, b2a, ac: cc, ca: cc })
}

/// Closed-form `(R_{AB_i}, R_{B_iA})` for a chain of case-3 Bobs.
pub fn case3_chain_radii<T: Real>(params: StateParams<T>, i: usize) -> Result<(T, T)> {
    params.check()?;
    if i == 0 {
        return Err(Error::InvalidParams("Bob index starts at 1".into()));
    }
    let w = params.w;
    let f4 = T::lit(4f64.powi(i as i32 + 2));
    let f2 = T::lit(2f64.powi(i as i32 + 2));
    let (s, c) = (params.theta + params.theta).sin_cos();
    if product_corner(w, c) {
        return Ok((T::one(), w));
    }
    let w2 = w * w;
    let dp = -f4 * (w2 - T::one()) + T::lit(16.0) * w2 * w2 * c * c - T::lit(32.0) * w2;
    let g = bracket_over_c(w, c, T::lit(4.0), dp);
    let fwd = (s * s * g * g + f4 * (w + c) * (w + c)).sqrt() / (f2 * (w * c + T::one()));
    if !fwd.is_finite() {
        return Err(Error::NumericalFailure(format!("case-3 chain radius at i = {i}")));
    }
    Ok((fwd, w))
}
