//! Projective effects, the three deterministic strategies, strategy mixtures
//! and the Lüders update applied by a sequential Bob.

use std::fmt;

use crate::error::{Error, Result};
use crate::qmath::{tensor, BlochVector, Mat2, Mat4};
use crate::scalar::Real;
use crate::states::TwoQubitState;

/// A two-outcome measurement setting.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Setting<T> {
    /// Projective measurement of `n · σ`.
    Basis(BlochVector<T>),
    /// The trivial instrument: nothing is measured, the outcome is a fair coin.
    Identity,
}

impl<T: Real> Setting<T> {
    pub fn basis(direction: BlochVector<T>) -> Result<Self> {
        check_direction(&direction)?;
        Ok(Setting::Basis(direction))
    }

    /// Kraus operator for `outcome`: the projector for a basis setting,
    /// `I/√2` for the identity setting.
    pub fn kraus(&self, outcome: u8) -> Result<Mat2<T>> {
        match self {
            Setting::Basis(_) => Ok(effect(self, outcome)?.matrix),
            Setting::Identity => {
                check_outcome(outcome)?;
                Ok(Mat2::identity().scale(T::FRAC_1_SQRT_2()))
            }
        }
    }
}

/// Which effect a matrix represents.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EffectKind<T> {
    Basis { direction: BlochVector<T>, outcome: u8 },
    Identity { outcome: u8 },
}

/// A POVM element together with its provenance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Effect<T> {
    pub kind: EffectKind<T>,
    pub matrix: Mat2<T>,
}

fn check_direction<T: Real>(n: &BlochVector<T>) -> Result<()> {
    let norm = n.norm();
    if !((norm - T::one()).abs() <= T::lit(T::CHECK_TOL)) {
        return Err(Error::InvalidDirection { norm: norm.to_f64().unwrap_or(f64::NAN) });
    }
    Ok(())
}

fn check_outcome(outcome: u8) -> Result<()> {
    if outcome > 1 {
        return Err(Error::InvalidParams(format!("outcome {outcome} is not a bit")));
    }
    Ok(())
}

/// `(I + (−1)^b n·σ)/2` for a basis setting and `I/2` for the identity setting.
pub fn effect<T: Real>(setting: &Setting<T>, outcome: u8) -> Result<Effect<T>> {
    check_outcome(outcome)?;
    let half = T::lit(0.5);
    match *setting {
        Setting::Basis(direction) => {
            check_direction(&direction)?;
            let sign = if outcome == 0 { T::one() } else { -T::one() };
            let matrix = (Mat2::identity() + direction.dot_sigma().scale(sign)).scale(half);
            Ok(Effect { kind: EffectKind::Basis { direction, outcome }, matrix })
        }
        Setting::Identity => {
            Ok(Effect { kind: EffectKind::Identity { outcome }, matrix: Mat2::identity().scale(half) })
        }
    }
}

/// The paper's three deterministic strategies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseId {
    /// σx then σz projections.
    One,
    /// Two identity settings.
    Two,
    /// Identity then σz projection.
    Three,
}

impl CaseId {
    pub const ALL: [CaseId; 3] = [CaseId::One, CaseId::Two, CaseId::Three];

    pub fn number(self) -> u32 {
        match self {
            CaseId::One => 1,
            CaseId::Two => 2,
            CaseId::Three => 3,
        }
    }
}

impl TryFrom<u32> for CaseId {
    type Error = Error;
    fn try_from(n: u32) -> Result<Self> {
        match n {
            1 => Ok(CaseId::One),
            2 => Ok(CaseId::Two),
            3 => Ok(CaseId::Three),
            _ => Err(Error::UnknownCase(n)),
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "case{}", self.number())
    }
}

/// Two settings used with equal probability by one Bob.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeterministicStrategy<T> {
    pub settings: [Setting<T>; 2],
    pub label: Option<CaseId>,
}

impl<T: Real> DeterministicStrategy<T> {
    pub fn new(settings: [Setting<T>; 2]) -> Result<Self> {
        for s in &settings {
            if let Setting::Basis(n) = s {
                check_direction(n)?;
            }
        }
        Ok(Self { settings, label: None })
    }
}

pub fn case_strategy<T: Real>(case: CaseId) -> DeterministicStrategy<T> {
    let x = Setting::Basis(BlochVector::unit_x());
    let z = Setting::Basis(BlochVector::unit_z());
    let settings = match case {
        CaseId::One => [x, z],
        CaseId::Two => [Setting::Identity, Setting::Identity],
        CaseId::Three => [Setting::Identity, z],
    };
    DeterministicStrategy { settings, label: Some(case) }
}

/// Probability distribution over deterministic strategies (the hidden `λ`).
#[derive(Clone, Debug, PartialEq)]
pub struct StrategyMixture<T> {
    branches: Vec<(T, DeterministicStrategy<T>)>,
}

impl<T: Real> StrategyMixture<T> {
    pub fn new(branches: Vec<(T, DeterministicStrategy<T>)>) -> Result<Self> {
        if branches.is_empty() {
            return Err(Error::InvalidMixtureWeights("no branches".into()));
        }
        let mut total = T::zero();
        for (p, s) in &branches {
            if !(*p >= T::zero()) {
                return Err(Error::InvalidMixtureWeights(format!("negative weight {p}")));
            }
            DeterministicStrategy::new(s.settings)?;
            total += *p;
        }
        let tol = T::lit(1e-12).max(T::epsilon() * T::lit(16.0));
        if (total - T::one()).abs() > tol {
            return Err(Error::InvalidMixtureWeights(format!("weights sum to {total}")));
        }
        Ok(Self { branches })
    }

    pub fn pure(strategy: DeterministicStrategy<T>) -> Self {
        Self { branches: vec![(T::one(), strategy)] }
    }

    pub fn case(case: CaseId) -> Self {
        Self::pure(case_strategy(case))
    }

    /// Mixture of the paper's cases; zero-weight entries are dropped.
    pub fn from_cases(weights: &[(T, CaseId)]) -> Result<Self> {
        let mut branches: Vec<_> =
            weights.iter().filter(|(p, _)| *p != T::zero()).map(|&(p, c)| (p, case_strategy(c))).collect();
        if branches.is_empty() {
            // surface the actual weight problem
            branches = weights.iter().map(|&(p, c)| (p, case_strategy(c))).collect();
        }
        Self::new(branches)
    }

    /// Cases 1, 2, 3 with weights `p`, `q`, `1 − p − q`.
    pub fn from_pq(p: T, q: T) -> Result<Self> {
        check_pq(p, q)?;
        let r = (T::one() - p - q).max(T::zero());
        Self::from_cases(&[(p, CaseId::One), (q, CaseId::Two), (r, CaseId::Three)])
    }

    pub fn branches(&self) -> &[(T, DeterministicStrategy<T>)] {
        &self.branches
    }
}

pub(crate) fn check_pq<T: Real>(p: T, q: T) -> Result<()> {
    let tol = T::lit(1e-12).max(T::epsilon() * T::lit(16.0));
    if !(p >= T::zero() && q >= T::zero() && p + q <= T::one() + tol) {
        return Err(Error::InvalidMixtureWeights(format!("p = {p}, q = {q}")));
    }
    Ok(())
}

/// `ρ' = Σ_λ p(λ) · ½ Σ_{y,b} (I⊗K) ρ (I⊗K)†` for a measurement on the second qubit.
pub fn luders_update<T: Real>(state: &TwoQubitState<T>, mixture: &StrategyMixture<T>) -> TwoQubitState<T> {
    let rho = state.rho();
    let mut out = Mat4::zeros();
    for (p, strategy) in mixture.branches() {
        let w = *p / T::lit(strategy.settings.len() as f64);
        for setting in &strategy.settings {
            for b in 0..2u8 {
                let k = setting.kraus(b).expect("validated setting");
                let big = tensor(&Mat2::identity(), &k);
                out += big.sandwich(rho).scale(w);
            }
        }
    }
    TwoQubitState::new_unchecked(out.hermitian_part())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{state_family, StateParams};

    #[test]
    fn effect_examples() {
        let z = effect(&Setting::Basis(BlochVector::<f64>::unit_z()), 0).unwrap();
        assert!(z.matrix.max_abs_diff(&Mat2::from_real([[1.0, 0.0], [0.0, 0.0]])) < 1e-15);
        let x1 = effect(&Setting::Basis(BlochVector::<f64>::unit_x()), 1).unwrap();
        assert!(x1.matrix.max_abs_diff(&Mat2::from_real([[0.5, -0.5], [-0.5, 0.5]])) < 1e-15);
        let id = effect::<f64>(&Setting::Identity, 0).unwrap();
        assert!(id.matrix.max_abs_diff(&Mat2::identity().scale(0.5)) < 1e-15);
        assert!(matches!(
            effect(&Setting::Basis(BlochVector::new(1.0, 1.0, 0.0)), 0),
            Err(Error::InvalidDirection { .. })
        ));
    }

    #[test]
    fn case_ids() {
        assert_eq!(CaseId::try_from(3).unwrap(), CaseId::Three);
        assert_eq!(CaseId::try_from(4), Err(Error::UnknownCase(4)));
        let s = case_strategy::<f64>(CaseId::Three);
        assert_eq!(s.settings[0], Setting::Identity);
        assert_eq!(s.settings[1], Setting::Basis(BlochVector::unit_z()));
    }

    #[test]
    fn mixture_validation() {
        assert!(StrategyMixture::<f64>::from_pq(0.3, 0.2).is_ok());
        assert!(matches!(StrategyMixture::<f64>::from_pq(0.8, 0.3), Err(Error::InvalidMixtureWeights(_))));
        assert!(matches!(StrategyMixture::<f64>::from_pq(-0.1, 0.3), Err(Error::InvalidMixtureWeights(_))));
        let m = StrategyMixture::<f64>::from_pq(0.25, 0.0).unwrap();
        assert_eq!(m.branches().len(), 2);
    }

    #[test]
    fn case_two_is_transparent() {
        let s = state_family(StateParams::new(0.7, 0.3).unwrap()).unwrap();
        let out = luders_update(&s, &StrategyMixture::case(CaseId::Two));
        assert!(out.rho().max_abs_diff(s.rho()) < 1e-15);
    }
}
