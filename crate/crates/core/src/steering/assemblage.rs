use crate::error::{Error, Result};
use crate::measurements::{effect, Setting, StrategyMixture};
use crate::qmath::{partial_trace, pauli_components, tensor, BlochVector, Mat2, Mat4, Subsystem};
use crate::scalar::Real;
use crate::states::TwoQubitState;

/// The party that measures; the other one holds the steered states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
}

impl Side {
    fn measured(self) -> Subsystem {
        match self {
            Side::A => Subsystem::First,
            Side::B => Subsystem::Second,
        }
    }
}

/// One (setting, outcome) entry: probability and unnormalised Bloch vector `p·v`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cell<T> {
    pub prob: T,
    pub unnormalized: BlochVector<T>,
}

impl<T: Real> Cell<T> {
    pub fn from_normalized(prob: T, bloch: BlochVector<T>) -> Self {
        Self { prob, unnormalized: bloch.scale(prob) }
    }

    pub fn is_degenerate(&self) -> bool {
        self.prob < T::lit(T::DEGENERATE_PROB)
    }

    /// Normalised conditional Bloch vector; zero for a degenerate cell.
    pub fn bloch(&self) -> BlochVector<T> {
        if self.is_degenerate() {
            BlochVector::zero()
        } else {
            self.unnormalized.scale(T::one() / self.prob)
        }
    }
}

/// Conditional-state ensemble `{p_{a|x}, v_{a|x}}` with binary outcomes.
#[derive(Clone, Debug, PartialEq)]
pub struct Assemblage<T> {
    cells: Vec<[Cell<T>; 2]>,
}

impl<T: Real> Assemblage<T> {
    /// Builds an assemblage and checks normalisation and no-signalling.
    pub fn new(cells: Vec<[Cell<T>; 2]>) -> Result<Self> {
        let asm = Self { cells };
        asm.check()?;
        Ok(asm)
    }

    pub(crate) fn new_unchecked(cells: Vec<[Cell<T>; 2]>) -> Self {
        Self { cells }
    }

    fn check(&self) -> Result<()> {
        if self.cells.is_empty() {
            return Err(Error::InvalidParams("assemblage without settings".into()));
        }
        for pair in &self.cells {
            for c in pair {
                if !(c.prob >= -T::lit(T::CHECK_TOL)) {
                    return Err(Error::InvalidParams(format!("negative probability {}", c.prob)));
                }
                if !c.unnormalized.norm().is_finite() {
                    return Err(Error::InvalidParams("non-finite Bloch vector".into()));
                }
            }
        }
        let pr = self.probability_residual();
        if pr > T::lit(T::CHECK_TOL) {
            return Err(Error::InvalidParams(format!("probabilities off by {pr}")));
        }
        let ns = self.no_signaling_residual();
        if ns > T::lit(10.0 * T::CHECK_TOL) {
            return Err(Error::InvalidParams(format!("no-signalling violated by {ns}")));
        }
        Ok(())
    }

    pub fn n_settings(&self) -> usize {
        self.cells.len()
    }

    pub fn cell(&self, setting: usize, outcome: usize) -> &Cell<T> {
        &self.cells[setting][outcome]
    }

    pub fn cells(&self) -> &[[Cell<T>; 2]] {
        &self.cells
    }

    /// Largest `|Σ_a p_{a|x} − 1|`.
    pub fn probability_residual(&self) -> T {
        self.cells.iter().map(|[c0, c1]| (c0.prob + c1.prob - T::one()).abs()).fold(T::zero(), T::max)
    }

    /// Steered party's reduced Bloch vector, read off setting 0.
    pub fn reduced_bloch(&self) -> BlochVector<T> {
        let [c0, c1] = &self.cells[0];
        c0.unnormalized + c1.unnormalized
    }

    /// Largest componentwise spread of `Σ_a p_{a|x} v_{a|x}` across settings.
    pub fn no_signaling_residual(&self) -> T {
        let r0 = self.reduced_bloch();
        self.cells.iter().map(|[c0, c1]| (c0.unnormalized + c1.unnormalized).max_abs_diff(&r0)).fold(T::zero(), T::max)
    }

    /// Longest conditional Bloch vector; a lower bound on the steering radius.
    pub fn max_cell_length(&self) -> T {
        self.cells.iter().flatten().map(|c| c.bloch().norm()).fold(T::zero(), T::max)
    }
}

fn cell_of<T: Real>(m: &Mat2<T>) -> Cell<T> {
    let (prob, unnormalized) = pauli_components(m);
    Cell { prob, unnormalized }
}

fn lift<T: Real>(e: &Mat2<T>, on: Subsystem) -> Mat4<T> {
    match on {
        Subsystem::First => tensor(e, &Mat2::identity()),
        Subsystem::Second => tensor(&Mat2::identity(), e),
    }
}

/// Conditional states of the unmeasured qubit when `side` measures the
/// projective settings `directions`.
pub fn assemblage_from_directions<T: Real>(
    state: &TwoQubitState<T>,
    side: Side,
    directions: &[BlochVector<T>],
) -> Result<Assemblage<T>> {
    let on = side.measured();
    let mut cells = Vec::with_capacity(directions.len());
    for n in directions {
        let setting = Setting::basis(*n)?;
        let mut pair = [Cell { prob: T::zero(), unnormalized: BlochVector::zero() }; 2];
        for (b, slot) in pair.iter_mut().enumerate() {
            let e = effect(&setting, b as u8)?;
            let m = partial_trace(&(lift(&e.matrix, on) * *state.rho()), on.other());
            *slot = cell_of(&m);
        }
        cells.push(pair);
    }
    if cells.is_empty() {
        return Err(Error::InvalidParams("no measurement directions".into()));
    }
    Ok(Assemblage::new_unchecked(cells))
}

/// Alice's conditional states when Bob measures with a hidden strategy mixture.
pub fn assemblage_from_mixture<T: Real>(state: &TwoQubitState<T>, mixture: &StrategyMixture<T>) -> Assemblage<T> {
    assemblage_from_mixture_on(state, Side::B, mixture)
}

/// As [`assemblage_from_mixture`] with an explicit measuring side. Cells of
/// the branches are averaged unnormalised, so the strategy label stays hidden.
pub fn assemblage_from_mixture_on<T: Real>(
    state: &TwoQubitState<T>,
    side: Side,
    mixture: &StrategyMixture<T>,
) -> Assemblage<T> {
    let on = side.measured();
    let n_settings = mixture.branches().iter().map(|(_, s)| s.settings.len()).max().unwrap_or(0);
    let mut cells = vec![[Cell { prob: T::zero(), unnormalized: BlochVector::zero() }; 2]; n_settings];
    for (p, strategy) in mixture.branches() {
        for (y, setting) in strategy.settings.iter().enumerate() {
            for b in 0..2 {
                let e = effect(setting, b as u8).expect("validated mixture");
                let m = partial_trace(&(lift(&e.matrix, on) * *state.rho()), on.other());
                let c = cell_of(&m);
                let slot = &mut cells[y][b];
                slot.prob += *p * c.prob;
                slot.unnormalized += c.unnormalized.scale(*p);
            }
        }
    }
    Assemblage::new_unchecked(cells)
}
