//! Local-hidden-state feasibility at fixed radius and the steering radius.
//!
//! Members are the `2^N` deterministic response functions. For fixed `R`
//! the question "is there `{p_λ, u_λ}` reproducing every cell with
//! `|u_λ| ≤ R p_λ`" is a second-order-cone feasibility problem. The
//! reconstruction equalities are eliminated through a null-space basis and
//! the remaining cone problem is solved as a phase-I barrier program that
//! maximises the margin `t` in `|u_λ|/R ≤ p_λ − t`: `t ≥ 0` yields an
//! explicit ensemble, a duality-gap bound below zero proves infeasibility.

use crate::error::{Error, Result};
use crate::linalg::{rref, spd_solve};
use crate::qmath::BlochVector;
use crate::scalar::Real;

use super::assemblage::Assemblage;

/// One hidden state together with the response function that uses it.
#[derive(Clone, Debug, PartialEq)]
pub struct LhsMember<T> {
    /// Outcome assigned to each setting.
    pub response: Vec<u8>,
    pub prob: T,
    pub bloch: BlochVector<T>,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct LhsEnsemble<T> {
    pub members: Vec<LhsMember<T>>,
}

impl<T: Real> LhsEnsemble<T> {
    pub fn max_length(&self) -> T {
        self.members.iter().filter(|m| m.prob > T::zero()).map(|m| m.bloch.norm()).fold(T::zero(), T::max)
    }

    pub fn total_prob(&self) -> T {
        self.members.iter().map(|m| m.prob).sum()
    }

    /// Largest violation of the reconstruction relations for `asm`.
    pub fn reconstruction_residual(&self, asm: &Assemblage<T>) -> T {
        let mut worst = T::zero();
        for x in 0..asm.n_settings() {
            for a in 0..2 {
                let cell = asm.cell(x, a);
                let mut p = T::zero();
                let mut u = BlochVector::zero();
                for m in self.members.iter().filter(|m| m.response[x] as usize == a) {
                    p += m.prob;
                    u += m.bloch.scale(m.prob);
                }
                worst = worst.max((p - cell.prob).abs()).max(u.max_abs_diff(&cell.unnormalized));
            }
        }
        for m in &self.members {
            worst = worst.max(-m.prob);
        }
        worst
    }
}

/// Answer of a single feasibility query.
#[derive(Clone, Debug, PartialEq)]
pub struct Feasibility<T> {
    pub feasible: bool,
    pub ensemble: Option<LhsEnsemble<T>>,
    /// Reconstruction plus cone violation of the returned point.
    pub residual: T,
    /// Best margin `min_λ (p_λ − |u_λ|/R)` found; negative when infeasible.
    pub margin: T,
    pub newton_steps: usize,
}

/// Steering radius with its certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct SteeringRadiusResult<T> {
    pub radius: T,
    pub ensemble: LhsEnsemble<T>,
    /// Feasibility queries made by the bisection.
    pub iterations: usize,
    pub newton_steps: usize,
    pub residual: T,
}

/// Tunables of the barrier solver and the bisection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LhsSolver<T> {
    pub bisection_width: T,
    pub gap_tol: T,
    pub cert_tol: T,
    /// Barrier weight growth per outer iteration.
    pub mu: T,
    pub max_newton: usize,
}

impl<T: Real> Default for LhsSolver<T> {
    fn default() -> Self {
        Self {
            bisection_width: T::lit(T::BISECTION_WIDTH),
            gap_tol: T::lit(T::GAP_TOL),
            cert_tol: T::lit(T::CERT_TOL),
            mu: T::lit(12.0),
            max_newton: 2000,
        }
    }
}

/// Feasibility of an LHS model with hidden-state lengths at most `r`.
pub fn lhs_feasible<T: Real>(asm: &Assemblage<T>, r: T) -> Result<Feasibility<T>> {
    LhsSolver::default().feasible(asm, r)
}

/// Smallest `R` admitting an LHS model, with certificate.
pub fn steering_radius<T: Real>(asm: &Assemblage<T>) -> Result<SteeringRadiusResult<T>> {
    LhsSolver::default().radius(asm)
}

/// Equality-eliminated form: `y_k = y0_k + B ξ_k` for `k ∈ {p, ux, uy, uz}`.
struct Reduced<T> {
    n_settings: usize,
    /// Response-function index of each active member.
    members: Vec<usize>,
    y0: [Vec<T>; 4],
    /// Null-space basis, `members.len()` rows by `dim` columns.
    basis: Vec<Vec<T>>,
    dim: usize,
    /// Starting point in null-space coordinates.
    start: [Vec<T>; 4],
}

fn bit(lambda: usize, x: usize) -> usize {
    (lambda >> x) & 1
}

impl<T: Real> Reduced<T> {
    fn new(asm: &Assemblage<T>) -> Result<Self> {
        let n = asm.n_settings();
        if n > 12 {
            return Err(Error::InvalidParams(format!("{n} settings is too many for 2^N response functions")));
        }
        let members: Vec<usize> =
            (0..1usize << n).filter(|&l| (0..n).all(|x| !asm.cell(x, bit(l, x)).is_degenerate())).collect();
        let cells: Vec<(usize, usize)> = (0..n)
            .flat_map(|x| (0..2).map(move |a| (x, a)))
            .filter(|&(x, a)| !asm.cell(x, a).is_degenerate())
            .collect();
        let e: Vec<Vec<T>> = cells
            .iter()
            .map(|&(x, a)| members.iter().map(|&l| if bit(l, x) == a { T::one() } else { T::zero() }).collect())
            .collect();
        let rhs: Vec<Vec<T>> = cells
            .iter()
            .map(|&(x, a)| {
                let c = asm.cell(x, a);
                let u = c.unnormalized;
                vec![c.prob, u.x, u.y, u.z]
            })
            .collect();
        let red = rref(&e, &rhs, T::lit(1e-9));
        let m = members.len();
        let mut y0: [Vec<T>; 4] = std::array::from_fn(|_| vec![T::zero(); m]);
        for (row, &col) in red.pivots.iter().enumerate() {
            for (k, y) in y0.iter_mut().enumerate() {
                y[col] = red.rhs[row][k];
            }
        }
        let dim = red.free.len();
        let mut basis = vec![vec![T::zero(); dim]; m];
        for (j, &f) in red.free.iter().enumerate() {
            basis[f][j] = T::one();
            for (row, &col) in red.pivots.iter().enumerate() {
                basis[col][j] = -red.rows[row][f];
            }
        }

        // product distribution and its matching vectors as a central start
        let vbar = asm.reduced_bloch();
        let mut start_full: [Vec<T>; 4] = std::array::from_fn(|_| vec![T::zero(); m]);
        for (i, &l) in members.iter().enumerate() {
            let mut p = T::one();
            let mut v = vbar.scale(-T::lit((n - 1) as f64));
            for x in 0..n {
                let c = asm.cell(x, bit(l, x));
                p *= c.prob;
                v += c.bloch();
            }
            let u = v.scale(p);
            start_full[0][i] = p;
            start_full[1][i] = u.x;
            start_full[2][i] = u.y;
            start_full[3][i] = u.z;
        }
        // the basis is the identity on the free columns
        let start = std::array::from_fn(|k| red.free.iter().map(|&f| start_full[k][f]).collect());
        Ok(Self { n_settings: n, members, y0, basis, dim, start })
    }

    fn expand(&self, k: usize, xi: &[T]) -> Vec<T> {
        self.y0[k]
            .iter()
            .zip(&self.basis)
            .map(|(&y, row)| y + row.iter().zip(xi).map(|(&b, &z)| b * z).sum::<T>())
            .collect()
    }

    /// Member probabilities and unnormalised vectors at `v = (ξ_p, ξ_x, ξ_y, ξ_z, …)`.
    fn point(&self, v: &[T]) -> (Vec<T>, Vec<BlochVector<T>>) {
        let d = self.dim;
        let comps: Vec<Vec<T>> = (0..4).map(|k| self.expand(k, &v[k * d..(k + 1) * d])).collect();
        let u = (0..self.members.len()).map(|i| BlochVector::new(comps[1][i], comps[2][i], comps[3][i])).collect();
        (comps[0].clone(), u)
    }

    fn ensemble(&self, p: &[T], u: &[BlochVector<T>]) -> LhsEnsemble<T> {
        let n = self.n_settings;
        let mut members: Vec<LhsMember<T>> = (0..1usize << n)
            .map(|l| LhsMember {
                response: (0..n).map(|x| bit(l, x) as u8).collect(),
                prob: T::zero(),
                bloch: BlochVector::zero(),
            })
            .collect();
        for (i, &l) in self.members.iter().enumerate() {
            members[l].prob = p[i];
            if p[i] > T::zero() {
                members[l].bloch = u[i].scale(T::one() / p[i]);
            }
        }
        LhsEnsemble { members }
    }
}

/// Reconstruction error plus cone violation of a candidate point.
fn point_residual<T: Real>(asm: &Assemblage<T>, red: &Reduced<T>, p: &[T], u: &[BlochVector<T>], r: T) -> T {
    let mut worst = T::zero();
    for x in 0..asm.n_settings() {
        for a in 0..2 {
            let cell = asm.cell(x, a);
            let mut sp = T::zero();
            let mut su = BlochVector::zero();
            for (i, &l) in red.members.iter().enumerate() {
                if bit(l, x) == a {
                    sp += p[i];
                    su += u[i];
                }
            }
            worst = worst.max((sp - cell.prob).abs()).max(su.max_abs_diff(&cell.unnormalized));
        }
    }
    for (pi, ui) in p.iter().zip(u) {
        worst = worst.max(ui.norm() - r * *pi).max(-*pi);
    }
    worst
}

/// Barrier state for a fixed radius.
struct Barrier<'a, T> {
    red: &'a Reduced<T>,
    inv_r: T,
}

impl<'a, T: Real> Barrier<'a, T> {
    fn nvars(&self) -> usize {
        4 * self.red.dim + 1
    }

    /// Cone coordinates `(p − t, u/R)` of every member.
    fn cones(&self, v: &[T]) -> Vec<[T; 4]> {
        let (p, u) = self.red.point(v);
        let t = v[v.len() - 1];
        p.iter().zip(&u).map(|(&pi, ui)| [pi - t, ui.x * self.inv_r, ui.y * self.inv_r, ui.z * self.inv_r]).collect()
    }

    fn slack(c: &[T; 4]) -> T {
        c[0] * c[0] - c[1] * c[1] - c[2] * c[2] - c[3] * c[3]
    }

    fn inside(cones: &[[T; 4]]) -> bool {
        cones.iter().all(|c| c[0] > T::zero() && Self::slack(c) > T::zero())
    }

    /// `−τ t − Σ ln q_λ`, or `None` outside the domain.
    fn value(&self, v: &[T], tau: T) -> Option<T> {
        let cones = self.cones(v);
        if !Self::inside(&cones) {
            return None;
        }
        let logs: T = cones.iter().map(|c| Self::slack(c).ln()).sum();
        Some(-tau * v[v.len() - 1] - logs)
    }

    fn grad_hess(&self, v: &[T], tau: T) -> (Vec<T>, Vec<Vec<T>>) {
        let n = self.nvars();
        let d = self.red.dim;
        let cones = self.cones(v);
        let mut g = vec![T::zero(); n];
        let mut h = vec![vec![T::zero(); n]; n];
        g[n - 1] = -tau;
        let two = T::lit(2.0);
        let mut a: [Vec<T>; 4] = std::array::from_fn(|_| vec![T::zero(); n]);
        for (i, c) in cones.iter().enumerate() {
            let row = &self.red.basis[i];
            for ak in a.iter_mut() {
                ak.iter_mut().for_each(|x| *x = T::zero());
            }
            for j in 0..d {
                a[0][j] = row[j];
                for k in 1..4 {
                    a[k][k * d + j] = row[j] * self.inv_r;
                }
            }
            a[0][n - 1] = -T::one();
            let q = Self::slack(c);
            // ∇q = 2 (x0 a0 − Σ xk ak)
            let dq: Vec<T> =
                (0..n).map(|j| two * (c[0] * a[0][j] - c[1] * a[1][j] - c[2] * a[2][j] - c[3] * a[3][j])).collect();
            let iq = T::one() / q;
            for j in 0..n {
                g[j] -= dq[j] * iq;
            }
            let iq2 = iq * iq;
            let w = two * iq;
            for r in 0..n {
                for s in 0..=r {
                    let jac = a[0][r] * a[0][s] - a[1][r] * a[1][s] - a[2][r] * a[2][s] - a[3][r] * a[3][s];
                    h[r][s] += dq[r] * dq[s] * iq2 - w * jac;
                }
            }
        }
        for r in 0..n {
            for s in 0..r {
                h[s][r] = h[r][s];
            }
        }
        (g, h)
    }
}

/// Squared Newton decrement at which an iterate counts as centred.
const CENTRED_DEC2: f64 = 1e-7;
const MAX_INNER: usize = 80;

enum Verdict<T> {
    Feasible(Vec<T>),
    Infeasible(T),
    Boundary(Vec<T>),
}

impl<T: Real> LhsSolver<T> {
    pub fn feasible(&self, asm: &Assemblage<T>, r: T) -> Result<Feasibility<T>> {
        if !(r >= T::zero()) {
            return Err(Error::InvalidParams(format!("radius {r} must be non-negative")));
        }
        let red = Reduced::new(asm)?;
        self.feasible_reduced(asm, &red, r)
    }

    fn feasible_reduced(&self, asm: &Assemblage<T>, red: &Reduced<T>, r: T) -> Result<Feasibility<T>> {
        if red.members.is_empty() {
            return Err(Error::InvalidParams("every response function hits a degenerate cell".into()));
        }
        if r <= T::zero() {
            return Ok(self.zero_radius(asm, red));
        }
        let (verdict, steps) = self.decide(red, r)?;
        let finish = |v: &[T], feasible: bool| {
            let (p, u) = red.point(v);
            let margin = p.iter().zip(&u).map(|(&pi, ui)| pi - ui.norm() / r).fold(T::infinity(), T::min);
            let residual = point_residual(asm, red, &p, &u, r);
            Feasibility {
                feasible,
                ensemble: feasible.then(|| red.ensemble(&p, &u)),
                residual,
                margin,
                newton_steps: steps,
            }
        };
        Ok(match verdict {
            Verdict::Feasible(v) => finish(&v, true),
            Verdict::Boundary(v) => {
                let f = finish(&v, true);
                if f.residual > self.cert_tol {
                    return Err(Error::SolverStall(format!(
                        "undecided at R = {r}: margin {} with residual {}",
                        f.margin, f.residual
                    )));
                }
                f
            }
            Verdict::Infeasible(t) => {
                Feasibility { feasible: false, ensemble: None, residual: T::infinity(), margin: t, newton_steps: steps }
            }
        })
    }

    /// Radius zero needs every conditional vector to vanish.
    fn zero_radius(&self, asm: &Assemblage<T>, red: &Reduced<T>) -> Feasibility<T> {
        let worst = asm.cells().iter().flatten().map(|c| c.unnormalized.norm()).fold(T::zero(), T::max);
        let p = red.expand(0, &red.start[0]);
        let u = vec![BlochVector::zero(); p.len()];
        let feasible = worst <= self.cert_tol;
        Feasibility {
            feasible,
            ensemble: feasible.then(|| red.ensemble(&p, &u)),
            residual: point_residual(asm, red, &p, &u, T::zero()),
            margin: -worst,
            newton_steps: 0,
        }
    }

    fn decide(&self, red: &Reduced<T>, r: T) -> Result<(Verdict<T>, usize)> {
        let barrier = Barrier { red, inv_r: T::one() / r };
        let n = barrier.nvars();
        let d = red.dim;
        let mut v = vec![T::zero(); n];
        for k in 0..4 {
            v[k * d..(k + 1) * d].copy_from_slice(&red.start[k]);
        }
        v[n - 1] = T::zero();
        let margin0 = barrier
            .cones(&v)
            .iter()
            .map(|c| c[0] - (c[1] * c[1] + c[2] * c[2] + c[3] * c[3]).sqrt())
            .fold(T::infinity(), T::min);
        if margin0 >= T::zero() {
            v[n - 1] = margin0;
            return Ok((Verdict::Feasible(v), 0));
        }
        if d == 0 {
            return Ok((Verdict::Infeasible(margin0), 0));
        }
        v[n - 1] = margin0 - T::one();

        let nu = T::lit(2.0 * red.members.len() as f64);
        let mut tau = T::one();
        let mut steps = 0usize;
        loop {
            // centre for the current τ
            let mut dec;
            let mut floor = false;
            let mut inner = 0usize;
            loop {
                if steps >= self.max_newton {
                    return Err(Error::SolverStall(format!("Newton budget exhausted at R = {r}")));
                }
                let (g, h) = barrier.grad_hess(&v, tau);
                let neg_g: Vec<T> = g.iter().map(|&x| -x).collect();
                let step = spd_solve(&h, &neg_g)
                    .ok_or_else(|| Error::SolverStall(format!("singular barrier Hessian at R = {r}")))?;
                let dec2: T = -g.iter().zip(&step).map(|(&a, &b)| a * b).sum::<T>();
                if !dec2.is_finite() {
                    return Err(Error::SolverStall(format!("non-finite Newton step at R = {r}")));
                }
                dec = dec2.max(T::zero()).sqrt();
                if dec2 <= T::lit(CENTRED_DEC2) {
                    break;
                }
                let f0 = barrier.value(&v, tau).expect("iterate stays interior");
                let mut alpha = T::one();
                let mut accepted = None;
                for _ in 0..60 {
                    let trial: Vec<T> = v.iter().zip(&step).map(|(&a, &b)| a + alpha * b).collect();
                    if let Some(f1) = barrier.value(&trial, tau) {
                        if f1 <= f0 - T::lit(0.25) * alpha * dec2 {
                            accepted = Some((trial, f1));
                            break;
                        }
                    }
                    alpha *= T::lit(0.5);
                }
                steps += 1;
                inner += 1;
                match accepted {
                    Some((trial, f1)) if f1 < f0 && trial != v => v = trial,
                    // round-off floor: the barrier cannot be decreased further
                    _ => {
                        floor = true;
                        break;
                    }
                }
                if v[n - 1] >= T::zero() {
                    return Ok((Verdict::Feasible(v), steps));
                }
                if inner >= MAX_INNER {
                    floor = true;
                    break;
                }
            }
            let t = v[n - 1];
            let beta = dec.min(T::lit(0.5));
            let gap = (nu + (beta + nu.sqrt()) * beta / (T::one() - beta)) / tau;
            if t + gap < T::zero() {
                return Ok((Verdict::Infeasible(t), steps));
            }
            // a round-off floor reached while nearly centred still gives a
            // valid gap bound: it means "on the boundary" once the bracket is
            // at certificate precision, otherwise keep following the path
            let centred = dec <= T::lit(0.5);
            if gap <= self.gap_tol || (floor && centred && gap <= self.cert_tol) {
                return Ok((Verdict::Boundary(v), steps));
            }
            if floor && !centred {
                return Err(Error::SolverStall(format!("barrier centring failed at R = {r}")));
            }
            tau *= self.mu;
        }
    }

    pub fn radius(&self, asm: &Assemblage<T>) -> Result<SteeringRadiusResult<T>> {
        let red = Reduced::new(asm)?;
        let mut iterations = 0usize;
        let mut newton = 0usize;
        let mut query = |r: T| -> Result<Feasibility<T>> {
            iterations += 1;
            let f = self.feasible_reduced(asm, &red, r)?;
            newton += f.newton_steps;
            Ok(f)
        };

        // every cell is a mixture of hidden states, so no hidden state can be
        // shorter than the longest cell vector
        let lo0 = asm.max_cell_length();
        // at the bound itself the feasible set may have empty interior, so a
        // stalled query there only means "not certified"
        let at_lo = match query(lo0) {
            Ok(f) => Some(f),
            Err(Error::SolverStall(_)) => None,
            Err(e) => return Err(e),
        };
        let (radius, cert) = if let Some(f) = at_lo.filter(|f| f.feasible) {
            (lo0, f)
        } else {
            let mut hi = T::lit(2.0).max(lo0 * T::lit(2.0));
            let mut best = query(hi)?;
            while !best.feasible {
                hi *= T::lit(2.0);
                if hi > T::lit(16.0).max(lo0 * T::lit(16.0)) {
                    return Err(Error::SolverStall("no feasible upper bracket".into()));
                }
                best = query(hi)?;
            }
            let mut lo = lo0;
            while hi - lo > self.bisection_width * T::lit(0.25) {
                let mid = (lo + hi) * T::lit(0.5);
                if mid <= lo || mid >= hi {
                    break;
                }
                let f = query(mid)?;
                if f.feasible {
                    hi = mid;
                    best = f;
                } else {
                    lo = mid;
                }
            }
            (hi, best)
        };
        let ensemble = cert.ensemble.expect("feasible query carries an ensemble");
        debug_assert!(cert.residual <= self.cert_tol * T::lit(100.0));
        Ok(SteeringRadiusResult { radius, residual: cert.residual, ensemble, iterations, newton_steps: newton })
    }
}
