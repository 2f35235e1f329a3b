//! Closed-form steering radii for the three strategies and their mixtures.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::measurements::{check_pq, CaseId};
use crate::scalar::Real;
use crate::states::StateParams;

/// Directed link of the three-party chain Alice–Bob–Charlie.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Link {
    AB,
    BA,
    AC,
    CA,
}

impl Link {
    pub const ALL: [Link; 4] = [Link::AB, Link::BA, Link::AC, Link::CA];

    pub fn as_str(self) -> &'static str {
        match self {
            Link::AB => "AB",
            Link::BA => "BA",
            Link::AC => "AC",
            Link::CA => "CA",
        }
    }
}

impl fmt::Display for Link {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Link {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().replace("->", "").as_str() {
            "AB" => Ok(Link::AB),
            "BA" => Ok(Link::BA),
            "AC" => Ok(Link::AC),
            "CA" => Ok(Link::CA),
            _ => Err(Error::InvalidParams(format!("unknown link '{s}'"))),
        }
    }
}

fn finite<T: Real>(v: T, what: &str) -> Result<T> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NumericalFailure(format!("{what} evaluated to {v}")))
    }
}

fn lit<T: Real>(x: f64) -> T {
    T::lit(x)
}

/// `[k(Wc+1)² − √P] / c` for an equal-length bracket that vanishes at
/// `c = cos 2θ = 0`, given `P = k² + c²·dp`. Multiplying by `sin 2θ` gives
/// the `tan 2θ · [...]` term of the closed forms without the removable
/// singularity at `θ = π/4`.
pub(crate) fn bracket_over_c<T: Real>(w: T, c: T, k: T, dp: T) -> T {
    let wc = w * c;
    let p = k * k + c * c * dp;
    let num = k * k * w * (lit::<T>(4.0) + wc * (lit::<T>(6.0) + wc * (lit::<T>(4.0) + wc))) - c * dp;
    let den = k * (wc + T::one()) * (wc + T::one()) + p.max(T::zero()).sqrt();
    if den > T::zero() {
        num / den
    } else {
        T::zero()
    }
}

fn sc<T: Real>(th: T) -> (T, T) {
    (th + th).sin_cos()
}

// At (W, θ) = (1, π/2) the forward forms are 0/0; the values there are
// their continuous limits (the brackets carry a factor 1 + Wc at W = 1).
pub(crate) fn product_corner<T: Real>(w: T, c: T) -> bool {
    !(w * c + T::one() > T::zero())
}

fn r1_ab<T: Real>(w: T, th: T) -> T {
    let (s, c) = sc(th);
    if product_corner(w, c) {
        return T::one();
    }
    let w2 = w * w;
    let a = lit::<T>(2.0) * w2 * w2;
    let b = lit::<T>(8.0) * (w2 * w2 - lit::<T>(6.0) * w2 + lit::<T>(4.0));
    let g = bracket_over_c(w, c, lit(4.0), lit::<T>(8.0) * a * (c * c - T::one()) + lit::<T>(2.0) * b);
    (s * s * g * g + lit::<T>(64.0) * (c + w) * (c + w)).sqrt() / (lit::<T>(8.0) * (w * c + T::one()))
}

fn r1_ba<T: Real>(w: T, th: T) -> T {
    let s = (th + th).sin();
    w * (T::one() + s * s).sqrt()
}

fn r1_ac<T: Real>(w: T, th: T) -> T {
    r1_ab(w, th) * lit(0.5)
}

fn r1_ca<T: Real>(w: T, th: T) -> T {
    let (s, c) = sc(th);
    let c2 = c * c;
    // J / c, with the square root rationalised
    let u = lit::<T>(16.0) + lit::<T>(16.0) * c + lit::<T>(4.0) * c2;
    let q = lit::<T>(16.0) * c2 * c2 + lit::<T>(640.0) * c2 + lit::<T>(256.0);
    let j = (lit::<T>(512.0) - lit::<T>(256.0) * c + lit::<T>(128.0) * c2) / (u + q.sqrt());
    let a = lit::<T>(2.0) * c + T::one();
    w * (lit::<T>(256.0) * a * a + s * s * j * j).sqrt() / (lit::<T>(16.0) * (c + lit::<T>(2.0)))
}

fn r3_ac<T: Real>(w: T, th: T) -> T {
    let (s, c) = sc(th);
    if product_corner(w, c) {
        return T::one();
    }
    let w2 = w * w;
    let a = lit::<T>(2.0) * w2 * w2;
    let b = lit::<T>(8.0) * (w2 * w2 - lit::<T>(18.0) * w2 + lit::<T>(16.0));
    let g = bracket_over_c(w, c, lit(4.0), lit::<T>(8.0) * a * (c * c - T::one()) + lit::<T>(2.0) * b);
    (s * s * g * g + lit::<T>(256.0) * (c + w) * (c + w)).sqrt() / (lit::<T>(16.0) * (w * c + T::one()))
}

fn r3_ca<T: Real>(w: T, th: T) -> T {
    let s = (th + th).sin();
    w * (T::one() + s * s * lit(0.25)).sqrt()
}

/// Closed-form radius of a pure strategy on one link.
pub fn analytic_radius<T: Real>(case: CaseId, link: Link, params: StateParams<T>) -> Result<T> {
    params.check()?;
    let StateParams { w, theta } = params;
    let v = match (case, link) {
        (_, Link::AB) => r1_ab(w, theta),
        (CaseId::One, Link::BA) => r1_ba(w, theta),
        (CaseId::One, Link::AC) => r1_ac(w, theta),
        (CaseId::One, Link::CA) => r1_ca(w, theta),
        (CaseId::Two, Link::BA) => w * (theta + theta).cos().abs(),
        (CaseId::Two, Link::AC) => r1_ab(w, theta),
        (CaseId::Two, Link::CA) => r1_ba(w, theta),
        (CaseId::Three, Link::BA) => w,
        (CaseId::Three, Link::AC) => r3_ac(w, theta),
        (CaseId::Three, Link::CA) => r3_ca(w, theta),
    };
    finite(v, "closed-form radius")
}

/// [`analytic_radius`] addressed by case number and link name.
pub fn analytic_radius_for<T: Real>(case: u32, link: &str, params: StateParams<T>) -> Result<T> {
    let case_id = CaseId::try_from(case)?;
    let link: Link = link.parse().map_err(|_| Error::UnknownCaseLink { case, link: link.to_string() })?;
    analytic_radius(case_id, link, params)
}

/// Closed-form radius when Bob uses cases 1, 2, 3 with weights `p`, `q`, `1 − p − q`.
pub fn mixture_radius<T: Real>(link: Link, p: T, q: T, params: StateParams<T>) -> Result<T> {
    check_pq(p, q)?;
    params.check()?;
    let StateParams { w, theta } = params;
    let one = T::one();
    let two = lit::<T>(2.0);
    let v = match link {
        Link::AB => r1_ab(w, theta),
        Link::BA => {
            let (st, ct) = theta.sin_cos();
            let (s, c) = sc(theta);
            let h = p * p * s * s + lit::<T>(4.0) * q * (one - q) * c * c;
            // [2p cos³θ − √h sin θ] / cos 2θ, rationalised
            let den = two * p * ct * ct * ct + h.max(T::zero()).sqrt() * st;
            let g2 = if den > T::zero() {
                let g = lit::<T>(4.0) * (p * p * ct * ct - q * (one - q) * c * st * st) / den;
                g * g
            } else {
                lit::<T>(4.0) * q * (one - q) * st * st
            };
            let z = one - two * q * st * st;
            w * (st * st * g2 + z * z).sqrt()
        }
        Link::AC => {
            let (s, c) = sc(theta);
            if product_corner(w, c) {
                return Ok((two - p) * lit(0.5));
            }
            let wc1 = w * c + one;
            let a = one + q;
            let b = two - p;
            let m = one - w * w * c * c;
            let qq = a * a * m * m + lit::<T>(4.0) * b * b * (one - w * w) * c * c;
            let den = a * wc1 * wc1 + qq.max(T::zero()).sqrt();
            let g = if den > T::zero() {
                lit::<T>(4.0) * (a * a * w * wc1 * wc1 - b * b * (one - w * w) * c) / den
            } else {
                T::zero()
            };
            (lit::<T>(4.0) * b * b * (c + w) * (c + w) + s * s * g * g).sqrt() / (lit::<T>(4.0) * wc1)
        }
        Link::CA => {
            let s = (theta + theta).sin();
            let c = (theta + theta).cos();
            let half = lit::<T>(0.5);
            symmetric_radius(w * s * (one + q) * half, w * c, (two - p) * c * half, w * (two - p) * half)
        }
    };
    finite(v, "mixture radius")
}

/// Exact radius of a two-setting assemblage with the reflection symmetry of
/// the state family:
///
/// * setting 0 cells: probability `1/2`, Bloch vector `(±x, 0, z0)`;
/// * setting 1 cells: probability `(1 ± γ)/2`, unnormalised Bloch vector
///   `(0, 0, (z0 ± zt)/2)`.
///
/// The optimal ensemble is symmetric under `x → −x` and `y → −y`, which
/// leaves a single free parameter; the result is the min–max over it.
pub fn symmetric_radius<T: Real>(x: T, z0: T, gamma: T, zt: T) -> T {
    let quarter = lit::<T>(0.25);
    let a_p = (T::one() + gamma) * quarter;
    let a_m = (T::one() - gamma) * quarter;
    let z_p = (z0 + zt) * quarter;
    let z_m = (z0 - zt) * quarter;
    let h = x.abs() * lit(0.5);
    let tiny = T::lit(T::DEGENERATE_PROB);

    // member pairs with outcome 0 / 1 on setting 1 carry x-offsets ξ and h − ξ
    let len_p = |xi: T| (xi * xi + z_p * z_p).sqrt() / a_p;
    let len_m = |xi: T| ((h - xi) * (h - xi) + z_m * z_m).sqrt() / a_m;
    if a_m <= tiny {
        return len_p(h);
    }
    if a_p <= tiny {
        return len_m(T::zero());
    }
    if len_p(T::zero()) >= len_m(T::zero()) {
        return len_p(T::zero());
    }
    if len_m(h) >= len_p(h) {
        return len_m(h);
    }
    // equal lengths: (a_m² − a_p²) ξ² + 2 a_p² h ξ + a_m² z_p² − a_p² (h² + z_m²) = 0
    let qa = a_m * a_m - a_p * a_p;
    let qb = lit::<T>(2.0) * a_p * a_p * h;
    let qc = a_m * a_m * z_p * z_p - a_p * a_p * (h * h + z_m * z_m);
    let in_range = |xi: T| xi >= -T::epsilon() * h.max(T::one()) && xi <= h * (T::one() + T::epsilon() * lit(8.0));
    let xi = if qa.abs() <= T::epsilon() * qb.abs().max(T::min_positive_value()) {
        -qc / qb
    } else {
        let disc = (qb * qb - lit::<T>(4.0) * qa * qc).max(T::zero()).sqrt();
        let qq = -(qb + qb.signum() * disc) * lit(0.5);
        let r1 = qq / qa;
        let r2 = if qq != T::zero() { qc / qq } else { r1 };
        if in_range(r1) {
            r1
        } else {
            r2
        }
    };
    let xi = xi.max(T::zero()).min(h);
    len_p(xi).max(len_m(xi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, SQRT_2};

    fn sp(w: f64, t: f64) -> StateParams<f64> {
        StateParams::new(w, t).unwrap()
    }

    #[test]
    fn printed_examples() {
        let p = sp(0.8, FRAC_PI_8);
        let s2 = (2.0 * FRAC_PI_8).sin().powi(2);
        assert!((analytic_radius(CaseId::One, Link::BA, p).unwrap() - 0.8 * (1.0 + s2).sqrt()).abs() < 1e-15);
        assert!((analytic_radius(CaseId::Three, Link::CA, p).unwrap() - 0.8 * (1.0 + s2 / 4.0).sqrt()).abs() < 1e-15);
        assert_eq!(analytic_radius(CaseId::Three, Link::BA, p).unwrap(), 0.8);
        assert!((analytic_radius(CaseId::Two, Link::BA, p).unwrap() - 0.565_685_424_949_238).abs() < 1e-12);
    }

    #[test]
    fn quarter_pi_is_regular() {
        for w in [0.0, 0.3, 1.0] {
            let at = analytic_radius(CaseId::One, Link::AB, sp(w, FRAC_PI_4)).unwrap();
            assert!((at - SQRT_2 * w).abs() < 1e-15, "W={w}: {at}");
            let near = analytic_radius(CaseId::One, Link::AB, sp(w, FRAC_PI_4 - 1e-9)).unwrap();
            assert!((at - near).abs() < 1e-8);
        }
        let ac = analytic_radius(CaseId::Three, Link::AC, sp(1.0, FRAC_PI_4)).unwrap();
        assert!((ac - 5f64.sqrt() / 2.0).abs() < 1e-15);
        let ca = analytic_radius(CaseId::One, Link::CA, sp(1.0, FRAC_PI_4)).unwrap();
        assert!((ca - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn product_corner_takes_the_limit() {
        let corner = sp(1.0, FRAC_PI_2);
        let near = sp(1.0, FRAC_PI_2 - 1e-5);
        for case in CaseId::ALL {
            for link in Link::ALL {
                let a = analytic_radius(case, link, corner).unwrap();
                let b = analytic_radius(case, link, near).unwrap();
                assert!((a - b).abs() < 1e-8, "{case} {link}: {a} vs {b}");
            }
        }
        for link in Link::ALL {
            let a = mixture_radius(link, 0.3, 0.2, corner).unwrap();
            let b = mixture_radius(link, 0.3, 0.2, near).unwrap();
            assert!((a - b).abs() < 1e-8, "{link}: {a} vs {b}");
        }
    }

    #[test]
    fn link_parsing() {
        assert_eq!("ca".parse::<Link>().unwrap(), Link::CA);
        assert_eq!("A->B".parse::<Link>().unwrap(), Link::AB);
        assert!("AX".parse::<Link>().is_err());
        assert!(matches!(analytic_radius_for::<f64>(4, "AB", sp(1.0, 0.1)), Err(Error::UnknownCase(4))));
        assert!(matches!(analytic_radius_for::<f64>(1, "XY", sp(1.0, 0.1)), Err(Error::UnknownCaseLink { .. })));
    }

    #[test]
    fn mixture_degenerate_limits() {
        let p = sp(0.9, 0.3);
        let s2 = (0.6f64).sin().powi(2);
        let ba = mixture_radius(Link::BA, 0.0, 0.35, p).unwrap();
        assert!((ba - 0.9 * (1.0 - 0.35 * s2).sqrt()).abs() < 1e-12);
        let ba1 = mixture_radius(Link::BA, 1.0, 0.0, p).unwrap();
        assert!((ba1 - analytic_radius(CaseId::One, Link::BA, p).unwrap()).abs() < 1e-12);
        let ca = mixture_radius(Link::CA, 0.0, 0.0, p).unwrap();
        assert!((ca - analytic_radius(CaseId::Three, Link::CA, p).unwrap()).abs() < 1e-12);
        assert!(matches!(mixture_radius(Link::BA, 0.7, 0.5, p), Err(Error::InvalidMixtureWeights(_))));
    }
}
