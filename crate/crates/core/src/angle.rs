//! Phases modulo π and 2π.
//!
//! An [`Angle`] is either an exact rational multiple of π or a plain float in
//! radians. Arithmetic between two exact angles stays exact; anything touching
//! a float is downgraded to a float.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

/// Default tolerance for comparisons involving approximate angles.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Modulus {
    Pi,
    TwoPi,
}

impl Modulus {
    fn units(self) -> i64 {
        match self {
            Modulus::Pi => 1,
            Modulus::TwoPi => 2,
        }
    }

    pub fn radians(self) -> f64 {
        self.units() as f64 * PI
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AngleRepr", into = "AngleRepr")]
pub enum Angle {
    /// `ratio · π`, always reduced with a positive denominator.
    Exact(Ratio<i64>),
    Approx(f64),
}

impl Angle {
    pub const ZERO: Angle = Angle::Exact(Ratio::new_raw(0, 1));
    pub const PI: Angle = Angle::Exact(Ratio::new_raw(1, 1));
    pub const HALF_PI: Angle = Angle::Exact(Ratio::new_raw(1, 2));

    /// `(num/den)·π`.
    ///
    /// Panics if `den == 0`.
    pub fn pi_frac(num: i64, den: i64) -> Angle {
        Angle::Exact(Ratio::new(num, den))
    }

    pub fn rad(x: f64) -> Angle {
        Angle::Approx(x)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Angle::Exact(_))
    }

    /// Numerator and denominator of the multiple of π, if exact.
    pub fn as_pi_frac(&self) -> Option<(i64, i64)> {
        match self {
            Angle::Exact(r) => Some((*r.numer(), *r.denom())),
            Angle::Approx(_) => None,
        }
    }

    pub fn radians(&self) -> f64 {
        match self {
            Angle::Exact(r) => *r.numer() as f64 / *r.denom() as f64 * PI,
            Angle::Approx(x) => *x,
        }
    }

    pub fn scale(&self, k: i64) -> Angle {
        match self {
            Angle::Exact(r) => Angle::Exact(r * k),
            Angle::Approx(x) => Angle::Approx(x * k as f64),
        }
    }

    /// Divides by a nonzero integer.
    pub fn div_int(&self, k: i64) -> Angle {
        assert!(k != 0, "division of an angle by zero");
        match self {
            Angle::Exact(r) => Angle::Exact(r / k),
            Angle::Approx(x) => Angle::Approx(x / k as f64),
        }
    }

    /// Representative in `[0, modulus)`.
    pub fn normalize(&self, modulus: Modulus) -> Angle {
        match self {
            Angle::Exact(r) => {
                let m = Ratio::from_integer(modulus.units());
                let q = (r / m).floor();
                Angle::Exact(r - q * m)
            }
            Angle::Approx(x) => {
                let m = modulus.radians();
                let y = x.rem_euclid(m);
                Angle::Approx(if y >= m { 0.0 } else { y })
            }
        }
    }

    /// Distance from `self - other` to the nearest multiple of `modulus`, in radians.
    pub fn dist_mod(&self, other: &Angle, modulus: Modulus) -> f64 {
        let d = (*self - *other).normalize(modulus);
        match d {
            Angle::Exact(r) if *r.numer() == 0 => 0.0,
            _ => {
                let x = d.radians();
                x.min(modulus.radians() - x)
            }
        }
    }

    /// Congruence test. Exact angles compare exactly and ignore `tol`.
    pub fn equal_mod(&self, other: &Angle, modulus: Modulus, tol: f64) -> bool {
        match (self, other) {
            (Angle::Exact(_), Angle::Exact(_)) => self.dist_mod(other, modulus) == 0.0,
            _ => self.dist_mod(other, modulus) <= tol,
        }
    }

    fn ordering_key(&self) -> f64 {
        self.radians()
    }
}

/// Free-function form of [`Angle::normalize`].
pub fn normalize(a: Angle, modulus: Modulus) -> Angle {
    a.normalize(modulus)
}

/// Free-function form of [`Angle::equal_mod`].
pub fn equal_mod(a: Angle, b: Angle, modulus: Modulus, tol: f64) -> bool {
    a.equal_mod(&b, modulus, tol)
}

impl Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        match (self, rhs) {
            (Angle::Exact(a), Angle::Exact(b)) => Angle::Exact(a + b),
            _ => Angle::Approx(self.radians() + rhs.radians()),
        }
    }
}

impl Sub for Angle {
    type Output = Angle;
    fn sub(self, rhs: Angle) -> Angle {
        self + (-rhs)
    }
}

impl Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        match self {
            Angle::Exact(a) => Angle::Exact(-a),
            Angle::Approx(x) => Angle::Approx(-x),
        }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Angle::Exact(r) => {
                let (n, d) = (*r.numer(), *r.denom());
                match (n, d) {
                    (0, _) => write!(f, "0"),
                    (1, 1) => write!(f, "π"),
                    (-1, 1) => write!(f, "-π"),
                    (n, 1) => write!(f, "{n}π"),
                    (1, d) => write!(f, "π/{d}"),
                    (-1, d) => write!(f, "-π/{d}"),
                    (n, d) => write!(f, "{n}π/{d}"),
                }
            }
            Angle::Approx(x) => write!(f, "{x:.12}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum AngleRepr {
    Pi { pi: [i64; 2] },
    Rad { rad: f64 },
}

impl TryFrom<AngleRepr> for Angle {
    type Error = String;

    fn try_from(r: AngleRepr) -> Result<Self, Self::Error> {
        match r {
            AngleRepr::Pi { pi: [n, d] } => {
                if d <= 0 {
                    Err(format!("angle denominator must be positive, got {d}"))
                } else {
                    Ok(Angle::pi_frac(n, d))
                }
            }
            AngleRepr::Rad { rad } if rad.is_finite() => Ok(Angle::Approx(rad)),
            AngleRepr::Rad { rad } => Err(format!("angle must be finite, got {rad}")),
        }
    }
}

impl From<Angle> for AngleRepr {
    fn from(a: Angle) -> Self {
        match a {
            Angle::Exact(r) => AngleRepr::Pi {
                pi: [*r.numer(), *r.denom()],
            },
            Angle::Approx(rad) => AngleRepr::Rad { rad },
        }
    }
}

/// `2·gap·λ ≡ rhs (mod π)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CongruenceConstraint {
    gap: i64,
    rhs: Angle,
}

impl CongruenceConstraint {
    /// Panics if `gap < 1`.
    pub fn new(gap: i64, rhs: Angle) -> Self {
        assert!(gap >= 1, "congruence gap must be positive");
        CongruenceConstraint {
            gap,
            rhs: rhs.normalize(Modulus::Pi),
        }
    }

    pub fn gap(&self) -> i64 {
        self.gap
    }

    pub fn rhs(&self) -> Angle {
        self.rhs
    }

    pub fn residual(&self, lambda: &Angle) -> f64 {
        lambda.scale(2 * self.gap).dist_mod(&self.rhs, Modulus::Pi)
    }

    pub fn is_satisfied(&self, lambda: &Angle, tol: f64) -> bool {
        lambda
            .scale(2 * self.gap)
            .equal_mod(&self.rhs, Modulus::Pi, tol)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SolutionSet {
    /// No constraints: every λ works.
    All,
    /// Sorted representatives in `[0, π)`.
    Finite(Vec<Angle>),
    Empty,
}

impl SolutionSet {
    /// Smallest representative, with `0` standing in for [`SolutionSet::All`].
    pub fn first(&self) -> Option<Angle> {
        match self {
            SolutionSet::All => Some(Angle::ZERO),
            SolutionSet::Finite(v) => v.first().copied(),
            SolutionSet::Empty => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, SolutionSet::Empty)
    }
}

/// Solves the family `2·d_k·λ ≡ c_k (mod π)` for λ modulo π.
///
/// The first constraint pins λ to `2·d₁` candidates `(c₁ + mπ)/(2d₁)`; the
/// rest filter them.
pub fn solve_family(constraints: &[CongruenceConstraint], tol: f64) -> SolutionSet {
    let Some(first) = constraints.first() else {
        return SolutionSet::All;
    };
    let two_d = 2 * first.gap;
    let mut sols: Vec<Angle> = (0..two_d)
        .map(|m| (first.rhs + Angle::PI.scale(m)).div_int(two_d).normalize(Modulus::Pi))
        .filter(|lam| constraints[1..].iter().all(|c| c.is_satisfied(lam, tol)))
        .collect();
    sols.sort_by(|a, b| {
        a.ordering_key()
            .partial_cmp(&b.ordering_key())
            .unwrap_or(Ordering::Equal)
    });
    let mut out: Vec<Angle> = Vec::with_capacity(sols.len());
    for s in sols {
        if !out.iter().any(|o| o.equal_mod(&s, Modulus::Pi, tol)) {
            out.push(s);
        }
    }
    if out.is_empty() {
        SolutionSet::Empty
    } else {
        SolutionSet::Finite(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_examples() {
        assert_eq!(Angle::pi_frac(3, 1).normalize(Modulus::TwoPi), Angle::PI);
        assert_eq!(
            Angle::pi_frac(-1, 2).normalize(Modulus::Pi),
            Angle::pi_frac(1, 2)
        );
        let a = Angle::rad(7.0).normalize(Modulus::TwoPi);
        assert!((a.radians() - (7.0 - 2.0 * PI)).abs() < 1e-15);
        assert!((a.radians() - 0.71681).abs() < 1e-5);
    }

    #[test]
    fn normalize_tiny_negative_stays_in_range() {
        let a = Angle::rad(-1e-18).normalize(Modulus::TwoPi);
        let x = a.radians();
        assert!((0.0..2.0 * PI).contains(&x));
    }

    #[test]
    fn equal_mod_examples() {
        assert!(Angle::HALF_PI.equal_mod(&Angle::pi_frac(3, 2), Modulus::Pi, 0.0));
        assert!(!Angle::ZERO.equal_mod(&Angle::HALF_PI, Modulus::Pi, 0.0));
        assert!(Angle::rad(1e-13).equal_mod(&Angle::ZERO, Modulus::TwoPi, 1e-9));
        assert!(Angle::rad(2.0 * PI - 1e-13).equal_mod(&Angle::ZERO, Modulus::TwoPi, 1e-9));
    }

    #[test]
    fn mixing_downgrades() {
        assert!(!(Angle::PI + Angle::rad(0.5)).is_exact());
        assert!((Angle::PI - Angle::HALF_PI).is_exact());
    }

    #[test]
    fn display() {
        assert_eq!(Angle::ZERO.to_string(), "0");
        assert_eq!(Angle::PI.to_string(), "π");
        assert_eq!(Angle::pi_frac(3, 4).to_string(), "3π/4");
        assert_eq!(Angle::pi_frac(1, 2).to_string(), "π/2");
    }

    #[test]
    fn serde_forms() {
        let a: Angle = serde_json::from_str(r#"{"pi":[2,4]}"#).unwrap();
        assert_eq!(a, Angle::pi_frac(1, 2));
        assert_eq!(serde_json::to_string(&a).unwrap(), r#"{"pi":[1,2]}"#);
        let b: Angle = serde_json::from_str(r#"{"rad":0.25}"#).unwrap();
        assert_eq!(b, Angle::rad(0.25));
        assert!(serde_json::from_str::<Angle>(r#"{"pi":[1,0]}"#).is_err());
    }

    #[test]
    fn solve_family_examples() {
        assert_eq!(solve_family(&[], DEFAULT_TOL), SolutionSet::All);
        // 2λ ≡ 0 (mod π) by hand: λ ∈ {0, π/2}.
        let one = [CongruenceConstraint::new(1, Angle::ZERO)];
        assert_eq!(
            solve_family(&one, DEFAULT_TOL),
            SolutionSet::Finite(vec![Angle::ZERO, Angle::HALF_PI])
        );
        // {0, π/2} and {π/4, 3π/4} are disjoint.
        let two = [
            CongruenceConstraint::new(1, Angle::ZERO),
            CongruenceConstraint::new(1, Angle::HALF_PI),
        ];
        assert_eq!(solve_family(&two, DEFAULT_TOL), SolutionSet::Empty);
    }

    #[test]
    fn solve_family_gap_two() {
        // 4λ ≡ π/2: λ = π/8 + kπ/4.
        let c = [CongruenceConstraint::new(2, Angle::HALF_PI)];
        let SolutionSet::Finite(v) = solve_family(&c, DEFAULT_TOL) else {
            panic!()
        };
        let expect: Vec<Angle> = [1, 3, 5, 7].iter().map(|&k| Angle::pi_frac(k, 8)).collect();
        assert_eq!(v, expect);
    }

    fn grid_oracle(constraints: &[CongruenceConstraint], steps: usize, tol: f64) -> Vec<f64> {
        (0..steps)
            .map(|k| k as f64 * PI / steps as f64)
            .filter(|&lam| {
                constraints
                    .iter()
                    .all(|c| c.residual(&Angle::rad(lam)) <= tol)
            })
            .collect()
    }

    use proptest::prelude::*;

    fn exact_constraint() -> impl Strategy<Value = CongruenceConstraint> {
        (1i64..=4, 0i64..8).prop_map(|(d, k)| CongruenceConstraint::new(d, Angle::pi_frac(k, 8)))
    }

    proptest! {
        #[test]
        fn normalize_idempotent(n in -50i64..50, d in 1i64..13, x in -100.0f64..100.0) {
            for m in [Modulus::Pi, Modulus::TwoPi] {
                let e = Angle::pi_frac(n, d).normalize(m);
                prop_assert_eq!(e.normalize(m), e);
                let a = Angle::rad(x).normalize(m);
                prop_assert_eq!(a.normalize(m), a);
            }
        }

        #[test]
        fn equal_mod_is_an_equivalence(a in -20i64..20, b in -20i64..20, c in -20i64..20, d in 1i64..7) {
            let (x, y, z) = (Angle::pi_frac(a, d), Angle::pi_frac(b, d), Angle::pi_frac(c, d));
            let m = Modulus::Pi;
            prop_assert!(x.equal_mod(&x, m, 0.0));
            prop_assert_eq!(x.equal_mod(&y, m, 0.0), y.equal_mod(&x, m, 0.0));
            if x.equal_mod(&y, m, 0.0) && y.equal_mod(&z, m, 0.0) {
                prop_assert!(x.equal_mod(&z, m, 0.0));
            }
        }

        #[test]
        fn solve_family_matches_grid(cs in proptest::collection::vec(exact_constraint(), 0..4)) {
            // A grid point within π/2·10⁴ of a root has residual at most
            // 2d·π/2·10⁴ ≤ 4π/10⁴; any accepted point is then within half its
            // residual of a root.
            let got = solve_family(&cs, DEFAULT_TOL);
            let grid = grid_oracle(&cs, 10_000, 8.0 * PI / 10_000.0);
            match &got {
                SolutionSet::All => prop_assert!(cs.is_empty()),
                SolutionSet::Empty => {
                    // roots are multiples of π/(16d), all on a π/1920 grid
                    let strict = grid_oracle(&cs, 1920, 1e-9);
                    prop_assert!(strict.is_empty());
                }
                SolutionSet::Finite(v) => {
                    for lam in v {
                        for c in &cs {
                            prop_assert!(c.is_satisfied(lam, DEFAULT_TOL));
                        }
                    }
                    for g in &grid {
                        let near = v.iter().any(|l| {
                            Angle::rad(*g).dist_mod(l, Modulus::Pi) <= 4.0 * PI / 10_000.0 + 1e-12
                        });
                        prop_assert!(near, "grid point {} not near returned set {:?}", g, v);
                    }
                }
            }
        }
    }
}
