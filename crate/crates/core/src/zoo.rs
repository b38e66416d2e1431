//! Named models and seeded random walks.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_rational::Ratio;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::angle::Angle;
use crate::error::{Error, Result};
use crate::linalg::{cis, Ket, Op2};
use crate::walk::{Amp, Coin2, Extension, Form, PolarCoin, SiteBases, TypedClass, WalkSpec, EXACT_TOL};

pub const HADAMARD_WINDOW: (i64, i64) = (-8, 8);

/// The Hadamard walk, `C1`, one coin repeated everywhere.
pub fn hadamard() -> WalkSpec {
    hadamard_on(HADAMARD_WINDOW)
}

pub fn hadamard_on(window: (i64, i64)) -> WalkSpec {
    let len = (window.1 - window.0 + 1).max(1) as usize;
    WalkSpec::typed(TypedClass::C1, window.0, vec![Coin2::hadamard(); len], Extension::Periodic(1))
        .expect("hadamard walk")
}

/// One half of the two-coin model: coin `[[a, e^{iν}r], [e^{iμ}r, d]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfCoin {
    pub a: Amp,
    pub nu: Angle,
    pub mu: Angle,
    pub d: Amp,
    pub r: f64,
}

impl HalfCoin {
    /// The unitary half with `a = e^{iσ}√(1−r²)` and `d` fixed by unitarity.
    pub fn unitary(r: f64, sigma: Angle, nu: Angle, mu: Angle) -> HalfCoin {
        let pc = PolarCoin::unitary(r, sigma, nu, mu);
        HalfCoin {
            a: Amp::polar(pc.s, pc.sigma),
            nu: pc.nu,
            mu: pc.mu,
            d: Amp::polar(pc.s, pc.tau),
            r: pc.r,
        }
    }

    pub fn coin(&self) -> Coin2 {
        Coin2 {
            a: self.a,
            b: Amp::polar(self.r, self.nu),
            c: Amp::polar(self.r, self.mu),
            d: self.d,
        }
    }
}

/// `plus` on sites `n ≥ 0`, `minus` on `n < 0`, constant beyond the window.
pub fn two_coin(plus: HalfCoin, minus: HalfCoin, window: (i64, i64)) -> Result<WalkSpec> {
    let (lo, hi) = window;
    if lo > -1 || hi < 0 {
        return Err(Error::InvalidSpec("two-coin window must contain sites -1 and 0".into()));
    }
    for h in [&plus, &minus] {
        if !(h.r > EXACT_TOL) {
            return Err(Error::InvalidSpec("two-coin model needs r > 0 on both halves".into()));
        }
        h.coin().polar_form()?;
    }
    let coins = (lo..=hi)
        .map(|n| if n >= 0 { plus.coin() } else { minus.coin() })
        .collect();
    WalkSpec::typed(TypedClass::C1, lo, coins, Extension::ConstantTails)
}

/// Coins `(1/√2)[[e^{iωₙ}, 1], [1, −e^{−iωₙ}]]` on sites `n_min, n_min + 1, …`.
pub fn kitagawa_a(omega: &[Angle], n_min: i64) -> Result<WalkSpec> {
    let h = FRAC_1_SQRT_2;
    let coins = omega
        .iter()
        .map(|w| Coin2 {
            a: Amp::polar(h, *w),
            b: Amp::real(h),
            c: Amp::real(h),
            d: Amp::polar(-h, -*w),
        })
        .collect();
    WalkSpec::typed(TypedClass::C1, n_min, coins, Extension::WindowOnly)
}

/// Coins `(1/√2)[[1, e^{iωₙ}], [−e^{−iωₙ}, 1]]` on sites `n_min, n_min + 1, …`.
pub fn kitagawa_b(omega: &[Angle], n_min: i64) -> Result<WalkSpec> {
    let h = FRAC_1_SQRT_2;
    let coins = omega
        .iter()
        .map(|w| Coin2 {
            a: Amp::real(h),
            b: Amp::polar(h, *w),
            c: Amp::polar(-h, -*w),
            d: Amp::real(h),
        })
        .collect();
    WalkSpec::typed(TypedClass::C1, n_min, coins, Extension::WindowOnly)
}

/// Rotation coins `[[cos 2παn, −sin 2παn], [sin 2παn, cos 2παn]]`.
///
/// Entries are real, so every phase is exactly `0` or `π`; values within
/// `1e-12` of zero are snapped to zero.
pub fn shikano_katsura(alpha: Ratio<i64>, window: (i64, i64)) -> Result<WalkSpec> {
    let (lo, hi) = window;
    if hi < lo {
        return Err(Error::InvalidSpec("empty window".into()));
    }
    let coins = (lo..=hi)
        .map(|n| {
            // angle 2αn in units of π, reduced mod 2 before going to floats
            let x = alpha * Ratio::from_integer(2 * n);
            let x = x - (x / 2).floor() * 2;
            let t = PI * (*x.numer() as f64) / (*x.denom() as f64);
            let (c, s) = (snap(t.cos()), snap(t.sin()));
            Coin2::new(c, -s, s, c)
        })
        .collect();
    WalkSpec::typed(TypedClass::C1, lo, coins, Extension::WindowOnly)
}

fn snap(x: f64) -> f64 {
    if x.abs() < EXACT_TOL {
        0.0
    } else if (x.abs() - 1.0).abs() < EXACT_TOL {
        x.signum()
    } else {
        x
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RandomForm {
    Typed(TypedClass),
    General,
}

/// Haar-distributed 2×2 unitary.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R) -> Op2 {
    let u: f64 = rng.random();
    let (c, s) = (u.sqrt(), (1.0 - u).sqrt());
    let [alpha, psi, chi]: [f64; 3] = std::array::from_fn(|_| rng.random::<f64>() * 2.0 * PI);
    let g = cis(alpha);
    Op2::new(
        g * cis(psi) * c,
        g * cis(chi) * s,
        -g * cis(-chi) * s,
        g * cis(-psi) * c,
    )
}

/// Seeded random walk. Under `Periodic(p)` only `p` sites are drawn and
/// repeated over the window, whose length must be a multiple of `p`.
pub fn random_walk(seed: u64, window: (i64, i64), form: RandomForm, extension: Extension) -> Result<WalkSpec> {
    let (lo, hi) = window;
    if hi < lo {
        return Err(Error::InvalidSpec("empty window".into()));
    }
    let len = (hi - lo + 1) as usize;
    let drawn = match extension {
        Extension::Periodic(p) if p > 0 => p.min(len),
        _ => len,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let form = match form {
        RandomForm::Typed(k) => {
            let base: Vec<Coin2> = (0..drawn)
                .map(|_| Coin2::from_matrix(&random_unitary(&mut rng)))
                .collect();
            Form::Typed(k, (0..len).map(|i| base[i % drawn]).collect())
        }
        RandomForm::General => {
            let base: Vec<SiteBases> = (0..drawn).map(|_| random_bases(&mut rng)).collect();
            Form::General((0..len).map(|i| base[i % drawn]).collect())
        }
    };
    WalkSpec::new(form, lo, extension)
}

fn random_bases<R: Rng + ?Sized>(rng: &mut R) -> SiteBases {
    let v = random_unitary(rng);
    let z = random_unitary(rng);
    let col = |m: &Op2, j: usize| -> Ket { m.column(j).into_owned() };
    SiteBases {
        xi_plus: col(&v, 0),
        xi_minus: col(&v, 1),
        zeta_minus: col(&z, 0),
        zeta_plus: col(&z, 1),
    }
}

/// Random phases `2πk/den` drawn uniformly from the `den` grid points.
pub fn random_grid_angles<R: Rng + ?Sized>(rng: &mut R, count: usize, den: i64) -> Vec<Angle> {
    (0..count)
        .map(|_| Angle::pi_frac(2 * rng.random_range(0..den), den))
        .collect()
}
