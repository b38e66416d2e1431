#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64 as C;
use rand::Rng;

use qwalk::{Amp, Angle, Coin2, Extension, TypedClass, WalkSpec};

pub type Dense = DMatrix<C>;

/// Dense ring matrix of a class-1 walk straight from the coin entries:
/// site `n` sends `a ψ₁ + b ψ₂` to `e₁` at `n − 1` and `c ψ₁ + d ψ₂` to `e₂` at `n + 1`.
pub fn c1_ring(coins: &[[C; 4]]) -> Dense {
    let len = coins.len();
    let mut m = Dense::zeros(2 * len, 2 * len);
    for (i, [a, b, c, d]) in coins.iter().enumerate() {
        let left = (i + len - 1) % len;
        let right = (i + 1) % len;
        m[(2 * left, 2 * i)] += *a;
        m[(2 * left, 2 * i + 1)] += *b;
        m[(2 * right + 1, 2 * i)] += *c;
        m[(2 * right + 1, 2 * i + 1)] += *d;
    }
    m
}

/// Dense ring matrix of any walk from its site vectors.
pub fn ring_from_bases(w: &WalkSpec) -> Dense {
    let (lo, hi) = w.window();
    let len = (hi - lo + 1) as usize;
    let mut m = Dense::zeros(2 * len, 2 * len);
    for n in lo..=hi {
        let i = (n - lo) as usize;
        let here = w.bases_at(n).unwrap();
        let left = w.bases_at(n - 1).unwrap();
        let right = w.bases_at(n + 1).unwrap();
        let (li, ri) = ((i + len - 1) % len, (i + 1) % len);
        for r in 0..2 {
            for c in 0..2 {
                m[(2 * li + r, 2 * i + c)] += left.xi_plus[r] * here.zeta_minus[c].conj();
                m[(2 * ri + r, 2 * i + c)] += right.xi_minus[r] * here.zeta_plus[c].conj();
            }
        }
    }
    m
}

pub fn max_abs(m: &Dense) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn entries(coin: &Coin2) -> [C; 4] {
    [coin.a.value(), coin.b.value(), coin.c.value(), coin.d.value()]
}

/// `(r, μ, ν, δ)` read off with atan2; `r` averaged over the off-diagonal moduli.
pub fn polar_oracle(e: &[C; 4]) -> (f64, f64, f64, f64) {
    let [a, b, c, d] = *e;
    let r = 0.5 * (b.norm() + c.norm());
    let det = a * d - b * c;
    (r, c.im.atan2(c.re), b.im.atan2(b.re), det.im.atan2(det.re))
}

fn dist_mod(x: f64, m: f64) -> f64 {
    let y = x.rem_euclid(m);
    y.min(m - y)
}

/// Grid search over λ ∈ [0, π) at step `π/steps`: propagate θ from the first
/// site with `r > 0` and test `θₙ − λ ≡ μₙ (mod π)` at every such site.
pub fn grid_oracle(coins: &[[C; 4]], steps: usize, tol: f64) -> bool {
    let polar: Vec<_> = coins.iter().map(polar_oracle).collect();
    let constrained: Vec<usize> = (0..coins.len()).filter(|&i| polar[i].0 > 1e-12).collect();
    let Some(&first) = constrained.first() else {
        return true;
    };
    (0..steps).any(|k| {
        let lam = PI * k as f64 / steps as f64;
        let mut theta = polar[first].1 + lam;
        for &(r, mu, _, delta) in &polar[first + 1..] {
            theta += 2.0 * lam + delta;
            if r > 1e-12 && dist_mod(theta - lam - mu, PI) > tol {
                return false;
            }
        }
        true
    })
}

/// Coin `[[e^{iσ}s, e^{iν}r], [e^{iμ}r, e^{iτ}s]]` with `τ = δ − σ` and,
/// for `r > 0`, `ν = δ − μ − π`. Angles in units of π when `exact`.
pub struct CoinPhases {
    pub r: f64,
    pub sigma: f64,
    pub mu: f64,
    pub delta: f64,
}

impl CoinPhases {
    pub fn coin(&self, exact_den: Option<i64>) -> Coin2 {
        let s = (1.0 - self.r * self.r).max(0.0).sqrt();
        let nu = self.delta - self.mu - 1.0;
        let tau = self.delta - self.sigma;
        let amp = |mag: f64, x: f64| -> Amp {
            match exact_den {
                Some(den) => Amp::polar(mag, Angle::pi_frac((x * den as f64).round() as i64, den)),
                None => Amp::new(mag * (PI * x).cos(), mag * (PI * x).sin()),
            }
        };
        if self.r == 0.0 {
            Coin2::new(amp(1.0, self.sigma), 0.0, 0.0, amp(1.0, tau))
        } else {
            Coin2::new(amp(s, self.sigma), amp(self.r, nu), amp(self.r, self.mu), amp(s, tau))
        }
    }
}

/// A class-1 window-only instance whose phases are multiples of `π/den`.
///
/// Sites with `r > 0` are spaced by gaps drawn from `gaps`, every other site
/// has a diagonal coin. With `szegedy` the phases are derived from a chosen
/// `λ` and edge phases `θ`, so a solution exists by construction.
pub fn rational_instance<R: Rng>(rng: &mut R, len: usize, gaps: &[usize], den: i64, szegedy: bool, exact: bool) -> WalkSpec {
    let mut constrained = vec![false; len];
    let mut pos = rng.random_range(0..2usize.min(len));
    while pos < len {
        constrained[pos] = true;
        pos += gaps[rng.random_range(0..gaps.len())];
    }
    let unit = |rng: &mut R| rng.random_range(0..2 * den) as f64 / den as f64;
    let lam = unit(rng);
    let mut theta_prev = unit(rng);
    let coins = (0..len)
        .map(|i| {
            let r = if constrained[i] { [0.3, 0.5, FRAC, 0.8][rng.random_range(0..4)] } else { 0.0 };
            let sigma = unit(rng);
            let (mu, delta) = if szegedy {
                let (mu, theta) = if constrained[i] {
                    let mu = unit(rng);
                    (mu, lam + mu + rng.random_range(0..2) as f64)
                } else {
                    (0.0, unit(rng))
                };
                let delta = theta - theta_prev - 2.0 * lam;
                theta_prev = theta;
                (mu, delta)
            } else {
                (unit(rng), unit(rng))
            };
            CoinPhases { r, sigma, mu, delta }.coin(exact.then_some(den))
        })
        .collect();
    let lo = -(rng.random_range(0..len) as i64);
    WalkSpec::typed(TypedClass::C1, lo, coins, Extension::WindowOnly).unwrap()
}

const FRAC: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Like [`rational_instance`] with real-valued phases.
pub fn float_instance<R: Rng>(rng: &mut R, len: usize, zero_prob: f64, szegedy: bool) -> WalkSpec {
    let lam: f64 = rng.random::<f64>();
    let mut theta_prev: f64 = rng.random::<f64>() * 2.0;
    let coins = (0..len)
        .map(|_| {
            let constrained = rng.random::<f64>() >= zero_prob;
            let r = if constrained { 0.05 + 0.9 * rng.random::<f64>() } else { 0.0 };
            let sigma = rng.random::<f64>() * 2.0;
            let (mu, delta) = if szegedy {
                let (mu, theta) = if constrained {
                    let mu = rng.random::<f64>() * 2.0;
                    (mu, lam + mu + rng.random_range(0..2) as f64)
                } else {
                    (0.0, rng.random::<f64>() * 2.0)
                };
                let delta = theta - theta_prev - 2.0 * lam;
                theta_prev = theta;
                (mu, delta)
            } else {
                (rng.random::<f64>() * 2.0, rng.random::<f64>() * 2.0)
            };
            CoinPhases { r, sigma, mu, delta }.coin(None)
        })
        .collect();
    WalkSpec::typed(TypedClass::C1, -(len as i64) / 2, coins, Extension::WindowOnly).unwrap()
}
