//! Matrix-free evolution of finitely supported states.
//!
//! Support grows by at most one site per step on each side, so evolving a
//! finitely supported state is exact on the infinite line; no truncation is
//! involved unless the walk is [`Extension::WindowOnly`].

use std::collections::BTreeMap;

use crate::canonical::{apply_equivalence, SiteUnitaryFamily};
use crate::error::{Error, Result};
use crate::linalg::{inner, max_abs, Ket, C64, ZERO};
use crate::walk::{Extension, WalkSpec, EXACT_TOL};

#[derive(Clone, Debug, PartialEq)]
pub struct State {
    amps: BTreeMap<i64, Ket>,
}

impl State {
    /// Normalized state at one site.
    pub fn localized(site: i64, first: C64, second: C64) -> Result<State> {
        State::from_amplitudes(BTreeMap::from([(site, Ket::new(first, second))]))
    }

    /// Normalizes the given amplitudes.
    pub fn from_amplitudes(amps: BTreeMap<i64, Ket>) -> Result<State> {
        let norm = amps.values().map(|v| v.norm_squared()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidState("state has zero or non-finite norm".into()));
        }
        let scale = C64::new(1.0 / norm, 0.0);
        Ok(State {
            amps: amps.into_iter().map(|(n, v)| (n, v * scale)).collect(),
        })
    }

    pub fn amplitudes(&self) -> &BTreeMap<i64, Ket> {
        &self.amps
    }

    pub fn get(&self, n: i64) -> Ket {
        self.amps.get(&n).copied().unwrap_or_else(|| Ket::new(ZERO, ZERO))
    }

    pub fn norm_squared(&self) -> f64 {
        self.amps.values().map(|v| v.norm_squared()).sum()
    }

    pub fn support(&self) -> Option<(i64, i64)> {
        Some((*self.amps.keys().next()?, *self.amps.keys().next_back()?))
    }

    pub fn probabilities(&self) -> BTreeMap<i64, f64> {
        self.amps.iter().map(|(n, v)| (*n, v.norm_squared())).collect()
    }

    /// `W ψ`, with `W` extended like the walk extension `ext`.
    pub fn transformed(&self, family: &SiteUnitaryFamily, ext: Extension) -> Result<State> {
        let mut amps = BTreeMap::new();
        for (n, v) in &self.amps {
            let u = family
                .at(*n, ext)
                .ok_or(Error::SupportEscapedWindow { site: *n })?;
            amps.insert(*n, u * v);
        }
        Ok(State { amps })
    }
}

/// One application of the walk.
pub fn step(w: &WalkSpec, psi: &State) -> Result<State> {
    let mut out: BTreeMap<i64, Ket> = BTreeMap::new();
    for (&n, v) in &psi.amps {
        let here = w.bases_at(n).ok_or(Error::SupportEscapedWindow { site: n })?;
        let moves = [
            (n - 1, inner(&here.zeta_minus, v), true),
            (n + 1, inner(&here.zeta_plus, v), false),
        ];
        for (target, coef, leftward) in moves {
            if coef == ZERO {
                continue;
            }
            let there = w
                .bases_at(target)
                .ok_or(Error::SupportEscapedWindow { site: target })?;
            let arrive = if leftward { there.xi_plus } else { there.xi_minus };
            *out.entry(target).or_insert_with(|| Ket::new(ZERO, ZERO)) += arrive * coef;
        }
    }
    out.retain(|_, v| v[0] != ZERO || v[1] != ZERO);
    Ok(State { amps: out })
}

/// `U^t ψ`.
pub fn evolve(w: &WalkSpec, psi: &State, t: usize) -> Result<State> {
    let mut cur = psi.clone();
    for _ in 0..t {
        cur = step(w, &cur)?;
    }
    Ok(cur)
}

/// States at times `0..=t`.
pub fn trajectory(w: &WalkSpec, psi: &State, t: usize) -> Result<Vec<State>> {
    let mut out = Vec::with_capacity(t + 1);
    out.push(psi.clone());
    for _ in 0..t {
        let next = step(w, out.last().expect("nonempty"))?;
        out.push(next);
    }
    Ok(out)
}

/// `μ_t(n) = ‖Pₙ U^t ψ₀‖²`.
pub fn distribution(w: &WalkSpec, psi0: &State, t: usize) -> Result<BTreeMap<i64, f64>> {
    Ok(evolve(w, psi0, t)?.probabilities())
}

/// Largest `|μ⁽¹⁾_t(n) − μ⁽²⁾_t(n)|` over `t ≤ steps` between `(w, ψ₀)` and
/// `(W w W*, W ψ₀)`.
pub fn verify_equivalence_distributions(
    w: &WalkSpec,
    family: &SiteUnitaryFamily,
    psi0: &State,
    steps: usize,
) -> Result<f64> {
    let w2 = apply_equivalence(w, family)?;
    let mut a = psi0.clone();
    let mut b = psi0.transformed(family, w.extension())?;
    let mut worst = max_gap(&a, &b);
    for _ in 0..steps {
        a = step(w, &a)?;
        b = step(&w2, &b)?;
        worst = worst.max(max_gap(&a, &b));
    }
    Ok(worst)
}

fn max_gap(a: &State, b: &State) -> f64 {
    let (pa, pb) = (a.probabilities(), b.probabilities());
    pa.keys()
        .chain(pb.keys())
        .map(|n| (pa.get(n).copied().unwrap_or(0.0) - pb.get(n).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}

/// Whether `U_{n±1,n}` is the same at every site of a walk defined on all of ℤ.
pub fn is_translation_invariant(w: &WalkSpec) -> bool {
    if w.extension() == Extension::WindowOnly {
        return false;
    }
    let n0 = w.window().0;
    let (l0, r0) = match (w.left_block(n0), w.right_block(n0)) {
        (Some(l), Some(r)) => (l, r),
        _ => return false,
    };
    w.sites().all(|n| match (w.left_block(n), w.right_block(n)) {
        (Some(l), Some(r)) => max_abs(&(l - l0)) <= EXACT_TOL && max_abs(&(r - r0)) <= EXACT_TOL,
        _ => false,
    })
}
